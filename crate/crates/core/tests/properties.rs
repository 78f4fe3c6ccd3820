use proptest::prelude::*;

use loctime::cauchy::CauchyStepLaw;
use loctime::experiments::ExperimentConfig;
use loctime::oracles::{first_return_law, renewal_xi_law, ExcursionLaw};
use loctime::projections::Projection1D;
use loctime::walk::run_path;
use loctime::{LocalTimeLedger, SubsetSpec};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn parity_and_determinism(d in 1usize..6, seed in any::<u64>(), id in 0u64..1000, n in 0u64..3000) {
        let mut first = Vec::new();
        let end = run_path(d, seed, id, n, |t, s| {
            assert_eq!(s.coord_sum().rem_euclid(2) as u64, t % 2);
            first.push(s.clone());
        }).unwrap();
        prop_assert_eq!(first.len() as u64, n);
        let mut k = 0;
        let again = run_path(d, seed, id, n, |_, s| {
            assert_eq!(s, &first[k]);
            k += 1;
        }).unwrap();
        prop_assert_eq!(end, again);
    }

    #[test]
    fn max_local_time_is_monotone(seed in any::<u64>(), r in 1.0f64..20.0) {
        let ball = SubsetSpec::ball(r).unwrap();
        let inner = SubsetSpec::intersection(vec![ball.clone(), SubsetSpec::line(1, 1).unwrap()]).unwrap();
        let mut ledger = LocalTimeLedger::new();
        let mut last = (0, 0, 0);
        run_path(2, seed, 0, 4000, |t, s| {
            ledger.record(s.coords());
            if t % 250 == 0 {
                let now = (ledger.max_over(&inner), ledger.max_over(&ball), ledger.max_local_time().unwrap().1);
                assert!(now.0 <= now.1 && now.1 <= now.2);
                assert!(now.0 >= last.0 && now.1 >= last.1 && now.2 >= last.2);
                last = now;
            }
        }).unwrap();
    }

    #[test]
    fn hyperplane_visits_are_projected_zeros(
        a in prop::collection::vec(-4i64..=4, 2..6).prop_filter("nonzero", |a| a.iter().any(|&c| c != 0)),
        seed in any::<u64>(),
    ) {
        let spec = SubsetSpec::hyperplane(a.clone()).unwrap();
        let p = Projection1D::from_subset(&spec).unwrap();
        let law = loctime::StepLaw::new(a.len()).unwrap();
        let mut src = law.source(loctime::walk::walker_rng(seed, 0));
        let (mut pos, mut z) = (vec![0i64; a.len()], 0i64);
        for _ in 0..2000 {
            let s = src.sample_step();
            pos[s.axis()] += s.sign();
            z += p.increment(s);
            prop_assert_eq!(spec.contains(&pos).unwrap(), z == 0);
        }
    }

    #[test]
    fn config_text_roundtrip(
        d in 2usize..5,
        walkers in 1u64..500,
        seed in any::<u64>(),
        widen in 1.0f64..5.0,
        sched in prop::collection::btree_set(1u64..10_000_000, 1..5),
    ) {
        let sched: Vec<String> = sched.iter().map(u64::to_string).collect();
        let form: Vec<String> = (0..d).map(|i| if i == 0 { "1".into() } else { "0".into() }).collect();
        let text = format!(
            "theorem = custom\nd = {d}\nsubset = hyp:{}\nschedule = {}\nwalkers = {walkers}\nseed = {seed}\nstatistic = max-local-time\nnormalization = logn\nwiden = {widen:?}\n",
            form.join(","),
            sched.join(", ")
        );
        let cfg = ExperimentConfig::parse(&text).unwrap();
        let back = ExperimentConfig::parse(&cfg.to_text()).unwrap();
        prop_assert_eq!(&back, &cfg);
        prop_assert_eq!(back.to_text(), cfg.to_text());
    }

    #[test]
    fn cauchy_law_is_symmetric(k in 1i64..100_000) {
        let l = CauchyStepLaw;
        prop_assert_eq!(l.pmf(2 * k), l.pmf(-2 * k));
        prop_assert_eq!(l.pmf(2 * k + 1), 0.0);
        let tail = l.tail_beyond(k as u64);
        prop_assert!((tail - (2.0 / std::f64::consts::PI) / (2 * k + 1) as f64).abs() < 1e-15);
    }

    #[test]
    fn excursion_law_mean_is_one(p in 0.01f64..=1.0) {
        let l = ExcursionLaw::new(p).unwrap();
        prop_assert!((l.mean() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn local_time_laws_are_probability_vectors() {
    for d in 1..=4 {
        let law = first_return_law(d, 300).unwrap();
        assert!(law.renewal_residual() < 1e-12);
        assert!(law.returned_by(300) <= 1.0);
        for n in [1usize, 2, 17, 300] {
            let pmf = renewal_xi_law(d, n).unwrap();
            assert!(
                (pmf.iter().sum::<f64>() - 1.0).abs() < 1e-12,
                "d={d}, n={n}"
            );
            assert!(pmf.iter().all(|&p| p >= -1e-15));
        }
    }
}

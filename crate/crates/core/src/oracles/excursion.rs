//! Law of the number of visits to a fixed site during one excursion from the
//! origin, given the hit-before-return probability `p`.

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExcursionLaw {
    p: f64,
}

impl ExcursionLaw {
    pub fn new(p: f64) -> Result<Self> {
        if !(p > 0.0 && p <= 1.0) {
            return Err(Error::Domain(format!(
                "excursion law needs 0 < p <= 1, got {p}"
            )));
        }
        Ok(ExcursionLaw { p })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        1.0 - self.p
    }

    /// `P(Y = k)`: `1 - p` at 0, `(1-p)^{k-1} p^2` beyond.
    pub fn pmf(&self, k: u64) -> f64 {
        if k == 0 {
            self.q()
        } else {
            self.q().powi((k - 1) as i32) * self.p * self.p
        }
    }

    /// `P(Y > k) = p (1-p)^k`.
    pub fn survival(&self, k: u64) -> f64 {
        self.p * self.q().powi(k as i32)
    }

    /// pmf on `0..=k_max`.
    pub fn pmf_table(&self, k_max: usize) -> Vec<f64> {
        (0..=k_max as u64).map(|k| self.pmf(k)).collect()
    }

    pub fn mean(&self) -> f64 {
        1.0
    }

    /// Draw from the law with a uniform variate `u` in `[0, 1)`.
    pub fn sample(&self, u: f64) -> u64 {
        // Y > k  <=>  u >= 1 - p q^k
        let tail = 1.0 - u;
        if tail > self.p {
            return 0;
        }
        if self.p == 1.0 {
            return 1;
        }
        // smallest k >= 1 with p q^k < tail
        ((tail / self.p).ln() / self.q().ln()).floor() as u64 + 1
    }
}

/// Outcome of the moment generating function check at `z* = log(2/(1+q))`.
#[derive(Clone, Copy, Debug)]
pub struct MgfCheck {
    pub z: f64,
    pub value: f64,
    /// `q e^{z*} = 2q/(1+q)`, the geometric ratio of the series
    pub ratio: f64,
    pub terms: usize,
}

/// Sum `E exp(z* Y)` term by term; the result must equal `1 + p`.
pub fn excursion_mgf_at_zstar(p: f64) -> Result<MgfCheck> {
    let law = ExcursionLaw::new(p)?;
    let q = law.q();
    let z = (2.0 / (1.0 + q)).ln();
    let ez = z.exp();
    let ratio = q * ez;
    debug_assert!(ratio < 1.0);
    let mut value = q;
    let mut term = ez * p * p;
    let mut terms = 1;
    while term > 1e-18 * value {
        value += term;
        term *= ratio;
        terms += 1;
        if ratio == 0.0 {
            break;
        }
    }
    let residual = (value - (1.0 + p)).abs();
    if residual > 1e-10 {
        return Err(Error::Numeric {
            what: "excursion mgf",
            residual,
            tolerance: 1e-10,
        });
    }
    Ok(MgfCheck {
        z,
        value,
        ratio,
        terms,
    })
}

/// Exact law of `Y_1 + ... + Y_n` on `0..=k_max` (mass above `k_max` dropped).
pub fn excursion_sum_law(law: &ExcursionLaw, n: usize, k_max: usize) -> Vec<f64> {
    let base = law.pmf_table(k_max);
    let mut acc = vec![0.0; k_max + 1];
    acc[0] = 1.0;
    for _ in 0..n {
        let mut next = vec![0.0; k_max + 1];
        for (i, &a) in acc.iter().enumerate() {
            if a == 0.0 {
                continue;
            }
            for (j, &b) in base[..=k_max - i].iter().enumerate() {
                next[i + j] += a * b;
            }
        }
        acc = next;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn half_probability_values() {
        let l = ExcursionLaw::new(0.5).unwrap();
        assert_eq!(l.pmf(0), 0.5);
        assert_eq!(l.pmf(1), 0.25);
        assert_eq!(l.pmf(2), 0.125);
    }

    #[test]
    fn degenerate_endpoint() {
        let l = ExcursionLaw::new(1.0).unwrap();
        assert_eq!(l.pmf(1), 1.0);
        assert_eq!(l.pmf(0), 0.0);
        assert_eq!(l.pmf(2), 0.0);
        assert_eq!(l.sample(0.3), 1);
    }

    #[test]
    fn domain_errors() {
        for p in [0.0, -0.1, 1.5, f64::NAN] {
            assert!(matches!(ExcursionLaw::new(p), Err(Error::Domain(_))));
        }
    }

    #[test]
    fn mgf_examples() {
        let h = excursion_mgf_at_zstar(0.5).unwrap();
        assert_relative_eq!(h.z, (4.0f64 / 3.0).ln(), max_relative = 1e-15);
        assert!((h.value - 1.5).abs() < 1e-12);
        let one = excursion_mgf_at_zstar(1.0).unwrap();
        assert!((one.z - 2f64.ln()).abs() < 1e-15 && (one.value - 2.0).abs() < 1e-15);
        let small = excursion_mgf_at_zstar(0.1).unwrap();
        assert!((small.value - 1.1).abs() < 1e-10);
        assert!(small.ratio < 1.0);
    }

    #[test]
    fn sampler_inverts_survival() {
        let l = ExcursionLaw::new(0.3).unwrap();
        for k in 0..20u64 {
            // u just below and above the cut 1 - P(Y > k)
            let cut = 1.0 - l.survival(k);
            assert!(l.sample(cut - 1e-12) <= k);
            assert!(l.sample(cut + 1e-12) > k);
        }
    }

    #[test]
    fn sum_law_of_ten_half_excursions() {
        let l = ExcursionLaw::new(0.5).unwrap();
        let s = excursion_sum_law(&l, 10, 200);
        let total: f64 = s.iter().sum();
        assert!((total - 1.0).abs() < 1e-12);
        let mean: f64 = s.iter().enumerate().map(|(k, p)| k as f64 * p).sum();
        assert!((mean - 10.0).abs() < 1e-9);
    }

    proptest! {
        #[test]
        fn pmf_sums_to_one_with_unit_mean(p in 0.01f64..=1.0) {
            let l = ExcursionLaw::new(p).unwrap();
            let k_max = ((40.0 / p) as usize).max(50).min(20_000);
            let t = l.pmf_table(k_max);
            let mass: f64 = t.iter().sum::<f64>() + l.survival(k_max as u64);
            let mean: f64 = t.iter().enumerate().map(|(k, x)| k as f64 * x).sum();
            prop_assert!((mass - 1.0).abs() < 1e-12);
            prop_assert!((mean - 1.0).abs() < 1e-8);
            prop_assert!(excursion_mgf_at_zstar(p).is_ok());
        }
    }
}

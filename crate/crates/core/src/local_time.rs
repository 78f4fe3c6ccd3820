//! Visit counts `xi(x, n) = #{0 < k <= n : S_k = x}` and their maxima.
//!
//! The starting position `S_0` is never recorded; callers feed sites from
//! `t = 1` on.

use std::io::Write;

use rustc_hash::FxHashMap;

use crate::error::Result;
use crate::subsets::SubsetSpec;
use crate::walk::LatticeSite;

/// Unrestricted ledgers are refused beyond this many steps.
pub const UNRESTRICTED_MAX_STEPS: u64 = 10_000_000;

#[derive(Clone, Debug, Default)]
pub struct LocalTimeLedger {
    counts: FxHashMap<LatticeSite, u64>,
    restriction: Option<SubsetSpec>,
    total_recorded: u64,
}

/// How two finished ledgers are combined.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Merge {
    Sum,
    Max,
}

impl LocalTimeLedger {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn restricted(spec: SubsetSpec) -> Self {
        LocalTimeLedger {
            restriction: Some(spec),
            ..Self::default()
        }
    }

    pub fn restriction(&self) -> Option<&SubsetSpec> {
        self.restriction.as_ref()
    }

    /// Count a visit to `site`. Returns the updated count, or 0 when the
    /// site lies outside the restriction.
    pub fn record(&mut self, site: &[i64]) -> u64 {
        if let Some(r) = &self.restriction {
            if !r.contains_unchecked(site) {
                return 0;
            }
        }
        self.record_unchecked(site)
    }

    /// Count a visit the caller already knows to be admissible.
    #[inline]
    pub fn record_unchecked(&mut self, site: &[i64]) -> u64 {
        self.total_recorded += 1;
        if let Some(c) = self.counts.get_mut(site) {
            *c += 1;
            *c
        } else {
            self.counts.insert(LatticeSite::new(site.to_vec()), 1);
            1
        }
    }

    pub fn count(&self, site: &[i64]) -> u64 {
        self.counts.get(site).copied().unwrap_or(0)
    }

    pub fn total_recorded(&self) -> u64 {
        self.total_recorded
    }

    pub fn distinct_sites(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&LatticeSite, u64)> {
        self.counts.iter().map(|(s, &c)| (s, c))
    }

    /// Site of largest count, ties going to the lexicographically smallest
    /// site. `None` for an empty ledger.
    pub fn max_local_time(&self) -> Option<(LatticeSite, u64)> {
        self.max_where(|_| true)
    }

    /// Maximum over the recorded sites satisfying `pred`.
    pub fn max_where<F: Fn(&[i64]) -> bool>(&self, pred: F) -> Option<(LatticeSite, u64)> {
        let mut best: Option<(&LatticeSite, u64)> = None;
        for (site, &c) in &self.counts {
            if !pred(site.coords()) {
                continue;
            }
            best = match best {
                Some((s, b)) if b > c || (b == c && s < site) => Some((s, b)),
                _ => Some((site, c)),
            };
        }
        best.map(|(s, c)| (s.clone(), c))
    }

    /// Maximal local time over `spec`, 0 when nothing there was visited.
    pub fn max_over(&self, spec: &SubsetSpec) -> u64 {
        self.max_where(|s| spec.contains_unchecked(s))
            .map_or(0, |(_, c)| c)
    }

    pub fn merge(&mut self, other: &LocalTimeLedger, how: Merge) {
        for (site, &c) in &other.counts {
            let e = self.counts.entry(site.clone()).or_insert(0);
            *e = match how {
                Merge::Sum => *e + c,
                Merge::Max => (*e).max(c),
            };
        }
        self.total_recorded = self.counts.values().sum();
    }

    /// Entries sorted lexicographically by site.
    pub fn sorted(&self) -> Vec<(&LatticeSite, u64)> {
        let mut v: Vec<_> = self.iter().collect();
        v.sort_by(|a, b| a.0.cmp(b.0));
        v
    }

    /// CSV rows `x1,...,xd,count` in lexicographic site order.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        let dim = self.counts.keys().next().map_or(0, LatticeSite::dim);
        let header: Vec<String> = (1..=dim).map(|i| format!("x{i}")).collect();
        writeln!(out, "{},count", header.join(","))?;
        for (site, c) in self.sorted() {
            for x in site.coords() {
                write!(out, "{x},")?;
            }
            writeln!(out, "{c}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::walk::run_path;

    #[test]
    fn counts_accumulate() {
        let mut l = LocalTimeLedger::new();
        assert_eq!(l.record(&[0, 0]), 1);
        assert_eq!(l.record(&[0, 0]), 2);
        assert_eq!(l.count(&[0, 0]), 2);
        assert_eq!(l.total_recorded(), 2);
    }

    #[test]
    fn restriction_filters_sites() {
        let mut l = LocalTimeLedger::restricted(SubsetSpec::line(1, -1).unwrap());
        assert_eq!(l.record(&[1, 0]), 0);
        assert!(l.is_empty());
        assert_eq!(l.record(&[2, 2]), 1);
    }

    #[test]
    fn start_is_not_counted() {
        // a path returning to the origin at t = 4 and t = 8
        let path: [[i64; 2]; 8] = [
            [1, 0],
            [1, 1],
            [0, 1],
            [0, 0],
            [-1, 0],
            [-1, -1],
            [0, -1],
            [0, 0],
        ];
        let mut l = LocalTimeLedger::new();
        for s in &path {
            l.record(s);
        }
        assert_eq!(l.count(&[0, 0]), 2);
    }

    #[test]
    fn ties_break_lexicographically() {
        let mut l = LocalTimeLedger::new();
        for _ in 0..3 {
            l.record(&[1, 1]);
            l.record(&[0, 0]);
        }
        assert_eq!(l.max_local_time(), Some((LatticeSite::new(vec![0, 0]), 3)));
        let mut single = LocalTimeLedger::new();
        for _ in 0..5 {
            single.record(&[2, 0]);
        }
        assert_eq!(
            single.max_local_time(),
            Some((LatticeSite::new(vec![2, 0]), 5))
        );
        assert_eq!(LocalTimeLedger::new().max_local_time(), None);
    }

    #[test]
    fn unrestricted_total_equals_path_length() {
        let mut l = LocalTimeLedger::new();
        run_path(2, 3, 0, 5000, |_, s| {
            l.record(s.coords());
        })
        .unwrap();
        assert_eq!(l.total_recorded(), 5000);
        assert_eq!(l.iter().map(|(_, c)| c).sum::<u64>(), 5000);
    }

    #[test]
    fn restricted_run_matches_post_hoc_maximum() {
        let spec = SubsetSpec::parse("and(ball:30,line:2,-1)").unwrap();
        for seed in 0..20 {
            let mut full = LocalTimeLedger::new();
            let mut part = LocalTimeLedger::restricted(spec.clone());
            let mut maxima = Vec::new();
            run_path(2, seed, 1, 20_000, |t, s| {
                full.record(s.coords());
                part.record(s.coords());
                if t % 5000 == 0 {
                    maxima.push(part.max_local_time().map_or(0, |m| m.1));
                }
            })
            .unwrap();
            assert_eq!(
                full.max_over(&spec),
                part.max_local_time().map_or(0, |m| m.1)
            );
            assert!(maxima.windows(2).all(|w| w[0] <= w[1]));
            // monotone in the set
            let line = SubsetSpec::line(2, -1).unwrap();
            assert!(full.max_over(&spec) <= full.max_over(&line));
            assert!(full.max_over(&line) <= full.max_local_time().unwrap().1);
        }
    }

    #[test]
    fn merge_sum_and_max() {
        let mut a = LocalTimeLedger::new();
        let mut b = LocalTimeLedger::new();
        a.record(&[0]);
        a.record(&[0]);
        b.record(&[0]);
        b.record(&[1]);
        let mut s = a.clone();
        s.merge(&b, Merge::Sum);
        assert_eq!(
            (s.count(&[0]), s.count(&[1]), s.total_recorded()),
            (3, 1, 4)
        );
        a.merge(&b, Merge::Max);
        assert_eq!((a.count(&[0]), a.count(&[1])), (2, 1));
    }

    #[test]
    fn csv_is_sorted() {
        let mut l = LocalTimeLedger::new();
        for s in [[1, 0], [-1, 2], [0, 0], [-1, 2]] {
            l.record(&s);
        }
        let mut buf = Vec::new();
        l.write_csv(&mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "x1,x2,count\n-1,2,2\n0,0,1\n1,0,1\n"
        );
    }
}

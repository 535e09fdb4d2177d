//! Range scans over practicality and f(n): PR(x), N(x, y), ratio grids and
//! short-interval checks.
//!
//! Every scan factors through a shared [`SpfTable`] and is split into
//! segments by [`ScanConfig`]; counts are exact integers and only the
//! normalized ratios are floating point.

use std::sync::Arc;

use crate::arith::{isqrt, SpfTable, MAX_INPUT, MAX_TABLE_LIMIT};
use crate::error::{Error, Result};
use crate::practical::{self, decompose_with};
use crate::scan::ScanConfig;

/// Practicality bits for the half-open range `[lo, hi)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SieveSegment {
    lo: u64,
    hi: u64,
    words: Vec<u64>,
}

impl SieveSegment {
    fn empty(lo: u64, hi: u64) -> Self {
        SieveSegment {
            lo,
            hi,
            words: vec![0; (hi - lo).div_ceil(64) as usize],
        }
    }

    fn set(&mut self, n: u64) {
        let k = n - self.lo;
        self.words[(k / 64) as usize] |= 1 << (k % 64);
    }

    pub fn lo(&self) -> u64 {
        self.lo
    }

    pub fn hi(&self) -> u64 {
        self.hi
    }

    pub fn len(&self) -> u64 {
        self.hi - self.lo
    }

    pub fn is_empty(&self) -> bool {
        self.hi == self.lo
    }

    /// Whether `n` (which must lie in `[lo, hi)`) is practical.
    pub fn get(&self, n: u64) -> bool {
        assert!((self.lo..self.hi).contains(&n), "{n} outside segment");
        let k = n - self.lo;
        self.words[(k / 64) as usize] >> (k % 64) & 1 == 1
    }

    pub fn count(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    /// Practical numbers in the segment, ascending.
    pub fn practical_numbers(&self) -> impl Iterator<Item = u64> + '_ {
        self.words.iter().enumerate().flat_map(move |(i, &w)| {
            let base = self.lo + i as u64 * 64;
            BitIter(w).map(move |b| base + b as u64)
        })
    }

    /// Appends `next`, which must start where `self` ends.
    pub fn concat(&self, next: &SieveSegment) -> SieveSegment {
        assert_eq!(self.hi, next.lo, "segments are not adjacent");
        let mut out = SieveSegment::empty(self.lo, next.hi);
        for n in self.practical_numbers().chain(next.practical_numbers()) {
            out.set(n);
        }
        out
    }
}

struct BitIter(u64);

impl Iterator for BitIter {
    type Item = u32;

    fn next(&mut self) -> Option<u32> {
        if self.0 == 0 {
            return None;
        }
        let b = self.0.trailing_zeros();
        self.0 &= self.0 - 1;
        Some(b)
    }
}

/// One sample of N(x, y) with its normalization `count · log y / x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CountPoint {
    pub x: u64,
    pub y: u64,
    pub count: u64,
    pub normalized: f64,
}

impl CountPoint {
    pub fn new(x: u64, y: u64, count: u64) -> Self {
        CountPoint {
            x,
            y,
            count,
            normalized: count as f64 * (y as f64).ln() / x as f64,
        }
    }
}

/// A grid pair that fell outside `4 <= y <= x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RejectedPair {
    pub x: u64,
    pub y: u64,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RatioGrid {
    pub points: Vec<CountPoint>,
    pub rejected: Vec<RejectedPair>,
}

/// Outcome of checking `b < a + 2√a` for consecutive practical `a < b`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct WindowReport {
    pub limit: u64,
    /// Consecutive pairs examined.
    pub pairs: u64,
    pub violations: Vec<(u64, u64)>,
    /// The pair with the largest `(b − a)² / 4a`.
    pub tightest: Option<(u64, u64)>,
}

/// `true` iff `b < a + 2√a`, evaluated exactly as `(b − a)² < 4a`.
pub fn within_window(a: u64, b: u64) -> bool {
    debug_assert!(b > a);
    let gap = (b - a) as u128;
    gap * gap < 4 * a as u128
}

#[derive(Default)]
struct GapPartial {
    first: Option<u64>,
    last: Option<u64>,
    pairs: u64,
    violations: Vec<(u64, u64)>,
    tightest: Option<(u64, u64)>,
}

fn tighter(a: Option<(u64, u64)>, b: Option<(u64, u64)>) -> Option<(u64, u64)> {
    // compare (b−a)²/4a exactly: g1²·a2 vs g2²·a1
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some(p), Some(q)) => {
            let g1 = (p.1 - p.0) as u128;
            let g2 = (q.1 - q.0) as u128;
            if g2 * g2 * p.0 as u128 > g1 * g1 * q.0 as u128 {
                Some(q)
            } else {
                Some(p)
            }
        }
    }
}

impl GapPartial {
    fn push_pair(&mut self, a: u64, b: u64) {
        self.pairs += 1;
        if !within_window(a, b) {
            self.violations.push((a, b));
        }
        self.tightest = tighter(self.tightest, Some((a, b)));
    }

    fn merge(mut self, next: GapPartial) -> GapPartial {
        if let (Some(a), Some(b)) = (self.last, next.first) {
            self.push_pair(a, b);
        }
        self.pairs += next.pairs;
        self.violations.extend(next.violations);
        self.tightest = tighter(self.tightest, next.tightest);
        self.first = self.first.or(next.first);
        self.last = next.last.or(self.last);
        self
    }
}

/// A smallest-prime-factor table plus scan configuration, shared by the range
/// operations.
#[derive(Debug, Clone)]
pub struct Sieve {
    table: Arc<SpfTable>,
    config: ScanConfig,
}

impl Sieve {
    /// Builds a sieve covering `1..=limit`.
    pub fn new(limit: u64, config: ScanConfig) -> Result<Self> {
        if limit > MAX_TABLE_LIMIT {
            return Err(Error::capacity(
                "sieve limit",
                format!("{limit} exceeds {MAX_TABLE_LIMIT}"),
            ));
        }
        Ok(Sieve {
            table: Arc::new(SpfTable::new(limit.max(2))?),
            config,
        })
    }

    pub fn with_table(table: Arc<SpfTable>, config: ScanConfig) -> Self {
        Sieve { table, config }
    }

    pub fn table(&self) -> &SpfTable {
        &self.table
    }

    pub fn config(&self) -> &ScanConfig {
        &self.config
    }

    pub fn limit(&self) -> u64 {
        self.table.limit()
    }

    fn check_x(&self, what: &'static str, x: u64) -> Result<()> {
        if x == 0 || x > self.limit() {
            return Err(Error::domain(
                what,
                format!("{x} not in 1..={}", self.limit()),
            ));
        }
        Ok(())
    }

    /// Runs `f` over the segments of `[1, x]`, in parallel, returning results
    /// in segment order.
    pub fn map_range<T, F>(&self, x: u64, f: F) -> Result<Vec<T>>
    where
        T: Send,
        F: Fn(u64, u64, &SpfTable) -> Result<T> + Sync + Send,
    {
        self.check_x("x", x)?;
        let table = &*self.table;
        self.config.try_map_segments(1, x + 1, |a, b| f(a, b, table))
    }

    pub fn practical_flags(&self, lo: u64, hi: u64) -> Result<SieveSegment> {
        practical_flags(lo, hi, &self.table)
    }

    /// PR(x): number of practical `n <= x`.
    pub fn pr_count(&self, x: u64) -> Result<u64> {
        let parts = self.map_range(x, |a, b, t| Ok(practical_flags(a, b, t)?.count()))?;
        Ok(parts.into_iter().sum())
    }

    /// N(x, y): number of `n <= x` with f(n) >= y.
    pub fn n_count(&self, x: u64, y: u64) -> Result<u64> {
        if y == 0 {
            return Err(Error::domain("y", "must be at least 1"));
        }
        let parts = self.map_range(x, |a, b, t| {
            let mut c = 0u64;
            for n in a..b {
                if decompose_with(n, t)?.f_value >= y {
                    c += 1;
                }
            }
            Ok(c)
        })?;
        Ok(parts.into_iter().sum())
    }

    /// N(x, y) for every `(x, y)` in `xs × ys` with `4 <= y <= x`, from a
    /// single scan to the largest accepted `x`.
    pub fn ratio_grid(&self, xs: &[u64], ys: &[u64]) -> Result<RatioGrid> {
        let mut pairs = Vec::new();
        let mut rejected = Vec::new();
        for &x in xs {
            for &y in ys {
                let reason = if y < 4 {
                    Some(format!("y = {y} < 4"))
                } else if y > x {
                    Some(format!("y = {y} > x = {x}"))
                } else if x > self.limit() {
                    Some(format!("x = {x} exceeds sieve limit {}", self.limit()))
                } else {
                    None
                };
                match reason {
                    Some(reason) => rejected.push(RejectedPair { x, y, reason }),
                    None => pairs.push((x, y)),
                }
            }
        }
        let Some(x_max) = pairs.iter().map(|&(x, _)| x).max() else {
            return Ok(RatioGrid {
                points: Vec::new(),
                rejected,
            });
        };
        let pairs_ref = &pairs;
        let parts = self.map_range(x_max, |a, b, t| {
            let mut counts = vec![0u64; pairs_ref.len()];
            for n in a..b {
                let f = decompose_with(n, t)?.f_value;
                for (c, &(x, y)) in counts.iter_mut().zip(pairs_ref) {
                    if n <= x && f >= y {
                        *c += 1;
                    }
                }
            }
            Ok(counts)
        })?;
        let mut totals = vec![0u64; pairs.len()];
        for part in parts {
            for (t, c) in totals.iter_mut().zip(part) {
                *t += c;
            }
        }
        let points = pairs
            .iter()
            .zip(totals)
            .map(|(&(x, y), count)| CountPoint::new(x, y, count))
            .collect();
        Ok(RatioGrid { points, rejected })
    }

    /// PR(x) · log x / x.
    pub fn margenstern_ratio(&self, x: u64) -> Result<f64> {
        if x < 3 {
            return Err(Error::domain("x", format!("{x} < 3")));
        }
        let pr = self.pr_count(x)?;
        Ok(pr as f64 * (x as f64).ln() / x as f64)
    }

    /// Checks the short-interval property over all consecutive practical
    /// pairs `a < b <= limit`.
    pub fn window_report(&self, limit: u64) -> Result<WindowReport> {
        let parts = self.map_range(limit, |a, b, t| {
            let seg = practical_flags(a, b, t)?;
            let mut part = GapPartial::default();
            let mut prev: Option<u64> = None;
            for n in seg.practical_numbers() {
                if let Some(p) = prev {
                    part.push_pair(p, n);
                }
                part.first.get_or_insert(n);
                prev = Some(n);
            }
            part.last = prev;
            Ok(part)
        })?;
        let total = parts
            .into_iter()
            .fold(GapPartial::default(), GapPartial::merge);
        Ok(WindowReport {
            limit,
            pairs: total.pairs,
            violations: total.violations,
            tightest: total.tightest,
        })
    }
}

/// Practicality flags for `[lo, hi)`, factoring with `table`.
pub fn practical_flags(lo: u64, hi: u64, table: &SpfTable) -> Result<SieveSegment> {
    if lo == 0 || lo >= hi || hi > table.limit() + 1 {
        return Err(Error::domain(
            "range",
            format!("[{lo}, {hi}) not within [1, {}]", table.limit() + 1),
        ));
    }
    let mut seg = SieveSegment::empty(lo, hi);
    for n in lo..hi {
        if decompose_with(n, table)?.is_practical {
            seg.set(n);
        }
    }
    Ok(seg)
}

fn default_sieve(x: u64) -> Result<Sieve> {
    Sieve::new(x, ScanConfig::default())
}

/// PR(x) with a freshly built table and default configuration.
pub fn pr_count(x: u64) -> Result<u64> {
    default_sieve(x)?.pr_count(x)
}

/// N(x, y) with a freshly built table and default configuration.
pub fn n_count(x: u64, y: u64) -> Result<u64> {
    default_sieve(x)?.n_count(x, y)
}

pub fn ratio_grid(xs: &[u64], ys: &[u64]) -> Result<RatioGrid> {
    let x_max = xs.iter().copied().max().unwrap_or(2);
    default_sieve(x_max.min(MAX_TABLE_LIMIT))?.ratio_grid(xs, ys)
}

pub fn margenstern_ratio(x: u64) -> Result<f64> {
    default_sieve(x)?.margenstern_ratio(x)
}

/// Least practical `n` with `x < n < x + 2√x`. Failure to find one
/// contradicts the short-interval theorem and is reported as
/// [`Error::TheoremViolation`].
pub fn practical_in_window(x: u64) -> Result<u64> {
    // x + 2√x must stay inside the factorization cap
    if x == 0 || x > MAX_INPUT - 2 * isqrt(MAX_INPUT) - 2 {
        return Err(Error::domain("x", format!("{x} out of range")));
    }
    let mut n = x + 1;
    while within_window(x, n) {
        if practical::is_practical(n)? {
            return Ok(n);
        }
        n += 1;
    }
    Err(Error::TheoremViolation(format!(
        "no practical number in ({x}, {x} + 2√{x})"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::practical::{f_brute, is_practical_brute};
    use proptest::prelude::*;

    fn sieve(limit: u64) -> Sieve {
        Sieve::new(limit, ScanConfig::new(2, 1 << 10).unwrap()).unwrap()
    }

    #[test]
    fn flags_examples() {
        let t = SpfTable::new(100).unwrap();
        let seg = practical_flags(1, 13, &t).unwrap();
        let got: Vec<u64> = seg.practical_numbers().collect();
        let oracle: Vec<u64> = (1..13).filter(|&n| is_practical_brute(n).unwrap()).collect();
        assert_eq!(oracle, vec![1, 2, 4, 6, 8, 12]);
        assert_eq!(got, oracle);
        assert!(!practical_flags(3, 4, &t).unwrap().get(3));
        assert!(!practical_flags(10, 11, &t).unwrap().get(10));
        assert!(practical_flags(1, 102, &t).is_err());
        assert!(practical_flags(0, 5, &t).is_err());
        assert!(practical_flags(5, 5, &t).is_err());
    }

    #[test]
    fn segments_concatenate() {
        let t = SpfTable::new(5_000).unwrap();
        let whole = practical_flags(1, 5_001, &t).unwrap();
        let left = practical_flags(1, 1_777, &t).unwrap();
        let right = practical_flags(1_777, 5_001, &t).unwrap();
        assert_eq!(left.concat(&right), whole);
    }

    #[test]
    fn counts_examples() {
        let s = sieve(100);
        assert_eq!(s.pr_count(1).unwrap(), 1);
        assert_eq!(s.pr_count(10).unwrap(), 5);
        assert_eq!(s.pr_count(12).unwrap(), 6);

        let f: Vec<u64> = (1..=10).map(|n| f_brute(n).unwrap()).collect();
        assert_eq!(f, vec![1, 3, 1, 7, 1, 12, 1, 15, 1, 3]);
        assert_eq!(s.n_count(10, 4).unwrap(), 3);
        assert_eq!(s.n_count(10, 2).unwrap(), 5);
        // f(6) = 12 and f(8) = 15
        assert_eq!(s.n_count(10, 10).unwrap(), 2);
        for x in 4..=100 {
            assert!(s.n_count(x, x).unwrap() >= 1, "x = {x}");
        }
        assert!(s.n_count(101, 2).is_err());
        assert!(s.n_count(10, 0).is_err());
    }

    #[test]
    fn grid_examples() {
        let s = sieve(100);
        let g = s.ratio_grid(&[10, 4], &[4, 10, 2]).unwrap();
        let p = |x, y| *g.points.iter().find(|p| p.x == x && p.y == y).unwrap();
        assert_eq!(p(10, 4).count, 3);
        assert!((p(10, 4).normalized - 3.0 * 4f64.ln() / 10.0).abs() < 1e-15);
        assert!((p(10, 4).normalized - 0.416).abs() < 1e-3);
        assert_eq!(p(10, 10).count, 2);
        assert!((p(10, 10).normalized - 2.0 * 10f64.ln() / 10.0).abs() < 1e-15);
        assert!(p(4, 4).count >= 1);
        let mut rejected: Vec<(u64, u64)> = g.rejected.iter().map(|r| (r.x, r.y)).collect();
        rejected.sort();
        assert_eq!(rejected, vec![(4, 2), (4, 10), (10, 2)]);
    }

    #[test]
    fn margenstern_examples() {
        let s = sieve(100);
        assert!((s.margenstern_ratio(10).unwrap() - 1.151).abs() < 1e-3);
        assert!((s.margenstern_ratio(12).unwrap() - 1.242).abs() < 1e-3);
        assert!(s.margenstern_ratio(2).is_err());
    }

    #[test]
    fn window_examples() {
        assert_eq!(practical_in_window(1).unwrap(), 2);
        assert_eq!(practical_in_window(11).unwrap(), 12);
        assert_eq!(practical_in_window(23).unwrap(), 24);
        assert!(practical_in_window(0).is_err());
        for x in 1..5_000 {
            let n = practical_in_window(x).unwrap();
            assert!(n > x && within_window(x, n));
            assert!((x + 1..n).all(|k| !practical::is_practical(k).unwrap()));
        }
    }

    #[test]
    fn within_window_is_exact() {
        // n < x + 2√x at a perfect square: x = 9, bound 15
        assert!(within_window(9, 14));
        assert!(!within_window(9, 15));
    }

    #[test]
    fn window_report_matches_direct_pairs() {
        let s = sieve(50_000);
        let r = s.window_report(50_000).unwrap();
        let practical: Vec<u64> = (1..=50_000)
            .filter(|&n| practical::is_practical(n).unwrap())
            .collect();
        assert_eq!(r.pairs, practical.len() as u64 - 1);
        assert!(r.violations.is_empty());
        let tight = practical
            .windows(2)
            .map(|w| (w[0], w[1]))
            .fold(None, |acc, p| tighter(acc, Some(p)));
        assert_eq!(r.tightest, tight);
    }

    #[test]
    fn n_count_two_is_half() {
        let s = sieve(100_000);
        for x in [1u64, 2, 3, 999, 1_000, 54_321, 100_000] {
            assert_eq!(s.n_count(x, 2).unwrap(), x / 2);
        }
    }

    #[test]
    fn segmentation_invariance_small() {
        let base = Sieve::new(200_000, ScanConfig::single_threaded()).unwrap();
        let table = Arc::new(base.table().clone());
        let expect = (base.pr_count(200_000).unwrap(), base.n_count(200_000, 50).unwrap());
        for threads in [1, 3, 8] {
            for seg in [1 << 8, 1 << 12, 1 << 16, 1 << 20] {
                let s = Sieve::with_table(table.clone(), ScanConfig::new(threads, seg).unwrap());
                assert_eq!(
                    (s.pr_count(200_000).unwrap(), s.n_count(200_000, 50).unwrap()),
                    expect
                );
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn n_count_monotone(x1 in 1u64..20_000, x2 in 1u64..20_000, y1 in 1u64..5_000, y2 in 1u64..5_000) {
            let s = sieve(20_000);
            let (xa, xb) = (x1.min(x2), x1.max(x2));
            let (ya, yb) = (y1.min(y2), y1.max(y2));
            prop_assert!(s.n_count(xa, ya).unwrap() <= s.n_count(xb, ya).unwrap());
            prop_assert!(s.n_count(xa, ya).unwrap() >= s.n_count(xa, yb).unwrap());
        }
    }
}

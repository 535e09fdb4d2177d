//! The Hausman–Shapiro threshold `HS(n) = √(e^γ · n · log log n)`.
//!
//! Every `n > 3` with `f(n) >= HS(n)` is practical; [`verify_hs_theorem`]
//! checks that exhaustively, [`near_miss_search`] builds non-practical `n`
//! whose ratio `f(n) / HS(n)` comes close to 1, and [`robin_check`] tests
//! Robin's unconditional bound on σ.

use crate::arith::{self, next_prime_after, MAX_INPUT};
use crate::error::{Error, Result};
use crate::practical::{decompose, decompose_with};
use crate::scan::ScanConfig;
use crate::sieve::Sieve;

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// e^γ.
pub const EXP_GAMMA: f64 = 1.781_072_417_990_198;

/// Additive constant in Robin's bound.
pub const ROBIN_CONSTANT: f64 = 0.6483;

/// Relative slack applied to the right-hand side of Robin's bound. The bound
/// is within 1e-4 of σ(12) = 28, so a plain float comparison is too brittle.
pub const ROBIN_MARGIN: f64 = 1e-9;

/// Largest `d` accepted by [`near_miss_search`].
pub const MAX_NEAR_MISS_D: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HsReport {
    pub n: u64,
    pub f_value: u64,
    pub threshold: f64,
    pub ratio: f64,
    pub practical: bool,
}

impl HsReport {
    fn new(n: u64, f_value: u64, practical: bool) -> Self {
        let threshold = hs_threshold_unchecked(n);
        HsReport {
            n,
            f_value,
            threshold,
            ratio: f_value as f64 / threshold,
            practical,
        }
    }
}

/// A near miss `n = d · q`, with `d` practical and `q` the least prime
/// above `σ(d) + 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NearMiss {
    pub d: u64,
    pub q: u64,
    pub report: HsReport,
}

#[inline]
fn hs_threshold_unchecked(n: u64) -> f64 {
    let nf = n as f64;
    (EXP_GAMMA * nf * nf.ln().ln()).sqrt()
}

pub fn hs_threshold(n: u64) -> Result<f64> {
    if n < 3 {
        return Err(Error::domain("n", format!("HS({n}) undefined for n < 3")));
    }
    Ok(hs_threshold_unchecked(n))
}

/// Every non-practical `3 < n <= limit` with `f(n) >= HS(n)`, using `sieve`.
pub fn verify_hs_theorem_with(sieve: &Sieve, limit: u64) -> Result<Vec<HsReport>> {
    if limit <= 3 {
        return Ok(Vec::new());
    }
    let parts = sieve.map_range(limit, |a, b, t| {
        let mut bad = Vec::new();
        for n in a.max(4)..b {
            let d = decompose_with(n, t)?;
            if d.is_practical {
                continue;
            }
            // compare f² against HS²
            let f = d.f_value as f64;
            let nf = n as f64;
            if f * f >= EXP_GAMMA * nf * nf.ln().ln() {
                bad.push(HsReport::new(n, d.f_value, false));
            }
        }
        Ok(bad)
    })?;
    Ok(parts.into_iter().flatten().collect())
}

/// Counterexamples to the threshold theorem up to `limit`; expected empty.
pub fn verify_hs_theorem(limit: u64) -> Result<Vec<HsReport>> {
    if limit <= 3 {
        return Ok(Vec::new());
    }
    verify_hs_theorem_with(&Sieve::new(limit, ScanConfig::default())?, limit)
}

/// Builds `n = d · q` for every practical `d <= d_limit` with `d · q > 3`,
/// sorted by descending ratio (ties by `n`).
pub fn near_miss_search(d_limit: u64) -> Result<Vec<NearMiss>> {
    check_d_limit(d_limit)?;
    near_miss_search_with(&Sieve::new(d_limit, ScanConfig::default())?, d_limit)
}

fn check_d_limit(d_limit: u64) -> Result<()> {
    if d_limit == 0 || d_limit > MAX_NEAR_MISS_D {
        return Err(Error::domain(
            "d_limit",
            format!("{d_limit} not in 1..={MAX_NEAR_MISS_D}"),
        ));
    }
    Ok(())
}

pub fn near_miss_search_with(sieve: &Sieve, d_limit: u64) -> Result<Vec<NearMiss>> {
    check_d_limit(d_limit)?;
    let parts = sieve.map_range(d_limit, |a, b, t| {
        let mut out = Vec::new();
        for d in a..b {
            let dec = decompose_with(d, t)?;
            if !dec.is_practical {
                continue;
            }
            let q = next_prime_after(dec.f_value + 1)?;
            let n = d
                .checked_mul(q)
                .filter(|&n| n <= MAX_INPUT)
                .ok_or(Error::Overflow("near miss d·q"))?;
            if n <= 3 {
                continue;
            }
            out.push(NearMiss {
                d,
                q,
                report: HsReport::new(n, dec.f_value, false),
            });
        }
        Ok(out)
    })?;
    let mut all: Vec<NearMiss> = parts.into_iter().flatten().collect();
    all.sort_by(|a, b| {
        b.report
            .ratio
            .total_cmp(&a.report.ratio)
            .then(a.report.n.cmp(&b.report.n))
    });
    Ok(all)
}

/// Right-hand side of Robin's bound, `e^γ n log log n + 0.6483 n / log log n`.
pub fn robin_bound(n: u64) -> Result<f64> {
    if n < 3 {
        return Err(Error::domain("n", format!("Robin bound undefined for n = {n}")));
    }
    let nf = n as f64;
    let ll = nf.ln().ln();
    Ok(EXP_GAMMA * nf * ll + ROBIN_CONSTANT * nf / ll)
}

#[inline]
fn robin_holds(n: u64, sigma: u64) -> bool {
    let nf = n as f64;
    let ll = nf.ln().ln();
    let bound = EXP_GAMMA * nf * ll + ROBIN_CONSTANT * nf / ll;
    sigma as f64 <= bound * (1.0 + ROBIN_MARGIN)
}

/// Whether `σ(n) <= (e^γ n log log n + 0.6483 n / log log n) · (1 + 1e-9)`.
pub fn robin_check(n: u64) -> Result<bool> {
    if n < 3 {
        return Err(Error::domain("n", format!("Robin bound undefined for n = {n}")));
    }
    let sigma = arith::factorize(n, None)?.sigma()?;
    Ok(robin_holds(n, sigma))
}

/// A failure of Robin's bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RobinViolation {
    pub n: u64,
    pub sigma: u64,
    pub bound: f64,
}

/// Every `3 <= n <= limit` failing [`robin_check`]; expected empty.
pub fn robin_scan_with(sieve: &Sieve, limit: u64) -> Result<Vec<RobinViolation>> {
    if limit < 3 {
        return Ok(Vec::new());
    }
    let parts = sieve.map_range(limit, |a, b, t| {
        let mut bad = Vec::new();
        for n in a.max(3)..b {
            let sigma = t.prime_powers(n).try_fold(1u64, |acc, (p, e)| {
                acc.checked_mul(arith::sigma_prime_power(p, e)?)
                    .ok_or(Error::Overflow("sigma"))
            })?;
            if !robin_holds(n, sigma) {
                bad.push(RobinViolation {
                    n,
                    sigma,
                    bound: robin_bound(n)?,
                });
            }
        }
        Ok(bad)
    })?;
    Ok(parts.into_iter().flatten().collect())
}

pub fn robin_scan(limit: u64) -> Result<Vec<RobinViolation>> {
    if limit < 3 {
        return Ok(Vec::new());
    }
    robin_scan_with(&Sieve::new(limit, ScanConfig::default())?, limit)
}

/// [`HsReport`] for a single `n >= 3`.
pub fn hs_report(n: u64) -> Result<HsReport> {
    hs_threshold(n)?;
    let d = decompose(n)?;
    Ok(HsReport::new(n, d.f_value, d.is_practical))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::practical::{f_brute, is_practical};

    #[test]
    fn constants_are_consistent() {
        assert!((EULER_GAMMA.exp() - EXP_GAMMA).abs() < 1e-15);
    }

    #[test]
    fn threshold_examples() {
        assert!(hs_threshold(2).is_err());
        let hs5 = hs_threshold(5).unwrap();
        assert!((hs5 - 2.06).abs() < 0.01, "{hs5}");
        assert!((f_brute(5).unwrap() as f64) < hs5);
        let hs14 = hs_threshold(14).unwrap();
        assert!((hs14 - 4.92).abs() < 0.01, "{hs14}");
        assert!(3.0 < hs14);
        for n in 7..100_000u64 {
            assert!(hs_threshold(n).unwrap() > (n as f64).sqrt(), "n = {n}");
        }
    }

    #[test]
    fn threshold_monotone_from_16() {
        let mut prev = hs_threshold(16).unwrap();
        for n in 17..200_000 {
            let h = hs_threshold(n).unwrap();
            assert!(h > prev, "n = {n}");
            prev = h;
        }
    }

    #[test]
    fn verify_small_limits() {
        assert!(verify_hs_theorem(4).unwrap().is_empty());
        assert!(verify_hs_theorem(14).unwrap().is_empty());
        assert!(verify_hs_theorem(100_000).unwrap().is_empty());
    }

    #[test]
    fn pointwise_theorem() {
        for n in 4..=20_000u64 {
            let f = f_brute(n).unwrap() as f64;
            if f >= hs_threshold(n).unwrap() {
                assert!(is_practical(n).unwrap(), "n = {n}");
            }
        }
    }

    #[test]
    fn near_miss_examples() {
        let v = near_miss_search(10).unwrap();
        let ten = v.iter().find(|m| m.d == 2).unwrap();
        assert_eq!((ten.q, ten.report.n, ten.report.f_value), (5, 10, 3));
        assert!((ten.report.ratio - 3.0 / hs_threshold(10).unwrap()).abs() < 1e-15);
        assert!(v.iter().all(|m| m.report.ratio < 1.0));
        // d = 1 would give n = 3, outside the theorem's range
        assert!(v.iter().all(|m| m.d != 1));
        assert!(v.windows(2).all(|w| w[0].report.ratio >= w[1].report.ratio));
        for m in &v {
            assert!(!is_practical(m.report.n).unwrap());
            assert_eq!(decompose(m.report.n).unwrap().component, m.d);
        }
    }

    #[test]
    fn near_miss_7560() {
        let v = near_miss_search(7_560).unwrap();
        let m = v.iter().find(|m| m.d == 7_560).unwrap();
        assert_eq!(m.report.f_value, 28_800);
        assert_eq!(m.q, 28_807);
        assert!((m.report.ratio - 0.85).abs() < 0.01, "{}", m.report.ratio);
    }

    #[test]
    fn robin_examples() {
        assert!(robin_check(3).unwrap());
        assert!((robin_bound(3).unwrap() - 21.2).abs() < 0.1);
        assert!(robin_check(12).unwrap());
        let b12 = robin_bound(12).unwrap();
        assert!(b12 > 28.0 && b12 < 28.01, "{b12}");
        assert!(robin_check(2).is_err());
        assert!(robin_scan(100_000).unwrap().is_empty());
    }
}

//! Additive endpoints (the range of f) and the densities ρ_m of the level
//! sets `{n : f(n) = m}`.
//!
//! `m` is an endpoint exactly when `m = σ(d)` for a practical `d`. Writing
//! `n = d · q` with `d` the practical component, `f(n) = m` holds iff `d` is a
//! practical preimage of `m` under σ and every prime factor of `q` exceeds
//! `m + 1`, so
//!
//! ```text
//! ρ_m = ∏_{p <= m+1} (1 − 1/p) · Σ_{d practical, σ(d) = m} 1/d
//! ```
//!
//! which is evaluated here in exact rational arithmetic.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::arith::{primes_up_to, MAX_TABLE_LIMIT};
use crate::error::{Error, Result};
use crate::practical::decompose_with;
use crate::scan::ScanConfig;
use crate::sieve::Sieve;

/// Largest `m` accepted by [`rho_exact`].
pub const MAX_RHO_M: u64 = 100_000;

/// Largest `M` accepted by [`rho_partial_sum`].
pub const MAX_PARTIAL_SUM_M: u64 = 10_000;

/// Sorted additive endpoints `<= limit`, each with its least practical
/// preimage.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EndpointTable {
    pub limit: u64,
    pub endpoints: Vec<u64>,
    /// `witnesses[i]` is the least practical `d` with `σ(d) = endpoints[i]`.
    pub witnesses: Vec<u64>,
}

impl EndpointTable {
    pub fn len(&self) -> usize {
        self.endpoints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.endpoints.is_empty()
    }

    pub fn contains(&self, m: u64) -> bool {
        self.endpoints.binary_search(&m).is_ok()
    }

    pub fn witness(&self, m: u64) -> Option<u64> {
        self.endpoints
            .binary_search(&m)
            .ok()
            .map(|i| self.witnesses[i])
    }

    /// Number of endpoints `<= x`.
    pub fn count_up_to(&self, x: u64) -> usize {
        self.endpoints.partition_point(|&m| m <= x)
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.endpoints.iter().copied().zip(self.witnesses.iter().copied())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityRecord {
    pub m: u64,
    pub rho_exact: BigRational,
    pub rho_float: f64,
    pub empirical: f64,
    pub sample_limit: u64,
}

/// Counts of f(n) = m for `n <= x` and `m <= m_max`, plus everything above.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FHistogram {
    pub x: u64,
    /// `counts[m]` for `0 <= m <= m_max`; index 0 is always zero.
    pub counts: Vec<u64>,
    pub above: u64,
}

impl FHistogram {
    pub fn m_max(&self) -> u64 {
        self.counts.len() as u64 - 1
    }

    pub fn count(&self, m: u64) -> u64 {
        self.counts.get(m as usize).copied().unwrap_or(0)
    }

    /// `#{n <= x : f(n) = m} / x`.
    pub fn density(&self, m: u64) -> f64 {
        self.count(m) as f64 / self.x as f64
    }

    /// `#{n <= x : f(n) <= m} / x`.
    pub fn cumulative_density(&self, m: u64) -> f64 {
        let upto = (m.min(self.m_max()) + 1) as usize;
        self.counts[..upto].iter().sum::<u64>() as f64 / self.x as f64
    }
}

/// (σ(d), d) for every practical `d <= x` with `σ(d) <= x`, in the order
/// the scan visits them.
fn practical_sigma_pairs(sieve: &Sieve, x: u64) -> Result<Vec<(u64, u64)>> {
    let parts = sieve.map_range(x, |a, b, t| {
        let mut out = Vec::new();
        for d in a..b {
            let dec = decompose_with(d, t)?;
            if dec.is_practical && dec.f_value <= x {
                out.push((dec.f_value, d));
            }
        }
        Ok(out)
    })?;
    Ok(parts.into_iter().flatten().collect())
}

/// Every endpoint `<= x`, using `sieve` (whose limit must be at least `x`).
pub fn endpoints_with(sieve: &Sieve, x: u64) -> Result<EndpointTable> {
    let mut pairs = practical_sigma_pairs(sieve, x)?;
    pairs.sort_unstable();
    pairs.dedup_by_key(|p| p.0);
    let (endpoints, witnesses) = pairs.into_iter().unzip();
    Ok(EndpointTable {
        limit: x,
        endpoints,
        witnesses,
    })
}

fn sieve_for(x: u64) -> Result<Sieve> {
    if x == 0 || x > MAX_TABLE_LIMIT {
        return Err(Error::capacity(
            "endpoint limit",
            format!("{x} not in 1..={MAX_TABLE_LIMIT}"),
        ));
    }
    Sieve::new(x, ScanConfig::default())
}

/// All additive endpoints `<= x`. Scanning `d <= x` is complete since
/// `σ(d) >= d`.
pub fn endpoints_up_to(x: u64) -> Result<EndpointTable> {
    endpoints_with(&sieve_for(x)?, x)
}

/// Practical `d` with `σ(d) = m`, ascending.
pub fn practical_preimages_with(sieve: &Sieve, m: u64) -> Result<Vec<u64>> {
    let mut pre: Vec<u64> = practical_sigma_pairs(sieve, m)?
        .into_iter()
        .filter(|&(s, _)| s == m)
        .map(|(_, d)| d)
        .collect();
    pre.sort_unstable();
    Ok(pre)
}

pub fn is_endpoint(m: u64) -> Result<bool> {
    Ok(!practical_preimages_with(&sieve_for(m)?, m)?.is_empty())
}

/// ∏_{p <= y} (1 − 1/p), exactly.
pub fn mertens_product(y: u64) -> BigRational {
    let (num, den) = primes_up_to(y)
        .into_iter()
        .fold((BigInt::from(1), BigInt::from(1)), |(n, d), p| {
            (n * (p - 1), d * p)
        });
    BigRational::new(num, den)
}

fn reciprocal_sum(ds: &[u64]) -> BigRational {
    ds.iter().fold(BigRational::zero(), |acc, &d| {
        acc + BigRational::new(BigInt::from(1), BigInt::from(d))
    })
}

fn check_rho_m(m: u64) -> Result<()> {
    if m == 0 || m > MAX_RHO_M {
        return Err(Error::capacity("rho m", format!("{m} not in 1..={MAX_RHO_M}")));
    }
    Ok(())
}

pub fn rho_exact_with(sieve: &Sieve, m: u64) -> Result<BigRational> {
    check_rho_m(m)?;
    let pre = practical_preimages_with(sieve, m)?;
    if pre.is_empty() {
        return Ok(BigRational::zero());
    }
    Ok(mertens_product(m + 1) * reciprocal_sum(&pre))
}

/// Exact density of `{n : f(n) = m}`.
pub fn rho_exact(m: u64) -> Result<BigRational> {
    check_rho_m(m)?;
    rho_exact_with(&Sieve::new(m, ScanConfig::single_threaded())?, m)
}

/// Nearest `f64` to an exact rational.
pub fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Tally of f(n) over `n <= x`, bucketed up to `m_max`.
pub fn f_histogram_with(sieve: &Sieve, x: u64, m_max: u64) -> Result<FHistogram> {
    let width = m_max as usize + 1;
    let parts = sieve.map_range(x, |a, b, t| {
        let mut counts = vec![0u64; width];
        let mut above = 0u64;
        for n in a..b {
            let f = decompose_with(n, t)?.f_value;
            match counts.get_mut(f as usize) {
                Some(c) if f <= m_max => *c += 1,
                _ => above += 1,
            }
        }
        Ok((counts, above))
    })?;
    let mut total = vec![0u64; width];
    let mut above = 0;
    for (counts, a) in parts {
        for (t, c) in total.iter_mut().zip(counts) {
            *t += c;
        }
        above += a;
    }
    Ok(FHistogram {
        x,
        counts: total,
        above,
    })
}

pub fn rho_empirical_with(sieve: &Sieve, m: u64, x: u64) -> Result<f64> {
    let parts = sieve.map_range(x, |a, b, t| {
        let mut c = 0u64;
        for n in a..b {
            if decompose_with(n, t)?.f_value == m {
                c += 1;
            }
        }
        Ok(c)
    })?;
    Ok(parts.into_iter().sum::<u64>() as f64 / x as f64)
}

/// `#{n <= x : f(n) = m} / x`.
pub fn rho_empirical(m: u64, x: u64) -> Result<f64> {
    rho_empirical_with(&sieve_for(x)?, m, x)
}

pub fn density_record_with(sieve: &Sieve, m: u64, sample_limit: u64) -> Result<DensityRecord> {
    let rho = rho_exact_with(sieve, m)?;
    Ok(DensityRecord {
        m,
        rho_float: to_f64(&rho),
        rho_exact: rho,
        empirical: rho_empirical_with(sieve, m, sample_limit)?,
        sample_limit,
    })
}

/// Exact and empirical densities of `{n : f(n) = m}` side by side.
pub fn density_record(m: u64, sample_limit: u64) -> Result<DensityRecord> {
    check_rho_m(m)?;
    let sieve = sieve_for(m.max(sample_limit))?;
    density_record_with(&sieve, m, sample_limit)
}

/// ρ_m for every endpoint `m <= m_max`, ascending, from one endpoint scan.
pub fn rho_table_with(sieve: &Sieve, m_max: u64) -> Result<Vec<(u64, BigRational)>> {
    if m_max == 0 || m_max > MAX_RHO_M {
        return Err(Error::capacity("rho m", format!("{m_max} not in 1..={MAX_RHO_M}")));
    }
    let mut pairs = practical_sigma_pairs(sieve, m_max)?;
    pairs.sort_unstable();
    let primes = primes_up_to(m_max + 1);
    let mut next_prime = primes.iter().peekable();
    let mut num = BigInt::from(1);
    let mut den = BigInt::from(1);
    let mut out = Vec::new();
    let mut i = 0;
    while i < pairs.len() {
        let m = pairs[i].0;
        let j = i + pairs[i..].partition_point(|p| p.0 == m);
        while let Some(&&p) = next_prime.peek() {
            if p > m + 1 {
                break;
            }
            num *= p - 1;
            den *= p;
            next_prime.next();
        }
        let ds: Vec<u64> = pairs[i..j].iter().map(|p| p.1).collect();
        let rho = BigRational::new(num.clone(), den.clone()) * reciprocal_sum(&ds);
        out.push((m, rho));
        i = j;
    }
    Ok(out)
}

/// Σ_{m <= M} ρ_m, exactly.
pub fn rho_partial_sum(m_max: u64) -> Result<BigRational> {
    if m_max == 0 || m_max > MAX_PARTIAL_SUM_M {
        return Err(Error::capacity(
            "partial sum M",
            format!("{m_max} not in 1..={MAX_PARTIAL_SUM_M}"),
        ));
    }
    let sieve = Sieve::new(m_max, ScanConfig::single_threaded())?;
    Ok(rho_table_with(&sieve, m_max)?
        .into_iter()
        .fold(BigRational::zero(), |acc, (_, r)| acc + r))
}

/// Endpoint counts at each `x`, with `count · (log x)² / x`.
pub fn endpoint_count_table(xs: &[u64]) -> Result<Vec<(u64, u64, f64)>> {
    let Some(&x_max) = xs.iter().max() else {
        return Ok(Vec::new());
    };
    let table = endpoints_up_to(x_max)?;
    Ok(endpoint_count_rows(&table, xs))
}

pub fn endpoint_count_rows(table: &EndpointTable, xs: &[u64]) -> Vec<(u64, u64, f64)> {
    xs.iter()
        .map(|&x| {
            let c = table.count_up_to(x) as u64;
            let ln = (x as f64).ln();
            (x, c, c as f64 * ln * ln / x as f64)
        })
        .collect()
}

//! Practicality classification, the practical component of `n`, and the
//! practicality function f(n).
//!
//! `n = p_1^e_1 ⋯ p_r^e_r` is practical iff `p_{j+1} <= σ(n_j) + 1` for every
//! prefix `n_j = p_1^e_1 ⋯ p_j^e_j`, `0 <= j < r`. The longest prefix passing
//! the test is the practical component, and f(n) equals its divisor sum.
//!
//! [`f_brute`] and [`is_practical_brute`] answer the same questions straight
//! from the definition with a subset-sum bit vector, and serve as oracles.

use crate::arith::{self, Factorization, SpfTable, MAX_INPUT};
use crate::error::{Error, Result};

/// Default size guard, in bits, for the subset-sum vectors of the brute-force
/// oracles.
pub const DEFAULT_BRUTE_BITS: u64 = 1 << 30;

/// Largest `n` accepted by [`f_brute`].
pub const MAX_F_BRUTE: u64 = 10_000_000;

/// Largest `n` accepted by [`is_practical_brute`].
pub const MAX_PRACTICAL_BRUTE: u64 = 1_000_000;

/// `n` split as `component · cofactor`, where `component` is the practical
/// component.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PracticalDecomposition {
    pub n: u64,
    pub component: u64,
    /// Number of prime powers in the component (the `j` of `n_j`).
    pub component_index: u32,
    pub cofactor: u64,
    /// f(n) = σ(component).
    pub f_value: u64,
    pub is_practical: bool,
}

/// Computes the practical component from an ascending sequence of prime
/// powers of `n`. Stops at the first failing prime, so only the component is
/// ever expanded.
pub fn decompose_prime_powers<I>(n: u64, prime_powers: I) -> Result<PracticalDecomposition>
where
    I: IntoIterator<Item = (u64, u32)>,
{
    let mut component = 1u64;
    let mut sigma = 1u64;
    let mut index = 0u32;
    for (p, e) in prime_powers {
        if p > sigma + 1 {
            break;
        }
        component = component
            .checked_mul(p.checked_pow(e).ok_or(Error::Overflow("component"))?)
            .ok_or(Error::Overflow("component"))?;
        sigma = sigma
            .checked_mul(arith::sigma_prime_power(p, e)?)
            .ok_or(Error::Overflow("sigma"))?;
        index += 1;
    }
    Ok(PracticalDecomposition {
        n,
        component,
        component_index: index,
        cofactor: n / component,
        f_value: sigma,
        is_practical: component == n,
    })
}

/// Decomposition from an existing factorization.
pub fn decompose_factorization(fact: &Factorization) -> Result<PracticalDecomposition> {
    decompose_prime_powers(fact.n(), fact.factors().iter().copied())
}

/// Practical component of `n`, factoring by trial division.
pub fn decompose(n: u64) -> Result<PracticalDecomposition> {
    decompose_factorization(&arith::factorize(n, None)?)
}

/// Same as [`decompose`], reading the factorization out of `table`.
/// Requires `1 <= n <= table.limit()`.
#[inline]
pub fn decompose_with(n: u64, table: &SpfTable) -> Result<PracticalDecomposition> {
    decompose_prime_powers(n, table.prime_powers(n))
}

/// Stewart–Sierpiński test.
pub fn is_practical(n: u64) -> Result<bool> {
    Ok(decompose(n)?.is_practical)
}

/// f(n) via the practical component.
pub fn f_fast(n: u64) -> Result<u64> {
    Ok(decompose(n)?.f_value)
}

/// Bit vector tracking which integers are sums of distinct divisors.
struct SubsetSums {
    words: Vec<u64>,
    bits: u64,
}

impl SubsetSums {
    /// Vector over `0..bits` with only the empty sum (0) reachable.
    fn new(bits: u64) -> Self {
        let mut words = vec![0u64; bits.div_ceil(64) as usize];
        words[0] = 1;
        SubsetSums { words, bits }
    }

    /// `reach |= reach << shift`, restricted to words below `top_word`.
    fn add_item(&mut self, shift: u64, top_word: usize) {
        let ws = (shift / 64) as usize;
        let bs = (shift % 64) as u32;
        let top = top_word.min(self.words.len() - 1);
        for j in (ws..=top).rev() {
            let mut v = self.words[j - ws] << bs;
            if bs > 0 && j > ws {
                v |= self.words[j - ws - 1] >> (64 - bs);
            }
            self.words[j] |= v;
        }
        let tail = self.bits % 64;
        if tail != 0 {
            let last = self.words.len() - 1;
            self.words[last] &= (1u64 << tail) - 1;
        }
    }

    /// Least `k >= 1` not reachable, or `bits` if all of `0..bits` are.
    fn first_gap(&self) -> u64 {
        for (i, &w) in self.words.iter().enumerate() {
            let missing = !w;
            if missing != 0 {
                let k = i as u64 * 64 + missing.trailing_zeros() as u64;
                return k.min(self.bits);
            }
        }
        self.bits
    }
}

/// Runs the forward subset-sum sweep over `divisors` (ascending) in a vector
/// of `bits` bits and returns the first unreachable positive integer.
fn first_unreachable(divisors: &[u64], bits: u64) -> u64 {
    let mut sums = SubsetSums::new(bits);
    let mut running = 0u64;
    for &d in divisors {
        if d >= bits {
            break;
        }
        running = running.saturating_add(d);
        let top_word = (running.min(bits - 1) / 64) as usize;
        sums.add_item(d, top_word);
    }
    sums.first_gap()
}

/// f(n) straight from the definition, with the default size guard.
pub fn f_brute(n: u64) -> Result<u64> {
    f_brute_with_cap(n, DEFAULT_BRUTE_BITS)
}

/// f(n) from the definition: computes every subset sum of the divisors of `n`
/// in a bit vector of length σ(n) + 1 and returns the end of the initial run
/// of reachable integers.
pub fn f_brute_with_cap(n: u64, max_bits: u64) -> Result<u64> {
    if n == 0 || n > MAX_F_BRUTE {
        return Err(Error::domain("n", format!("{n} not in 1..={MAX_F_BRUTE}")));
    }
    let fact = arith::factorize(n, None)?;
    let sigma = fact.sigma()?;
    let bits = sigma + 1;
    if bits > max_bits {
        return Err(Error::capacity(
            "subset-sum vector",
            format!("σ({n}) + 1 = {bits} bits exceeds guard {max_bits}"),
        ));
    }
    let divisors = fact.divisors()?;
    Ok(first_unreachable(&divisors, bits) - 1)
}

/// Definitional practicality: every integer in `[1, n]` is a sum of distinct
/// divisors of `n`.
pub fn is_practical_brute(n: u64) -> Result<bool> {
    if n == 0 || n > MAX_PRACTICAL_BRUTE {
        return Err(Error::domain(
            "n",
            format!("{n} not in 1..={MAX_PRACTICAL_BRUTE}"),
        ));
    }
    let bits = n + 1;
    let divisors = arith::factorize(n, None)?.divisors()?;
    Ok(first_unreachable(&divisors, bits) == bits)
}

/// Checks that `m · n` is practical for every `1 <= m <= m_cap`, given that
/// `n` is practical and `m_cap <= σ(n) + 1`. A `false` result means the
/// practicality test itself is broken.
pub fn verify_margenstern(n: u64, m_cap: u64) -> Result<bool> {
    let d = decompose(n)?;
    if !d.is_practical {
        return Err(Error::domain("n", format!("{n} is not practical")));
    }
    if m_cap == 0 || m_cap > d.f_value + 1 {
        return Err(Error::domain(
            "m_cap",
            format!("{m_cap} not in 1..={}", d.f_value + 1),
        ));
    }
    match m_cap.checked_mul(n) {
        Some(top) if top <= MAX_INPUT => {}
        _ => {
            return Err(Error::domain(
                "m_cap",
                format!("{m_cap} · {n} exceeds {MAX_INPUT}"),
            ))
        }
    }
    for m in 1..=m_cap {
        if !is_practical(m * n)? {
            return Ok(false);
        }
    }
    Ok(true)
}

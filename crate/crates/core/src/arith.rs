//! Integer factorization and multiplicative-function primitives.
//!
//! Inputs are capped at [`MAX_INPUT`]; every product and sum is computed with
//! checked `u64` arithmetic so that an overflow surfaces as
//! [`Error::Overflow`] instead of a wrapped value.

use crate::error::{Error, Result};

/// Largest integer accepted by [`factorize`] and everything built on it.
pub const MAX_INPUT: u64 = 1_000_000_000_000_000;

/// Largest limit accepted by [`SpfTable::new`].
pub const MAX_TABLE_LIMIT: u64 = 1_000_000_000;

/// Upper bound on the number of divisors [`Factorization::divisors`] will
/// materialize.
pub const MAX_DIVISORS: u64 = 10_000_000;

/// Integer square root, rounded down.
pub fn isqrt(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    let mut r = (n as f64).sqrt() as u64;
    while r.checked_mul(r).is_none_or(|sq| sq > n) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|sq| sq <= n) {
        r += 1;
    }
    r
}

/// All primes `<= limit`, ascending. Plain sieve of Eratosthenes; intended for
/// small limits (base primes of segmented scans).
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let limit = limit as usize;
    let mut composite = vec![false; limit + 1];
    let mut primes = Vec::new();
    for i in 2..=limit {
        if composite[i] {
            continue;
        }
        primes.push(i as u64);
        let mut k = i * i;
        while k <= limit {
            composite[k] = true;
            k += i;
        }
    }
    primes
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin for the full `u64` range.
pub fn is_prime(n: u64) -> bool {
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &WITNESSES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Least prime strictly greater than `n`.
pub fn next_prime_after(n: u64) -> Result<u64> {
    let mut c = n.checked_add(1).ok_or(Error::Overflow("next prime"))?;
    while !is_prime(c) {
        c = c.checked_add(1).ok_or(Error::Overflow("next prime"))?;
    }
    Ok(c)
}

/// σ(p^e) = 1 + p + … + p^e.
pub fn sigma_prime_power(p: u64, e: u32) -> Result<u64> {
    let mut term = 1u64;
    let mut sum = 1u64;
    for _ in 0..e {
        term = term.checked_mul(p).ok_or(Error::Overflow("sigma"))?;
        sum = sum.checked_add(term).ok_or(Error::Overflow("sigma"))?;
    }
    Ok(sum)
}

fn pow_checked(p: u64, e: u32) -> Result<u64> {
    p.checked_pow(e).ok_or(Error::Overflow("prime power"))
}

/// Smallest-prime-factor table for `2..=limit`.
///
/// Only odd entries are stored. Even numbers have smallest prime factor 2;
/// an odd composite `k <= limit` has a smallest prime factor at most
/// `sqrt(limit) <= 31623`, so it is stored as a 1-based index into the list
/// of odd base primes and fits in a `u16`. A zero entry marks an odd prime
/// (or 1).
#[derive(Debug, Clone)]
pub struct SpfTable {
    limit: u64,
    base_primes: Vec<u32>,
    marks: Vec<u16>,
}

impl SpfTable {
    /// Builds the table with an Eratosthenes pass over the odd numbers.
    pub fn new(limit: u64) -> Result<Self> {
        if limit < 2 {
            return Err(Error::domain("spf limit", format!("{limit} < 2")));
        }
        if limit > MAX_TABLE_LIMIT {
            return Err(Error::capacity(
                "spf table",
                format!("limit {limit} exceeds {MAX_TABLE_LIMIT}"),
            ));
        }
        let root = isqrt(limit);
        let base_primes: Vec<u32> = primes_up_to(root)
            .into_iter()
            .filter(|&p| p != 2)
            .map(|p| p as u32)
            .collect();
        debug_assert!(base_primes.len() < u16::MAX as usize);

        let mut marks = vec![0u16; (limit / 2 + 1) as usize];
        for (idx, &p) in base_primes.iter().enumerate() {
            let p = p as u64;
            let tag = (idx + 1) as u16;
            let mut k = p * p;
            while k <= limit {
                let slot = &mut marks[(k / 2) as usize];
                if *slot == 0 {
                    *slot = tag;
                }
                k += 2 * p;
            }
        }
        Ok(SpfTable {
            limit,
            base_primes,
            marks,
        })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// Smallest prime factor of `k`, for `2 <= k <= limit`.
    ///
    /// # Panics
    ///
    /// Panics if `k` is outside `2..=limit`.
    #[inline]
    pub fn spf(&self, k: u64) -> u64 {
        assert!(
            (2..=self.limit).contains(&k),
            "spf({k}) outside table range 2..={}",
            self.limit
        );
        self.spf_unchecked(k)
    }

    #[inline]
    fn spf_unchecked(&self, k: u64) -> u64 {
        if k.is_multiple_of(2) {
            return 2;
        }
        match self.marks[(k / 2) as usize] {
            0 => k,
            tag => self.base_primes[tag as usize - 1] as u64,
        }
    }

    /// `true` iff `k` is prime; `k` must not exceed the table limit.
    pub fn is_prime(&self, k: u64) -> bool {
        k >= 2 && self.spf(k) == k
    }

    /// Prime powers of `n` in ascending prime order, without allocating.
    /// Requires `1 <= n <= limit`.
    pub fn prime_powers(&self, n: u64) -> PrimePowers<'_> {
        assert!(
            n >= 1 && n <= self.limit,
            "n = {n} outside table range 1..={}",
            self.limit
        );
        PrimePowers {
            table: self,
            rest: n,
        }
    }
}

/// Iterator over `(p, e)` pairs produced from an [`SpfTable`].
pub struct PrimePowers<'a> {
    table: &'a SpfTable,
    rest: u64,
}

impl Iterator for PrimePowers<'_> {
    type Item = (u64, u32);

    #[inline]
    fn next(&mut self) -> Option<(u64, u32)> {
        if self.rest == 1 {
            return None;
        }
        let p = self.table.spf_unchecked(self.rest);
        let mut e = 0;
        while self.rest.is_multiple_of(p) {
            self.rest /= p;
            e += 1;
        }
        Some((p, e))
    }
}

/// Canonical prime factorization `n = p_1^e_1 ⋯ p_r^e_r` with `p_1 < … < p_r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    n: u64,
    factors: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn n(&self) -> u64 {
        self.n
    }

    /// Prime-power factors, ascending by prime. Empty exactly when `n = 1`.
    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    /// Multiplies the factors back together.
    pub fn recompose(&self) -> Result<u64> {
        self.factors.iter().try_fold(1u64, |acc, &(p, e)| {
            acc.checked_mul(pow_checked(p, e)?)
                .ok_or(Error::Overflow("recompose"))
        })
    }

    /// Sum of divisors, as ∏ σ(p^e).
    pub fn sigma(&self) -> Result<u64> {
        self.factors.iter().try_fold(1u64, |acc, &(p, e)| {
            acc.checked_mul(sigma_prime_power(p, e)?)
                .ok_or(Error::Overflow("sigma"))
        })
    }

    /// ω(n): number of distinct primes.
    pub fn omega(&self) -> u32 {
        self.factors.len() as u32
    }

    /// Ω(n): number of primes counted with multiplicity.
    pub fn big_omega(&self) -> u32 {
        self.factors.iter().map(|&(_, e)| e).sum()
    }

    /// Ω(n; y): prime factors `<= y`, with multiplicity.
    pub fn big_omega_upto(&self, y: u64) -> u32 {
        self.factors
            .iter()
            .take_while(|&&(p, _)| p <= y)
            .map(|&(_, e)| e)
            .sum()
    }

    /// d(n), the number of divisors.
    pub fn divisor_count(&self) -> u64 {
        self.factors.iter().map(|&(_, e)| e as u64 + 1).product()
    }

    /// P⁻(n), the least prime factor; `None` for `n = 1` (where it is
    /// conventionally infinite).
    pub fn least_prime_factor(&self) -> Option<u64> {
        self.factors.first().map(|&(p, _)| p)
    }

    /// All divisors in ascending order.
    pub fn divisors(&self) -> Result<Vec<u64>> {
        let count = self.divisor_count();
        if count > MAX_DIVISORS {
            return Err(Error::capacity(
                "divisors",
                format!("d({}) = {count} exceeds {MAX_DIVISORS}", self.n),
            ));
        }
        let mut divs = Vec::with_capacity(count as usize);
        divs.push(1u64);
        for &(p, e) in &self.factors {
            let len = divs.len();
            let mut pk = 1u64;
            for _ in 0..e {
                pk *= p;
                for i in 0..len {
                    divs.push(divs[i] * pk);
                }
            }
        }
        divs.sort_unstable();
        Ok(divs)
    }
}

fn check_input(n: u64) -> Result<()> {
    if n == 0 || n > MAX_INPUT {
        return Err(Error::domain(
            "n",
            format!("{n} not in 1..={MAX_INPUT}"),
        ));
    }
    Ok(())
}

/// Factorizes `n`, using table lookups when `table` covers `n` and trial
/// division otherwise.
pub fn factorize(n: u64, table: Option<&SpfTable>) -> Result<Factorization> {
    check_input(n)?;
    let factors = match table {
        Some(t) if n <= t.limit() => t.prime_powers(n).collect(),
        _ => trial_division(n),
    };
    Ok(Factorization { n, factors })
}

fn trial_division(mut n: u64) -> Vec<(u64, u32)> {
    let mut factors = Vec::new();
    let strip = |n: &mut u64, p: u64, factors: &mut Vec<(u64, u32)>| {
        let mut e = 0;
        while (*n).is_multiple_of(p) {
            *n /= p;
            e += 1;
        }
        if e > 0 {
            factors.push((p, e));
        }
        e > 0
    };
    strip(&mut n, 2, &mut factors);
    strip(&mut n, 3, &mut factors);
    let mut prime_rest = n > 1 && is_prime(n);
    let mut p = 5u64;
    while !prime_rest && p * p <= n {
        let hit = strip(&mut n, p, &mut factors) | strip(&mut n, p + 2, &mut factors);
        if hit {
            prime_rest = n > 1 && is_prime(n);
        }
        p += 6;
    }
    if n > 1 {
        factors.push((n, 1));
    }
    factors
}

/// Φ(x, y): the number of `n <= x` with no prime factor `<= y`. `n = 1` is
/// always counted.
///
/// Segmented scan over `[2, x]` marking multiples of the primes up to
/// `z = min(y, √x)`. An unmarked `n > 1` then has all prime factors above `z`;
/// when `z < y` it is a prime and survives only if it exceeds `y`.
pub fn phi_count(x: u64, y: u64) -> Result<u64> {
    if y == 0 || y > x {
        return Err(Error::domain("y", format!("need 1 <= y <= x, got y = {y}, x = {x}")));
    }
    if x > MAX_TABLE_LIMIT {
        return Err(Error::capacity("phi x", format!("{x} exceeds {MAX_TABLE_LIMIT}")));
    }
    let z = y.min(isqrt(x));
    let primes = primes_up_to(z);
    const SEGMENT: u64 = 1 << 18;
    let mut count = 1u64;
    let mut composite = vec![false; SEGMENT as usize];
    let mut lo = 2u64;
    while lo <= x {
        let hi = (lo + SEGMENT).min(x + 1);
        let seg = &mut composite[..(hi - lo) as usize];
        seg.fill(false);
        for &p in &primes {
            let mut k = lo.div_ceil(p) * p;
            while k < hi {
                seg[(k - lo) as usize] = true;
                k += p;
            }
        }
        count += seg
            .iter()
            .enumerate()
            .filter(|&(i, &c)| !c && lo + i as u64 > y)
            .count() as u64;
        lo = hi;
    }
    Ok(count)
}

//! Primes, modular exponentiation and the multiplicative arithmetic
//! functions (ω, Ω, σ₀, π, prime sums) behind the density statistics.

use crate::error::{domain, range, Result};

/// Sieve cap used when no override is configured.
pub const DEFAULT_SIEVE_LIMIT: u64 = 10_000_000;

/// Environment variable that overrides [`DEFAULT_SIEVE_LIMIT`].
pub const SIEVE_LIMIT_ENV: &str = "PERIOSCOPE_SIEVE_LIMIT";

/// Reads the sieve cap from the environment, falling back to the default.
pub fn sieve_limit_from_env() -> Result<u64> {
    match std::env::var(SIEVE_LIMIT_ENV) {
        Ok(raw) => raw
            .trim()
            .parse::<u64>()
            .map_err(|e| crate::Error::Parse(format!("{SIEVE_LIMIT_ENV}={raw:?}: {e}"))),
        Err(_) => Ok(DEFAULT_SIEVE_LIMIT),
    }
}

/// All primes up to `limit`, ascending, with running sums.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeTable {
    limit: u64,
    primes: Vec<u64>,
    prefix_sums: Vec<u128>,
}

impl PrimeTable {
    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn prefix_sums(&self) -> &[u128] {
        &self.prefix_sums
    }

    /// π(x) for x ≤ limit.
    pub fn pi(&self, x: u64) -> Result<usize> {
        self.check(x)?;
        Ok(self.primes.partition_point(|&q| q <= x))
    }

    pub fn is_prime(&self, n: u64) -> Result<bool> {
        self.check(n)?;
        Ok(self.primes.binary_search(&n).is_ok())
    }

    /// Primes in the closed interval `[lo, hi]`.
    pub fn primes_between(&self, lo: u64, hi: u64) -> Result<&[u64]> {
        self.check(hi)?;
        let start = self.primes.partition_point(|&q| q < lo);
        let end = self.primes.partition_point(|&q| q <= hi);
        Ok(if start >= end { &[] } else { &self.primes[start..end] })
    }

    fn check(&self, x: u64) -> Result<()> {
        if x > self.limit {
            return range(format!("{x} exceeds prime table limit {}", self.limit));
        }
        Ok(())
    }

    /// Test hook: builds a table from an arbitrary list without checking it.
    #[doc(hidden)]
    pub fn from_raw_unchecked(limit: u64, primes: Vec<u64>) -> Self {
        let prefix_sums = running_sums(&primes);
        PrimeTable { limit, primes, prefix_sums }
    }
}

fn running_sums(primes: &[u64]) -> Vec<u128> {
    primes
        .iter()
        .scan(0u128, |acc, &q| {
            *acc += q as u128;
            Some(*acc)
        })
        .collect()
}

/// Sieve of Eratosthenes over `[0, limit]`.
pub fn sieve_primes(limit: u64) -> Result<PrimeTable> {
    if limit < 2 {
        return domain(format!("sieve limit must be at least 2, got {limit}"));
    }
    let n = usize::try_from(limit).map_err(|_| crate::Error::Range(format!("sieve limit {limit} too large")))?;
    let mut composite = vec![false; n + 1];
    let mut i = 2usize;
    while i * i <= n {
        if !composite[i] {
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
        i += 1;
    }
    let primes: Vec<u64> = (2..=n).filter(|&k| !composite[k]).map(|k| k as u64).collect();
    let prefix_sums = running_sums(&primes);
    Ok(PrimeTable { limit, primes, prefix_sums })
}

/// Trial-division primality, for the small moduli used to build maps.
pub fn is_prime_small(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// `base^exp mod modulus`, with 128-bit intermediates.
pub fn mod_pow(base: u64, exp: u64, modulus: u64) -> u64 {
    debug_assert!(modulus >= 2);
    if modulus <= u32::MAX as u64 {
        let mut result = 1 % modulus;
        let mut b = base % modulus;
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                result = result * b % modulus;
            }
            b = b * b % modulus;
            e >>= 1;
        }
        return result;
    }
    let m = modulus as u128;
    let mut result = 1u128 % m;
    let mut b = base as u128 % m;
    let mut e = exp;
    while e > 0 {
        if e & 1 == 1 {
            result = result * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    result as u64
}

/// Least non-negative residue of a signed integer.
pub fn reduce_signed(c: i64, modulus: u64) -> u64 {
    (c as i128).rem_euclid(modulus as i128) as u64
}

/// Prime-factor statistics of a positive integer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct ArithProfile {
    pub c: u64,
    /// ω(c), distinct prime divisors.
    pub omega_all: u32,
    /// Distinct odd prime divisors.
    pub omega_odd: u32,
    /// Ω(c), prime divisors with multiplicity.
    pub big_omega: u32,
    /// σ₀(c), number of positive divisors.
    pub divisor_count: u64,
    /// σ_{1,p}(c): sum of the distinct odd primes dividing c.
    pub sum_odd_prime_divisors: u64,
}

/// Factors `c` by trial division and tallies its prime-divisor statistics.
pub fn arith_profile(c: u64) -> Result<ArithProfile> {
    if c == 0 {
        return domain("arith_profile needs c >= 1");
    }
    let mut profile = ArithProfile {
        c,
        omega_all: 0,
        omega_odd: 0,
        big_omega: 0,
        divisor_count: 1,
        sum_odd_prime_divisors: 0,
    };
    let mut rest = c;
    let record = |q: u64, mult: u32, profile: &mut ArithProfile| {
        profile.omega_all += 1;
        profile.big_omega += mult;
        profile.divisor_count *= mult as u64 + 1;
        if q != 2 {
            profile.omega_odd += 1;
            profile.sum_odd_prime_divisors += q;
        }
    };
    let mut q = 2u64;
    while q.saturating_mul(q) <= rest {
        if rest.is_multiple_of(q) {
            let mut mult = 0;
            while rest.is_multiple_of(q) {
                rest /= q;
                mult += 1;
            }
            record(q, mult, &mut profile);
        }
        q += if q == 2 { 1 } else { 2 };
    }
    if rest > 1 {
        record(rest, 1, &mut profile);
    }
    Ok(profile)
}

/// Which primes a prime sum ranges over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrimeSumRange {
    All,
    /// `3 ≤ p ≤ c`.
    OddOnly,
}

/// Σ p over primes `p ≤ c`, read off the prefix sums.
pub fn sum_primes_upto(c: u64, table: &PrimeTable, which: PrimeSumRange) -> Result<u128> {
    let count = table.pi(c)?;
    if count == 0 {
        return Ok(0);
    }
    let total = table.prefix_sums[count - 1];
    Ok(match which {
        PrimeSumRange::All => total,
        PrimeSumRange::OddOnly => total - 2,
    })
}

/// Main term of the asymptotic for the sum of the first `n` primes:
/// `n²/2 · (ln n + ln ln n − 3/2 + (ln ln n − 5/2)/ln n)`.
pub fn first_primes_sum_main_term(n: f64) -> Result<f64> {
    if n.is_nan() || n < 2.0 {
        return domain(format!("main term needs n >= 2, got {n}"));
    }
    let l = n.ln();
    let ll = l.ln();
    Ok(n * n / 2.0 * (l + ll - 1.5 + (ll - 2.5) / l))
}

/// Reference value for Σ_{p ≤ c} p: the first-n-primes main term taken at n = π(c).
pub fn ref_sum_primes_asymptotic(c: u64, table: &PrimeTable) -> Result<f64> {
    if c < 3 {
        return domain(format!("asymptotic reference needs c >= 3, got {c}"));
    }
    let n = table.pi(c)?;
    first_primes_sum_main_term(n as f64)
}

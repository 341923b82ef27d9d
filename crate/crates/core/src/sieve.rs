//! Linear sieve (smallest prime factor table) and the von Mangoldt function.

use std::sync::{Arc, OnceLock, RwLock};

/// Largest table the shared sieve grows to; beyond it values fall back to
/// trial division.
pub const SIEVE_CAP: u64 = 10_000_000;

#[derive(Debug, Clone)]
pub struct Sieve {
    spf: Vec<u32>,
    primes: Vec<u32>,
}

impl Sieve {
    pub fn new(limit: u64) -> Sieve {
        let n = limit.max(2) as usize;
        let mut spf = vec![0u32; n + 1];
        let mut primes = Vec::new();
        for i in 2..=n {
            if spf[i] == 0 {
                spf[i] = i as u32;
                primes.push(i as u32);
            }
            let si = spf[i];
            for &p in &primes {
                let m = i * p as usize;
                if p > si || m > n {
                    break;
                }
                spf[m] = p;
            }
        }
        Sieve { spf, primes }
    }

    pub fn limit(&self) -> u64 {
        (self.spf.len() - 1) as u64
    }

    pub fn primes(&self) -> &[u32] {
        &self.primes
    }

    pub fn smallest_factor(&self, n: u64) -> Option<u64> {
        if n < 2 || n > self.limit() {
            return None;
        }
        Some(self.spf[n as usize] as u64)
    }

    pub fn is_prime(&self, n: u64) -> bool {
        self.smallest_factor(n) == Some(n)
    }

    /// Λ(n) for n within the table.
    pub fn von_mangoldt(&self, n: u64) -> f64 {
        match self.prime_power_base(n) {
            Some(p) => (p as f64).ln(),
            None => 0.0,
        }
    }

    /// p if n = p^k with k ≥ 1.
    pub fn prime_power_base(&self, n: u64) -> Option<u64> {
        let p = self.smallest_factor(n)?;
        let mut m = n;
        while m.is_multiple_of(p) {
            m /= p;
        }
        (m == 1).then_some(p)
    }
}

fn prime_power_base_slow(n: u64) -> Option<u64> {
    if n < 2 {
        return None;
    }
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut m = n;
            while m.is_multiple_of(p) {
                m /= p;
            }
            return (m == 1).then_some(p);
        }
        p += 1;
    }
    Some(n)
}

fn shared() -> &'static RwLock<Arc<Sieve>> {
    static SHARED: OnceLock<RwLock<Arc<Sieve>>> = OnceLock::new();
    SHARED.get_or_init(|| RwLock::new(Arc::new(Sieve::new(1 << 16))))
}

/// A sieve covering at least `n` (up to [`SIEVE_CAP`]), shared process-wide.
pub fn sieve_to(n: u64) -> Arc<Sieve> {
    let want = n.min(SIEVE_CAP);
    {
        let current = shared().read().expect("sieve lock poisoned");
        if current.limit() >= want {
            return Arc::clone(&current);
        }
    }
    let mut guard = shared().write().expect("sieve lock poisoned");
    if guard.limit() < want {
        let size = (guard.limit() * 2).max(want).min(SIEVE_CAP);
        *guard = Arc::new(Sieve::new(size));
    }
    Arc::clone(&guard)
}

/// p if n is a power of the prime p.
pub fn prime_power_base(n: u64) -> Option<u64> {
    if n > SIEVE_CAP {
        return prime_power_base_slow(n);
    }
    sieve_to(n).prime_power_base(n)
}

pub fn von_mangoldt(n: u64) -> f64 {
    prime_power_base(n).map_or(0.0, |p| (p as f64).ln())
}

pub fn is_prime(n: u64) -> bool {
    prime_power_base(n) == Some(n)
}

/// Prime factorisation as (p, e) pairs in increasing p.
pub fn factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn euler_phi(n: u64) -> u64 {
    factor(n)
        .iter()
        .fold(n, |acc, &(p, _)| acc / p * (p - 1))
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

//! Small-prime utilities: sieve and deterministic Miller-Rabin for `u64`.

use crate::error::{Error, Result};

/// All primes `<= n`, ascending.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        out.push(i as u64);
        let mut j = i.saturating_mul(i);
        while j <= n {
            composite[j] = true;
            j += i;
        }
    }
    out
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
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

/// Deterministic for every `u64`: the first twelve prime bases suffice below 3.3e24.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &b in &BASES {
        if n.is_multiple_of(b) {
            return n == b;
        }
    }
    let mut d = n - 1;
    let mut r = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        r += 1;
    }
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..r {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub(crate) fn require_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p))
    }
}

/// Modular inverse for prime `p`; `a` must be nonzero mod `p`.
pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sieve_matches_trial_division() {
        let sieved = primes_up_to(1000);
        let trial: Vec<u64> = (2..=1000u64)
            .filter(|&n| (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0))
            .collect();
        assert_eq!(sieved, trial);
        assert_eq!(primes_up_to(10_000).len(), 1229);
    }

    #[test]
    fn miller_rabin_agrees_with_sieve() {
        let sieved = primes_up_to(20_000);
        for n in 0..20_000u64 {
            assert_eq!(is_prime(n), sieved.binary_search(&n).is_ok(), "n = {n}");
        }
    }

    #[test]
    fn miller_rabin_large() {
        assert!(is_prime(18446744073709551557));
        assert!(!is_prime(18446744073709551557 - 2));
        // strong pseudoprime to bases 2..=37 would need > 3.3e24
        assert!(!is_prime(3825123056546413051));
        assert!(is_prime(1_000_000_007));
    }
}

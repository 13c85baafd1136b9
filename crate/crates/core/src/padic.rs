//! p-adic valuations and lazy Haar sampling of p-adic integers.
//!
//! A Haar-distributed element of Z_p is a digit sequence with independent
//! uniform digits. [`ResidueStream`] materializes a prefix of those digits
//! and extends it on demand; the digit at position `k` is fixed by the
//! stream key alone, so every extension is consistent with the last one.

use std::cmp::Ordering;
use std::ops::Add;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::finitefield::{reduce_mod_p, shared_nvars, PolyModP};
use crate::polyring::MultiPoly;
use crate::primes::require_prime;
use crate::rng::keyed_rng;

/// Initial number of digits drawn per stream.
pub const INITIAL_DEPTH: u32 = 8;
/// Default censoring cap for sampled valuations.
pub const DEFAULT_CAP: u32 = 64;

/// `lambda_p(n)`, with `lambda_p(0) = +inf`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Valuation {
    Finite(u64),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<u64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }
}

impl Ord for Valuation {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Valuation::Finite(a), Valuation::Finite(b)) => a.cmp(b),
            (Valuation::Finite(_), Valuation::Infinite) => Ordering::Less,
            (Valuation::Infinite, Valuation::Finite(_)) => Ordering::Greater,
            (Valuation::Infinite, Valuation::Infinite) => Ordering::Equal,
        }
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for Valuation {
    type Output = Valuation;
    fn add(self, rhs: Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinite,
        }
    }
}

/// Exponent of `p` in `|n|`.
pub fn valuation_int(n: &BigInt, p: u64) -> Result<Valuation> {
    require_prime(p)?;
    Ok(valuation_unchecked(n, p))
}

pub(crate) fn valuation_unchecked(n: &BigInt, p: u64) -> Valuation {
    if n.is_zero() {
        return Valuation::Infinite;
    }
    if let Some(mut m) = n.to_i128() {
        let p = p as i128;
        let mut v = 0;
        while m % p == 0 {
            m /= p;
            v += 1;
        }
        return Valuation::Finite(v);
    }
    let pb = BigInt::from(p);
    let mut m = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = m.div_rem(&pb);
        if !r.is_zero() {
            return Valuation::Finite(v);
        }
        m = q;
        v += 1;
    }
}

/// Prefix `x mod p^depth` of a Haar-random p-adic integer.
#[derive(Clone, Debug)]
pub struct ResidueStream {
    p: u64,
    digits: SmallVec<[u64; INITIAL_DEPTH as usize]>,
    rng: ChaCha8Rng,
}

impl ResidueStream {
    /// Stream for `(seed, prime, trial, variable)`, with `depth >= 1` digits drawn.
    pub fn new(p: u64, depth: u32, seed: u64, trial: u64, var: u64) -> Self {
        Self::from_rng(p, depth, keyed_rng(seed, p, trial, var))
    }

    pub fn from_rng(p: u64, depth: u32, rng: ChaCha8Rng) -> Self {
        assert!(p >= 2, "modulus must be prime");
        let mut s = ResidueStream {
            p,
            digits: SmallVec::new(),
            rng,
        };
        s.extend(depth.max(1));
        s
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn depth(&self) -> u32 {
        self.digits.len() as u32
    }

    pub fn digits(&self) -> &[u64] {
        &self.digits
    }

    /// Lowest digit, i.e. the residue mod p.
    pub fn first_digit(&self) -> u64 {
        self.digits[0]
    }

    /// The residue in `[0, p^depth)`.
    pub fn residue(&self) -> BigUint {
        let p = BigUint::from(self.p);
        self.digits
            .iter()
            .rev()
            .fold(BigUint::zero(), |acc, &d| acc * &p + BigUint::from(d))
    }

    pub fn modulus(&self) -> BigUint {
        BigUint::from(self.p).pow(self.depth())
    }

    /// Draws fresh digits up to `new_depth`; a no-op if already that deep.
    pub fn extend(&mut self, new_depth: u32) {
        #[cfg(debug_assertions)]
        let before = (self.depth() > 0).then(|| (self.residue(), self.modulus()));
        while self.depth() < new_depth {
            let d = self.rng.random_range(0..self.p);
            self.digits.push(d);
        }
        #[cfg(debug_assertions)]
        if let Some((r, m)) = before {
            assert_eq!(self.residue() % m, r, "digit filtration violated");
        }
    }
}

/// Sampled valuation: exact below the cap, otherwise censored.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SampledValuation {
    Exact(u32),
    Censored(u32),
}

impl SampledValuation {
    pub fn is_censored(self) -> bool {
        matches!(self, SampledValuation::Censored(_))
    }

    /// Censored values count as the cap.
    pub fn value(self) -> u32 {
        match self {
            SampledValuation::Exact(v) | SampledValuation::Censored(v) => v,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValuationSample {
    pub p: u64,
    pub vals: Vec<SampledValuation>,
}

/// Samples `lambda_p(f_i(V_1..V_s))` for fixed `fs` and `p` with one shared
/// tuple of streams per trial.
#[derive(Clone, Debug)]
pub struct ValuationSampler {
    p: u64,
    cap: u32,
    nvars: usize,
    polys: Vec<MultiPoly>,
    reduced: Vec<PolyModP>,
}

impl ValuationSampler {
    pub fn new(fs: &[MultiPoly], p: u64, cap: u32) -> Result<Self> {
        let nvars = shared_nvars(fs)?;
        if cap == 0 {
            return Err(Error::InvalidInput("cap must be >= 1".into()));
        }
        let reduced = fs
            .iter()
            .map(|f| reduce_mod_p(f, p))
            .collect::<Result<Vec<_>>>()?;
        Ok(ValuationSampler {
            p,
            cap,
            nvars,
            polys: fs.to_vec(),
            reduced,
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn cap(&self) -> u32 {
        self.cap
    }

    /// One joint draw, determined by `(seed, p, trial)`.
    pub fn sample(&self, seed: u64, trial: u64) -> ValuationSample {
        let d0 = INITIAL_DEPTH.min(self.cap);
        let mut streams: Vec<ResidueStream> = (0..self.nvars)
            .map(|v| ResidueStream::new(self.p, d0, seed, trial, v as u64))
            .collect();
        let low: SmallVec<[u64; 4]> = streams.iter().map(ResidueStream::first_digit).collect();
        let vals = self
            .polys
            .iter()
            .zip(&self.reduced)
            .map(|(f, fp)| {
                if fp.eval(&low) != 0 {
                    SampledValuation::Exact(0)
                } else {
                    self.resolve(f, &mut streams)
                }
            })
            .collect();
        ValuationSample { p: self.p, vals }
    }

    /// Deepens every stream until `f(residues) mod p^depth` is nonzero or the cap is hit.
    fn resolve(&self, f: &MultiPoly, streams: &mut [ResidueStream]) -> SampledValuation {
        loop {
            let depth = streams.first().map_or(self.cap, ResidueStream::depth);
            let point: Vec<BigInt> = streams.iter().map(|s| BigInt::from(s.residue())).collect();
            let modulus = BigInt::from(self.p).pow(depth);
            let value = f.eval(&point).expect("nvars checked").mod_floor(&modulus);
            if !value.is_zero() {
                let v = valuation_unchecked(&value, self.p)
                    .finite()
                    .expect("nonzero value");
                debug_assert!(v < depth as u64);
                return SampledValuation::Exact(v as u32);
            }
            if depth >= self.cap || streams.is_empty() {
                return SampledValuation::Censored(self.cap);
            }
            let next = (depth * 2).min(self.cap);
            for s in streams.iter_mut() {
                s.extend(next);
            }
        }
    }
}

/// Convenience wrapper around [`ValuationSampler`].
pub fn sample_valuations(
    fs: &[MultiPoly],
    p: u64,
    cap: u32,
    seed: u64,
    trial: u64,
) -> Result<ValuationSample> {
    Ok(ValuationSampler::new(fs, p, cap)?.sample(seed, trial))
}

/// `p^k` as a big integer.
pub fn prime_power(p: u64, k: u32) -> BigUint {
    BigUint::from(p).pow(k)
}

//! Finite-n experiments: polynomial values at uniform points of `{1..n}^s`.

mod compare;

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::finitefield::shared_nvars;
use crate::padic::valuation_unchecked;
use crate::polyring::MultiPoly;
use crate::primes::require_prime;
use crate::rng::{keyed_rng, TAG_FINITE_TRIAL};

pub use compare::{compare_distributions, ks_two_sample, Comparison, Reference};

/// Gcd, lcm and normalized lcm of a multiset of integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultisetStats {
    pub gcd: BigUint,
    pub lcm: BigUint,
    pub nlcm: BigRational,
}

/// Absolute values are used throughout. Zeros are dropped for gcd and
/// nlcm, and force the lcm to zero.
pub fn multiset_gcd_lcm_nlcm(values: &[BigInt]) -> Result<MultisetStats> {
    let nonzero: Vec<BigUint> = values
        .iter()
        .filter(|v| !v.is_zero())
        .map(|v| v.magnitude().clone())
        .collect();
    if nonzero.is_empty() {
        return Err(Error::Degenerate("gcd of an all-zero multiset".into()));
    }
    let mut gcd = BigUint::zero();
    let mut lcm = BigUint::one();
    let mut prod = BigUint::one();
    for v in &nonzero {
        gcd = gcd.gcd(v);
        lcm = lcm.lcm(v);
        prod *= v;
    }
    if let [a, b] = &nonzero[..] {
        debug_assert_eq!(&gcd * &lcm, a * b);
    }
    let nlcm = BigRational::new(BigInt::from(lcm.clone()), BigInt::from(prod));
    debug_assert!(nlcm.numer().is_one() && nlcm <= BigRational::one());
    let lcm = if nonzero.len() < values.len() {
        BigUint::zero()
    } else {
        lcm
    };
    Ok(MultisetStats { gcd, lcm, nlcm })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Statistic {
    Gcd,
    Lcm,
    Nlcm,
    /// `LCM / n^(d_1 + .. + d_m)` with `d_i` the total degrees.
    ScaledLcm,
}

impl Statistic {
    pub fn name(self) -> &'static str {
        match self {
            Statistic::Gcd => "gcd",
            Statistic::Lcm => "lcm",
            Statistic::Nlcm => "nlcm",
            Statistic::ScaledLcm => "scaled-lcm",
        }
    }
}

#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub n: u64,
    pub trials: u64,
    pub seed: u64,
    pub fs: Vec<MultiPoly>,
    pub statistic: Statistic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SupportKind {
    Integer,
    Rational,
}

/// Counts over exact values. Trials where every value vanished are kept in
/// `degenerate` and are not part of `counts`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmpiricalDist {
    pub kind: SupportKind,
    pub counts: BTreeMap<BigRational, u64>,
    pub total: u64,
    pub degenerate: u64,
    pub seed: Option<u64>,
}

impl EmpiricalDist {
    pub fn new(kind: SupportKind) -> Self {
        EmpiricalDist {
            kind,
            counts: BTreeMap::new(),
            total: 0,
            degenerate: 0,
            seed: None,
        }
    }

    pub fn from_integers<I: IntoIterator<Item = BigInt>>(values: I) -> Self {
        let mut d = EmpiricalDist::new(SupportKind::Integer);
        for v in values {
            d.push(BigRational::from_integer(v));
        }
        d
    }

    pub fn from_rationals<I: IntoIterator<Item = BigRational>>(values: I) -> Self {
        let mut d = EmpiricalDist::new(SupportKind::Rational);
        for v in values {
            d.push(v);
        }
        d
    }

    /// Reals are stored as the exact rational value of each `f64`.
    pub fn from_f64s<I: IntoIterator<Item = f64>>(values: I) -> Result<Self> {
        let mut d = EmpiricalDist::new(SupportKind::Rational);
        for v in values {
            let r = BigRational::from_float(v)
                .ok_or_else(|| Error::InvalidInput(format!("non-finite sample {v}")))?;
            d.push(r);
        }
        Ok(d)
    }

    pub fn push(&mut self, v: BigRational) {
        *self.counts.entry(v).or_insert(0) += 1;
        self.total += 1;
    }

    fn merge(mut self, other: EmpiricalDist) -> EmpiricalDist {
        for (v, c) in other.counts {
            *self.counts.entry(v).or_insert(0) += c;
        }
        self.total += other.total;
        self.degenerate += other.degenerate;
        self
    }

    /// Relative frequency among non-degenerate trials.
    pub fn frequency(&self, v: &BigRational) -> f64 {
        if self.total == 0 {
            return 0.0;
        }
        self.counts.get(v).copied().unwrap_or(0) as f64 / self.total as f64
    }

    pub fn frequency_of_integer(&self, j: u64) -> f64 {
        self.frequency(&BigRational::from_integer(BigInt::from(j)))
    }

    /// One entry per sample, in increasing order.
    pub fn to_f64_samples(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.total as usize);
        for (v, &c) in &self.counts {
            let x = v.to_f64().unwrap_or(f64::NAN);
            out.extend(std::iter::repeat_n(x, c as usize));
        }
        out
    }
}

fn check_config(cfg: &ExperimentConfig) -> Result<usize> {
    if cfg.n == 0 {
        return Err(Error::InvalidInput("n must be >= 1".into()));
    }
    if cfg.trials == 0 {
        return Err(Error::InvalidInput("trials must be >= 1".into()));
    }
    let s = shared_nvars(&cfg.fs)?;
    if cfg.statistic == Statistic::ScaledLcm && cfg.fs.iter().any(MultiPoly::is_zero) {
        return Err(Error::ZeroPolynomial);
    }
    Ok(s)
}

/// Point of `{1..n}^s` for one trial; a pure function of `(seed, trial)`.
pub fn uniform_point(n: u64, s: usize, seed: u64, trial: u64) -> Vec<u64> {
    let mut rng = keyed_rng(seed, TAG_FINITE_TRIAL, trial, 0);
    (0..s).map(|_| rng.random_range(1..=n)).collect()
}

const CHUNK: u64 = 1024;

pub fn sample_statistic(cfg: &ExperimentConfig) -> Result<EmpiricalDist> {
    let s = check_config(cfg)?;
    let kind = match cfg.statistic {
        Statistic::Gcd | Statistic::Lcm => SupportKind::Integer,
        Statistic::Nlcm | Statistic::ScaledLcm => SupportKind::Rational,
    };
    let scale = match cfg.statistic {
        Statistic::ScaledLcm => {
            let d: u32 = cfg
                .fs
                .iter()
                .map(|f| f.total_degree().finite().unwrap_or(0))
                .sum();
            BigInt::from(cfg.n).pow(d)
        }
        _ => BigInt::one(),
    };
    let chunks = cfg.trials.div_ceil(CHUNK);
    let dist = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut local = EmpiricalDist::new(kind);
            let end = ((c + 1) * CHUNK).min(cfg.trials);
            for trial in c * CHUNK..end {
                let point: Vec<BigInt> = uniform_point(cfg.n, s, cfg.seed, trial)
                    .into_iter()
                    .map(BigInt::from)
                    .collect();
                let values: Vec<BigInt> = cfg
                    .fs
                    .iter()
                    .map(|f| f.eval(&point).expect("nvars checked"))
                    .collect();
                let Ok(stats) = multiset_gcd_lcm_nlcm(&values) else {
                    local.degenerate += 1;
                    continue;
                };
                let v = match cfg.statistic {
                    Statistic::Gcd => BigRational::from_integer(stats.gcd.into()),
                    Statistic::Lcm => BigRational::from_integer(stats.lcm.into()),
                    Statistic::Nlcm => stats.nlcm,
                    Statistic::ScaledLcm => {
                        BigRational::new(BigInt::from(stats.lcm), scale.clone())
                    }
                };
                local.push(v);
            }
            local
        })
        .reduce(|| EmpiricalDist::new(kind), EmpiricalDist::merge);
    Ok(EmpiricalDist {
        seed: Some(cfg.seed),
        ..dist
    })
}

/// Proportion estimate with its normal-approximation standard error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate {
    pub p_hat: f64,
    pub se: f64,
    pub hits: u64,
    pub trials: u64,
}

impl Estimate {
    pub fn from_counts(hits: u64, trials: u64) -> Self {
        let p_hat = hits as f64 / trials as f64;
        Estimate {
            p_hat,
            se: (p_hat * (1.0 - p_hat) / trials as f64).sqrt(),
            hits,
            trials,
        }
    }
}

fn divides(a: &BigInt, b: &BigInt) -> bool {
    if a.is_zero() {
        b.is_zero()
    } else {
        (b % a).is_zero()
    }
}

/// Frequency of `f(U) | g(U)` for `U` uniform on `{1..n}^s`.
pub fn divisibility_probability(
    f: &MultiPoly,
    g: &MultiPoly,
    n: u64,
    trials: u64,
    seed: u64,
) -> Result<Estimate> {
    let s = shared_nvars(&[f.clone(), g.clone()])?;
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if n == 0 || trials == 0 {
        return Err(Error::InvalidInput("n and trials must be >= 1".into()));
    }
    let chunks = trials.div_ceil(CHUNK);
    let hits: u64 = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let end = ((c + 1) * CHUNK).min(trials);
            (c * CHUNK..end)
                .filter(|&trial| {
                    let point: Vec<BigInt> = uniform_point(n, s, seed, trial)
                        .into_iter()
                        .map(BigInt::from)
                        .collect();
                    divides(
                        &f.eval(&point).expect("dims"),
                        &g.eval(&point).expect("dims"),
                    )
                })
                .count() as u64
        })
        .sum();
    Ok(Estimate::from_counts(hits, trials))
}

/// Largest point count accepted by the exhaustive routines.
pub const MAX_ENUMERATION: u64 = 10_000_000;

fn for_each_point(n: u64, s: usize, mut visit: impl FnMut(&[BigInt])) -> Result<u64> {
    let total = (n as u128).checked_pow(s as u32).unwrap_or(u128::MAX);
    if total > MAX_ENUMERATION as u128 {
        return Err(Error::BudgetExceeded {
            points: total,
            budget: MAX_ENUMERATION,
        });
    }
    let mut point = vec![BigInt::one(); s];
    let mut idx = vec![1u64; s];
    for _ in 0..total {
        visit(&point);
        for k in (0..s).rev() {
            if idx[k] < n {
                idx[k] += 1;
                point[k] = BigInt::from(idx[k]);
                break;
            }
            idx[k] = 1;
            point[k] = BigInt::one();
        }
    }
    Ok(total as u64)
}

/// Exact probability of `f(U) | g(U)` by enumerating `{1..n}^s`.
pub fn divisibility_probability_exact(f: &MultiPoly, g: &MultiPoly, n: u64) -> Result<BigRational> {
    let s = shared_nvars(&[f.clone(), g.clone()])?;
    let mut hits = 0u64;
    let total = for_each_point(n, s, |pt| {
        if divides(&f.eval(pt).expect("dims"), &g.eval(pt).expect("dims")) {
            hits += 1;
        }
    })?;
    Ok(BigRational::new(hits.into(), total.into()))
}

/// Exact law of a statistic by enumerating `{1..n}^s`.
pub fn statistic_exact(fs: &[MultiPoly], n: u64, statistic: Statistic) -> Result<EmpiricalDist> {
    let cfg = ExperimentConfig {
        n,
        trials: 1,
        seed: 0,
        fs: fs.to_vec(),
        statistic,
    };
    let s = check_config(&cfg)?;
    let d: u32 = fs
        .iter()
        .map(|f| f.total_degree().finite().unwrap_or(0))
        .sum();
    let scale = BigInt::from(n).pow(d);
    let kind = match statistic {
        Statistic::Gcd | Statistic::Lcm => SupportKind::Integer,
        _ => SupportKind::Rational,
    };
    let mut dist = EmpiricalDist::new(kind);
    for_each_point(n, s, |pt| {
        let values: Vec<BigInt> = fs.iter().map(|f| f.eval(pt).expect("dims")).collect();
        match multiset_gcd_lcm_nlcm(&values) {
            Ok(st) => dist.push(match statistic {
                Statistic::Gcd => BigRational::from_integer(st.gcd.into()),
                Statistic::Lcm => BigRational::from_integer(st.lcm.into()),
                Statistic::Nlcm => st.nlcm,
                Statistic::ScaledLcm => BigRational::new(st.lcm.into(), scale.clone()),
            }),
            Err(_) => dist.degenerate += 1,
        }
    })?;
    Ok(dist)
}

/// One row of a valuation tail table.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TailRow {
    pub k: u32,
    pub estimate: Estimate,
    /// `p^-k`, the limiting tail.
    pub limit: f64,
}

/// Estimates `P{lambda_p(U_n) >= k}` for `k = 0..=k_max`.
pub fn valuation_empirics(
    p: u64,
    n: u64,
    trials: u64,
    k_max: u32,
    seed: u64,
) -> Result<Vec<TailRow>> {
    require_prime(p)?;
    if k_max == 0 || n == 0 || trials == 0 {
        return Err(Error::InvalidInput(
            "n, trials and k_max must be >= 1".into(),
        ));
    }
    let mut tail = vec![0u64; k_max as usize + 1];
    for trial in 0..trials {
        let u = uniform_point(n, 1, seed, trial)[0];
        let v = valuation_unchecked(&BigInt::from(u), p)
            .finite()
            .expect("u >= 1");
        for slot in tail.iter_mut().take((v as usize).min(k_max as usize) + 1) {
            *slot += 1;
        }
    }
    Ok(tail
        .iter()
        .enumerate()
        .map(|(k, &hits)| TailRow {
            k: k as u32,
            estimate: Estimate::from_counts(hits, trials),
            limit: (p as f64).powi(-(k as i32)),
        })
        .collect())
}

/// `P{lambda_p(U_n) >= k} = floor(n / p^k) / n` exactly.
pub fn valuation_tail_exact(p: u64, n: u64, k: u32) -> Result<BigRational> {
    require_prime(p)?;
    if n == 0 {
        return Err(Error::InvalidInput("n must be >= 1".into()));
    }
    let pk = BigInt::from(p).pow(k);
    let n = BigInt::from(n);
    Ok(BigRational::new(n.div_floor(&pk), n))
}

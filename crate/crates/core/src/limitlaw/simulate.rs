//! Monte Carlo of the limiting gcd and normalized lcm laws.
//!
//! Each trial draws one Haar point `V` per prime `p <= pmax` (streams keyed by
//! `(seed, p, trial, var)`) and combines the valuations `lambda_p(f_i(V))`.
//! Calls with the same seed see the same draws, so statistics computed by
//! different functions are jointly distributed.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use rand::RngCore;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::euclid::has_common_factor;
use crate::finitefield::{count_common_zeros, shared_nvars, DEFAULT_BUDGET};
use crate::montecarlo::EmpiricalDist;
use crate::padic::{SampledValuation, ValuationSampler, DEFAULT_CAP};
use crate::polyring::MultiPoly;
use crate::primes::primes_up_to;
use crate::rng::{keyed_rng, TAG_UNIFORM_POINT};

use super::density::fit_tail_constant;

/// Default prime cutoff for valuation simulation.
pub const DEFAULT_SIM_PMAX: u64 = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SimulationConfig {
    pub trials: u64,
    pub pmax: u64,
    pub cap: u32,
    pub seed: u64,
    /// Enumeration budget for the tail estimate; the estimate is skipped
    /// when the top-decade counts do not fit.
    pub budget: u64,
}

impl SimulationConfig {
    pub fn new(trials: u64, seed: u64) -> Self {
        SimulationConfig {
            trials,
            pmax: DEFAULT_SIM_PMAX,
            cap: DEFAULT_CAP,
            seed,
            budget: DEFAULT_BUDGET,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum LimitSamples {
    Gcd(Vec<BigUint>),
    /// `L` exactly, always of the form `1/k`.
    Nlcm(Vec<BigRational>),
    ScaledLcm(Vec<f64>),
}

/// Borel-Cantelli style estimate of the mass lost by truncating at `pmax`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TailEstimate {
    /// Fitted `c` (safety factor included).
    pub constant: f64,
    /// `c / pmax`, bounding `sum_{p > pmax} c p^-2`.
    pub mass_bound: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LimitSampleSet {
    pub samples: LimitSamples,
    /// Number of valuation draws that hit the cap.
    pub censored: u64,
    pub pmax: u64,
    pub cap: u32,
    pub seed: u64,
    pub trials: u64,
    pub tail: Option<TailEstimate>,
}

impl LimitSampleSet {
    pub fn to_empirical(&self) -> Result<EmpiricalDist> {
        let mut d = match &self.samples {
            LimitSamples::Gcd(v) => {
                EmpiricalDist::from_integers(v.iter().map(|g| BigInt::from(g.clone())))
            }
            LimitSamples::Nlcm(v) => EmpiricalDist::from_rationals(v.iter().cloned()),
            LimitSamples::ScaledLcm(v) => EmpiricalDist::from_f64s(v.iter().copied())?,
        };
        d.seed = Some(self.seed);
        Ok(d)
    }
}

fn check_config(cfg: &SimulationConfig) -> Result<()> {
    if cfg.trials == 0 {
        return Err(Error::InvalidInput("trials must be >= 1".into()));
    }
    if cfg.cap == 0 {
        return Err(Error::InvalidInput("cap must be >= 1".into()));
    }
    if cfg.pmax < 2 {
        return Err(Error::InvalidInput("pmax must be >= 2".into()));
    }
    Ok(())
}

fn require_pairwise_coprime(fs: &[MultiPoly]) -> Result<()> {
    if fs.iter().any(MultiPoly::is_zero) {
        return Err(Error::ZeroPolynomial);
    }
    for i in 0..fs.len() {
        for j in i + 1..fs.len() {
            if has_common_factor(&[fs[i].clone(), fs[j].clone()])? {
                return Err(Error::CommonFactor);
            }
        }
    }
    Ok(())
}

fn samplers(fs: &[MultiPoly], cfg: &SimulationConfig) -> Result<Vec<ValuationSampler>> {
    primes_up_to(cfg.pmax)
        .into_iter()
        .map(|p| ValuationSampler::new(fs, p, cfg.cap))
        .collect()
}

/// Runs all trials in order; `per_prime` folds the valuations at one prime into
/// the trial's accumulator.
fn run_trials<A, T>(
    samplers: &[ValuationSampler],
    cfg: &SimulationConfig,
    init: impl Fn() -> A + Sync,
    per_prime: impl Fn(&mut A, u64, &[SampledValuation]) + Sync,
    finish: impl Fn(A, u64) -> T + Sync,
) -> (Vec<T>, u64)
where
    T: Send,
{
    let out: Vec<(T, u64)> = (0..cfg.trials)
        .into_par_iter()
        .map(|trial| {
            let mut acc = init();
            let mut censored = 0;
            for sampler in samplers {
                let draw = sampler.sample(cfg.seed, trial);
                censored += draw.vals.iter().filter(|v| v.is_censored()).count() as u64;
                per_prime(&mut acc, draw.p, &draw.vals);
            }
            (finish(acc, trial), censored)
        })
        .collect();
    let censored = out.iter().map(|(_, c)| c).sum();
    (out.into_iter().map(|(t, _)| t).collect(), censored)
}

/// Sum over tuples of common zero counts, fitted over the top decade of primes.
fn tail_estimate(
    groups: &[Vec<MultiPoly>],
    s: usize,
    cfg: &SimulationConfig,
) -> Option<TailEstimate> {
    let top: Vec<u64> = primes_up_to(cfg.pmax)
        .into_iter()
        .filter(|&p| p > cfg.pmax / 10)
        .collect();
    let counts: Vec<(u64, u64)> = top
        .par_iter()
        .map(|&p| {
            groups
                .iter()
                .map(|g| count_common_zeros(g, p, cfg.budget).map(|r| r.count))
                .sum::<Result<u64>>()
                .map(|c| (p, c))
        })
        .collect::<Result<_>>()
        .ok()?;
    let constant = fit_tail_constant(&counts, s, cfg.pmax);
    Some(TailEstimate {
        constant,
        mass_bound: constant / cfg.pmax as f64,
    })
}

/// Samples `G = prod_p p^(min_i lambda_p(f_i(V)))`.
pub fn simulate_gcd(fs: &[MultiPoly], cfg: &SimulationConfig) -> Result<LimitSampleSet> {
    check_config(cfg)?;
    let s = shared_nvars(fs)?;
    if fs.len() < 2 {
        return Err(Error::InvalidInput("need at least two polynomials".into()));
    }
    if fs.iter().any(MultiPoly::is_zero) {
        return Err(Error::ZeroPolynomial);
    }
    if has_common_factor(fs)? {
        return Err(Error::CommonFactor);
    }
    let samplers = samplers(fs, cfg)?;
    let (values, censored) = run_trials(
        &samplers,
        cfg,
        BigUint::one,
        |g, p, vals| {
            let e = vals.iter().map(|v| v.value()).min().unwrap_or(0);
            if e > 0 {
                *g *= BigUint::from(p).pow(e);
            }
        },
        |g, _| g,
    );
    Ok(LimitSampleSet {
        samples: LimitSamples::Gcd(values),
        censored,
        pmax: cfg.pmax,
        cap: cfg.cap,
        seed: cfg.seed,
        trials: cfg.trials,
        tail: tail_estimate(&[fs.to_vec()], s, cfg),
    })
}

fn nlcm_denominators(
    fs: &[MultiPoly],
    cfg: &SimulationConfig,
) -> Result<(Vec<BigUint>, u64, Option<TailEstimate>)> {
    check_config(cfg)?;
    let s = shared_nvars(fs)?;
    require_pairwise_coprime(fs)?;
    let samplers = samplers(fs, cfg)?;
    let (dens, censored) = run_trials(
        &samplers,
        cfg,
        BigUint::one,
        |d, p, vals| {
            let sum: u32 = vals.iter().map(|v| v.value()).sum();
            let max = vals.iter().map(|v| v.value()).max().unwrap_or(0);
            if sum > max {
                *d *= BigUint::from(p).pow(sum - max);
            }
        },
        |d, _| d,
    );
    let pairs: Vec<Vec<MultiPoly>> = (0..fs.len())
        .flat_map(|i| (i + 1..fs.len()).map(move |j| (i, j)))
        .map(|(i, j)| vec![fs[i].clone(), fs[j].clone()])
        .collect();
    let tail = if pairs.is_empty() {
        None
    } else {
        tail_estimate(&pairs, s, cfg)
    };
    Ok((dens, censored, tail))
}

/// Samples `L = prod_p p^(max_i lambda_p - sum_i lambda_p)`, stored as `1/k`.
pub fn simulate_nlcm(fs: &[MultiPoly], cfg: &SimulationConfig) -> Result<LimitSampleSet> {
    let (dens, censored, tail) = nlcm_denominators(fs, cfg)?;
    let values = dens
        .into_iter()
        .map(|d| BigRational::new(BigInt::one(), BigInt::from(d)))
        .collect();
    Ok(LimitSampleSet {
        samples: LimitSamples::Nlcm(values),
        censored,
        pmax: cfg.pmax,
        cap: cfg.cap,
        seed: cfg.seed,
        trials: cfg.trials,
        tail,
    })
}

/// Point of `[0,1)^s` with 64-bit coordinates, keyed by `(seed, trial)`.
pub fn uniform_unit_point(s: usize, seed: u64, trial: u64) -> Vec<f64> {
    let mut rng = keyed_rng(seed, TAG_UNIFORM_POINT, trial, 0);
    (0..s)
        .map(|_| rng.next_u64() as f64 * (-64f64).exp2())
        .collect()
}

fn eval_f64(f: &MultiPoly, u: &[f64]) -> f64 {
    f.terms()
        .map(|(e, c)| {
            let mono: f64 = e
                .exps()
                .iter()
                .zip(u)
                .map(|(&k, x)| x.powi(k as i32))
                .product();
            c.to_f64().unwrap_or(f64::NAN) * mono
        })
        .sum()
}

/// Samples `L * prod_i |fbar_i(U)|` with `U` uniform on `[0,1]^s` independent
/// of `L`, where `fbar_i` is the top-degree part of `f_i`.
pub fn simulate_scaled_lcm_limit(
    fs: &[MultiPoly],
    cfg: &SimulationConfig,
) -> Result<LimitSampleSet> {
    let s = shared_nvars(fs)?;
    if fs.iter().all(MultiPoly::is_constant) {
        return Err(Error::Degenerate(
            "every polynomial is constant, so the scaling is trivial".into(),
        ));
    }
    let (dens, censored, tail) = nlcm_denominators(fs, cfg)?;
    let tops: Vec<MultiPoly> = fs
        .iter()
        .map(MultiPoly::top_homogeneous)
        .collect::<Result<_>>()?;
    let values = dens
        .into_par_iter()
        .enumerate()
        .map(|(trial, d)| {
            let u = uniform_unit_point(s, cfg.seed, trial as u64);
            let scale: f64 = tops.iter().map(|t| eval_f64(t, &u).abs()).product();
            scale / d.to_f64().unwrap_or(f64::INFINITY)
        })
        .collect();
    Ok(LimitSampleSet {
        samples: LimitSamples::ScaledLcm(values),
        censored,
        pmax: cfg.pmax,
        cap: cfg.cap,
        seed: cfg.seed,
        trials: cfg.trials,
        tail,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::limitlaw::zeta_gcd_pmf;
    use crate::montecarlo::{compare_distributions, Reference};
    use num_integer::Integer;
    use num_traits::Zero;

    fn p(text: &str, n: usize) -> MultiPoly {
        MultiPoly::parse(text, n).unwrap()
    }

    fn cfg(trials: u64, pmax: u64) -> SimulationConfig {
        SimulationConfig {
            pmax,
            ..SimulationConfig::new(trials, 99)
        }
    }

    #[test]
    fn unit_polynomial_gives_trivial_gcd() {
        let r = simulate_gcd(&[p("1", 1), p("x1", 1)], &cfg(500, 50)).unwrap();
        let LimitSamples::Gcd(v) = r.samples else {
            panic!()
        };
        assert!(v.iter().all(|g| g.is_one()));
    }

    #[test]
    fn shifted_pair_lives_on_powers_of_two() {
        let r = simulate_gcd(&[p("x1", 1), p("x1 + 2", 1)], &cfg(20_000, 50)).unwrap();
        let LimitSamples::Gcd(v) = r.samples else {
            panic!()
        };
        assert!(v.iter().all(|g| g.is_one() || *g == BigUint::from(2u32)));
        let ones = v.iter().filter(|g| g.is_one()).count() as f64 / 20_000.0;
        let se = (0.25f64 / 20_000.0).sqrt();
        assert!((ones - 0.5).abs() < 4.0 * se, "{ones}");
    }

    #[test]
    fn gcd_of_two_variables_follows_zeta_law() {
        let r = simulate_gcd(&[p("x1", 2), p("x2", 2)], &cfg(20_000, 200)).unwrap();
        let d = r.to_empirical().unwrap();
        let pmf = |j: u64| zeta_gcd_pmf(2, j).unwrap();
        let c = compare_distributions(
            &d,
            Reference::IntegerPmf {
                pmf: &pmf,
                truncate: 20,
            },
        )
        .unwrap();
        assert!(c.tv.unwrap() < 0.02, "{c:?}");
        let tail = r.tail.unwrap();
        assert_eq!(tail.constant, 4.0);
    }

    #[test]
    fn nlcm_is_reciprocal_gcd_for_pairs() {
        let fs = [p("x1", 2), p("x2", 2)];
        let c = cfg(2000, 100);
        let LimitSamples::Gcd(g) = simulate_gcd(&fs, &c).unwrap().samples else {
            panic!()
        };
        let LimitSamples::Nlcm(l) = simulate_nlcm(&fs, &c).unwrap().samples else {
            panic!()
        };
        for (g, l) in g.iter().zip(&l) {
            assert!(l.numer().is_one());
            assert_eq!(l.denom(), &BigInt::from(g.clone()));
        }
    }

    #[test]
    fn nlcm_support_and_constants() {
        let intro = [
            p("x1^2 + x2^2", 2),
            p("x1^3 + x2^3", 2),
            p("x1^4 + x2^4", 2),
        ];
        let r = simulate_nlcm(&intro, &cfg(500, 100)).unwrap();
        let LimitSamples::Nlcm(v) = &r.samples else {
            panic!()
        };
        assert!(v.iter().all(|l| l.numer().is_one() && !l.denom().is_zero()));
        assert!(v.iter().any(|l| !l.is_one()));

        let r = simulate_nlcm(&[p("1", 2), p("x1*x2 + 3", 2)], &cfg(300, 100)).unwrap();
        let LimitSamples::Nlcm(v) = &r.samples else {
            panic!()
        };
        assert!(v.iter().all(|l| l.is_one()));
    }

    #[test]
    fn scaled_limit_matches_product_of_uniforms() {
        // for [x1, x2] the limit is u1 u2 / G; its mean is E[1/G] / 4
        let r = simulate_scaled_lcm_limit(&[p("x1", 2), p("x2", 2)], &cfg(20_000, 200)).unwrap();
        let LimitSamples::ScaledLcm(v) = &r.samples else {
            panic!()
        };
        let mean = v.iter().sum::<f64>() / v.len() as f64;
        // E[1/G] = zeta(3)/zeta(2)
        let expect = (1.202_056_903_159_594 / (std::f64::consts::PI.powi(2) / 6.0)) / 4.0;
        assert!((mean - expect).abs() < 0.01, "{mean} vs {expect}");
        assert!(v.iter().all(|&x| (0.0..=1.0).contains(&x)));
    }

    #[test]
    fn guards() {
        assert_eq!(
            simulate_gcd(&[p("x1", 1), p("2*x1", 1)], &cfg(10, 10)),
            Err(Error::CommonFactor)
        );
        assert!(matches!(
            simulate_gcd(&[p("x1", 1)], &cfg(10, 10)),
            Err(Error::InvalidInput(_))
        ));
        assert!(matches!(
            simulate_scaled_lcm_limit(&[p("2", 1), p("3", 1)], &cfg(10, 10)),
            Err(Error::Degenerate(_))
        ));
        assert_eq!(
            simulate_nlcm(&[p("x1", 2), p("x2", 2), p("x1*x2", 2)], &cfg(10, 10)),
            Err(Error::CommonFactor)
        );
        assert!(matches!(
            simulate_nlcm(&[p("x1", 2), p("x2", 2)], &cfg(0, 10)),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn same_seed_same_draws() {
        let fs = [p("x1 + x2", 2), p("x1 - x2 + 1", 2)];
        let a = simulate_gcd(&fs, &cfg(300, 100)).unwrap();
        let b = simulate_gcd(&fs, &cfg(300, 100)).unwrap();
        assert_eq!(a, b);
        let LimitSamples::Gcd(v) = a.samples else {
            panic!()
        };
        // f + g = 2*x1 + 1 is odd, so 2 never divides both values
        assert!(v.iter().all(|g| g.is_odd()));
    }
}

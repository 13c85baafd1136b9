//! Truncated Euler products `prod_p (1 - s_p / p^s)` with a heuristic tail bracket.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::euclid::has_common_factor;
use crate::finitefield::{count_common_zeros, shared_nvars};
use crate::polyring::MultiPoly;
use crate::primes::primes_up_to;

/// Multiplier applied to the fitted tail constant.
pub const SAFETY_FACTOR: f64 = 4.0;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EulerFactor {
    pub p: u64,
    pub s_p: u64,
    pub factor: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EulerProductResult {
    /// Product over `p <= pmax`, ascending.
    pub partial: f64,
    pub tail_lo: f64,
    pub tail_hi: f64,
    pub pmax: u64,
    /// `c` in the assumed bound `s_p <= c p^(s-2)` for `p > pmax`.
    pub tail_constant: f64,
    pub safety_factor: f64,
    pub factors: Vec<EulerFactor>,
}

impl EulerProductResult {
    /// `[partial * tail_lo, partial * tail_hi]`. Heuristic: it rests on the
    /// fitted tail constant, not on a proven bound.
    pub fn bracket(&self) -> (f64, f64) {
        (self.partial * self.tail_lo, self.partial * self.tail_hi)
    }
}

/// Fits `c = SAFETY_FACTOR * max s_p p^(2-s)` over primes in `(pmax/10, pmax]`.
pub(crate) fn fit_tail_constant(counts: &[(u64, u64)], s: usize, pmax: u64) -> f64 {
    let lo = pmax / 10;
    let fitted = counts
        .iter()
        .filter(|&&(p, _)| p > lo)
        .map(|&(p, sp)| sp as f64 * (p as f64).powi(2 - s as i32))
        .fold(0.0f64, f64::max);
    SAFETY_FACTOR * fitted
}

/// Lower multiplier for `prod_{p > pmax} (1 - c/p^2)`, using
/// `sum_{p > P} p^-2 < 1/P` and `-log(1 - x) <= x / (1 - x_max)`.
pub(crate) fn tail_lower_multiplier(c: f64, pmax: u64) -> f64 {
    if c == 0.0 {
        return 1.0;
    }
    let pm = pmax.max(1) as f64;
    let x_max = c / (pm * pm);
    if x_max >= 1.0 {
        return 0.0;
    }
    (-(c / pm) / (1.0 - x_max)).exp()
}

pub fn ekedahl_poonen_density(
    fs: &[MultiPoly],
    pmax: u64,
    budget: u64,
) -> Result<EulerProductResult> {
    let s = shared_nvars(fs)?;
    if fs.iter().any(MultiPoly::is_zero) {
        return Err(Error::ZeroPolynomial);
    }
    if fs.len() == 1 && !fs[0].is_constant() {
        return Err(Error::Degenerate(
            "a single nonconstant polynomial has density zero".into(),
        ));
    }
    if pmax < 2 {
        return Err(Error::InvalidInput("pmax must be >= 2".into()));
    }
    if has_common_factor(fs)? {
        return Err(Error::CommonFactor);
    }
    let primes = primes_up_to(pmax);
    let largest = *primes.last().expect("pmax >= 2");
    let points = (largest as u128).checked_pow(s as u32).unwrap_or(u128::MAX);
    if points > budget as u128 {
        return Err(Error::BudgetExceeded { points, budget });
    }
    let counts: Vec<(u64, u64)> = primes
        .par_iter()
        .map(|&p| count_common_zeros(fs, p, budget).map(|r| (p, r.count)))
        .collect::<Result<_>>()?;
    let mut partial = 1.0f64;
    let factors: Vec<EulerFactor> = counts
        .iter()
        .map(|&(p, s_p)| {
            let factor = 1.0 - s_p as f64 / (p as f64).powi(s as i32);
            partial *= factor;
            EulerFactor { p, s_p, factor }
        })
        .collect();
    let c = fit_tail_constant(&counts, s, pmax);
    Ok(EulerProductResult {
        partial,
        tail_lo: tail_lower_multiplier(c, pmax),
        tail_hi: 1.0,
        pmax,
        tail_constant: c,
        safety_factor: SAFETY_FACTOR,
        factors,
    })
}

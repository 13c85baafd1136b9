//! Common-factor detection for multivariate integer polynomials.
//!
//! The exact test views the inputs as polynomials in the last variable over
//! `R = Z[x_1..x_{s-1}]`. A shared factor that involves the last variable is
//! detected by the resultant witnesses; a shared factor that does not is a
//! common factor of all the coefficients, which live in one variable fewer.

use num_bigint::BigInt;
use num_traits::Zero;
use rand::Rng;

use crate::error::{Error, Result};
use crate::polyring::MultiPoly;
use crate::rng::{keyed_rng, TAG_SPECIALIZE};

use super::resultant::{split_by_trailing_vars, sylvester_resultant};
use super::zpoly::{self, ZPoly};

/// Polynomials `W_1..W_L` over the coefficient ring. All of them vanish
/// exactly when the inputs share a factor of positive degree in `x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessSet {
    pub ws: Vec<MultiPoly>,
}

impl WitnessSet {
    pub fn all_vanish(&self) -> bool {
        self.ws.iter().all(MultiPoly::is_zero)
    }
}

/// Witnesses for `Q_1..Q_m`, each given by ascending coefficients in `R`.
///
/// For `m = 2` this is the single resultant. For `m >= 3` the witnesses are
/// the coefficients, in the `u`-monomials, of `Res(Q_1, u_2 Q_2 + .. + u_m Q_m)`
/// over `R[u_2..u_m]`; `Q_1` is taken as an input of least degree in `x`.
pub fn common_factor_witnesses(qs: &[Vec<MultiPoly>]) -> Result<WitnessSet> {
    let nvars = qs
        .iter()
        .flatten()
        .next()
        .map(MultiPoly::nvars)
        .ok_or_else(|| Error::InvalidInput("no polynomials given".into()))?;
    if qs.iter().flatten().any(|c| c.nvars() != nvars) {
        return Err(Error::InvalidInput(
            "coefficients live in different rings".into(),
        ));
    }
    let degrees = qs
        .iter()
        .map(|q| {
            q.iter()
                .rposition(|c| !c.is_zero())
                .ok_or(Error::ZeroPolynomial)
        })
        .collect::<Result<Vec<_>>>()?;
    if degrees.iter().all(|&d| d == 0) {
        return Err(Error::Degenerate(
            "every polynomial is constant in the main variable".into(),
        ));
    }
    let m = qs.len();
    if m == 1 {
        // a single polynomial of positive degree is its own common factor
        return Ok(WitnessSet {
            ws: vec![MultiPoly::zero(nvars)],
        });
    }
    let first = (0..m).min_by_key(|&i| degrees[i]).expect("m >= 2");
    let rest: Vec<&Vec<MultiPoly>> = (0..m).filter(|&i| i != first).map(|i| &qs[i]).collect();
    if m == 2 {
        let r = sylvester_resultant(&qs[first], rest[0])?;
        return Ok(WitnessSet { ws: vec![r] });
    }
    let k = m - 1;
    let ext = nvars + k;
    let q1: Vec<MultiPoly> = qs[first].iter().map(|c| c.extend_vars(k)).collect();
    let len = rest.iter().map(|q| q.len()).max().unwrap_or(0);
    let mut combo = vec![MultiPoly::zero(ext); len];
    for (j, q) in rest.iter().enumerate() {
        let u = MultiPoly::var(ext, nvars + j);
        for (slot, c) in combo.iter_mut().zip(q.iter()) {
            *slot = &*slot + &(&c.extend_vars(k) * &u);
        }
    }
    let r = sylvester_resultant(&q1, &combo)?;
    let ws = if r.is_zero() {
        vec![MultiPoly::zero(nvars)]
    } else {
        split_by_trailing_vars(&r, k)
    };
    Ok(WitnessSet { ws })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CommonFactorOptions {
    /// Try random line restrictions before the exact recursion.
    pub prefilter: bool,
    pub prefilter_attempts: u32,
    pub seed: u64,
}

impl Default for CommonFactorOptions {
    fn default() -> Self {
        CommonFactorOptions {
            prefilter: true,
            prefilter_attempts: 5,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommonFactorReport {
    pub common_factor: bool,
    pub method_trace: Vec<String>,
}

/// True iff `fs` share a factor of positive total degree over Q.
pub fn has_common_factor(fs: &[MultiPoly]) -> Result<bool> {
    Ok(has_common_factor_traced(fs, CommonFactorOptions::default())?.common_factor)
}

pub fn has_common_factor_traced(
    fs: &[MultiPoly],
    opts: CommonFactorOptions,
) -> Result<CommonFactorReport> {
    let nvars = check_inputs(fs)?;
    let mut trace = Vec::new();
    if opts.prefilter && nvars >= 2 && fs.len() >= 2 && fs.iter().all(|f| !f.is_constant()) {
        for attempt in 0..opts.prefilter_attempts {
            match line_restriction_coprime(fs, opts.seed, attempt) {
                Some(true) => {
                    trace.push(format!(
                        "prefilter: random line restriction coprime (attempt {})",
                        attempt + 1
                    ));
                    return Ok(CommonFactorReport {
                        common_factor: false,
                        method_trace: trace,
                    });
                }
                Some(false) => trace.push(format!(
                    "prefilter: restriction shares a factor (attempt {})",
                    attempt + 1
                )),
                None => trace.push(format!(
                    "prefilter: degenerate direction (attempt {})",
                    attempt + 1
                )),
            }
        }
        trace.push("prefilter inconclusive; running exact test".into());
    }
    let common_factor = exact(fs, &mut trace)?;
    Ok(CommonFactorReport {
        common_factor,
        method_trace: trace,
    })
}

fn check_inputs(fs: &[MultiPoly]) -> Result<usize> {
    let nvars = fs
        .first()
        .map(MultiPoly::nvars)
        .ok_or_else(|| Error::InvalidInput("no polynomials given".into()))?;
    for f in fs {
        if f.nvars() != nvars {
            return Err(Error::DimensionMismatch {
                expected: nvars,
                got: f.nvars(),
            });
        }
        if f.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
    }
    Ok(nvars)
}

fn exact(fs: &[MultiPoly], trace: &mut Vec<String>) -> Result<bool> {
    let s = fs[0].nvars();
    if fs.iter().any(MultiPoly::is_constant) {
        trace.push(format!(
            "{s} vars: nonzero constant present, no common factor"
        ));
        return Ok(false);
    }
    if fs.len() == 1 {
        trace.push(format!("{s} vars: single nonconstant polynomial"));
        return Ok(true);
    }
    if s == 1 {
        let mut g: ZPoly = Vec::new();
        for f in fs {
            g = zpoly::gcd(&g, &zpoly::from_multi(f)?);
            if zpoly::degree(&g) == Some(0) {
                break;
            }
        }
        let d = zpoly::degree(&g).unwrap_or(0);
        trace.push(format!("1 var: gcd degree {d}"));
        return Ok(d >= 1);
    }
    let last = s - 1;
    let qs: Vec<Vec<MultiPoly>> = fs
        .iter()
        .map(|f| f.coeffs_as_polys(last))
        .collect::<Result<_>>()?;
    if qs.iter().any(|q| q.len() >= 2) {
        let w = common_factor_witnesses(&qs)?;
        if w.all_vanish() {
            trace.push(format!(
                "{s} vars: all {} witnesses vanish, factor involves x{s}",
                w.ws.len()
            ));
            return Ok(true);
        }
        trace.push(format!("{s} vars: witnesses nonvanishing in x{s}"));
    }
    let coeffs: Vec<MultiPoly> = qs.into_iter().flatten().filter(|c| !c.is_zero()).collect();
    trace.push(format!(
        "{s} vars: recursing on {} coefficients in x1..x{}",
        coeffs.len(),
        s - 1
    ));
    exact(&coeffs, trace)
}

/// Restricts every `f_i` to a random line `a + t*b`. `Some(true)` certifies
/// that no common factor exists: when some top-degree form is nonzero at
/// `b`, any common factor keeps its full degree on the line.
fn line_restriction_coprime(fs: &[MultiPoly], seed: u64, attempt: u32) -> Option<bool> {
    let s = fs[0].nvars();
    let mut rng = keyed_rng(seed, TAG_SPECIALIZE, attempt as u64, s as u64);
    let mut draw = || BigInt::from(rng.random_range(-1000i64..=1000));
    let a: Vec<BigInt> = (0..s).map(|_| draw()).collect();
    let b: Vec<BigInt> = (0..s).map(|_| draw()).collect();
    let full_degree = fs.iter().any(|f| {
        let top = f.top_homogeneous().expect("nonzero");
        !top.eval(&b).expect("dims").is_zero()
    });
    if !full_degree {
        return None;
    }
    let mut g: ZPoly = Vec::new();
    for f in fs {
        g = zpoly::gcd(&g, &restrict_to_line(f, &a, &b));
        if zpoly::degree(&g) == Some(0) {
            return Some(true);
        }
    }
    Some(zpoly::degree(&g).unwrap_or(0) == 0)
}

/// `f(a + t*b)` as a dense polynomial in `t`.
pub(crate) fn restrict_to_line(f: &MultiPoly, a: &[BigInt], b: &[BigInt]) -> ZPoly {
    let s = f.nvars();
    let mut max_exp = vec![0u32; s];
    for (e, _) in f.terms() {
        for (m, &k) in max_exp.iter_mut().zip(e.exps()) {
            *m = (*m).max(k);
        }
    }
    let powers: Vec<Vec<ZPoly>> = (0..s)
        .map(|v| {
            let lin = vec![a[v].clone(), b[v].clone()];
            let mut table = vec![vec![BigInt::from(1)]];
            for k in 1..=max_exp[v] as usize {
                let next = zpoly::mul(&table[k - 1], &lin);
                table.push(next);
            }
            table
        })
        .collect();
    let mut out: ZPoly = Vec::new();
    for (e, c) in f.terms() {
        let mut term = vec![c.clone()];
        for (v, &k) in e.exps().iter().enumerate() {
            if k > 0 {
                term = zpoly::mul(&term, &powers[v][k as usize]);
            }
        }
        zpoly::add_scaled_shift(&mut out, &term, &BigInt::from(1), 0);
    }
    out
}

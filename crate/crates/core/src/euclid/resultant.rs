//! Sylvester resultants over `Z[y_1..y_k]`, computed by fraction-free
//! (Bareiss) elimination.
//!
//! Sign convention: the matrix has `deg h` shifted copies of `g` in the top
//! rows and `deg g` shifted copies of `h` below, each row listing
//! coefficients from the leading one down.

use crate::error::{Error, Result};
use crate::polyring::{ExpVector, MultiPoly};

use super::zpoly;

/// Sylvester resultant of `g` and `h`, given by ascending coefficient lists
/// over a common ring `Z[y_1..y_k]`. Trailing zero coefficients are ignored.
pub fn sylvester_resultant(g: &[MultiPoly], h: &[MultiPoly]) -> Result<MultiPoly> {
    let nvars = ring_nvars(g, h)?;
    let dg = true_degree(g).ok_or(Error::ZeroPolynomial)?;
    let dh = true_degree(h).ok_or(Error::ZeroPolynomial)?;
    let n = dg + dh;
    if n == 0 {
        return Ok(MultiPoly::one(nvars));
    }
    let zero = MultiPoly::zero(nvars);
    let mut m = vec![vec![zero.clone(); n]; n];
    for i in 0..dh {
        for k in 0..=dg {
            m[i][i + k] = g[dg - k].clone();
        }
    }
    for j in 0..dg {
        for k in 0..=dh {
            m[dh + j][j + k] = h[dh - k].clone();
        }
    }
    Ok(bareiss_det(m, nvars))
}

/// Resultant of two polynomials with respect to variable `var` (0-based);
/// the result lives in the remaining variables.
pub fn resultant_in(g: &MultiPoly, h: &MultiPoly, var: usize) -> Result<MultiPoly> {
    if g.nvars() != h.nvars() {
        return Err(Error::DimensionMismatch {
            expected: g.nvars(),
            got: h.nvars(),
        });
    }
    sylvester_resultant(&g.coeffs_as_polys(var)?, &h.coeffs_as_polys(var)?)
}

/// Resultant of two univariate integer polynomials.
pub fn resultant_univariate(g: &MultiPoly, h: &MultiPoly) -> Result<num_bigint::BigInt> {
    let lift = |f: &MultiPoly| -> Result<Vec<MultiPoly>> {
        Ok(zpoly::from_multi(f)?
            .into_iter()
            .map(|c| MultiPoly::constant(0, c))
            .collect())
    };
    let r = sylvester_resultant(&lift(g)?, &lift(h)?)?;
    Ok(r.as_constant().expect("resultant over Z is constant"))
}

fn ring_nvars(g: &[MultiPoly], h: &[MultiPoly]) -> Result<usize> {
    let nvars = g
        .iter()
        .chain(h)
        .next()
        .map(MultiPoly::nvars)
        .ok_or(Error::ZeroPolynomial)?;
    if let Some(bad) = g.iter().chain(h).find(|c| c.nvars() != nvars) {
        return Err(Error::DimensionMismatch {
            expected: nvars,
            got: bad.nvars(),
        });
    }
    Ok(nvars)
}

fn true_degree(coeffs: &[MultiPoly]) -> Option<usize> {
    coeffs.iter().rposition(|c| !c.is_zero())
}

/// Determinant by Bareiss elimination; every division is exact in the ring.
pub(crate) fn bareiss_det(mut m: Vec<Vec<MultiPoly>>, nvars: usize) -> MultiPoly {
    let n = m.len();
    let mut negate = false;
    let mut prev = MultiPoly::one(nvars);
    for k in 0..n.saturating_sub(1) {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    negate = !negate;
                }
                None => return MultiPoly::zero(nvars),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&m[i][j] * &m[k][k]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = num.div_exact(&prev).expect("Bareiss division is exact");
            }
            m[i][k] = MultiPoly::zero(nvars);
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if negate {
        -det
    } else {
        det
    }
}

/// Splits `r` in `Z[y, u]` (the last `k` variables are the `u`s) into
/// coefficients of the `u`-monomials, ordered graded-lex ascending in the
/// `u`-exponents.
pub(crate) fn split_by_trailing_vars(r: &MultiPoly, k: usize) -> Vec<MultiPoly> {
    let base = r.nvars() - k;
    let mut groups: std::collections::BTreeMap<ExpVector, Vec<(Vec<u32>, num_bigint::BigInt)>> =
        Default::default();
    for (e, c) in r.terms() {
        let (y, u) = e.exps().split_at(base);
        groups
            .entry(ExpVector::new(u.to_vec()))
            .or_default()
            .push((y.to_vec(), c.clone()));
    }
    groups
        .into_values()
        .map(|terms| MultiPoly::from_terms(base, terms))
        .collect()
}

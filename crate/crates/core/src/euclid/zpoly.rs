//! Dense univariate integer polynomials, ascending coefficients.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::polyring::MultiPoly;

pub(crate) type ZPoly = Vec<BigInt>;

pub(crate) fn trim(a: &mut ZPoly) {
    while a.last().is_some_and(Zero::is_zero) {
        a.pop();
    }
}

/// `None` for the zero polynomial.
pub(crate) fn degree(a: &[BigInt]) -> Option<usize> {
    a.iter().rposition(|c| !c.is_zero())
}

pub(crate) fn content(a: &[BigInt]) -> BigInt {
    a.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
}

/// Primitive part with positive leading coefficient.
pub(crate) fn primitive(a: &[BigInt]) -> ZPoly {
    let mut out = a.to_vec();
    trim(&mut out);
    let c = content(&out);
    if c.is_zero() {
        return out;
    }
    let c = if out.last().expect("nonzero").is_negative() {
        -c
    } else {
        c
    };
    for x in &mut out {
        *x = &*x / &c;
    }
    out
}

pub(crate) fn mul(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(&mut out);
    out
}

pub(crate) fn add_scaled_shift(acc: &mut ZPoly, b: &[BigInt], c: &BigInt, shift: usize) {
    if c.is_zero() {
        return;
    }
    if acc.len() < b.len() + shift {
        acc.resize(b.len() + shift, BigInt::zero());
    }
    for (j, y) in b.iter().enumerate() {
        acc[j + shift] += c * y;
    }
    trim(acc);
}

pub(crate) fn scale(a: &[BigInt], c: &BigInt) -> ZPoly {
    let mut out: ZPoly = a.iter().map(|x| x * c).collect();
    trim(&mut out);
    out
}

/// Pseudo-remainder of `a` by nonzero `b`.
fn prem(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    let db = degree(b).expect("nonzero divisor");
    let lb = &b[db];
    let mut r = a.to_vec();
    trim(&mut r);
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let lr = r[dr].clone();
        r = scale(&r, lb);
        add_scaled_shift(&mut r, b, &-lr, dr - db);
    }
    r
}

/// Primitive gcd over Q, normalized to positive leading coefficient.
/// `gcd(0, 0)` is the zero polynomial.
pub(crate) fn gcd(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    let mut x = primitive(a);
    let mut y = primitive(b);
    if degree(&x) < degree(&y) {
        std::mem::swap(&mut x, &mut y);
    }
    while degree(&y).is_some() {
        let r = primitive(&prem(&x, &y));
        x = y;
        y = r;
    }
    x
}

#[cfg(test)]
pub(crate) fn eval(a: &[BigInt], x: &BigInt) -> BigInt {
    a.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
}

pub(crate) fn from_multi(f: &MultiPoly) -> Result<ZPoly> {
    if f.nvars() != 1 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            got: f.nvars(),
        });
    }
    let len = f.degree_in(0).map_or(0, |d| d as usize + 1);
    let mut out = vec![BigInt::zero(); len];
    for (e, c) in f.terms() {
        out[e.exps()[0] as usize] = c.clone();
    }
    Ok(out)
}

pub(crate) fn to_multi(a: &[BigInt]) -> MultiPoly {
    MultiPoly::from_univariate(a)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(v: &[i64]) -> ZPoly {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn gcd_examples() {
        // (x-1)(x+2) and (x-1)(2x+3)
        let a = mul(&z(&[-1, 1]), &z(&[2, 1]));
        let b = mul(&z(&[-1, 1]), &z(&[3, 2]));
        assert_eq!(gcd(&a, &b), z(&[-1, 1]));
        assert_eq!(gcd(&z(&[1, 0, 1]), &z(&[0, 1])), z(&[1]));
        assert_eq!(gcd(&z(&[6]), &z(&[4])), z(&[1]));
        assert_eq!(gcd(&z(&[0, -2]), &[]), z(&[0, 1]));
    }

    #[test]
    fn primitive_normalizes_sign() {
        assert_eq!(primitive(&z(&[4, -6])), z(&[-2, 3]));
    }
}

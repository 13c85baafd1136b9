//! Integer Bezout identities `a_1 g_1 + .. + a_m g_m = A` for coprime
//! univariate integer polynomials.
//!
//! The elimination repeatedly replaces the polynomial of largest degree
//! `g = c x^p + ..` by `d g - c x^(p-q) h`, where `h = d x^q + ..` is another
//! nonzero entry (both multipliers divided by `gcd(c, d)`), while tracking how
//! each entry is expressed in the original inputs. Once every entry is
//! constant, an integer extended gcd of the constants gives `A`.

use num_bigint::BigInt;
use num_integer::{ExtendedGcd, Integer};
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::polyring::MultiPoly;

use super::zpoly::{self, ZPoly};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BezoutCertificate {
    pub cofactors: Vec<MultiPoly>,
    pub a: BigInt,
}

impl BezoutCertificate {
    /// Checks `sum a_i g_i == A` by exact arithmetic.
    pub fn verify(&self, gs: &[MultiPoly]) -> bool {
        if gs.len() != self.cofactors.len() || !self.a.is_positive() {
            return false;
        }
        let Some(nvars) = gs.first().map(MultiPoly::nvars) else {
            return false;
        };
        let sum = gs
            .iter()
            .zip(&self.cofactors)
            .fold(MultiPoly::zero(nvars), |acc, (g, a)| &acc + &(a * g));
        sum == MultiPoly::constant(nvars, self.a.clone())
    }
}

pub fn bezout_certificate(gs: &[MultiPoly]) -> Result<BezoutCertificate> {
    if gs.is_empty() {
        return Err(Error::InvalidInput("no polynomials given".into()));
    }
    let polys: Vec<ZPoly> = gs.iter().map(zpoly::from_multi).collect::<Result<_>>()?;
    if polys.iter().all(|g| zpoly::degree(g).is_none()) {
        return Err(Error::InvalidInput("all polynomials are zero".into()));
    }
    let m = polys.len();
    let mut cur = polys;
    // cur[i] = sum_j mat[i][j] * g_j
    let mut mat: Vec<Vec<ZPoly>> = (0..m)
        .map(|i| {
            (0..m)
                .map(|j| {
                    if i == j {
                        vec![BigInt::one()]
                    } else {
                        Vec::new()
                    }
                })
                .collect()
        })
        .collect();

    loop {
        let deg = |g: &ZPoly| zpoly::degree(g).unwrap_or(0);
        let top = (0..m)
            .max_by_key(|&i| (deg(&cur[i]), std::cmp::Reverse(i)))
            .expect("m >= 1");
        let p = deg(&cur[top]);
        if p == 0 {
            break;
        }
        let other = (0..m)
            .filter(|&i| i != top && zpoly::degree(&cur[i]).is_some())
            .max_by_key(|&i| (deg(&cur[i]), std::cmp::Reverse(i)));
        let Some(other) = other else {
            return Err(Error::CommonFactor);
        };
        let q = deg(&cur[other]);
        let c = cur[top][p].clone();
        let d = cur[other][q].clone();
        let g = c.gcd(&d);
        let (c, d) = (c / &g, d / &g);

        let mut next = zpoly::scale(&cur[top], &d);
        zpoly::add_scaled_shift(&mut next, &cur[other], &-&c, p - q);
        debug_assert!(zpoly::degree(&next).is_none_or(|k| k < p));
        let mut row: Vec<ZPoly> = mat[top]
            .iter()
            .zip(&mat[other])
            .map(|(a, b)| {
                let mut e = zpoly::scale(a, &d);
                zpoly::add_scaled_shift(&mut e, b, &-&c, p - q);
                e
            })
            .collect();
        let content = row
            .iter()
            .chain(std::iter::once(&next))
            .fold(BigInt::zero(), |acc, e| acc.gcd(&zpoly::content(e)));
        if content > BigInt::one() {
            next = next.iter().map(|x| x / &content).collect();
            for e in &mut row {
                *e = e.iter().map(|x| x / &content).collect();
            }
        }
        cur[top] = next;
        mat[top] = row;
    }

    // every entry is now a constant: combine them with an extended gcd
    let consts: Vec<BigInt> = cur
        .iter()
        .map(|g| g.first().cloned().unwrap_or_default())
        .collect();
    let (a, weights) = integer_bezout(&consts);
    debug_assert!(a.is_positive());
    let mut cofactors: Vec<ZPoly> = vec![Vec::new(); m];
    for (i, w) in weights.iter().enumerate() {
        if w.is_zero() {
            continue;
        }
        for (j, slot) in cofactors.iter_mut().enumerate() {
            zpoly::add_scaled_shift(slot, &mat[i][j], w, 0);
        }
    }
    let cert = BezoutCertificate {
        cofactors: cofactors.iter().map(|c| zpoly::to_multi(c)).collect(),
        a,
    };
    assert!(cert.verify(gs), "Bezout identity failed to verify");
    Ok(cert)
}

/// Positive `g = gcd(xs)` and weights `w` with `sum w_i x_i = g`.
fn integer_bezout(xs: &[BigInt]) -> (BigInt, Vec<BigInt>) {
    let mut g = BigInt::zero();
    let mut w = vec![BigInt::zero(); xs.len()];
    for (i, x) in xs.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        if g.is_zero() {
            g = x.abs();
            w[i] = if x.is_negative() {
                -BigInt::one()
            } else {
                BigInt::one()
            };
            continue;
        }
        let ExtendedGcd { gcd, x: s, y: t } = g.extended_gcd(x);
        for wk in w.iter_mut().take(i) {
            *wk *= &s;
        }
        w[i] = t;
        g = gcd;
        if g.is_negative() {
            g = -g;
            for wk in w.iter_mut().take(i + 1) {
                *wk = -&*wk;
            }
        }
    }
    (g, w)
}

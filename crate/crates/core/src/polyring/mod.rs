//! Sparse multivariate polynomials over the integers.
//!
//! Terms are kept in a `BTreeMap` keyed by [`ExpVector`], ordered graded
//! lexicographically. No stored coefficient is ever zero, so the zero
//! polynomial is the empty map. All arithmetic is exact.

mod parse;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exponent vector of a monomial. Ordered graded-lex: total degree first,
/// then lexicographically with `x1` most significant.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ExpVector(Vec<u32>);

impl ExpVector {
    pub fn new(exps: Vec<u32>) -> Self {
        ExpVector(exps)
    }

    pub fn zero(nvars: usize) -> Self {
        ExpVector(vec![0; nvars])
    }

    pub fn unit(nvars: usize, var: usize) -> Self {
        let mut e = vec![0; nvars];
        e[var] = 1;
        ExpVector(e)
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    fn add(&self, other: &ExpVector) -> ExpVector {
        ExpVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    fn checked_sub(&self, other: &ExpVector) -> Option<ExpVector> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(ExpVector)
    }
}

impl Ord for ExpVector {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for ExpVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Total degree; the zero polynomial has degree `NegInfinity`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum Degree {
    NegInfinity,
    Finite(u32),
}

impl Degree {
    pub fn finite(self) -> Option<u32> {
        match self {
            Degree::Finite(d) => Some(d),
            Degree::NegInfinity => None,
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::NegInfinity => write!(f, "-inf"),
            Degree::Finite(d) => write!(f, "{d}"),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<ExpVector, BigInt>,
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: impl Into<BigInt>) -> Self {
        let c = c.into();
        let mut p = MultiPoly::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(ExpVector::zero(nvars), c);
        }
        p
    }

    pub fn one(nvars: usize) -> Self {
        MultiPoly::constant(nvars, 1)
    }

    /// The variable `x_{var+1}` (0-based index).
    pub fn var(nvars: usize, var: usize) -> Self {
        assert!(
            var < nvars,
            "variable index {var} out of range for {nvars} vars"
        );
        MultiPoly::monomial(ExpVector::unit(nvars, var), BigInt::one())
    }

    pub fn monomial(exps: ExpVector, c: BigInt) -> Self {
        let nvars = exps.len();
        let mut p = MultiPoly::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    /// Builds a canonical polynomial, summing repeated exponents and dropping zeros.
    pub fn from_terms<I>(nvars: usize, terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<u32>, BigInt)>,
    {
        let mut p = MultiPoly::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent vector length");
            p.add_term(ExpVector(e), c);
        }
        p
    }

    /// Univariate polynomial from ascending integer coefficients.
    pub fn from_univariate(coeffs: &[BigInt]) -> Self {
        MultiPoly::from_terms(
            1,
            coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| (vec![k as u32], c.clone())),
        )
    }

    fn add_term(&mut self, e: ExpVector, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&ExpVector, &BigInt)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exps: &[u32]) -> BigInt {
        self.terms
            .get(&ExpVector(exps.to_vec()))
            .cloned()
            .unwrap_or_default()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.degree() == 0)
    }

    /// Constant value if the polynomial has degree <= 0.
    pub fn as_constant(&self) -> Option<BigInt> {
        if self.is_constant() {
            Some(self.terms.values().next().cloned().unwrap_or_default())
        } else {
            None
        }
    }

    pub fn leading_term(&self) -> Option<(&ExpVector, &BigInt)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> Degree {
        match self.terms.keys().next_back() {
            Some(e) => Degree::Finite(e.degree()),
            None => Degree::NegInfinity,
        }
    }

    /// Degree in one variable; `None` for the zero polynomial.
    pub fn degree_in(&self, var: usize) -> Option<u32> {
        self.terms.keys().map(|e| e.0[var]).max()
    }

    /// Gcd of all coefficients (nonnegative); zero for the zero polynomial.
    pub fn content(&self) -> BigInt {
        self.terms
            .values()
            .fold(BigInt::zero(), |acc, c| acc.gcd(c))
    }

    pub fn scale(&self, c: &BigInt) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(self.nvars);
        }
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, a)| (e.clone(), a * c)).collect(),
        }
    }

    /// Divides every coefficient by `c`; panics if any division is inexact.
    pub fn div_scalar_exact(&self, c: &BigInt) -> MultiPoly {
        MultiPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, a)| {
                    let (q, r) = a.div_rem(c);
                    assert!(r.is_zero(), "inexact scalar division");
                    (e.clone(), q)
                })
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> MultiPoly {
        let mut acc = MultiPoly::one(self.nvars);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Multiplies by the monomial `c * x^exps`.
    pub fn mul_monomial(&self, exps: &ExpVector, c: &BigInt) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(self.nvars);
        }
        MultiPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, a)| (e.add(exps), a * c))
                .collect(),
        }
    }

    /// Exact division in `Z[x_1..x_s]`; `None` when `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &MultiPoly) -> Option<MultiPoly> {
        assert_eq!(self.nvars, divisor.nvars);
        let (lt_e, lt_c) = divisor.leading_term()?;
        let mut rem = self.clone();
        let mut quot = MultiPoly::zero(self.nvars);
        while let Some((e, c)) = rem.leading_term() {
            let qe = e.checked_sub(lt_e)?;
            let (qc, r) = c.div_rem(lt_c);
            if !r.is_zero() {
                return None;
            }
            rem = &rem - &divisor.mul_monomial(&qe, &qc);
            quot.add_term(qe, qc);
        }
        Some(quot)
    }

    /// Exact value at an integer point.
    pub fn eval(&self, point: &[BigInt]) -> Result<BigInt> {
        if point.len() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                got: point.len(),
            });
        }
        let powers = power_tables(self, point);
        let mut acc = BigInt::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (v, &k) in e.0.iter().enumerate() {
                if k > 0 {
                    t *= &powers[v][k as usize];
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Keeps only the terms of maximal total degree.
    pub fn top_homogeneous(&self) -> Result<MultiPoly> {
        let d = self.total_degree().finite().ok_or(Error::ZeroPolynomial)?;
        Ok(MultiPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.degree() == d)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        })
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(ExpVector::degree);
        match degs.next() {
            Some(d) => degs.all(|x| x == d),
            None => true,
        }
    }

    /// Substitutes integers for `x_1..x_{s-1}`, leaving a polynomial in `x_s` alone.
    pub fn specialize_except_last(&self, values: &[BigInt]) -> Result<MultiPoly> {
        if self.nvars == 0 || values.len() + 1 != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars.saturating_sub(1),
                got: values.len(),
            });
        }
        let last = self.nvars - 1;
        let mut point = values.to_vec();
        point.push(BigInt::one());
        let powers = power_tables(self, &point);
        let mut out = MultiPoly::zero(1);
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (v, &k) in e.0[..last].iter().enumerate() {
                if k > 0 {
                    t *= &powers[v][k as usize];
                }
            }
            out.add_term(ExpVector(vec![e.0[last]]), t);
        }
        Ok(out)
    }

    /// Views `self` as a polynomial in `var` with coefficients in the
    /// remaining variables; entry `k` multiplies `var^k`.
    pub fn coeffs_as_polys(&self, var: usize) -> Result<Vec<MultiPoly>> {
        if var >= self.nvars {
            return Err(Error::VarOutOfRange {
                index: var + 1,
                nvars: self.nvars,
            });
        }
        let len = self.degree_in(var).map_or(0, |d| d as usize + 1);
        let mut out = vec![MultiPoly::zero(self.nvars - 1); len];
        for (e, c) in &self.terms {
            let k = e.0[var] as usize;
            let mut rest = e.0.clone();
            rest.remove(var);
            out[k].add_term(ExpVector(rest), c.clone());
        }
        Ok(out)
    }

    /// Inverse of [`MultiPoly::coeffs_as_polys`].
    pub fn from_coeff_polys(coeffs: &[MultiPoly], var: usize, nvars: usize) -> MultiPoly {
        let mut out = MultiPoly::zero(nvars);
        for (k, q) in coeffs.iter().enumerate() {
            assert_eq!(q.nvars + 1, nvars);
            for (e, c) in &q.terms {
                let mut full = e.0.clone();
                full.insert(var, k as u32);
                out.add_term(ExpVector(full), c.clone());
            }
        }
        out
    }

    /// Same polynomial in `nvars + extra` variables (new variables appended).
    pub fn extend_vars(&self, extra: usize) -> MultiPoly {
        MultiPoly {
            nvars: self.nvars + extra,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut v = e.0.clone();
                    v.resize(self.nvars + extra, 0);
                    (ExpVector(v), c.clone())
                })
                .collect(),
        }
    }

    /// Canonical textual form, accepted back by [`MultiPoly::parse`].
    pub fn to_canonical_string(&self) -> String {
        self.to_string()
    }

    pub fn parse(text: &str, nvars: usize) -> Result<MultiPoly> {
        parse::parse(text, nvars)
    }
}

fn power_tables(p: &MultiPoly, point: &[BigInt]) -> Vec<Vec<BigInt>> {
    let mut max_exp = vec![0u32; p.nvars];
    for e in p.terms.keys() {
        for (m, &k) in max_exp.iter_mut().zip(&e.0) {
            *m = (*m).max(k);
        }
    }
    max_exp
        .iter()
        .zip(point)
        .map(|(&m, x)| {
            let mut row = Vec::with_capacity(m as usize + 1);
            row.push(BigInt::one());
            for k in 1..=m as usize {
                let next = &row[k - 1] * x;
                row.push(next);
            }
            row
        })
        .collect()
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mut factors: Vec<String> = Vec::new();
            if !mag.is_one() || e.degree() == 0 {
                factors.push(mag.to_string());
            }
            for (v, &k) in e.0.iter().enumerate() {
                match k {
                    0 => {}
                    1 => factors.push(format!("x{}", v + 1)),
                    _ => factors.push(format!("x{}^{}", v + 1, k)),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

impl Add<&MultiPoly> for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, rhs.nvars, "nvars mismatch in add");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub<&MultiPoly> for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, rhs.nvars, "nvars mismatch in sub");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c);
        }
        out
    }
}

impl Mul<&MultiPoly> for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, rhs.nvars, "nvars mismatch in mul");
        let mut out = MultiPoly::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                out.add_term(ea.add(eb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $m(self, rhs: MultiPoly) -> MultiPoly {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $m(self, rhs: &MultiPoly) -> MultiPoly {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        -&self
    }
}

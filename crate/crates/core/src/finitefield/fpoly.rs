//! Dense univariate polynomials over F_p, ascending coefficients.

use crate::primes::{inv_mod, mul_mod};

pub(crate) fn trim(a: &mut Vec<u64>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

pub(crate) fn rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    let inv_lead = inv_mod(b[db], p);
    while r.len() > db {
        let top = r.len() - 1;
        let q = mul_mod(r[top], inv_lead, p);
        let shift = top - db;
        for (k, &bk) in b.iter().enumerate() {
            let t = mul_mod(q, bk, p);
            let slot = &mut r[shift + k];
            *slot = (*slot + p - t) % p;
        }
        trim(&mut r);
    }
    r
}

/// Monic gcd; empty vector stands for the zero polynomial.
pub(crate) fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = rem(&x, &y, p);
        x = y;
        y = r;
    }
    if let Some(&lead) = x.last() {
        let inv = inv_mod(lead, p);
        for c in &mut x {
            *c = mul_mod(*c, inv, p);
        }
    }
    x
}

fn mul_rem(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mul_mod(ai, bj, p)) % p;
        }
    }
    rem(&out, m, p)
}

/// Number of distinct roots in F_p of a nonzero polynomial `g`.
pub(crate) fn count_distinct_roots(g: &[u64], p: u64) -> u64 {
    let mut g = g.to_vec();
    trim(&mut g);
    let deg = g.len().saturating_sub(1);
    if deg == 0 {
        return 0;
    }
    // x^p mod g by square-and-multiply
    let mut acc = vec![1u64];
    let mut base = rem(&[0, 1], &g, p);
    let mut e = p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_rem(&acc, &base, &g, p);
        }
        e >>= 1;
        if e > 0 {
            base = mul_rem(&base, &base, &g, p);
        }
    }
    // acc - x
    if acc.len() < 2 {
        acc.resize(2, 0);
    }
    acc[1] = (acc[1] + p - 1) % p;
    let d = gcd(&g, &acc, p);
    d.len().saturating_sub(1) as u64
}

pub(crate) fn eval(a: &[u64], x: u64, p: u64) -> u64 {
    a.iter()
        .rev()
        .fold(0, |acc, &c| (mul_mod(acc, x, p) + c) % p)
}

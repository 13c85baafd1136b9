//! Reference implementations used as oracles by the integration tests. They
//! share no code with the library beyond the polynomial container.

#![allow(dead_code)]

use adelic_core::MultiPoly;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Counts common zeros in F_p^s by visiting every point and evaluating each
/// term with its own power loop.
pub fn naive_count(fs: &[MultiPoly], p: u64) -> u64 {
    let s = fs[0].nvars();
    let reduced: Vec<Vec<(Vec<u32>, u64)>> = fs
        .iter()
        .map(|f| {
            f.terms()
                .map(|(e, c)| {
                    let r = ((c % BigInt::from(p)) + BigInt::from(p)) % BigInt::from(p);
                    (e.exps().to_vec(), u64::try_from(r).unwrap())
                })
                .collect()
        })
        .collect();
    let total = p.pow(s as u32);
    let mut count = 0;
    for idx in 0..total {
        let mut point = vec![0u64; s];
        let mut rest = idx;
        for x in point.iter_mut() {
            *x = rest % p;
            rest /= p;
        }
        let all_zero = reduced.iter().all(|terms| {
            let mut acc = 0u64;
            for (e, c) in terms {
                let mut t = *c;
                for (v, &k) in e.iter().enumerate() {
                    for _ in 0..k {
                        t = t * point[v] % p;
                    }
                }
                acc = (acc + t) % p;
            }
            acc == 0
        });
        if all_zero {
            count += 1;
        }
    }
    count
}

/// Degree of the gcd over Q of dense univariate polynomials (ascending
/// coefficients), by Euclid's algorithm with exact rationals. `None` when
/// every input is zero.
pub fn rational_gcd_degree(polys: &[Vec<BigInt>]) -> Option<usize> {
    let to_q = |a: &Vec<BigInt>| -> Vec<BigRational> {
        let mut v: Vec<BigRational> = a.iter().cloned().map(BigRational::from_integer).collect();
        while v.last().is_some_and(|c| c.is_zero()) {
            v.pop();
        }
        v
    };
    let mut g: Vec<BigRational> = Vec::new();
    for p in polys {
        let mut a = g;
        let mut b = to_q(p);
        while !b.is_empty() {
            let r = rem_q(&a, &b);
            a = b;
            b = r;
        }
        g = a;
    }
    if g.is_empty() {
        None
    } else {
        Some(g.len() - 1)
    }
}

fn rem_q(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut r = a.to_vec();
    let lb = b.last().unwrap().clone();
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let q = r.last().unwrap() / &lb;
        for (j, c) in b.iter().enumerate() {
            r[j + shift] -= &q * c;
        }
        r.pop();
        while r.last().is_some_and(|c| c.is_zero()) {
            r.pop();
        }
    }
    r
}

pub fn random_dense(rng: &mut ChaCha8Rng, max_deg: usize, bound: i64) -> Vec<BigInt> {
    let d = rng.random_range(0..=max_deg);
    (0..=d)
        .map(|_| BigInt::from(rng.random_range(-bound..=bound)))
        .collect()
}

pub fn dense_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Random polynomial in `s` variables with total degree at most `max_deg`.
pub fn random_poly(
    rng: &mut ChaCha8Rng,
    s: usize,
    max_deg: u32,
    terms: usize,
    bound: i64,
) -> MultiPoly {
    loop {
        let mut ts = Vec::new();
        for _ in 0..terms {
            let mut e = vec![0u32; s];
            let mut budget = rng.random_range(0..=max_deg);
            for slot in e.iter_mut() {
                let k = rng.random_range(0..=budget);
                *slot = k;
                budget -= k;
            }
            ts.push((e, BigInt::from(rng.random_range(-bound..=bound))));
        }
        let f = MultiPoly::from_terms(s, ts);
        if !f.is_zero() {
            return f;
        }
    }
}

/// Random primitive linear form `c_0 + c_1 x_1 + .. + c_s x_s`, nonconstant.
pub fn random_linear_form(rng: &mut ChaCha8Rng, s: usize) -> MultiPoly {
    loop {
        let mut ts = vec![(vec![0u32; s], BigInt::from(rng.random_range(-5i64..=5)))];
        for v in 0..s {
            let mut e = vec![0u32; s];
            e[v] = 1;
            ts.push((e, BigInt::from(rng.random_range(-5i64..=5))));
        }
        let f = MultiPoly::from_terms(s, ts);
        if f.is_constant() {
            continue;
        }
        let c = f.content();
        if c.is_one() {
            return f;
        }
        return f.div_scalar_exact(&c);
    }
}

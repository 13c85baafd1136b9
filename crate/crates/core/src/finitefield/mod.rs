//! Integer polynomials reduced mod p, common-zero counting over F_p^s and a
//! Lang-Weil residual diagnostic.
//!
//! Counting walks F_p^s by nested specialization: fixing `x1 = a` turns every
//! polynomial into one in the remaining variables. A specialization that is a
//! nonzero constant prunes the whole subtree, one where every polynomial is
//! identically zero contributes `p^k` at once. The last variable is resolved
//! either by Horner evaluation at all `p` points or, for larger `p`, by
//! counting the distinct F_p-roots of the gcd.

mod fpoly;

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::polyring::{ExpVector, MultiPoly};
use crate::primes::{mul_mod, require_prime};

/// Default cap on `p^s` for one counting call.
pub const DEFAULT_BUDGET: u64 = 100_000_000;

/// Above this prime, the last variable is counted via gcd root counting.
const ROOT_COUNT_THRESHOLD: u64 = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyModP {
    p: u64,
    nvars: usize,
    terms: BTreeMap<ExpVector, u64>,
}

impl PolyModP {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ExpVector, u64)> {
        self.terms.iter().map(|(e, &c)| (e, c))
    }

    pub fn coeff(&self, exps: &[u32]) -> u64 {
        self.terms
            .get(&ExpVector::new(exps.to_vec()))
            .copied()
            .unwrap_or(0)
    }

    /// Value at a point of F_p^s; coordinates are reduced first.
    pub fn eval(&self, point: &[u64]) -> u64 {
        debug_assert_eq!(point.len(), self.nvars);
        let p = self.p;
        let mut acc = 0u64;
        for (e, &c) in &self.terms {
            let mut t = c;
            for (&x, &k) in point.iter().zip(e.exps()) {
                for _ in 0..k {
                    t = mul_mod(t, x % p, p);
                }
            }
            acc = (acc + t) % p;
        }
        acc
    }

    fn to_dense(&self) -> Dense {
        let mut dims = vec![1usize; self.nvars];
        for e in self.terms.keys() {
            for (d, &k) in dims.iter_mut().zip(e.exps()) {
                *d = (*d).max(k as usize + 1);
            }
        }
        let mut strides = vec![1usize; self.nvars];
        for v in (0..self.nvars.saturating_sub(1)).rev() {
            strides[v] = strides[v + 1] * dims[v + 1];
        }
        let len = dims.iter().product::<usize>();
        let mut coeffs = vec![0u64; len];
        for (e, &c) in &self.terms {
            let idx: usize = e
                .exps()
                .iter()
                .zip(&strides)
                .map(|(&k, &st)| k as usize * st)
                .sum();
            coeffs[idx] = c;
        }
        Dense { dims, coeffs }
    }
}

/// Coefficient-wise reduction into F_p.
pub fn reduce_mod_p(f: &MultiPoly, p: u64) -> Result<PolyModP> {
    require_prime(p)?;
    let modulus = BigInt::from(p);
    let terms = f
        .terms()
        .filter_map(|(e, c)| {
            let r = c.mod_floor(&modulus).to_u64().expect("residue fits u64");
            (r != 0).then(|| (e.clone(), r))
        })
        .collect();
    Ok(PolyModP {
        p,
        nvars: f.nvars(),
        terms,
    })
}

/// How the innermost variable was resolved.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CountMethod {
    /// Every point evaluated with Horner's rule.
    Horner,
    /// Distinct roots of the gcd, via `gcd(g, x^p - x)`.
    RootCount,
}

impl CountMethod {
    pub fn tag(self) -> &'static str {
        match self {
            CountMethod::Horner => "nested-specialization/horner",
            CountMethod::RootCount => "nested-specialization/root-count",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum CountStrategy {
    #[default]
    Auto,
    Horner,
    RootCount,
}

#[derive(Clone, Debug)]
pub struct CountReport {
    pub p: u64,
    pub count: u64,
    pub elapsed: Duration,
    pub method: CountMethod,
}

/// Number of points of F_p^s where every polynomial vanishes mod p.
pub fn count_common_zeros(fs: &[MultiPoly], p: u64, budget: u64) -> Result<CountReport> {
    count_common_zeros_with(fs, p, budget, CountStrategy::Auto)
}

pub fn count_common_zeros_with(
    fs: &[MultiPoly],
    p: u64,
    budget: u64,
    strategy: CountStrategy,
) -> Result<CountReport> {
    let start = Instant::now();
    let s = shared_nvars(fs)?;
    require_prime(p)?;
    let points = (p as u128).checked_pow(s as u32).unwrap_or(u128::MAX);
    if points > budget as u128 {
        return Err(Error::BudgetExceeded { points, budget });
    }
    let method = match strategy {
        CountStrategy::Horner => CountMethod::Horner,
        CountStrategy::RootCount => CountMethod::RootCount,
        CountStrategy::Auto if p > ROOT_COUNT_THRESHOLD => CountMethod::RootCount,
        CountStrategy::Auto => CountMethod::Horner,
    };
    let dense = fs
        .iter()
        .map(|f| reduce_mod_p(f, p).map(|r| r.to_dense()))
        .collect::<Result<Vec<_>>>()?;
    let counter = Counter {
        p,
        s,
        polys: &dense,
        method,
    };
    let count = counter.run();
    debug_assert!(count as u128 <= points);
    Ok(CountReport {
        p,
        count,
        elapsed: start.elapsed(),
        method,
    })
}

/// `(s_p - components * p^dim) / p^(dim - 1/2)`.
///
/// Bounded values across primes are consistent with a Lang-Weil count of
/// `components` top-dimensional components; no constant is asserted.
pub fn lang_weil_residual(
    fs: &[MultiPoly],
    p: u64,
    dim: u32,
    components: u64,
    budget: u64,
) -> Result<f64> {
    let s = shared_nvars(fs)?;
    if dim as usize > s {
        return Err(Error::InvalidInput(format!("dim {dim} exceeds nvars {s}")));
    }
    if components == 0 {
        return Err(Error::InvalidInput("components must be >= 1".into()));
    }
    let report = count_common_zeros(fs, p, budget)?;
    let pf = p as f64;
    let expected = components as f64 * pf.powi(dim as i32);
    Ok((report.count as f64 - expected) / pf.powf(dim as f64 - 0.5))
}

pub(crate) fn shared_nvars(fs: &[MultiPoly]) -> Result<usize> {
    let first = fs
        .first()
        .ok_or_else(|| Error::InvalidInput("empty polynomial list".into()))?;
    let s = first.nvars();
    for f in fs {
        if f.nvars() != s {
            return Err(Error::DimensionMismatch {
                expected: s,
                got: f.nvars(),
            });
        }
    }
    Ok(s)
}

/// Row-major dense coefficients, `x1` outermost.
struct Dense {
    dims: Vec<usize>,
    coeffs: Vec<u64>,
}

type Active = SmallVec<[usize; 8]>;

struct Counter<'a> {
    p: u64,
    s: usize,
    polys: &'a [Dense],
    method: CountMethod,
}

impl Counter<'_> {
    /// Length of poly `i` once the first `level` variables are fixed.
    fn len_at(&self, i: usize, level: usize) -> usize {
        self.polys[i].dims[level..].iter().product()
    }

    fn scratch(&self) -> Vec<Vec<Vec<u64>>> {
        (0..=self.s)
            .map(|level| {
                (0..self.polys.len())
                    .map(|i| vec![0u64; self.len_at(i, level)])
                    .collect()
            })
            .collect()
    }

    fn run(&self) -> u64 {
        let mut bufs = self.scratch();
        for (i, d) in self.polys.iter().enumerate() {
            bufs[0][i].copy_from_slice(&d.coeffs);
        }
        let all: Active = (0..self.polys.len()).collect();
        let Some(active) = classify(&bufs[0], &all) else {
            return 0;
        };
        if active.is_empty() {
            return self.p.pow(self.s as u32);
        }
        if self.s == 1 {
            return self.count_univariate(&bufs[0], &active);
        }
        let top = &bufs[0];
        (0..self.p)
            .into_par_iter()
            .map_init(
                || self.scratch(),
                |scratch, a| {
                    if !self.specialize_all(top, &active, 0, a, &mut scratch[1]) {
                        return 0;
                    }
                    self.count_from(1, &active, &mut scratch[1..])
                },
            )
            .sum()
    }

    /// Specializes the leading variable of every active poly at `a`, writing
    /// into `out`. Returns false as soon as one becomes a nonzero constant.
    fn specialize_all(
        &self,
        cur: &[Vec<u64>],
        active: &[usize],
        level: usize,
        a: u64,
        out: &mut [Vec<u64>],
    ) -> bool {
        let p = self.p;
        for &i in active {
            let d = self.polys[i].dims[level];
            let inner = self.len_at(i, level + 1);
            let src = &cur[i];
            let dst = &mut out[i];
            dst.copy_from_slice(&src[(d - 1) * inner..d * inner]);
            for j in (0..d - 1).rev() {
                let block = &src[j * inner..(j + 1) * inner];
                for (o, &c) in dst.iter_mut().zip(block) {
                    *o = (mul_mod(*o, a, p) + c) % p;
                }
            }
            if dst[0] != 0 && dst[1..].iter().all(|&c| c == 0) {
                return false;
            }
        }
        true
    }

    fn count_from(&self, level: usize, active_in: &[usize], bufs: &mut [Vec<Vec<u64>>]) -> u64 {
        let (cur, rest) = bufs.split_first_mut().expect("scratch depth");
        let Some(active) = classify(cur, active_in) else {
            return 0;
        };
        let remaining = self.s - level;
        if active.is_empty() {
            return self.p.pow(remaining as u32);
        }
        if remaining == 1 {
            return self.count_univariate(cur, &active);
        }
        let mut total = 0;
        for a in 0..self.p {
            if self.specialize_all(cur, &active, level, a, &mut rest[0]) {
                total += self.count_from(level + 1, &active, rest);
            }
        }
        total
    }

    fn count_univariate(&self, cur: &[Vec<u64>], active: &[usize]) -> u64 {
        let p = self.p;
        match self.method {
            CountMethod::Horner => (0..p)
                .filter(|&x| active.iter().all(|&i| fpoly::eval(&cur[i], x, p) == 0))
                .count() as u64,
            CountMethod::RootCount => {
                let mut g = cur[active[0]].clone();
                for &i in &active[1..] {
                    g = fpoly::gcd(&g, &cur[i], p);
                }
                fpoly::trim(&mut g);
                if g.is_empty() {
                    p
                } else {
                    fpoly::count_distinct_roots(&g, p)
                }
            }
        }
    }
}

/// Drops identically-zero polys; `None` if some poly is a nonzero constant.
fn classify(cur: &[Vec<u64>], active: &[usize]) -> Option<Active> {
    let mut out = Active::new();
    for &i in active {
        let v = &cur[i];
        let tail_zero = v[1..].iter().all(|&c| c == 0);
        if tail_zero {
            if v[0] != 0 {
                return None;
            }
        } else {
            out.push(i);
        }
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn polys(src: &[&str], n: usize) -> Vec<MultiPoly> {
        src.iter()
            .map(|t| MultiPoly::parse(t, n).unwrap())
            .collect()
    }

    fn count(src: &[&str], n: usize, p: u64) -> u64 {
        count_common_zeros(&polys(src, n), p, DEFAULT_BUDGET)
            .unwrap()
            .count
    }

    #[test]
    fn reduce_examples() {
        let r = reduce_mod_p(&MultiPoly::parse("3*x1 + 7", 1).unwrap(), 3).unwrap();
        assert_eq!(r.terms().count(), 1);
        assert_eq!(r.coeff(&[0]), 1);

        let r = reduce_mod_p(&MultiPoly::parse("x1^2 + x2^2", 2).unwrap(), 5).unwrap();
        assert_eq!(r.coeff(&[2, 0]), 1);
        assert_eq!(r.coeff(&[0, 2]), 1);

        let r = reduce_mod_p(&MultiPoly::parse("10*x1", 1).unwrap(), 2).unwrap();
        assert!(r.is_zero());

        let r = reduce_mod_p(&MultiPoly::parse("-1", 1).unwrap(), 7).unwrap();
        assert_eq!(r.coeff(&[0]), 6);

        assert_eq!(
            reduce_mod_p(&MultiPoly::parse("x1", 1).unwrap(), 9),
            Err(Error::NotPrime(9))
        );
    }

    #[test]
    fn count_examples() {
        assert_eq!(count(&["x1", "x2"], 2, 7), 1);
        assert_eq!(count(&["x1^2 + x2^2"], 2, 3), 1);
        assert_eq!(count(&["x1*x2 - 1"], 2, 5), 4);
        assert_eq!(count(&["x1^2 + x2^2"], 2, 13), 25);
    }

    #[test]
    fn count_degenerate_cases() {
        // zero polynomial vanishes everywhere
        assert_eq!(count(&["0"], 2, 5), 25);
        assert_eq!(count(&["5*x1"], 2, 5), 25);
        assert_eq!(count(&["1"], 2, 5), 0);
        // single variable
        assert_eq!(count(&["x1^2 - 1"], 1, 101), 2);
        assert_eq!(count(&["x1^2 + 1"], 1, 103), 0);
        // three variables, linear form
        assert_eq!(count(&["x1 + x2 + x3"], 3, 11), 121);
    }

    #[test]
    fn strategies_agree() {
        let fs = polys(&["x1^3 - x2^2 + x1*x2", "x1^2 + 3*x2 - 1"], 2);
        for p in [2u64, 3, 5, 67, 71, 97] {
            let a = count_common_zeros_with(&fs, p, DEFAULT_BUDGET, CountStrategy::Horner).unwrap();
            let b =
                count_common_zeros_with(&fs, p, DEFAULT_BUDGET, CountStrategy::RootCount).unwrap();
            assert_eq!(a.count, b.count, "p = {p}");
            assert_eq!(a.method, CountMethod::Horner);
            assert_eq!(b.method, CountMethod::RootCount);
        }
    }

    #[test]
    fn budget_and_prime_errors() {
        let fs = polys(&["x1", "x2", "x3"], 3);
        assert!(matches!(
            count_common_zeros(&fs, 101, 1000),
            Err(Error::BudgetExceeded {
                points: 1030301,
                budget: 1000
            })
        ));
        assert_eq!(
            count_common_zeros(&fs, 10, 1000).unwrap_err(),
            Error::NotPrime(10)
        );
        assert!(count_common_zeros(&[], 7, 1000).is_err());
    }

    #[test]
    fn lang_weil_examples() {
        let hyperbola = polys(&["x1*x2 - 1"], 2);
        let r = lang_weil_residual(&hyperbola, 101, 1, 1, DEFAULT_BUDGET).unwrap();
        assert!((r - (-1.0 / 101f64.sqrt())).abs() < 1e-12);
        assert!((r - (-0.0995)).abs() < 1e-4);

        let origin = polys(&["x1", "x2"], 2);
        assert_eq!(
            lang_weil_residual(&origin, 13, 0, 1, DEFAULT_BUDGET).unwrap(),
            0.0
        );

        let conic = polys(&["x1^2 + x2^2"], 2);
        let r = lang_weil_residual(&conic, 13, 1, 2, DEFAULT_BUDGET).unwrap();
        assert!((r - (25.0 - 26.0) / 13f64.sqrt()).abs() < 1e-12);
        assert!((r + 0.277).abs() < 1e-3);

        assert!(lang_weil_residual(&conic, 13, 3, 1, DEFAULT_BUDGET).is_err());
    }

    #[test]
    fn single_linear_form_counts_hyperplane() {
        let fs = polys(&["3*x1 - 2*x2 + 5*x3 + 1"], 3);
        for p in [7u64, 11, 13] {
            assert_eq!(
                count_common_zeros(&fs, p, DEFAULT_BUDGET).unwrap().count,
                p * p
            );
        }
    }
}

//! Distances between empirical distributions and reference laws.

use num_rational::BigRational;
use num_traits::ToPrimitive;

use super::{EmpiricalDist, SupportKind};
use crate::error::{Error, Result};

pub enum Reference<'a> {
    Empirical(&'a EmpiricalDist),
    /// Same as `Empirical`, with integer values above `truncate` pooled into
    /// one tail bin on both sides.
    TruncatedEmpirical {
        dist: &'a EmpiricalDist,
        truncate: u64,
    },
    /// A pmf on `1, 2, ..`; values above `truncate` form a single tail bin
    /// carrying `1 - sum_{j <= truncate} pmf(j)`.
    IntegerPmf {
        pmf: &'a dyn Fn(u64) -> f64,
        truncate: u64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Comparison {
    /// Total variation distance.
    pub tv: Option<f64>,
    /// Kolmogorov-Smirnov statistic, `sup |F_a - F_b|`.
    pub ks: Option<f64>,
}

pub fn compare_distributions(a: &EmpiricalDist, b: Reference<'_>) -> Result<Comparison> {
    if a.total == 0 {
        return Err(Error::InvalidInput("empty empirical distribution".into()));
    }
    match b {
        Reference::Empirical(b) => {
            check_kinds(a, b)?;
            Ok(Comparison {
                tv: Some(tv_exact(a, b)),
                ks: Some(ks_exact(a, b)),
            })
        }
        Reference::TruncatedEmpirical { dist, truncate } => {
            check_kinds(a, dist)?;
            require_integer(a)?;
            let (fa, fb) = (binned(a, truncate), binned(dist, truncate));
            Ok(Comparison {
                tv: Some(tv_bins(&fa, &fb)),
                ks: Some(ks_bins(&fa, &fb)),
            })
        }
        Reference::IntegerPmf { pmf, truncate } => {
            require_integer(a)?;
            let fa = binned(a, truncate);
            let mut fb: Vec<f64> = (1..=truncate).map(pmf).collect();
            let head: f64 = fb.iter().sum();
            fb.push((1.0 - head).max(0.0));
            Ok(Comparison {
                tv: Some(tv_bins(&fa, &fb)),
                ks: Some(ks_bins(&fa, &fb)),
            })
        }
    }
}

fn check_kinds(a: &EmpiricalDist, b: &EmpiricalDist) -> Result<()> {
    if a.kind != b.kind {
        return Err(Error::IncompatibleSupports(format!(
            "{:?} vs {:?}",
            a.kind, b.kind
        )));
    }
    if b.total == 0 {
        return Err(Error::InvalidInput("empty empirical distribution".into()));
    }
    Ok(())
}

fn require_integer(a: &EmpiricalDist) -> Result<()> {
    if a.kind != SupportKind::Integer {
        return Err(Error::IncompatibleSupports(
            "integer reference needs an integer-valued sample".into(),
        ));
    }
    Ok(())
}

/// Frequencies of `1..=truncate`, then one bin for everything else.
fn binned(a: &EmpiricalDist, truncate: u64) -> Vec<f64> {
    let mut bins = vec![0.0; truncate as usize + 1];
    let total = a.total as f64;
    for (v, &c) in &a.counts {
        let slot = v
            .to_integer()
            .to_u64()
            .filter(|&j| v.is_integer() && (1..=truncate).contains(&j))
            .map_or(truncate as usize, |j| j as usize - 1);
        bins[slot] += c as f64 / total;
    }
    bins
}

fn tv_bins(a: &[f64], b: &[f64]) -> f64 {
    0.5 * a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum::<f64>()
}

fn ks_bins(a: &[f64], b: &[f64]) -> f64 {
    let (mut fa, mut fb, mut sup) = (0.0f64, 0.0f64, 0.0f64);
    for (x, y) in a.iter().zip(b) {
        fa += x;
        fb += y;
        sup = sup.max((fa - fb).abs());
    }
    sup
}

fn tv_exact(a: &EmpiricalDist, b: &EmpiricalDist) -> f64 {
    let (ta, tb) = (a.total as f64, b.total as f64);
    let mut sum = 0.0;
    for (v, &c) in &a.counts {
        let other = b.counts.get(v).copied().unwrap_or(0) as f64 / tb;
        sum += (c as f64 / ta - other).abs();
    }
    for (v, &c) in &b.counts {
        if !a.counts.contains_key(v) {
            sum += c as f64 / tb;
        }
    }
    0.5 * sum
}

/// Two-sample KS over exact values; ties are resolved by the exact order.
fn ks_exact(a: &EmpiricalDist, b: &EmpiricalDist) -> f64 {
    let (ta, tb) = (a.total as f64, b.total as f64);
    let mut ia = a.counts.iter().peekable();
    let mut ib = b.counts.iter().peekable();
    let (mut ca, mut cb) = (0u64, 0u64);
    let mut sup = 0.0f64;
    loop {
        let next: &BigRational = match (ia.peek(), ib.peek()) {
            (Some((x, _)), Some((y, _))) => (*x).min(*y),
            (Some((x, _)), None) => x,
            (None, Some((y, _))) => y,
            (None, None) => break,
        };
        let next = next.clone();
        while let Some((_, &c)) = ia.next_if(|(x, _)| **x == next) {
            ca += c;
        }
        while let Some((_, &c)) = ib.next_if(|(y, _)| **y == next) {
            cb += c;
        }
        sup = sup.max((ca as f64 / ta - cb as f64 / tb).abs());
    }
    sup
}

/// Two-sample KS statistic on real samples. NaNs are rejected by the caller.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> f64 {
    assert!(!a.is_empty() && !b.is_empty(), "KS needs nonempty samples");
    let mut xs = a.to_vec();
    let mut ys = b.to_vec();
    xs.sort_by(f64::total_cmp);
    ys.sort_by(f64::total_cmp);
    let (na, nb) = (xs.len() as f64, ys.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut sup = 0.0f64;
    while i < xs.len() && j < ys.len() {
        let v = xs[i].min(ys[j]);
        while i < xs.len() && xs[i] <= v {
            i += 1;
        }
        while j < ys.len() && ys[j] <= v {
            j += 1;
        }
        sup = sup.max((i as f64 / na - j as f64 / nb).abs());
    }
    sup.max((i as f64 / na - j as f64 / nb).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn ints(v: &[u64]) -> EmpiricalDist {
        EmpiricalDist::from_integers(v.iter().map(|&x| BigInt::from(x)))
    }

    #[test]
    fn identical_and_disjoint() {
        let a = ints(&[1, 2, 2, 3]);
        let c = compare_distributions(&a, Reference::Empirical(&a)).unwrap();
        assert_eq!((c.tv, c.ks), (Some(0.0), Some(0.0)));
        let one = ints(&[1, 1]);
        let two = ints(&[2]);
        let c = compare_distributions(&one, Reference::Empirical(&two)).unwrap();
        assert_eq!((c.tv, c.ks), (Some(1.0), Some(1.0)));
    }

    #[test]
    fn pmf_with_tail_bin() {
        let a = ints(&[1, 1, 2, 5]);
        let pmf = |j: u64| if j <= 2 { 0.25 } else { 0.0 };
        let c = compare_distributions(
            &a,
            Reference::IntegerPmf {
                pmf: &pmf,
                truncate: 2,
            },
        )
        .unwrap();
        // bins (0.5, 0.25, 0.25) vs (0.25, 0.25, 0.5)
        assert!((c.tv.unwrap() - 0.25).abs() < 1e-12);
        assert!((c.ks.unwrap() - 0.25).abs() < 1e-12);
    }

    #[test]
    fn kinds_must_match() {
        let a = ints(&[1]);
        let r = EmpiricalDist::from_rationals([BigRational::new(1.into(), 2.into())]);
        assert!(matches!(
            compare_distributions(&a, Reference::Empirical(&r)),
            Err(Error::IncompatibleSupports(_))
        ));
        let pmf = |_: u64| 0.5;
        assert!(compare_distributions(
            &r,
            Reference::IntegerPmf {
                pmf: &pmf,
                truncate: 2
            }
        )
        .is_err());
    }

    #[test]
    fn ks_real_samples() {
        assert_eq!(ks_two_sample(&[0.1, 0.2], &[0.1, 0.2]), 0.0);
        assert_eq!(ks_two_sample(&[0.1, 0.2], &[0.3, 0.4]), 1.0);
        assert!((ks_two_sample(&[1.0, 2.0, 3.0, 4.0], &[2.5]) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn ks_exact_matches_real_version() {
        let a = ints(&[1, 3, 3, 7, 9]);
        let b = ints(&[2, 3, 8]);
        let exact = ks_exact(&a, &b);
        let real = ks_two_sample(&a.to_f64_samples(), &b.to_f64_samples());
        assert!((exact - real).abs() < 1e-12);
    }
}

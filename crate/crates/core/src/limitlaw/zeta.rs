//! Riemann zeta at integers `s >= 2` and the limiting gcd law.

use crate::error::{Error, Result};

const HEAD_TERMS: u32 = 64;
const BERNOULLI_OVER_FACTORIAL: [f64; 4] =
    [1.0 / 12.0, -1.0 / 720.0, 1.0 / 30_240.0, -1.0 / 1_209_600.0];

/// `zeta(s)` by a partial sum plus an Euler-Maclaurin tail; the error is far
/// below `f64` resolution for `s >= 2`.
pub fn zeta(s: u32) -> Result<f64> {
    if s < 2 {
        return Err(Error::InvalidInput(format!("zeta needs s >= 2, got {s}")));
    }
    let sf = s as f64;
    let head: f64 = (1..HEAD_TERMS)
        .rev()
        .map(|k| (k as f64).powi(-(s as i32)))
        .sum();
    let n = HEAD_TERMS as f64;
    let mut tail = n.powf(1.0 - sf) / (sf - 1.0) + 0.5 * n.powf(-sf);
    // Euler-Maclaurin corrections B_2k / (2k)! * s(s+1)..(s+2k-2) * n^(-s-2k+1)
    let mut rising = sf;
    for (k, b) in BERNOULLI_OVER_FACTORIAL.iter().enumerate() {
        let k = k as f64 + 1.0;
        tail += b * rising * n.powf(-sf - 2.0 * k + 1.0);
        rising *= (sf + 2.0 * k - 1.0) * (sf + 2.0 * k);
    }
    Ok(head + tail)
}

/// `P{G = j} = 1 / (zeta(s) j^s)`, the limit law of the gcd of `s` uniform integers.
pub fn zeta_gcd_pmf(s: u32, j: u64) -> Result<f64> {
    if j == 0 {
        return Err(Error::InvalidInput("pmf support starts at 1".into()));
    }
    Ok(1.0 / (zeta(s)? * (j as f64).powi(s as i32)))
}

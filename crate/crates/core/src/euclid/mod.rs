//! Resultants, common-factor tests and Bezout certificates.

mod bezout;
mod common_factor;
mod resultant;
pub(crate) mod zpoly;

pub use bezout::{bezout_certificate, BezoutCertificate};
pub use common_factor::{
    common_factor_witnesses, has_common_factor, has_common_factor_traced, CommonFactorOptions,
    CommonFactorReport, WitnessSet,
};
pub use resultant::{resultant_in, resultant_univariate, sylvester_resultant};

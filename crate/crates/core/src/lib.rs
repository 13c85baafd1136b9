//! Arithmetic statistics of integer polynomial values: exact polynomial
//! arithmetic, point counting over prime fields, p-adic sampling,
//! resultant and Bezout machinery, limit-law densities and finite-n
//! Monte Carlo experiments.

pub mod error;
pub mod euclid;
pub mod finitefield;
pub mod limitlaw;
pub mod montecarlo;
pub mod padic;
pub mod polyring;
pub mod primes;
mod rng;

pub use error::{Error, ErrorKind, Result};
pub use euclid::{
    bezout_certificate, common_factor_witnesses, has_common_factor, sylvester_resultant,
    BezoutCertificate, WitnessSet,
};
pub use finitefield::{count_common_zeros, CountReport, PolyModP, DEFAULT_BUDGET};
pub use limitlaw::{
    ekedahl_poonen_density, simulate_gcd, simulate_nlcm, simulate_scaled_lcm_limit, zeta_gcd_pmf,
    EulerProductResult, LimitSampleSet, SimulationConfig,
};
pub use montecarlo::{
    compare_distributions, multiset_gcd_lcm_nlcm, sample_statistic, EmpiricalDist,
    ExperimentConfig, Statistic,
};
pub use padic::{ResidueStream, SampledValuation, Valuation, ValuationSample, ValuationSampler};
pub use polyring::{Degree, ExpVector, MultiPoly};
pub use rng::keyed_rng;

//! Limiting laws: the zeta gcd law, Euler-product densities and Monte Carlo
//! of the adelic limits of gcd and normalized lcm.

mod density;
mod simulate;
mod zeta;

pub use density::{ekedahl_poonen_density, EulerFactor, EulerProductResult, SAFETY_FACTOR};
pub use simulate::{
    simulate_gcd, simulate_nlcm, simulate_scaled_lcm_limit, uniform_unit_point, LimitSampleSet,
    LimitSamples, SimulationConfig, TailEstimate, DEFAULT_SIM_PMAX,
};
pub use zeta::{zeta, zeta_gcd_pmf};

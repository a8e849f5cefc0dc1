//! Arbitrary-precision evaluation and exponential asymptotics of the Wright
//! generalised hypergeometric function pΨq(z).

pub mod coeffs;
pub mod error;
pub mod expansions;
pub mod hp;
pub mod job;
pub mod params;
pub mod presets;
pub mod rational;
pub mod series;
pub mod stokes;

pub use error::{Result, WrightError};
pub use hp::{hp_erf, hp_gamma, hp_recip_gamma, ray_power, HPComplex, HPReal, RayPoint};

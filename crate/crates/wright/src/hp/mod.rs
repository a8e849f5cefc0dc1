//! High-precision real/complex arithmetic and the special functions the
//! series and expansion machinery needs.

pub mod complex;
pub mod erf;
pub mod gamma;
pub mod ray;
pub mod real;

pub use complex::HPComplex;
pub use erf::hp_erf;
pub use gamma::{hp_gamma, hp_recip_gamma};
pub use ray::{ray_power, RayPoint};
pub use real::HPReal;

use astro_float::Consts;
use std::cell::RefCell;

thread_local! {
    static CONSTS: RefCell<Consts> =
        RefCell::new(Consts::new().expect("constants cache allocation"));
}

/// Runs `f` with the thread-local constants cache for exp/ln/trig.
pub(crate) fn with_consts<T>(f: impl FnOnce(&mut Consts) -> T) -> T {
    CONSTS.with(|c| f(&mut c.borrow_mut()))
}

pub(crate) const LOG2_10: f64 = 3.321928094887362;

/// Binary working precision for a decimal digit count, with guard bits.
pub(crate) fn bits_for(digits: usize) -> usize {
    (digits as f64 * LOG2_10).ceil() as usize + 64
}

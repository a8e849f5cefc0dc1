//! Points on a ray: modulus plus an unreduced argument.
//!
//! The expansions distinguish z, ze^{∓πi} and ze^{∓2πi}; a plain complex
//! number cannot carry that branch information, so the argument here is a
//! free real, never reduced modulo 2π.

use super::complex::HPComplex;
use super::real::HPReal;

/// z = r·e^{iθ} with r > 0 and θ unreduced.
#[derive(Clone, Debug)]
pub struct RayPoint {
    pub r: HPReal,
    pub theta: HPReal,
}

impl RayPoint {
    pub fn new(r: HPReal, theta: HPReal) -> Self {
        debug_assert!(r.is_positive(), "RayPoint modulus must be positive");
        RayPoint { r, theta }
    }

    pub fn from_f64(r: f64, theta: f64, digits: usize) -> Self {
        RayPoint::new(HPReal::from_f64(r, digits), HPReal::from_f64(theta, digits))
    }

    pub fn digits(&self) -> usize {
        self.r.digits().max(self.theta.digits())
    }

    pub fn with_digits(&self, digits: usize) -> Self {
        RayPoint {
            r: self.r.with_digits(digits),
            theta: self.theta.with_digits(digits),
        }
    }

    /// Same point with the argument shifted by `k`·π.
    pub fn rotate_pi(&self, k: i64) -> Self {
        let digits = self.digits();
        let shift = &HPReal::pi(digits) * &HPReal::from_i64(k, digits);
        RayPoint {
            r: self.r.clone(),
            theta: &self.theta + &shift,
        }
    }

    pub fn to_complex(&self) -> HPComplex {
        HPComplex::new(&self.r * &self.theta.cos(), &self.r * &self.theta.sin())
    }
}

/// z^e on the branch selected by the unreduced argument:
/// (r e^{iθ})^e = r^e e^{ieθ}.
pub fn ray_power(z: &RayPoint, e: &HPReal) -> HPComplex {
    let digits = z.digits().max(e.digits());
    let modulus = z.r.with_digits(digits).pow(e);
    let phase = &z.theta.with_digits(digits) * e;
    HPComplex::new(&modulus * &phase.cos(), &modulus * &phase.sin())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    #[test]
    fn unit_ray_power() {
        let z = RayPoint::from_f64(1.0, 0.0, 50);
        let w = ray_power(&z, &HPReal::from_f64(0.37, 50));
        assert!((w.re.to_f64() - 1.0).abs() < 1e-40);
        assert!(w.im.to_f64().abs() < 1e-40);
    }

    #[test]
    fn branch_distinction_of_sqrt() {
        let half = HPReal::from_rational(&ratio(1, 2), 50);
        let pi = HPReal::pi(50);
        let upper = RayPoint::new(HPReal::from_u64(4, 50), pi.clone());
        let lower = RayPoint::new(HPReal::from_u64(4, 50), -&pi);
        let wu = ray_power(&upper, &half);
        let wl = ray_power(&lower, &half);
        assert!(wu.re.to_f64().abs() < 1e-40 && (wu.im.to_f64() - 2.0).abs() < 1e-40);
        assert!(wl.re.to_f64().abs() < 1e-40 && (wl.im.to_f64() + 2.0).abs() < 1e-40);
    }

    #[test]
    fn power_one_round_trips() {
        let z = RayPoint::from_f64(2.5, 1.234, 60);
        let direct = z.to_complex();
        let pow1 = ray_power(&z, &HPReal::one(60));
        assert!((&direct - &pow1).abs().to_f64() < 1e-55);
    }

    #[test]
    fn rotate_pi_shifts_argument() {
        let z = RayPoint::from_f64(3.0, 0.5, 50);
        let w = z.rotate_pi(-2);
        let diff = &(&z.theta - &w.theta) - &(&HPReal::pi(50) * &HPReal::from_u64(2, 50));
        assert!(diff.abs().to_f64() < 1e-45);
        // same complex point, different ray
        assert!((&z.to_complex() - &w.to_complex()).abs().to_f64() < 1e-44);
    }
}

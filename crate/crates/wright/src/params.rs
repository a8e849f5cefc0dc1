//! Wright-function parameter sets and the constants derived from them.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Result, WrightError};
use crate::hp::HPReal;
use crate::rational::ratio;

/// A parameter that is either an exact rational or a high-precision real.
///
/// Exact parameters unlock the exact pole bookkeeping and the fast series
/// recurrence; approximate ones fall back to the generic paths.
#[derive(Clone, Debug, PartialEq)]
pub enum ParamValue {
    Exact(BigRational),
    Approx(HPReal),
}

impl ParamValue {
    pub fn exact(n: i64, d: i64) -> Self {
        ParamValue::Exact(ratio(n, d))
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            ParamValue::Exact(r) => Some(r),
            ParamValue::Approx(_) => None,
        }
    }

    pub fn to_hp(&self, digits: usize) -> HPReal {
        match self {
            ParamValue::Exact(r) => HPReal::from_rational(r, digits),
            ParamValue::Approx(x) => x.with_digits(digits),
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            ParamValue::Exact(r) => r.to_f64().unwrap_or(f64::NAN),
            ParamValue::Approx(x) => x.to_f64(),
        }
    }

    pub fn is_positive(&self) -> bool {
        match self {
            ParamValue::Exact(r) => r.is_positive(),
            ParamValue::Approx(x) => x.is_positive(),
        }
    }
}

impl From<BigRational> for ParamValue {
    fn from(r: BigRational) -> Self {
        ParamValue::Exact(r)
    }
}

/// Parameters of pΨq: upper pairs (α_r, a_r), lower pairs (β_r, b_r).
#[derive(Clone, Debug)]
pub struct WrightParams {
    pub upper: Vec<(ParamValue, ParamValue)>,
    pub lower: Vec<(ParamValue, ParamValue)>,
}

impl WrightParams {
    pub fn new(
        upper: Vec<(ParamValue, ParamValue)>,
        lower: Vec<(ParamValue, ParamValue)>,
    ) -> Result<Self> {
        let params = WrightParams { upper, lower };
        params.validate()?;
        Ok(params)
    }

    pub fn p(&self) -> usize {
        self.upper.len()
    }

    pub fn q(&self) -> usize {
        self.lower.len()
    }

    /// True when every α, a, β, b is an exact rational.
    pub fn all_exact(&self) -> bool {
        self.upper
            .iter()
            .chain(self.lower.iter())
            .all(|(x, y)| matches!(x, ParamValue::Exact(_)) && matches!(y, ParamValue::Exact(_)))
    }

    /// All α and β must be positive, and no upper gamma argument α_r·n + a_r
    /// may hit a nonpositive integer for any n ≥ 0.
    pub fn validate(&self) -> Result<()> {
        for (alpha, _) in &self.upper {
            if !alpha.is_positive() {
                return Err(WrightError::InvalidParams(format!(
                    "alpha = {} must be positive",
                    alpha.to_f64()
                )));
            }
        }
        for (beta, _) in &self.lower {
            if !beta.is_positive() {
                return Err(WrightError::InvalidParams(format!(
                    "beta = {} must be positive",
                    beta.to_f64()
                )));
            }
        }
        for (alpha, a) in &self.upper {
            if let Some(n) = upper_pair_hits_pole(alpha, a) {
                return Err(WrightError::InvalidParams(format!(
                    "alpha·n + a = {}·{} + {} is a nonpositive integer",
                    alpha.to_f64(),
                    n,
                    a.to_f64()
                )));
            }
        }
        Ok(())
    }
}

/// Returns Some(n) if α·n + a lands on a nonpositive integer for some n ≥ 0.
fn upper_pair_hits_pole(alpha: &ParamValue, a: &ParamValue) -> Option<u64> {
    match (alpha.as_rational(), a.as_rational()) {
        (Some(al), Some(av)) => {
            if av.is_positive() {
                return None;
            }
            let n_max = (-av / al).floor().to_integer().to_u64()?;
            for n in 0..=n_max {
                let v = al * BigRational::from(BigInt::from(n)) + av;
                if v.is_integer() && !v.is_positive() {
                    return Some(n);
                }
            }
            None
        }
        _ => {
            // approximate parameters: tolerance check on the same range
            let al = alpha.to_f64();
            let av = a.to_f64();
            if av > 0.0 {
                return None;
            }
            let n_max = (-av / al).floor() as u64;
            let tol = 1e-12;
            for n in 0..=n_max {
                let v = al * n as f64 + av;
                if v <= tol && (v - v.round()).abs() < tol {
                    return Some(n);
                }
            }
            None
        }
    }
}

/// The constants κ, h, ϑ, ϑ′ and A₀ attached to a parameter set.
#[derive(Clone, Debug)]
pub struct DerivedConstants {
    pub kappa: HPReal,
    pub h: HPReal,
    pub theta_big: HPReal,
    pub theta_prime: HPReal,
    pub a0: HPReal,
    /// κ = 0 boundary case: constants are still usable, evaluation is not.
    pub kappa_zero: bool,
    /// Exact counterparts, present when all parameters are rational.
    pub kappa_exact: Option<BigRational>,
    pub theta_exact: Option<BigRational>,
    pub theta_prime_exact: Option<BigRational>,
}

/// κ = 1 + Σβ − Σα, h = Πα^α Πβ^{−β}, ϑ = Σa − Σb + (q−p)/2, ϑ′ = 1 − ϑ,
/// A₀ = (2π)^{(p−q)/2} κ^{−1/2−ϑ} Πα^{a−1/2} Πβ^{1/2−b}.
pub fn derive_constants(params: &WrightParams, digits: usize) -> Result<DerivedConstants> {
    params.validate()?;
    let p = params.p() as i64;
    let q = params.q() as i64;

    let (kappa_exact, theta_exact) = if params.all_exact() {
        let mut k = BigRational::one();
        let mut t = ratio(q - p, 2);
        for (alpha, a) in &params.upper {
            k -= alpha.as_rational().unwrap();
            t += a.as_rational().unwrap();
        }
        for (beta, b) in &params.lower {
            k += beta.as_rational().unwrap();
            t -= b.as_rational().unwrap();
        }
        (Some(k), Some(t))
    } else {
        (None, None)
    };

    let one = HPReal::one(digits);
    let half = HPReal::from_rational(&ratio(1, 2), digits);

    let mut kappa = one.clone();
    let mut theta = HPReal::from_rational(&ratio(q - p, 2), digits);
    let mut h = one.clone();
    let mut a0 = one.clone();
    for (alpha, a) in &params.upper {
        let al = alpha.to_hp(digits);
        let av = a.to_hp(digits);
        kappa = &kappa - &al;
        theta = &theta + &av;
        h = &h * &al.pow(&al);
        a0 = &a0 * &al.pow(&(&av - &half));
    }
    for (beta, b) in &params.lower {
        let be = beta.to_hp(digits);
        let bv = b.to_hp(digits);
        kappa = &kappa + &be;
        theta = &theta - &bv;
        h = &h / &be.pow(&be);
        a0 = &a0 * &be.pow(&(&half - &bv));
    }

    let kappa_is_zero = match &kappa_exact {
        Some(k) => k.is_zero(),
        None => kappa.log10_abs_approx() < -(digits as f64 - 10.0),
    };
    if !kappa_is_zero && kappa.is_negative() {
        return Err(WrightError::KappaNonPositive {
            kappa: kappa.to_f64(),
        });
    }

    if !kappa_is_zero {
        let two_pi = &HPReal::pi(digits) * &HPReal::from_u64(2, digits);
        a0 = &a0 * &two_pi.pow(&HPReal::from_rational(&ratio(p - q, 2), digits));
        a0 = &a0 * &kappa.pow(&(&(-&half) - &theta));
    }

    let theta_prime = &one - &theta;
    Ok(DerivedConstants {
        kappa,
        h,
        theta_prime,
        a0,
        theta_big: theta,
        kappa_zero: kappa_is_zero,
        theta_prime_exact: theta_exact.as_ref().map(|t| BigRational::one() - t),
        kappa_exact,
        theta_exact,
    })
}

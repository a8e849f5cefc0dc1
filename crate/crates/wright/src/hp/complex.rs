//! Complex numbers over HPReal.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use super::real::HPReal;

/// Rectangular complex number; both parts carry the same working precision.
#[derive(Clone, Debug)]
pub struct HPComplex {
    pub re: HPReal,
    pub im: HPReal,
}

impl HPComplex {
    pub fn new(re: HPReal, im: HPReal) -> Self {
        let digits = re.digits().max(im.digits());
        HPComplex {
            re: re.with_digits(digits),
            im: im.with_digits(digits),
        }
    }

    pub fn zero(digits: usize) -> Self {
        HPComplex {
            re: HPReal::zero(digits),
            im: HPReal::zero(digits),
        }
    }

    pub fn from_real(re: HPReal) -> Self {
        let z = HPReal::zero(re.digits());
        HPComplex { re, im: z }
    }

    pub fn digits(&self) -> usize {
        self.re.digits()
    }

    pub fn with_digits(&self, digits: usize) -> Self {
        HPComplex {
            re: self.re.with_digits(digits),
            im: self.im.with_digits(digits),
        }
    }

    pub fn conj(&self) -> Self {
        HPComplex {
            re: self.re.clone(),
            im: -&self.im,
        }
    }

    pub fn norm_sqr(&self) -> HPReal {
        &(&self.re * &self.re) + &(&self.im * &self.im)
    }

    pub fn abs(&self) -> HPReal {
        self.norm_sqr().sqrt()
    }

    /// Principal argument in (−π, π].
    pub fn arg(&self) -> HPReal {
        let digits = self.digits();
        let pi = HPReal::pi(digits);
        if self.re.is_zero() && self.im.is_zero() {
            return HPReal::zero(digits);
        }
        if self.re.is_positive() {
            return (&self.im / &self.re).atan();
        }
        if self.re.is_zero() {
            let half = &pi / &HPReal::from_u64(2, digits);
            return if self.im.is_positive() { half } else { -&half };
        }
        // re < 0
        let base = (&self.im / &self.re).atan();
        if self.im.is_negative() {
            &base - &pi
        } else {
            &base + &pi
        }
    }

    pub fn scale(&self, s: &HPReal) -> Self {
        HPComplex {
            re: &self.re * s,
            im: &self.im * s,
        }
    }

    pub fn exp(&self) -> Self {
        let m = self.re.exp();
        HPComplex {
            re: &m * &self.im.cos(),
            im: &m * &self.im.sin(),
        }
    }

    /// Integer power by binary exponentiation.
    pub fn powi(&self, mut n: u64) -> Self {
        let digits = self.digits();
        let mut base = self.clone();
        let mut acc = HPComplex::from_real(HPReal::one(digits));
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn recip(&self) -> Self {
        let n = self.norm_sqr();
        HPComplex {
            re: &self.re / &n,
            im: &(-&self.im) / &n,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

impl fmt::Display for HPComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sig = self.digits();
        write!(
            f,
            "{} {} {}i",
            self.re.to_decimal_string(sig),
            if self.im.is_negative() { "-" } else { "+" },
            self.im.abs().to_decimal_string(sig)
        )
    }
}

impl Add for &HPComplex {
    type Output = HPComplex;
    fn add(self, rhs: &HPComplex) -> HPComplex {
        HPComplex {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }
}

impl Sub for &HPComplex {
    type Output = HPComplex;
    fn sub(self, rhs: &HPComplex) -> HPComplex {
        HPComplex {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }
}

impl Mul for &HPComplex {
    type Output = HPComplex;
    fn mul(self, rhs: &HPComplex) -> HPComplex {
        HPComplex {
            re: &(&self.re * &rhs.re) - &(&self.im * &rhs.im),
            im: &(&self.re * &rhs.im) + &(&self.im * &rhs.re),
        }
    }
}

impl Div for &HPComplex {
    type Output = HPComplex;
    fn div(self, rhs: &HPComplex) -> HPComplex {
        &*self * &rhs.recip()
    }
}

impl Neg for &HPComplex {
    type Output = HPComplex;
    fn neg(self) -> HPComplex {
        HPComplex {
            re: -&self.re,
            im: -&self.im,
        }
    }
}

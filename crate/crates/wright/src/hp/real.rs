//! Arbitrary-precision real numbers with precision tracked in decimal digits.

use astro_float::{BigFloat, Exponent, Radix, RoundingMode, Sign, Word};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use super::{bits_for, with_consts};

const RM: RoundingMode = RoundingMode::None;

/// A real number carrying its own working precision in decimal digits.
///
/// Arithmetic between two values is performed at the larger of the two
/// precisions, and the result carries that precision. The minimum is 20
/// digits.
#[derive(Clone)]
pub struct HPReal {
    bf: BigFloat,
    digits: usize,
}

impl HPReal {
    pub const MIN_DIGITS: usize = 20;

    fn clamp_digits(digits: usize) -> usize {
        digits.max(Self::MIN_DIGITS)
    }

    pub fn digits(&self) -> usize {
        self.digits
    }

    pub(crate) fn bits(&self) -> usize {
        bits_for(self.digits)
    }

    pub fn zero(digits: usize) -> Self {
        let digits = Self::clamp_digits(digits);
        HPReal {
            bf: BigFloat::new(bits_for(digits)),
            digits,
        }
    }

    pub fn one(digits: usize) -> Self {
        Self::from_u64(1, digits)
    }

    pub fn from_u64(v: u64, digits: usize) -> Self {
        let digits = Self::clamp_digits(digits);
        HPReal {
            bf: BigFloat::from_u64(v, bits_for(digits)),
            digits,
        }
    }

    pub fn from_i64(v: i64, digits: usize) -> Self {
        let digits = Self::clamp_digits(digits);
        HPReal {
            bf: BigFloat::from_i64(v, bits_for(digits)),
            digits,
        }
    }

    pub fn from_f64(v: f64, digits: usize) -> Self {
        let digits = Self::clamp_digits(digits);
        HPReal {
            bf: BigFloat::from_f64(v, bits_for(digits)),
            digits,
        }
    }

    /// `u · 2^exp2` from an exact big-integer mantissa.
    pub fn from_biguint_exp2(u: &BigUint, exp2: i64, digits: usize) -> Self {
        let digits = Self::clamp_digits(digits);
        if u.is_zero() {
            return Self::zero(digits);
        }
        let words: Vec<Word> = u.to_u64_digits();
        let e = exp2 + words.len() as i64 * 64;
        let bf = BigFloat::from_words(&words, Sign::Pos, e as Exponent);
        let mut bf = bf;
        let _ = bf.set_precision(bits_for(digits), RM);
        HPReal { bf, digits }
    }

    pub fn from_bigint(v: &BigInt, digits: usize) -> Self {
        let mag = Self::from_biguint_exp2(v.magnitude(), 0, digits);
        if v.is_negative() {
            -&mag
        } else {
            mag
        }
    }

    pub fn from_rational(r: &BigRational, digits: usize) -> Self {
        let num = Self::from_bigint(r.numer(), digits);
        let den = Self::from_bigint(r.denom(), digits);
        &num / &den
    }

    /// Parses a decimal string (integer, fixed-point or scientific notation).
    pub fn from_str_dec(s: &str, digits: usize) -> Option<Self> {
        let digits = Self::clamp_digits(digits);
        let bf = with_consts(|cc| BigFloat::parse(s, Radix::Dec, bits_for(digits), RM, cc));
        if bf.is_nan() {
            None
        } else {
            Some(HPReal { bf, digits })
        }
    }

    pub fn pi(digits: usize) -> Self {
        let digits = Self::clamp_digits(digits);
        let bf = with_consts(|cc| cc.pi(bits_for(digits), RM));
        HPReal { bf, digits }
    }

    /// Returns the same value re-rounded to a new working precision.
    pub fn with_digits(&self, digits: usize) -> Self {
        let digits = Self::clamp_digits(digits);
        let mut bf = self.bf.clone();
        let _ = bf.set_precision(bits_for(digits), RM);
        HPReal { bf, digits }
    }

    fn join(&self, rhs: &Self) -> (usize, usize) {
        let digits = self.digits.max(rhs.digits);
        (digits, bits_for(digits))
    }

    pub fn is_zero(&self) -> bool {
        self.bf.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.bf.is_negative() && !self.bf.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.bf.is_positive() && !self.bf.is_zero()
    }

    pub fn abs(&self) -> Self {
        HPReal {
            bf: self.bf.abs(),
            digits: self.digits,
        }
    }

    pub fn max(&self, other: &Self) -> Self {
        if self >= other {
            self.clone()
        } else {
            other.clone()
        }
    }

    pub fn floor(&self) -> Self {
        HPReal {
            bf: self.bf.floor(),
            digits: self.digits,
        }
    }

    pub fn sqrt(&self) -> Self {
        HPReal {
            bf: self.bf.sqrt(self.bits(), RM),
            digits: self.digits,
        }
    }

    pub fn exp(&self) -> Self {
        let bf = with_consts(|cc| self.bf.exp(self.bits(), RM, cc));
        HPReal {
            bf,
            digits: self.digits,
        }
    }

    pub fn ln(&self) -> Self {
        let bf = with_consts(|cc| self.bf.ln(self.bits(), RM, cc));
        HPReal {
            bf,
            digits: self.digits,
        }
    }

    pub fn sin(&self) -> Self {
        let bf = with_consts(|cc| self.bf.sin(self.bits(), RM, cc));
        HPReal {
            bf,
            digits: self.digits,
        }
    }

    pub fn cos(&self) -> Self {
        let bf = with_consts(|cc| self.bf.cos(self.bits(), RM, cc));
        HPReal {
            bf,
            digits: self.digits,
        }
    }

    pub fn atan(&self) -> Self {
        let bf = with_consts(|cc| self.bf.atan(self.bits(), RM, cc));
        HPReal {
            bf,
            digits: self.digits,
        }
    }

    /// `self^e` for positive `self`.
    pub fn pow(&self, e: &Self) -> Self {
        let (digits, bits) = self.join(e);
        let bf = with_consts(|cc| self.bf.pow(&e.bf, bits, RM, cc));
        HPReal { bf, digits }
    }

    /// Integer power by binary exponentiation; valid for any sign of base.
    pub fn powi(&self, mut n: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.digits);
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
        HPReal {
            bf: self.bf.reciprocal(self.bits(), RM),
            digits: self.digits,
        }
    }

    /// Base-2 exponent of the value: |x| ∈ [2^(e−1), 2^e). None for zero.
    pub fn exponent2(&self) -> Option<i64> {
        if self.bf.is_zero() {
            None
        } else {
            self.bf.exponent().map(|e| e as i64)
        }
    }

    /// Cheap order-of-magnitude estimate of log10 |x|; −inf for zero.
    pub fn log10_abs_approx(&self) -> f64 {
        match self.exponent2() {
            None => f64::NEG_INFINITY,
            Some(e) => e as f64 * std::f64::consts::LOG10_2,
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.bf.is_zero() {
            return 0.0;
        }
        let (words, _n, sign, e, _) = match self.bf.as_raw_parts() {
            Some(p) => p,
            None => return f64::NAN,
        };
        let len = words.len();
        let hi = words[len - 1] as f64;
        let lo = if len >= 2 { words[len - 2] as f64 } else { 0.0 };
        // value = 0.mantissa · 2^e with the mantissa MSB-aligned
        let frac = hi * 2f64.powi(-64) + lo * 2f64.powi(-128);
        let mag = if e > 1000 {
            f64::INFINITY
        } else if e < -1000 {
            0.0
        } else {
            frac * 2f64.powi(e)
        };
        if sign == Sign::Neg {
            -mag
        } else {
            mag
        }
    }

    /// Extracts the value as `(mantissa, exp2)` with `value = ±mantissa·2^exp2`.
    #[cfg(test)]
    pub(crate) fn to_biguint_exp2(&self) -> Option<(BigUint, i64, bool)> {
        if self.bf.is_zero() {
            return Some((BigUint::zero(), 0, false));
        }
        let (words, _n, sign, e, _) = self.bf.as_raw_parts()?;
        let u = BigUint::from_slice(
            &words
                .iter()
                .flat_map(|w| [*w as u32, (*w >> 32) as u32])
                .collect::<Vec<_>>(),
        );
        let exp2 = e as i64 - words.len() as i64 * 64;
        Some((u, exp2, sign == Sign::Neg))
    }

    /// Scientific-notation rendering with `sig` significant digits.
    pub fn to_decimal_string(&self, sig: usize) -> String {
        let sig = sig.max(1);
        if self.bf.is_zero() {
            return "0.0".to_string();
        }
        let conv = with_consts(|cc| self.bf.convert_to_radix(Radix::Dec, RM, cc));
        let (sign, digits, e10) = match conv {
            Ok(t) => t,
            Err(_) => return "nan".to_string(),
        };
        // value = 0.d1 d2 ... × 10^e10
        let mut ds: Vec<u8> = digits;
        while ds.len() < sig + 1 {
            ds.push(0);
        }
        let mut exp = e10 as i64 - 1;
        // round at position `sig`
        if ds[sig] >= 5 {
            let mut i = sig;
            loop {
                if i == 0 {
                    ds.insert(0, 1);
                    exp += 1;
                    break;
                }
                i -= 1;
                if ds[i] == 9 {
                    ds[i] = 0;
                } else {
                    ds[i] += 1;
                    break;
                }
            }
        }
        let mut s = String::new();
        if sign == Sign::Neg {
            s.push('-');
        }
        s.push((b'0' + ds[0]) as char);
        if sig > 1 {
            s.push('.');
            for d in &ds[1..sig] {
                s.push((b'0' + d) as char);
            }
        }
        s.push('e');
        s.push_str(&exp.to_string());
        s
    }
}

impl PartialEq for HPReal {
    fn eq(&self, other: &Self) -> bool {
        self.bf.cmp(&other.bf) == Some(0)
    }
}

impl PartialOrd for HPReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.bf.cmp(&other.bf).map(|c| c.cmp(&0))
    }
}

impl fmt::Debug for HPReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HPReal({} @ {}d)", self.to_f64(), self.digits)
    }
}

impl fmt::Display for HPReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal_string(self.digits))
    }
}

impl Add for &HPReal {
    type Output = HPReal;
    fn add(self, rhs: &HPReal) -> HPReal {
        let (digits, bits) = self.join(rhs);
        HPReal {
            bf: self.bf.add(&rhs.bf, bits, RM),
            digits,
        }
    }
}

impl Sub for &HPReal {
    type Output = HPReal;
    fn sub(self, rhs: &HPReal) -> HPReal {
        let (digits, bits) = self.join(rhs);
        HPReal {
            bf: self.bf.sub(&rhs.bf, bits, RM),
            digits,
        }
    }
}

impl Mul for &HPReal {
    type Output = HPReal;
    fn mul(self, rhs: &HPReal) -> HPReal {
        let (digits, bits) = self.join(rhs);
        HPReal {
            bf: self.bf.mul(&rhs.bf, bits, RM),
            digits,
        }
    }
}

impl Div for &HPReal {
    type Output = HPReal;
    fn div(self, rhs: &HPReal) -> HPReal {
        let (digits, bits) = self.join(rhs);
        HPReal {
            bf: self.bf.div(&rhs.bf, bits, RM),
            digits,
        }
    }
}

impl Neg for &HPReal {
    type Output = HPReal;
    fn neg(self) -> HPReal {
        HPReal {
            bf: BigFloat::neg(&self.bf),
            digits: self.digits,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    #[test]
    fn arithmetic_basics() {
        let a = HPReal::from_u64(7, 50);
        let b = HPReal::from_u64(3, 50);
        let q = &a / &b;
        let back = &q * &b;
        let err = (&back - &a).abs();
        assert!(err.to_f64() < 1e-45);
    }

    #[test]
    fn precision_join_takes_max() {
        let a = HPReal::from_u64(1, 30);
        let b = HPReal::from_u64(1, 80);
        assert_eq!((&a + &b).digits(), 80);
    }

    #[test]
    fn rational_round_trip() {
        let r = ratio(-61, 192);
        let x = HPReal::from_rational(&r, 60);
        assert!((x.to_f64() - (-61.0 / 192.0)).abs() < 1e-15);
    }

    #[test]
    fn biguint_exp2_round_trip() {
        let x = HPReal::from_f64(123.4375, 40);
        let (m, e, neg) = x.to_biguint_exp2().unwrap();
        let y = HPReal::from_biguint_exp2(&m, e, 40);
        assert!(!neg);
        assert_eq!(x, y);

        let big = BigUint::from(3u32).pow(300);
        let z = HPReal::from_biguint_exp2(&big, -100, 200);
        let lg = z.ln().to_f64();
        let expect = 300.0 * 3f64.ln() - 100.0 * 2f64.ln();
        assert!((lg - expect).abs() < 1e-9);
    }

    #[test]
    fn pi_and_transcendentals() {
        let pi = HPReal::pi(60);
        assert!((pi.to_f64() - std::f64::consts::PI).abs() < 1e-15);
        let s = pi.sin();
        assert!(s.abs().to_f64() < 1e-55);
        let e1 = HPReal::one(60).exp();
        assert!((e1.ln().to_f64() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn decimal_rendering() {
        let x = HPReal::from_rational(&ratio(1, 3), 50);
        let s = x.to_decimal_string(10);
        assert_eq!(s, "3.333333333e-1");
        let y = HPReal::from_f64(-250.0, 50);
        assert_eq!(y.to_decimal_string(3), "-2.50e2");
        // rounding carries across a digit boundary
        let z = HPReal::from_f64(0.9999, 50);
        assert_eq!(z.to_decimal_string(3), "1.00e0");
    }

    #[test]
    fn powi_matches_pow() {
        let x = HPReal::from_f64(1.5, 50);
        let a = x.powi(7);
        let b = x.pow(&HPReal::from_u64(7, 50));
        assert!((&a - &b).abs().to_f64() < 1e-40);
    }

    #[test]
    fn exponent_estimates() {
        let x = HPReal::from_u64(1024, 30);
        assert_eq!(x.exponent2(), Some(11));
        assert!((x.log10_abs_approx() - 3.31).abs() < 0.3);
        assert_eq!(HPReal::zero(30).log10_abs_approx(), f64::NEG_INFINITY);
    }
}

//! Truncated formal power series, generic over exact rationals and
//! high-precision reals.

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::hp::HPReal;

/// Coefficient field for the series engine. The `*_like` constructors carry
/// the precision context of `self` (a no-op for rationals).
pub trait Coeff: Clone {
    fn c_add(&self, o: &Self) -> Self;
    fn c_sub(&self, o: &Self) -> Self;
    fn c_mul(&self, o: &Self) -> Self;
    fn c_div(&self, o: &Self) -> Self;
    fn c_neg(&self) -> Self;
    fn c_is_zero(&self) -> bool;
    fn c_from_ratio(&self, r: &BigRational) -> Self;
    fn c_from_i64(&self, v: i64) -> Self {
        self.c_from_ratio(&BigRational::from_integer(v.into()))
    }
}

impl Coeff for BigRational {
    fn c_add(&self, o: &Self) -> Self {
        self + o
    }
    fn c_sub(&self, o: &Self) -> Self {
        self - o
    }
    fn c_mul(&self, o: &Self) -> Self {
        self * o
    }
    fn c_div(&self, o: &Self) -> Self {
        self / o
    }
    fn c_neg(&self) -> Self {
        -self
    }
    fn c_is_zero(&self) -> bool {
        self.is_zero()
    }
    fn c_from_ratio(&self, r: &BigRational) -> Self {
        r.clone()
    }
}

impl Coeff for HPReal {
    fn c_add(&self, o: &Self) -> Self {
        self + o
    }
    fn c_sub(&self, o: &Self) -> Self {
        self - o
    }
    fn c_mul(&self, o: &Self) -> Self {
        self * o
    }
    fn c_div(&self, o: &Self) -> Self {
        self / o
    }
    fn c_neg(&self) -> Self {
        -self
    }
    fn c_is_zero(&self) -> bool {
        self.is_zero()
    }
    fn c_from_ratio(&self, r: &BigRational) -> Self {
        HPReal::from_rational(r, self.digits())
    }
}

/// A power series truncated at a fixed order M (coefficients of x^0..x^{M−1}).
/// All arithmetic preserves the order.
#[derive(Clone, Debug)]
pub struct Series<K: Coeff> {
    pub coeffs: Vec<K>,
}

impl<K: Coeff> Series<K> {
    pub fn from_coeffs(coeffs: Vec<K>) -> Self {
        assert!(!coeffs.is_empty());
        Series { coeffs }
    }

    pub fn one(proto: &K, m: usize) -> Self {
        let mut coeffs = vec![proto.c_from_i64(0); m.max(1)];
        coeffs[0] = proto.c_from_i64(1);
        Series { coeffs }
    }

    pub fn zero(proto: &K, m: usize) -> Self {
        Series {
            coeffs: vec![proto.c_from_i64(0); m.max(1)],
        }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn proto(&self) -> &K {
        &self.coeffs[0]
    }

    pub fn get(&self, j: usize) -> K {
        if j < self.coeffs.len() {
            self.coeffs[j].clone()
        } else {
            self.coeffs[0].c_from_i64(0)
        }
    }

    pub fn truncate(&self, m: usize) -> Self {
        let mut c = self.coeffs.clone();
        c.truncate(m.max(1));
        while c.len() < m {
            c.push(self.coeffs[0].c_from_i64(0));
        }
        Series { coeffs: c }
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(self.order(), o.order());
        Series {
            coeffs: self
                .coeffs
                .iter()
                .zip(&o.coeffs)
                .map(|(a, b)| a.c_add(b))
                .collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert_eq!(self.order(), o.order());
        Series {
            coeffs: self
                .coeffs
                .iter()
                .zip(&o.coeffs)
                .map(|(a, b)| a.c_sub(b))
                .collect(),
        }
    }

    pub fn scale(&self, k: &K) -> Self {
        Series {
            coeffs: self.coeffs.iter().map(|a| a.c_mul(k)).collect(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let m = self.order().min(o.order());
        let zero = self.coeffs[0].c_from_i64(0);
        let mut out = vec![zero; m];
        for i in 0..m {
            if self.coeffs[i].c_is_zero() {
                continue;
            }
            for j in 0..m - i {
                if o.coeffs[j].c_is_zero() {
                    continue;
                }
                out[i + j] = out[i + j].c_add(&self.coeffs[i].c_mul(&o.coeffs[j]));
            }
        }
        Series { coeffs: out }
    }

    /// Multiplies by x (shift up), dropping the highest coefficient.
    pub fn shift_up(&self) -> Self {
        let mut c = Vec::with_capacity(self.order());
        c.push(self.coeffs[0].c_from_i64(0));
        c.extend(self.coeffs[..self.order() - 1].iter().cloned());
        Series { coeffs: c }
    }

    /// 1 / self for a series with nonzero constant term.
    pub fn recip(&self) -> Self {
        let a0 = &self.coeffs[0];
        assert!(!a0.c_is_zero());
        let b0 = a0.c_from_i64(1).c_div(a0);
        let m = self.order();
        let mut b = Vec::with_capacity(m);
        b.push(b0.clone());
        for n in 1..m {
            let mut acc = b0.c_from_i64(0);
            for k in 1..=n {
                acc = acc.c_add(&self.coeffs[k].c_mul(&b[n - k]));
            }
            b.push(acc.c_mul(&b0).c_neg());
        }
        Series { coeffs: b }
    }

    /// Divides by the linear factor (1 + c·x) in O(M).
    pub fn div_linear(&self, c: &K) -> Self {
        let m = self.order();
        let mut q: Vec<K> = Vec::with_capacity(m);
        for n in 0..m {
            let v = if n == 0 {
                self.coeffs[0].clone()
            } else {
                self.coeffs[n].c_sub(&c.c_mul(&q[n - 1]))
            };
            q.push(v);
        }
        Series { coeffs: q }
    }

    /// exp of a series with zero constant term.
    pub fn exp(&self) -> Self {
        assert!(self.coeffs[0].c_is_zero(), "exp needs zero constant term");
        let m = self.order();
        let mut f: Vec<K> = Vec::with_capacity(m);
        f.push(self.coeffs[0].c_from_i64(1));
        for n in 1..m {
            // f_n = (1/n) Σ_{k=1..n} k·p_k·f_{n−k}
            let mut acc = self.coeffs[0].c_from_i64(0);
            for k in 1..=n {
                let kp = self.coeffs[k].c_mul(&self.coeffs[0].c_from_i64(k as i64));
                acc = acc.c_add(&kp.c_mul(&f[n - k]));
            }
            f.push(acc.c_div(&self.coeffs[0].c_from_i64(n as i64)));
        }
        Series { coeffs: f }
    }

    /// Substitutes x → λ·x: coefficient j picks up λ^j.
    pub fn rescale_var(&self, lambda: &K) -> Self {
        let mut pow = self.coeffs[0].c_from_i64(1);
        let mut out = Vec::with_capacity(self.order());
        for (j, c) in self.coeffs.iter().enumerate() {
            if j > 0 {
                pow = pow.c_mul(lambda);
            }
            out.push(c.c_mul(&pow));
        }
        Series { coeffs: out }
    }
}

/// Exact-rational series, the main specialisation.
pub type RationalSeries = Series<BigRational>;

impl RationalSeries {
    pub fn one_rat(m: usize) -> Self {
        Series::one(&BigRational::one(), m)
    }
}

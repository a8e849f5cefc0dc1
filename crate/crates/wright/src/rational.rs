//! Exact rational helpers: parsing, binomials and Bernoulli numbers.

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::str::FromStr;
use std::sync::Mutex;

/// Parses `p/q`, an integer, or a plain decimal such as `0.25` into an exact
/// rational.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        let n = BigInt::from_str(num.trim()).ok()?;
        let d = BigInt::from_str(den.trim()).ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(BigRational::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let neg = int.trim_start().starts_with('-');
        let int_part = if int.is_empty() || int == "-" {
            BigInt::zero()
        } else {
            BigInt::from_str(int).ok()?
        };
        if frac.is_empty() {
            return Some(BigRational::from(int_part));
        }
        let frac_digits = frac.len() as u32;
        let frac_part = BigInt::from_str(frac).ok()?;
        if frac_part.is_negative() {
            return None;
        }
        let den = BigInt::from(10u32).pow(frac_digits);
        let mag = int_part.abs() * &den + frac_part;
        let signed = if neg { -mag } else { mag };
        return Some(BigRational::new(signed, den));
    }
    BigInt::from_str(s).ok().map(BigRational::from)
}

pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Binomial coefficient C(n, k) as a big integer.
pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k {
        num *= BigInt::from(n - i);
        den *= BigInt::from(i + 1);
    }
    num / den
}

/// Rising factorial (x)_n over the rationals.
pub fn pochhammer(x: &BigRational, n: usize) -> BigRational {
    let mut acc = BigRational::one();
    let mut term = x.clone();
    for _ in 0..n {
        acc *= &term;
        term += BigRational::one();
    }
    acc
}

struct BernoulliCache {
    /// tangent[i] = T_{i+1}, the tangent numbers.
    tangent: Vec<BigUint>,
}

static BERNOULLI: Mutex<BernoulliCache> = Mutex::new(BernoulliCache {
    tangent: Vec::new(),
});

/// Extends the tangent-number triangle (Brent–Harvey style, integer-only)
/// so that T_1..T_n are available.
fn extend_tangent(cache: &mut BernoulliCache, n: usize) {
    if cache.tangent.len() >= n {
        return;
    }
    // Recompute from scratch with headroom; the triangle is quadratic so
    // incremental extension buys little.
    let n = n.max(cache.tangent.len() * 2).max(16);
    let mut t: Vec<BigUint> = Vec::with_capacity(n);
    t.push(BigUint::one());
    for k in 1..n {
        let prev = t[k - 1].clone();
        t.push(prev * BigUint::from(k));
    }
    for k in 1..n {
        for j in k..n {
            let a = t[j - 1].clone() * BigUint::from(j - k);
            let b = t[j].clone() * BigUint::from(j - k + 2);
            t[j] = a + b;
        }
    }
    cache.tangent = t;
}

/// Bernoulli number B_m as an exact rational (B_1 = −1/2 convention).
pub fn bernoulli(m: usize) -> BigRational {
    if m == 0 {
        return BigRational::one();
    }
    if m == 1 {
        return ratio(-1, 2);
    }
    if m % 2 == 1 {
        return BigRational::zero();
    }
    let n = m / 2;
    let tn = {
        let mut cache = BERNOULLI.lock().unwrap();
        extend_tangent(&mut cache, n);
        cache.tangent[n - 1].clone()
    };
    // B_{2n} = (−1)^{n−1} T_n · 2n / (2^{2n}(2^{2n}−1))
    let two_2n = BigInt::one() << (2 * n);
    let den = &two_2n * (&two_2n - BigInt::one());
    let num = BigInt::from_biguint(Sign::Plus, tn) * BigInt::from(2 * n);
    let b = BigRational::new(num, den);
    if n % 2 == 1 {
        b
    } else {
        -b
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bernoulli_small_values() {
        assert_eq!(bernoulli(0), ratio(1, 1));
        assert_eq!(bernoulli(1), ratio(-1, 2));
        assert_eq!(bernoulli(2), ratio(1, 6));
        assert_eq!(bernoulli(3), ratio(0, 1));
        assert_eq!(bernoulli(4), ratio(-1, 30));
        assert_eq!(bernoulli(6), ratio(1, 42));
        assert_eq!(bernoulli(8), ratio(-1, 30));
        assert_eq!(bernoulli(10), ratio(5, 66));
        assert_eq!(bernoulli(12), ratio(-691, 2730));
    }

    #[test]
    fn bernoulli_extension_is_consistent() {
        let b20 = bernoulli(20);
        // force a larger triangle, then re-read
        let _ = bernoulli(200);
        assert_eq!(bernoulli(20), b20);
        assert_eq!(b20, ratio(-174611, 330));
    }

    #[test]
    fn parse_rational_forms() {
        assert_eq!(parse_rational("61/192"), Some(ratio(61, 192)));
        assert_eq!(parse_rational("-3/4"), Some(ratio(-3, 4)));
        assert_eq!(parse_rational("0.25"), Some(ratio(1, 4)));
        assert_eq!(parse_rational("-0.5"), Some(ratio(-1, 2)));
        assert_eq!(parse_rational("7"), Some(ratio(7, 1)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("abc"), None);
    }

    #[test]
    fn binomial_and_pochhammer() {
        assert_eq!(binomial(10, 3), BigInt::from(120));
        assert_eq!(binomial(5, 0), BigInt::from(1));
        assert_eq!(binomial(3, 5), BigInt::from(0));
        assert_eq!(pochhammer(&ratio(1, 2), 3), ratio(15, 8));
    }
}

//! The gamma function on the real line, at arbitrary precision.
//!
//! Two routes. Moderate precision (≤ 600 digits) uses the Stirling
//! asymptotic series after shifting the argument upward until the series
//! attains the target. Higher precision requires Bernoulli numbers of
//! impractical index, so rational arguments switch to the lower
//! incomplete-gamma series Γ(t) ≈ R^t e^{−R} Σ_n R^n/(t)_{n+1} with
//! R ≈ 1.05·digits·ln(10), summed exactly by binary splitting; its terms are
//! all positive, so no cancellation headroom is needed.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};

use super::real::HPReal;
use crate::error::{Result, WrightError};
use crate::rational::pochhammer;

/// Largest precision served by the Stirling route.
const STIRLING_MAX_DIGITS: usize = 600;

fn is_nonpositive_integer_hp(x: &HPReal) -> bool {
    (x.is_negative() || x.is_zero()) && *x == x.floor()
}

fn is_nonpositive_integer_rat(x: &BigRational) -> bool {
    !x.is_positive() && x.is_integer()
}

/// ln Γ(w) for w ≥ 0.4·(digits+10), by the Stirling series.
fn ln_gamma_stirling_core(w: &HPReal) -> HPReal {
    let digits = w.digits();
    let half = HPReal::from_rational(&crate::rational::ratio(1, 2), digits);
    let pi = HPReal::pi(digits);
    let two_pi = &pi + &pi;
    // (w − 1/2) ln w − w + ln(2π)/2
    let lnw = w.ln();
    let mut acc = &(&(w - &half) * &lnw) - w;
    acc = &acc + &(&two_pi.ln() * &half);

    let winv = w.recip();
    let winv2 = &winv * &winv;
    let mut pw = winv;
    let floor_log10 = -((digits as f64) + 12.0);
    for m in 1..=(4 * digits as u64 + 64) {
        let b = crate::rational::bernoulli(2 * m as usize);
        let denom = HPReal::from_u64(2 * m * (2 * m - 1), digits);
        let coeff = &HPReal::from_rational(&b, digits) / &denom;
        let term = &coeff * &pw;
        acc = &acc + &term;
        if term.log10_abs_approx() < floor_log10 {
            return acc;
        }
        pw = &pw * &winv2;
    }
    acc
}

/// Γ(x) for x ≥ 0.5 via argument shift plus the Stirling series.
fn gamma_stirling(x: &HPReal) -> HPReal {
    let digits = x.digits();
    let target = HPReal::from_f64(0.4 * (digits as f64 + 10.0), digits);
    let shift = if x < &target {
        (&target - x).floor().to_f64() as u64 + 1
    } else {
        0
    };
    let mut w = x.clone();
    let mut prod = HPReal::one(digits);
    for _ in 0..shift {
        prod = &prod * &w;
        w = &w + &HPReal::one(digits);
    }
    let g = ln_gamma_stirling_core(&w).exp();
    &g / &prod
}

/// Γ(x) to `digits` via Stirling, with reflection for x < 1/2.
pub fn hp_gamma(x: &HPReal) -> Result<HPReal> {
    if is_nonpositive_integer_hp(x) {
        return Err(WrightError::Pole(format!("{:?}", x)));
    }
    let digits = x.digits();
    let half = HPReal::from_rational(&crate::rational::ratio(1, 2), digits);
    if x < &half {
        // Γ(x) = π / (sin(πx) Γ(1−x))
        let pi = HPReal::pi(digits);
        let s = (&pi * x).sin();
        let g = gamma_stirling(&(&HPReal::one(digits) - x));
        Ok(&pi / &(&s * &g))
    } else {
        Ok(gamma_stirling(x))
    }
}

/// 1/Γ(x), total: exactly 0 at the poles.
pub fn hp_recip_gamma(x: &HPReal) -> HPReal {
    if is_nonpositive_integer_hp(x) {
        return HPReal::zero(x.digits());
    }
    hp_gamma(x).expect("pole excluded above").recip()
}

/// Binary splitting for S = Σ_{n=0}^{N−1} Π_{k=0}^{n} b_k/c_k over [lo, hi).
/// Returns (B, C, T) with B = Π b, C = Π c and Σ over the range = T/C.
fn binsplit(lo: u64, hi: u64, b_at: &impl Fn(u64) -> BigInt, c_at: &impl Fn(u64) -> BigInt) -> (BigInt, BigInt, BigInt) {
    if hi - lo == 1 {
        let b = b_at(lo);
        let c = c_at(lo);
        (b.clone(), c, b)
    } else {
        let mid = lo + (hi - lo) / 2;
        let (b1, c1, t1) = binsplit(lo, mid, b_at, c_at);
        let (b2, c2, t2) = binsplit(mid, hi, b_at, c_at);
        let t = &t1 * &c2 + &b1 * &t2;
        (b1 * b2, c1 * c2, t)
    }
}

/// Γ(t) for rational t ∈ [1, 2) at high precision via the lower
/// incomplete-gamma series with integer cutoff R.
fn gamma_binsplit_core(t: &BigRational, digits: usize) -> HPReal {
    let p = t.numer().clone();
    let q = t.denom().clone();
    let d = digits as f64;
    let r_cut = (1.05 * (d + 15.0) * std::f64::consts::LN_10).ceil() as u64;

    // Pick N by scanning term magnitudes in log10.
    let lg_rq = ((r_cut as f64) * q.to_f64().unwrap()).log10();
    let pf = p.to_f64().unwrap();
    let qf = q.to_f64().unwrap();
    let mut la = 0f64;
    let mut max_la = 0f64;
    let mut n_terms = 1u64;
    for n in 1..100_000_000u64 {
        la += lg_rq - (pf + n as f64 * qf).log10();
        max_la = max_la.max(la);
        if la < max_la - (d + 25.0) && (pf + n as f64 * qf) > 2.0 * (r_cut as f64) * qf {
            n_terms = n + 1;
            break;
        }
    }

    // a_n = R^n q^{n+1} / Π_{i≤n}(p+iq):  b_0 = q, b_n = Rq, c_n = p+nq.
    let rq = BigInt::from(r_cut) * &q;
    let b_at = |n: u64| if n == 0 { q.clone() } else { rq.clone() };
    let c_at = |n: u64| &p + BigInt::from(n) * &q;
    let (_b, c, tsum) = binsplit(0, n_terms, &b_at, &c_at);

    let s = &HPReal::from_bigint(&tsum, digits) / &HPReal::from_bigint(&c, digits);

    // Γ(t) ≈ R^t e^{−R} S
    let rr = HPReal::from_u64(r_cut, digits);
    let rt = rr.pow(&HPReal::from_rational(t, digits));
    let e = HPReal::one(digits).exp();
    let e_mr = e.powi(r_cut).recip();
    &(&rt * &e_mr) * &s
}

/// Γ(x) for exact rational x at any precision; dispatches between the
/// Stirling route and the binary-splitting route.
pub fn hp_gamma_rational(x: &BigRational, digits: usize) -> Result<HPReal> {
    if is_nonpositive_integer_rat(x) {
        return Err(WrightError::Pole(x.to_string()));
    }
    if digits <= STIRLING_MAX_DIGITS {
        return hp_gamma(&HPReal::from_rational(x, digits));
    }
    gamma_rational_binsplit(x, digits)
}

/// The binary-splitting route for any rational x (exposed for cross-checks).
pub(crate) fn gamma_rational_binsplit(x: &BigRational, digits: usize) -> Result<HPReal> {
    if is_nonpositive_integer_rat(x) {
        return Err(WrightError::Pole(x.to_string()));
    }
    let one = BigRational::one();
    let two = &one + &one;
    // reduce to t ∈ [1, 2): Γ(x) = Γ(t)·F with F an exact rational
    if *x >= one && *x < two {
        return Ok(gamma_binsplit_core(x, digits));
    }
    if *x >= two {
        let k = (x - &one).floor().to_integer().to_u64().unwrap();
        let t = x - BigRational::from(BigInt::from(k));
        let f = pochhammer(&t, k as usize);
        return Ok(&gamma_binsplit_core(&t, digits) * &HPReal::from_rational(&f, digits));
    }
    // x < 1: Γ(x) = Γ(x+k) / (x)_k
    let k = (&one - x).ceil().to_integer().to_u64().unwrap().max(1);
    let t = x + BigRational::from(BigInt::from(k));
    debug_assert!(t >= one && t < two);
    let f = pochhammer(x, k as usize);
    Ok(&gamma_binsplit_core(&t, digits) / &HPReal::from_rational(&f, digits))
}

/// 1/Γ(x) for exact rational x; 0 at the poles.
pub fn hp_recip_gamma_rational(x: &BigRational, digits: usize) -> HPReal {
    if is_nonpositive_integer_rat(x) {
        return HPReal::zero(digits);
    }
    hp_gamma_rational(x, digits)
        .expect("pole excluded above")
        .recip()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn rel_err(a: &HPReal, b: &HPReal) -> f64 {
        if b.is_zero() {
            return a.abs().to_f64();
        }
        (&(a - b) / b).abs().to_f64()
    }

    #[test]
    fn gamma_small_integers() {
        let digits = 50;
        for (n, want) in [(1u64, 1u64), (2, 1), (3, 2), (4, 6), (5, 24), (8, 5040)] {
            let g = hp_gamma(&HPReal::from_u64(n, digits)).unwrap();
            let w = HPReal::from_u64(want, digits);
            assert!(rel_err(&g, &w) < 1e-45, "gamma({n})");
        }
    }

    #[test]
    fn gamma_half_is_sqrt_pi() {
        for digits in [50, 200] {
            let g = hp_gamma(&HPReal::from_rational(&ratio(1, 2), digits)).unwrap();
            let sp = HPReal::pi(digits).sqrt();
            assert!(rel_err(&g, &sp) < 10f64.powi(5 - digits as i32));
        }
    }

    #[test]
    fn gamma_negative_three_halves() {
        // reflection result against 4√π/3, and against the product-form
        // brute force Γ(x) = Γ(x+n)/((x)(x+1)…(x+n−1))
        let digits = 60;
        let x = HPReal::from_rational(&ratio(-3, 2), digits);
        let g = hp_gamma(&x).unwrap();
        let want = &(&HPReal::pi(digits).sqrt() * &HPReal::from_u64(4, digits))
            / &HPReal::from_u64(3, digits);
        assert!(rel_err(&g, &want) < 1e-55);

        let shifted = hp_gamma(&HPReal::from_rational(&ratio(5, 2), digits)).unwrap();
        let denom = HPReal::from_rational(&pochhammer(&ratio(-3, 2), 4), digits);
        let brute = &shifted / &denom;
        assert!(rel_err(&g, &brute) < 1e-55);
    }

    #[test]
    fn gamma_pole_errors() {
        for v in [0i64, -1, -4, -20] {
            let x = HPReal::from_i64(v, 40);
            assert!(matches!(hp_gamma(&x), Err(WrightError::Pole(_))));
            assert!(hp_recip_gamma(&x).is_zero());
        }
        assert!(matches!(
            hp_gamma_rational(&ratio(-7, 1), 40),
            Err(WrightError::Pole(_))
        ));
        assert!(hp_recip_gamma_rational(&ratio(0, 1), 40).is_zero());
    }

    #[test]
    fn recip_gamma_values() {
        let digits = 50;
        let r3 = hp_recip_gamma(&HPReal::from_u64(3, digits));
        assert!(rel_err(&r3, &HPReal::from_rational(&ratio(1, 2), digits)) < 1e-45);
    }

    #[test]
    fn functional_equation_grid() {
        let digits = 50;
        for i in 1..=25 {
            let x = HPReal::from_rational(&ratio(2 * i as i64 - 1, 2), digits)
                .with_digits(digits);
            let lhs = hp_gamma(&(&x + &HPReal::one(digits))).unwrap();
            let rhs = &x * &hp_gamma(&x).unwrap();
            assert!(rel_err(&lhs, &rhs) < 10f64.powi(2 - digits as i32));
        }
    }

    #[test]
    fn recip_times_gamma_is_one() {
        let digits = 45;
        for num in [1i64, 3, 7, 13, -5] {
            let x = ratio(num, 4);
            let g = hp_gamma_rational(&x, digits).unwrap();
            let r = hp_recip_gamma_rational(&x, digits);
            let one = HPReal::one(digits);
            assert!(rel_err(&(&g * &r), &one) < 1e-40);
        }
    }

    #[test]
    fn binsplit_route_matches_stirling() {
        let digits = 300;
        for x in [ratio(2, 3), ratio(5, 4), ratio(13, 3), ratio(-3, 2), ratio(1, 7)] {
            let a = gamma_rational_binsplit(&x, digits).unwrap();
            let b = hp_gamma(&HPReal::from_rational(&x, digits)).unwrap();
            assert!(
                rel_err(&a, &b) < 10f64.powi(10 - digits as i32),
                "mismatch at {x}"
            );
        }
    }

    #[test]
    fn high_precision_dispatch() {
        // above the Stirling cutoff the binsplit route takes over; check a
        // 700-digit value against the functional equation
        let digits = 700;
        let x = ratio(1, 3);
        let g = hp_gamma_rational(&x, digits).unwrap();
        let g1 = hp_gamma_rational(&ratio(4, 3), digits).unwrap();
        let rhs = &HPReal::from_rational(&x, digits) * &g;
        let err = &(&g1 - &rhs) / &rhs;
        assert!(err.log10_abs_approx() < -(digits as f64 - 10.0));
    }

    #[test]
    fn precision_escalation_is_stable() {
        let x60 = hp_gamma(&HPReal::from_rational(&ratio(7, 3), 60)).unwrap();
        let x70 = hp_gamma(&HPReal::from_rational(&ratio(7, 3), 70)).unwrap();
        assert!(rel_err(&x60, &x70.with_digits(60)) < 1e-55);
    }
}

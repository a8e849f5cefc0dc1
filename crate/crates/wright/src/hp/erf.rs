//! The error function at arbitrary precision.

use super::real::HPReal;

/// erf(x) to the working precision of `x`.
///
/// Maclaurin series for moderate |x| (with headroom for the alternating
/// terms, which peak near e^{x²}); for large |x| the erfc asymptotic series
/// already resolves the value, so 1 − erfc is used instead.
pub fn hp_erf(x: &HPReal) -> HPReal {
    let digits = x.digits();
    if x.is_zero() {
        return HPReal::zero(digits);
    }
    if x.is_negative() {
        return -&hp_erf(&x.abs());
    }
    let xf = x.to_f64();
    // erfc(x) ~ e^{−x²}/(x√π) becomes computable once x² dominates the
    // target: the asymptotic terms (2k−1)!!/(2x²)^k bottom out near e^{−x²}.
    let cutoff = (1.15 * (digits as f64 + 10.0)).sqrt();
    if xf > cutoff {
        let one = HPReal::one(digits);
        return &one - &erfc_asymptotic(x);
    }
    erf_maclaurin(x)
}

/// erf(x) = (2/√π) Σ (−1)^n x^{2n+1} / (n! (2n+1)), summed with extra
/// working digits to absorb the cancellation.
fn erf_maclaurin(x: &HPReal) -> HPReal {
    let digits = x.digits();
    let xf = x.to_f64();
    let headroom = (0.8686 * xf * xf).ceil() as usize + 10;
    let wd = digits + headroom;
    let xw = x.with_digits(wd);
    let x2 = &xw * &xw;
    let mut term = xw.clone(); // x^{2n+1}/n!
    let mut acc = &term / &HPReal::one(wd);
    let floor_log10 = -((digits as f64) + 10.0);
    for n in 1..(10_000u64) {
        term = &(&term * &x2) / &HPReal::from_u64(n, wd);
        let contrib = &term / &HPReal::from_u64(2 * n + 1, wd);
        acc = if n % 2 == 1 { &acc - &contrib } else { &acc + &contrib };
        if contrib.log10_abs_approx() < floor_log10 {
            break;
        }
    }
    let pref = &HPReal::from_u64(2, wd) / &HPReal::pi(wd).sqrt();
    (&pref * &acc).with_digits(digits)
}

/// erfc(x) ~ e^{−x²}/(x√π) Σ (−1)^k (2k−1)!!/(2x²)^k for large x > 0.
fn erfc_asymptotic(x: &HPReal) -> HPReal {
    let digits = x.digits();
    let x2 = x * x;
    let inv2x2 = &HPReal::one(digits) / &(&x2 + &x2);
    let mut term = HPReal::one(digits);
    let mut acc = term.clone();
    let mut prev_mag = f64::INFINITY;
    for k in 1..(4 * digits as u64) {
        term = &(&term * &HPReal::from_u64(2 * k - 1, digits)) * &inv2x2;
        let mag = term.log10_abs_approx();
        if mag >= prev_mag || mag < -((digits as f64) + 10.0) {
            break;
        }
        prev_mag = mag;
        acc = if k % 2 == 1 { &acc - &term } else { &acc + &term };
    }
    let pref = &(-&x2).exp() / &(x * &HPReal::pi(digits).sqrt());
    &pref * &acc
}

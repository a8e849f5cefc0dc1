//! Direct summation of the defining series Σ g(n) z^n / n!.
//!
//! This is the ground-truth oracle for everything else in the crate. For
//! exact rational parameters a stride recurrence collapses the gamma
//! quotients into small rational factors (see `chain`); otherwise every term
//! is built from fresh gamma evaluations.

mod chain;

use crate::error::{Result, WrightError};
use crate::hp::{hp_gamma, hp_recip_gamma, HPComplex, HPReal, RayPoint};
use crate::params::{derive_constants, ParamValue, WrightParams};

pub const MAX_TERMS: usize = 1_000_000;

/// What a series evaluation produced, with enough metadata to audit it.
#[derive(Clone, Debug)]
pub struct EvalReport {
    pub value: HPComplex,
    pub terms_used: usize,
    pub peak_term_magnitude: HPReal,
    /// Working precision in decimal digits actually used.
    pub working_precision: usize,
    pub est_truncation_error: HPReal,
}

/// g(n) = ΠΓ(α_r n + a_r) / ΠΓ(β_r n + b_r); 0 when a lower gamma sits at a
/// pole.
pub fn eval_g(params: &WrightParams, n: u64, digits: usize) -> Result<HPReal> {
    let nr = crate::rational::ratio(n as i64, 1);
    let nh = HPReal::from_u64(n, digits);
    let mut acc = HPReal::one(digits);
    for (alpha, a) in &params.upper {
        let g = match (alpha.as_rational(), a.as_rational()) {
            (Some(al), Some(av)) => crate::hp::gamma::hp_gamma_rational(&(al * &nr + av), digits)?,
            _ => hp_gamma(&(&(&alpha.to_hp(digits) * &nh) + &a.to_hp(digits)))?,
        };
        acc = &acc * &g;
    }
    for (beta, b) in &params.lower {
        let rg = match (beta.as_rational(), b.as_rational()) {
            (Some(be), Some(bv)) => {
                crate::hp::gamma::hp_recip_gamma_rational(&(be * &nr + bv), digits)
            }
            _ => hp_recip_gamma(&(&(&beta.to_hp(digits) * &nh) + &b.to_hp(digits))),
        };
        if rg.is_zero() {
            return Ok(HPReal::zero(digits));
        }
        acc = &acc * &rg;
    }
    Ok(acc)
}

/// Working precision in digits: cancellation headroom 0.4343·κ·|hr|^{1/κ}
/// plus the target and a guard.
pub(crate) fn working_digits(kappa: f64, h: f64, r: f64, target_digits: usize) -> usize {
    let head = 0.4343 * kappa * (h * r).powf(1.0 / kappa);
    let w = head.ceil() as usize + target_digits + 20;
    w.max(50)
}

/// log2 of a complex magnitude, estimated from the component exponents.
pub(crate) fn cplx_exp2(t: &HPComplex) -> f64 {
    let a = t.re.exponent2().map(|e| e as f64).unwrap_or(f64::NEG_INFINITY);
    let b = t.im.exponent2().map(|e| e as f64).unwrap_or(f64::NEG_INFINITY);
    a.max(b) + 1.0
}

const LOG2_10F: f64 = 3.321928094887362;

/// The stopping rule: 30 consecutive terms below 10^{−target−10} of the
/// running max partial-sum magnitude, plus a tail bound against the current
/// sum so the reported truncation error honours the target.
pub(crate) struct StopTracker {
    target: usize,
    consec: u32,
    max_s_exp2: f64,
    pub peak_term_exp2: f64,
}

impl StopTracker {
    pub fn new(target: usize) -> Self {
        StopTracker {
            target,
            consec: 0,
            max_s_exp2: f64::NEG_INFINITY,
            peak_term_exp2: f64::NEG_INFINITY,
        }
    }

    /// Feed one term; returns true once it is safe to stop.
    pub fn observe(&mut self, term_exp2: f64, s_exp2: f64) -> bool {
        self.max_s_exp2 = self.max_s_exp2.max(s_exp2);
        self.peak_term_exp2 = self.peak_term_exp2.max(term_exp2);
        let thresh = self.max_s_exp2 - (self.target as f64 + 10.0) * LOG2_10F;
        if term_exp2 < thresh {
            self.consec += 1;
        } else {
            self.consec = 0;
        }
        if self.consec < 30 {
            return false;
        }
        // tail ≈ 2·|t|; require it below 10^{−target−1}·|S| with margin
        term_exp2 + 4.0 < s_exp2 - (self.target as f64 + 1.0) * LOG2_10F
    }
}

/// Evaluates pΨq at z = r·e^{iθ} to `target_digits` significant digits.
pub fn wright_eval(params: &WrightParams, z: &RayPoint, target_digits: usize) -> Result<EvalReport> {
    params.validate()?;
    let target_digits = target_digits.max(10);
    let dc = derive_constants(params, 50)?;
    if dc.kappa_zero {
        return Err(WrightError::KappaNonPositive { kappa: 0.0 });
    }
    let w = working_digits(
        dc.kappa.to_f64(),
        dc.h.to_f64(),
        z.r.to_f64(),
        target_digits,
    );
    if params.all_exact() {
        if let Some(report) = chain::eval_fast(params, z, target_digits, w)? {
            return Ok(report);
        }
    }
    eval_slow(params, z, target_digits, w)
}

/// Per-term-gamma path; handles irrational parameters.
fn eval_slow(
    params: &WrightParams,
    z: &RayPoint,
    target: usize,
    w: usize,
) -> Result<EvalReport> {
    let r = z.r.with_digits(w);
    let theta = z.theta.with_digits(w);
    let eith = HPComplex::new(theta.cos(), theta.sin());

    let mut s = HPComplex::zero(w);
    let mut mag = HPReal::one(w); // r^n / n!
    let mut phase = HPComplex::from_real(HPReal::one(w));
    let mut stop = StopTracker::new(target);
    let mut peak = HPComplex::zero(w);
    let mut peak_exp2 = f64::NEG_INFINITY;
    let mut last = HPComplex::zero(w);
    let mut terms = 0usize;

    for n in 0..MAX_TERMS as u64 {
        let g = eval_g(params, n, w)?;
        let term = phase.scale(&(&g * &mag));
        s = &s + &term;
        terms += 1;
        let te = cplx_exp2(&term);
        if te > peak_exp2 {
            peak_exp2 = te;
            peak = term.clone();
        }
        last = term;
        if stop.observe(te, cplx_exp2(&s)) {
            break;
        }
        mag = &(&mag * &r) / &HPReal::from_u64(n + 1, w);
        phase = &phase * &eith;
    }
    if terms >= MAX_TERMS {
        return Err(WrightError::NoConvergence(MAX_TERMS));
    }
    let est = last.abs().with_digits(50);
    Ok(EvalReport {
        value: s,
        terms_used: terms,
        peak_term_magnitude: peak.abs().with_digits(50),
        working_precision: w,
        est_truncation_error: &est * &HPReal::from_u64(4, 50),
    })
}

/// Convenience: parameters and evaluation for the Mittag-Leffler function
/// E_{a,b}, modelled as 1Ψ1 with upper (1,1), lower (a,b).
pub fn mittag_leffler_params(a: ParamValue, b: ParamValue) -> Result<WrightParams> {
    WrightParams::new(vec![(ParamValue::exact(1, 1), ParamValue::exact(1, 1))], vec![(a, b)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hp::gamma::hp_gamma_rational;
    use crate::rational::ratio;

    fn pv(n: i64, d: i64) -> ParamValue {
        ParamValue::exact(n, d)
    }

    fn rel_err_c(a: &HPComplex, b: &HPComplex) -> f64 {
        (&(a - b).abs() / &b.abs()).to_f64()
    }

    #[test]
    fn eval_g_examples() {
        // p = q = 0: empty products give 1
        let p0 = WrightParams::new(vec![], vec![]).unwrap();
        for n in [0u64, 3, 17] {
            assert!((eval_g(&p0, n, 30).unwrap().to_f64() - 1.0).abs() < 1e-14);
        }
        // ML at n = 0: 1/Γ(b)
        let ml = mittag_leffler_params(pv(3, 4), pv(1, 2)).unwrap();
        let g0 = eval_g(&ml, 0, 40).unwrap();
        let want = hp_gamma_rational(&ratio(1, 2), 40).unwrap().recip();
        assert!((&g0 - &want).abs().to_f64() < 1e-30);
        // F1 a=1/4, b=3/4 at n = 2: Γ(5/4)/Γ(11/4)
        let f1 = WrightParams::new(vec![(pv(1, 2), pv(1, 4))], vec![(pv(1, 1), pv(3, 4))]).unwrap();
        let g2 = eval_g(&f1, 2, 40).unwrap();
        let want = &hp_gamma_rational(&ratio(5, 4), 40).unwrap()
            / &hp_gamma_rational(&ratio(11, 4), 40).unwrap();
        assert!((&(&g2 - &want) / &want).abs().to_f64() < 1e-35);
    }

    #[test]
    fn exp_series() {
        // 0Ψ0(z) = e^z
        let p0 = WrightParams::new(vec![], vec![]).unwrap();
        let rep = wright_eval(&p0, &RayPoint::from_f64(1.0, 0.0, 60), 40).unwrap();
        let e = HPReal::one(60).exp();
        assert!((&rep.value.re - &e).abs().to_f64() < 1e-38);
        assert!(rep.value.im.abs().to_f64() < 1e-38);

        // complex argument
        let z = RayPoint::from_f64(2.0, std::f64::consts::FRAC_PI_3, 60);
        let rep = wright_eval(&p0, &z, 40).unwrap();
        let want = z.to_complex().exp();
        assert!(rel_err_c(&rep.value, &want) < 1e-38);
    }

    #[test]
    fn ml_11_is_exp() {
        let ml = mittag_leffler_params(pv(1, 1), pv(1, 1)).unwrap();
        let rep = wright_eval(&ml, &RayPoint::from_f64(2.0, 0.0, 60), 40).unwrap();
        let e2 = HPReal::from_u64(2, 60).exp();
        assert!((&rep.value.re - &e2).abs().to_f64() < 1e-37);
    }

    #[test]
    fn shifted_exp_through_denominator_poles() {
        // upper (1,1), lower (1,−2): g(n) = n!/Γ(n−2), so the series is
        // Σ_{n≥3} z^n/(n−3)! = z³e^z; the first three terms vanish at the
        // gamma poles.
        let p = WrightParams::new(vec![(pv(1, 1), pv(1, 1))], vec![(pv(1, 1), pv(-2, 1))]).unwrap();
        let z = RayPoint::from_f64(1.5, 0.7, 60);
        let rep = wright_eval(&p, &z, 40).unwrap();
        let zc = z.to_complex();
        let want = &(&(&zc * &zc) * &zc) * &zc.exp();
        assert!(rel_err_c(&rep.value, &want) < 1e-37);
    }

    #[test]
    fn fast_and_slow_paths_agree() {
        let exact = WrightParams::new(vec![(pv(1, 2), pv(1, 4))], vec![(pv(1, 1), pv(3, 4))]).unwrap();
        let approx = WrightParams::new(
            vec![(
                ParamValue::Approx(HPReal::from_f64(0.5, 80)),
                ParamValue::Approx(HPReal::from_f64(0.25, 80)),
            )],
            vec![(
                ParamValue::Approx(HPReal::from_f64(1.0, 80)),
                ParamValue::Approx(HPReal::from_f64(0.75, 80)),
            )],
        )
        .unwrap();
        let z = RayPoint::from_f64(10.0, 2.0, 80);
        let a = wright_eval(&exact, &z, 35).unwrap();
        let b = wright_eval(&approx, &z, 35).unwrap();
        assert!(rel_err_c(&a.value, &b.value) < 1e-32);
    }

    #[test]
    fn conjugate_symmetry() {
        let f1 = WrightParams::new(vec![(pv(1, 2), pv(1, 4))], vec![(pv(1, 1), pv(3, 4))]).unwrap();
        for (r, th) in [(5.0, 1.0), (20.0, 2.5), (3.0, std::f64::consts::PI)] {
            let up = wright_eval(&f1, &RayPoint::from_f64(r, th, 60), 30).unwrap();
            let dn = wright_eval(&f1, &RayPoint::from_f64(r, -th, 60), 30).unwrap();
            assert!(rel_err_c(&up.value, &dn.value.conj()) < 1e-27);
        }
    }

    #[test]
    fn precision_independence() {
        let f1 = WrightParams::new(vec![(pv(1, 2), pv(1, 4))], vec![(pv(1, 1), pv(3, 4))]).unwrap();
        let ml = mittag_leffler_params(pv(3, 4), pv(1, 1)).unwrap();
        for params in [&f1, &ml] {
            for r in [1.0, 10.0, 50.0, 100.0] {
                for th in [0.0, std::f64::consts::FRAC_PI_2, std::f64::consts::PI] {
                    let z = RayPoint::from_f64(r, th, 200);
                    let a = wright_eval(params, &z, 30).unwrap();
                    let b = wright_eval(params, &z, 45).unwrap();
                    let err = rel_err_c(&a.value, &b.value);
                    assert!(err < 1e-30, "r={r} th={th} err={err}");
                }
            }
        }
    }

    #[test]
    fn mittag_leffler_even_part_identity() {
        // E_{a,b}(−x) = 2E_{2a,b}(x²) − E_{a,b}(x)
        for (an, ad) in [(1i64, 2i64), (3, 4)] {
            for (bn, bd) in [(1i64, 1i64), (3, 4)] {
                for x in [1.0f64, 5.0, 10.0] {
                    let t = 30usize;
                    let eab = mittag_leffler_params(pv(an, ad), pv(bn, bd)).unwrap();
                    let e2ab = mittag_leffler_params(pv(2 * an, ad), pv(bn, bd)).unwrap();
                    let zneg = RayPoint::new(HPReal::from_f64(x, 120), HPReal::pi(120));
                    let neg = wright_eval(&eab, &zneg, t).unwrap();
                    let pos = wright_eval(&eab, &RayPoint::from_f64(x, 0.0, 120), t).unwrap();
                    let sq = wright_eval(&e2ab, &RayPoint::from_f64(x * x, 0.0, 120), t).unwrap();
                    let rhs = &sq.value.scale(&HPReal::from_u64(2, 120)) - &pos.value;
                    // the identity cancels the dominant e^{x^{1/a}} scale, so
                    // measure against that scale rather than the tiny result
                    let scale = pos.value.abs().max(&neg.value.abs());
                    let err = (&(&neg.value - &rhs).abs() / &scale).to_f64();
                    assert!(err < 1e-28, "a={an}/{ad} b={bn}/{bd} x={x} err={err}");
                }
            }
        }
    }

    #[test]
    fn truncation_report_honours_target() {
        let f1 = WrightParams::new(vec![(pv(1, 2), pv(1, 4))], vec![(pv(1, 1), pv(3, 4))]).unwrap();
        let rep = wright_eval(&f1, &RayPoint::from_f64(30.0, 1.2, 80), 30).unwrap();
        let bound = &rep.value.abs().with_digits(50)
            * &HPReal::from_f64(1e-30, 50);
        assert!(rep.est_truncation_error < bound);
        assert!(rep.terms_used > 10);
        assert!(rep.working_precision >= 50);
    }

    #[test]
    fn kappa_zero_rejected_for_eval() {
        let p = WrightParams::new(vec![(pv(2, 1), pv(1, 1))], vec![(pv(1, 1), pv(1, 1))]).unwrap();
        let res = wright_eval(&p, &RayPoint::from_f64(0.5, 0.0, 50), 20);
        assert!(matches!(res, Err(WrightError::KappaNonPositive { .. })));
    }
}

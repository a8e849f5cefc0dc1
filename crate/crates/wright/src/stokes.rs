//! Residuals after subtracting optimally-truncated expansions, Stokes
//! multiplier measurement, and θ-sweeps.
//!
//! The central quantity is the residual 𝓡(z) = F(z) − Σ (subtracted
//! expansions), with F from the direct series at oracle precision. Near a
//! Stokes line the residual isolates the switching exponential, and the
//! multiplier S(θ) = 𝓡 / (A₀ Z^ϑ e^Z) tracks its smooth turn-on.

use crate::coeffs::{solve_coefficients, MAX_COEFFS};
use crate::error::{Result, WrightError};
use crate::expansions::{
    alg_expansion_h_floored, big_z, exp_expansion_E, TruncationSpec,
};
use crate::hp::{ray_power, HPComplex, HPReal, RayPoint};
use crate::params::{derive_constants, ParamValue, WrightParams};
use crate::series::wright_eval;

/// Which expansion a subtraction refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExpansionKind {
    /// E(z·e^{2πi·branch})
    Exp,
    /// H(z·e^{πi·branch})
    Alg,
}

/// One expansion to subtract from the oracle value. `branch` counts full
/// turns for `Exp` and half turns for `Alg` (so `Alg` with branch −1 is the
/// usual H(ze^{−πi})).
#[derive(Clone, Copy, Debug)]
pub struct Subtraction {
    pub kind: ExpansionKind,
    pub branch: i64,
    pub trunc: TruncationSpec,
}

impl Subtraction {
    pub fn exp_opt(branch: i64, cap: usize) -> Self {
        Subtraction {
            kind: ExpansionKind::Exp,
            branch,
            trunc: TruncationSpec::Optimal(cap),
        }
    }

    pub fn alg_opt(branch: i64, cap: usize) -> Self {
        Subtraction {
            kind: ExpansionKind::Alg,
            branch,
            trunc: TruncationSpec::Optimal(cap),
        }
    }
}

fn eval_subtraction(
    params: &WrightParams,
    z: &RayPoint,
    sub: &Subtraction,
    oracle_floor_log10: f64,
) -> Result<HPComplex> {
    match sub.kind {
        ExpansionKind::Exp => {
            let j_max = match sub.trunc {
                TruncationSpec::Fixed(j) => j,
                TruncationSpec::Optimal(cap) => cap.saturating_sub(1),
            }
            .min(MAX_COEFFS);
            let coeffs = solve_coefficients(params, j_max)?;
            let (v, _) =
                exp_expansion_E(params, &coeffs, &z.rotate_pi(2 * sub.branch), &sub.trunc)?;
            Ok(v)
        }
        ExpansionKind::Alg => {
            // terms below the oracle's own error floor cannot matter
            let floor = if oracle_floor_log10.is_finite() {
                Some(oracle_floor_log10 - 3.0)
            } else {
                None
            };
            let (v, _) =
                alg_expansion_h_floored(params, &z.rotate_pi(sub.branch), &sub.trunc, floor)?;
            Ok(v)
        }
    }
}

/// F(z) minus the listed truncated expansions, with the oracle precision
/// raised (three times, 30 digits each) until the residual keeps at least
/// 8 significant digits above the oracle's error floor.
pub fn residual_after(
    params: &WrightParams,
    z: &RayPoint,
    subtract: &[Subtraction],
) -> Result<HPComplex> {
    params.validate()?;
    let mut digits = z.digits();
    for _ in 0..4 {
        let zz = z.with_digits(digits);
        let oracle = wright_eval(params, &zz, digits)?;
        let floor_log10 = if oracle.est_truncation_error.is_zero() {
            f64::NEG_INFINITY
        } else {
            oracle.est_truncation_error.log10_abs_approx()
        };
        let mut resid = oracle.value.clone();
        for sub in subtract {
            let v = eval_subtraction(params, &zz, sub, floor_log10)?;
            resid = &resid - &v;
        }
        let ra = resid.abs().with_digits(50);
        if !ra.is_zero() && ra.log10_abs_approx() > floor_log10 + 8.0 {
            return Ok(resid);
        }
        digits += 30;
    }
    Err(WrightError::PrecisionExhausted { attempts: 3 })
}

/// The j = 0 exponential term A₀ Z^ϑ e^Z on branch n (z·e^{2πin}).
pub fn leading_exp_term(params: &WrightParams, z: &RayPoint, n: i64) -> Result<HPComplex> {
    let d = z.digits().max(60);
    let dc = derive_constants(params, d)?;
    if dc.kappa_zero {
        return Err(WrightError::KappaNonPositive { kappa: 0.0 });
    }
    let zray = big_z(&dc, &z.rotate_pi(2 * n), d);
    let zc = zray.to_complex();
    let pre = ray_power(&zray, &dc.theta_big)
        .scale(&dc.a0)
        .scale(&zc.re.exp());
    let rot = HPComplex::new(zc.im.cos(), zc.im.sin());
    Ok(&pre * &rot)
}

/// S(θ) = residual / (A₀ Z_ref^ϑ e^{Z_ref}), the reference exponential on
/// branch `reference_n`.
pub fn stokes_multiplier(
    params: &WrightParams,
    z: &RayPoint,
    reference_n: i64,
    subtract: &[Subtraction],
) -> Result<HPComplex> {
    let resid = residual_after(params, z, subtract)?;
    let denom = leading_exp_term(params, z, reference_n)?;
    if denom.is_zero() {
        return Err(WrightError::InvalidParams(
            "reference leading term vanishes".into(),
        ));
    }
    Ok(&resid * &denom.recip())
}

/// Which pair of expansions exchanges dominance.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StokesLineKind {
    EvsH,
    EvsE,
}

/// The positive-θ Stokes line: πκ for E against H (0<κ<1), π(2−κ)/2 for the
/// two E branches (1<κ≤2).
pub fn stokes_line_location(kind: StokesLineKind, kappa: &HPReal) -> Result<HPReal> {
    let k = kappa.to_f64();
    let d = kappa.digits().max(50);
    match kind {
        StokesLineKind::EvsH => {
            if k <= 0.0 || k >= 1.0 {
                return Err(WrightError::OutOfRegime(format!(
                    "E-vs-H Stokes line needs 0 < kappa < 1, got {}",
                    k
                )));
            }
            Ok(&HPReal::pi(d) * &kappa.with_digits(d))
        }
        StokesLineKind::EvsE => {
            if k <= 1.0 || k > 2.0 {
                return Err(WrightError::OutOfRegime(format!(
                    "E-vs-E Stokes line needs 1 < kappa <= 2, got {}",
                    k
                )));
            }
            let two = HPReal::from_u64(2, d);
            let gap = &two - &kappa.with_digits(d);
            Ok(&(&HPReal::pi(d) * &gap) / &two)
        }
    }
}

/// Parameter families of the scan harness.
#[derive(Clone, Debug)]
pub enum Family {
    F1,
    F2,
    F3,
    ML { a: ParamValue, b: ParamValue },
    Custom(WrightParams),
}

impl Family {
    pub fn params(&self) -> Result<WrightParams> {
        let pv = ParamValue::exact;
        match self {
            Family::F1 => WrightParams::new(vec![(pv(1, 2), pv(1, 4))], vec![(pv(1, 1), pv(3, 4))]),
            Family::F2 => WrightParams::new(vec![(pv(2, 3), pv(1, 3))], vec![(pv(1, 3), pv(1, 4))]),
            Family::F3 => WrightParams::new(
                vec![],
                vec![(pv(1, 10), pv(1, 4)), (pv(1, 10), pv(3, 4))],
            ),
            Family::ML { a, b } => crate::series::mittag_leffler_params(a.clone(), b.clone()),
            Family::Custom(p) => {
                p.validate()?;
                Ok(p.clone())
            }
        }
    }
}

/// What the `reference_abs` column reports; its branch n also fixes the
/// multiplier denominator.
#[derive(Clone, Copy, Debug)]
pub enum ReferenceKind {
    /// |A₀ Z^ϑ e^Z| on branch n
    LeadingExp { n: i64 },
    /// |E(z·e^{2πin})| truncated at j ≤ j_max
    ExpSub { n: i64, j_max: usize },
}

impl ReferenceKind {
    fn branch(&self) -> i64 {
        match self {
            ReferenceKind::LeadingExp { n } => *n,
            ReferenceKind::ExpSub { n, .. } => *n,
        }
    }
}

/// One θ-sweep job.
#[derive(Clone, Debug)]
pub struct ScanConfig {
    pub family: Family,
    pub modulus: HPReal,
    /// grid of arg z in radians, each within [−π, π]
    pub theta_grid: Vec<HPReal>,
    pub target_digits: usize,
    pub reference: ReferenceKind,
    pub subtract: Vec<Subtraction>,
}

impl ScanConfig {
    pub fn validate(&self) -> Result<()> {
        self.family.params()?;
        if !self.modulus.is_positive() {
            return Err(WrightError::InvalidParams("modulus must be positive".into()));
        }
        for th in &self.theta_grid {
            if th.to_f64().abs() > std::f64::consts::PI * (1.0 + 1e-12) {
                return Err(WrightError::InvalidParams(format!(
                    "theta {} outside [-pi, pi]",
                    th.to_f64()
                )));
            }
        }
        Ok(())
    }
}

/// One measured grid point. `flags` is empty on success and carries an
/// `error:` message when the row failed (the sweep itself never aborts).
#[derive(Clone, Debug)]
pub struct StokesScanRow {
    pub theta_over_pi: HPReal,
    pub residual_abs: HPReal,
    pub reference_abs: HPReal,
    pub s_re: HPReal,
    pub s_im: HPReal,
    pub flags: String,
}

fn scan_row(
    params: &WrightParams,
    cfg: &ScanConfig,
    theta: &HPReal,
) -> Result<(HPReal, HPReal, HPReal, HPReal)> {
    let d = cfg.target_digits;
    let z = RayPoint::new(cfg.modulus.with_digits(d), theta.with_digits(d));
    let resid = residual_after(params, &z, &cfg.subtract)?;
    let reference_abs = match cfg.reference {
        ReferenceKind::LeadingExp { n } => leading_exp_term(params, &z, n)?.abs(),
        ReferenceKind::ExpSub { n, j_max } => {
            let coeffs = solve_coefficients(params, j_max)?;
            let (v, _) = exp_expansion_E(
                params,
                &coeffs,
                &z.rotate_pi(2 * n),
                &TruncationSpec::Fixed(j_max),
            )?;
            v.abs()
        }
    };
    let denom = leading_exp_term(params, &z, cfg.reference.branch())?;
    let s = &resid * &denom.recip();
    Ok((
        resid.abs().with_digits(50),
        reference_abs.with_digits(50),
        s.re.with_digits(50),
        s.im.with_digits(50),
    ))
}

/// Runs the sweep row by row in grid order. Row failures are recorded in the
/// row's `flags`; the scan always returns one row per grid point.
pub fn run_scan(cfg: &ScanConfig) -> Result<Vec<StokesScanRow>> {
    cfg.validate()?;
    let params = cfg.family.params()?;
    let pi = HPReal::pi(cfg.target_digits.max(50));
    let mut rows = Vec::with_capacity(cfg.theta_grid.len());
    for theta in &cfg.theta_grid {
        let over_pi = (&theta.with_digits(pi.digits()) / &pi).with_digits(50);
        let row = match scan_row(&params, cfg, theta) {
            Ok((residual_abs, reference_abs, s_re, s_im)) => StokesScanRow {
                theta_over_pi: over_pi,
                residual_abs,
                reference_abs,
                s_re,
                s_im,
                flags: String::new(),
            },
            Err(e) => StokesScanRow {
                theta_over_pi: over_pi,
                residual_abs: HPReal::zero(50),
                reference_abs: HPReal::zero(50),
                s_re: HPReal::zero(50),
                s_im: HPReal::zero(50),
                flags: format!("error:{}", e),
            },
        };
        rows.push(row);
    }
    Ok(rows)
}

/// Fixed 10-significant-digit rendering used by every data stream.
pub fn sig10(x: &HPReal) -> String {
    format!("{:.9e}", x.to_f64())
}

/// CSV emission: fixed header, 10 significant digits, deterministic order.
pub fn scan_csv(rows: &[StokesScanRow]) -> String {
    let mut out = String::from("theta_over_pi,residual_abs,reference_abs,S_re,S_im,flags\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            sig10(&r.theta_over_pi),
            sig10(&r.residual_abs),
            sig10(&r.reference_abs),
            sig10(&r.s_re),
            sig10(&r.s_im),
            r.flags
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pv(n: i64, d: i64) -> ParamValue {
        ParamValue::exact(n, d)
    }

    fn ray(r: f64, th_over_pi: f64, digits: usize) -> RayPoint {
        RayPoint::new(
            HPReal::from_f64(r, digits),
            &HPReal::pi(digits) * &HPReal::from_f64(th_over_pi, digits),
        )
    }

    #[test]
    fn residual_f1_on_the_cut() {
        let params = Family::F1.params().unwrap();
        let z = ray(100.0, 1.0, 40);
        let r = residual_after(
            &params,
            &z,
            &[Subtraction::exp_opt(0, 40), Subtraction::alg_opt(-1, 40)],
        )
        .unwrap();
        let got = r.abs().to_f64();
        let want = 6.283513e-7;
        assert!((got - want).abs() / want < 1e-4, "got {:e}", got);
    }

    #[test]
    fn residual_f2_and_multiplier() {
        let params = Family::F2.params().unwrap();
        let sub = [Subtraction::alg_opt(-1, 40)];
        let z = ray(10.0, 0.5, 40);
        let r = residual_after(&params, &z, &sub).unwrap();
        let got = r.abs().to_f64();
        assert!((got - 4.4964e-8).abs() / 4.4964e-8 < 5e-3, "got {:e}", got);
        let s = stokes_multiplier(&params, &z, 0, &sub).unwrap();
        assert!((s.re.to_f64() - 1.0).abs() < 2e-3, "S = {}", s.re.to_f64());
        // deep into the algebraic sector the multiplier has decayed
        let s = stokes_multiplier(&params, &ray(10.0, 0.75, 40), 0, &sub).unwrap();
        assert!((s.re.to_f64() - 0.0237).abs() < 2e-3, "S = {}", s.re.to_f64());
    }

    #[test]
    fn residual_f3_and_multiplier() {
        let params = Family::F3.params().unwrap();
        let sub = [Subtraction::exp_opt(0, 40)];
        let z = ray(20.0, 1.0, 40);
        let r = residual_after(&params, &z, &sub).unwrap();
        let got = r.abs().to_f64();
        assert!(
            (got - 1.307416e-9).abs() / 1.307416e-9 < 1e-5,
            "got {:e}",
            got
        );
        let s = stokes_multiplier(&params, &ray(20.0, 0.4, 40), -1, &sub).unwrap();
        assert!((s.re.to_f64() - 0.4477).abs() < 2e-3, "S = {}", s.re.to_f64());
    }

    #[test]
    fn precision_exhaustion_reported() {
        // E(z) equals the function to Gaussian accuracy; the leftover
        // e^{z²}erfc(z) ~ 0.019 sits 390 digits under the oracle's peak, far
        // beyond three 30-digit raises from 20
        let params = crate::series::mittag_leffler_params(pv(1, 2), pv(1, 1)).unwrap();
        let z = RayPoint::from_f64(30.0, 0.0, 20);
        let res = residual_after(&params, &z, &[Subtraction::exp_opt(0, 10)]);
        match res {
            Err(WrightError::PrecisionExhausted { attempts }) => assert_eq!(attempts, 3),
            other => panic!("expected PrecisionExhausted, got {:?}", other),
        }
    }

    #[test]
    fn stokes_line_locations() {
        let two_thirds = HPReal::from_f64(2.0 / 3.0, 50);
        let loc = stokes_line_location(StokesLineKind::EvsH, &two_thirds).unwrap();
        assert!((loc.to_f64() - 2.0 * std::f64::consts::PI / 3.0).abs() < 1e-12);
        let six_fifths = HPReal::from_f64(1.2, 50);
        let loc = stokes_line_location(StokesLineKind::EvsE, &six_fifths).unwrap();
        assert!((loc.to_f64() - 2.0 * std::f64::consts::PI / 5.0).abs() < 1e-12);
        let loc = stokes_line_location(StokesLineKind::EvsE, &HPReal::from_u64(2, 50)).unwrap();
        assert!(loc.to_f64().abs() < 1e-12);
        assert!(stokes_line_location(StokesLineKind::EvsH, &six_fifths).is_err());
        assert!(stokes_line_location(StokesLineKind::EvsE, &two_thirds).is_err());
    }

    #[test]
    fn conjugate_multiplier_symmetry() {
        let params = Family::F2.params().unwrap();
        let sub = [Subtraction::alg_opt(-1, 40)];
        let sub_neg = [Subtraction::alg_opt(1, 40)];
        let up = stokes_multiplier(&params, &ray(10.0, 0.6, 40), 0, &sub).unwrap();
        let dn = stokes_multiplier(&params, &ray(10.0, -0.6, 40), 0, &sub_neg).unwrap();
        assert!((up.re.to_f64() - dn.re.to_f64()).abs() < 1e-8);
        assert!((up.im.to_f64() + dn.im.to_f64()).abs() < 1e-8);
    }

    #[test]
    fn scan_rows_and_csv() {
        let cfg = ScanConfig {
            family: Family::F2,
            modulus: HPReal::from_u64(10, 40),
            theta_grid: vec![
                &HPReal::pi(40) * &HPReal::from_f64(0.5, 40),
                &HPReal::pi(40) * &HPReal::from_f64(0.55, 40),
            ],
            target_digits: 40,
            reference: ReferenceKind::LeadingExp { n: 0 },
            subtract: vec![Subtraction::alg_opt(-1, 40)],
        };
        let rows = run_scan(&cfg).unwrap();
        assert_eq!(rows.len(), 2);
        assert!(rows.iter().all(|r| r.flags.is_empty()));
        assert!((rows[0].theta_over_pi.to_f64() - 0.50).abs() < 1e-12);
        assert!((rows[0].s_re.to_f64() - 1.0000).abs() < 2e-3);
        assert!((rows[1].s_re.to_f64() - 0.9981).abs() < 2e-3);
        let csv = scan_csv(&rows);
        let mut lines = csv.lines();
        assert_eq!(
            lines.next().unwrap(),
            "theta_over_pi,residual_abs,reference_abs,S_re,S_im,flags"
        );
        assert!(lines.next().unwrap().starts_with("5.000000000e-1,"));
        // deterministic: identical invocation, identical bytes
        assert_eq!(csv, scan_csv(&run_scan(&cfg).unwrap()));
    }

    #[test]
    fn scan_captures_row_errors() {
        // overlapping upper pole sequences make H fault; the scan records it
        let params = WrightParams::new(
            vec![(pv(1, 1), pv(1, 1)), (pv(1, 1), pv(2, 1))],
            vec![(pv(1, 1), pv(1, 1)), (pv(1, 1), pv(1, 1)), (pv(1, 1), pv(1, 1))],
        )
        .unwrap();
        let cfg = ScanConfig {
            family: Family::Custom(params),
            modulus: HPReal::from_u64(5, 40),
            theta_grid: vec![HPReal::zero(40)],
            target_digits: 40,
            reference: ReferenceKind::LeadingExp { n: 0 },
            subtract: vec![Subtraction::alg_opt(-1, 40)],
        };
        let rows = run_scan(&cfg).unwrap();
        assert_eq!(rows.len(), 1);
        assert!(rows[0].flags.starts_with("error:"), "{}", rows[0].flags);
    }
}

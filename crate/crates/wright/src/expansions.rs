//! The formal asymptotic sums E (exponential) and H (algebraic), their
//! truncation, and the sector-dependent composition rules.
//!
//! E(z) = Z^ϑ e^Z Σ_j A_j Z^{−j} with Z = κ(hz)^{1/κ}; H(z) sums the residue
//! series over the pole array s = (a_m+k)/α_m of g(−s). Which combination is
//! asymptotically valid depends on κ and arg z; `classify_sector` encodes the
//! composition rules, and `asymptotic_eval` executes them.
//!
//! Branches matter everywhere here: z, ze^{∓πi} and ze^{∓2πi} are different
//! rays carrying the same complex value, so all entry points take `RayPoint`s
//! with unreduced arguments.

mod alg_chain;

use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};

use crate::coeffs::{solve_coefficients, CoefficientSet};
use crate::error::{Result, WrightError};
use crate::hp::gamma::{hp_gamma_rational, hp_recip_gamma_rational};
use crate::hp::{hp_erf, hp_gamma, hp_recip_gamma, ray_power, HPComplex, HPReal, RayPoint};
use crate::params::{derive_constants, DerivedConstants, ParamValue, WrightParams};
use crate::rational::ratio;
use crate::series::EvalReport;

/// How to cut off a formal asymptotic sum.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TruncationSpec {
    /// Exactly J+1 terms (j = 0..J), growth or not.
    Fixed(usize),
    /// Stop just before the first term that grows; consider at most `cap`
    /// terms.
    Optimal(usize),
}

impl Default for TruncationSpec {
    fn default() -> Self {
        TruncationSpec::Optimal(64)
    }
}

impl TruncationSpec {
    pub fn max_terms(&self) -> usize {
        match self {
            TruncationSpec::Fixed(j) => j + 1,
            TruncationSpec::Optimal(cap) => (*cap).max(1),
        }
    }
}

/// What to do when arg z falls within ε of a Stokes line.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StokesPolicy {
    /// Keep the switching expansion at full weight (flagged overestimate).
    IncludeBelow,
    /// Drop it, as just past the line.
    DropAbove,
}

/// Sector-classification tolerances.
#[derive(Clone, Debug)]
pub struct SectorConfig {
    pub epsilon: HPReal,
    pub stokes_policy: StokesPolicy,
}

impl Default for SectorConfig {
    fn default() -> Self {
        SectorConfig {
            // π/180
            epsilon: &HPReal::pi(50) / &HPReal::from_u64(180, 50),
            stokes_policy: StokesPolicy::IncludeBelow,
        }
    }
}

/// Audit trail of one truncated sum.
#[derive(Clone, Debug)]
pub struct ExpansionTermLog {
    /// Magnitudes of the retained (nonzero) terms, in order.
    pub term_magnitudes: Vec<HPReal>,
    /// Number of retained terms.
    pub chosen_index: usize,
    /// Heuristic absolute error estimate: the magnitude at the chosen cut
    /// (smallest retained term, not counting anomalous dips), or zero when
    /// the series terminated exactly.
    pub smallest_term: HPReal,
    /// Magnitudes still decreasing when the term budget ran out.
    pub no_minimum: bool,
    /// The sum grew from the very first step; only the j=0 term is returned.
    pub divergent_from_start: bool,
}

impl ExpansionTermLog {
    fn empty(digits: usize) -> Self {
        ExpansionTermLog {
            term_magnitudes: Vec::new(),
            chosen_index: 0,
            smallest_term: HPReal::zero(digits),
            no_minimum: false,
            divergent_from_start: false,
        }
    }

    fn absorb(&mut self, other: ExpansionTermLog) {
        self.term_magnitudes.extend(other.term_magnitudes);
        self.chosen_index += other.chosen_index;
        self.smallest_term = &self.smallest_term + &other.smallest_term;
        self.no_minimum |= other.no_minimum;
        self.divergent_from_start |= other.divergent_from_start;
    }
}

/// Sums terms from `next` under the truncation rule. `next` returns None when
/// the stream is exhausted; zero terms are skipped (three in a row end the
/// sum exactly). `floor_log10` cuts off once a term drops below an absolute
/// magnitude floor, for callers that only need fixed absolute accuracy.
///
/// Optimal truncation cuts at the smallest-magnitude term within the budget,
/// ignoring terms more than ten times below both neighbours when picking the
/// cut (isolated near-cancellations; a raw global minimum would chase them
/// past the genuine turning point, while a plain first-rise rule stops
/// decades too early on short-period magnitude oscillations).
fn truncate_with<F>(
    mut next: F,
    spec: &TruncationSpec,
    digits: usize,
    floor_log10: Option<f64>,
) -> Result<(HPComplex, ExpansionTermLog)>
where
    F: FnMut(usize) -> Result<Option<HPComplex>>,
{
    let fixed = matches!(spec, TruncationSpec::Fixed(_));
    let budget = spec.max_terms();
    let mut terms: Vec<HPComplex> = Vec::new();
    let mut mags: Vec<HPReal> = Vec::new();
    let mut zero_run = 0usize;
    let mut terminated = false;
    let mut floor_cut = false;
    let mut hit_boundary = false;

    loop {
        if terms.len() >= budget {
            hit_boundary = true;
            break;
        }
        let t = match next(terms.len())? {
            Some(t) => t,
            None => {
                hit_boundary = true;
                break;
            }
        };
        let m = t.abs().with_digits(50);
        if m.is_zero() {
            zero_run += 1;
            terms.push(t);
            mags.push(m);
            if !fixed && zero_run >= 3 {
                terminated = true;
                break;
            }
            continue;
        }
        zero_run = 0;
        let below_floor = floor_log10.map_or(false, |f| m.log10_abs_approx() < f);
        terms.push(t);
        mags.push(m);
        if below_floor {
            floor_cut = true;
            break;
        }
    }

    // Candidate cut positions are the nonzero magnitudes, except terms more
    // than ten times below both neighbours: those are isolated phase
    // cancellations, not the envelope floor, and chasing them puts the cut
    // well past the series' genuine turning point.
    let nz: Vec<usize> = mags
        .iter()
        .enumerate()
        .filter(|(_, m)| !m.is_zero())
        .map(|(i, _)| i)
        .collect();
    // slightly above 10 so a ratio of exactly ten (up to rounding) is kept
    let ten = HPReal::from_f64(10.000000001, 50);
    let mut min_k: Option<usize> = None;
    for (k, &i) in nz.iter().enumerate() {
        if k > 0 && k + 1 < nz.len() {
            let m10 = &mags[i] * &ten;
            if m10 < mags[nz[k - 1]] && m10 < mags[nz[k + 1]] {
                continue;
            }
        }
        match min_k {
            Some(j) if mags[nz[j]] <= mags[i] => {}
            _ => min_k = Some(k),
        }
    }

    let mut sum = HPComplex::zero(digits);
    let mut log = ExpansionTermLog::empty(digits);
    let cut = if fixed {
        terms.len()
    } else {
        min_k.map_or(0, |k| nz[k] + 1)
    };
    for i in 0..cut {
        if mags[i].is_zero() {
            continue;
        }
        sum = &sum + &terms[i];
        log.chosen_index += 1;
        log.term_magnitudes.push(mags[i].clone());
    }

    if let Some(k) = min_k {
        log.smallest_term = if terminated && !fixed {
            HPReal::zero(50)
        } else {
            mags[nz[k]].clone()
        };
        if !fixed {
            log.divergent_from_start = k == 0 && log.chosen_index == 1 && nz.len() > 1;
            // still shrinking when the budget or stream ran out
            log.no_minimum = hit_boundary && !terminated && !floor_cut && k + 1 == nz.len();
        }
    }
    Ok((sum, log))
}

/// Smallest-term truncation of a term stream: partial sum, number of summed
/// terms and the smallest retained magnitude.
pub fn optimal_truncate<I>(terms: I, cap: usize) -> (HPComplex, usize, HPReal, ExpansionTermLog)
where
    I: IntoIterator<Item = HPComplex>,
{
    let mut it = terms.into_iter();
    let digits = 50;
    let (sum, log) =
        truncate_with(|_| Ok(it.next()), &TruncationSpec::Optimal(cap), digits, None)
            .expect("infallible stream");
    (sum, log.chosen_index, log.smallest_term.clone(), log)
}

/// Z = κ(hz)^{1/κ} as a ray: modulus κ(h|z|)^{1/κ}, argument θ/κ (unreduced,
/// so branch shifts in z map to rotations of Z).
pub fn big_z(dc: &DerivedConstants, z: &RayPoint, digits: usize) -> RayPoint {
    let inv_k = dc.kappa.with_digits(digits).recip();
    let hr = &dc.h.with_digits(digits) * &z.r.with_digits(digits);
    RayPoint::new(
        &dc.kappa.with_digits(digits) * &hr.pow(&inv_k),
        &z.theta.with_digits(digits) * &inv_k,
    )
}

/// The exponential expansion E(z) = A₀ Z^ϑ e^Z Σ_j c_j Z^{−j}.
///
/// Branch-shifted variants E(ze^{2πin}) are obtained by passing the ray
/// (r, θ+2πn). Term magnitudes in the log include the prefactor, so
/// `smallest_term` is an absolute error estimate.
#[allow(non_snake_case)]
pub fn exp_expansion_E(
    params: &WrightParams,
    coeffs: &CoefficientSet,
    z: &RayPoint,
    trunc: &TruncationSpec,
) -> Result<(HPComplex, ExpansionTermLog)> {
    let d = z.digits().max(60);
    let dc = derive_constants(params, d)?;
    if dc.kappa_zero {
        return Err(WrightError::KappaNonPositive { kappa: 0.0 });
    }
    let zray = big_z(&dc, z, d);
    let zc = zray.to_complex();
    let prefactor = ray_power(&zray, &dc.theta_big)
        .scale(&dc.a0)
        .scale(&zc.re.exp());
    // e^Z = e^{Re Z}(cos Im Z + i sin Im Z); the real exponential is folded
    // into the prefactor above, the rotation here
    let rot = HPComplex::new(zc.im.cos(), zc.im.sin());
    let prefactor = &prefactor * &rot;
    let zinv = zc.recip();
    let jmax = coeffs.j_max();
    let mut pow = HPComplex::from_real(HPReal::one(d));
    truncate_with(
        |j| {
            if j > jmax {
                return Ok(None);
            }
            if j > 0 {
                pow = &pow * &zinv;
            }
            Ok(Some((&prefactor * &pow).scale(&coeffs.c_hp(j, d))))
        },
        trunc,
        d,
        None,
    )
}

fn f64_is_nonpositive_int(x: f64) -> Option<i64> {
    let r = x.round();
    if (x - r).abs() < 1e-9 && r <= 0.0 {
        Some(r as i64)
    } else {
        None
    }
}

/// One residue-series term coefficient for sequence m at index k:
/// (−1)^k/k! · Γ(s_mk) Π'_{r≠m} Γ(a_r − α_r s_mk) / Π_r Γ(b_r − β_r s_mk).
/// Errors with a collision diagnostic when a numerator gamma sits at a pole.
fn h_term_coeff(
    params: &WrightParams,
    m: usize,
    k: usize,
    d: usize,
) -> Result<HPReal> {
    let exact = params.all_exact();
    let (alpha_m, a_m) = &params.upper[m];
    let mut acc;
    if exact {
        let al = alpha_m.as_rational().unwrap();
        let av = a_m.as_rational().unwrap();
        let s: BigRational = (av + ratio(k as i64, 1)) / al;
        acc = hp_gamma_rational(&s, d)?;
        for (r, (alpha_r, a_r)) in params.upper.iter().enumerate() {
            if r == m {
                continue;
            }
            let arg = a_r.as_rational().unwrap() - alpha_r.as_rational().unwrap() * &s;
            if arg.is_integer() && !arg.is_positive() {
                return Err(WrightError::HigherOrderPole {
                    m: m + 1,
                    k,
                    r: r + 1,
                    k_prime: (-arg.to_integer()).to_usize().unwrap_or(0),
                });
            }
            acc = &acc * &hp_gamma_rational(&arg, d)?;
        }
        for (beta_r, b_r) in &params.lower {
            let arg = b_r.as_rational().unwrap() - beta_r.as_rational().unwrap() * &s;
            let rg = hp_recip_gamma_rational(&arg, d);
            if rg.is_zero() {
                return Ok(HPReal::zero(d));
            }
            acc = &acc * &rg;
        }
    } else {
        let al = alpha_m.to_hp(d);
        let av = a_m.to_hp(d);
        let s = &(&av + &HPReal::from_u64(k as u64, d)) / &al;
        acc = hp_gamma(&s)?;
        for (r, (alpha_r, a_r)) in params.upper.iter().enumerate() {
            if r == m {
                continue;
            }
            let arg = &a_r.to_hp(d) - &(&alpha_r.to_hp(d) * &s);
            if let Some(neg) = f64_is_nonpositive_int(arg.to_f64()) {
                return Err(WrightError::HigherOrderPole {
                    m: m + 1,
                    k,
                    r: r + 1,
                    k_prime: (-neg) as usize,
                });
            }
            acc = &acc * &hp_gamma(&arg)?;
        }
        for (beta_r, b_r) in &params.lower {
            let arg = &b_r.to_hp(d) - &(&beta_r.to_hp(d) * &s);
            let rg = hp_recip_gamma(&arg);
            if rg.is_zero() {
                return Ok(HPReal::zero(d));
            }
            acc = &acc * &rg;
        }
    }
    // (−1)^k / k!
    let mut fact = HPReal::one(d);
    for i in 2..=k as u64 {
        fact = &fact * &HPReal::from_u64(i, d);
    }
    acc = &acc / &fact;
    Ok(if k % 2 == 1 { -&acc } else { acc })
}

/// The algebraic expansion H(z) = Σ_m α_m^{−1} z^{−a_m/α_m} S(z; m), summed
/// over the p upper pole sequences. The caller passes z already rotated to
/// ze^{∓πi}. Each sequence is truncated independently; the log entries are
/// concatenated and the error estimates added.
#[allow(non_snake_case)]
pub fn alg_expansion_H(
    params: &WrightParams,
    z_shifted: &RayPoint,
    trunc: &TruncationSpec,
) -> Result<(HPComplex, ExpansionTermLog)> {
    alg_expansion_h_floored(params, z_shifted, trunc, None)
}

pub(crate) fn alg_expansion_h_floored(
    params: &WrightParams,
    z: &RayPoint,
    trunc: &TruncationSpec,
    floor_log10: Option<f64>,
) -> Result<(HPComplex, ExpansionTermLog)> {
    let d = z.digits().max(60);
    params.validate()?;
    let mut total = HPComplex::zero(d);
    let mut log = ExpansionTermLog::empty(d);
    for m in 0..params.p() {
        let (s, l) = match alg_chain::SeqTerms::new(params, m, z, d, floor_log10)? {
            Some(mut seq) => truncate_with(|k| seq.next_term(k), trunc, d, floor_log10)?,
            None => {
                let (alpha_m, a_m) = &params.upper[m];
                let al = alpha_m.to_hp(d);
                let inv_al = al.recip();
                let prefactor = ray_power(z, &(-&(&a_m.to_hp(d) * &inv_al))).scale(&inv_al);
                // z^{−1/α_m} applied incrementally
                let step = ray_power(z, &(-&inv_al));
                let mut pow = HPComplex::from_real(HPReal::one(d));
                truncate_with(
                    |k| {
                        if k > 0 {
                            pow = &pow * &step;
                        }
                        let c = h_term_coeff(params, m, k, d)?;
                        Ok(Some((&prefactor * &pow).scale(&c)))
                    },
                    trunc,
                    d,
                    floor_log10,
                )?
            }
        };
        total = &total + &s;
        log.absorb(l);
    }
    Ok((total, log))
}

/// The subdominant third exponential series of the ₀Ψ₂ family:
/// 2 cos π(b₁−b₂) · X^ϑ e^{−X} Σ_j c_j (−X)^{−j}, X = κ(hze^{−πi})^{1/κ}.
/// Exactly zero when b₁−b₂ is half an odd integer.
pub fn third_exp_series(
    params: &WrightParams,
    coeffs: &CoefficientSet,
    z: &RayPoint,
    trunc: &TruncationSpec,
) -> Result<HPComplex> {
    if params.p() != 0 || params.q() != 2 {
        return Err(WrightError::InvalidParams(
            "third exponential series applies to the 0Ψ2 family".into(),
        ));
    }
    let d = z.digits().max(60);
    // 2 cos π(b1−b2)
    let diff_exact = match (
        params.lower[0].1.as_rational(),
        params.lower[1].1.as_rational(),
    ) {
        (Some(x), Some(y)) => Some(x - y),
        _ => None,
    };
    if let Some(diff) = &diff_exact {
        let twice = diff * ratio(2, 1);
        if twice.is_integer() && twice.to_integer().to_i64().map_or(false, |v| v % 2 != 0) {
            return Ok(HPComplex::zero(d));
        }
    }
    let dc = derive_constants(params, d)?;
    if dc.kappa_zero {
        return Err(WrightError::KappaNonPositive { kappa: 0.0 });
    }
    let diff = match diff_exact {
        Some(r) => HPReal::from_rational(&r, d),
        None => &params.lower[0].1.to_hp(d) - &params.lower[1].1.to_hp(d),
    };
    let cosf = (&HPReal::pi(d) * &diff).cos();
    let two_cos = &cosf * &HPReal::from_u64(2, d);

    let xray = big_z(&dc, &z.rotate_pi(-1), d);
    let xc = xray.to_complex();
    let prefactor = ray_power(&xray, &dc.theta_big)
        .scale(&two_cos)
        .scale(&(-&xc.re).exp());
    let rot = HPComplex::new(xc.im.cos(), -&xc.im.sin());
    let prefactor = &prefactor * &rot;
    // (−X)^{−j} = (−1)^j X^{−j}
    let neg_xinv = -&xc.recip();
    let jmax = coeffs.j_max();
    let mut pow = HPComplex::from_real(HPReal::one(d));
    let (sum, _) = truncate_with(
        |j| {
            if j > jmax {
                return Ok(None);
            }
            if j > 0 {
                pow = &pow * &neg_xinv;
            }
            Ok(Some((&prefactor * &pow).scale(&coeffs.c_hp(j, d))))
        },
        trunc,
        d,
        None,
    )?;
    Ok(sum)
}

/// One constituent of a sector composition.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlanTerm {
    /// E(z·e^{2πin})
    Exp { n: i64 },
    /// H(z·e^{iπ·half_turns})
    Alg { half_turns: i64 },
}

/// Which expansions to sum for a given κ and arg z.
#[derive(Clone, Debug)]
pub struct CompositionPlan {
    pub terms: Vec<PlanTerm>,
    pub on_stokes_line: bool,
    /// κ = 1 sits between the composition regimes; treated as 1 < κ ≤ 2.
    pub kappa_one_heuristic: bool,
}

impl std::fmt::Display for CompositionPlan {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut first = true;
        for t in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match t {
                PlanTerm::Exp { n: 0 } => write!(f, "E(z)")?,
                PlanTerm::Exp { n } => write!(f, "E(z*e^({}*2pi*i))", n)?,
                PlanTerm::Alg { half_turns } => write!(f, "H(z*e^({}*pi*i))", half_turns)?,
            }
        }
        if self.on_stokes_line {
            write!(f, " [on Stokes line]")?;
        }
        if self.kappa_one_heuristic {
            write!(f, " [kappa=1 heuristic]")?;
        }
        Ok(())
    }
}

/// Sector composition rules.
///
/// 0<κ<1: {E(z), H(ze^{∓πi})} for |θ| ≤ πκ−ε, {H} for |θ| ≥ πκ+ε, and the
/// configured policy within ε of the Stokes line. 1<κ≤2: {E(z), E(ze^{∓2πi}),
/// H(ze^{∓πi})} in the whole plane. κ>2: {E(ze^{2πin}), n=−N..N} ∪ {H} with N
/// the smallest integer with 2N+1 > κ/2. Upper/lower shift signs follow the
/// sign of θ. (One displayed argument of the κ>2 composition carries an
/// apparent typo upstream — a stray z in the exponent; the H shift here is
/// ze^{∓πi}, consistent with every other regime.)
pub fn classify_sector(
    kappa: &HPReal,
    theta: &HPReal,
    cfg: &SectorConfig,
) -> Result<CompositionPlan> {
    let k = kappa.to_f64();
    let th = theta.to_f64();
    let eps = cfg.epsilon.to_f64();
    let pi = std::f64::consts::PI;
    if !(k > 0.0) {
        return Err(WrightError::KappaNonPositive { kappa: k });
    }
    if !(eps > 0.0 && eps < pi / 8.0) {
        return Err(WrightError::InvalidParams(format!(
            "sector epsilon {} outside (0, pi/8)",
            eps
        )));
    }
    if th.abs() > pi * (1.0 + 1e-12) {
        return Err(WrightError::InvalidParams(format!(
            "arg z = {} outside [-pi, pi]; reduce before classification",
            th
        )));
    }
    // upper signs (negative shifts) for θ ≥ 0
    let s: i64 = if th >= 0.0 { -1 } else { 1 };
    let h = PlanTerm::Alg { half_turns: s };

    if k < 1.0 {
        let stokes = pi * k;
        let (terms, on_line) = if th.abs() <= stokes - eps {
            (vec![PlanTerm::Exp { n: 0 }, h], false)
        } else if th.abs() >= stokes + eps {
            (vec![h], false)
        } else {
            match cfg.stokes_policy {
                StokesPolicy::IncludeBelow => (vec![PlanTerm::Exp { n: 0 }, h], true),
                StokesPolicy::DropAbove => (vec![h], true),
            }
        };
        return Ok(CompositionPlan {
            terms,
            on_stokes_line: on_line,
            kappa_one_heuristic: false,
        });
    }
    if k <= 2.0 {
        return Ok(CompositionPlan {
            terms: vec![PlanTerm::Exp { n: 0 }, PlanTerm::Exp { n: s }, h],
            on_stokes_line: false,
            kappa_one_heuristic: k == 1.0,
        });
    }
    // smallest N with 2N+1 > κ/2 (strict)
    let mut n = ((k / 2.0 - 1.0) / 2.0).floor() as i64 + 1;
    if n < 1 {
        n = 1;
    }
    while 2 * (n - 1) + 1 > 0 && (2 * (n - 1) + 1) as f64 > k / 2.0 && n > 1 {
        n -= 1;
    }
    let mut terms = vec![PlanTerm::Exp { n: 0 }];
    for i in 1..=n {
        terms.push(PlanTerm::Exp { n: -i });
        terms.push(PlanTerm::Exp { n: i });
    }
    terms.push(h);
    Ok(CompositionPlan {
        terms,
        on_stokes_line: false,
        kappa_one_heuristic: false,
    })
}

/// Evaluates the sector composition for z = r·e^{iθ}, |θ| ≤ π.
///
/// The report's `est_truncation_error` is the sum of the constituent
/// smallest-term estimates (absolute).
pub fn asymptotic_eval(
    params: &WrightParams,
    z: &RayPoint,
    trunc: &TruncationSpec,
    cfg: &SectorConfig,
) -> Result<EvalReport> {
    let d = z.digits().max(60);
    let dc = derive_constants(params, 50)?;
    if dc.kappa_zero {
        return Err(WrightError::KappaNonPositive { kappa: 0.0 });
    }
    let plan = classify_sector(&dc.kappa, &z.theta, cfg)?;
    let j_max = match trunc {
        TruncationSpec::Fixed(j) => *j,
        TruncationSpec::Optimal(cap) => cap.saturating_sub(1),
    }
    .min(crate::coeffs::MAX_COEFFS);
    let coeffs = solve_coefficients(params, j_max)?;

    let mut value = HPComplex::zero(d);
    let mut est = HPReal::zero(50);
    let mut terms = 0usize;
    let mut peak = HPReal::zero(50);
    for t in &plan.terms {
        let (v, log) = match t {
            PlanTerm::Exp { n } => exp_expansion_E(params, &coeffs, &z.rotate_pi(2 * n), trunc)?,
            PlanTerm::Alg { half_turns } => {
                alg_expansion_H(params, &z.rotate_pi(*half_turns), trunc)?
            }
        };
        value = &value + &v;
        est = &est + &log.smallest_term;
        terms += log.chosen_index;
        for m in &log.term_magnitudes {
            peak = peak.max(m);
        }
    }
    // superasymptotic floor: dropped exponential branches and the O(1)
    // multiplier uncertainty of subdominant included ones sit at e^{-|Z|}
    // relative to the largest constituent, which the per-series smallest
    // terms alone can miss for kappa > 1
    let zmod = big_z(&dc, z, 50).r;
    let floor_scale = peak.max(&value.abs().with_digits(50));
    est = &est + &(&floor_scale * &zmod.exp().recip());
    // θ = 0 is a Stokes line for every branch-shifted constituent: the
    // one-sided plan carries a spurious imaginary part of the size of the
    // subdominant exponential. All parameters are real, so the symmetrised
    // (averaged) composition is the real part.
    if z.theta.is_zero() {
        est = &est + &value.im.abs().with_digits(50);
        value = HPComplex::from_real(value.re.clone());
    }
    Ok(EvalReport {
        value,
        terms_used: terms,
        peak_term_magnitude: peak,
        working_precision: d,
        est_truncation_error: est,
    })
}

/// Default |Z| above which the Mittag-Leffler wrapper switches from the
/// direct series to asymptotics.
pub const ML_ASYMPTOTIC_THRESHOLD: f64 = 15.0;

/// The Mittag-Leffler function 𝓔_{a,b}(z) = Σ z^n/Γ(an+b), as ₁Ψ₁ with
/// upper (1,1), lower (a,b). Dispatches on |Z| = |z|^{1/a} against
/// `threshold` (default `ML_ASYMPTOTIC_THRESHOLD`).
pub fn mittag_leffler(
    a: &HPReal,
    b: &HPReal,
    z: &RayPoint,
    target_digits: usize,
    threshold: Option<f64>,
) -> Result<EvalReport> {
    if !a.is_positive() {
        return Err(WrightError::InvalidParams("need a > 0".into()));
    }
    let params = crate::series::mittag_leffler_params(
        ParamValue::Approx(a.clone()),
        ParamValue::Approx(b.clone()),
    )?;
    let abs_z = z.r.to_f64().powf(1.0 / a.to_f64());
    if abs_z < threshold.unwrap_or(ML_ASYMPTOTIC_THRESHOLD) {
        crate::series::wright_eval(&params, z, target_digits)
    } else {
        let d = z.digits().max(target_digits + 20);
        asymptotic_eval(
            &params,
            &z.with_digits(d),
            &TruncationSpec::default(),
            &SectorConfig::default(),
        )
    }
}

/// Berry's error-function smoothing factor for the Mittag-Leffler Stokes
/// transition at θ = ±πa: 1/2 + (1/2)erf[((πa−|θ|)/a)·√(r/2)].
///
/// `r` is the modulus of the switching exponential's argument z^{1/a}, i.e.
/// |z|^{1/a}, which sets the transition width; measured multipliers confirm
/// the √(|z^{1/a}|/2) scaling (a naive √(|z|/2) is off by (1/a−1)·50% in
/// slope for a < 1).
pub fn erf_smoothing_factor(a: &HPReal, theta: &HPReal, r: &HPReal) -> HPReal {
    let d = a.digits().max(theta.digits()).max(r.digits());
    let half = HPReal::from_rational(&ratio(1, 2), d);
    let gap = &(&(&HPReal::pi(d) * a) - &theta.abs()) / a;
    let x = &gap * &(&r.with_digits(d) * &half).sqrt();
    &half + &(&half * &hp_erf(&x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::wright_eval;

    fn pv(n: i64, d: i64) -> ParamValue {
        ParamValue::exact(n, d)
    }

    fn f1_params() -> WrightParams {
        WrightParams::new(vec![(pv(1, 2), pv(1, 4))], vec![(pv(1, 1), pv(3, 4))]).unwrap()
    }

    fn f2_params() -> WrightParams {
        WrightParams::new(vec![(pv(2, 3), pv(1, 3))], vec![(pv(1, 3), pv(1, 4))]).unwrap()
    }

    fn f3_params() -> WrightParams {
        WrightParams::new(vec![], vec![(pv(1, 10), pv(1, 4)), (pv(1, 10), pv(3, 4))]).unwrap()
    }

    fn cplx(re: f64, im: f64) -> HPComplex {
        HPComplex::new(HPReal::from_f64(re, 50), HPReal::from_f64(im, 50))
    }

    fn rel_err_c(a: &HPComplex, b: &HPComplex) -> f64 {
        (&(a - b).abs() / &b.abs()).to_f64()
    }

    #[test]
    fn optimal_truncation_rules() {
        // smallest term wins
        let (s, n, small, log) =
            optimal_truncate(vec![cplx(1.0, 0.0), cplx(0.1, 0.0), cplx(0.01, 0.0), cplx(0.5, 0.0)], 10);
        assert_eq!(n, 3);
        assert!((s.re.to_f64() - 1.11).abs() < 1e-12);
        assert!((small.to_f64() - 0.01).abs() < 1e-12);
        assert!(!log.no_minimum);

        // an isolated dip between much larger neighbours does not attract
        // the cut; the estimate is the smallest regular term
        let dip = vec![
            cplx(1.0, 0.0),
            cplx(0.3, 0.0),
            cplx(1e-6, 0.0),
            cplx(0.2, 0.0),
            cplx(0.1, 0.0),
            cplx(0.4, 0.0),
        ];
        let (_, n, small, _) = optimal_truncate(dip, 10);
        assert_eq!(n, 5);
        assert!((small.to_f64() - 0.1).abs() < 1e-12);

        // strictly decreasing: budget exhausted, flagged
        let dec: Vec<_> = (0..20).map(|i| cplx(2f64.powi(-i), 0.0)).collect();
        let (_, n, _, log) = optimal_truncate(dec, 10);
        assert_eq!(n, 10);
        assert!(log.no_minimum);

        // zero tail means exact termination
        let (s, n, small, log) = optimal_truncate(
            vec![cplx(1.0, 0.0), cplx(0.0, 0.0), cplx(0.0, 0.0), cplx(0.0, 0.0)],
            10,
        );
        assert_eq!(n, 1);
        assert!((s.re.to_f64() - 1.0).abs() < 1e-12);
        assert!(small.is_zero());
        assert!(!log.no_minimum);

        // growth from the very first step: keep the leading term, flag it
        let (s, n, _, log) = optimal_truncate(vec![cplx(1.0, 0.0), cplx(3.0, 0.0)], 10);
        assert_eq!(n, 1);
        assert!((s.re.to_f64() - 1.0).abs() < 1e-12);
        assert!(log.divergent_from_start);
    }

    #[test]
    fn ml_exponential_expansion_closed_form() {
        // a=1/2, b=1: E(z) = 2 exp(z²), a single term since c_{j≥1} = 0
        let params = crate::series::mittag_leffler_params(pv(1, 2), pv(1, 1)).unwrap();
        let coeffs = solve_coefficients(&params, 6).unwrap();
        let z = RayPoint::from_f64(3.0, 0.0, 80);
        let (v, log) = exp_expansion_E(&params, &coeffs, &z, &TruncationSpec::Optimal(7)).unwrap();
        let want = &HPReal::from_u64(9, 80).exp() * &HPReal::from_u64(2, 80);
        assert!((&v.re - &want).abs().to_f64() / want.to_f64() < 1e-60);
        assert!(v.im.abs().to_f64() < 1e-50);
        assert_eq!(log.chosen_index, 1);
        assert!(log.smallest_term.is_zero());
    }

    #[test]
    fn branch_rotation_inside_big_z() {
        // a=2/3, b=1: E(z) = (3/2) exp(z^{3/2}); on the θ=2π branch the
        // power picks up e^{3πi} = −1
        let params = crate::series::mittag_leffler_params(pv(2, 3), pv(1, 1)).unwrap();
        let coeffs = solve_coefficients(&params, 4).unwrap();
        let x: f64 = 4.0;
        let z0 = RayPoint::from_f64(x, 0.0, 70);
        let z2 = RayPoint::new(
            HPReal::from_f64(x, 70),
            &HPReal::pi(70) * &HPReal::from_u64(2, 70),
        );
        let (v0, _) = exp_expansion_E(&params, &coeffs, &z0, &TruncationSpec::Optimal(5)).unwrap();
        let (v2, _) = exp_expansion_E(&params, &coeffs, &z2, &TruncationSpec::Optimal(5)).unwrap();
        let up = x.powf(1.5);
        assert!((v0.re.to_f64() - 1.5 * up.exp()).abs() / up.exp() < 1e-12);
        assert!((v2.re.to_f64() - 1.5 * (-up).exp()).abs() < 1e-12);
    }

    #[test]
    fn subdominant_branch_magnitudes() {
        // |E(ze^{−2πi})| for |z|=100 at a=1/4, b=3/4 with j ≤ 5
        let params = f1_params();
        let coeffs = solve_coefficients(&params, 5).unwrap();
        for (th_pi, want) in [(1.00, 6.283515e-7), (0.90, 8.190854e-9), (0.70, 1.546959e-11)] {
            let theta = &HPReal::pi(80) * &HPReal::from_f64(th_pi - 2.0, 80);
            let z = RayPoint::new(HPReal::from_u64(100, 80), theta);
            let (v, _) = exp_expansion_E(&params, &coeffs, &z, &TruncationSpec::Fixed(5)).unwrap();
            let got = v.abs().to_f64();
            assert!(
                (got - want).abs() / want < 1e-5,
                "theta/pi = {}: got {:e}, want {:e}",
                th_pi,
                got,
                want
            );
        }
    }

    #[test]
    fn ml_algebraic_expansion_closed_form() {
        // H(ze^{−πi}) = −Σ_{k≥1} z^{−k}/Γ(b−ak), a=1/2, b=1; terms with
        // Γ at a pole vanish
        let params = crate::series::mittag_leffler_params(pv(1, 2), pv(1, 1)).unwrap();
        // z = 10·e^{iπ/2}; the e^{−πi} rotation must be exact, not f64
        let z = RayPoint::new(
            HPReal::from_u64(10, 70),
            &HPReal::pi(70) / &HPReal::from_u64(2, 70),
        );
        let (v, _) = alg_expansion_H(&params, &z.rotate_pi(-1), &TruncationSpec::Fixed(8)).unwrap();
        let mut want = HPComplex::zero(70);
        for k in 1i64..=9 {
            let g = hp_recip_gamma_rational(&ratio(2 - k, 2), 70);
            let zk = ray_power(&z, &HPReal::from_i64(-k, 70));
            want = &want - &zk.scale(&g);
        }
        let re = rel_err_c(&v, &want);
        assert!(re < 1e-55, "rel err {:e}", re);
    }

    #[test]
    fn fast_and_generic_h_paths_agree() {
        // exact parameters take the stride chains; the same values as
        // approximate parameters take the per-term gamma path
        let cases: Vec<WrightParams> = vec![
            f1_params(),
            f2_params(),
            crate::series::mittag_leffler_params(pv(2, 3), pv(1, 1)).unwrap(),
            WrightParams::new(
                vec![(pv(1, 2), pv(1, 4)), (pv(1, 3), pv(2, 5))],
                vec![(pv(1, 1), pv(3, 4)), (pv(1, 5), pv(1, 2))],
            )
            .unwrap(),
        ];
        let approximate = |p: &WrightParams| {
            let cv = |v: &ParamValue| ParamValue::Approx(v.to_hp(140));
            WrightParams::new(
                p.upper.iter().map(|(x, y)| (cv(x), cv(y))).collect(),
                p.lower.iter().map(|(x, y)| (cv(x), cv(y))).collect(),
            )
            .unwrap()
        };
        for params in &cases {
            let appr = approximate(params);
            for (r, th) in [(30.0, 0.3), (5.0, -0.9)] {
                let z = RayPoint::from_f64(r, th * std::f64::consts::PI, 140);
                let spec = TruncationSpec::Fixed(25);
                // term counts can differ by the exact-zero terms that the
                // approximate path sees as near-pole residues ~10^{-140}
                let (fast, _) = alg_expansion_H(params, &z, &spec).unwrap();
                let (slow, _) = alg_expansion_H(&appr, &z, &spec).unwrap();
                let err = (&fast - &slow).abs().to_f64();
                let scale = slow.abs().to_f64().max(1e-300);
                assert!(err / scale < 1e-100, "r={} th={}: rel {:e}", r, th, err / scale);
            }
        }
    }

    #[test]
    fn empty_h_for_p_zero() {
        let (v, log) = alg_expansion_H(
            &f3_params(),
            &RayPoint::from_f64(20.0, 0.0, 60),
            &TruncationSpec::default(),
        )
        .unwrap();
        assert!(v.is_zero());
        assert_eq!(log.chosen_index, 0);
    }

    #[test]
    fn pole_collision_detected() {
        // upper sequences 1+k and 2+k' overlap from s=2 on
        let params =
            WrightParams::new(vec![(pv(1, 1), pv(1, 1)), (pv(1, 1), pv(2, 1))], vec![]).unwrap();
        let res = alg_expansion_H(
            &params,
            &RayPoint::from_f64(5.0, 0.0, 60),
            &TruncationSpec::default(),
        );
        match res {
            Err(WrightError::HigherOrderPole { m, k, r, k_prime }) => {
                assert_eq!((m, k, r, k_prime), (1, 1, 2, 0));
            }
            other => panic!("expected HigherOrderPole, got {:?}", other),
        }
    }

    #[test]
    fn third_series_vanishes_for_half_odd_difference() {
        let params = f3_params();
        let coeffs = solve_coefficients(&params, 5).unwrap();
        let z = RayPoint::from_f64(20.0, 1.0, 60);
        let v = third_exp_series(&params, &coeffs, &z, &TruncationSpec::default()).unwrap();
        assert!(v.is_zero());
    }

    #[test]
    fn third_series_subdominant_when_present() {
        // b1−b2 = 1/3: nonzero, but smaller than the second E branch
        let params = WrightParams::new(
            vec![],
            vec![(pv(1, 10), pv(7, 12)), (pv(1, 10), pv(1, 4))],
        )
        .unwrap();
        let coeffs = solve_coefficients(&params, 5).unwrap();
        // on the negative axis X is real and e^{−X} sits below both E branches
        let z = RayPoint::new(HPReal::from_u64(20, 80), HPReal::pi(80));
        let third = third_exp_series(&params, &coeffs, &z, &TruncationSpec::Optimal(6)).unwrap();
        assert!(!third.is_zero());
        let (e2, _) =
            exp_expansion_E(&params, &coeffs, &z.rotate_pi(-2), &TruncationSpec::Optimal(6))
                .unwrap();
        assert!(third.abs() < e2.abs());
    }

    #[test]
    fn sector_plans() {
        let cfg = SectorConfig::default();
        let pi = std::f64::consts::PI;
        // 1 < κ ≤ 2
        let plan = classify_sector(
            &HPReal::from_f64(1.5, 50),
            &HPReal::from_f64(0.9 * pi, 50),
            &cfg,
        )
        .unwrap();
        assert_eq!(
            plan.terms,
            vec![
                PlanTerm::Exp { n: 0 },
                PlanTerm::Exp { n: -1 },
                PlanTerm::Alg { half_turns: -1 }
            ]
        );
        // algebraic sector of κ = 2/3
        let plan = classify_sector(
            &HPReal::from_f64(2.0 / 3.0, 50),
            &HPReal::from_f64(0.75 * pi, 50),
            &cfg,
        )
        .unwrap();
        assert_eq!(plan.terms, vec![PlanTerm::Alg { half_turns: -1 }]);
        assert!(!plan.on_stokes_line);
        // on the Stokes line: flagged, policy-dependent
        let on_line = HPReal::from_f64(2.0 * pi / 3.0, 50);
        let plan = classify_sector(&HPReal::from_f64(2.0 / 3.0, 50), &on_line, &cfg).unwrap();
        assert!(plan.on_stokes_line);
        assert_eq!(plan.terms.len(), 2);
        let drop_cfg = SectorConfig {
            stokes_policy: StokesPolicy::DropAbove,
            ..SectorConfig::default()
        };
        let plan = classify_sector(&HPReal::from_f64(2.0 / 3.0, 50), &on_line, &drop_cfg).unwrap();
        assert_eq!(plan.terms, vec![PlanTerm::Alg { half_turns: -1 }]);
        // κ = 6: N = 2
        let plan = classify_sector(&HPReal::from_f64(6.0, 50), &HPReal::zero(50), &cfg).unwrap();
        let ns: Vec<i64> = plan
            .terms
            .iter()
            .filter_map(|t| match t {
                PlanTerm::Exp { n } => Some(*n),
                _ => None,
            })
            .collect();
        assert_eq!(ns.len(), 5);
        for n in [-2i64, -1, 0, 1, 2] {
            assert!(ns.contains(&n));
        }
        // κ = 1 heuristic flag, negative θ flips the shifts
        let plan = classify_sector(
            &HPReal::from_f64(1.0, 50),
            &HPReal::from_f64(-0.5 * pi, 50),
            &cfg,
        )
        .unwrap();
        assert!(plan.kappa_one_heuristic);
        assert!(plan.terms.contains(&PlanTerm::Exp { n: 1 }));
        assert!(plan.terms.contains(&PlanTerm::Alg { half_turns: 1 }));
    }

    #[test]
    fn asymptotics_match_direct_series() {
        let cfg = SectorConfig::default();
        let trunc = TruncationSpec::default();
        let cases: Vec<(WrightParams, f64, f64)> = vec![
            // ML a=5/4 on the positive axis
            (
                crate::series::mittag_leffler_params(pv(5, 4), pv(3, 4)).unwrap(),
                40.0,
                0.0,
            ),
            // F1 deep in the algebraic-dominant region
            (f1_params(), 100.0, std::f64::consts::PI),
            // F2 before the Stokes transition
            (f2_params(), 10.0, std::f64::consts::FRAC_PI_2),
            // F3 on the negative axis
            (f3_params(), 20.0, std::f64::consts::PI),
        ];
        for (params, r, th) in cases {
            let z = if th == std::f64::consts::PI {
                RayPoint::new(HPReal::from_f64(r, 120), HPReal::pi(120))
            } else {
                RayPoint::from_f64(r, th, 120)
            };
            let asym = asymptotic_eval(&params, &z, &trunc, &cfg).unwrap();
            let direct = wright_eval(&params, &z, 40).unwrap();
            let abs_err = (&asym.value - &direct.value).abs();
            let bound = &asym.est_truncation_error * &HPReal::from_u64(10, 50);
            assert!(
                abs_err.with_digits(50) < bound || abs_err.log10_abs_approx() < -35.0,
                "r={} th={}: err {:e} vs bound {:e}",
                r,
                th,
                abs_err.to_f64(),
                bound.to_f64()
            );
            let rel = (&abs_err / &direct.value.abs()).to_f64();
            assert!(rel < 1e-4, "r={} th={} rel={}", r, th, rel);
        }
    }

    #[test]
    fn conjugate_symmetry_and_reality() {
        let cfg = SectorConfig::default();
        let trunc = TruncationSpec::default();
        let params = f1_params();
        let up = asymptotic_eval(
            &params,
            &RayPoint::from_f64(100.0, 0.8 * std::f64::consts::PI, 100),
            &trunc,
            &cfg,
        )
        .unwrap();
        let dn = asymptotic_eval(
            &params,
            &RayPoint::from_f64(100.0, -0.8 * std::f64::consts::PI, 100),
            &trunc,
            &cfg,
        )
        .unwrap();
        assert!(rel_err_c(&up.value, &dn.value.conj()) < 1e-30);

        // the two E branches combine to a real value on the cut
        let cut = asymptotic_eval(
            &params,
            &RayPoint::new(HPReal::from_u64(100, 100), HPReal::pi(100)),
            &trunc,
            &cfg,
        )
        .unwrap();
        let ratio_im = (&cut.value.im.abs() / &cut.value.abs()).to_f64();
        let est_rel = (&cut.est_truncation_error / &cut.value.abs().with_digits(50)).to_f64();
        assert!(ratio_im < est_rel.max(1e-25), "im ratio {}", ratio_im);
    }

    #[test]
    fn mittag_leffler_wrapper() {
        // e at z = 1 (direct route)
        let one = HPReal::one(60);
        let rep = mittag_leffler(&one, &one, &RayPoint::from_f64(1.0, 0.0, 60), 40, None).unwrap();
        let e = HPReal::one(60).exp();
        assert!((&rep.value.re - &e).abs().to_f64() < 1e-37);

        // 𝓔_{2,1}(x²) = cosh x (direct route, |Z| = x)
        let x = HPReal::from_u64(5, 60);
        let rep = mittag_leffler(
            &HPReal::from_u64(2, 60),
            &one,
            &RayPoint::from_f64(25.0, 0.0, 60),
            40,
            None,
        )
        .unwrap();
        let cosh = &(&x.exp() + &(-&x).exp()) / &HPReal::from_u64(2, 60);
        assert!((&rep.value.re - &cosh).abs().to_f64() / cosh.to_f64() < 1e-37);

        // asymptotic route vs the erfc closed form:
        // 𝓔_{1/2,1}(x) = e^{x²}(1 + erf x)
        let half = HPReal::from_f64(0.5, 80);
        let rep = mittag_leffler(&half, &HPReal::one(80), &RayPoint::from_f64(20.0, 0.0, 80), 30, None)
            .unwrap();
        let want = &HPReal::from_u64(400, 80).exp()
            * &(&HPReal::one(80) + &hp_erf(&HPReal::from_u64(20, 80)));
        let rel = (&(&rep.value.re - &want).abs() / &want).to_f64();
        assert!(rel < 1e-20, "rel = {:e}", rel);
    }

    #[test]
    fn erf_smoothing_endpoints() {
        let a = HPReal::from_f64(2.0 / 3.0, 60);
        let r = HPReal::from_u64(1000, 60);
        // on the Stokes line: exactly 1/2
        let on = erf_smoothing_factor(&a, &(&HPReal::pi(60) * &a), &r);
        assert!((on.to_f64() - 0.5).abs() < 1e-40);
        // well inside the exponential sector: 1
        let deep = erf_smoothing_factor(&a, &HPReal::zero(60), &r);
        assert!((deep.to_f64() - 1.0).abs() < 1e-30);
        // well outside: 0
        let out = erf_smoothing_factor(&a, &HPReal::pi(60), &r);
        assert!(out.to_f64().abs() < 1e-30);
    }
}

//! Stride-recurrence fast path for one algebraic-expansion pole sequence
//! with exact rational parameters.
//!
//! With Q = lcm of the denominators of 1/α_m, α_r/α_m and β_r/α_m, the term
//! ratio t_{k+Q}/t_k collapses to z^{−u} times an exact rational in k
//! (u = Q/α_m): the Γ(s_k) quotient is a rising factorial, the remaining
//! gamma quotients falling factorials, and 1/k! contributes (k+1)…(k+Q).
//! The sequence is summed as Q interleaved multiplicative chains with a
//! per-term precision taper from an f64 prescan, the same scheme the direct
//! series uses. A chain whose lower gamma argument lands on a nonpositive
//! integer is zero from that point on (the arguments only move left), so
//! dead chains are dropped rather than resurrected.

use std::collections::HashMap;

use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::h_term_coeff;
use crate::error::Result;
use crate::hp::{ray_power, HPComplex, HPReal, RayPoint};
use crate::params::WrightParams;
use crate::rational::ratio;

const MAX_STRIDE: u64 = 48;
const MAX_TERMS: usize = 1_000_000;
const LN10: f64 = std::f64::consts::LN_10;

/// A linear function c·k + b of the term index, kept both exactly and as f64
/// for the magnitude prescan.
struct LinRat {
    c: BigRational,
    b: BigRational,
    cf: f64,
    bf: f64,
}

impl LinRat {
    fn new(c: BigRational, b: BigRational) -> Self {
        LinRat {
            cf: c.to_f64().unwrap(),
            bf: b.to_f64().unwrap(),
            c,
            b,
        }
    }

    fn at(&self, k: u64) -> BigRational {
        &self.c * ratio(k as i64, 1) + &self.b
    }

    fn at_f64(&self, k: f64) -> f64 {
        self.cf * k + self.bf
    }
}

struct FactorPlan {
    q: u64,
    u: u64,
    negate: bool,
    num: Vec<LinRat>,
    den: Vec<LinRat>,
}

impl FactorPlan {
    /// t_{k+Q}/t_k divided by z^{−u}; None when a denominator factor
    /// vanishes (a pole collision in the next block).
    fn factor(&self, k: u64) -> Option<BigRational> {
        let mut den = BigRational::one();
        for f in &self.den {
            let v = f.at(k);
            if v.is_zero() {
                return None;
            }
            den *= v;
        }
        let mut num = BigRational::one();
        for f in &self.num {
            num *= f.at(k);
        }
        let r = num / den;
        Some(if self.negate { -r } else { r })
    }

    fn ln_abs(&self, k: f64) -> f64 {
        let mut acc = 0.0;
        for f in &self.num {
            acc += f.at_f64(k).abs().ln();
        }
        for f in &self.den {
            acc -= f.at_f64(k).abs().ln();
        }
        acc
    }
}

fn build_plan(params: &WrightParams, m: usize) -> Option<FactorPlan> {
    let rat = |v: &crate::params::ParamValue| v.as_rational().cloned();
    let alpha_m = rat(&params.upper[m].0)?;
    let a_m = rat(&params.upper[m].1)?;
    let delta = alpha_m.recip();
    let s0 = &a_m * &delta;

    let mut q = delta.denom().clone();
    for (r, (al, _)) in params.upper.iter().enumerate() {
        if r == m {
            continue;
        }
        let step = rat(al)? * &delta;
        q = num_integer::lcm(q, step.denom().clone());
    }
    for (be, _) in &params.lower {
        let step = rat(be)? * &delta;
        q = num_integer::lcm(q, step.denom().clone());
    }
    let q = q.to_u64()?;
    if q > MAX_STRIDE {
        return None;
    }
    let qr = ratio(q as i64, 1);
    let u = (&delta * &qr).to_integer().to_u64()?;

    let mut num = Vec::new();
    let mut den = Vec::new();
    // Γ(s_k + u)/Γ(s_k): rising factorial
    for i in 0..u {
        num.push(LinRat::new(delta.clone(), &s0 + ratio(i as i64, 1)));
    }
    // 1/k!: (k+1)…(k+Q)
    for i in 1..=q {
        den.push(LinRat::new(BigRational::one(), ratio(i as i64, 1)));
    }
    // remaining upper gammas: falling factorials in the denominator
    for (r, (al, av)) in params.upper.iter().enumerate() {
        if r == m {
            continue;
        }
        let alr = rat(al)?;
        let avr = rat(av)?;
        let step = &alr * &delta;
        let v = (&step * &qr).to_integer().to_u64()?;
        let arg0 = &avr - &alr * &s0;
        for i in 1..=v {
            den.push(LinRat::new(-&step, &arg0 - ratio(i as i64, 1)));
        }
    }
    // lower reciprocal gammas: falling factorials in the numerator
    for (be, bv) in &params.lower {
        let ber = rat(be)?;
        let bvr = rat(bv)?;
        let step = &ber * &delta;
        let w = (&step * &qr).to_integer().to_u64()?;
        let arg0 = &bvr - &ber * &s0;
        for i in 1..=w {
            num.push(LinRat::new(-&step, &arg0 - ratio(i as i64, 1)));
        }
    }

    Some(FactorPlan {
        q,
        u,
        negate: q % 2 == 1,
        num,
        den,
    })
}

fn level(digits: usize, d: usize) -> usize {
    (((digits + 511) / 512) * 512).min(d).max(60)
}

pub(super) struct SeqTerms {
    params: WrightParams,
    m: usize,
    d: usize,
    plan: FactorPlan,
    seeds: Vec<HPComplex>,
    chains: Vec<Option<HPComplex>>,
    /// natural-log term magnitudes from the f64 prescan
    llog: Vec<f64>,
    target_ln: f64,
    c_full: HPComplex,
    c_cache: HashMap<usize, HPComplex>,
}

impl SeqTerms {
    /// None when the parameters are not exact rationals or the stride is
    /// impractically large (the caller then uses the per-term gamma path).
    pub(super) fn new(
        params: &WrightParams,
        m: usize,
        z: &RayPoint,
        d: usize,
        floor_log10: Option<f64>,
    ) -> Result<Option<SeqTerms>> {
        if !params.all_exact() {
            return Ok(None);
        }
        let plan = match build_plan(params, m) {
            Some(p) => p,
            None => return Ok(None),
        };
        let q = plan.q as usize;

        let (alpha_m, a_m) = &params.upper[m];
        let al = alpha_m.to_hp(d);
        let inv_al = al.recip();
        let prefactor = ray_power(z, &(-&(&a_m.to_hp(d) * &inv_al))).scale(&inv_al);
        let step = ray_power(z, &(-&inv_al));
        let mut seeds = Vec::with_capacity(q);
        let mut pow = HPComplex::from_real(HPReal::one(d));
        for k in 0..q {
            if k > 0 {
                pow = &pow * &step;
            }
            let c = h_term_coeff(params, m, k, d)?;
            seeds.push((&prefactor * &pow).scale(&c));
        }
        let chains: Vec<Option<HPComplex>> = seeds
            .iter()
            .map(|t| if t.is_zero() { None } else { Some(t.clone()) })
            .collect();

        // magnitude prescan
        let ln_c = -(plan.u as f64) * z.r.to_f64().ln();
        let floor_ln = floor_log10.map(|f| f * LN10);
        let mut llog: Vec<f64> = seeds
            .iter()
            .map(|t| {
                if t.is_zero() {
                    f64::NEG_INFINITY
                } else {
                    t.abs().log10_abs_approx() * LN10
                }
            })
            .collect();
        let mut global_min = llog
            .iter()
            .cloned()
            .filter(|v| v.is_finite())
            .fold(f64::INFINITY, f64::min);
        let mut stale_blocks = 0usize;
        loop {
            let len = llog.len();
            if len + q > MAX_TERMS {
                break;
            }
            let mut block_min = f64::INFINITY;
            let mut block_max = f64::NEG_INFINITY;
            for j in 0..q {
                let base = len - q + j;
                let v = if llog[base].is_finite() {
                    llog[base] + ln_c + plan.ln_abs(base as f64)
                } else {
                    f64::NEG_INFINITY
                };
                llog.push(v);
                if v.is_finite() {
                    block_min = block_min.min(v);
                    block_max = block_max.max(v);
                }
            }
            if block_max == f64::NEG_INFINITY {
                break; // every chain dead
            }
            if let Some(fl) = floor_ln {
                if block_max < fl - 5.0 {
                    break;
                }
            }
            if block_min < global_min {
                global_min = block_min;
                stale_blocks = 0;
            } else {
                stale_blocks += 1;
                // past the smallest term; keep a margin for the growth probe
                if stale_blocks >= 3 {
                    break;
                }
            }
        }
        let target_ln = floor_ln.unwrap_or(global_min.min(0.0));

        let c_full = ray_power(z, &HPReal::from_i64(-(plan.u as i64), d));
        Ok(Some(SeqTerms {
            params: params.clone(),
            m,
            d,
            plan,
            seeds,
            chains,
            llog,
            target_ln,
            c_full,
            c_cache: HashMap::new(),
        }))
    }

    fn sched(&self, k: usize) -> usize {
        if k >= self.llog.len() || !self.llog[k].is_finite() {
            return self.d;
        }
        let need = (self.llog[k] - self.target_ln) / LN10 + 40.0;
        level(need.max(60.0) as usize, self.d)
    }

    /// Terms in index order; called with k increasing by one.
    pub(super) fn next_term(&mut self, k: usize) -> Result<Option<HPComplex>> {
        let q = self.plan.q as usize;
        if k < q {
            return Ok(Some(self.seeds[k].clone()));
        }
        let j = k % q;
        let prev = match &self.chains[j] {
            Some(t) => t.clone(),
            None => return Ok(Some(HPComplex::zero(60))),
        };
        let f = match self.plan.factor((k - q) as u64) {
            Some(f) => f,
            None => {
                // pole collision in this block: the generic path raises the
                // diagnostic with the exact indices
                let c = h_term_coeff(&self.params, self.m, k, self.d)?;
                let _ = c;
                self.chains[j] = None;
                return Ok(Some(HPComplex::zero(60)));
            }
        };
        if f.is_zero() {
            self.chains[j] = None;
            return Ok(Some(HPComplex::zero(60)));
        }
        let dd = self.sched(k);
        let c = self
            .c_cache
            .entry(dd)
            .or_insert_with(|| self.c_full.with_digits(dd))
            .clone();
        let t = if prev.digits() > dd {
            prev.with_digits(dd)
        } else {
            prev
        };
        let new = (&t * &c).scale(&HPReal::from_rational(&f, dd));
        self.chains[j] = Some(new.clone());
        Ok(Some(new))
    }
}

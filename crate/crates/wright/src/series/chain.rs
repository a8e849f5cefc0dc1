//! Stride-recurrence fast path for exact rational parameters.
//!
//! With q = lcm of the α, β denominators, every gamma quotient
//! Γ(x+αq)/Γ(x) collapses into a rising factorial with integer step, so
//! t_{n+q}/t_n = z^q · (small exact rational in n). The series is summed as
//! q interleaved multiplicative chains, one full-precision complex multiply
//! per term, with the working precision tapering off once the term
//! magnitudes fall away from their peak.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use std::collections::HashMap;

use super::{cplx_exp2, eval_g, EvalReport, StopTracker, MAX_TERMS};
use crate::error::{Result, WrightError};
use crate::hp::{HPComplex, HPReal, RayPoint};
use crate::params::WrightParams;

/// Largest stride worth unrolling; beyond this the generic path is used.
const MAX_STRIDE: u64 = 48;

const LN10: f64 = std::f64::consts::LN_10;

/// One linear factor (A·n + B)/D of a collapsed gamma quotient.
struct LinFactor {
    a: BigInt,
    b: BigInt,
    af: f64,
    bf: f64,
}

struct ChainPlan {
    stride: u64,
    n0: u64,
    upper: Vec<LinFactor>,
    lower: Vec<LinFactor>,
    /// Π D over lower factors (goes in the numerator) over Π D upper.
    den_ratio: BigRational,
    ln_den_ratio: f64,
}

fn plan(params: &WrightParams) -> Option<ChainPlan> {
    let uppers: Vec<(BigRational, BigRational)> = params
        .upper
        .iter()
        .map(|(x, y)| Some((x.as_rational()?.clone(), y.as_rational()?.clone())))
        .collect::<Option<_>>()?;
    let lowers: Vec<(BigRational, BigRational)> = params
        .lower
        .iter()
        .map(|(x, y)| Some((x.as_rational()?.clone(), y.as_rational()?.clone())))
        .collect::<Option<_>>()?;

    let mut stride_bi = BigInt::one();
    for (al, _) in uppers.iter().chain(lowers.iter()) {
        stride_bi = stride_bi.lcm(al.denom());
    }
    let stride = stride_bi.to_u64()?;
    if stride > MAX_STRIDE {
        return None;
    }
    let stride_rat = BigRational::from_integer(BigInt::from(stride));

    let expand = |al: &BigRational, av: &BigRational| -> Vec<LinFactor> {
        let k = (al * &stride_rat).to_integer().to_u64().unwrap();
        (0..k)
            .map(|i| {
                // α·n + a + i = (A·n + B)/D with D = den(α)·den(a)
                let a = al.numer() * av.denom();
                let b = (av.numer() + BigInt::from(i) * av.denom()) * al.denom();
                LinFactor {
                    af: a.to_f64().unwrap(),
                    bf: b.to_f64().unwrap(),
                    a,
                    b,
                }
            })
            .collect()
    };

    let mut upper = Vec::new();
    let mut lower = Vec::new();
    let mut den_ratio = BigRational::one();
    for (al, av) in &uppers {
        upper.extend(expand(al, av));
        let k = (al * &stride_rat).to_integer().to_u64().unwrap();
        let d = al.denom() * av.denom();
        den_ratio /= BigRational::from_integer(d.pow(k as u32));
    }
    for (be, bv) in &lowers {
        lower.extend(expand(be, bv));
        let k = (be * &stride_rat).to_integer().to_u64().unwrap();
        let d = be.denom() * bv.denom();
        den_ratio *= BigRational::from_integer(d.pow(k as u32));
    }

    // first n with every lower gamma argument positive
    let mut n0 = 0u64;
    for (be, bv) in &lowers {
        if !bv.is_positive() {
            let bound = (-bv / be).floor().to_integer().to_u64()?;
            n0 = n0.max(bound + 1);
        }
    }

    Some(ChainPlan {
        ln_den_ratio: den_ratio.to_f64().unwrap().abs().ln(),
        stride,
        n0,
        upper,
        lower,
        den_ratio,
    })
}

impl ChainPlan {
    /// Exact ratio t_{n+q}/t_n divided by z^q.
    fn factor(&self, n: u64) -> BigRational {
        let nb = BigInt::from(n);
        let mut num = BigInt::one();
        for f in &self.upper {
            num *= &f.a * &nb + &f.b;
        }
        let mut den = BigInt::one();
        for f in &self.lower {
            den *= &f.a * &nb + &f.b;
        }
        for m in 1..=self.stride {
            den *= &nb + BigInt::from(m);
        }
        BigRational::new(num, den) * &self.den_ratio
    }

    fn ln_abs_factor(&self, n: u64) -> f64 {
        let nf = n as f64;
        let mut acc = self.ln_den_ratio;
        for f in &self.upper {
            acc += (f.af * nf + f.bf).abs().ln();
        }
        for f in &self.lower {
            acc -= (f.af * nf + f.bf).abs().ln();
        }
        for m in 1..=self.stride {
            acc -= (nf + m as f64).ln();
        }
        acc
    }
}

/// Rounds a digit request up to a cache-friendly level.
fn level(digits: usize, w: usize) -> usize {
    (((digits + 511) / 512) * 512).min(w).max(60)
}

pub(crate) fn eval_fast(
    params: &WrightParams,
    z: &RayPoint,
    target: usize,
    w: usize,
) -> Result<Option<EvalReport>> {
    let plan = match plan(params) {
        Some(p) => p,
        None => return Ok(None),
    };
    let q = plan.stride as usize;
    let n0 = plan.n0;

    let r = z.r.with_digits(w);
    let theta = z.theta.with_digits(w);
    let eith = HPComplex::new(theta.cos(), theta.sin());

    let mut s = HPComplex::zero(w);
    let mut stop = StopTracker::new(target);
    let mut peak = HPComplex::zero(w);
    let mut peak_exp2 = f64::NEG_INFINITY;
    let mut last = HPComplex::zero(w);
    let mut terms = 0usize;

    // terms before the chains start (lower gammas at or left of a pole)
    let mut rn_fact = HPReal::one(w); // r^n / n!
    for n in 0..n0 {
        let g = eval_g(params, n, w)?;
        let term = eith.powi(n).scale(&(&g * &rn_fact));
        s = &s + &term;
        terms += 1;
        let te = cplx_exp2(&term);
        if te > peak_exp2 {
            peak_exp2 = te;
            peak = term.clone();
        }
        stop.observe(te, cplx_exp2(&s));
        rn_fact = &(&rn_fact * &r) / &HPReal::from_u64(n + 1, w);
    }

    // chain seeds t_{n0+j}
    let mut chains: Vec<HPComplex> = Vec::with_capacity(q);
    {
        let mut rnf = rn_fact.clone();
        for j in 0..q as u64 {
            let n = n0 + j;
            let g = eval_g(params, n, w)?;
            chains.push(eith.powi(n).scale(&(&g * &rnf)));
            rnf = &(&rnf * &r) / &HPReal::from_u64(n + 1, w);
        }
    }

    // f64 prescan of the term magnitudes, from the seed exponents
    let ln_rq = z.r.to_f64().ln() * q as f64;
    let mut llog: Vec<f64> = chains
        .iter()
        .map(|t| cplx_exp2(t) * std::f64::consts::LN_2)
        .collect();
    let mut peak_llog = llog.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let cut_below = |peak: f64, v: f64| v < peak - (w as f64 + 30.0) * LN10;
    loop {
        let m = llog.len();
        if m + q > MAX_TERMS {
            return Err(WrightError::NoConvergence(MAX_TERMS));
        }
        let mut block_max = f64::NEG_INFINITY;
        for j in 0..q {
            let base = m - q + j; // previous block entry for this chain
            let n = n0 + base as u64;
            let v = llog[base] + ln_rq + plan.ln_abs_factor(n);
            llog.push(v);
            block_max = block_max.max(v);
        }
        peak_llog = peak_llog.max(block_max);
        if cut_below(peak_llog, block_max) {
            break;
        }
    }
    // suffix max and per-term digit schedule
    let mut smax = llog.clone();
    for i in (0..smax.len().saturating_sub(1)).rev() {
        smax[i] = smax[i].max(smax[i + 1]);
    }
    let peak_idx = llog
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
        .map(|(i, _)| i)
        .unwrap_or(0);
    let floor_ln = peak_llog - w as f64 * LN10;
    let sched = |m: usize| -> usize {
        if m <= peak_idx || m >= smax.len() {
            return if m >= smax.len() { level(60, w) } else { w };
        }
        let need = (smax[m] - floor_ln) / LN10 + 40.0;
        level(need.max(60.0) as usize, w)
    };

    // z^q at full precision plus truncated copies per digit level
    let c_full = eith.powi(plan.stride).scale(&r.powi(plan.stride));
    let mut c_cache: HashMap<usize, HPComplex> = HashMap::new();

    let total = llog.len();
    let mut k = 0usize;
    'outer: loop {
        for j in 0..q {
            let m = k * q + j;
            if m >= total {
                break 'outer;
            }
            let term = &chains[j];
            s = &s + term;
            terms += 1;
            let te = cplx_exp2(term);
            if te > peak_exp2 {
                peak_exp2 = te;
                peak = term.clone();
            }
            last = term.clone();
            if stop.observe(te, cplx_exp2(&s)) && j == q - 1 {
                break 'outer;
            }
        }
        if (k + 1) * q >= total {
            break;
        }
        for j in 0..q {
            let m = k * q + j;
            let n = n0 + m as u64;
            let d = sched(m + q);
            let f = plan.factor(n);
            let fh = HPReal::from_rational(&f, d);
            let cl = c_cache
                .entry(d)
                .or_insert_with(|| c_full.with_digits(d))
                .clone();
            let t = if chains[j].digits() > d {
                chains[j].with_digits(d)
            } else {
                chains[j].clone()
            };
            chains[j] = (&t * &cl).scale(&fh);
        }
        k += 1;
    }

    let est = last.abs().with_digits(50);
    Ok(Some(EvalReport {
        value: s,
        terms_used: terms,
        peak_term_magnitude: peak.abs().with_digits(50),
        working_precision: w,
        est_truncation_error: &est * &HPReal::from_u64(4, 50),
    }))
}

//! Expansion coefficients c_j = A_j/A_0 of the exponential asymptotic series.
//!
//! The inverse factorial expansion
//!
//!   g(s)·Γ(κs+ϑ′)/Γ(1+s) = κ·A₀·(hκ^κ)^s · Σ_j c_j/(κs+ϑ′)_j
//!
//! is solved for the c_j by formal series algebra in x = 1/(κs). Splitting
//! every gamma factor as Γ(αs+a) = (2π)^½ e^{−αs}(αs)^{αs+a−½} e(αs;a)
//! Γ*(αs+a), the left-hand side collapses to κA₀(hκ^κ)^s·R(s)·Υ(s), where R
//! collects the elementary factors e(αs;a) = exp[(αs+a−½)log(1+a/(αs))−a] and
//! Υ the scaled gamma functions Γ*. Both expand in powers of 1/s with exact
//! rational coefficients, so the product C(x) = R·Υ is computed exactly and
//! the c_j follow from a triangular solve against the shifted-factorial
//! expansions 1/(κs+ϑ′)_j = x^j·Π_{i<j}(1+(ϑ′+i)x)^{−1}.
//!
//! All parameters rational gives exact rational c_j; otherwise the same
//! algebra runs over high-precision reals.

pub mod fps;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::{Mutex, OnceLock};

use crate::error::{Result, WrightError};
use crate::hp::HPReal;
use crate::params::{derive_constants, ParamValue, WrightParams};
use crate::rational::ratio;

pub use fps::{Coeff, RationalSeries, Series};

/// Most coefficients computable in one request.
pub const MAX_COEFFS: usize = 100;

/// Stirling coefficients γ_0..γ_{n−1} of Γ*(z) ~ Σ (−1)^k γ_k z^{−k}.
///
/// Derived from log Γ*(z) = Σ_{m≥1} B_{2m}/(2m(2m−1)) z^{1−2m} by
/// exponentiating the series, so the values are independent of any listing.
pub fn stirling_coeffs(n: usize) -> Vec<BigRational> {
    let m = n.max(1);
    let mut p = RationalSeries::one_rat(m);
    p.coeffs[0] = BigRational::from_integer(0.into());
    let mut mm = 1usize;
    while 2 * mm - 1 < m {
        let two_m = 2 * mm;
        p.coeffs[two_m - 1] =
            crate::rational::bernoulli(two_m) / ratio((two_m * (two_m - 1)) as i64, 1);
        mm += 1;
    }
    let e = p.exp();
    (0..n)
        .map(|k| if k % 2 == 0 { e.get(k) } else { -e.get(k) })
        .collect()
}

fn fact_rat(n: usize) -> BigRational {
    let mut acc = BigInt::one();
    for i in 2..=n {
        acc *= BigInt::from(i);
    }
    BigRational::from_integer(acc)
}

/// Generalised Bernoulli polynomial B_k^{(σ)}(x), defined by
/// (t/(e^t−1))^σ e^{xt} = Σ B_k^{(σ)}(x) t^k/k!. Only σ ≤ 0 is needed here,
/// where the generating function is the entire series ((e^t−1)/t)^{−σ}e^{xt}.
pub fn gen_bernoulli(k: usize, sigma: i64, x: &BigRational) -> Result<BigRational> {
    if sigma > 0 {
        return Err(WrightError::UnsupportedSigma(sigma));
    }
    let n = (-sigma) as usize;
    let m = k + 1;
    let base = Series::from_coeffs(
        (0..m)
            .map(|i| BigRational::one() / fact_rat(i + 1))
            .collect(),
    );
    let mut prod = RationalSeries::one_rat(m);
    for _ in 0..n {
        prod = prod.mul(&base);
    }
    let mut xp = BigRational::one();
    let exp_x = Series::from_coeffs(
        (0..m)
            .map(|i| {
                if i > 0 {
                    xp *= x;
                }
                &xp / fact_rat(i)
            })
            .collect(),
    );
    Ok(prod.mul(&exp_x).get(k) * fact_rat(k))
}

/// e(αs;a) expanded in t = 1/s to order m. The exponent
/// (αs+a−½)log(1+a/(αs)) − a has an exactly vanishing constant term.
fn e_factor_t<K: Coeff>(alpha: &K, a: &K, m: usize) -> Series<K> {
    if a.c_is_zero() {
        return Series::one(alpha, m);
    }
    let w = a.c_div(alpha);
    // l_k = (−1)^{k+1} w^k / k, the log series
    let mut l = vec![alpha.c_from_i64(0)];
    let mut wp = alpha.c_from_i64(1);
    for k in 1..=m {
        wp = wp.c_mul(&w);
        let term = wp.c_div(&alpha.c_from_i64(k as i64));
        l.push(if k % 2 == 1 { term } else { term.c_neg() });
    }
    let coef = a.c_sub(&alpha.c_from_ratio(&ratio(1, 2)));
    let mut e = vec![alpha.c_from_i64(0); m];
    for k in 1..m {
        e[k] = alpha.c_mul(&l[k + 1]).c_add(&coef.c_mul(&l[k]));
    }
    Series::from_coeffs(e).exp()
}

/// Γ*(αs+a) expanded in t = 1/s to order m, via (αs+a)^{−k} =
/// (t/α)^k (1+(a/α)t)^{−k}.
fn gamma_star_t<K: Coeff>(alpha: &K, a: &K, m: usize, gammas: &[BigRational]) -> Series<K> {
    let w = a.c_div(alpha);
    let inv_alpha = alpha.c_from_i64(1).c_div(alpha);
    let u = Series::one(alpha, m).div_linear(&w);
    let mut pow = Series::one(alpha, m);
    let mut acc = Series::zero(alpha, m);
    for (k, gk) in gammas.iter().take(m).enumerate() {
        let g = alpha.c_from_ratio(gk);
        let g = if k % 2 == 0 { g } else { g.c_neg() };
        acc = acc.add(&pow.scale(&g));
        if k + 1 < m {
            pow = pow.mul(&u).shift_up().scale(&inv_alpha);
        }
    }
    acc
}

/// R(s)·Υ(s) in t = 1/s to order m.
fn product_t<K: Coeff>(
    upper: &[(K, K)],
    lower: &[(K, K)],
    kappa: &K,
    theta_prime: &K,
    m: usize,
    gammas: &[BigRational],
) -> Series<K> {
    let one_k = kappa.c_from_i64(1);
    let mut prod = e_factor_t(kappa, theta_prime, m);
    prod = prod.mul(&gamma_star_t(kappa, theta_prime, m, gammas));
    prod = prod.mul(&e_factor_t(&one_k, &one_k, m).recip());
    prod = prod.mul(&gamma_star_t(&one_k, &one_k, m, gammas).recip());
    for (al, av) in upper {
        prod = prod.mul(&e_factor_t(al, av, m));
        prod = prod.mul(&gamma_star_t(al, av, m, gammas));
    }
    for (be, bv) in lower {
        prod = prod.mul(&e_factor_t(be, bv, m).recip());
        prod = prod.mul(&gamma_star_t(be, bv, m, gammas).recip());
    }
    prod
}

/// e(αs;a) as a series in x = 1/(κs), truncated at order m.
pub fn e_factor_series(
    alpha: &BigRational,
    a: &BigRational,
    kappa: &BigRational,
    m: usize,
) -> RationalSeries {
    e_factor_t(alpha, a, m).rescale_var(kappa)
}

/// Γ*(αs+a) as a series in x = 1/(κs), truncated at order m.
pub fn gamma_star_series(
    alpha: &BigRational,
    a: &BigRational,
    kappa: &BigRational,
    m: usize,
) -> RationalSeries {
    gamma_star_t(alpha, a, m, &stirling_coeffs(m)).rescale_var(kappa)
}

fn exact_pairs(pairs: &[(ParamValue, ParamValue)]) -> Option<Vec<(BigRational, BigRational)>> {
    pairs
        .iter()
        .map(|(x, y)| Some((x.as_rational()?.clone(), y.as_rational()?.clone())))
        .collect()
}

/// C(x) = R(s)Υ(s) = 1 + Σ C_j x^j with x = 1/(κs), exact parameters only.
pub fn product_series_c(params: &WrightParams, m: usize) -> Result<RationalSeries> {
    params.validate()?;
    if !params.all_exact() {
        return Err(WrightError::InvalidParams(
            "exact product series needs rational parameters".into(),
        ));
    }
    let dc = derive_constants(params, 50)?;
    if dc.kappa_zero {
        return Err(WrightError::InvalidParams(
            "kappa = 0: no exponential expansion".into(),
        ));
    }
    let kappa = dc.kappa_exact.unwrap();
    let tp = dc.theta_prime_exact.unwrap();
    let upper = exact_pairs(&params.upper).unwrap();
    let lower = exact_pairs(&params.lower).unwrap();
    let gammas = stirling_coeffs(m);
    Ok(product_t(&upper, &lower, &kappa, &tp, m, &gammas).rescale_var(&kappa))
}

/// Triangular solve of C(x) = Σ_j c_j·x^j·Π_{i<j}(1+(ϑ′+i)x)^{−1}.
fn solve_t<K: Coeff>(cser_x: &Series<K>, theta_prime: &K, j_max: usize) -> Vec<K> {
    let proto = cser_x.proto().clone();
    let m = j_max + 1;
    let mut qrows: Vec<Series<K>> = Vec::with_capacity(m);
    qrows.push(Series::one(&proto, m));
    for j in 1..=j_max {
        let cj = theta_prime.c_add(&proto.c_from_i64((j - 1) as i64));
        let next = qrows[j - 1].div_linear(&cj);
        qrows.push(next);
    }
    let mut c: Vec<K> = vec![proto.c_from_i64(1)];
    for mm in 1..=j_max {
        let mut v = cser_x.get(mm);
        for j in 1..mm {
            v = v.c_sub(&c[j].c_mul(&qrows[j].get(mm - j)));
        }
        c.push(v);
    }
    c
}

/// The solved coefficients c_0..c_J together with the amplitude A₀.
#[derive(Clone, Debug)]
pub struct CoefficientSet {
    /// Present when all parameters are rational.
    pub c_exact: Option<Vec<BigRational>>,
    pub c_real: Vec<HPReal>,
    pub a0: HPReal,
    pub exact: bool,
    pub params_key: String,
}

impl CoefficientSet {
    pub fn j_max(&self) -> usize {
        self.c_real.len() - 1
    }

    /// c_j at the requested precision (limited by the stored precision when
    /// the set is inexact).
    pub fn c_hp(&self, j: usize, digits: usize) -> HPReal {
        match &self.c_exact {
            Some(v) => HPReal::from_rational(&v[j], digits),
            None => self.c_real[j].with_digits(digits),
        }
    }
}

fn push_key(s: &mut String, pv: &ParamValue) {
    match pv.as_rational() {
        Some(r) => write!(s, "{}/{}", r.numer(), r.denom()).unwrap(),
        None => write!(s, "~{:016x}", pv.to_f64().to_bits()).unwrap(),
    }
}

fn params_key(params: &WrightParams) -> String {
    let mut s = String::new();
    for (x, y) in &params.upper {
        s.push_str("u:");
        push_key(&mut s, x);
        s.push(',');
        push_key(&mut s, y);
        s.push(';');
    }
    for (x, y) in &params.lower {
        s.push_str("l:");
        push_key(&mut s, x);
        s.push(',');
        push_key(&mut s, y);
        s.push(';');
    }
    s
}

fn cache() -> &'static Mutex<HashMap<String, CoefficientSet>> {
    static CACHE: OnceLock<Mutex<HashMap<String, CoefficientSet>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Computes c_0..c_{j_max} and A₀ for a parameter set, with caching.
///
/// Rational parameters give exact coefficients; otherwise the series algebra
/// runs over reals at 50 + 10·j_max digits.
pub fn solve_coefficients(params: &WrightParams, j_max: usize) -> Result<CoefficientSet> {
    if j_max > MAX_COEFFS {
        return Err(WrightError::InvalidParams(format!(
            "requested {} coefficients, maximum is {}",
            j_max, MAX_COEFFS
        )));
    }
    params.validate()?;
    let key = format!("{}J{}", params_key(params), j_max);
    if let Some(hit) = cache().lock().unwrap().get(&key) {
        return Ok(hit.clone());
    }

    let digits = 50 + 10 * j_max;
    let dc = derive_constants(params, digits)?;
    if dc.kappa_zero {
        return Err(WrightError::InvalidParams(
            "kappa = 0: no exponential expansion".into(),
        ));
    }
    let m = j_max + 1;
    let gammas = stirling_coeffs(m);

    let set = if params.all_exact() {
        let kappa = dc.kappa_exact.unwrap();
        let tp = dc.theta_prime_exact.unwrap();
        let upper = exact_pairs(&params.upper).unwrap();
        let lower = exact_pairs(&params.lower).unwrap();
        let cser = product_t(&upper, &lower, &kappa, &tp, m, &gammas).rescale_var(&kappa);
        let c = solve_t(&cser, &tp, j_max);
        CoefficientSet {
            c_real: c.iter().map(|r| HPReal::from_rational(r, digits)).collect(),
            c_exact: Some(c),
            a0: dc.a0,
            exact: true,
            params_key: key.clone(),
        }
    } else {
        let to_hp = |pairs: &[(ParamValue, ParamValue)]| -> Vec<(HPReal, HPReal)> {
            pairs
                .iter()
                .map(|(x, y)| (x.to_hp(digits), y.to_hp(digits)))
                .collect()
        };
        let upper = to_hp(&params.upper);
        let lower = to_hp(&params.lower);
        let cser = product_t(&upper, &lower, &dc.kappa, &dc.theta_prime, m, &gammas)
            .rescale_var(&dc.kappa);
        let c = solve_t(&cser, &dc.theta_prime, j_max);
        CoefficientSet {
            c_exact: None,
            c_real: c,
            a0: dc.a0,
            exact: false,
            params_key: key.clone(),
        }
    };

    cache().lock().unwrap().insert(key, set.clone());
    Ok(set)
}

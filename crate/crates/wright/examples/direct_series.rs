//! Direct Taylor-series evaluation of pΨq(z) = Σ g(n) z^n / n! at chosen
//! precision, with the convergence report the evaluator returns.
//!
//! Run: cargo run -p wright --example direct_series

use wright::params::{ParamValue, WrightParams};
use wright::series::{mittag_leffler_params, wright_eval};
use wright::RayPoint;

fn main() {
    let pv = |n: i64, d: i64| ParamValue::exact(n, d);

    // E_{1,1}(1) = e, as a sanity anchor
    let ml = mittag_leffler_params(pv(1, 1), pv(1, 1)).unwrap();
    let rep = wright_eval(&ml, &RayPoint::from_f64(1.0, 0.0, 50), 40).unwrap();
    println!("E_1,1(1)  = {}", rep.value.re.to_decimal_string(40));
    println!("            ({} terms, {} working digits)", rep.terms_used, rep.working_precision);

    // a 1Psi1 with fractional parameters: upper (1/2, 1/4), lower (1, 3/4)
    let params = WrightParams::new(vec![(pv(1, 2), pv(1, 4))], vec![(pv(1, 1), pv(3, 4))]).unwrap();
    for (r, tpi) in [(5.0, 0.0), (5.0, 0.5), (100.0, 1.0)] {
        let theta = tpi * std::f64::consts::PI;
        let rep = wright_eval(&params, &RayPoint::from_f64(r, theta, 40), 30).unwrap();
        println!(
            "psi({:>5.1} e^({:.2} pi i)) = {} + {} i",
            r,
            tpi,
            rep.value.re.to_decimal_string(25),
            rep.value.im.to_decimal_string(25)
        );
        println!(
            "            terms = {}, peak term ~ {}, est err ~ {}",
            rep.terms_used,
            rep.peak_term_magnitude.to_decimal_string(3),
            rep.est_truncation_error.to_decimal_string(3)
        );
    }
}

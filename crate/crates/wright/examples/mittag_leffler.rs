//! The Mittag-Leffler function E_{a,b}(z) as a 1Psi1 special case: series
//! vs asymptotics switchover, the duplication identity, and real-axis
//! behaviour for 1 < a < 2 where two exponential branches conspire to give
//! a real oscillatory result on the negative axis.
//!
//! Run: cargo run -p wright --example mittag_leffler

use wright::expansions::mittag_leffler;
use wright::series::{mittag_leffler_params, wright_eval};
use wright::params::ParamValue;
use wright::{HPReal, RayPoint};

fn main() {
    let d = 60;
    let a = HPReal::from_f64(0.75, d);
    let b = HPReal::one(d);

    // duplication: E_{a,b}(-x) = 2 E_{2a,b}(x^2) - E_{a,b}(x)
    let x = 5.0;
    let pi = std::f64::consts::PI;
    let lhs = mittag_leffler(&a, &b, &RayPoint::from_f64(x, pi, d), 45, None).unwrap();
    let e2 = mittag_leffler(
        &(&a + &a),
        &b,
        &RayPoint::from_f64(x * x, 0.0, d),
        45,
        None,
    )
    .unwrap();
    let e1 = mittag_leffler(&a, &b, &RayPoint::from_f64(x, 0.0, d), 45, None).unwrap();
    let rhs = &(&e2.value + &e2.value) - &e1.value;
    println!("E_3/4,1(-5)          = {}", lhs.value.re.to_decimal_string(30));
    println!("2 E_3/2,1(25) - E(5) = {}", rhs.re.to_decimal_string(30));

    // large |z|: the evaluator switches to asymptotics on its own
    let big = mittag_leffler(&a, &b, &RayPoint::from_f64(300.0, 0.0, d), 30, None).unwrap();
    println!(
        "\nE_3/4,1(300) = {} ({} terms used)",
        big.value.re.to_decimal_string(20),
        big.terms_used
    );

    // negative axis with a = 3/2: damped oscillation, imaginary part at the
    // rounding floor even though each exponential branch is complex
    let ml32 = mittag_leffler_params(ParamValue::exact(3, 2), ParamValue::exact(1, 1)).unwrap();
    println!("\nE_3/2,1(-x):");
    for x in [5.0, 10.0, 20.0, 40.0] {
        let rep = wright_eval(&ml32, &RayPoint::from_f64(x, pi, d), 40).unwrap();
        println!(
            "  x = {:>4}: {:+.12e}  (|Im| = {:.1e})",
            x,
            rep.value.re.to_f64(),
            rep.value.im.to_f64().abs()
        );
    }
}

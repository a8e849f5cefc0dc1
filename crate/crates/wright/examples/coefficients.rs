//! Exact rational coefficients c_j of the exponential expansion
//! E(z) = A0 Z^theta e^Z (1 + c_1/Z + c_2/Z^2 + ...), solved from the
//! inverse-factorial expansion of the parameter quotient g(s).
//!
//! With rational parameters everything stays exact; c_1 also has a short
//! closed form which the solver's output is checked against in the tests.
//!
//! Run: cargo run -p wright --example coefficients

use wright::coeffs::{solve_coefficients, stirling_coeffs};
use wright::params::{ParamValue, WrightParams};

fn main() {
    let pv = |n: i64, d: i64| ParamValue::exact(n, d);

    // the Stirling gamma coefficients the solver is built on
    println!("Stirling coefficients gamma_0..gamma_4:");
    for (k, g) in stirling_coeffs(5).iter().enumerate() {
        println!("  gamma_{} = {}", k, g);
    }

    // upper (1/2, 1/4), lower (1, 3/4): kappa = 3/2
    let params = WrightParams::new(vec![(pv(1, 2), pv(1, 4))], vec![(pv(1, 1), pv(3, 4))]).unwrap();
    let set = solve_coefficients(&params, 10).unwrap();
    println!("\nc_1..c_10 for alpha=(1/2), a=(1/4), beta=(1), b=(3/4):");
    let cs = set.c_exact.as_ref().unwrap();
    for (j, c) in cs.iter().enumerate().skip(1) {
        println!("  c_{:<2} = {}", j, c);
    }
    println!("\nA0 = {}", set.a0.to_decimal_string(30));
}

//! Berry smoothing of the Stokes jump, measured. Across the Stokes line
//! the subdominant exponential does not appear abruptly: its multiplier
//! follows an error function whose width shrinks like |Z|^(-1/2), with
//! Z = z^(1/a) the argument of the switching exponential.
//!
//! Here E_{2/3,1} is evaluated on |z| = 100 (so |Z| = 1000), the algebraic
//! expansion is subtracted at its optimal truncation (~= the superasymptotic
//! floor e^{-|Z|}), and the leftover is divided by the leading exponential
//! term. The measured multiplier lands on the predicted erf curve to about
//! |Z|^(-1/2).
//!
//! Run: cargo run -p wright --example stokes_smoothing

use wright::expansions::erf_smoothing_factor;
use wright::presets::ml_smoothing_config;
use wright::stokes::run_scan;
use wright::HPReal;

fn main() {
    let cfg = ml_smoothing_config();
    let a = HPReal::from_f64(2.0 / 3.0, 60);
    // |Z| = |z|^{1/a} = 100^{3/2}
    let big_r = HPReal::from_u64(1000, 60);

    println!("theta/pi   measured Re S   erf prediction   diff");
    let rows = run_scan(&cfg).unwrap();
    for row in &rows {
        let tpi = row.theta_over_pi.to_f64();
        let theta = &HPReal::pi(60) * &row.theta_over_pi.with_digits(60);
        let pred = erf_smoothing_factor(&a, &theta, &big_r).to_f64();
        println!(
            "  {:.2}     {:+.6}       {:.6}         {:+.1e}",
            tpi,
            row.s_re.to_f64(),
            pred,
            row.s_re.to_f64() - pred
        );
    }
}

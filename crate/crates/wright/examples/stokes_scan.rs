//! Measuring a Stokes multiplier: subtract the algebraic expansion from the
//! exact value along a theta sweep and divide the residual by the leading
//! exponential term. Re S walks from 1 to 0 as the ray crosses the Stokes
//! line at theta = pi*kappa.
//!
//! Run: cargo run -p wright --example stokes_scan

use wright::params::derive_constants;
use wright::presets::table3_config;
use wright::stokes::{run_scan, scan_csv, stokes_line_location, StokesLineKind};

fn main() {
    let cfg = table3_config();
    let params = cfg.family.params().unwrap();
    let dc = derive_constants(&params, 50).unwrap();
    let line = stokes_line_location(StokesLineKind::EvsH, &dc.kappa).unwrap();
    println!(
        "kappa = {:.4}, Stokes line at theta = {:.4} pi",
        dc.kappa.to_f64(),
        line.to_f64() / std::f64::consts::PI
    );
    println!("|z| = {}, oracle digits = {}\n", cfg.modulus.to_f64(), cfg.target_digits);

    let rows = run_scan(&cfg).unwrap();
    print!("{}", scan_csv(&rows));
}

//! How the asymptotic evaluator composes expansions in each sector of the
//! z-plane, and how well the composition tracks the direct series as |z|
//! grows.
//!
//! kappa = 1 + sum(beta) - sum(alpha) controls the picture:
//!   0 < kappa < 1 : one exponential expansion plus the algebraic one,
//!                   exponential dropped beyond |arg z| = pi*kappa
//!   1 <= kappa <= 2: two exponential branches cover the whole plane
//!   kappa > 2     : more branches, no algebraic expansion needed
//!
//! Run: cargo run -p wright --example sector_plans

use wright::expansions::{asymptotic_eval, classify_sector, SectorConfig, TruncationSpec};
use wright::params::derive_constants;
use wright::series::wright_eval;
use wright::stokes::Family;
use wright::{HPReal, RayPoint};

fn main() {
    let cfg = SectorConfig::default();
    for fam in [Family::F2, Family::F1, Family::F3] {
        let params = fam.params().unwrap();
        let dc = derive_constants(&params, 50).unwrap();
        println!("{:?}: kappa = {:.4}", fam, dc.kappa.to_f64());
        for tpi in [0.0, 0.5, 0.9] {
            let theta = &HPReal::pi(50) * &HPReal::from_f64(tpi, 50);
            let plan = classify_sector(&dc.kappa, &theta, &cfg).unwrap();
            println!("  theta = {:.1} pi : {}", tpi, plan);
        }

        // relative error of the composed asymptotics against the series
        print!("  rel err at |z| = 20/40/80 on arg z = pi/2:");
        for r in [20.0, 40.0, 80.0] {
            let z = RayPoint::from_f64(r, 0.5 * std::f64::consts::PI, 60);
            let asym = asymptotic_eval(&params, &z, &TruncationSpec::default(), &cfg).unwrap();
            let exact = wright_eval(&params, &z, 50).unwrap();
            let diff = &asym.value - &exact.value;
            let rel = diff.abs().to_f64() / exact.value.abs().to_f64();
            print!("  {:.1e}", rel);
        }
        println!();
    }
}

//! Smallest evolution time reaching a target fidelity as the overlap shrinks.
//!
//! `cargo run --release --example constant_time -- 0.99`

use adialab::dynamics::{find_constant_time, ConstantTime, ConstantTimeOptions};
use adialab::{Overlap, PathModel};

fn main() -> adialab::Result<()> {
    let target: f64 = std::env::args().nth(1).map_or(Ok(0.99), |s| s.parse()).expect("target");
    let opts = ConstantTimeOptions::default();
    println!("target fidelity {target}");
    for (model, mags) in [
        (PathModel::Driving, &[0.0, 0.01, 0.1, 0.2][..]),
        (PathModel::Linear, &[0.2, 0.1, 0.05][..]),
    ] {
        for &a in mags {
            match find_constant_time(&model, &Overlap::real(a)?, target, &opts)? {
                ConstantTime::Reached { t_star, fidelity } => {
                    println!("  {:<8} a = {a:<5} T* = {t_star:>9.3} (fidelity {fidelity:.5})", model.name())
                }
                ConstantTime::Unreachable { max_time, best_fidelity } => println!(
                    "  {:<8} a = {a:<5} unreachable up to T = {max_time} (best {best_fidelity:.3e})",
                    model.name()
                ),
            }
        }
    }
    Ok(())
}

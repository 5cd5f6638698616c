//! Integrates the Schrödinger equation along the linear and driving paths at zero overlap.

use adialab::dynamics::{evolve, evolve_with, EvolveOptions, DEFAULT_TOLERANCE};
use adialab::{Overlap, PathModel};

fn main() -> adialab::Result<()> {
    let o = Overlap::orthogonal();
    for t in [10.0, 100.0, 1000.0] {
        let lin = evolve(&PathModel::Linear, &o, t, DEFAULT_TOLERANCE)?;
        let drv = evolve(&PathModel::Driving, &o, t, DEFAULT_TOLERANCE)?;
        println!(
            "T = {t:>6}: linear fidelity {:.2e}, driving fidelity {:.6} (norm drift {:.1e})",
            lin.fidelity, drv.fidelity, drv.norm_drift
        );
    }

    let opts = EvolveOptions {
        trajectory_samples: Some(11),
        ..EvolveOptions::default()
    };
    let run = evolve_with(&PathModel::Driving, &o, 20.0, &opts)?;
    println!("\ndriving path, T = 20, population of |2>:");
    for sample in run.trajectory.iter().flatten() {
        println!("  t = {:>4.1}  |c2|^2 = {:.4}", sample.t, sample.state.c2.norm_sqr());
    }
    Ok(())
}

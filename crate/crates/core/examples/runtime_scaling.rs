//! How the runtime estimates scale with the overlap for each path.

use adialab::schedule::sweep_scaling;
use adialab::{InterpolantSpec, PathModel};

fn main() -> adialab::Result<()> {
    let mags = [0.02, 0.05, 0.1, 0.2];
    let linear = sweep_scaling(|_| Ok(PathModel::Linear), &mags, 0.1, 1001)?;
    let driving = sweep_scaling(|_| Ok(PathModel::Driving), &mags, 0.1, 1001)?;
    let inverse = sweep_scaling(
        |o| Ok(PathModel::GeneralFG(InterpolantSpec::polynomial(1.0 / o.magnitude())?)),
        &mags,
        0.1,
        1001,
    )?;

    for (name, sweep) in [("linear", &linear), ("driving", &driving), ("x = 1/|a|", &inverse)] {
        println!("{name}");
        for row in &sweep.rows {
            println!(
                "  |a| = {:<5} T_global = {:>12.2}  T_local = {:>9.2}  peak E0 = {:>7.3}",
                row.overlap_magnitude,
                row.t_global.time().unwrap_or(f64::INFINITY),
                row.t_local.time().unwrap_or(f64::INFINITY),
                row.peak_ground_energy
            );
        }
        println!(
            "  slopes: global {:.3}, local {:.3}, peak energy {:.3}",
            sweep.slope_global.unwrap_or(f64::NAN),
            sweep.slope_local.unwrap_or(f64::NAN),
            sweep.slope_peak_energy.unwrap_or(f64::NAN)
        );
    }
    Ok(())
}

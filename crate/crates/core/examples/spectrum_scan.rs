//! Gap profile of the three standard paths at a small overlap.
//!
//! `cargo run --release --example spectrum_scan -- 0.05`

use adialab::spectra::scan;
use adialab::{InterpolantSpec, Overlap, PathModel};

fn main() -> adialab::Result<()> {
    let a: f64 = std::env::args().nth(1).map_or(Ok(0.05), |s| s.parse()).expect("overlap");
    let o = Overlap::real(a)?;
    let models = [
        PathModel::Linear,
        PathModel::Driving,
        PathModel::GeneralFG(InterpolantSpec::polynomial(1.0 / a)?),
    ];
    println!("overlap a = {a}");
    println!("{:<10} {:>12} {:>8} {:>14} {:>8}", "path", "delta_min", "s*", "peak E0", "s_peak");
    for model in &models {
        let p = scan(model, &o, 1001)?;
        println!(
            "{:<10} {:>12.6e} {:>8.4} {:>14.6} {:>8.4}",
            model.name(),
            p.delta_min,
            p.s_star,
            p.peak_ground_energy,
            p.s_peak
        );
    }

    // a coarse look at the driving path's spectrum
    let p = scan(&PathModel::Driving, &o, 11)?;
    println!("\ndriving path");
    for pt in &p.points {
        println!("  s = {:.1}  E0 = {:+.5}  E1 = {:+.5}  gap = {:.5}", pt.s, pt.e0, pt.e1, pt.gap);
    }
    Ok(())
}

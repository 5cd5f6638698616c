//! Closed-form eigenvalues against the 2x2 eigensolver for random complex overlaps.

use adialab::spectra::{driving_min_gap_closed_form, scan, validate_closed_forms};
use adialab::theorems::case_rng;
use adialab::{InterpolantSpec, Overlap, PathModel};
use rand::Rng;

fn main() -> adialab::Result<()> {
    let mut worst = 0.0_f64;
    for i in 0..50 {
        let mut rng = case_rng(2024, i);
        let r = rng.random::<f64>().sqrt();
        let phi = rng.random_range(0.0..std::f64::consts::TAU);
        let o = Overlap::new(r * phi.cos(), r * phi.sin())?;
        let x = rng.random_range(0.0..10.0);
        for model in [PathModel::Driving, PathModel::GeneralFG(InterpolantSpec::polynomial(x)?)] {
            worst = worst.max(validate_closed_forms(&model, &o, 501)?);
        }
    }
    println!("max |closed form - eigensolver| over 50 overlaps: {worst:.3e}");

    for a in [0.0, 0.25, 0.5, 0.75] {
        let o = Overlap::real(a)?;
        let scanned = scan(&PathModel::Driving, &o, 1001)?.delta_min;
        println!(
            "driving a = {a:<4}  closed-form min gap {:.12}  scanned {:.12}",
            driving_min_gap_closed_form(&o),
            scanned
        );
    }
    Ok(())
}

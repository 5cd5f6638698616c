//! Shifting the spectrum so the ground energy stays at zero does not reopen the gap.

use adialab::spectra::scan;
use adialab::theorems::{variant_campaign, verify_variant};
use adialab::{InterpolantSpec, Overlap, PathModel};

fn main() -> adialab::Result<()> {
    let spec = InterpolantSpec::polynomial(3.0)?;
    let report = verify_variant(&spec, &Overlap::orthogonal(), 0.1, 1001)?;
    println!(
        "x = 3: h(0) = {}, h(1) = {}, max ground energy {:.1e}, min gap {:.1e}, unbounded runtime: {}",
        report.h_at_0,
        report.h_at_1,
        report.max_ground_energy,
        report.delta_min,
        report.runtime.is_unbounded()
    );

    // with a non-zero overlap the same path is gapped
    let p = scan(&PathModel::VariantShifted(spec), &Overlap::real(0.1)?, 1001)?;
    println!("same path at a = 0.1: min gap {:.4} at s = {:.4}", p.delta_min, p.s_star);

    let campaign = variant_campaign(200, 42, 0.1, 1001)?;
    println!(
        "{} random interpolants: confirmed = {}",
        campaign.trials.len(),
        campaign.confirmed()
    );
    Ok(())
}

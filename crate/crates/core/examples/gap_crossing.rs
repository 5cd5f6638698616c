//! At zero overlap every admissible f/g interpolation closes the gap somewhere.

use adialab::paths::InterpolantSpec;
use adialab::theorems::{crossing_campaign, find_gap_crossing};
use adialab::Knot;

fn main() -> adialab::Result<()> {
    // a hand-made schedule: stay near the start, then swing over
    let spec = InterpolantSpec::pinned(&[Knot::new(0.3, 0.95, 0.1), Knot::new(0.8, 0.6, 0.9)])?;
    let c = find_gap_crossing(&spec)?;
    println!(
        "f = g at s = {:.12} after {} bisections (gap there {:.1e})",
        c.s_root, c.bisection_iterations, c.gap_at_root
    );

    let campaign = crossing_campaign(1000, 42, 0.1, 1001)?;
    let worst = campaign.trials.iter().map(|t| t.crossing.gap_at_root).fold(0.0, f64::max);
    println!(
        "{} random interpolants: {} counterexamples, largest gap at the crossing {worst:.1e}",
        campaign.trials.len(),
        campaign.counterexamples
    );
    Ok(())
}

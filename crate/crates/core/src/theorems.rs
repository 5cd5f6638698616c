//! Numerical certificates for the two failure results at zero overlap.
//!
//! With `a = 0` the general path `f H_i + g H_f` is diagonal, `diag(g, f)`,
//! so its gap is `|f - g|`. The boundary conditions force `F = f - g` from
//! `F(0) = 1` to `F(1) = -1`, and continuity then forces a zero in between:
//! the levels cross and no finite runtime satisfies the adiabatic condition.
//! The shifted variant subtracts `h = min(f, g)`, keeping the ground energy at
//! zero, but leaves the gap `|f - g|` and therefore the crossing untouched.
//!
//! Only continuous interpolants can be expressed as an [`InterpolantSpec`];
//! continuity is exactly what the crossing argument needs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hilbert::Overlap;
use crate::paths::{shift, InterpolantSpec, Knot, PathModel};
use crate::schedule::{runtime_global, RuntimeEstimate};
use crate::spectra::scan;

/// Bisection stops once `|f - g|` is at most this.
pub const ROOT_TOL: f64 = 1e-12;
pub const MAX_BISECTIONS: u32 = 60;
/// Largest gap accepted as a crossing witness.
pub const CROSSING_GAP_TOL: f64 = 1e-10;
/// Largest ground energy accepted for the shifted variant at zero overlap.
pub const GROUND_ENERGY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CrossingReport {
    pub s_root: f64,
    pub f_at_root: f64,
    pub gap_at_root: f64,
    pub bisection_iterations: u32,
}

/// Locates a zero of `F = f - g` by bisection and evaluates the gap of the
/// general path there at zero overlap.
pub fn find_gap_crossing(spec: &InterpolantSpec) -> Result<CrossingReport> {
    if !spec.is_admissible() {
        return Err(Error::domain(
            "interpolants violate boundary conditions f(0)=g(1)=1, f(1)=g(0)=0",
        ));
    }
    let diff = |s: f64| spec.eval(s).map(|(f, g)| f - g);
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    for iteration in 1..=MAX_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        let value = diff(mid)?;
        if value.abs() <= ROOT_TOL {
            let gap = PathModel::GeneralFG(spec.clone())
                .assemble(&Overlap::orthogonal(), mid)?
                .eigensystem()?
                .gap();
            return Ok(CrossingReport {
                s_root: mid,
                f_at_root: value,
                gap_at_root: gap,
                bisection_iterations: iteration,
            });
        }
        if value > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::numeric(format!(
        "bisection did not reach |f - g| <= {ROOT_TOL} within {MAX_BISECTIONS} iterations"
    )))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VariantReport {
    pub h_at_0: f64,
    pub h_at_1: f64,
    pub max_ground_energy: f64,
    pub delta_min: f64,
    pub crossing: CrossingReport,
    pub runtime: RuntimeEstimate,
}

/// Checks the zero-ground-energy variant at zero overlap: the shift vanishes
/// at both ends, the ground energy stays at zero, and the gap still closes.
pub fn verify_variant(
    spec: &InterpolantSpec,
    o: &Overlap,
    epsilon: f64,
    n_points: usize,
) -> Result<VariantReport> {
    if o.magnitude() != 0.0 {
        return Err(Error::domain(
            "the variant check assumes zero overlap; scan the variant path for a != 0 instead",
        ));
    }
    let crossing = find_gap_crossing(spec)?;
    let (f0, g0) = spec.eval(0.0)?;
    let (f1, g1) = spec.eval(1.0)?;
    let profile = scan(&PathModel::VariantShifted(spec.clone()), o, n_points)?;
    let max_ground_energy = profile
        .points
        .iter()
        .map(|p| p.ground_energy)
        .fold(profile.peak_ground_energy, f64::max);
    Ok(VariantReport {
        h_at_0: shift(f0, g0),
        h_at_1: shift(f1, g1),
        max_ground_energy,
        delta_min: profile.delta_min.min(crossing.gap_at_root),
        crossing,
        runtime: runtime_global(&profile, epsilon)?,
    })
}

const MIN_KNOT_SPACING: f64 = 0.01;
const MAX_INTERIOR_KNOTS: usize = 8;
const MAX_INTERIOR_VALUE: f64 = 1.5;

/// A random admissible interpolant pair: 1 to 8 interior knots at least
/// `0.01` apart, with `f` and `g` drawn independently from `[0, 1.5]`.
pub fn random_admissible<R: Rng>(rng: &mut R) -> InterpolantSpec {
    let k = rng.random_range(1..=MAX_INTERIOR_KNOTS);
    let positions = loop {
        let mut s: Vec<f64> = (0..k).map(|_| rng.random::<f64>()).collect();
        s.sort_by(f64::total_cmp);
        let spaced = std::iter::once(0.0)
            .chain(s.iter().copied())
            .chain(std::iter::once(1.0))
            .collect::<Vec<_>>()
            .windows(2)
            .all(|w| w[1] - w[0] >= MIN_KNOT_SPACING);
        if spaced {
            break s;
        }
    };
    let interior: Vec<Knot> = positions
        .into_iter()
        .map(|s| {
            let f = rng.random_range(0.0..=MAX_INTERIOR_VALUE);
            let g = rng.random_range(0.0..=MAX_INTERIOR_VALUE);
            Knot::new(s, f, g)
        })
        .collect();
    InterpolantSpec::pinned(&interior).expect("generated knots are admissible")
}

/// Independent generator for case `index` of a campaign.
pub fn case_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrossingTrial {
    pub index: usize,
    pub spec: InterpolantSpec,
    pub crossing: CrossingReport,
    pub runtime: RuntimeEstimate,
    pub counterexample: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VariantTrial {
    pub index: usize,
    pub spec: InterpolantSpec,
    pub report: VariantReport,
    pub counterexample: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Campaign<T> {
    pub seed: u64,
    pub trials: Vec<T>,
    pub counterexamples: usize,
}

impl<T> Campaign<T> {
    pub fn confirmed(&self) -> bool {
        self.counterexamples == 0
    }
}

/// Gap crossing for the general path on `trials` random interpolant pairs.
pub fn crossing_campaign(
    trials: usize,
    seed: u64,
    epsilon: f64,
    n_points: usize,
) -> Result<Campaign<CrossingTrial>> {
    let o = Overlap::orthogonal();
    let trials = (0..trials)
        .into_par_iter()
        .map(|index| {
            let spec = random_admissible(&mut case_rng(seed, index as u64));
            let crossing = find_gap_crossing(&spec)?;
            let profile = scan(&PathModel::GeneralFG(spec.clone()), &o, n_points)?;
            let runtime = runtime_global(&profile, epsilon)?;
            let counterexample = crossing.gap_at_root > CROSSING_GAP_TOL || !runtime.is_unbounded();
            Ok(CrossingTrial {
                index,
                spec,
                crossing,
                runtime,
                counterexample,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let counterexamples = trials.iter().filter(|t| t.counterexample).count();
    Ok(Campaign {
        seed,
        trials,
        counterexamples,
    })
}

/// Zero ground energy together with a gap crossing for the shifted variant on
/// `trials` random interpolant pairs.
pub fn variant_campaign(
    trials: usize,
    seed: u64,
    epsilon: f64,
    n_points: usize,
) -> Result<Campaign<VariantTrial>> {
    let o = Overlap::orthogonal();
    let trials = (0..trials)
        .into_par_iter()
        .map(|index| {
            let spec = random_admissible(&mut case_rng(seed, index as u64));
            let report = verify_variant(&spec, &o, epsilon, n_points)?;
            let counterexample = report.h_at_0 != 0.0
                || report.h_at_1 != 0.0
                || report.max_ground_energy > GROUND_ENERGY_TOL
                || report.delta_min > CROSSING_GAP_TOL
                || !report.runtime.is_unbounded();
            Ok(VariantTrial {
                index,
                spec,
                report,
                counterexample,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let counterexamples = trials.iter().filter(|t| t.counterexample).count();
    Ok(Campaign {
        seed,
        trials,
        counterexamples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectra::DEFAULT_POINTS;

    fn brute_force_root(spec: &InterpolantSpec) -> (f64, f64) {
        // first sign change of f - g on a fine grid
        let n = 200_000;
        let mut prev = (0.0, 1.0);
        for i in 1..=n {
            let s = i as f64 / n as f64;
            let (f, g) = spec.eval(s).unwrap();
            if (f - g) <= 0.0 {
                return (prev.0, s);
            }
            prev = (s, f - g);
        }
        unreachable!("F(1) = -1")
    }

    #[test]
    fn polynomial_crossing_at_midpoint() {
        for x in [0.0, 1.0, 10.0, -0.5] {
            let report = find_gap_crossing(&InterpolantSpec::polynomial(x).unwrap()).unwrap();
            assert_eq!(report.s_root, 0.5);
            assert_eq!(report.bisection_iterations, 1);
            assert!(report.gap_at_root <= 1e-15);
        }
    }

    #[test]
    fn piecewise_crossing_inside_middle_segment() {
        let spec = InterpolantSpec::piecewise(vec![
            Knot::new(0.0, 1.0, 0.0),
            Knot::new(0.3, 0.9, 0.1),
            Knot::new(0.8, 0.2, 0.9),
            Knot::new(1.0, 0.0, 1.0),
        ])
        .unwrap();
        let report = find_gap_crossing(&spec).unwrap();
        let (lo, hi) = brute_force_root(&spec);
        assert!(report.s_root > 0.3 && report.s_root < 0.8);
        assert!(report.s_root >= lo && report.s_root <= hi);
        assert!(report.f_at_root.abs() <= ROOT_TOL);
        assert!(report.gap_at_root <= CROSSING_GAP_TOL);
        assert!(report.bisection_iterations <= MAX_BISECTIONS);
    }

    #[test]
    fn inadmissible_spec_rejected() {
        let spec = InterpolantSpec::piecewise_raw(vec![
            Knot::new(0.0, 1.0, 0.2),
            Knot::new(1.0, 0.0, 1.0),
        ])
        .unwrap();
        assert!(matches!(find_gap_crossing(&spec), Err(Error::Domain(_))));
    }

    #[test]
    fn random_specs_are_admissible_and_spaced() {
        for i in 0..200 {
            let spec = random_admissible(&mut case_rng(3, i));
            assert!(spec.is_admissible());
            if let crate::paths::InterpolantKind::PiecewiseLinear { knots } = spec.kind() {
                assert!(knots.len() >= 3 && knots.len() <= 10);
                assert!(knots.windows(2).all(|w| w[1].s - w[0].s >= MIN_KNOT_SPACING));
                assert!(knots[1..knots.len() - 1]
                    .iter()
                    .all(|k| (0.0..=1.5).contains(&k.f) && (0.0..=1.5).contains(&k.g)));
            } else {
                panic!("expected piecewise spec");
            }
        }
    }

    #[test]
    fn case_streams_are_reproducible_and_distinct() {
        let a = random_admissible(&mut case_rng(7, 11));
        let b = random_admissible(&mut case_rng(7, 11));
        let c = random_admissible(&mut case_rng(7, 12));
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn variant_linear_interpolants() {
        let spec = InterpolantSpec::polynomial(0.0).unwrap();
        let report = verify_variant(&spec, &Overlap::orthogonal(), 0.1, DEFAULT_POINTS).unwrap();
        assert_eq!((report.h_at_0, report.h_at_1), (0.0, 0.0));
        assert!(report.max_ground_energy <= GROUND_ENERGY_TOL);
        assert_eq!(report.delta_min, 0.0);
        assert_eq!(report.crossing.s_root, 0.5);
        assert!(report.runtime.is_unbounded());
        // h(1/2) = min(1/2, 1/2)
        assert_eq!(shift(0.5, 0.5), 0.5);
    }

    #[test]
    fn variant_requires_zero_overlap() {
        let spec = InterpolantSpec::polynomial(0.0).unwrap();
        let err = verify_variant(&spec, &Overlap::real(0.1).unwrap(), 0.1, 101).unwrap_err();
        assert!(matches!(err, Error::Domain(_)));
    }

    #[test]
    fn small_campaigns_confirm() {
        let c1 = crossing_campaign(50, 1, 0.1, 501).unwrap();
        assert!(c1.confirmed());
        assert_eq!(c1.trials.len(), 50);
        assert!(c1.trials.iter().enumerate().all(|(i, t)| t.index == i));
        let c2 = variant_campaign(20, 1, 0.1, 501).unwrap();
        assert!(c2.confirmed());
    }

    #[test]
    fn driving_contrast_is_finite() {
        let p = scan(&PathModel::Driving, &Overlap::orthogonal(), DEFAULT_POINTS).unwrap();
        assert!(!runtime_global(&p, 0.1).unwrap().is_unbounded());
    }
}

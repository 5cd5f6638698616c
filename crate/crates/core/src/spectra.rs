//! Instantaneous spectra along a path, minimum-gap extraction and the
//! closed-form eigenvalue expressions for each path model.
//!
//! The numerical eigensolver on the assembled matrix is the ground truth for
//! every scan. The closed forms are kept separately and checked against it
//! by [`validate_closed_forms`].

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hilbert::{Overlap, DEGENERACY_TOL};
use crate::numeric::{golden_section_min, unit_grid};
use crate::paths::{shift, PathModel};

/// Default number of grid points for scans.
pub const DEFAULT_POINTS: usize = 1001;

/// Minimum gaps at or below this value mark a profile as degenerate.
pub const DEGENERATE_GAP: f64 = 1e-9;

/// Bracket width (in `s`) at which extremum refinement stops.
pub const REFINE_TOL: f64 = 1e-12;

/// Radicands of the closed forms this far below zero are rejected rather
/// than clamped.
const RADICAND_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectralPoint {
    pub s: f64,
    pub e0: f64,
    pub e1: f64,
    pub gap: f64,
    pub ground_energy: f64,
    /// `|<E1| dH/ds |E0>|`, zero where the levels are degenerate.
    pub rate: f64,
    /// The derivative at this point was taken one-sided.
    pub kink: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralProfile {
    pub points: Vec<SpectralPoint>,
    /// Minimum gap, refined between grid points.
    pub delta_min: f64,
    pub s_star: f64,
    /// Maximum of `rate` over the grid.
    pub delta_max: f64,
    pub peak_ground_energy: f64,
    pub s_peak: f64,
    pub degenerate: bool,
}

/// Spectrum and transition rate at a single path parameter.
pub fn spectral_point(model: &PathModel, o: &Overlap, s: f64) -> Result<SpectralPoint> {
    let es = model.assemble(o, s)?.eigensystem()?;
    let d = model.assemble_derivative(o, s)?;
    let gap = es.gap();
    let rate = if gap <= DEGENERACY_TOL {
        0.0
    } else {
        d.matrix.matrix_element(&es.v1, &es.v0).norm()
    };
    if !rate.is_finite() {
        return Err(Error::numeric(format!("non-finite transition rate at s = {s}")));
    }
    Ok(SpectralPoint {
        s,
        e0: es.e0,
        e1: es.e1,
        gap,
        ground_energy: es.e0,
        rate,
        kink: d.kink,
    })
}

fn gap_at(model: &PathModel, o: &Overlap, s: f64) -> f64 {
    model
        .assemble(o, s)
        .and_then(|h| h.eigensystem())
        .map(|es| es.gap())
        .unwrap_or(f64::INFINITY)
}

fn ground_at(model: &PathModel, o: &Overlap, s: f64) -> f64 {
    model
        .assemble(o, s)
        .and_then(|h| h.eigensystem())
        .map(|es| es.e0)
        .unwrap_or(f64::NEG_INFINITY)
}

/// Grid neighbours of index `i`, clamped to the grid.
fn bracket(grid: &[f64], i: usize) -> (f64, f64) {
    let lo = grid[i.saturating_sub(1)];
    let hi = grid[(i + 1).min(grid.len() - 1)];
    (lo, hi)
}

/// Scans `n_points` evenly spaced values of `s` on `[0, 1]`.
///
/// Every grid-local minimum of the gap is refined by golden-section search
/// inside its neighbouring cells, so a crossing that falls between grid points
/// is still located. The peak ground energy is refined the same way around the
/// grid maximum.
pub fn scan(model: &PathModel, o: &Overlap, n_points: usize) -> Result<SpectralProfile> {
    if n_points < 2 {
        return Err(Error::domain("scan needs at least two grid points"));
    }
    let grid = unit_grid(n_points);
    let points = grid
        .par_iter()
        .map(|&s| spectral_point(model, o, s))
        .collect::<Result<Vec<_>>>()?;

    let delta_max = points.iter().map(|p| p.rate).fold(0.0, f64::max);

    let mut best = (points[0].s, points[0].gap);
    for p in &points[1..] {
        if p.gap < best.1 {
            best = (p.s, p.gap);
        }
    }
    let last = points.len() - 1;
    for i in 0..points.len() {
        let g = points[i].gap;
        let left = if i > 0 { points[i - 1].gap } else { f64::INFINITY };
        let right = if i < last { points[i + 1].gap } else { f64::INFINITY };
        let local_min = g <= left && g <= right && (g < left || g < right);
        if !local_min {
            continue;
        }
        let (lo, hi) = bracket(&grid, i);
        let (s, gap) = golden_section_min(|s| gap_at(model, o, s), lo, hi, REFINE_TOL);
        if gap < best.1 {
            best = (s, gap);
        }
    }
    let (s_star, delta_min) = best;

    let mut peak_idx = 0;
    for (i, p) in points.iter().enumerate() {
        if p.ground_energy > points[peak_idx].ground_energy {
            peak_idx = i;
        }
    }
    let (lo, hi) = bracket(&grid, peak_idx);
    let (s_ref, neg_e) = golden_section_min(|s| -ground_at(model, o, s), lo, hi, REFINE_TOL);
    let (s_peak, peak_ground_energy) = if -neg_e > points[peak_idx].ground_energy {
        (s_ref, -neg_e)
    } else {
        (points[peak_idx].s, points[peak_idx].ground_energy)
    };

    Ok(SpectralProfile {
        points,
        delta_min,
        s_star,
        delta_max,
        peak_ground_energy,
        s_peak,
        degenerate: delta_min <= DEGENERATE_GAP,
    })
}

fn clamp_radicand(r: f64) -> Result<f64> {
    if r < -RADICAND_TOL || !r.is_finite() {
        Err(Error::numeric(format!("negative radicand {r} in closed-form spectrum")))
    } else {
        Ok(r.max(0.0))
    }
}

fn fg_closed_form(f: f64, g: f64, o: &Overlap) -> Result<(f64, f64)> {
    let root = clamp_radicand((f - g).powi(2) + 4.0 * f * g * o.magnitude_sqr())?.sqrt();
    Ok((0.5 * ((f + g) - root), 0.5 * ((f + g) + root)))
}

/// Closed-form `(E0, E1)` of the path Hamiltonian at `s`.
///
/// * Driving: `E = (A -+ B) / 2` with `A = 1 + 2p Re(a)` and
///   `B^2 = 1 - 4p [Re(a) + b^2 + p Im(a)^2 - p]`, `p = s(1 - s)`.
/// * General `f, g`: `E = [(f + g) -+ sqrt((f - g)^2 + 4 f g |a|^2)] / 2`.
/// * Linear: the general form with `f = 1 - s`, `g = s`.
/// * Shifted variant: the general form minus `h(s)`.
pub fn closed_form_spectrum(model: &PathModel, o: &Overlap, s: f64) -> Result<(f64, f64)> {
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::domain(format!("path parameter s = {s} outside [0, 1]")));
    }
    match model {
        PathModel::Linear => fg_closed_form(1.0 - s, s, o),
        PathModel::Driving => {
            let (re, im, b) = (o.a().re, o.a().im, o.b());
            let p = s * (1.0 - s);
            let big_a = 1.0 + 2.0 * p * re;
            let big_b = clamp_radicand(1.0 - 4.0 * p * (re + b * b + p * im * im - p))?.sqrt();
            Ok((0.5 * (big_a - big_b), 0.5 * (big_a + big_b)))
        }
        PathModel::GeneralFG(spec) => {
            let (f, g) = spec.eval(s)?;
            fg_closed_form(f, g, o)
        }
        PathModel::VariantShifted(spec) => {
            let (f, g) = spec.eval(s)?;
            let h = shift(f, g);
            let (e0, e1) = fg_closed_form(f, g, o)?;
            Ok((e0 - h, e1 - h))
        }
    }
}

/// Whether the driving-path gap is smallest at `s = 1/2`, i.e.
/// `Re(a) + b^2 >= (1 - Im(a)^2) / 2`.
pub fn driving_min_at_midpoint(o: &Overlap) -> bool {
    let (re, im) = (o.a().re, o.a().im);
    re + o.b() * o.b() >= 0.5 * (1.0 - im * im)
}

/// Closed-form minimum gap of the driving path, `sqrt(|a|^2 - Re(a) - Im(a)^2/4 + 1/4)`.
///
/// This is the gap at `s = 1/2`, which is the minimum only when
/// [`driving_min_at_midpoint`] holds (for real `a`: `a >= (1 - sqrt 3)/2`).
pub fn driving_min_gap_closed_form(o: &Overlap) -> f64 {
    let (re, im) = (o.a().re, o.a().im);
    (o.magnitude_sqr() - re - 0.25 * im * im + 0.25).max(0.0).sqrt()
}

/// Closed-form minimum gap `|a| (1 + x/2)` of the polynomial interpolants.
///
/// This is the gap at `s = 1/2`; it is the global minimum only while
/// `1 - |a|^2 >= x |a|^2 (1 + x/2)`, see [`polynomial_min_at_midpoint`].
pub fn polynomial_min_gap_closed_form(o: &Overlap, x: f64) -> f64 {
    o.magnitude() * (1.0 + 0.5 * x)
}

/// Whether the polynomial-interpolant gap attains its minimum at `s = 1/2`.
///
/// Writing `u = 1 - 2s`, the squared gap is `u^2 b^2 + |a|^2 m(u)^2` with
/// `m = 1 + x(1 - u^2)/2`; its slope in `u^2` is `b^2 - x |a|^2 m`, which
/// is non-negative everywhere exactly when it is non-negative at `u = 0`.
pub fn polynomial_min_at_midpoint(o: &Overlap, x: f64) -> bool {
    x >= 0.0 && o.b().powi(2) >= x * o.magnitude_sqr() * (1.0 + 0.5 * x)
}

/// Largest deviation between closed-form and oracle eigenvalues over an
/// `n_points` grid.
pub fn validate_closed_forms(model: &PathModel, o: &Overlap, n_points: usize) -> Result<f64> {
    if n_points < 2 {
        return Err(Error::domain("validation needs at least two grid points"));
    }
    let mut worst = 0.0_f64;
    for s in unit_grid(n_points) {
        let es = model.assemble(o, s)?.eigensystem()?;
        let (e0, e1) = closed_form_spectrum(model, o, s)?;
        worst = worst.max((e0 - es.e0).abs()).max((e1 - es.e1).abs());
    }
    Ok(worst)
}

/// Largest ground energy along the path and where it occurs.
pub fn peak_ground_energy(model: &PathModel, o: &Overlap, n_points: usize) -> Result<(f64, f64)> {
    let profile = scan(model, o, n_points)?;
    Ok((profile.peak_ground_energy, profile.s_peak))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::paths::InterpolantSpec;

    fn general(x: f64) -> PathModel {
        PathModel::GeneralFG(InterpolantSpec::polynomial(x).unwrap())
    }

    #[test]
    fn driving_closed_form_midpoint() {
        let (e0, e1) = closed_form_spectrum(&PathModel::Driving, &Overlap::orthogonal(), 0.5).unwrap();
        assert!((e0 - 0.25).abs() < 1e-15 && (e1 - 0.75).abs() < 1e-15);
        let es = PathModel::Driving
            .assemble(&Overlap::orthogonal(), 0.5)
            .unwrap()
            .eigensystem()
            .unwrap();
        assert!((es.e0 - e0).abs() < 1e-15 && (es.e1 - e1).abs() < 1e-15);
    }

    #[test]
    fn general_closed_form_orthogonal_is_min_max() {
        for s in [0.1, 0.37, 0.5, 0.9] {
            let model = general(3.0);
            let (f, g) = model.interpolants().unwrap().eval(s).unwrap();
            let (e0, e1) = closed_form_spectrum(&model, &Overlap::orthogonal(), s).unwrap();
            assert!((e0 - f.min(g)).abs() < 1e-15);
            assert!((e1 - f.max(g)).abs() < 1e-15);
        }
    }

    #[test]
    fn linear_closed_form_midpoint_gap() {
        let (e0, e1) = closed_form_spectrum(&PathModel::Linear, &Overlap::real(0.6).unwrap(), 0.5).unwrap();
        assert!((e1 - e0 - 0.6).abs() < 1e-15);
    }

    #[test]
    fn scan_driving_orthogonal() {
        let p = scan(&PathModel::Driving, &Overlap::orthogonal(), 1001).unwrap();
        assert!((p.delta_min - 0.5).abs() < 1e-10);
        assert!((p.s_star - 0.5).abs() < 1e-6);
        assert!(!p.degenerate);
        assert_eq!(p.points.len(), 1001);
    }

    #[test]
    fn scan_linear_orthogonal_is_degenerate() {
        let p = scan(&PathModel::Linear, &Overlap::orthogonal(), 1001).unwrap();
        assert_eq!(p.delta_min, 0.0);
        assert_eq!(p.s_star, 0.5);
        assert!(p.degenerate);
        assert_eq!(p.points[500].rate, 0.0);
    }

    #[test]
    fn scan_finds_crossing_between_grid_points() {
        // n = 4 puts grid points at 0, 1/3, 2/3, 1; the crossing is at 1/2.
        let p = scan(&PathModel::Linear, &Overlap::orthogonal(), 4).unwrap();
        assert!(p.delta_min < 1e-11);
        assert!((p.s_star - 0.5).abs() < 1e-11);
        assert!(p.degenerate);
    }

    #[test]
    fn scan_general_inverse_overlap() {
        let o = Overlap::real(0.1).unwrap();
        let p = scan(&general(10.0), &o, 1001).unwrap();
        assert!((p.delta_min - 0.6).abs() < 1e-10);
        assert!((p.s_star - 0.5).abs() < 1e-6);
    }

    #[test]
    fn scan_rejects_tiny_grid() {
        assert!(matches!(
            scan(&PathModel::Linear, &Overlap::orthogonal(), 1),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn closed_form_rejects_out_of_range() {
        assert!(closed_form_spectrum(&PathModel::Driving, &Overlap::orthogonal(), 1.5).is_err());
    }

    #[test]
    fn validation_examples() {
        let e = validate_closed_forms(&PathModel::Driving, &Overlap::real(0.3).unwrap(), 501).unwrap();
        assert!(e <= 1e-12, "{e}");
        let e = validate_closed_forms(&general(5.0), &Overlap::new(0.3, 0.4).unwrap(), 501).unwrap();
        assert!(e <= 1e-12, "{e}");
        let e = validate_closed_forms(&PathModel::Driving, &Overlap::new(0.5, 0.5).unwrap(), 501).unwrap();
        assert!(e <= 1e-12, "{e}");
    }

    #[test]
    fn peak_ground_energy_examples() {
        let (e, s) = peak_ground_energy(&general(10.0), &Overlap::real(0.1).unwrap(), 1001).unwrap();
        assert!((e - 2.7).abs() < 1e-12, "{e}");
        assert!((s - 0.5).abs() < 1e-6);

        for a in [0.0, 0.2, 0.7] {
            let (e, s) = peak_ground_energy(&PathModel::Linear, &Overlap::real(a).unwrap(), 1001).unwrap();
            assert!(e <= 0.5);
            assert!((e - 0.5 * (1.0 - a)).abs() < 1e-12);
            assert!((s - 0.5).abs() < 1e-6);
        }

        let variant = PathModel::VariantShifted(InterpolantSpec::polynomial(2.0).unwrap());
        let (e, _) = peak_ground_energy(&variant, &Overlap::orthogonal(), 1001).unwrap();
        assert!(e.abs() <= 1e-12);
    }

    #[test]
    fn polynomial_midpoint_condition_boundary() {
        // a = 1/2, x = 2: b^2 = 3/4 < x a^2 (1 + x/2) = 1, so the midpoint is not the minimum
        let o = Overlap::real(0.5).unwrap();
        assert!(!polynomial_min_at_midpoint(&o, 2.0));
        let p = scan(&general(2.0), &o, 1001).unwrap();
        assert!(p.delta_min < polynomial_min_gap_closed_form(&o, 2.0) - 1e-3);
        assert!((p.s_star - 0.5).abs() > 1e-2);

        let o = Overlap::real(0.1).unwrap();
        assert!(polynomial_min_at_midpoint(&o, 10.0));
    }

    #[test]
    fn driving_closed_form_min_gap_real() {
        for a in [0.0, 0.25, 0.5, 0.8] {
            let o = Overlap::real(a).unwrap();
            assert!((driving_min_gap_closed_form(&o) - (a - 0.5_f64).abs()).abs() < 1e-15);
        }
    }
}

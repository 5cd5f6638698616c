//! Adiabatic runtime estimates built from a [`SpectralProfile`].
//!
//! With `s = t / T` the Hamiltonian's time derivative is `(1/T) dH/ds`, so the
//! adiabatic condition `max|<E1|dH/dt|E0>| / min gap^2 <= eps` becomes
//!
//! ```text
//! T_global = max_s |<E1|dH/ds|E0>| / (eps * min_s gap^2)
//! ```
//!
//! The local estimate lets the schedule slow down only where the gap is
//! small, applying the same condition pointwise and integrating:
//!
//! ```text
//! T_local = (1/eps) * integral_0^1 |<E1|dH/ds|E0>| / gap(s)^2 ds
//! ```
//!
//! For the linear path these scale as `|a|^-2` and `|a|^-1` respectively.
//! Both are heuristics without rigorous constants; only their scaling with the
//! overlap is meaningful.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hilbert::Overlap;
use crate::numeric::{log_log_slope, unit_grid};
use crate::paths::{driving_budget, PathModel};
use crate::spectra::{scan, SpectralProfile};

pub const DEFAULT_EPSILON: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Global,
    Local,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RuntimeKind {
    Finite { t: f64 },
    /// The gap closes (to within the degeneracy threshold) at `witness_s`.
    Unbounded { witness_s: f64, witness_gap: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RuntimeEstimate {
    #[serde(flatten)]
    pub kind: RuntimeKind,
    pub epsilon: f64,
    pub method: Method,
}

impl RuntimeEstimate {
    pub fn time(&self) -> Option<f64> {
        match self.kind {
            RuntimeKind::Finite { t } => Some(t),
            RuntimeKind::Unbounded { .. } => None,
        }
    }

    pub fn is_unbounded(&self) -> bool {
        matches!(self.kind, RuntimeKind::Unbounded { .. })
    }
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if epsilon > 0.0 && epsilon < 1.0 {
        Ok(())
    } else {
        Err(Error::domain(format!("epsilon = {epsilon} outside (0, 1)")))
    }
}

fn unbounded(profile: &SpectralProfile, epsilon: f64, method: Method) -> RuntimeEstimate {
    RuntimeEstimate {
        kind: RuntimeKind::Unbounded {
            witness_s: profile.s_star,
            witness_gap: profile.delta_min,
        },
        epsilon,
        method,
    }
}

/// `T = delta_max / (eps * delta_min^2)`, or unbounded for a degenerate profile.
pub fn runtime_global(profile: &SpectralProfile, epsilon: f64) -> Result<RuntimeEstimate> {
    check_epsilon(epsilon)?;
    if profile.degenerate {
        return Ok(unbounded(profile, epsilon, Method::Global));
    }
    let t = profile.delta_max / (epsilon * profile.delta_min * profile.delta_min);
    Ok(RuntimeEstimate {
        kind: RuntimeKind::Finite { t },
        epsilon,
        method: Method::Global,
    })
}

/// Trapezoid rule for `(1/eps) * integral rate / gap^2` over the profile grid.
pub fn runtime_local_from_profile(profile: &SpectralProfile, epsilon: f64) -> Result<RuntimeEstimate> {
    check_epsilon(epsilon)?;
    if profile.degenerate {
        return Ok(unbounded(profile, epsilon, Method::Local));
    }
    let integral: f64 = profile
        .points
        .windows(2)
        .map(|w| {
            let y0 = w[0].rate / (w[0].gap * w[0].gap);
            let y1 = w[1].rate / (w[1].gap * w[1].gap);
            0.5 * (w[1].s - w[0].s) * (y0 + y1)
        })
        .sum();
    Ok(RuntimeEstimate {
        kind: RuntimeKind::Finite { t: integral / epsilon },
        epsilon,
        method: Method::Local,
    })
}

pub fn runtime_local(
    model: &PathModel,
    o: &Overlap,
    epsilon: f64,
    n_points: usize,
) -> Result<RuntimeEstimate> {
    check_epsilon(epsilon)?;
    runtime_local_from_profile(&scan(model, o, n_points)?, epsilon)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingRow {
    pub overlap_magnitude: f64,
    pub t_global: RuntimeEstimate,
    pub t_local: RuntimeEstimate,
    pub delta_min: f64,
    pub peak_ground_energy: f64,
    pub driving_budget: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingSweep {
    pub rows: Vec<ScalingRow>,
    /// Slope of `log T_global` against `log |a|`.
    pub slope_global: Option<f64>,
    pub slope_local: Option<f64>,
    /// Slope of `log peak_ground_energy` against `log |a|`.
    pub slope_peak_energy: Option<f64>,
}

/// Runtime estimates over a list of real overlaps `a = |a|`.
///
/// `family` picks the path for each overlap, which lets the interpolants
/// depend on `|a|` (for example `x = 1/|a|`). Slopes need at least three rows
/// and are absent when any row is unbounded.
pub fn sweep_scaling<F>(
    family: F,
    magnitudes: &[f64],
    epsilon: f64,
    n_points: usize,
) -> Result<ScalingSweep>
where
    F: Fn(&Overlap) -> Result<PathModel> + Sync,
{
    check_epsilon(epsilon)?;
    if let Some(bad) = magnitudes.iter().find(|&&m| !(m > 0.0 && m <= 1.0)) {
        return Err(Error::domain(format!("overlap magnitude {bad} outside (0, 1]")));
    }
    let grid = unit_grid(n_points.max(2));
    let rows = magnitudes
        .par_iter()
        .map(|&m| {
            let o = Overlap::real(m)?;
            let model = family(&o)?;
            let profile = scan(&model, &o, n_points)?;
            Ok(ScalingRow {
                overlap_magnitude: m,
                t_global: runtime_global(&profile, epsilon)?,
                t_local: runtime_local_from_profile(&profile, epsilon)?,
                delta_min: profile.delta_min,
                peak_ground_energy: profile.peak_ground_energy,
                driving_budget: driving_budget(&model, &o, &grid),
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let xs: Vec<f64> = rows.iter().map(|r| r.overlap_magnitude).collect();
    let slope_of = |ys: Option<Vec<f64>>| {
        ys.filter(|_| rows.len() >= 3)
            .and_then(|ys| log_log_slope(&xs, &ys))
    };
    let slope_global = slope_of(rows.iter().map(|r| r.t_global.time()).collect());
    let slope_local = slope_of(rows.iter().map(|r| r.t_local.time()).collect());
    let slope_peak_energy = slope_of(Some(rows.iter().map(|r| r.peak_ground_energy).collect()));

    Ok(ScalingSweep {
        rows,
        slope_global,
        slope_local,
        slope_peak_energy,
    })
}

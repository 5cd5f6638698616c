//! Time-dependent Schrödinger evolution in the reduced basis.
//!
//! The state starts in `|alpha> = |1>`, the ground state of `H_i`, and obeys
//! `i dpsi/dt = H(t/T) psi` for `0 <= t <= T`. Integration uses classic RK4
//! with step-doubling error control: each step is taken once with `h` and
//! twice with `h/2`, and the difference bounds the local error.
//!
//! Success is measured as `|<beta|psi(T)>|^2`. At `s = 1` every path ends on
//! `H_f = I - |beta><beta|`, whose ground state is exactly `|beta>`, so this is
//! the overlap with the final instantaneous ground state without any
//! eigenvector phase ambiguity.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hilbert::{Overlap, StateVector2};
use crate::paths::PathModel;

/// Default local error tolerance per unit time.
pub const DEFAULT_TOLERANCE: f64 = 1e-10;
pub const DEFAULT_MAX_STEPS: u64 = 200_000_000;
pub const DEFAULT_TRAJECTORY_SAMPLES: usize = 201;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolveOptions {
    pub tolerance: f64,
    /// Ceiling on attempted steps (accepted and rejected).
    pub max_steps: u64,
    /// Number of evenly spaced samples to record, if any.
    pub trajectory_samples: Option<usize>,
    pub initial: StateVector2,
}

impl Default for EvolveOptions {
    fn default() -> Self {
        EvolveOptions {
            tolerance: DEFAULT_TOLERANCE,
            max_steps: DEFAULT_MAX_STEPS,
            trajectory_samples: None,
            initial: StateVector2::e1(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrajectorySample {
    pub t: f64,
    pub state: StateVector2,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvolutionResult {
    pub final_state: StateVector2,
    pub fidelity: f64,
    pub total_time: f64,
    pub trajectory: Option<Vec<TrajectorySample>>,
    pub norm_drift: f64,
    pub steps: u64,
}

struct Rhs<'a> {
    model: &'a PathModel,
    overlap: &'a Overlap,
    total_time: f64,
}

impl Rhs<'_> {
    /// `-i H(t/T) psi`.
    fn eval(&self, t: f64, psi: &StateVector2) -> Result<StateVector2> {
        let s = (t / self.total_time).clamp(0.0, 1.0);
        let hpsi = self.model.assemble(self.overlap, s)?.apply(psi);
        Ok(hpsi.scale(Complex64::new(0.0, -1.0)))
    }

    fn rk4(&self, t: f64, psi: &StateVector2, h: f64) -> Result<StateVector2> {
        let half = Complex64::new(0.5 * h, 0.0);
        let full = Complex64::new(h, 0.0);
        let k1 = self.eval(t, psi)?;
        let k2 = self.eval(t + 0.5 * h, &psi.add(&k1.scale(half)))?;
        let k3 = self.eval(t + 0.5 * h, &psi.add(&k2.scale(half)))?;
        let k4 = self.eval(t + h, &psi.add(&k3.scale(full)))?;
        let sum = k1.add(&k2.scale(Complex64::new(2.0, 0.0)))
            .add(&k3.scale(Complex64::new(2.0, 0.0)))
            .add(&k4);
        Ok(psi.add(&sum.scale(Complex64::new(h / 6.0, 0.0))))
    }
}

/// Evolves `|alpha>` for total time `total_time` with the default options and
/// the given error tolerance per unit time.
pub fn evolve(model: &PathModel, o: &Overlap, total_time: f64, tolerance: f64) -> Result<EvolutionResult> {
    evolve_with(
        model,
        o,
        total_time,
        &EvolveOptions {
            tolerance,
            ..EvolveOptions::default()
        },
    )
}

pub fn evolve_with(
    model: &PathModel,
    o: &Overlap,
    total_time: f64,
    opts: &EvolveOptions,
) -> Result<EvolutionResult> {
    if !(total_time > 0.0) || !total_time.is_finite() {
        return Err(Error::domain(format!("evolution time T = {total_time} must be positive")));
    }
    if !(opts.tolerance > 0.0) {
        return Err(Error::domain("integrator tolerance must be positive"));
    }
    if !opts.initial.is_finite() {
        return Err(Error::numeric("initial state must be finite"));
    }
    let rhs = Rhs {
        model,
        overlap: o,
        total_time,
    };

    let targets: Vec<f64> = match opts.trajectory_samples {
        Some(m) if m >= 2 => {
            let last = (m - 1) as f64;
            (1..m).map(|j| total_time * j as f64 / last).collect()
        }
        _ => vec![total_time],
    };
    let mut trajectory = opts
        .trajectory_samples
        .filter(|&m| m >= 2)
        .map(|m| {
            let mut v = Vec::with_capacity(m);
            v.push(TrajectorySample {
                t: 0.0,
                state: opts.initial,
            });
            v
        });

    let mut psi = opts.initial;
    let mut t = 0.0;
    let mut h = total_time.min(0.1);
    let mut steps = 0_u64;
    for &target in &targets {
        while t < target {
            if steps >= opts.max_steps {
                return Err(Error::Resource {
                    what: format!("integrator step ceiling of {}", opts.max_steps),
                    progress: t,
                    target: total_time,
                });
            }
            steps += 1;
            let last_step = t + h >= target;
            let step = if last_step { target - t } else { h };
            let coarse = rhs.rk4(t, &psi, step)?;
            let mid = rhs.rk4(t, &psi, 0.5 * step)?;
            let fine = rhs.rk4(t + 0.5 * step, &mid, 0.5 * step)?;
            let err = fine.sub(&coarse).max_abs() / 15.0;
            if !err.is_finite() {
                return Err(Error::numeric(format!("integrator diverged at t = {t}")));
            }
            let allowed = opts.tolerance * step;
            let factor = if err == 0.0 {
                4.0
            } else {
                (0.9 * (allowed / err).powf(0.25)).clamp(0.2, 4.0)
            };
            if err <= allowed {
                psi = fine;
                t = if last_step { target } else { t + step };
                if !last_step {
                    h = step * factor;
                }
            } else {
                h = step * factor;
            }
        }
        if let Some(tr) = trajectory.as_mut() {
            tr.push(TrajectorySample { t, state: psi });
        }
    }

    let fidelity = o.beta_state().inner(&psi).norm_sqr().min(1.0);
    Ok(EvolutionResult {
        final_state: psi,
        fidelity,
        total_time,
        trajectory,
        norm_drift: (psi.norm_sqr() - 1.0).abs(),
        steps,
    })
}

/// Fixed-step RK4 from `initial`, used to check the order of the stepper.
pub fn evolve_fixed_steps(
    model: &PathModel,
    o: &Overlap,
    total_time: f64,
    n_steps: usize,
    initial: StateVector2,
) -> Result<StateVector2> {
    if !(total_time > 0.0) || n_steps == 0 {
        return Err(Error::domain("fixed-step evolution needs T > 0 and at least one step"));
    }
    let rhs = Rhs {
        model,
        overlap: o,
        total_time,
    };
    let h = total_time / n_steps as f64;
    let mut psi = initial;
    for i in 0..n_steps {
        psi = rhs.rk4(i as f64 * h, &psi, h)?;
    }
    Ok(psi)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstantTimeOptions {
    pub tolerance: f64,
    /// Largest total time tried before giving up.
    pub max_time: f64,
    /// Relative width at which the bisection stops (3 significant figures).
    pub relative_precision: f64,
    pub max_steps: u64,
}

impl Default for ConstantTimeOptions {
    fn default() -> Self {
        ConstantTimeOptions {
            tolerance: 1e-8,
            max_time: (1u64 << 20) as f64,
            relative_precision: 5e-4,
            max_steps: DEFAULT_MAX_STEPS,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConstantTime {
    Reached { t_star: f64, fidelity: f64 },
    /// The target was not met for any tried time up to `max_time`.
    Unreachable { max_time: f64, best_fidelity: f64 },
}

impl ConstantTime {
    pub fn t_star(&self) -> Option<f64> {
        match self {
            ConstantTime::Reached { t_star, .. } => Some(*t_star),
            ConstantTime::Unreachable { .. } => None,
        }
    }
}

/// Smallest total time (to about three significant figures) at which the
/// evolution reaches `target_fidelity`.
///
/// `T` doubles from 1 until the target is met, then the last doubling
/// interval is bisected. Fidelity need not be monotone in `T`; the returned
/// time always meets the target.
pub fn find_constant_time(
    model: &PathModel,
    o: &Overlap,
    target_fidelity: f64,
    opts: &ConstantTimeOptions,
) -> Result<ConstantTime> {
    if !(target_fidelity > 0.0 && target_fidelity < 1.0) {
        return Err(Error::domain(format!("target fidelity {target_fidelity} outside (0, 1)")));
    }
    let evolve_opts = EvolveOptions {
        tolerance: opts.tolerance,
        max_steps: opts.max_steps,
        ..EvolveOptions::default()
    };
    let fidelity = |t: f64| evolve_with(model, o, t, &evolve_opts).map(|r| r.fidelity);

    let mut hi = 1.0;
    let mut hi_fid = fidelity(hi)?;
    let mut best = hi_fid;
    while hi_fid < target_fidelity {
        hi *= 2.0;
        if hi > opts.max_time {
            return Ok(ConstantTime::Unreachable {
                max_time: opts.max_time,
                best_fidelity: best,
            });
        }
        hi_fid = fidelity(hi)?;
        best = best.max(hi_fid);
    }
    let mut lo = 0.5 * hi;
    while hi - lo > opts.relative_precision * hi {
        let mid = 0.5 * (lo + hi);
        let f = fidelity(mid)?;
        if f >= target_fidelity {
            hi = mid;
            hi_fid = f;
        } else {
            lo = mid;
        }
    }
    Ok(ConstantTime::Reached {
        t_star: hi,
        fidelity: hi_fid,
    })
}

//! Interpolation paths between the initial Hamiltonian `H_i = I - |alpha><alpha|`
//! and the final Hamiltonian `H_f = I - |beta><beta|`.
//!
//! Four path models are supported, all assembled directly in the reduced basis:
//!
//! * [`PathModel::Linear`]: `(1 - s) H_i + s H_f`
//! * [`PathModel::Driving`]: the linear path plus `s(1 - s) H_e` with
//!   `H_e = |alpha><beta| + |beta><alpha|`
//! * [`PathModel::GeneralFG`]: `f(s) H_i + g(s) H_f`
//! * [`PathModel::VariantShifted`]: `f(s) H_i + g(s) H_f - h(s) I` with
//!   `h = (f + g - |f - g|) / 2`, which pins the ground energy to zero when the
//!   initial and solution states are orthogonal.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hilbert::{Hermitian2, Overlap};

/// Tolerance on the endpoint values `f(0) = g(1) = 1`, `f(1) = g(0) = 0`.
pub const BOUNDARY_TOL: f64 = 1e-12;

/// A control point `(s, f(s), g(s))` of a piecewise-linear interpolant pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Knot {
    pub s: f64,
    pub f: f64,
    pub g: f64,
}

impl Knot {
    pub const fn new(s: f64, f: f64, g: f64) -> Self {
        Knot { s, f, g }
    }
}

/// The concrete form of an interpolant pair.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InterpolantKind {
    /// `f = 1 - s + x s(1 - s)`, `g = s + x s(1 - s)`.
    PolynomialX { x: f64 },
    /// Linear interpolation between knots with strictly increasing `s`.
    PiecewiseLinear { knots: Vec<Knot> },
}

/// A validated pair of interpolating functions `(f, g)`.
///
/// Both functions are continuous by construction. Constructors other than
/// [`InterpolantSpec::piecewise_raw`] also guarantee the boundary conditions
/// `f(0) = g(1) = 1` and `f(1) = g(0) = 0`; endpoint values within `1e-12`
/// of the targets are snapped to them exactly.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct InterpolantSpec {
    kind: InterpolantKind,
}

impl InterpolantSpec {
    pub fn polynomial(x: f64) -> Result<Self> {
        if !x.is_finite() {
            return Err(Error::domain("interpolant parameter x must be finite"));
        }
        Ok(InterpolantSpec {
            kind: InterpolantKind::PolynomialX { x },
        })
    }

    /// Piecewise-linear pair through `knots`, which must start at `s = 0`,
    /// end at `s = 1` and satisfy the boundary conditions.
    pub fn piecewise(knots: Vec<Knot>) -> Result<Self> {
        let mut spec = InterpolantSpec::piecewise_raw(knots)?;
        if let InterpolantKind::PiecewiseLinear { knots } = &mut spec.kind {
            let n = knots.len();
            let (first, last) = (knots[0], knots[n - 1]);
            let ok = (first.f - 1.0).abs() <= BOUNDARY_TOL
                && first.g.abs() <= BOUNDARY_TOL
                && last.f.abs() <= BOUNDARY_TOL
                && (last.g - 1.0).abs() <= BOUNDARY_TOL;
            if !ok {
                return Err(Error::domain(
                    "interpolants violate boundary conditions f(0)=g(1)=1, f(1)=g(0)=0",
                ));
            }
            knots[0] = Knot::new(0.0, 1.0, 0.0);
            knots[n - 1] = Knot::new(1.0, 0.0, 1.0);
        }
        Ok(spec)
    }

    /// Piecewise-linear pair through the given interior knots, with the
    /// endpoints `(0, 1, 0)` and `(1, 0, 1)` added. Knots at exactly `s = 0`
    /// or `s = 1` are replaced by the pinned endpoints.
    pub fn pinned(interior: &[Knot]) -> Result<Self> {
        let mut knots = Vec::with_capacity(interior.len() + 2);
        knots.push(Knot::new(0.0, 1.0, 0.0));
        knots.extend(interior.iter().copied().filter(|k| k.s != 0.0 && k.s != 1.0));
        knots.push(Knot::new(1.0, 0.0, 1.0));
        InterpolantSpec::piecewise(knots)
    }

    /// Piecewise-linear pair that is only checked structurally (finite
    /// values, at least two knots, strictly increasing `s` from 0 to 1).
    /// The boundary conditions are not enforced, so operations that rely on
    /// them report a domain error for such specs.
    pub fn piecewise_raw(knots: Vec<Knot>) -> Result<Self> {
        if knots.len() < 2 {
            return Err(Error::domain("piecewise interpolant needs at least two knots"));
        }
        if knots
            .iter()
            .any(|k| !k.s.is_finite() || !k.f.is_finite() || !k.g.is_finite())
        {
            return Err(Error::domain("knot values must be finite"));
        }
        if knots.windows(2).any(|w| w[1].s <= w[0].s) {
            return Err(Error::domain("knot positions must be strictly increasing"));
        }
        if knots[0].s != 0.0 || knots[knots.len() - 1].s != 1.0 {
            return Err(Error::domain("knots must start at s = 0 and end at s = 1"));
        }
        Ok(InterpolantSpec {
            kind: InterpolantKind::PiecewiseLinear { knots },
        })
    }

    pub fn kind(&self) -> &InterpolantKind {
        &self.kind
    }

    /// Whether the endpoint values satisfy the boundary conditions exactly.
    pub fn is_admissible(&self) -> bool {
        match &self.kind {
            InterpolantKind::PolynomialX { .. } => true,
            InterpolantKind::PiecewiseLinear { knots } => {
                let (first, last) = (knots[0], knots[knots.len() - 1]);
                first.f == 1.0 && first.g == 0.0 && last.f == 0.0 && last.g == 1.0
            }
        }
    }

    /// `(f(s), g(s))`.
    pub fn eval(&self, s: f64) -> Result<(f64, f64)> {
        check_s(s)?;
        Ok(match &self.kind {
            InterpolantKind::PolynomialX { x } => {
                let bump = x * s * (1.0 - s);
                ((1.0 - s) + bump, s + bump)
            }
            InterpolantKind::PiecewiseLinear { knots } => {
                let i = segment(knots, s);
                let (lo, hi) = (knots[i], knots[i + 1]);
                if s == lo.s {
                    (lo.f, lo.g)
                } else if s == hi.s {
                    (hi.f, hi.g)
                } else {
                    let t = (s - lo.s) / (hi.s - lo.s);
                    (lo.f + t * (hi.f - lo.f), lo.g + t * (hi.g - lo.g))
                }
            }
        })
    }

    /// `(f'(s), g'(s))` and whether `s` sits on an interior breakpoint, in
    /// which case the right-hand derivative is returned.
    pub fn derivative(&self, s: f64) -> Result<((f64, f64), bool)> {
        check_s(s)?;
        Ok(match &self.kind {
            InterpolantKind::PolynomialX { x } => {
                let bump = x * (1.0 - 2.0 * s);
                ((-1.0 + bump, 1.0 + bump), false)
            }
            InterpolantKind::PiecewiseLinear { knots } => {
                let i = segment(knots, s);
                let (lo, hi) = (knots[i], knots[i + 1]);
                let ds = hi.s - lo.s;
                let kink = i > 0 && s == lo.s;
                (((hi.f - lo.f) / ds, (hi.g - lo.g) / ds), kink)
            }
        })
    }
}

/// Index `i` of the segment `[knots[i].s, knots[i+1].s)` containing `s`;
/// the last segment also owns `s = 1`.
fn segment(knots: &[Knot], s: f64) -> usize {
    let upper = knots.partition_point(|k| k.s <= s);
    upper.saturating_sub(1).min(knots.len() - 2)
}

fn check_s(s: f64) -> Result<()> {
    if (0.0..=1.0).contains(&s) {
        Ok(())
    } else {
        Err(Error::domain(format!("path parameter s = {s} outside [0, 1]")))
    }
}

/// The interpolation path followed from `H_i` to `H_f`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "model", content = "interpolants", rename_all = "snake_case")]
pub enum PathModel {
    Linear,
    Driving,
    #[serde(rename = "general")]
    GeneralFG(InterpolantSpec),
    #[serde(rename = "variant")]
    VariantShifted(InterpolantSpec),
}

/// Matrix derivative with respect to `s`, flagged when taken one-sided.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Derivative {
    pub matrix: Hermitian2,
    pub kink: bool,
}

impl PathModel {
    pub fn name(&self) -> &'static str {
        match self {
            PathModel::Linear => "linear",
            PathModel::Driving => "driving",
            PathModel::GeneralFG(_) => "general",
            PathModel::VariantShifted(_) => "variant",
        }
    }

    pub fn interpolants(&self) -> Option<&InterpolantSpec> {
        match self {
            PathModel::GeneralFG(spec) | PathModel::VariantShifted(spec) => Some(spec),
            PathModel::Linear | PathModel::Driving => None,
        }
    }

    /// The path Hamiltonian at `s` in the reduced basis.
    pub fn assemble(&self, o: &Overlap, s: f64) -> Result<Hermitian2> {
        check_s(s)?;
        Ok(match self {
            PathModel::Linear => fg_matrix(1.0 - s, s, o),
            PathModel::Driving => {
                let (a, b) = (o.a(), o.b());
                let b2 = b * b;
                Hermitian2::new(
                    s * b2 + 2.0 * s * (1.0 - s) * a.re,
                    1.0 - s * b2,
                    Complex64::new(1.0 - s - a.re, -a.im) * (s * b),
                )
            }
            PathModel::GeneralFG(spec) => {
                let (f, g) = spec.eval(s)?;
                fg_matrix(f, g, o)
            }
            PathModel::VariantShifted(spec) => {
                let (f, g) = spec.eval(s)?;
                fg_matrix(f, g, o).shifted(shift(f, g))
            }
        })
    }

    /// Entrywise `d/ds` of [`PathModel::assemble`].
    ///
    /// On an interpolant breakpoint or where `f = g` for the shifted variant,
    /// the right-hand derivative is returned with `kink` set.
    pub fn assemble_derivative(&self, o: &Overlap, s: f64) -> Result<Derivative> {
        check_s(s)?;
        let smooth = |matrix| Derivative { matrix, kink: false };
        Ok(match self {
            PathModel::Linear => smooth(fg_matrix(-1.0, 1.0, o)),
            PathModel::Driving => {
                let (a, b) = (o.a(), o.b());
                let b2 = b * b;
                smooth(Hermitian2::new(
                    b2 + 2.0 * (1.0 - 2.0 * s) * a.re,
                    -b2,
                    Complex64::new(1.0 - 2.0 * s - a.re, -a.im) * b,
                ))
            }
            PathModel::GeneralFG(spec) => {
                let ((df, dg), kink) = spec.derivative(s)?;
                Derivative {
                    matrix: fg_matrix(df, dg, o),
                    kink,
                }
            }
            PathModel::VariantShifted(spec) => {
                let (f, g) = spec.eval(s)?;
                let ((df, dg), breakpoint) = spec.derivative(s)?;
                let (dh, crossing) = if f > g {
                    (dg, false)
                } else if f < g {
                    (df, false)
                } else {
                    // right-hand derivative of min(f, g)
                    (df.min(dg), true)
                };
                Derivative {
                    matrix: fg_matrix(df, dg, o).shifted(dh),
                    kink: breakpoint || crossing,
                }
            }
        })
    }
}

/// `f H_i + g H_f` in the reduced basis.
fn fg_matrix(f: f64, g: f64, o: &Overlap) -> Hermitian2 {
    let b = o.b();
    Hermitian2::new(g * (b * b), f + g * o.magnitude_sqr(), -(o.a() * (g * b)))
}

/// Energy shift `h = (f + g - |f - g|) / 2` of the zero-ground-energy variant.
pub fn shift(f: f64, g: f64) -> f64 {
    0.5 * (f + g - (f - g).abs())
}

/// `H_i = I - |alpha><alpha|` in the reduced basis.
pub fn initial_hamiltonian() -> Hermitian2 {
    Hermitian2::diag(0.0, 1.0)
}

/// `H_f = I - |beta><beta|` in the reduced basis.
pub fn final_hamiltonian(o: &Overlap) -> Hermitian2 {
    let b = o.b();
    Hermitian2::new(b * b, o.magnitude_sqr(), -(o.a() * b))
}

/// `H_e = |alpha><beta| + |beta><alpha|` in the reduced basis.
pub fn driving_term(o: &Overlap) -> Hermitian2 {
    Hermitian2::new(2.0 * o.a().re, 0.0, Complex64::new(o.b(), 0.0))
}

/// Largest operator norm of the weighted driving term `s(1 - s) H_e` over
/// `grid`. Zero for every model without a driving term.
pub fn driving_budget(model: &PathModel, o: &Overlap, grid: &[f64]) -> f64 {
    if !matches!(model, PathModel::Driving) {
        return 0.0;
    }
    let es = driving_term(o)
        .eigensystem()
        .expect("driving term of a valid overlap is finite");
    let norm = es.e0.abs().max(es.e1.abs());
    grid.iter()
        .map(|&s| s * (1.0 - s) * norm)
        .fold(0.0, f64::max)
}

//! Reduced two-dimensional Hilbert space spanned by the initial state and the
//! component of the solution state orthogonal to it.
//!
//! With `a = <alpha|beta>` and `b = sqrt(1 - |a|^2)` the basis is
//! `|1> = |alpha>` and `|2> = (|beta> - a|alpha>) / b`, so that
//! `|beta> = a|1> + b|2>`. Every Hamiltonian in this crate is a combination of
//! the two rank-one projector Hamiltonians `I - |alpha><alpha|` and
//! `I - |beta><beta|` (plus multiples of the identity), so it lives entirely in
//! this plane and is stored as a [`Hermitian2`].

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

/// Overshoot of `|a|` above one that is still accepted (and clamped).
pub const OVERLAP_CLAMP_TOL: f64 = 1e-12;

/// Eigenvalue separation at or below which a matrix is flagged degenerate.
pub const DEGENERACY_TOL: f64 = 1e-14;

/// Inner product `a = <alpha|beta>` between the initial and the solution state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Overlap {
    a: Complex64,
    b: f64,
}

impl Overlap {
    /// Builds an overlap from its real and imaginary parts.
    ///
    /// Magnitudes up to `1 + 1e-12` are clamped onto the unit circle so that
    /// decimal input such as `0.6,0.8` is accepted.
    pub fn new(re: f64, im: f64) -> Result<Self> {
        if !re.is_finite() || !im.is_finite() {
            return Err(Error::numeric("overlap components must be finite"));
        }
        let mag2 = re * re + im * im;
        if mag2 > 1.0 + OVERLAP_CLAMP_TOL {
            return Err(Error::domain("overlap magnitude exceeds 1"));
        }
        if mag2 > 1.0 {
            let mag = mag2.sqrt();
            return Ok(Overlap {
                a: Complex64::new(re / mag, im / mag),
                b: 0.0,
            });
        }
        Ok(Overlap {
            a: Complex64::new(re, im),
            b: (1.0 - mag2).sqrt(),
        })
    }

    /// Real overlap `a`, the common case for scaling sweeps.
    pub fn real(a: f64) -> Result<Self> {
        Overlap::new(a, 0.0)
    }

    /// Orthogonal initial and solution states.
    pub fn orthogonal() -> Self {
        Overlap {
            a: Complex64::new(0.0, 0.0),
            b: 1.0,
        }
    }

    pub fn a(&self) -> Complex64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn magnitude(&self) -> f64 {
        self.a.norm()
    }

    /// `|a|^2`, computed from the stored components.
    pub fn magnitude_sqr(&self) -> f64 {
        self.a.norm_sqr()
    }

    /// The solution state `|beta> = a|1> + b|2>`.
    pub fn beta_state(&self) -> StateVector2 {
        StateVector2::new(self.a, Complex64::new(self.b, 0.0))
    }
}

/// Amplitudes on `|1>` and `|2>`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StateVector2 {
    pub c1: Complex64,
    pub c2: Complex64,
}

impl StateVector2 {
    pub const fn new(c1: Complex64, c2: Complex64) -> Self {
        StateVector2 { c1, c2 }
    }

    /// `|1>`, which is also the initial state `|alpha>`.
    pub const fn e1() -> Self {
        StateVector2::new(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0))
    }

    /// `|2>`.
    pub const fn e2() -> Self {
        StateVector2::new(Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0))
    }

    pub fn norm_sqr(&self) -> f64 {
        self.c1.norm_sqr() + self.c2.norm_sqr()
    }

    pub fn norm(&self) -> f64 {
        self.c1.norm().hypot(self.c2.norm())
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector2) -> Complex64 {
        self.c1.conj() * other.c1 + self.c2.conj() * other.c2
    }

    pub fn scale(&self, k: Complex64) -> Self {
        StateVector2::new(self.c1 * k, self.c2 * k)
    }

    pub fn add(&self, other: &StateVector2) -> Self {
        StateVector2::new(self.c1 + other.c1, self.c2 + other.c2)
    }

    pub fn sub(&self, other: &StateVector2) -> Self {
        StateVector2::new(self.c1 - other.c1, self.c2 - other.c2)
    }

    /// Largest component magnitude.
    pub fn max_abs(&self) -> f64 {
        self.c1.norm().max(self.c2.norm())
    }

    pub fn is_finite(&self) -> bool {
        self.c1.is_finite() && self.c2.is_finite()
    }

    fn normalized(&self) -> Self {
        let n = self.norm();
        self.scale(Complex64::new(1.0 / n, 0.0))
    }

    /// Rotates the global phase so that the component of largest magnitude is
    /// real and non-negative (first component on ties).
    fn phase_fixed(&self) -> Self {
        let (m1, m2) = (self.c1.norm(), self.c2.norm());
        let (pivot, mag) = if m1 >= m2 { (self.c1, m1) } else { (self.c2, m2) };
        if mag == 0.0 {
            return *self;
        }
        let mut out = self.scale(pivot.conj() / mag);
        if m1 >= m2 {
            out.c1 = Complex64::new(out.c1.norm(), 0.0);
        } else {
            out.c2 = Complex64::new(out.c2.norm(), 0.0);
        }
        out
    }
}

/// A 2x2 Hermitian matrix; the lower off-diagonal entry is `conj(h12)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Hermitian2 {
    pub h11: f64,
    pub h22: f64,
    pub h12: Complex64,
}

impl Hermitian2 {
    pub const fn new(h11: f64, h22: f64, h12: Complex64) -> Self {
        Hermitian2 { h11, h22, h12 }
    }

    pub const fn diag(h11: f64, h22: f64) -> Self {
        Hermitian2::new(h11, h22, Complex64::new(0.0, 0.0))
    }

    pub fn h21(&self) -> Complex64 {
        self.h12.conj()
    }

    /// Dense row-major form.
    pub fn to_dense(&self) -> [[Complex64; 2]; 2] {
        [
            [Complex64::new(self.h11, 0.0), self.h12],
            [self.h21(), Complex64::new(self.h22, 0.0)],
        ]
    }

    pub fn trace(&self) -> f64 {
        self.h11 + self.h22
    }

    pub fn det(&self) -> f64 {
        self.h11 * self.h22 - self.h12.norm_sqr()
    }

    pub fn is_finite(&self) -> bool {
        self.h11.is_finite() && self.h22.is_finite() && self.h12.is_finite()
    }

    /// `H - shift * I`.
    pub fn shifted(&self, shift: f64) -> Self {
        Hermitian2::new(self.h11 - shift, self.h22 - shift, self.h12)
    }

    pub fn apply(&self, v: &StateVector2) -> StateVector2 {
        StateVector2::new(
            self.h11 * v.c1 + self.h12 * v.c2,
            self.h21() * v.c1 + self.h22 * v.c2,
        )
    }

    /// `<u|H|v>`.
    pub fn matrix_element(&self, u: &StateVector2, v: &StateVector2) -> Complex64 {
        u.inner(&self.apply(v))
    }

    /// Largest entrywise difference to `other`.
    pub fn max_abs_diff(&self, other: &Hermitian2) -> f64 {
        (self.h11 - other.h11)
            .abs()
            .max((self.h22 - other.h22).abs())
            .max((self.h12 - other.h12).norm())
    }

    /// Eigenvalues and orthonormal eigenvectors.
    ///
    /// Eigenvalues come from the mean and half-splitting `hypot((h11-h22)/2, |h12|)`,
    /// which avoids forming the discriminant `tr^2 - 4 det` explicitly.
    /// Each eigenvector is built from the matrix row that carries no
    /// cancellation and its phase is fixed so its largest component is real
    /// and non-negative.
    pub fn eigensystem(&self) -> Result<EigenSystem2> {
        if !self.is_finite() {
            return Err(Error::numeric("non-finite Hamiltonian entry"));
        }
        let mean = 0.5 * (self.h11 + self.h22);
        let half = 0.5 * (self.h11 - self.h22);
        let r = half.hypot(self.h12.norm());
        let e0 = mean - r;
        let e1 = mean + r;
        let degenerate = e1 - e0 <= DEGENERACY_TOL;

        let (v0, v1) = if r == 0.0 {
            (StateVector2::e1(), StateVector2::e2())
        } else if half >= 0.0 {
            let w = Complex64::new(r + half, 0.0);
            (
                StateVector2::new(-self.h12, w),
                StateVector2::new(w, self.h12.conj()),
            )
        } else {
            let w = Complex64::new(r - half, 0.0);
            (
                StateVector2::new(-w, self.h12.conj()),
                StateVector2::new(self.h12, w),
            )
        };

        Ok(EigenSystem2 {
            e0,
            e1,
            v0: v0.normalized().phase_fixed(),
            v1: v1.normalized().phase_fixed(),
            degenerate,
        })
    }
}

/// Spectral decomposition of a [`Hermitian2`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EigenSystem2 {
    pub e0: f64,
    pub e1: f64,
    pub v0: StateVector2,
    pub v1: StateVector2,
    /// Set when `e1 - e0 <= 1e-14`; the eigenvectors are then only one valid choice.
    pub degenerate: bool,
}

impl EigenSystem2 {
    pub fn gap(&self) -> f64 {
        self.e1 - self.e0
    }
}

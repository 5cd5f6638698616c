//! Numerical laboratory for nonlinear interpolation paths in adiabatic
//! search on rank-one projector Hamiltonians.
//!
//! The problem is fixed by the overlap `a = <alpha|beta>` between the initial
//! state and the solution state. Everything is computed in the two-dimensional
//! space spanned by those states:
//!
//! * [`hilbert`]: overlaps, reduced-basis states and a 2x2 Hermitian eigensolver
//! * [`paths`]: linear, driving-term, general `f/g` and shifted-variant paths
//! * [`spectra`]: gap scans, minimum-gap refinement and closed-form checks
//! * [`schedule`]: global and local adiabatic runtime estimates and scaling sweeps
//! * [`theorems`]: gap-crossing certificates at zero overlap, with random fuzzing
//! * [`dynamics`]: Schrödinger integration and fidelity
//! * [`cli`]: the `adialab` command-line front end

pub mod cli;
pub mod dynamics;
pub mod error;
pub mod hilbert;
pub mod numeric;
pub mod paths;
pub mod schedule;
pub mod spectra;
pub mod theorems;

pub use error::{Error, Result};
pub use hilbert::{EigenSystem2, Hermitian2, Overlap, StateVector2};
pub use paths::{InterpolantSpec, Knot, PathModel};
pub use schedule::{RuntimeEstimate, RuntimeKind};
pub use spectra::{SpectralPoint, SpectralProfile};

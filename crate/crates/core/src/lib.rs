//! Numerical laboratory for coherent and squeezed states of the bosonic
//! oscillator.
//!
//! Every state family lives either in a truncated Fock space (dense complex
//! amplitude vectors, dense operator matrices) or, for the supersymmetric
//! isospectral family, on a uniform spatial grid. Each module pairs its
//! constructors with the residual and fidelity checks that certify them.
//!
//! All quantities use natural units, ħ = m = ω = 1; see [`units`].

pub mod coherent;
pub mod error;
pub mod expm;
pub mod fock;
pub mod grid;
pub mod pair;
pub mod phase;
pub mod quadrature;
pub mod sqm;
pub mod squeezing;
pub mod su11;
pub mod tolerance;
pub mod tridiag;
pub mod two_mode;
pub mod units;
pub mod verify;

pub use num_complex::Complex64 as C64;

pub use error::{Error, Result};
pub use fock::{FockState, OperatorMatrix, QuadratureReport};
pub use grid::{Grid, GridWavefunction};
pub use tolerance::Tolerances;
pub use two_mode::TwoModeState;
pub use units::{NaturalUnits, NATURAL_UNITS};

/// Default truncation dimension for single-mode constructions.
pub const DEFAULT_DIM: usize = 64;

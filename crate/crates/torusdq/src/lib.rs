//! Numerical laboratory for deformation quantization on Fourier-lattice
//! algebras: trigonometric polynomials on the 2n-torus, deformed by a
//! twisted convolution attached to a compatible symplectic triple.

// Validation guards are written as `!(x > 0.0)` on purpose: the negated form
// rejects NaN, which `x <= 0.0` silently accepts.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod deform;
pub mod error;
pub mod fourier;
pub mod io;
pub mod norms;
mod numerics;
pub mod oracle;
pub mod sample;
pub mod smoothing;
pub mod states;
pub mod symplectic;

pub use deform::DeformationContext;
pub use error::{Error, Result};
pub use fourier::{FourierElement, GridScan, LatticeVector};
pub use norms::{l1_upper, norm_curve, rep_lower, rep_lower_with, NormCurve, NormEstimate};
pub use numerics::{fit_log_slope, geomspace};
pub use oracle::{extrapolated_phase, oracle_star, DampingSchedule};
pub use smoothing::{
    derivative_identity_residual, positivity_certificate, smooth, sos_series, PositivityCertificate,
};
pub use states::{
    classical_evaluate, deformed_evaluate, positivity_scan, state_curve, ClassicalState, HbarGrid,
    PositivityScan,
};
pub use symplectic::{ComplexFrame, SymplecticStructure};

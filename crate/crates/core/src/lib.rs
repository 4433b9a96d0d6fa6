//! Spectral toolkit for singular three-coefficient Sturm-Liouville operators
//! tau u = (1/r) [-(p u')' + q u] on an interval (a, b).
//!
//! The crate classifies interval endpoints (regular / limit circle / limit
//! point), builds normalized principal and nonprincipal solution frames,
//! computes generalized boundary values as Wronskian limits against those
//! frames, constructs the Friedrichs and Krein-von Neumann self-adjoint
//! extensions explicitly, and solves the eigenvalue problem for any separated
//! or coupled extension through a transfer-matrix characteristic function.
//!
//! Three closed-form problem families (a generalized Bessel operator, an
//! acoustic-black-hole operator, and the Jacobi operator) ship with exact
//! reference data in [`oracles`] so the whole numerical pipeline can be
//! cross-checked end to end.

pub mod boundary;
pub mod classify;
pub mod coeffs;
pub mod error;
pub mod extensions;
pub mod extrap;
pub mod linal;
pub mod oracles;
pub mod par;
pub mod quad;
pub mod quasi_ode;
pub mod roots;
pub mod spectra;

pub use coeffs::{SLProblem, Side};
pub use error::{Result, SlError};

//! Exact propagator of the quantum Calogero model.
//!
//! The crate evaluates the scattering eigenfunctions `Psi_N(x; p)` of the
//! inverse-square interacting system, the harmonic-trap propagator built from them,
//! and wave-packet evolution by quadrature. Expansion coefficients come either from
//! closed forms, from the `l = 1` clique conjecture, or from an exact-rational oracle
//! that solves the eigen-equation directly.

pub mod coefficients;
pub mod error;
pub mod evolution;
pub mod foundation;
pub mod io;
pub mod oracle;
pub mod propagator;
pub mod quadrature;
pub mod verify;
pub mod wavefunction;

pub use coefficients::{CoefficientTable, MultiIndex, Representation, Status};
pub use error::{Error, Result};
pub use evolution::{Exchange, QuadratureGrid, WavePacket};
pub use foundation::{BigInt, BigRational, PairIndex, Permutation};
pub use num_complex::Complex64;
pub use oracle::TableSource;
pub use propagator::Propagator;
pub use verify::{Suite, SuiteReport, VerifyConfig};
pub use wavefunction::{Configuration, Eigenfunction, ModelParams, Momentum};

//! Time evolution of initial wave functions by quadrature against the propagator.

mod evolve;
mod packet;

pub use evolve::{
    evolve, evolve_with, norm_drift, Axis, ConvergenceWarning, Coordinates, Evolution, EvolveOptions,
    KernelRoute, NormReport, QuadratureGrid, QuadratureRule, MAX_GRID_POINTS, PHASE_PER_CELL,
};
pub use packet::{packet_value, Exchange, Orbital, WavePacket};

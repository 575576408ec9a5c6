//! Closed-form propagator of the trapped model: Mehler kernel, the general
//! `K_N(x, y; t)`, the explicit double-sum form, and the trap-free reference kernel.

mod figure;
mod kernel;
mod residual;
mod semigroup;
mod time;

pub use figure::{figure_grid, FigureGrid, GridSpec};
pub use kernel::{
    free_kernel, kernel, kernel_explicit, kernel_l0, mehler, mehler_complex, KernelPoint, Propagator,
    ZeroCouplingKernel,
};
pub use residual::schrodinger_residual;
pub use semigroup::{compose_kernel, compose_mehler, ContourRule};
pub use time::{TimeFactors, CAUSTIC_GUARD};

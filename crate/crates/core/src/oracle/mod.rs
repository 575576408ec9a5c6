//! Exact-arithmetic oracle: recovers coefficient tables by imposing the trap-free
//! eigen-equation on the ansatz at rational sample points and solving the resulting
//! linear system exactly.

mod bareiss;
mod field;
mod modular;
mod residual;
mod solve;

pub use bareiss::{bareiss_solve, integer_row};
pub use field::{
    crt_combine, gaussian_magnitude, gaussian_primes, rational_reconstruction, Field, Fp, Gaussian,
};
pub use modular::ModularEchelon;
pub use residual::{
    draw_distinct, draw_sample, residual_row, residual_sample, ResidualSample, SampleContext,
};
pub use solve::{
    resolve_table, solve, solve_coefficients, unknowns_for, verify_table, LinearSystem, SolveMethod,
    SolveOptions, SolveReport, TableSource, VerificationReport, BAREISS_MAX_UNKNOWNS, DEFAULT_SEED,
    MAX_UNKNOWNS,
};

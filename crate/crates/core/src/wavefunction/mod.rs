//! Scattering eigenfunctions of the trap-free model and their two-body building blocks.

mod bessel;
mod eigen;
mod fpoly;
mod params;

pub use bessel::{riccati_bessel, spherical_bessel_j};
pub use eigen::{
    eigen_residual, pair_variable, psi, psi2_bessel, script_f, vandermonde, AccuracyWarning, Eigenfunction,
    Evaluation, MIN_SEPARATION_PRODUCT,
};
pub use fpoly::{f_descendant_check, f_poly, fk_coefficient, fk_coefficients, FkCache};
pub use params::{separated_points, separation_gap, Configuration, ModelParams, Momentum};

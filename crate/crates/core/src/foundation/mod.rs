//! Combinatorial and exact-arithmetic primitives shared by every other module.

mod double_double;
mod factorial;
mod fit;
mod pairs;
mod permutation;

pub use double_double::DoubleDouble;
pub use factorial::{factorial, factorial_ratio, factorial_ratio_u};
pub use fit::{least_squares_slope, log_log_slope};
pub use pairs::{pair_count, pair_position, pairs, PairIndex};
pub use permutation::{permutations, Permutation, MAX_PERMUTATION_N};

pub use num_bigint::BigInt;
/// Exact rational carrier for coefficient tables and the oracle.
pub use num_rational::BigRational;

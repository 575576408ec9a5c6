//! Coefficient tables of the correlation factor: closed forms, the `l = 1` clique
//! conjecture and conversion between the product and Laurent expansions.

mod clique;
mod closed_form;
mod convert;
mod multi_index;
mod table;

pub use clique::{
    clique_count, ell1_conjecture_coefficient, ell1_conjecture_table, f_sequence, PairGraph,
    MAX_CONJECTURE_N, MAX_CONJECTURE_TABLE_N,
};
pub use closed_form::{
    c2_closed, c2_laurent_table, c3_closed, c3_laurent_table, c3_table, closed_form_table,
    is_integral_normalized,
};
pub use convert::{laurent_to_product, product_to_laurent, to_representation};
pub use multi_index::MultiIndex;
pub use table::{CoefficientTable, Representation, Status};

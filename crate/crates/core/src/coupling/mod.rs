//! Coupling two spins: total operators, tensor-product decomposition and
//! Clebsch–Gordan tables.

mod basis;
mod cg;
mod closed_form;
mod operators;

pub(crate) use basis::check_coupled_spin;
pub use basis::{decompose, decompose_many, degeneracy, CoupledBasis, UncoupledBasis};
pub use cg::{cg, cg_block, cg_table, highest_weight_state, CgBlock, CgTable, CgTerm, CoupledState};
pub use closed_form::{cg_closed_form_half, closed_form_table, Convention};
pub use operators::{casimir_expanded, total_operator, TotalKind, TotalOperator};

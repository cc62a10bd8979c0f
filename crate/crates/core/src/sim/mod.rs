//! Exact state-vector simulation: sparse by default, dense as a cross-check.

mod analysis;
pub mod dense;
mod label;
mod run;
mod sparse;
mod state;

pub use analysis::{
    bits_of, inner_product, label_of, marginal_distribution, parse_bits, point_mass,
    states_equal_up_to_global_phase,
};
pub use dense::DenseState;
pub use label::BasisLabel;
pub use run::{
    coherent_run, coherent_run_with, run_branches, run_branches_with, run_unitary,
    run_unitary_with, BranchOutcome, BranchRun,
};
pub use sparse::SparseState;
pub use state::{QuantumState, PRUNE, SNAP, TOL};

use crate::circuit::Gate;
use crate::error::Result;

/// Applies one gate to a sparse state. A conditioned gate acts only when its
/// bit in `classical` is 1; an unmeasured bit is an error. Measurements are
/// rejected here; they belong to the runners.
pub fn apply_gate(state: &mut SparseState, gate: &Gate, classical: &[Option<bool>]) -> Result<()> {
    if let Some(c) = gate.condition {
        match classical.get(c).copied().flatten() {
            None => return Err(crate::error::Error::UndefinedClassicalBit(c)),
            Some(false) => return Ok(()),
            Some(true) => {}
        }
    }
    state.apply(gate, None)
}

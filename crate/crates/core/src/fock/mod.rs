//! Truncated oscillator-basis oracle: ladder matrices, coherent vectors,
//! spectral propagation and dimension-doubling convergence.

mod coherent;
mod oracle;
mod representation;
mod sparse;

pub use coherent::{coherent_vector, CoherentVector};
pub use oracle::{adaptive_dimension, adaptive_dimension_with, Oracle, OracleSettings, OracleValue};
pub use representation::{
    annihilation, build_hamiltonian, creation, inner, norm, propagate_expectation, FockRepresentation,
    HamiltonianKind, MIN_DIM, UNITARITY_TOL,
};
pub use sparse::SparseMatrix;

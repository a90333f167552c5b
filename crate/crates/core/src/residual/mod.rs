//! Evolution operators for averages and finite-difference residuals of
//! candidate solutions.

mod operator;
mod stencil;

pub use operator::{
    d_alpha, d_alpha_conj, generate_operator, generate_operator_capped, liouville_operator, EvolutionOperator,
    OperatorTerm, Target,
};
pub use stencil::{
    convergence_study, default_step, fornberg_weights, residual, ConvergenceStudy, StencilOrder,
};

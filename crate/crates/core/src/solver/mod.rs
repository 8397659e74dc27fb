//! Direct stiffness analysis of planar frames with tension-only cables.
//!
//! Constraints are applied by eliminating restrained equations; the reduced
//! symmetric system is factored by Cholesky. Small-displacement linear theory
//! throughout; cable slackening is the only nonlinearity.

mod analysis;
mod assembly;
pub mod element;
mod linalg;

use thiserror::Error;

use crate::model::ElementId;

pub use analysis::{
    analyze, cable_utilization, member_end_forces, reactions, tension_only_analyze, utilization, ActiveSetSolution,
    AnalysisResult, MemberKind, MemberResult, NodeDisplacement, Reaction, FORCE_TOLERANCE, MAX_ITERATIONS,
};
pub use assembly::{assemble, assemble_unconstrained, AssembledSystem};
pub use element::{beam_stiffness_local, cable_stiffness_global, fixed_end_forces};
pub use linalg::{solve_linear, StiffnessMatrix, RESIDUAL_TOLERANCE};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolveError {
    #[error("non-positive {0}")]
    NonPositiveProperty(&'static str),
    #[error("element {element}: non-positive {property}")]
    ElementProperty { element: ElementId, property: &'static str },
    #[error("singular system: {detail}")]
    SingularSystem { pivot: Option<usize>, detail: String },
    #[error("active cable set did not converge after {iterations} iterations (cycle of {} sets)", cycle.len())]
    NoConvergence {
        iterations: usize,
        cycle: Vec<Vec<ElementId>>,
    },
    #[error("invalid model: {0}")]
    InvalidModel(String),
}

impl SolveError {
    pub(crate) fn for_element(self, element: ElementId) -> Self {
        match self {
            SolveError::NonPositiveProperty(property) => SolveError::ElementProperty { element, property },
            other => other,
        }
    }
}

//! Planar structural model: geometry, members, materials, supports, loads.

mod dofs;
mod loads;
mod types;
mod validate;

pub use dofs::{dof_map, Dof, DofMap};
pub use loads::{gravity_loads, self_weight_loads};
pub use types::{
    build_model, BeamElement, CableElement, ElementId, Load, Material, ModelError, ModelParts, NodalForce, Node,
    NodeId, Section, StructureModel, Support, STANDARD_GRAVITY,
};
pub use validate::{validate, Issue, IssueKind, Location, Severity, ValidationReport, MIN_ELEMENT_LENGTH};

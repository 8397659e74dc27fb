//! Pre-analysis checks. Issues are collected, never thrown.

use std::fmt;

use super::types::{NodeId, StructureModel};
use super::Load;

/// Shortest element length accepted for analysis (m).
pub const MIN_ELEMENT_LENGTH: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Severity {
    /// The model cannot be analyzed.
    Error,
    /// Harmless, reported for housekeeping.
    Warning,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IssueKind {
    NonFiniteCoordinate,
    NonPositiveProperty,
    ZeroLengthElement,
    NegativePretension,
    NoRestraintFlags,
    InsufficientRestraint,
    UnconnectedNode,
    InvalidLoad,
    MomentWithoutRotation,
    UnusedDefinition,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Location {
    Model,
    Node(NodeId),
    Element(u32),
    Material(String),
    Section(String),
    Support(NodeId),
    /// Index into the model's load list.
    Load(usize),
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Location::Model => write!(f, "model"),
            Location::Node(id) => write!(f, "node {id}"),
            Location::Element(id) => write!(f, "element {id}"),
            Location::Material(name) => write!(f, "material {name}"),
            Location::Section(name) => write!(f, "section {name}"),
            Location::Support(id) => write!(f, "support at node {id}"),
            Location::Load(i) => write!(f, "load #{}", i + 1),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Issue {
    pub severity: Severity,
    pub kind: IssueKind,
    pub location: Location,
    pub message: String,
}

impl fmt::Display for Issue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let level = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{level}: {}: {}", self.location, self.message)
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub issues: Vec<Issue>,
}

impl ValidationReport {
    pub fn is_empty(&self) -> bool {
        self.issues.is_empty()
    }

    /// True when no issue has error severity.
    pub fn is_analyzable(&self) -> bool {
        self.errors().next().is_none()
    }

    pub fn errors(&self) -> impl Iterator<Item = &Issue> {
        self.issues.iter().filter(|i| i.severity == Severity::Error)
    }

    pub fn has(&self, kind: IssueKind) -> bool {
        self.issues.iter().any(|i| i.kind == kind)
    }

    fn error(&mut self, kind: IssueKind, location: Location, message: impl Into<String>) {
        self.issues.push(Issue {
            severity: Severity::Error,
            kind,
            location,
            message: message.into(),
        });
    }
}

/// Minimal union-find over node slots, for connectivity checks.
struct Components {
    parent: Vec<usize>,
}

impl Components {
    fn new(n: usize) -> Self {
        Self { parent: (0..n).collect() }
    }

    fn find(&mut self, mut a: usize) -> usize {
        while self.parent[a] != a {
            self.parent[a] = self.parent[self.parent[a]];
            a = self.parent[a];
        }
        a
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

pub fn validate(model: &StructureModel) -> ValidationReport {
    let mut report = ValidationReport::default();

    for n in model.nodes() {
        if !(n.x.is_finite() && n.y.is_finite()) {
            report.error(IssueKind::NonFiniteCoordinate, Location::Node(n.id), "coordinates must be finite");
        }
    }

    for m in model.materials() {
        let ok = m.elastic_modulus > 0.0
            && m.elastic_modulus.is_finite()
            && m.density >= 0.0
            && m.density.is_finite()
            && m.allowable_stress > 0.0
            && m.allowable_stress.is_finite();
        if !ok {
            report.error(
                IssueKind::NonPositiveProperty,
                Location::Material(m.name.clone()),
                "requires E > 0, density >= 0 and allowable stress > 0",
            );
        }
    }
    for s in model.sections() {
        let ok = [s.area, s.second_moment, s.depth].iter().all(|v| *v > 0.0 && v.is_finite());
        if !ok {
            report.error(
                IssueKind::NonPositiveProperty,
                Location::Section(s.name.clone()),
                "requires A > 0, I > 0 and depth > 0",
            );
        }
    }

    let members = model
        .beams()
        .iter()
        .map(|b| (b.id, b.node_i, b.node_j))
        .chain(model.cables().iter().map(|c| (c.id, c.node_i, c.node_j)));
    for (id, i, j) in members {
        let length = model.distance(i, j).unwrap_or(0.0);
        if i == j || !(length >= MIN_ELEMENT_LENGTH) {
            report.error(
                IssueKind::ZeroLengthElement,
                Location::Element(id),
                format!("length {length:e} m is below {MIN_ELEMENT_LENGTH:e} m"),
            );
        }
    }
    for c in model.cables() {
        if !(c.area > 0.0 && c.area.is_finite()) {
            report.error(IssueKind::NonPositiveProperty, Location::Element(c.id), "cable area must be positive");
        }
        if !(c.pretension >= 0.0 && c.pretension.is_finite()) {
            report.error(IssueKind::NegativePretension, Location::Element(c.id), "pretension must be >= 0");
        }
    }

    let mut touched_by_beam = vec![false; model.nodes().len()];
    let mut touched = vec![false; model.nodes().len()];
    let mut components = Components::new(model.nodes().len());
    for b in model.beams() {
        let (a, c) = (model.node_index(b.node_i).unwrap(), model.node_index(b.node_j).unwrap());
        touched_by_beam[a] = true;
        touched_by_beam[c] = true;
        touched[a] = true;
        touched[c] = true;
        components.union(a, c);
    }
    for cable in model.cables() {
        let (a, c) = (model.node_index(cable.node_i).unwrap(), model.node_index(cable.node_j).unwrap());
        touched[a] = true;
        touched[c] = true;
        components.union(a, c);
    }

    let mut restrained = 0;
    let mut supported_roots = vec![false; model.nodes().len()];
    for s in model.supports() {
        if s.restrained_count() == 0 {
            report.error(IssueKind::NoRestraintFlags, Location::Support(s.node), "support restrains nothing");
        }
        restrained += s.restrained_count();
        let slot = model.node_index(s.node).unwrap();
        let root = components.find(slot);
        supported_roots[root] = true;
    }

    for (slot, n) in model.nodes().iter().enumerate() {
        let fully_held = model.support(n.id).is_some_and(|s| s.restrain_x && s.restrain_y);
        if !touched[slot] && !fully_held {
            report.error(IssueKind::UnconnectedNode, Location::Node(n.id), "node is not connected to any member");
        }
    }

    if !model.is_empty() && restrained < 3 {
        report.error(
            IssueKind::InsufficientRestraint,
            Location::Model,
            format!("{restrained} restrained degrees of freedom, at least 3 required"),
        );
    }
    let mut flagged = vec![false; model.nodes().len()];
    for (slot, n) in model.nodes().iter().enumerate() {
        if !touched[slot] {
            continue;
        }
        let root = components.find(slot);
        if !supported_roots[root] && !flagged[root] {
            flagged[root] = true;
            report.error(
                IssueKind::InsufficientRestraint,
                Location::Node(n.id),
                "connected part containing this node has no support",
            );
        }
    }

    for (index, load) in model.loads().iter().enumerate() {
        let location = Location::Load(index);
        match *load {
            Load::NodalForce(f) => {
                if ![f.fx, f.fy, f.mz].iter().all(|v| v.is_finite()) {
                    report.error(IssueKind::InvalidLoad, location, "non-finite nodal force");
                } else if f.mz != 0.0 && !touched_by_beam[model.node_index(f.node).unwrap()] {
                    report.error(
                        IssueKind::MomentWithoutRotation,
                        location,
                        format!("moment applied at node {} which has no rotational stiffness", f.node),
                    );
                }
            }
            Load::UniformLoad { w, .. } if !w.is_finite() => {
                report.error(IssueKind::InvalidLoad, location, "non-finite distributed load")
            }
            Load::SelfWeight { g } if !(g >= 0.0 && g.is_finite()) => {
                report.error(IssueKind::InvalidLoad, location, "gravity must be finite and >= 0")
            }
            Load::PointMass { mass, .. } if !(mass >= 0.0 && mass.is_finite()) => {
                report.error(IssueKind::InvalidLoad, location, "mass must be finite and >= 0")
            }
            _ => {}
        }
    }

    for m in model.materials() {
        let used = model.beams().iter().any(|b| b.material == m.name)
            || model.cables().iter().any(|c| c.material == m.name);
        if !used {
            report.issues.push(Issue {
                severity: Severity::Warning,
                kind: IssueKind::UnusedDefinition,
                location: Location::Material(m.name.clone()),
                message: "material is not used by any member".into(),
            });
        }
    }
    for s in model.sections() {
        if !model.beams().iter().any(|b| b.section == s.name) {
            report.issues.push(Issue {
                severity: Severity::Warning,
                kind: IssueKind::UnusedDefinition,
                location: Location::Section(s.name.clone()),
                message: "section is not used by any beam".into(),
            });
        }
    }

    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Material, ModelParts, Section, Support};

    fn simple_beam() -> ModelParts {
        let mut p = ModelParts::new();
        p.node(1, 0.0, 0.0).node(2, 10.0, 0.0);
        p.materials.push(Material::timber());
        p.sections.push(Section::deck());
        p.beam(1, 1, 2, "timber", "deck");
        p.support(Support::pinned(1)).support(Support::roller(2));
        p
    }

    #[test]
    fn simply_supported_beam_is_clean() {
        let report = validate(&simple_beam().build().unwrap());
        assert!(report.is_empty(), "{:?}", report.issues);
    }

    #[test]
    fn zero_length_beam_is_flagged() {
        let mut p = simple_beam();
        p.beam(2, 2, 2, "timber", "deck");
        let report = validate(&p.build().unwrap());
        assert!(report.has(IssueKind::ZeroLengthElement));
        assert!(!report.is_analyzable());
    }

    #[test]
    fn coincident_nodes_give_zero_length() {
        let mut p = simple_beam();
        p.node(3, 10.0, 0.0);
        p.beam(2, 2, 3, "timber", "deck");
        assert!(validate(&p.build().unwrap()).has(IssueKind::ZeroLengthElement));
    }

    #[test]
    fn floating_beam_without_support_is_flagged() {
        let mut p = ModelParts::new();
        p.node(1, 0.0, 0.0).node(2, 1.0, 0.0).node(3, 5.0, 0.0).node(4, 6.0, 0.0);
        p.materials.push(Material::timber());
        p.sections.push(Section::deck());
        p.beam(1, 1, 2, "timber", "deck").beam(2, 3, 4, "timber", "deck");
        p.support(Support::fixed(1));
        let report = validate(&p.build().unwrap());
        assert!(report.has(IssueKind::InsufficientRestraint));
        assert!(report
            .issues
            .iter()
            .any(|i| i.kind == IssueKind::InsufficientRestraint && i.location == Location::Node(3)));
    }

    #[test]
    fn single_pin_is_insufficient() {
        let mut p = simple_beam();
        p.supports.pop();
        assert!(validate(&p.build().unwrap()).has(IssueKind::InsufficientRestraint));
    }

    #[test]
    fn bad_properties_and_loads() {
        let mut p = simple_beam();
        p.materials[0].elastic_modulus = 0.0;
        p.load(crate::model::Load::PointMass { node: 2, mass: -1.0 });
        p.load(crate::model::Load::SelfWeight { g: f64::NAN });
        let report = validate(&p.build().unwrap());
        assert!(report.has(IssueKind::NonPositiveProperty));
        assert_eq!(report.errors().filter(|i| i.kind == IssueKind::InvalidLoad).count(), 2);
    }

    #[test]
    fn unused_material_is_only_a_warning() {
        let mut p = simple_beam();
        p.materials.push(Material::hemp_rope());
        let report = validate(&p.build().unwrap());
        assert!(!report.is_empty());
        assert!(report.is_analyzable());
    }

    #[test]
    fn moment_on_cable_only_node() {
        let mut p = simple_beam();
        p.materials.push(Material::hemp_rope());
        p.node(3, 5.0, 2.0);
        p.cable(2, 1, 3, "hemp-rope", 1e-4).cable(3, 2, 3, "hemp-rope", 1e-4);
        p.load(crate::model::Load::NodalForce(crate::model::NodalForce::new(3, 0.0, 0.0, 5.0)));
        assert!(validate(&p.build().unwrap()).has(IssueKind::MomentWithoutRotation));
    }
}

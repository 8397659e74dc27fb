//! Planar structure description: nodes, materials, sections, members,
//! supports and loads.
//!
//! All quantities are SI (N, m, Pa, kg, rad). The y axis points up.

use std::collections::BTreeSet;

use thiserror::Error;

pub type NodeId = u32;
pub type ElementId = u32;

/// Gravity used for point masses when the model carries no self-weight load.
pub const STANDARD_GRAVITY: f64 = 9.81;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Node {
    pub id: NodeId,
    pub x: f64,
    pub y: f64,
}

impl Node {
    pub fn new(id: NodeId, x: f64, y: f64) -> Self {
        Self { id, x, y }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Material {
    pub name: String,
    /// Young's modulus E (Pa).
    pub elastic_modulus: f64,
    /// Mass density (kg/m³).
    pub density: f64,
    /// Allowable stress used for utilization (Pa).
    pub allowable_stress: f64,
}

impl Material {
    pub fn new(name: &str, elastic_modulus: f64, density: f64, allowable_stress: f64) -> Self {
        Self {
            name: name.to_string(),
            elastic_modulus,
            density,
            allowable_stress,
        }
    }

    /// Structural timber: E = 10 GPa, ρ = 600 kg/m³, σ_allow = 10 MPa.
    pub fn timber() -> Self {
        Self::new("timber", 10.0e9, 600.0, 10.0e6)
    }

    /// Hemp rope: E = 1.5 GPa, ρ = 1400 kg/m³, σ_allow = 20 MPa.
    pub fn hemp_rope() -> Self {
        Self::new("hemp-rope", 1.5e9, 1400.0, 20.0e6)
    }

    /// Looks up a named catalog material.
    pub fn preset(name: &str) -> Option<Self> {
        match name {
            "timber" => Some(Self::timber()),
            "hemp-rope" => Some(Self::hemp_rope()),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Section {
    pub name: String,
    /// Cross-section area (m²).
    pub area: f64,
    /// Second moment of area about the bending axis (m⁴).
    pub second_moment: f64,
    /// Section depth, used for extreme-fibre stress (m).
    pub depth: f64,
}

impl Section {
    pub fn new(name: &str, area: f64, second_moment: f64, depth: f64) -> Self {
        Self {
            name: name.to_string(),
            area,
            second_moment,
            depth,
        }
    }

    /// Solid 0.20 × 0.30 m timber deck beam.
    pub fn deck() -> Self {
        Self::new("deck", 0.06, 4.5e-4, 0.30)
    }

    /// Solid 0.10 × 0.10 m timber post.
    pub fn pillar() -> Self {
        Self::new("pillar", 0.01, 8.33333333e-6, 0.10)
    }

    /// Solid 0.20 × 0.20 m timber tower or pylon.
    pub fn tower() -> Self {
        Self::new("tower", 0.04, 1.33333333e-4, 0.20)
    }

    pub fn preset(name: &str) -> Option<Self> {
        match name {
            "deck" => Some(Self::deck()),
            "pillar" => Some(Self::pillar()),
            "tower" => Some(Self::tower()),
            _ => None,
        }
    }
}

/// Euler–Bernoulli frame member carrying axial force, shear and bending.
#[derive(Debug, Clone, PartialEq)]
pub struct BeamElement {
    pub id: ElementId,
    pub node_i: NodeId,
    pub node_j: NodeId,
    pub material: String,
    pub section: String,
}

/// Tension-only axial member. Never carries compression or bending.
#[derive(Debug, Clone, PartialEq)]
pub struct CableElement {
    pub id: ElementId,
    pub node_i: NodeId,
    pub node_j: NodeId,
    pub material: String,
    pub area: f64,
    /// Initial axial force offset (N), ≥ 0.
    pub pretension: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Support {
    pub node: NodeId,
    pub restrain_x: bool,
    pub restrain_y: bool,
    pub restrain_rz: bool,
}

impl Support {
    pub fn new(node: NodeId, restrain_x: bool, restrain_y: bool, restrain_rz: bool) -> Self {
        Self {
            node,
            restrain_x,
            restrain_y,
            restrain_rz,
        }
    }

    pub fn pinned(node: NodeId) -> Self {
        Self::new(node, true, true, false)
    }

    /// Vertical restraint only.
    pub fn roller(node: NodeId) -> Self {
        Self::new(node, false, true, false)
    }

    pub fn fixed(node: NodeId) -> Self {
        Self::new(node, true, true, true)
    }

    pub fn restrained_count(&self) -> usize {
        [self.restrain_x, self.restrain_y, self.restrain_rz]
            .iter()
            .filter(|r| **r)
            .count()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NodalForce {
    pub node: NodeId,
    pub fx: f64,
    pub fy: f64,
    pub mz: f64,
}

impl NodalForce {
    pub fn new(node: NodeId, fx: f64, fy: f64, mz: f64) -> Self {
        Self { node, fx, fy, mz }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Load {
    NodalForce(NodalForce),
    /// Uniform load on a beam, `w` N/m acting in global −y when positive.
    UniformLoad { beam: ElementId, w: f64 },
    /// Gravity on every member's own mass.
    SelfWeight { g: f64 },
    /// Concentrated mass, e.g. a millstone counterweight.
    PointMass { node: NodeId, mass: f64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("duplicate id {0}")]
    DuplicateId(u32),
    #[error("duplicate name `{0}`")]
    DuplicateName(String),
    #[error("unknown reference {0}")]
    UnknownReference(u32),
    #[error("unknown material or section `{0}`")]
    UnknownName(String),
    #[error("more than one support at node {0}")]
    DuplicateSupport(NodeId),
    #[error("invalid name `{0}`: names must be non-empty and free of whitespace and `=`")]
    InvalidName(String),
}

/// Mutable collection of model parts. [`ModelParts::build`] checks ids and
/// references and freezes the result into a [`StructureModel`].
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ModelParts {
    pub nodes: Vec<Node>,
    pub materials: Vec<Material>,
    pub sections: Vec<Section>,
    pub beams: Vec<BeamElement>,
    pub cables: Vec<CableElement>,
    pub supports: Vec<Support>,
    pub loads: Vec<Load>,
}

impl ModelParts {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn node(&mut self, id: NodeId, x: f64, y: f64) -> &mut Self {
        self.nodes.push(Node::new(id, x, y));
        self
    }

    pub fn beam(&mut self, id: ElementId, i: NodeId, j: NodeId, material: &str, section: &str) -> &mut Self {
        self.beams.push(BeamElement {
            id,
            node_i: i,
            node_j: j,
            material: material.to_string(),
            section: section.to_string(),
        });
        self
    }

    pub fn cable(&mut self, id: ElementId, i: NodeId, j: NodeId, material: &str, area: f64) -> &mut Self {
        self.cables.push(CableElement {
            id,
            node_i: i,
            node_j: j,
            material: material.to_string(),
            area,
            pretension: 0.0,
        });
        self
    }

    pub fn support(&mut self, support: Support) -> &mut Self {
        self.supports.push(support);
        self
    }

    pub fn load(&mut self, load: Load) -> &mut Self {
        self.loads.push(load);
        self
    }

    pub fn build(self) -> Result<StructureModel, ModelError> {
        build_model(
            self.nodes,
            self.materials,
            self.sections,
            self.beams,
            self.cables,
            self.supports,
            self.loads,
        )
    }
}

/// Immutable planar structure. Collections are kept in canonical order:
/// nodes, members and supports by id, materials and sections by name,
/// loads in insertion order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct StructureModel {
    nodes: Vec<Node>,
    materials: Vec<Material>,
    sections: Vec<Section>,
    beams: Vec<BeamElement>,
    cables: Vec<CableElement>,
    supports: Vec<Support>,
    loads: Vec<Load>,
}

fn valid_name(name: &str) -> bool {
    !name.is_empty() && !name.chars().any(|c| c.is_whitespace() || c == '=' || c == '#')
}

/// Aggregates the parts into a model, rejecting duplicate ids and dangling
/// references. Nothing is deduplicated or dropped.
pub fn build_model(
    mut nodes: Vec<Node>,
    mut materials: Vec<Material>,
    mut sections: Vec<Section>,
    mut beams: Vec<BeamElement>,
    mut cables: Vec<CableElement>,
    mut supports: Vec<Support>,
    loads: Vec<Load>,
) -> Result<StructureModel, ModelError> {
    nodes.sort_by_key(|n| n.id);
    if let Some(w) = nodes.windows(2).find(|w| w[0].id == w[1].id) {
        return Err(ModelError::DuplicateId(w[0].id));
    }

    for name in materials.iter().map(|m| &m.name).chain(sections.iter().map(|s| &s.name)) {
        if !valid_name(name) {
            return Err(ModelError::InvalidName(name.clone()));
        }
    }
    materials.sort_by(|a, b| a.name.cmp(&b.name));
    if let Some(w) = materials.windows(2).find(|w| w[0].name == w[1].name) {
        return Err(ModelError::DuplicateName(w[0].name.clone()));
    }
    sections.sort_by(|a, b| a.name.cmp(&b.name));
    if let Some(w) = sections.windows(2).find(|w| w[0].name == w[1].name) {
        return Err(ModelError::DuplicateName(w[0].name.clone()));
    }

    beams.sort_by_key(|b| b.id);
    cables.sort_by_key(|c| c.id);
    let mut element_ids = BTreeSet::new();
    for id in beams.iter().map(|b| b.id).chain(cables.iter().map(|c| c.id)) {
        if !element_ids.insert(id) {
            return Err(ModelError::DuplicateId(id));
        }
    }

    let has_node = |id: NodeId| nodes.binary_search_by_key(&id, |n| n.id).is_ok();
    let has_material = |name: &str| materials.binary_search_by(|m| m.name.as_str().cmp(name)).is_ok();
    let has_section = |name: &str| sections.binary_search_by(|s| s.name.as_str().cmp(name)).is_ok();

    for b in &beams {
        for n in [b.node_i, b.node_j] {
            if !has_node(n) {
                return Err(ModelError::UnknownReference(n));
            }
        }
        if !has_material(&b.material) {
            return Err(ModelError::UnknownName(b.material.clone()));
        }
        if !has_section(&b.section) {
            return Err(ModelError::UnknownName(b.section.clone()));
        }
    }
    for c in &cables {
        for n in [c.node_i, c.node_j] {
            if !has_node(n) {
                return Err(ModelError::UnknownReference(n));
            }
        }
        if !has_material(&c.material) {
            return Err(ModelError::UnknownName(c.material.clone()));
        }
    }

    supports.sort_by_key(|s| s.node);
    if let Some(w) = supports.windows(2).find(|w| w[0].node == w[1].node) {
        return Err(ModelError::DuplicateSupport(w[0].node));
    }
    if let Some(s) = supports.iter().find(|s| !has_node(s.node)) {
        return Err(ModelError::UnknownReference(s.node));
    }

    for load in &loads {
        match *load {
            Load::NodalForce(f) if !has_node(f.node) => return Err(ModelError::UnknownReference(f.node)),
            Load::PointMass { node, .. } if !has_node(node) => return Err(ModelError::UnknownReference(node)),
            Load::UniformLoad { beam, .. } if beams.binary_search_by_key(&beam, |b| b.id).is_err() => {
                return Err(ModelError::UnknownReference(beam))
            }
            _ => {}
        }
    }

    Ok(StructureModel {
        nodes,
        materials,
        sections,
        beams,
        cables,
        supports,
        loads,
    })
}

impl StructureModel {
    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn materials(&self) -> &[Material] {
        &self.materials
    }

    pub fn sections(&self) -> &[Section] {
        &self.sections
    }

    pub fn beams(&self) -> &[BeamElement] {
        &self.beams
    }

    pub fn cables(&self) -> &[CableElement] {
        &self.cables
    }

    pub fn supports(&self) -> &[Support] {
        &self.supports
    }

    pub fn loads(&self) -> &[Load] {
        &self.loads
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Position of a node in [`Self::nodes`].
    pub fn node_index(&self, id: NodeId) -> Option<usize> {
        self.nodes.binary_search_by_key(&id, |n| n.id).ok()
    }

    pub fn node(&self, id: NodeId) -> Option<&Node> {
        self.node_index(id).map(|i| &self.nodes[i])
    }

    pub fn material(&self, name: &str) -> Option<&Material> {
        self.materials
            .binary_search_by(|m| m.name.as_str().cmp(name))
            .ok()
            .map(|i| &self.materials[i])
    }

    pub fn section(&self, name: &str) -> Option<&Section> {
        self.sections
            .binary_search_by(|s| s.name.as_str().cmp(name))
            .ok()
            .map(|i| &self.sections[i])
    }

    pub fn beam(&self, id: ElementId) -> Option<&BeamElement> {
        self.beams.binary_search_by_key(&id, |b| b.id).ok().map(|i| &self.beams[i])
    }

    pub fn cable(&self, id: ElementId) -> Option<&CableElement> {
        self.cables.binary_search_by_key(&id, |c| c.id).ok().map(|i| &self.cables[i])
    }

    pub fn support(&self, node: NodeId) -> Option<&Support> {
        self.supports
            .binary_search_by_key(&node, |s| s.node)
            .ok()
            .map(|i| &self.supports[i])
    }

    /// Distance between two existing nodes.
    pub fn distance(&self, a: NodeId, b: NodeId) -> Option<f64> {
        let (p, q) = (self.node(a)?, self.node(b)?);
        Some((q.x - p.x).hypot(q.y - p.y))
    }

    /// Length and direction cosines (c, s) of the segment from `a` to `b`.
    pub fn geometry(&self, a: NodeId, b: NodeId) -> Option<(f64, f64, f64)> {
        let (p, q) = (self.node(a)?, self.node(b)?);
        let (dx, dy) = (q.x - p.x, q.y - p.y);
        let length = dx.hypot(dy);
        Some((length, dx / length, dy / length))
    }

    /// Sum of `g` over all self-weight loads, or `None` if there are none.
    pub fn self_weight_gravity(&self) -> Option<f64> {
        let mut total = None;
        for load in &self.loads {
            if let Load::SelfWeight { g } = load {
                *total.get_or_insert(0.0) += g;
            }
        }
        total
    }

    /// Gravity applied to point masses: that of the first self-weight load
    /// if present, standard gravity otherwise. Point masses enter once, so
    /// repeating every load entry doubles their weight, like everything else.
    pub fn point_mass_gravity(&self) -> f64 {
        self.loads
            .iter()
            .find_map(|load| match load {
                Load::SelfWeight { g } => Some(*g),
                _ => None,
            })
            .unwrap_or(STANDARD_GRAVITY)
    }

    /// Σ A·L over beams and cables (m³).
    pub fn material_volume(&self) -> f64 {
        let beams = self.beams.iter().map(|b| {
            let area = self.section(&b.section).map_or(0.0, |s| s.area);
            area * self.distance(b.node_i, b.node_j).unwrap_or(0.0)
        });
        let cables = self
            .cables
            .iter()
            .map(|c| c.area * self.distance(c.node_i, c.node_j).unwrap_or(0.0));
        beams.chain(cables).sum()
    }

    pub fn to_parts(&self) -> ModelParts {
        ModelParts {
            nodes: self.nodes.clone(),
            materials: self.materials.clone(),
            sections: self.sections.clone(),
            beams: self.beams.clone(),
            cables: self.cables.clone(),
            supports: self.supports.clone(),
            loads: self.loads.clone(),
        }
    }
}

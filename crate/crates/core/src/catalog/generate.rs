use std::collections::BTreeSet;

use crate::model::{ElementId, Load, Material, ModelParts, NodeId, Section, StructureModel, Support, STANDARD_GRAVITY};

use super::{BridgeKind, BridgeSpec, CatalogError, Wheels};

/// Rope cross-section area (m²).
pub const ROPE_AREA: f64 = 5e-4;
/// Depth of riverbed and pylon footings below the deck (m).
pub const RIVERBED_DEPTH: f64 = 2.0;

/// Coordinates are snapped to a micrometre grid so that the 9-digit text
/// format reproduces them exactly.
fn snap(v: f64) -> f64 {
    let s = (v * 1e6).round() / 1e6;
    if s == 0.0 {
        0.0
    } else {
        s
    }
}

pub fn deck_node_count(spec: &BridgeSpec) -> usize {
    spec.deck_segments + 1
}

struct Builder<'a> {
    spec: &'a BridgeSpec,
    parts: ModelParts,
    next_node: NodeId,
    beam_links: Vec<(NodeId, NodeId, String)>,
    cable_links: Vec<(NodeId, NodeId)>,
    cable_seen: BTreeSet<(NodeId, NodeId)>,
}

impl<'a> Builder<'a> {
    fn new(spec: &'a BridgeSpec) -> Self {
        let mut b = Self {
            spec,
            parts: ModelParts::new(),
            next_node: 1,
            beam_links: Vec::new(),
            cable_links: Vec::new(),
            cable_seen: BTreeSet::new(),
        };
        let n = spec.deck_segments;
        for i in 0..=n {
            b.add_node(spec.span * i as f64 / n as f64, 0.0);
        }
        for i in 1..=n as NodeId {
            b.add_beam(i, i + 1, &spec.deck_section.clone());
        }
        b.parts.support(Support::pinned(1));
        b.parts.support(Support::roller(n as NodeId + 1));
        b
    }

    fn deck_node(&self, index: usize) -> NodeId {
        index as NodeId + 1
    }

    fn deck_x(&self, index: usize) -> f64 {
        snap(self.spec.span * index as f64 / self.spec.deck_segments as f64)
    }

    fn add_node(&mut self, x: f64, y: f64) -> NodeId {
        let id = self.next_node;
        self.next_node += 1;
        self.parts.node(id, snap(x), snap(y));
        id
    }

    fn add_beam(&mut self, i: NodeId, j: NodeId, section: &str) {
        self.beam_links.push((i, j, section.to_string()));
    }

    /// Adds a cable unless one already joins the same two nodes.
    fn add_cable(&mut self, i: NodeId, j: NodeId) {
        if self.cable_seen.insert((i.min(j), i.max(j))) {
            self.cable_links.push((i, j));
        }
    }

    fn finish(mut self) -> Result<StructureModel, CatalogError> {
        let spec = self.spec;
        let mut id: ElementId = 1;
        let mut sections = BTreeSet::new();
        for (i, j, section) in std::mem::take(&mut self.beam_links) {
            self.parts.beam(id, i, j, &spec.deck_material, &section);
            sections.insert(section);
            id += 1;
        }
        let links = std::mem::take(&mut self.cable_links);
        for (i, j) in &links {
            self.parts.cable(id, *i, *j, &spec.rope_material, ROPE_AREA);
            id += 1;
        }

        let mut materials = vec![spec.deck_material.clone()];
        if !links.is_empty() && spec.rope_material != spec.deck_material {
            materials.push(spec.rope_material.clone());
        }
        for name in materials {
            let m = Material::preset(&name)
                .ok_or_else(|| CatalogError::InvalidSpec(format!("unknown material preset `{name}`")))?;
            self.parts.materials.push(m);
        }
        for name in sections {
            let s = Section::preset(&name)
                .ok_or_else(|| CatalogError::InvalidSpec(format!("unknown section preset `{name}`")))?;
            self.parts.sections.push(s);
        }

        self.parts.load(Load::SelfWeight { g: STANDARD_GRAVITY });
        if spec.deck_load > 0.0 {
            for beam in 1..=spec.deck_segments as ElementId {
                self.parts.load(Load::UniformLoad {
                    beam,
                    w: spec.deck_load,
                });
            }
        }
        let last = self.deck_node(spec.deck_segments);
        // cantilever bridges carry counterweights over both back-span ends
        let wheels = match spec.kind {
            BridgeKind::CantileverBridge => Wheels::BothSides,
            _ => spec.wheels,
        };
        let wheel_nodes: &[NodeId] = match wheels {
            Wheels::None => &[],
            Wheels::RightOnly => &[last],
            Wheels::BothSides => &[1, last],
        };
        if spec.wheel_mass > 0.0 {
            for &node in wheel_nodes {
                self.parts.load(Load::PointMass {
                    node,
                    mass: spec.wheel_mass,
                });
            }
        }
        Ok(self.parts.build()?)
    }
}

/// Deck indices of the pillars: equally spaced, mirror-symmetric about
/// midspan.
fn pillar_indices(n: usize, count: usize) -> Vec<usize> {
    let bays = count + 1;
    // nearest deck node to (p+1)·n/bays, halves rounded up
    let left = |p: usize| (2 * (p + 1) * n + bays) / (2 * bays);
    (0..count)
        .map(|p| match (2 * p + 1).cmp(&count) {
            std::cmp::Ordering::Less => left(p),
            std::cmp::Ordering::Equal => n / 2,
            std::cmp::Ordering::Greater => n - left(count - 1 - p),
        })
        .collect()
}

fn replica(b: &mut Builder, grounded: bool) {
    let spec = b.spec;
    let n = spec.deck_segments;
    let rise = if spec.posts_below {
        -spec.pillar_height
    } else {
        spec.pillar_height
    };
    let indices = pillar_indices(n, spec.pillar_count);
    let mut tops = Vec::with_capacity(indices.len());
    for &k in &indices {
        let x = b.deck_x(k);
        let top = b.add_node(x, rise);
        b.add_beam(b.deck_node(k), top, &spec.pillar_section.clone());
        tops.push(top);
    }
    if grounded {
        for &k in &indices {
            let x = b.deck_x(k);
            let foot = b.add_node(x, -RIVERBED_DEPTH);
            b.add_beam(foot, b.deck_node(k), &spec.pillar_section.clone());
            b.parts.support(Support::fixed(foot));
        }
    }
    for (&k, &top) in indices.iter().zip(&tops) {
        b.add_cable(top, b.deck_node(k - 1));
        b.add_cable(top, b.deck_node(k + 1));
    }
    if spec.crosswise_top_ropes {
        for p in 1..indices.len() {
            let (ka, kb) = (indices[p - 1], indices[p]);
            let (ta, tb) = (tops[p - 1], tops[p]);
            b.add_cable(ta, tb);
            b.add_cable(ta, b.deck_node(kb));
            b.add_cable(tb, b.deck_node(ka));
        }
    }
    if spec.mid_support {
        b.parts.support(Support::roller(b.deck_node(n / 2)));
    }
}

/// Pylon at deck index `k` grounded on a footing below the deck; returns
/// the pylon top.
fn pylon(b: &mut Builder, k: usize, height: f64) -> NodeId {
    let x = b.deck_x(k);
    let foot = b.add_node(x, -RIVERBED_DEPTH);
    let top = b.add_node(x, height);
    b.add_beam(foot, b.deck_node(k), "tower");
    b.add_beam(b.deck_node(k), top, "tower");
    b.parts.support(Support::fixed(foot));
    top
}

fn backstay(b: &mut Builder, top: NodeId, x: f64) {
    let anchor = b.add_node(x, 0.0);
    b.parts.support(Support::pinned(anchor));
    b.add_cable(top, anchor);
}

fn cable_stayed(b: &mut Builder) {
    let spec = b.spec;
    let n = spec.deck_segments;
    let height = spec.span / 4.0;
    let left = pylon(b, 0, height);
    let right = pylon(b, n, height);
    for k in 1..n {
        let top = if 2 * k <= n { left } else { right };
        b.add_cable(top, b.deck_node(k));
    }
    backstay(b, left, -spec.span / 4.0);
    backstay(b, right, spec.span * 1.25);
}

fn suspension(b: &mut Builder) {
    let spec = b.spec;
    let n = spec.deck_segments;
    let height = spec.span / 4.0;
    let sag = 0.75 * height;
    let left = pylon(b, 0, height);
    let right = pylon(b, n, height);
    // Hangers are slender rods rather than ropes: with a deck much stiffer
    // than the rope chain, rope hangers go slack and leave the main cable
    // a mechanism in a linear analysis.
    let hanger = spec.pillar_section.clone();
    let mut previous = left;
    for k in 1..n {
        let t = k as f64 / n as f64;
        let y = height - 4.0 * sag * t * (1.0 - t);
        let node = b.add_node(b.deck_x(k), y);
        b.add_cable(previous, node);
        b.add_beam(b.deck_node(k), node, &hanger);
        previous = node;
    }
    b.add_cable(previous, right);
    backstay(b, left, -spec.span / 4.0);
    backstay(b, right, spec.span * 1.25);
}

fn truss(b: &mut Builder) {
    let spec = b.spec;
    let n = spec.deck_segments;
    let web = spec.pillar_section.clone();
    let chord = spec.deck_section.clone();
    let tops: Vec<NodeId> = (1..n).map(|k| b.add_node(b.deck_x(k), spec.pillar_height)).collect();
    let top = |k: usize| tops[k - 1];
    for k in 1..n {
        b.add_beam(b.deck_node(k), top(k), &web);
    }
    for k in 1..n - 1 {
        b.add_beam(top(k), top(k + 1), &chord);
    }
    b.add_beam(b.deck_node(0), top(1), &chord);
    b.add_beam(top(n - 1), b.deck_node(n), &chord);
    // Pratt diagonals slope down toward midspan
    for k in 1..n - 1 {
        if 2 * (k + 1) <= n {
            b.add_beam(top(k), b.deck_node(k + 1), &web);
        } else {
            b.add_beam(top(k + 1), b.deck_node(k), &web);
        }
    }
}

fn cantilever(b: &mut Builder) {
    let spec = b.spec;
    let n = spec.deck_segments;
    let section = spec.pillar_section.clone();
    for k in [n / 4, n - n / 4] {
        let foot = b.add_node(b.deck_x(k), -spec.pillar_height);
        b.add_beam(foot, b.deck_node(k), &section);
        b.parts.support(Support::fixed(foot));
    }
    // the ends rest on rollers; counterweights sit over them
    b.parts.supports.retain(|s| s.node != 1);
    b.parts.support(Support::roller(1));
}

/// Builds the structural model described by `spec`. Deck nodes are numbered
/// 1..=N+1 from left to right and deck beams 1..=N; other nodes, beams and
/// cables follow in that order.
pub fn generate(spec: &BridgeSpec) -> Result<StructureModel, CatalogError> {
    spec.validate()?;
    let mut b = Builder::new(spec);
    match spec.kind {
        BridgeKind::BeamBridge => {}
        BridgeKind::LeonardoReplica => replica(&mut b, false),
        BridgeKind::LeonardoGrounded => replica(&mut b, true),
        BridgeKind::CableStayedBridge => cable_stayed(&mut b),
        BridgeKind::SuspensionBridge => suspension(&mut b),
        BridgeKind::TrussBridge => truss(&mut b),
        BridgeKind::CantileverBridge => cantilever(&mut b),
    }
    b.finish()
}

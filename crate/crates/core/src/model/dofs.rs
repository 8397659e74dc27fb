//! Numbering of free degrees of freedom.

use std::fmt;

use super::types::{NodeId, StructureModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Dof {
    X,
    Y,
    Rz,
}

impl Dof {
    pub const ALL: [Dof; 3] = [Dof::X, Dof::Y, Dof::Rz];

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Dof {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Dof::X => "x",
            Dof::Y => "y",
            Dof::Rz => "rz",
        })
    }
}

/// Map from (node, component) to equation number. Nodes appear in ascending
/// id order, components in x, y, rz order; restrained components and
/// rotations at nodes without any beam are left out.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DofMap {
    slots: Vec<(NodeId, [Option<usize>; 3])>,
    labels: Vec<(NodeId, Dof)>,
}

impl DofMap {
    pub fn new(model: &StructureModel) -> Self {
        let mut has_beam = vec![false; model.nodes().len()];
        for b in model.beams() {
            for n in [b.node_i, b.node_j] {
                if let Some(slot) = model.node_index(n) {
                    has_beam[slot] = true;
                }
            }
        }
        let mut slots = Vec::with_capacity(model.nodes().len());
        let mut labels = Vec::new();
        for (slot, node) in model.nodes().iter().enumerate() {
            let support = model.support(node.id);
            let held = [
                support.is_some_and(|s| s.restrain_x),
                support.is_some_and(|s| s.restrain_y),
                support.is_some_and(|s| s.restrain_rz) || !has_beam[slot],
            ];
            let mut eq = [None; 3];
            for dof in Dof::ALL {
                if !held[dof.index()] {
                    eq[dof.index()] = Some(labels.len());
                    labels.push((node.id, dof));
                }
            }
            slots.push((node.id, eq));
        }
        Self { slots, labels }
    }

    /// Number of free degrees of freedom.
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn index(&self, node: NodeId, dof: Dof) -> Option<usize> {
        let slot = self.slots.binary_search_by_key(&node, |s| s.0).ok()?;
        self.slots[slot].1[dof.index()]
    }

    /// Equation numbers for the node at position `slot` in the model.
    pub fn slot(&self, slot: usize) -> [Option<usize>; 3] {
        self.slots[slot].1
    }

    /// Node and component owning equation `eq`.
    pub fn label(&self, eq: usize) -> (NodeId, Dof) {
        self.labels[eq]
    }
}

pub fn dof_map(model: &StructureModel) -> DofMap {
    DofMap::new(model)
}

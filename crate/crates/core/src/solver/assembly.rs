//! Global assembly over the free degrees of freedom.

use std::collections::BTreeSet;

use crate::model::{gravity_loads, DofMap, ElementId, Load, StructureModel};

use super::element::{
    beam_stiffness_local, cable_stiffness_global, rotation, to_global, transpose_mul6, uniform_fixed_end_actions,
    Mat4, Mat6,
};
use super::linalg::StiffnessMatrix;
use super::SolveError;

pub(crate) struct BeamData {
    pub id: ElementId,
    pub slots: [usize; 2],
    pub direction: (f64, f64),
    pub length: f64,
    pub t: Mat6,
    pub k_local: Mat6,
    pub k_global: Mat6,
    /// Summed fixed-end actions of all uniform loads, local axes.
    pub fixed_end: [f64; 6],
    pub area: f64,
    pub second_moment: f64,
    pub depth: f64,
    pub allowable: f64,
}

pub(crate) struct CableData {
    pub id: ElementId,
    pub slots: [usize; 2],
    pub direction: (f64, f64),
    pub axial_stiffness: f64,
    pub pretension: f64,
    pub area: f64,
    pub allowable: f64,
    pub k: Mat4,
}

impl CableData {
    /// Change in length from nodal translations.
    pub fn elongation(&self, nodes: &[[f64; 3]]) -> f64 {
        let (a, b) = (nodes[self.slots[0]], nodes[self.slots[1]]);
        let (c, s) = self.direction;
        c * (b[0] - a[0]) + s * (b[1] - a[1])
    }

    /// Axial force the cable would carry if taut.
    pub fn trial_force(&self, nodes: &[[f64; 3]]) -> f64 {
        self.axial_stiffness * self.elongation(nodes) + self.pretension
    }
}

/// Element data and applied nodal loads, prepared once per model.
pub(crate) struct Prepared {
    pub dofs: DofMap,
    pub beams: Vec<BeamData>,
    pub cables: Vec<CableData>,
    /// Applied nodal loads per node slot, gravity included.
    pub nodal: Vec<[f64; 3]>,
    /// Total applied load per global direction (x, y).
    pub applied_total: [f64; 2],
    /// Σ of absolute load components, the scale for equilibrium checks.
    pub applied_magnitude: f64,
}

fn missing(what: &str, name: &str) -> SolveError {
    SolveError::InvalidModel(format!("unknown {what} `{name}`"))
}

impl Prepared {
    pub fn new(model: &StructureModel) -> Result<Self, SolveError> {
        let dofs = DofMap::new(model);
        let slot = |id| {
            model
                .node_index(id)
                .ok_or_else(|| SolveError::InvalidModel(format!("unknown node {id}")))
        };

        let mut beams = Vec::with_capacity(model.beams().len());
        for b in model.beams() {
            let material = model.material(&b.material).ok_or_else(|| missing("material", &b.material))?;
            let section = model.section(&b.section).ok_or_else(|| missing("section", &b.section))?;
            let (length, c, s) = model.geometry(b.node_i, b.node_j).unwrap_or((0.0, 1.0, 0.0));
            let k_local = beam_stiffness_local(material.elastic_modulus, section.area, section.second_moment, length)
                .map_err(|e| e.for_element(b.id))?;
            let t = rotation(c, s);
            beams.push(BeamData {
                id: b.id,
                slots: [slot(b.node_i)?, slot(b.node_j)?],
                direction: (c, s),
                length,
                t,
                k_global: to_global(&k_local, &t),
                k_local,
                fixed_end: [0.0; 6],
                area: section.area,
                second_moment: section.second_moment,
                depth: section.depth,
                allowable: material.allowable_stress,
            });
        }

        let mut cables = Vec::with_capacity(model.cables().len());
        for cable in model.cables() {
            let material = model.material(&cable.material).ok_or_else(|| missing("material", &cable.material))?;
            let (length, c, s) = model.geometry(cable.node_i, cable.node_j).unwrap_or((0.0, 1.0, 0.0));
            let k = cable_stiffness_global(material.elastic_modulus, cable.area, length, (c, s))
                .map_err(|e| e.for_element(cable.id))?;
            cables.push(CableData {
                id: cable.id,
                slots: [slot(cable.node_i)?, slot(cable.node_j)?],
                direction: (c, s),
                axial_stiffness: material.elastic_modulus * cable.area / length,
                pretension: cable.pretension,
                area: cable.area,
                allowable: material.allowable_stress,
                k,
            });
        }

        let mut nodal = vec![[0.0; 3]; model.nodes().len()];
        let mut applied_total = [0.0; 2];
        let mut applied_magnitude = 0.0;
        let mut point_loads = gravity_loads(model);
        point_loads.extend(model.loads().iter().filter_map(|l| match l {
            Load::NodalForce(f) => Some(*f),
            _ => None,
        }));
        for f in point_loads {
            let s = slot(f.node)?;
            nodal[s][0] += f.fx;
            nodal[s][1] += f.fy;
            nodal[s][2] += f.mz;
            applied_total[0] += f.fx;
            applied_total[1] += f.fy;
            applied_magnitude += f.fx.abs() + f.fy.abs();
        }
        for load in model.loads() {
            if let Load::UniformLoad { beam, w } = *load {
                let data = beams
                    .iter_mut()
                    .find(|b| b.id == beam)
                    .ok_or_else(|| SolveError::InvalidModel(format!("uniform load on unknown beam {beam}")))?;
                let (c, s) = data.direction;
                // global (0, −w) per unit length in local components
                let actions = uniform_fixed_end_actions(-w * s, -w * c, data.length);
                for (acc, v) in data.fixed_end.iter_mut().zip(actions) {
                    *acc += v;
                }
                applied_total[1] -= w * data.length;
                applied_magnitude += (w * data.length).abs();
            }
        }

        Ok(Self {
            dofs,
            beams,
            cables,
            nodal,
            applied_total,
            applied_magnitude,
        })
    }

    fn beam_equations(&self, b: &BeamData) -> [Option<usize>; 6] {
        let (a, c) = (self.dofs.slot(b.slots[0]), self.dofs.slot(b.slots[1]));
        [a[0], a[1], a[2], c[0], c[1], c[2]]
    }

    fn cable_equations(&self, cable: &CableData) -> [Option<usize>; 4] {
        let (a, c) = (self.dofs.slot(cable.slots[0]), self.dofs.slot(cable.slots[1]));
        [a[0], a[1], c[0], c[1]]
    }

    pub fn assemble(&self, active: &BTreeSet<ElementId>) -> AssembledSystem {
        let n = self.dofs.len();
        let mut k = StiffnessMatrix::zeros(n);
        let mut f = vec![0.0; n];

        for (slot, load) in self.nodal.iter().enumerate() {
            for (eq, v) in self.dofs.slot(slot).iter().zip(load) {
                if let Some(eq) = eq {
                    f[*eq] += v;
                }
            }
        }

        for b in &self.beams {
            let eqs = self.beam_equations(b);
            for (r, er) in eqs.iter().enumerate() {
                let Some(er) = er else { continue };
                for (c, ec) in eqs.iter().enumerate() {
                    if let Some(ec) = ec {
                        k.add(*er, *ec, b.k_global[r][c]);
                    }
                }
            }
            if b.fixed_end.iter().any(|v| *v != 0.0) {
                let equivalent = transpose_mul6(&b.t, &b.fixed_end);
                for (eq, v) in eqs.iter().zip(equivalent) {
                    if let Some(eq) = eq {
                        f[*eq] -= v;
                    }
                }
            }
        }

        for cable in self.cables.iter().filter(|c| active.contains(&c.id)) {
            let eqs = self.cable_equations(cable);
            for (r, er) in eqs.iter().enumerate() {
                let Some(er) = er else { continue };
                for (c, ec) in eqs.iter().enumerate() {
                    if let Some(ec) = ec {
                        k.add(*er, *ec, cable.k[r][c]);
                    }
                }
            }
            if cable.pretension != 0.0 {
                let (c, s) = cable.direction;
                let p = cable.pretension;
                let pull = [p * c, p * s, -p * c, -p * s];
                for (eq, v) in eqs.iter().zip(pull) {
                    if let Some(eq) = eq {
                        f[*eq] += v;
                    }
                }
            }
        }

        AssembledSystem { stiffness: k, loads: f }
    }

    /// Stiffness over all 3 components of every node, no constraints.
    pub fn assemble_unconstrained(&self, active: &BTreeSet<ElementId>) -> StiffnessMatrix {
        let n = 3 * self.nodal.len();
        let mut k = StiffnessMatrix::zeros(n);
        for b in &self.beams {
            let eqs: Vec<usize> = b.slots.iter().flat_map(|s| (0..3).map(move |d| 3 * s + d)).collect();
            for r in 0..6 {
                for c in 0..6 {
                    k.add(eqs[r], eqs[c], b.k_global[r][c]);
                }
            }
        }
        for cable in self.cables.iter().filter(|c| active.contains(&c.id)) {
            let eqs: Vec<usize> = cable.slots.iter().flat_map(|s| (0..2).map(move |d| 3 * s + d)).collect();
            for r in 0..4 {
                for c in 0..4 {
                    k.add(eqs[r], eqs[c], cable.k[r][c]);
                }
            }
        }
        k
    }

    /// Per-node (ux, uy, rz) from the free-dof solution; constrained and
    /// excluded components are zero.
    pub fn expand(&self, u: &[f64]) -> Vec<[f64; 3]> {
        (0..self.nodal.len())
            .map(|slot| {
                let eqs = self.dofs.slot(slot);
                [0, 1, 2].map(|d| eqs[d].map_or(0.0, |eq| u[eq]))
            })
            .collect()
    }
}

/// Reduced system K·u = F over free degrees of freedom.
#[derive(Debug, Clone, PartialEq)]
pub struct AssembledSystem {
    pub stiffness: StiffnessMatrix,
    pub loads: Vec<f64>,
}

/// Assembles K and F over the free dofs of `model`, including only the
/// listed cables. Uniform loads enter F through their fixed-end actions.
pub fn assemble(model: &StructureModel, active_cables: &BTreeSet<ElementId>) -> Result<AssembledSystem, SolveError> {
    Ok(Prepared::new(model)?.assemble(active_cables))
}

/// Full unconstrained stiffness, three components per node in node order.
pub fn assemble_unconstrained(
    model: &StructureModel,
    active_cables: &BTreeSet<ElementId>,
) -> Result<StiffnessMatrix, SolveError> {
    Ok(Prepared::new(model)?.assemble_unconstrained(active_cables))
}

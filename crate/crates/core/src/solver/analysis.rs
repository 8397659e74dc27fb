//! Tension-only active-set iteration, force recovery, reactions and
//! utilization.

use std::collections::{BTreeSet, HashMap};

use crate::model::{DofMap, ElementId, Material, NodeId, Section, StructureModel};

use super::assembly::{BeamData, CableData, Prepared};
use super::element::mat_vec6;
use super::linalg::solve_linear;
use super::SolveError;

/// Force threshold (N) for active-set decisions.
pub const FORCE_TOLERANCE: f64 = 1e-6;
/// Iteration cap for the active-set loop.
pub const MAX_ITERATIONS: usize = 100;

/// Converged active-set solution.
#[derive(Debug, Clone, PartialEq)]
pub struct ActiveSetSolution {
    pub dofs: DofMap,
    /// Displacements per free dof (m, rad).
    pub displacements: Vec<f64>,
    pub active_cables: BTreeSet<ElementId>,
    pub iterations: usize,
}

fn label_singular(err: SolveError, dofs: &DofMap, active: &BTreeSet<ElementId>) -> SolveError {
    match err {
        SolveError::SingularSystem { pivot: Some(eq), detail } => {
            let (node, dof) = dofs.label(eq);
            SolveError::SingularSystem {
                pivot: Some(eq),
                detail: format!("{detail} (node {node}, {dof}) with {} taut cables", active.len()),
            }
        }
        other => other,
    }
}

fn iterate(prep: &Prepared) -> Result<ActiveSetSolution, SolveError> {
    let mut active: BTreeSet<ElementId> = prep.cables.iter().map(|c| c.id).collect();
    let mut history: Vec<Vec<ElementId>> = Vec::new();
    let mut seen: HashMap<Vec<ElementId>, usize> = HashMap::new();

    for iteration in 1..=MAX_ITERATIONS {
        let key: Vec<ElementId> = active.iter().copied().collect();
        if let Some(&first) = seen.get(&key) {
            return Err(SolveError::NoConvergence {
                iterations: iteration - 1,
                cycle: history[first..].to_vec(),
            });
        }
        seen.insert(key.clone(), history.len());
        history.push(key);

        let system = prep.assemble(&active);
        let u = solve_linear(&system.stiffness, &system.loads).map_err(|e| label_singular(e, &prep.dofs, &active))?;
        let nodes = prep.expand(&u);

        let mut next = active.clone();
        let mut changed = false;
        for cable in &prep.cables {
            let force = cable.trial_force(&nodes);
            if active.contains(&cable.id) {
                if force < -FORCE_TOLERANCE {
                    next.remove(&cable.id);
                    changed = true;
                }
            } else if force > FORCE_TOLERANCE {
                next.insert(cable.id);
                changed = true;
            }
        }
        if !changed {
            return Ok(ActiveSetSolution {
                dofs: prep.dofs.clone(),
                displacements: u,
                active_cables: active,
                iterations: iteration,
            });
        }
        active = next;
    }
    Err(SolveError::NoConvergence {
        iterations: MAX_ITERATIONS,
        cycle: Vec::new(),
    })
}

/// Finds the set of taut cables by fixed-point iteration: start with every
/// cable active, drop the ones in compression, re-admit slack ones that
/// would be stretched, and repeat until the set stops changing. All changes
/// of one iteration are applied together. A repeated set is reported as
/// [`SolveError::NoConvergence`] with the cycle.
pub fn tension_only_analyze(model: &StructureModel) -> Result<ActiveSetSolution, SolveError> {
    iterate(&Prepared::new(model)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MemberKind {
    Beam,
    Cable,
}

/// Recovered member state. `end_forces` are local end actions on the member
/// in (N_i, V_i, M_i, N_j, V_j, M_j) order; for cables only the axial terms
/// are non-zero.
#[derive(Debug, Clone, PartialEq)]
pub struct MemberResult {
    pub id: ElementId,
    pub kind: MemberKind,
    pub end_forces: [f64; 6],
    /// Axial change in length from the end translations (m).
    pub elongation: f64,
    /// Beams are always active; cables only when taut.
    pub active: bool,
    pub utilization: f64,
}

impl MemberResult {
    /// Axial force at end i, tension positive.
    pub fn axial_i(&self) -> f64 {
        -self.end_forces[0]
    }

    /// Axial force at end j, tension positive.
    pub fn axial_j(&self) -> f64 {
        self.end_forces[3]
    }

    pub fn shear_i(&self) -> f64 {
        self.end_forces[1]
    }

    pub fn shear_j(&self) -> f64 {
        -self.end_forces[4]
    }

    pub fn moment_i(&self) -> f64 {
        self.end_forces[2]
    }

    pub fn moment_j(&self) -> f64 {
        self.end_forces[5]
    }

    /// Cable tension (zero when slack). For beams, the axial force at end j.
    pub fn tension(&self) -> f64 {
        self.axial_j()
    }
}

/// Beam demand/capacity: max over both ends of |N/A| + |M|·(h/2)/I,
/// divided by the allowable stress.
pub fn utilization(end_forces: &[f64; 6], section: &Section, material: &Material) -> f64 {
    beam_ratio(end_forces, section.area, section.second_moment, section.depth, material.allowable_stress)
}

/// Cable demand/capacity N/(A·σ_allow), never negative.
pub fn cable_utilization(tension: f64, area: f64, material: &Material) -> f64 {
    tension.max(0.0) / (area * material.allowable_stress)
}

fn beam_ratio(f: &[f64; 6], area: f64, inertia: f64, depth: f64, allowable: f64) -> f64 {
    let stress = |n: f64, m: f64| n.abs() / area + m.abs() * (depth / 2.0) / inertia;
    stress(f[0], f[2]).max(stress(f[3], f[5])) / allowable
}

fn beam_result(b: &BeamData, nodes: &[[f64; 3]]) -> MemberResult {
    let (a, c) = (nodes[b.slots[0]], nodes[b.slots[1]]);
    let global = [a[0], a[1], a[2], c[0], c[1], c[2]];
    let local = mat_vec6(&b.t, &global);
    let mut f = mat_vec6(&b.k_local, &local);
    for (v, fe) in f.iter_mut().zip(b.fixed_end) {
        *v += fe;
    }
    MemberResult {
        id: b.id,
        kind: MemberKind::Beam,
        end_forces: f,
        elongation: local[3] - local[0],
        active: true,
        utilization: beam_ratio(&f, b.area, b.second_moment, b.depth, b.allowable),
    }
}

fn cable_result(cable: &CableData, nodes: &[[f64; 3]], active: bool) -> MemberResult {
    let elongation = cable.elongation(nodes);
    let tension = if active {
        cable.axial_stiffness * elongation + cable.pretension
    } else {
        0.0
    };
    MemberResult {
        id: cable.id,
        kind: MemberKind::Cable,
        end_forces: [-tension, 0.0, 0.0, tension, 0.0, 0.0],
        elongation,
        active,
        utilization: tension.max(0.0) / (cable.area * cable.allowable),
    }
}

fn recover(prep: &Prepared, nodes: &[[f64; 3]], active: &BTreeSet<ElementId>) -> Vec<MemberResult> {
    let beams = prep.beams.iter().map(|b| beam_result(b, nodes));
    let cables = prep.cables.iter().map(|c| cable_result(c, nodes, active.contains(&c.id)));
    beams.chain(cables).collect()
}

/// Global end forces each member exerts on its nodes' (x, y, rz) slots.
fn nodal_resultants(prep: &Prepared, members: &[MemberResult]) -> Vec<[f64; 3]> {
    let mut acc = vec![[0.0; 3]; prep.nodal.len()];
    let beams = prep.beams.iter().zip(members);
    for (b, m) in beams {
        let g = super::element::transpose_mul6(&b.t, &m.end_forces);
        for (end, slot) in b.slots.iter().enumerate() {
            for d in 0..3 {
                acc[*slot][d] += g[3 * end + d];
            }
        }
    }
    for (cable, m) in prep.cables.iter().zip(&members[prep.beams.len()..]) {
        let (c, s) = cable.direction;
        let n = m.tension();
        acc[cable.slots[0]][0] -= n * c;
        acc[cable.slots[0]][1] -= n * s;
        acc[cable.slots[1]][0] += n * c;
        acc[cable.slots[1]][1] += n * s;
    }
    acc
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Reaction {
    pub node: NodeId,
    pub fx: f64,
    pub fy: f64,
    pub mz: f64,
}

fn compute_reactions(model: &StructureModel, prep: &Prepared, members: &[MemberResult]) -> Vec<Reaction> {
    let resultants = nodal_resultants(prep, members);
    model
        .supports()
        .iter()
        .map(|s| {
            let slot = model.node_index(s.node).expect("support on known node");
            let r = |held: bool, d: usize| {
                if held {
                    resultants[slot][d] - prep.nodal[slot][d]
                } else {
                    0.0
                }
            };
            Reaction {
                node: s.node,
                fx: r(s.restrain_x, 0),
                fy: r(s.restrain_y, 1),
                mz: r(s.restrain_rz, 2),
            }
        })
        .collect()
}

/// Member end forces for the given per-node displacements (ux, uy, rz in
/// model node order). Slack cables report zero force.
pub fn member_end_forces(
    model: &StructureModel,
    node_displacements: &[[f64; 3]],
    active_cables: &BTreeSet<ElementId>,
) -> Result<Vec<MemberResult>, SolveError> {
    let prep = Prepared::new(model)?;
    Ok(recover(&prep, node_displacements, active_cables))
}

/// Support reactions for the given per-node displacements.
pub fn reactions(
    model: &StructureModel,
    node_displacements: &[[f64; 3]],
    active_cables: &BTreeSet<ElementId>,
) -> Result<Vec<Reaction>, SolveError> {
    let prep = Prepared::new(model)?;
    let members = recover(&prep, node_displacements, active_cables);
    Ok(compute_reactions(model, &prep, &members))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NodeDisplacement {
    pub node: NodeId,
    pub ux: f64,
    pub uy: f64,
    pub rz: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisResult {
    pub dofs: DofMap,
    /// Displacements per free dof (m, rad).
    pub displacements: Vec<f64>,
    /// Displacements of every node, in model node order.
    pub nodes: Vec<NodeDisplacement>,
    /// Beams in id order, then cables in id order.
    pub members: Vec<MemberResult>,
    pub reactions: Vec<Reaction>,
    pub active_cables: Vec<ElementId>,
    pub slack_cables: Vec<ElementId>,
    pub iterations_used: usize,
    /// Total applied load per global direction (x, y), gravity included.
    pub applied_total: [f64; 2],
    /// Σ of absolute applied load components.
    pub applied_magnitude: f64,
}

impl AnalysisResult {
    pub fn node(&self, id: NodeId) -> Option<&NodeDisplacement> {
        self.nodes.iter().find(|n| n.node == id)
    }

    pub fn member(&self, id: ElementId) -> Option<&MemberResult> {
        self.members.iter().find(|m| m.id == id)
    }

    pub fn node_displacements(&self) -> Vec<[f64; 3]> {
        self.nodes.iter().map(|n| [n.ux, n.uy, n.rz]).collect()
    }

    /// Largest |uy| and the node where it occurs.
    pub fn max_deflection(&self) -> (Option<NodeId>, f64) {
        self.nodes.iter().fold((None, 0.0), |best, n| {
            if n.uy.abs() > best.1 {
                (Some(n.node), n.uy.abs())
            } else {
                best
            }
        })
    }

    /// Highest utilization and the member carrying it.
    pub fn max_utilization(&self) -> (Option<ElementId>, f64) {
        self.members.iter().fold((None, 0.0), |best, m| {
            if m.utilization > best.1 {
                (Some(m.id), m.utilization)
            } else {
                best
            }
        })
    }

    pub fn total_cable_tension(&self) -> f64 {
        self.members
            .iter()
            .filter(|m| m.kind == MemberKind::Cable)
            .map(|m| m.tension())
            .sum()
    }

    /// Σ reactions + Σ applied loads per global direction.
    pub fn equilibrium_residual(&self) -> [f64; 2] {
        let rx: f64 = self.reactions.iter().map(|r| r.fx).sum();
        let ry: f64 = self.reactions.iter().map(|r| r.fy).sum();
        [rx + self.applied_total[0], ry + self.applied_total[1]]
    }
}

/// Full analysis: gravity expansion, dof numbering, tension-only iteration,
/// force recovery, reactions and utilization.
pub fn analyze(model: &StructureModel) -> Result<AnalysisResult, SolveError> {
    let prep = Prepared::new(model)?;
    let solution = iterate(&prep)?;
    let nodes = prep.expand(&solution.displacements);
    let members = recover(&prep, &nodes, &solution.active_cables);
    let reactions = compute_reactions(model, &prep, &members);
    let slack_cables = model
        .cables()
        .iter()
        .map(|c| c.id)
        .filter(|id| !solution.active_cables.contains(id))
        .collect();
    Ok(AnalysisResult {
        nodes: model
            .nodes()
            .iter()
            .zip(&nodes)
            .map(|(n, u)| NodeDisplacement {
                node: n.id,
                ux: u[0],
                uy: u[1],
                rz: u[2],
            })
            .collect(),
        dofs: solution.dofs,
        displacements: solution.displacements,
        members,
        reactions,
        active_cables: solution.active_cables.into_iter().collect(),
        slack_cables,
        iterations_used: solution.iterations,
        applied_total: prep.applied_total,
        applied_magnitude: prep.applied_magnitude,
    })
}

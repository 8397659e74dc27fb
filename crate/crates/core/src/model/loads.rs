//! Gravity lumping. Each member's weight ρ·A·L·g is split evenly between
//! its end nodes; point masses contribute m·g at their node.

use std::collections::BTreeMap;

use super::types::{Load, NodalForce, NodeId, StructureModel};

fn add_down(acc: &mut BTreeMap<NodeId, f64>, node: NodeId, force: f64) {
    *acc.entry(node).or_insert(0.0) += force;
}

fn member_weights(model: &StructureModel, g: f64, acc: &mut BTreeMap<NodeId, f64>) {
    for b in model.beams() {
        let (Some(m), Some(s), Some(l)) = (
            model.material(&b.material),
            model.section(&b.section),
            model.distance(b.node_i, b.node_j),
        ) else {
            continue;
        };
        let half = m.density * s.area * l * g / 2.0;
        add_down(acc, b.node_i, half);
        add_down(acc, b.node_j, half);
    }
    for c in model.cables() {
        let (Some(m), Some(l)) = (model.material(&c.material), model.distance(c.node_i, c.node_j)) else {
            continue;
        };
        let half = m.density * c.area * l * g / 2.0;
        add_down(acc, c.node_i, half);
        add_down(acc, c.node_j, half);
    }
}

fn point_masses(model: &StructureModel, g: f64, acc: &mut BTreeMap<NodeId, f64>) {
    for load in model.loads() {
        if let Load::PointMass { node, mass } = *load {
            add_down(acc, node, mass * g);
        }
    }
}

fn to_forces(acc: BTreeMap<NodeId, f64>) -> Vec<NodalForce> {
    acc.into_iter()
        .filter(|(_, f)| *f != 0.0)
        .map(|(node, f)| NodalForce::new(node, 0.0, -f, 0.0))
        .collect()
}

/// Lumped gravity forces for gravity `g`, one downward force per loaded
/// node in ascending node order. Includes point masses.
pub fn self_weight_loads(model: &StructureModel, g: f64) -> Vec<NodalForce> {
    let mut acc = BTreeMap::new();
    member_weights(model, g, &mut acc);
    point_masses(model, g, &mut acc);
    to_forces(acc)
}

/// Gravity forces implied by the model's own loads: member weights under
/// the summed self-weight gravity (if any) and point masses under
/// [`StructureModel::point_mass_gravity`].
pub fn gravity_loads(model: &StructureModel) -> Vec<NodalForce> {
    let mut acc = BTreeMap::new();
    if let Some(g) = model.self_weight_gravity() {
        member_weights(model, g, &mut acc);
    }
    point_masses(model, model.point_mass_gravity(), &mut acc);
    to_forces(acc)
}

use std::collections::{BTreeMap, BTreeSet};

use crate::model::{ElementId, Load, NodalForce, NodeId, StructureModel};

use super::CatalogError;

/// Removes the pillars and ropes of a replica model, leaving the deck with
/// the removed members' weight (and any loads that acted on the pillar
/// tops) applied as nodal forces at the pillar base nodes. Supports, wheel
/// masses and deck loads are kept.
///
/// A replica is recognised structurally: all supports lie on the deck line;
/// every beam either joins two deck nodes or is a pillar from a deck node to
/// an unsupported node used by no other beam; ropes only join deck nodes and
/// pillar tops.
pub fn strip_to_bare_deck(model: &StructureModel) -> Result<StructureModel, CatalogError> {
    if model.cables().is_empty() && model.beams().is_empty() {
        return Ok(model.clone());
    }
    let not_replica = |msg: String| Err(CatalogError::NotAReplica(msg));

    let Some(first) = model.supports().first() else {
        return not_replica("model has no supports".into());
    };
    let deck_y = model.node(first.node).map(|n| n.y).unwrap_or(0.0);
    let on_deck = |id: NodeId| model.node(id).is_some_and(|n| n.y == deck_y);
    if let Some(s) = model.supports().iter().find(|s| !on_deck(s.node)) {
        return not_replica(format!("support at node {} is off the deck line", s.node));
    }

    let mut beam_uses: BTreeMap<NodeId, usize> = BTreeMap::new();
    for b in model.beams() {
        *beam_uses.entry(b.node_i).or_default() += 1;
        *beam_uses.entry(b.node_j).or_default() += 1;
    }

    // pillar top → (pillar id, base node)
    let mut tops: BTreeMap<NodeId, (ElementId, NodeId)> = BTreeMap::new();
    for b in model.beams() {
        match (on_deck(b.node_i), on_deck(b.node_j)) {
            (true, true) => {}
            (true, false) | (false, true) => {
                let (base, top) = if on_deck(b.node_i) {
                    (b.node_i, b.node_j)
                } else {
                    (b.node_j, b.node_i)
                };
                let (base_x, top_x) = (model.node(base).map(|n| n.x), model.node(top).map(|n| n.x));
                if base_x != top_x {
                    return not_replica(format!("beam {} is not a vertical pillar", b.id));
                }
                if model.support(top).is_some() || beam_uses.get(&top) != Some(&1) {
                    return not_replica(format!("pillar {} top node {top} is not free", b.id));
                }
                tops.insert(top, (b.id, base));
            }
            (false, false) => return not_replica(format!("beam {} does not touch the deck", b.id)),
        }
    }
    for c in model.cables() {
        for end in [c.node_i, c.node_j] {
            if !on_deck(end) && !tops.contains_key(&end) {
                return not_replica(format!("cable {} ends at node {end}, neither deck nor pillar top", c.id));
            }
        }
    }
    if tops.is_empty() && model.cables().is_empty() {
        return Ok(model.clone());
    }

    let base_of = |node: NodeId| tops.get(&node).map_or(node, |&(_, base)| base);
    let height_of = |node: NodeId| -> f64 {
        match (model.node(node), model.node(base_of(node))) {
            (Some(t), Some(b)) => t.y - b.y,
            _ => 0.0,
        }
    };

    // forces transferred to deck nodes, as (fx, fy, mz)
    let mut transfer: BTreeMap<NodeId, [f64; 3]> = BTreeMap::new();
    let mut push = |node: NodeId, fx: f64, fy: f64, mz: f64| {
        let f = transfer.entry(node).or_insert([0.0; 3]);
        f[0] += fx;
        f[1] += fy;
        f[2] += mz;
    };

    let g = model.self_weight_gravity().unwrap_or(0.0);
    if g != 0.0 {
        let pillar_ids: BTreeSet<ElementId> = tops.values().map(|&(id, _)| id).collect();
        for b in model.beams().iter().filter(|b| pillar_ids.contains(&b.id)) {
            let rho = model.material(&b.material).map_or(0.0, |m| m.density);
            let area = model.section(&b.section).map_or(0.0, |s| s.area);
            let half = rho * area * model.distance(b.node_i, b.node_j).unwrap_or(0.0) * g / 2.0;
            push(base_of(b.node_i), 0.0, -half, 0.0);
            push(base_of(b.node_j), 0.0, -half, 0.0);
        }
        for c in model.cables() {
            let rho = model.material(&c.material).map_or(0.0, |m| m.density);
            let half = rho * c.area * model.distance(c.node_i, c.node_j).unwrap_or(0.0) * g / 2.0;
            push(base_of(c.node_i), 0.0, -half, 0.0);
            push(base_of(c.node_j), 0.0, -half, 0.0);
        }
    }

    let removed_beams: BTreeSet<ElementId> = tops.values().map(|&(id, _)| id).collect();
    let mut loads = Vec::with_capacity(model.loads().len());
    for load in model.loads() {
        match *load {
            Load::NodalForce(f) if tops.contains_key(&f.node) => {
                // moment of the force about the base: r × F with r = (0, h)
                push(base_of(f.node), f.fx, f.fy, f.mz - height_of(f.node) * f.fx);
            }
            Load::PointMass { node, mass } if tops.contains_key(&node) => {
                push(base_of(node), 0.0, -mass * model.point_mass_gravity(), 0.0);
            }
            Load::UniformLoad { beam, w } if removed_beams.contains(&beam) => {
                let b = model.beam(beam).expect("load references a known beam");
                let total = w * model.distance(b.node_i, b.node_j).unwrap_or(0.0);
                push(base_of(b.node_i), 0.0, -total, 0.0);
            }
            _ => loads.push(*load),
        }
    }
    for (node, [fx, fy, mz]) in transfer {
        if fx != 0.0 || fy != 0.0 || mz != 0.0 {
            loads.push(Load::NodalForce(NodalForce::new(node, fx, fy, mz)));
        }
    }

    let mut parts = model.to_parts();
    parts.nodes.retain(|n| !tops.contains_key(&n.id));
    parts.beams.retain(|b| !removed_beams.contains(&b.id));
    parts.cables.clear();
    parts.loads = loads;
    let used_materials: BTreeSet<&str> = parts.beams.iter().map(|b| b.material.as_str()).collect();
    let used_sections: BTreeSet<&str> = parts.beams.iter().map(|b| b.section.as_str()).collect();
    let materials = parts
        .materials
        .iter()
        .filter(|m| used_materials.contains(m.name.as_str()))
        .cloned()
        .collect();
    let sections = parts
        .sections
        .iter()
        .filter(|s| used_sections.contains(s.name.as_str()))
        .cloned()
        .collect();
    parts.materials = materials;
    parts.sections = sections;
    Ok(parts.build()?)
}

//! Shared helpers for integration tests.

#![allow(dead_code)]

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use bridgeframe::model::{
    CableElement, Load, Material, ModelParts, NodalForce, Section, StructureModel, Support,
};

pub const E: f64 = 10e9;
pub const A: f64 = 0.06;
pub const I: f64 = 4.5e-4;

pub fn timber_deck_parts() -> ModelParts {
    let mut p = ModelParts::new();
    p.materials.push(Material::timber());
    p.sections.push(Section::deck());
    p
}

/// Straight beam along x from 0 to `length`, split into `elements`.
pub fn straight_beam(length: f64, elements: u32) -> ModelParts {
    let mut p = timber_deck_parts();
    for k in 0..=elements {
        p.node(k + 1, length * k as f64 / elements as f64, 0.0);
    }
    for k in 1..=elements {
        p.beam(k, k, k + 1, "timber", "deck");
    }
    p
}

pub fn rel_err(actual: f64, expected: f64) -> f64 {
    (actual - expected).abs() / expected.abs()
}

/// Random integer in `lo..=hi` times 10^`exp`, parsed from its decimal text
/// so the value is exactly what a 9-digit serialization reads back.
fn decimal(rng: &mut StdRng, lo: i64, hi: i64, exp: i32) -> f64 {
    format!("{}e{exp}", rng.random_range(lo..=hi)).parse().unwrap()
}

fn grid(rng: &mut StdRng, lo: i64, hi: i64) -> f64 {
    decimal(rng, lo, hi, -3)
}

/// Random analyzable model: a tree of beams rooted at a fixed node 1 (so the
/// structure is stable whatever the cables do), plus extra beams, cables
/// between beam nodes, a few extra supports and mixed loads. Every number
/// has at most 9 significant digits.
pub fn random_model(seed: u64) -> StructureModel {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut p = ModelParts::new();
    p.materials.push(Material::new("wood", decimal(&mut rng, 5_000_000, 15_000_000, 3), grid(&mut rng, 300_000, 900_000), 1e7));
    p.materials.push(Material::new("rope", decimal(&mut rng, 1_000_000, 3_000_000, 3), 1400.0, 2e7));
    // Timber-like sections: A in 0.01–0.1 m², I in 1e-5–5e-4 m⁴.
    p.sections.push(Section::new("s1", grid(&mut rng, 10, 100), decimal(&mut rng, 100, 5000, -7), grid(&mut rng, 100, 400)));
    p.sections.push(Section::new("s2", grid(&mut rng, 10, 50), decimal(&mut rng, 100, 1000, -7), grid(&mut rng, 50, 200)));

    let n_nodes = rng.random_range(3..=9u32);
    let mut coords: Vec<(i64, i64)> = Vec::new();
    while coords.len() < n_nodes as usize {
        let c = (rng.random_range(-8000..=8000i64), rng.random_range(-4000..=4000i64));
        // keep nodes at least 0.5 m apart
        if coords.iter().all(|q| (q.0 - c.0).abs() + (q.1 - c.1).abs() >= 500) {
            coords.push(c);
        }
    }
    for (k, c) in coords.iter().enumerate() {
        p.node(k as u32 + 1, c.0 as f64 / 1000.0, c.1 as f64 / 1000.0);
    }

    let mut pairs = std::collections::BTreeSet::new();
    let mut id = 1;
    for k in 2..=n_nodes {
        let parent = rng.random_range(1..k);
        pairs.insert((parent, k));
        let section = if rng.random_bool(0.5) { "s1" } else { "s2" };
        p.beam(id, parent, k, "wood", section);
        id += 1;
    }
    for _ in 0..rng.random_range(0..3) {
        let (a, b) = (rng.random_range(1..=n_nodes), rng.random_range(1..=n_nodes));
        if a != b && pairs.insert((a.min(b), a.max(b))) {
            p.beam(id, a, b, "wood", "s1");
            id += 1;
        }
    }
    for _ in 0..rng.random_range(0..4) {
        let (a, b) = (rng.random_range(1..=n_nodes), rng.random_range(1..=n_nodes));
        if a != b && pairs.insert((a.min(b), a.max(b))) {
            p.cables.push(CableElement {
                id,
                node_i: a,
                node_j: b,
                material: "rope".into(),
                area: decimal(&mut rng, 100, 1000, -6),
                pretension: if rng.random_bool(0.3) { grid(&mut rng, 0, 500_000) } else { 0.0 },
            });
            id += 1;
        }
    }

    p.support(Support::fixed(1));
    for node in 2..=n_nodes {
        if rng.random_bool(0.2) {
            let s = Support::new(node, rng.random_bool(0.5), true, rng.random_bool(0.3));
            p.support(s);
        }
    }

    if rng.random_bool(0.7) {
        p.load(Load::SelfWeight { g: 9.81 });
    }
    for _ in 0..rng.random_range(1..4) {
        let node = rng.random_range(1..=n_nodes);
        p.load(Load::NodalForce(NodalForce::new(
            node,
            grid(&mut rng, -5_000_000, 5_000_000),
            grid(&mut rng, -5_000_000, 5_000_000),
            grid(&mut rng, -1_000_000, 1_000_000),
        )));
    }
    let beams = p.beams.len() as u32;
    if rng.random_bool(0.5) {
        p.load(Load::UniformLoad {
            beam: rng.random_range(1..=beams),
            w: grid(&mut rng, 0, 2_000_000),
        });
    }
    if rng.random_bool(0.5) {
        p.load(Load::PointMass {
            node: rng.random_range(1..=n_nodes),
            mass: grid(&mut rng, 0, 500_000),
        });
    }
    p.build().expect("random model builds")
}

pub fn max_abs(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, |m, v| m.max(v.abs()))
}

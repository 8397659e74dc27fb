//! Machine-readable analysis reports and side-by-side comparisons.

use std::fmt::Write as _;

use serde::Serialize;

use crate::model::{ElementId, NodeId, StructureModel};
use crate::solver::{AnalysisResult, MemberKind};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NodeEntry {
    pub id: NodeId,
    pub ux: f64,
    pub uy: f64,
    pub rz: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MemberEntry {
    pub id: ElementId,
    pub kind: &'static str,
    pub node_i: NodeId,
    pub node_j: NodeId,
    /// Axial force at each end, tension positive (N).
    pub axial_i: f64,
    pub axial_j: f64,
    pub shear_i: f64,
    pub shear_j: f64,
    pub moment_i: f64,
    pub moment_j: f64,
    pub active: bool,
    pub utilization: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReactionEntry {
    pub node: NodeId,
    pub fx: f64,
    pub fy: f64,
    pub mz: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub max_deflection: f64,
    pub max_deflection_node: Option<NodeId>,
    pub max_utilization: f64,
    pub max_utilization_member: Option<ElementId>,
    pub total_cable_tension: f64,
    /// Σ of absolute applied load components (N).
    pub total_applied_load: f64,
    /// Σ A·L over all members (m³).
    pub material_volume: f64,
}

impl Summary {
    pub fn new(result: &AnalysisResult, model: &StructureModel) -> Self {
        let (max_deflection_node, max_deflection) = result.max_deflection();
        let (max_utilization_member, max_utilization) = result.max_utilization();
        Self {
            max_deflection,
            max_deflection_node,
            max_utilization,
            max_utilization_member,
            total_cable_tension: result.total_cable_tension(),
            total_applied_load: result.applied_magnitude,
            material_volume: model.material_volume(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub nodes: Vec<NodeEntry>,
    pub members: Vec<MemberEntry>,
    pub reactions: Vec<ReactionEntry>,
    pub active_cables: Vec<ElementId>,
    pub slack_cables: Vec<ElementId>,
    pub iterations: usize,
    pub summary: Summary,
}

impl Report {
    pub fn new(result: &AnalysisResult, model: &StructureModel) -> Self {
        let ends = |id: ElementId, kind: MemberKind| match kind {
            MemberKind::Beam => model.beam(id).map(|b| (b.node_i, b.node_j)),
            MemberKind::Cable => model.cable(id).map(|c| (c.node_i, c.node_j)),
        };
        Self {
            nodes: result
                .nodes
                .iter()
                .map(|n| NodeEntry {
                    id: n.node,
                    ux: n.ux,
                    uy: n.uy,
                    rz: n.rz,
                })
                .collect(),
            members: result
                .members
                .iter()
                .map(|m| {
                    let (node_i, node_j) = ends(m.id, m.kind).unwrap_or_default();
                    MemberEntry {
                        id: m.id,
                        kind: match m.kind {
                            MemberKind::Beam => "beam",
                            MemberKind::Cable => "cable",
                        },
                        node_i,
                        node_j,
                        axial_i: m.axial_i(),
                        axial_j: m.axial_j(),
                        shear_i: m.shear_i(),
                        shear_j: m.shear_j(),
                        moment_i: m.moment_i(),
                        moment_j: m.moment_j(),
                        active: m.active,
                        utilization: m.utilization,
                    }
                })
                .collect(),
            reactions: result
                .reactions
                .iter()
                .map(|r| ReactionEntry {
                    node: r.node,
                    fx: r.fx,
                    fy: r.fy,
                    mz: r.mz,
                })
                .collect(),
            active_cables: result.active_cables.clone(),
            slack_cables: result.slack_cables.clone(),
            iterations: result.iterations_used,
            summary: Summary::new(result, model),
        }
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report serializes");
        text.push('\n');
        text
    }
}

/// JSON analysis report for `result`.
pub fn write_report(result: &AnalysisResult, model: &StructureModel) -> String {
    Report::new(result, model).to_json()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonRow {
    pub quantity: &'static str,
    pub a: f64,
    pub b: f64,
    /// b / a; 1 when both are zero, `null` in JSON when only a is zero.
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Comparison {
    pub label_a: String,
    pub label_b: String,
    pub rows: Vec<ComparisonRow>,
}

fn ratio(a: f64, b: f64) -> f64 {
    if a == b {
        1.0
    } else if a == 0.0 {
        f64::INFINITY
    } else {
        b / a
    }
}

/// Side-by-side table of two analyses with B/A ratios.
pub fn compare(a: &Summary, b: &Summary, labels: (&str, &str)) -> Comparison {
    let rows = [
        ("max deflection (m)", a.max_deflection, b.max_deflection),
        ("max utilization", a.max_utilization, b.max_utilization),
        ("total cable tension (N)", a.total_cable_tension, b.total_cable_tension),
        ("material volume (m3)", a.material_volume, b.material_volume),
    ]
    .into_iter()
    .map(|(quantity, a, b)| ComparisonRow {
        quantity,
        a,
        b,
        ratio: ratio(a, b),
    })
    .collect();
    Comparison {
        label_a: labels.0.to_string(),
        label_b: labels.1.to_string(),
        rows,
    }
}

impl Comparison {
    pub fn row(&self, quantity_prefix: &str) -> Option<&ComparisonRow> {
        self.rows.iter().find(|r| r.quantity.starts_with(quantity_prefix))
    }

    pub fn to_text(&self) -> String {
        let width = self.rows.iter().map(|r| r.quantity.len()).max().unwrap_or(0);
        let mut out = String::new();
        let _ = writeln!(out, "{:width$}  {:>14}  {:>14}  {:>10}", "", self.label_a, self.label_b, "B/A");
        for r in &self.rows {
            let _ = writeln!(out, "{:width$}  {:>14.6e}  {:>14.6e}  {:>10.6}", r.quantity, r.a, r.b, r.ratio);
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("comparison serializes");
        text.push('\n');
        text
    }
}

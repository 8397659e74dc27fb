//! Deflected-shape diagrams coloured by utilization.

use std::fmt::Write as _;

use crate::model::{ElementId, StructureModel};
use crate::solver::{AnalysisResult, MemberKind};

/// Utilization colour class. Boundaries: [0, 0.25), [0.25, 0.5), [0.5, 1),
/// [1, ∞). NaN counts as red.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ColorClass {
    Class0,
    Class1,
    Class2,
    Red,
}

impl ColorClass {
    pub const ALL: [ColorClass; 4] = [ColorClass::Class0, ColorClass::Class1, ColorClass::Class2, ColorClass::Red];

    pub fn from_utilization(u: f64) -> Self {
        if u < 0.25 {
            ColorClass::Class0
        } else if u < 0.5 {
            ColorClass::Class1
        } else if u < 1.0 {
            ColorClass::Class2
        } else {
            ColorClass::Red
        }
    }

    pub fn color(self) -> &'static str {
        match self {
            ColorClass::Class0 => "#3A7D44",
            ColorClass::Class1 => "#C8B400",
            ColorClass::Class2 => "#FF8C00",
            ColorClass::Red => "#FF0000",
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            ColorClass::Class0 => "utilization < 0.25",
            ColorClass::Class1 => "0.25 to 0.5",
            ColorClass::Class2 => "0.5 to 1",
            ColorClass::Red => "1 or more",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CableState {
    Slack,
    Taut(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct MemberView {
    pub id: ElementId,
    pub kind: MemberKind,
    pub original: [(f64, f64); 2],
    /// Deflected centre line, displacements multiplied by the diagram scale.
    pub deflected: Vec<(f64, f64)>,
    pub utilization: f64,
    pub class: ColorClass,
    pub cable: Option<CableState>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Diagram {
    pub members: Vec<MemberView>,
    pub scale: f64,
}

/// Points per beam used to draw the cubic deflected shape.
const BEAM_SAMPLES: usize = 8;

/// Display scale making the largest nodal translation 5% of the model's
/// extent; 1 when nothing moves.
pub fn auto_scale(model: &StructureModel, result: &AnalysisResult) -> f64 {
    let extent = extent(model);
    let d_max = result.nodes.iter().map(|n| n.ux.hypot(n.uy)).fold(0.0, f64::max);
    if d_max > 0.0 && extent > 0.0 {
        0.05 * extent / d_max
    } else {
        1.0
    }
}

fn extent(model: &StructureModel) -> f64 {
    let (mut lo, mut hi) = ((f64::INFINITY, f64::INFINITY), (f64::NEG_INFINITY, f64::NEG_INFINITY));
    for n in model.nodes() {
        lo = (lo.0.min(n.x), lo.1.min(n.y));
        hi = (hi.0.max(n.x), hi.1.max(n.y));
    }
    if model.nodes().is_empty() {
        0.0
    } else {
        (hi.0 - lo.0).max(hi.1 - lo.1)
    }
}

/// Builds the diagram; `scale` overrides the automatic display scale.
pub fn build_diagram(model: &StructureModel, result: &AnalysisResult, scale: Option<f64>) -> Diagram {
    let scale = scale.unwrap_or_else(|| auto_scale(model, result));
    let disp = |id| {
        result
            .node(id)
            .map_or([0.0; 3], |n| [n.ux, n.uy, n.rz])
    };
    let pos = |id| model.node(id).map_or((0.0, 0.0), |n| (n.x, n.y));

    let mut members = Vec::new();
    for m in &result.members {
        let (i, j) = match m.kind {
            MemberKind::Beam => model.beam(m.id).map(|b| (b.node_i, b.node_j)),
            MemberKind::Cable => model.cable(m.id).map(|c| (c.node_i, c.node_j)),
        }
        .expect("result members come from the model");
        let (pi, pj) = (pos(i), pos(j));
        let (di, dj) = (disp(i), disp(j));
        let deflected = match m.kind {
            MemberKind::Beam => hermite(pi, pj, di, dj, scale),
            MemberKind::Cable => vec![
                (pi.0 + scale * di[0], pi.1 + scale * di[1]),
                (pj.0 + scale * dj[0], pj.1 + scale * dj[1]),
            ],
        };
        let cable = match m.kind {
            MemberKind::Beam => None,
            MemberKind::Cable if m.active => Some(CableState::Taut(m.tension())),
            MemberKind::Cable => Some(CableState::Slack),
        };
        members.push(MemberView {
            id: m.id,
            kind: m.kind,
            original: [pi, pj],
            deflected,
            utilization: m.utilization,
            class: ColorClass::from_utilization(m.utilization),
            cable,
        });
    }
    Diagram { members, scale }
}

/// Cubic (Hermite) transverse and linear axial interpolation of the end
/// displacements along a beam.
fn hermite(pi: (f64, f64), pj: (f64, f64), di: [f64; 3], dj: [f64; 3], scale: f64) -> Vec<(f64, f64)> {
    let (dx, dy) = (pj.0 - pi.0, pj.1 - pi.1);
    let l = dx.hypot(dy);
    let (c, s) = (dx / l, dy / l);
    let local = |d: [f64; 3]| (c * d[0] + s * d[1], -s * d[0] + c * d[1], d[2]);
    let (ui, vi, ti) = local(di);
    let (uj, vj, tj) = local(dj);
    (0..=BEAM_SAMPLES)
        .map(|k| {
            let x = k as f64 / BEAM_SAMPLES as f64;
            let n1 = 1.0 - 3.0 * x * x + 2.0 * x * x * x;
            let n2 = l * (x - 2.0 * x * x + x * x * x);
            let n3 = 3.0 * x * x - 2.0 * x * x * x;
            let n4 = l * (-x * x + x * x * x);
            let u = (1.0 - x) * ui + x * uj;
            let v = n1 * vi + n2 * ti + n3 * vj + n4 * tj;
            (
                pi.0 + x * dx + scale * (c * u - s * v),
                pi.1 + x * dy + scale * (s * u + c * v),
            )
        })
        .collect()
}

const WIDTH: f64 = 1000.0;
const MARGIN: f64 = 40.0;
const LEGEND_HEIGHT: f64 = 110.0;

fn f3(v: f64) -> String {
    let s = format!("{v:.3}");
    if s == "-0.000" {
        "0.000".into()
    } else {
        s
    }
}

/// SVG 1.1 document: original geometry in grey, one deflected polyline per
/// member coloured by class, slack cables dashed, cable state labels and a
/// legend. Deterministic for identical input.
pub fn render_svg(diagram: &Diagram) -> String {
    let points = diagram
        .members
        .iter()
        .flat_map(|m| m.original.iter().chain(&m.deflected).copied());
    let (mut lo, mut hi) = ((f64::INFINITY, f64::INFINITY), (f64::NEG_INFINITY, f64::NEG_INFINITY));
    for (x, y) in points {
        lo = (lo.0.min(x), lo.1.min(y));
        hi = (hi.0.max(x), hi.1.max(y));
    }
    if !lo.0.is_finite() {
        (lo, hi) = ((0.0, 0.0), (1.0, 1.0));
    }
    let span = (hi.0 - lo.0).max(hi.1 - lo.1).max(1e-9);
    let k = (WIDTH - 2.0 * MARGIN) / span;
    let height = (hi.1 - lo.1) * k + 2.0 * MARGIN + LEGEND_HEIGHT;
    let map = |(x, y): (f64, f64)| (MARGIN + (x - lo.0) * k, MARGIN + (hi.1 - y) * k);

    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#,
        w = f3(WIDTH),
        h = f3(height)
    );
    let _ = writeln!(out, r##"<rect x="0" y="0" width="{}" height="{}" fill="#FFFFFF"/>"##, f3(WIDTH), f3(height));

    let _ = writeln!(out, r##"<g id="original" stroke="#B0B0B0" stroke-width="1">"##);
    for m in &diagram.members {
        let (a, b) = (map(m.original[0]), map(m.original[1]));
        let _ = writeln!(
            out,
            r#"<line x1="{}" y1="{}" x2="{}" y2="{}"/>"#,
            f3(a.0),
            f3(a.1),
            f3(b.0),
            f3(b.1)
        );
    }
    let _ = writeln!(out, "</g>");

    let _ = writeln!(out, r#"<g id="deflected" fill="none">"#);
    for m in &diagram.members {
        let pts: Vec<String> = m
            .deflected
            .iter()
            .map(|&p| {
                let (x, y) = map(p);
                format!("{},{}", f3(x), f3(y))
            })
            .collect();
        let (prefix, width) = match m.kind {
            MemberKind::Beam => ("beam", 3),
            MemberKind::Cable => ("cable", 1),
        };
        let dash = match m.cable {
            Some(CableState::Slack) => r#" stroke-dasharray="6,4""#,
            _ => "",
        };
        let _ = writeln!(
            out,
            r#"<polyline id="{prefix}-{}" points="{}" stroke="{}" stroke-width="{width}"{dash}/>"#,
            m.id,
            pts.join(" "),
            m.class.color()
        );
    }
    let _ = writeln!(out, "</g>");

    let _ = writeln!(out, r##"<g id="cable-labels" font-family="sans-serif" font-size="10" fill="#333333">"##);
    for m in &diagram.members {
        let Some(state) = m.cable else { continue };
        let (a, b) = (map(m.original[0]), map(m.original[1]));
        let text = match state {
            CableState::Slack => "slack".to_string(),
            CableState::Taut(n) => format!("taut: {} N", f3(n)),
        };
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}">{text}</text>"#,
            f3((a.0 + b.0) / 2.0),
            f3((a.1 + b.1) / 2.0)
        );
    }
    let _ = writeln!(out, "</g>");

    let top = height - LEGEND_HEIGHT + 10.0;
    let _ = writeln!(out, r##"<g id="legend" font-family="sans-serif" font-size="12" fill="#000000">"##);
    for (row, class) in ColorClass::ALL.into_iter().enumerate() {
        let y = top + 18.0 * row as f64;
        let _ = writeln!(
            out,
            r#"<rect x="{}" y="{}" width="24" height="10" fill="{}"/>"#,
            f3(MARGIN),
            f3(y),
            class.color()
        );
        let _ = writeln!(out, r#"<text x="{}" y="{}">{}</text>"#, f3(MARGIN + 32.0), f3(y + 10.0), class.label());
    }
    let y = top + 18.0 * 4.0;
    let _ = writeln!(
        out,
        r##"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="#000000" stroke-dasharray="6,4"/>"##,
        f3(MARGIN),
        f3(y + 5.0),
        f3(MARGIN + 24.0),
        f3(y + 5.0)
    );
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}">slack cable; deflections x{}</text>"#,
        f3(MARGIN + 32.0),
        f3(y + 10.0),
        crate::format::format_number(diagram.scale)
    );
    let _ = writeln!(out, "</g>");
    out.push_str("</svg>\n");
    out
}

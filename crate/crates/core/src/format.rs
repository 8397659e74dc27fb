//! Line-oriented model text format.
//!
//! ```text
//! UNIT SI
//! NODE <id> <x> <y>
//! MATERIAL <name> E=<Pa> RHO=<kg/m3> SIGMA=<Pa>
//! SECTION <name> A=<m2> I=<m4> H=<m>
//! BEAM <id> <node_i> <node_j> <material> <section>
//! CABLE <id> <node_i> <node_j> <material> A=<m2> [PRETENSION=<N>]
//! SUPPORT <node> <X|Y|R flags, e.g. XYR>
//! LOAD NODE <node> FX=<N> FY=<N> MZ=<Nm>
//! LOAD UDL <beam> W=<N/m>
//! LOAD MASS <node> M=<kg>
//! LOAD SELFWEIGHT G=<m/s2>
//! PLAN MODULE=<m> COUNT=<n> W=<N/m> CW=<N> LEVER=<m> INTERVAL=<n> SAFETY=<x>
//! ```
//!
//! `#` starts a comment. Numbers are written with 9 significant digits.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::erection::ErectionPlan;
use crate::model::{
    BeamElement, CableElement, Load, Material, ModelError, ModelParts, NodalForce, Node, Section, StructureModel,
    Support,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: unknown keyword `{keyword}`")]
    UnknownKeyword { line: usize, keyword: String },
    #[error("{}{source}", .line.map(|l| format!("line {l}: ")).unwrap_or_default())]
    Model { line: Option<usize>, source: ModelError },
}

impl ParseError {
    pub fn line(&self) -> Option<usize> {
        match self {
            ParseError::Syntax { line, .. } | ParseError::UnknownKeyword { line, .. } => Some(*line),
            ParseError::Model { line, .. } => *line,
        }
    }
}

/// Erection plan parameters from a `PLAN` line.
#[derive(Debug, Clone, PartialEq)]
pub struct PlanParams {
    pub module_length: f64,
    pub module_count: usize,
    pub deck_weight: f64,
    pub counterweight: f64,
    pub lever: f64,
    pub pillar_interval: usize,
    pub safety_factor: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModelDocument {
    pub model: StructureModel,
    pub plan: Option<PlanParams>,
}

impl ModelDocument {
    /// The erection plan, with deck properties taken from the document's
    /// first material and section (by name), or timber/deck if absent.
    pub fn erection_plan(&self) -> Option<ErectionPlan> {
        let p = self.plan.as_ref()?;
        let mut plan = ErectionPlan::new(p.module_length, p.module_count, p.deck_weight, p.counterweight, p.lever);
        plan.pillar_interval = p.pillar_interval;
        plan.safety_factor = p.safety_factor;
        if let Some(m) = self.model.materials().first() {
            plan.material = m.clone();
        }
        if let Some(s) = self.model.sections().first() {
            plan.section = s.clone();
        }
        Some(plan)
    }
}

/// Formats with 9 significant digits: plain decimals for exponents −5..=8,
/// scientific notation otherwise; trailing zeros trimmed.
pub fn format_number(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return format!("{v}");
    }
    let sci = format!("{v:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..=8).contains(&exp) {
        let fixed = format!("{:.*}", (8 - exp).max(0) as usize, v);
        trim_zeros(&fixed).to_string()
    } else {
        format!("{}e{exp}", trim_zeros(mantissa))
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn flags(s: &Support) -> String {
    let mut out = String::new();
    for (set, c) in [(s.restrain_x, 'X'), (s.restrain_y, 'Y'), (s.restrain_rz, 'R')] {
        if set {
            out.push(c);
        }
    }
    out
}

/// Canonical text for a model. Byte-stable for identical models.
pub fn serialize_model(model: &StructureModel) -> String {
    let n = format_number;
    let mut out = String::from("UNIT SI\n");
    for node in model.nodes() {
        let _ = writeln!(out, "NODE {} {} {}", node.id, n(node.x), n(node.y));
    }
    for m in model.materials() {
        let _ = writeln!(
            out,
            "MATERIAL {} E={} RHO={} SIGMA={}",
            m.name,
            n(m.elastic_modulus),
            n(m.density),
            n(m.allowable_stress)
        );
    }
    for s in model.sections() {
        let _ = writeln!(out, "SECTION {} A={} I={} H={}", s.name, n(s.area), n(s.second_moment), n(s.depth));
    }
    for b in model.beams() {
        let _ = writeln!(out, "BEAM {} {} {} {} {}", b.id, b.node_i, b.node_j, b.material, b.section);
    }
    for c in model.cables() {
        let _ = write!(out, "CABLE {} {} {} {} A={}", c.id, c.node_i, c.node_j, c.material, n(c.area));
        if c.pretension != 0.0 {
            let _ = write!(out, " PRETENSION={}", n(c.pretension));
        }
        out.push('\n');
    }
    for s in model.supports() {
        let _ = writeln!(out, "SUPPORT {} {}", s.node, flags(s));
    }
    for load in model.loads() {
        let _ = match load {
            Load::NodalForce(f) => writeln!(out, "LOAD NODE {} FX={} FY={} MZ={}", f.node, n(f.fx), n(f.fy), n(f.mz)),
            Load::UniformLoad { beam, w } => writeln!(out, "LOAD UDL {beam} W={}", n(*w)),
            Load::PointMass { node, mass } => writeln!(out, "LOAD MASS {node} M={}", n(*mass)),
            Load::SelfWeight { g } => writeln!(out, "LOAD SELFWEIGHT G={}", n(*g)),
        };
    }
    out
}

pub fn serialize_document(doc: &ModelDocument) -> String {
    let mut out = serialize_model(&doc.model);
    if let Some(p) = &doc.plan {
        let n = format_number;
        let _ = writeln!(
            out,
            "PLAN MODULE={} COUNT={} W={} CW={} LEVER={} INTERVAL={} SAFETY={}",
            n(p.module_length),
            p.module_count,
            n(p.deck_weight),
            n(p.counterweight),
            n(p.lever),
            p.pillar_interval,
            n(p.safety_factor)
        );
    }
    out
}

struct Line<'a> {
    number: usize,
    tokens: Vec<&'a str>,
}

impl<'a> Line<'a> {
    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError::Syntax {
            line: self.number,
            message: message.into(),
        }
    }

    fn expect_len(&self, positional: usize, keyed: &[&str], optional: &[&str]) -> Result<(), ParseError> {
        let min = positional + keyed.len();
        let max = min + optional.len();
        let got = self.tokens.len();
        if got < min || got > max {
            return Err(self.error(format!("`{}` expects {min} fields, found {got}", self.tokens.join(" "))));
        }
        Ok(())
    }

    fn word(&self, i: usize) -> Result<&'a str, ParseError> {
        self.tokens.get(i).copied().ok_or_else(|| self.error("missing field"))
    }

    fn id(&self, i: usize) -> Result<u32, ParseError> {
        let t = self.word(i)?;
        t.parse().map_err(|_| self.error(format!("`{t}` is not a valid id")))
    }

    fn number(&self, t: &str) -> Result<f64, ParseError> {
        t.parse().map_err(|_| self.error(format!("`{t}` is not a number")))
    }

    /// KEY=value fields from `start` on; every key must be listed.
    fn keyed(&self, start: usize, required: &[&str], optional: &[&str]) -> Result<BTreeMap<&'a str, f64>, ParseError> {
        let mut out = BTreeMap::new();
        for t in &self.tokens[start.min(self.tokens.len())..] {
            let (key, value) = t
                .split_once('=')
                .ok_or_else(|| self.error(format!("expected KEY=value, found `{t}`")))?;
            if !required.contains(&key) && !optional.contains(&key) {
                return Err(self.error(format!("unexpected field `{key}`")));
            }
            if out.insert(key, self.number(value)?).is_some() {
                return Err(self.error(format!("field `{key}` given twice")));
            }
        }
        for key in required {
            if !out.contains_key(key) {
                return Err(self.error(format!("missing field `{key}=`")));
            }
        }
        Ok(out)
    }

    fn count(&self, value: f64, key: &str) -> Result<usize, ParseError> {
        if value >= 0.0 && value.fract() == 0.0 && value <= u32::MAX as f64 {
            Ok(value as usize)
        } else {
            Err(self.error(format!("`{key}` must be a non-negative integer")))
        }
    }
}

/// What each line defines or refers to, for locating model errors.
#[derive(Default)]
struct Origins {
    defines: Vec<(usize, u32)>,
    names: Vec<(usize, String)>,
    refers: Vec<(usize, u32)>,
    named_refs: Vec<(usize, String)>,
    supports: Vec<(usize, u32)>,
}

impl Origins {
    fn locate(&self, e: &ModelError) -> Option<usize> {
        match e {
            ModelError::DuplicateId(id) => self.defines.iter().filter(|(_, d)| d == id).nth(1).map(|(l, _)| *l),
            ModelError::DuplicateName(name) | ModelError::InvalidName(name) => {
                let mut hits = self.names.iter().filter(|(_, n)| n == name).map(|(l, _)| *l);
                let first = hits.next();
                hits.next().or(first)
            }
            ModelError::UnknownReference(id) => self.refers.iter().find(|(_, r)| r == id).map(|(l, _)| *l),
            ModelError::UnknownName(name) => self.named_refs.iter().find(|(_, n)| n == name).map(|(l, _)| *l),
            ModelError::DuplicateSupport(node) => {
                self.supports.iter().filter(|(_, n)| n == node).nth(1).map(|(l, _)| *l)
            }
        }
    }
}

/// Parses a model document, including an optional `PLAN` line.
pub fn parse_document(text: &str) -> Result<ModelDocument, ParseError> {
    let mut parts = ModelParts::new();
    let mut origins = Origins::default();
    let mut plan = None;

    for (index, raw) in text.lines().enumerate() {
        let content = raw.split('#').next().unwrap_or("");
        let line = Line {
            number: index + 1,
            tokens: content.split_whitespace().collect(),
        };
        let Some(&keyword) = line.tokens.first() else {
            continue;
        };
        let at = line.number;
        match keyword {
            "UNIT" => {
                line.expect_len(2, &[], &[])?;
                if line.tokens[1] != "SI" {
                    return Err(line.error(format!("unsupported unit system `{}`", line.tokens[1])));
                }
            }
            "NODE" => {
                line.expect_len(4, &[], &[])?;
                let id = line.id(1)?;
                parts.nodes.push(Node::new(id, line.number(line.tokens[2])?, line.number(line.tokens[3])?));
                origins.defines.push((at, id));
            }
            "MATERIAL" => {
                line.expect_len(2, &["E", "RHO", "SIGMA"], &[])?;
                let name = line.word(1)?;
                let f = line.keyed(2, &["E", "RHO", "SIGMA"], &[])?;
                parts.materials.push(Material::new(name, f["E"], f["RHO"], f["SIGMA"]));
                origins.names.push((at, name.to_string()));
            }
            "SECTION" => {
                line.expect_len(2, &["A", "I", "H"], &[])?;
                let name = line.word(1)?;
                let f = line.keyed(2, &["A", "I", "H"], &[])?;
                parts.sections.push(Section::new(name, f["A"], f["I"], f["H"]));
                origins.names.push((at, name.to_string()));
            }
            "BEAM" => {
                line.expect_len(6, &[], &[])?;
                let beam = BeamElement {
                    id: line.id(1)?,
                    node_i: line.id(2)?,
                    node_j: line.id(3)?,
                    material: line.word(4)?.to_string(),
                    section: line.word(5)?.to_string(),
                };
                origins.defines.push((at, beam.id));
                origins.refers.extend([(at, beam.node_i), (at, beam.node_j)]);
                origins.named_refs.extend([(at, beam.material.clone()), (at, beam.section.clone())]);
                parts.beams.push(beam);
            }
            "CABLE" => {
                line.expect_len(5, &["A"], &["PRETENSION"])?;
                let f = line.keyed(5, &["A"], &["PRETENSION"])?;
                let cable = CableElement {
                    id: line.id(1)?,
                    node_i: line.id(2)?,
                    node_j: line.id(3)?,
                    material: line.word(4)?.to_string(),
                    area: f["A"],
                    pretension: f.get("PRETENSION").copied().unwrap_or(0.0),
                };
                origins.defines.push((at, cable.id));
                origins.refers.extend([(at, cable.node_i), (at, cable.node_j)]);
                origins.named_refs.push((at, cable.material.clone()));
                parts.cables.push(cable);
            }
            "SUPPORT" => {
                line.expect_len(3, &[], &[])?;
                let node = line.id(1)?;
                let spec = line.tokens[2];
                let mut support = Support::new(node, false, false, false);
                for c in spec.chars() {
                    let flag = match c {
                        'X' => &mut support.restrain_x,
                        'Y' => &mut support.restrain_y,
                        'R' => &mut support.restrain_rz,
                        _ => return Err(line.error(format!("unknown support flag `{c}` in `{spec}`"))),
                    };
                    if *flag {
                        return Err(line.error(format!("support flag `{c}` repeated in `{spec}`")));
                    }
                    *flag = true;
                }
                origins.refers.push((at, node));
                origins.supports.push((at, node));
                parts.supports.push(support);
            }
            "LOAD" => {
                let kind = line.word(1)?;
                let load = match kind {
                    "NODE" => {
                        line.expect_len(3, &["FX", "FY", "MZ"], &[])?;
                        let node = line.id(2)?;
                        let f = line.keyed(3, &["FX", "FY", "MZ"], &[])?;
                        origins.refers.push((at, node));
                        Load::NodalForce(NodalForce::new(node, f["FX"], f["FY"], f["MZ"]))
                    }
                    "UDL" => {
                        line.expect_len(3, &["W"], &[])?;
                        let beam = line.id(2)?;
                        let f = line.keyed(3, &["W"], &[])?;
                        origins.refers.push((at, beam));
                        Load::UniformLoad { beam, w: f["W"] }
                    }
                    "MASS" => {
                        line.expect_len(3, &["M"], &[])?;
                        let node = line.id(2)?;
                        let f = line.keyed(3, &["M"], &[])?;
                        origins.refers.push((at, node));
                        Load::PointMass { node, mass: f["M"] }
                    }
                    "SELFWEIGHT" => {
                        line.expect_len(2, &["G"], &[])?;
                        let f = line.keyed(2, &["G"], &[])?;
                        Load::SelfWeight { g: f["G"] }
                    }
                    other => {
                        return Err(ParseError::UnknownKeyword {
                            line: at,
                            keyword: format!("LOAD {other}"),
                        })
                    }
                };
                parts.loads.push(load);
            }
            "PLAN" => {
                let keys = ["MODULE", "COUNT", "W", "CW", "LEVER"];
                let optional = ["INTERVAL", "SAFETY"];
                line.expect_len(1, &keys, &optional)?;
                if plan.is_some() {
                    return Err(line.error("only one PLAN line is allowed"));
                }
                let f = line.keyed(1, &keys, &optional)?;
                plan = Some(PlanParams {
                    module_length: f["MODULE"],
                    module_count: line.count(f["COUNT"], "COUNT")?,
                    deck_weight: f["W"],
                    counterweight: f["CW"],
                    lever: f["LEVER"],
                    pillar_interval: line.count(f.get("INTERVAL").copied().unwrap_or(2.0), "INTERVAL")?,
                    safety_factor: f.get("SAFETY").copied().unwrap_or(1.0),
                });
            }
            other => {
                return Err(ParseError::UnknownKeyword {
                    line: at,
                    keyword: other.to_string(),
                })
            }
        }
    }

    let model = parts.build().map_err(|source| ParseError::Model {
        line: origins.locate(&source),
        source,
    })?;
    Ok(ModelDocument { model, plan })
}

/// Parses a model file; a `PLAN` line, if present, is accepted and ignored.
pub fn parse_model_file(text: &str) -> Result<StructureModel, ParseError> {
    parse_document(text).map(|d| d.model)
}

//! Staged cantilever erection with a counterweighted abutment.
//!
//! The deck is launched from the right-hand shore toward −x one module at a
//! time. The abutment edge (x = 0) is clamped; a back-span runs to the
//! counterweight resting at x = lever. Every `pillar_interval` modules the
//! tip is propped by a planted pillar, and the last module lands on the far
//! shore.

use serde::Serialize;
use thiserror::Error;

use crate::model::{Load, Material, ModelParts, NodalForce, NodeId, Section, StructureModel, Support};
use crate::solver::{analyze, SolveError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ErectionError {
    #[error("invalid plan: {0}")]
    InvalidPlan(String),
    #[error(transparent)]
    Solve(#[from] SolveError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ErectionPlan {
    pub module_length: f64,
    pub module_count: usize,
    /// Deck weight per length w (N/m).
    pub deck_weight: f64,
    /// Counterweight W (N).
    pub counterweight: f64,
    /// Distance a of the counterweight behind the abutment edge (m).
    pub lever: f64,
    pub pillar_interval: usize,
    pub safety_factor: f64,
    pub material: Material,
    pub section: Section,
}

impl ErectionPlan {
    pub fn new(module_length: f64, module_count: usize, deck_weight: f64, counterweight: f64, lever: f64) -> Self {
        Self {
            module_length,
            module_count,
            deck_weight,
            counterweight,
            lever,
            pillar_interval: 2,
            safety_factor: 1.0,
            material: Material::timber(),
            section: Section::deck(),
        }
    }

    pub fn with_counterweight(&self, counterweight: f64) -> Self {
        Self {
            counterweight,
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<(), ErectionError> {
        let positive = [
            ("module length", self.module_length),
            ("deck weight", self.deck_weight),
            ("counterweight", self.counterweight),
            ("lever", self.lever),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(ErectionError::InvalidPlan(format!("{name} must be positive, got {v}")));
            }
        }
        if self.pillar_interval < 1 {
            return Err(ErectionError::InvalidPlan("pillar interval must be at least 1".into()));
        }
        if !(self.safety_factor >= 1.0 && self.safety_factor.is_finite()) {
            return Err(ErectionError::InvalidPlan(format!(
                "safety factor must be at least 1, got {}",
                self.safety_factor
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StageKind {
    Abutment,
    Cantilever,
    Pillar,
    Landing,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Stage {
    pub index: usize,
    pub kind: StageKind,
    pub model: StructureModel,
    /// Tip overhang c beyond the outermost support (m).
    pub cantilever_length: f64,
    /// Distance d from the abutment edge to the outermost support (m).
    pub support_offset: f64,
    pub description: String,
}

impl Stage {
    /// Only the clamped abutment holds the overhang.
    pub fn is_pure_cantilever(&self) -> bool {
        self.kind == StageKind::Cantilever && self.support_offset == 0.0
    }
}

pub const ABUTMENT_NODE: NodeId = 1;
pub const COUNTERWEIGHT_NODE: NodeId = 2;

/// Node id of the tip after `modules` modules.
pub fn tip_node(modules: usize) -> NodeId {
    if modules == 0 {
        ABUTMENT_NODE
    } else {
        COUNTERWEIGHT_NODE + modules as NodeId
    }
}

fn stage_model(plan: &ErectionPlan, modules: usize, propped: &[usize]) -> Result<StructureModel, ErectionError> {
    let mut p = ModelParts::new();
    p.materials.push(plan.material.clone());
    p.sections.push(plan.section.clone());
    let (mat, sec) = (plan.material.name.clone(), plan.section.name.clone());
    p.node(ABUTMENT_NODE, 0.0, 0.0).node(COUNTERWEIGHT_NODE, plan.lever, 0.0);
    p.beam(1, ABUTMENT_NODE, COUNTERWEIGHT_NODE, &mat, &sec);
    p.support(Support::fixed(ABUTMENT_NODE));
    p.support(Support::roller(COUNTERWEIGHT_NODE));
    p.load(Load::NodalForce(NodalForce::new(COUNTERWEIGHT_NODE, 0.0, -plan.counterweight, 0.0)));
    for k in 1..=modules {
        let id = tip_node(k);
        p.node(id, -(k as f64) * plan.module_length, 0.0);
        let beam = 1 + k as u32;
        p.beam(beam, tip_node(k - 1), id, &mat, &sec);
        p.load(Load::UniformLoad {
            beam,
            w: plan.deck_weight,
        });
    }
    for &k in propped {
        p.support(Support::roller(tip_node(k)));
    }
    p.build().map_err(|e| ErectionError::InvalidPlan(e.to_string()))
}

/// Expands a plan into its construction stages: the abutment alone, one
/// stage per added module, a pillar stage after every `pillar_interval`
/// modules (except the last) and a final landing stage.
pub fn expand_plan(plan: &ErectionPlan) -> Result<Vec<Stage>, ErectionError> {
    plan.validate()?;
    let m = plan.module_length;
    let mut stages = vec![Stage {
        index: 0,
        kind: StageKind::Abutment,
        model: stage_model(plan, 0, &[])?,
        cantilever_length: 0.0,
        support_offset: 0.0,
        description: "counterweighted abutment".into(),
    }];
    let mut propped: Vec<usize> = Vec::new();
    for k in 1..=plan.module_count {
        let last = propped.last().copied().unwrap_or(0);
        stages.push(Stage {
            index: stages.len(),
            kind: StageKind::Cantilever,
            model: stage_model(plan, k, &propped)?,
            cantilever_length: (k - last) as f64 * m,
            support_offset: last as f64 * m,
            description: format!("module {k} placed, overhang {} module(s)", k - last),
        });
        let (kind, description) = if k == plan.module_count {
            (StageKind::Landing, format!("module {k} lands on the far shore"))
        } else if k % plan.pillar_interval == 0 {
            (StageKind::Pillar, format!("pillar planted under module {k}"))
        } else {
            continue;
        };
        propped.push(k);
        stages.push(Stage {
            index: stages.len(),
            kind,
            model: stage_model(plan, k, &propped)?,
            cantilever_length: 0.0,
            support_offset: k as f64 * m,
            description,
        });
    }
    Ok(stages)
}

/// Resisting over overturning moment about the outermost support. The
/// counterweight acts at d + a from it and the supported deck d at d/2;
/// the overhang c overturns with w·c²/2. Infinite when c = 0.
pub fn overturning_factor(stage: &Stage, plan: &ErectionPlan) -> f64 {
    let (c, d, w) = (stage.cantilever_length, stage.support_offset, plan.deck_weight);
    let overturning = w * c * c / 2.0;
    if overturning == 0.0 {
        return f64::INFINITY;
    }
    let resisting = plan.counterweight * (d + plan.lever) + w * d * d / 2.0;
    resisting / overturning
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Stable,
    Overturns,
    Overstressed,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StageReport {
    pub stage: usize,
    pub kind: StageKind,
    pub description: String,
    pub cantilever_length: f64,
    /// `null` in JSON when infinite.
    pub overturning_factor: f64,
    /// NaN (JSON `null`) when the stage model is a mechanism.
    pub max_utilization: f64,
    pub max_deflection: f64,
    pub verdict: Verdict,
}

/// Analyses one stage and combines strength and overturning into a verdict.
pub fn analyze_stage(stage: &Stage, plan: &ErectionPlan) -> Result<StageReport, ErectionError> {
    let factor = overturning_factor(stage, plan);
    let (utilization, deflection) = match analyze(&stage.model) {
        Ok(result) => (result.max_utilization().1, result.max_deflection().1),
        Err(SolveError::SingularSystem { .. }) => (f64::NAN, f64::NAN),
        Err(e) => return Err(e.into()),
    };
    let verdict = if !(factor >= plan.safety_factor) || utilization.is_nan() {
        Verdict::Overturns
    } else if utilization >= 1.0 {
        Verdict::Overstressed
    } else {
        Verdict::Stable
    };
    Ok(StageReport {
        stage: stage.index,
        kind: stage.kind,
        description: stage.description.clone(),
        cantilever_length: stage.cantilever_length,
        overturning_factor: factor,
        max_utilization: utilization,
        max_deflection: deflection,
        verdict,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlanReport {
    pub stages: Vec<StageReport>,
    pub verdict: Verdict,
    /// Index of the first stage that is not stable.
    pub first_failure: Option<usize>,
    /// Smallest counterweight keeping every pure-cantilever stage at the
    /// safety factor (N).
    pub minimal_counterweight: f64,
    /// Whether re-running with the minimal counterweight (plus 1e-9
    /// relative) makes every stage stable.
    pub minimal_counterweight_verified: bool,
}

fn assess(stages: &[Stage], plan: &ErectionPlan) -> Result<Vec<StageReport>, ErectionError> {
    stages.iter().map(|s| analyze_stage(s, plan)).collect()
}

/// W_min = safety · max over pure-cantilever stages of (w·c²/2)/a.
pub fn minimal_counterweight(stages: &[Stage], plan: &ErectionPlan) -> f64 {
    stages
        .iter()
        .filter(|s| s.is_pure_cantilever())
        .map(|s| plan.deck_weight * s.cantilever_length * s.cantilever_length / 2.0 / plan.lever)
        .fold(0.0, f64::max)
        * plan.safety_factor
}

pub fn run_plan(plan: &ErectionPlan) -> Result<PlanReport, ErectionError> {
    let stages = expand_plan(plan)?;
    let reports = assess(&stages, plan)?;
    let first_failure = reports.iter().find(|r| r.verdict != Verdict::Stable);
    let verdict = first_failure.map_or(Verdict::Stable, |r| r.verdict);
    let first_failure = first_failure.map(|r| r.stage);

    let w_min = minimal_counterweight(&stages, plan);
    let verified = if w_min > 0.0 {
        let trial = plan.with_counterweight(w_min * (1.0 + 1e-9));
        let trial_stages = expand_plan(&trial)?;
        assess(&trial_stages, &trial)?.iter().all(|r| r.verdict == Verdict::Stable)
    } else {
        reports.iter().all(|r| r.verdict == Verdict::Stable)
    };
    Ok(PlanReport {
        stages: reports,
        verdict,
        first_failure,
        minimal_counterweight: w_min,
        minimal_counterweight_verified: verified,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plan(w_counter: f64) -> ErectionPlan {
        ErectionPlan::new(2.0, 4, 500.0, w_counter, 1.0)
    }

    #[test]
    fn empty_plan_has_one_stage() {
        let mut p = plan(1000.0);
        p.module_count = 0;
        let stages = expand_plan(&p).unwrap();
        assert_eq!(stages.len(), 1);
        assert_eq!(stages[0].kind, StageKind::Abutment);
    }

    #[test]
    fn four_modules_two_per_pillar() {
        let stages = expand_plan(&plan(1000.0)).unwrap();
        let c: Vec<f64> = stages.iter().map(|s| s.cantilever_length).collect();
        assert_eq!(c, vec![0.0, 2.0, 4.0, 0.0, 2.0, 4.0, 0.0]);
        let kinds: Vec<StageKind> = stages.iter().map(|s| s.kind).collect();
        use StageKind::*;
        assert_eq!(kinds, vec![Abutment, Cantilever, Cantilever, Pillar, Cantilever, Cantilever, Landing]);
        for pair in stages.windows(2) {
            let ids = |s: &Stage| s.model.nodes().iter().map(|n| n.id).collect::<Vec<_>>();
            let (a, b) = (ids(&pair[0]), ids(&pair[1]));
            assert!(a.iter().all(|id| b.contains(id)));
        }
        for s in &stages {
            let has_counterweight = s.model.loads().iter().any(|l| {
                matches!(l, Load::NodalForce(f) if f.node == COUNTERWEIGHT_NODE && f.fy == -1000.0)
            });
            assert!(has_counterweight, "stage {}", s.index);
        }
    }

    #[test]
    fn hand_moment_balance() {
        let stages = expand_plan(&plan(2000.0)).unwrap();
        assert_eq!(overturning_factor(&stages[2], &plan(2000.0)), 0.5);
        assert_eq!(overturning_factor(&stages[2], &plan(8000.0)), 2.0);
        assert_eq!(overturning_factor(&stages[0], &plan(2000.0)), f64::INFINITY);
    }

    #[test]
    fn minimal_counterweight_by_hand() {
        let report = run_plan(&plan(100.0)).unwrap();
        assert_eq!(report.minimal_counterweight, 4000.0);
        assert!(report.minimal_counterweight_verified);
        assert_eq!(report.verdict, Verdict::Overturns);
        assert_eq!(report.first_failure, Some(1));
        let mut doubled = plan(100.0);
        doubled.lever = 2.0;
        assert_eq!(run_plan(&doubled).unwrap().minimal_counterweight, 2000.0);
    }

    #[test]
    fn rejects_bad_plans() {
        let mut p = plan(1.0);
        p.pillar_interval = 0;
        assert!(expand_plan(&p).is_err());
        let mut p = plan(1.0);
        p.lever = 0.0;
        assert!(run_plan(&p).is_err());
    }
}

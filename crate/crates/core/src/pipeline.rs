//! End-to-end runs: stage one, an optional bound refinement, the split
//! decision, stage two, validation and metrics.

use std::time::{Duration, Instant};

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::horizon::{dominates, PeriodVector};
use crate::instance::{self, CostModel, Instance, InstanceError, LoadKind, OverlapMode, Violation};
use crate::ipcore::{Rat, SolveOptions};
use crate::patterns::{PatternSet, ShiftSchedule};
use crate::split::{self, SplitError, SubproblemStats};
use crate::stage1::{self, Stage1Error, Stage1Extra, Stage1Objective};
use crate::stage2::{self, AssignmentProblem, ModelSize, Roster, RosterFile, Stage2Error, Stage2Options};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("invalid instance: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
    #[error(transparent)]
    Instance(#[from] InstanceError),
    #[error("stage one: {0}")]
    Stage1(#[from] Stage1Error),
    #[error("stage two: {0}")]
    Stage2(#[from] Stage2Error),
    #[error("split: {0}")]
    Split(#[from] SplitError),
    #[error("metric: {0}")]
    Metric(#[from] MetricError),
    #[error("final roster does not cover the demand")]
    NotCovered,
}

impl PipelineError {
    /// True when the instance (or a subproblem) has no feasible solution.
    pub fn is_infeasible(&self) -> bool {
        matches!(
            self,
            PipelineError::Stage1(Stage1Error::Infeasible(_))
                | PipelineError::Stage2(Stage2Error::Infeasible(_))
                | PipelineError::Split(SplitError::Stage1 { source: Stage1Error::Infeasible(_), .. })
                | PipelineError::Split(SplitError::Stage2 { source: Stage2Error::Infeasible(_), .. })
        )
    }

    pub fn is_too_large(&self) -> bool {
        matches!(
            self,
            PipelineError::Stage2(Stage2Error::ModelTooLarge { .. })
                | PipelineError::Split(SplitError::Stage2 { source: Stage2Error::ModelTooLarge { .. }, .. })
        )
    }

    pub fn is_invalid_input(&self) -> bool {
        matches!(
            self,
            PipelineError::Invalid(_)
                | PipelineError::Instance(_)
                | PipelineError::Stage1(Stage1Error::Invalid(_))
                | PipelineError::Stage1(Stage1Error::Instance(_))
                | PipelineError::Stage1(Stage1Error::OmegaMismatch { .. })
        )
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MetricError {
    #[error("the maximum number of shifts per worker must be at least 1")]
    ZeroShiftCap,
    #[error("optimality measure undefined for a lower bound of {0}")]
    NonPositiveBound(f64),
    #[error("objective {objective} is below the lower bound {bound}")]
    BelowBound { objective: f64, bound: f64 },
    #[error("utilization undefined without supply")]
    NoSupply,
}

/// `ceil(B / b)`: no roster with at most `b` shifts per worker covers `B`
/// schedules with fewer workers.
pub fn worker_lower_bound(bound: u64, b: u64) -> Result<u64, MetricError> {
    if b == 0 {
        return Err(MetricError::ZeroShiftCap);
    }
    Ok(bound.div_ceil(b))
}

/// `100 - (O_S - O_L) / O_L * 100`, rounded to one decimal.
pub fn optimality_mu(objective: f64, bound: f64) -> Result<f64, MetricError> {
    if bound <= 0.0 || !bound.is_finite() {
        return Err(MetricError::NonPositiveBound(bound));
    }
    if objective < bound - 1e-9 {
        return Err(MetricError::BelowBound { objective, bound });
    }
    let mu = 100.0 - (objective - bound) / bound * 100.0;
    Ok((mu * 10.0).round() / 10.0)
}

/// `100 * demand / supply`, both in worker-hours.
pub fn utilization(demand_wh: f64, supply_wh: f64) -> Result<f64, MetricError> {
    if supply_wh <= 0.0 {
        return Err(MetricError::NoSupply);
    }
    Ok(100.0 * demand_wh / supply_wh)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum RunObjective {
    /// Fewest schedules (uniform cost), which drives the worker bound.
    #[default]
    Workers,
    /// The instance's schedule costs.
    Cost,
    Overcover,
}

impl RunObjective {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "workers" => Some(Self::Workers),
            "cost" => Some(Self::Cost),
            "overcover" => Some(Self::Overcover),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RhoChoice {
    /// Split only when the stage-two size estimate exceeds the budget.
    #[default]
    Auto,
    /// 1 forces a direct solve.
    Fixed(usize),
}

#[derive(Debug, Clone)]
pub struct RunOptions {
    pub objective: RunObjective,
    pub rho: RhoChoice,
    pub stage1_time: Option<Duration>,
    pub stage2_time: Option<Duration>,
    pub overlap: Option<OverlapMode>,
    /// Constraint budget for the stage-two model.
    pub budget: usize,
    /// Lower the worker bound with the smallest achievable peak demand.
    pub refine_bound: bool,
    pub coverage_cap: Option<u32>,
    pub seed: u64,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            objective: RunObjective::Workers,
            rho: RhoChoice::Auto,
            stage1_time: Some(Duration::from_secs(300)),
            stage2_time: Some(Duration::from_secs(300)),
            overlap: None,
            budget: stage2::DEFAULT_BUDGET,
            refine_bound: true,
            coverage_cap: None,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InstanceSummary {
    pub periods: usize,
    pub omega: u32,
    pub tasks: usize,
    pub demand_hours: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Stage1Record {
    pub objective: f64,
    pub bound: f64,
    pub schedules: usize,
    pub status: String,
    pub seconds: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RefineRecord {
    /// Lower bound on the smallest achievable peak demand.
    pub peak_bound: u64,
    pub status: String,
    pub seconds: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Stage2Record {
    pub workers: usize,
    pub status: String,
    pub seconds: f64,
    pub model_size: ModelSize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SplitRecord {
    pub rho: usize,
    pub r1: SubproblemStats,
    pub r2: SubproblemStats,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Metrics {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu: Option<f64>,
    pub utilization: f64,
    pub worker_lower_bound: u64,
    /// Which bound gave `worker_lower_bound`: shifts, hours or peak.
    pub bound_source: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunReport {
    /// `direct` or `split(rho)`.
    pub method: String,
    pub instance: InstanceSummary,
    pub stage1: Stage1Record,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub refinement: Option<RefineRecord>,
    pub stage2: Stage2Record,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub split: Option<SplitRecord>,
    pub metrics: Metrics,
    /// Sum of the component times.
    pub total_seconds: f64,
    /// Demand and supply per TP, in workers.
    pub demand: Vec<f64>,
    pub supply: Vec<f64>,
    /// Length in TPs of each pattern, by 1-based id minus one.
    pub pattern_lengths: Vec<usize>,
    pub roster: RosterFile,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub report: RunReport,
    pub roster: Roster,
    /// The schedules the roster indexes into.
    pub schedules: Vec<ShiftSchedule>,
    pub problem: AssignmentProblem,
    pub stage1: stage1::Stage1Solution,
}

fn to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

fn ceil_rat(r: &Rat) -> u64 {
    r.ceil().to_integer().max(0) as u64
}

fn solve_opts(limit: Option<Duration>, seed: u64) -> SolveOptions {
    SolveOptions {
        time_limit: limit,
        seed,
        ..SolveOptions::default()
    }
}

/// Runs the two-stage method on a validated instance.
pub fn run(inst: &Instance, opts: &RunOptions) -> Result<RunOutput, PipelineError> {
    let violations = instance::validate(inst);
    if !violations.is_empty() {
        return Err(PipelineError::Invalid(violations));
    }
    let mut inst = inst.clone();
    if let Some(mode) = opts.overlap {
        inst.policy.overlap = mode;
    }
    let objective = match opts.objective {
        RunObjective::Workers => {
            inst.costs = CostModel::Uniform;
            Stage1Objective::Cost
        }
        RunObjective::Cost => Stage1Objective::Cost,
        RunObjective::Overcover => Stage1Objective::Overcover,
    };
    let patterns = inst.pattern_set()?;
    let s1_opts = solve_opts(opts.stage1_time, opts.seed);
    let extra = Stage1Extra {
        coverage_cap: opts.coverage_cap,
    };
    let sol = stage1::solve_stage1(&inst, &patterns, objective, &extra, &s1_opts)?;
    let stage1_bound = to_f64(&sol.lower_bound);
    let stage1_obj = to_f64(&sol.objective_value);
    let stage1 = Stage1Record {
        objective: stage1_obj,
        bound: stage1_bound,
        schedules: sol.num_schedules,
        status: sol.status.as_str().into(),
        seconds: sol.seconds,
        mu: optimality_mu(stage1_obj, stage1_bound).ok(),
    };

    let refinement = if opts.refine_bound && !inst.tasks.is_empty() {
        refine_peak(&inst, &patterns, opts)
    } else {
        None
    };

    let s2_opts = Stage2Options {
        budget: opts.budget,
        symmetry: true,
        solve: solve_opts(opts.stage2_time, opts.seed),
    };
    let demand = sol.demand.clone();
    let schedules = stage1::expand_schedules(&sol.schedule_counts);
    let problem = AssignmentProblem::new(&inst.horizon, &patterns, &schedules, &inst.policy);
    let mut rho = match opts.rho {
        RhoChoice::Fixed(r) => r.max(1),
        RhoChoice::Auto => {
            let w = stage2::greedy_first_fit(&problem).map_or(problem.tau(), |r| r.workers_used);
            let w = inst.policy.max_workers.map_or(w, |cap| w.min(cap));
            split::recommend_rho(problem.estimate(w), opts.budget)
        }
    };

    let (method, roster, final_schedules, final_problem, stage2, split_record) = if rho == 1 {
        let res = stage2::solve_stage2(&problem, &s2_opts)?;
        let rec = Stage2Record {
            workers: res.roster.workers_used,
            status: res.status.as_str().into(),
            seconds: res.seconds,
            model_size: res.size,
        };
        ("direct".to_string(), res.roster, schedules, problem, rec, None)
    } else {
        let combined = loop {
            match split::solve_with_split(&inst, &demand, rho, &patterns, objective, &s1_opts, &s2_opts) {
                Err(SplitError::Stage2 {
                    source: Stage2Error::ModelTooLarge { .. },
                    ..
                }) if opts.rho == RhoChoice::Auto && rho < 64 => rho += 1,
                other => break other?,
            }
        };
        let p = AssignmentProblem::new(&inst.horizon, &patterns, &combined.schedules, &inst.policy);
        let a = &combined.copies_of_r1.stats;
        let b = &combined.r2_roster.stats;
        let rec = Stage2Record {
            workers: combined.total_workers,
            status: if a.stage2_status == "optimal" && b.stage2_status == "optimal" {
                "optimal_parts".into()
            } else {
                "feasible".into()
            },
            seconds: a.seconds + b.seconds,
            model_size: ModelSize {
                variables: a.model_size.variables.max(b.model_size.variables),
                constraints: a.model_size.constraints.max(b.model_size.constraints),
            },
        };
        let split_record = SplitRecord {
            rho,
            r1: a.clone(),
            r2: b.clone(),
        };
        (format!("split({rho})"), combined.roster, combined.schedules, p, rec, Some(split_record))
    };

    let violations = stage2::validate_roster(&final_problem, &roster);
    if !violations.is_empty() {
        return Err(Stage2Error::Invalid(violations.join("; ")).into());
    }
    let supply = supply_of_list(&final_schedules, &patterns, &inst);
    if !dominates(&supply, &demand).unwrap_or(false) {
        return Err(PipelineError::NotCovered);
    }

    let (lb, source) = worker_bound(&inst, &sol, objective, refinement.as_ref(), &demand)?;
    let workers = roster.workers_used;
    let omega = inst.horizon.omega;
    let metrics = Metrics {
        mu: optimality_mu(workers as f64, lb as f64).ok(),
        utilization: utilization(demand.worker_hours(omega), supply.worker_hours(omega)).unwrap_or(0.0),
        worker_lower_bound: lb,
        bound_source: source.into(),
    };
    let total_seconds = stage1.seconds + refinement.as_ref().map_or(0.0, |r| r.seconds) + stage2.seconds;
    let report = RunReport {
        method,
        instance: InstanceSummary {
            periods: inst.horizon.periods,
            omega,
            tasks: inst.tasks.len(),
            demand_hours: inst.total_demand_hours(),
        },
        stage1,
        refinement,
        stage2,
        split: split_record,
        metrics,
        total_seconds,
        demand: demand.to_f64(),
        supply: supply.to_f64(),
        pattern_lengths: patterns.patterns.iter().map(|p| p.len()).collect(),
        roster: RosterFile::from_roster(&final_problem, &roster),
    };
    Ok(RunOutput {
        report,
        roster,
        schedules: final_schedules,
        problem: final_problem,
        stage1: sol,
    })
}

fn supply_of_list(list: &[ShiftSchedule], patterns: &PatternSet, inst: &Instance) -> PeriodVector {
    let mut counts = std::collections::BTreeMap::new();
    for s in list {
        *counts.entry(*s).or_insert(0u32) += 1;
    }
    stage1::supply_of(&counts, patterns, inst)
}

/// Smallest achievable peak demand over all task starts; every worker
/// supplies at most one unit per TP, so it bounds the worker count.
fn refine_peak(inst: &Instance, patterns: &PatternSet, opts: &RunOptions) -> Option<RefineRecord> {
    let start = Instant::now();
    let limit = opts
        .stage1_time
        .map_or(Duration::from_secs(60), |t| (t / 4).min(Duration::from_secs(60)));
    let sol = stage1::solve_stage1(
        inst,
        patterns,
        Stage1Objective::MaxCoverage,
        &Stage1Extra::default(),
        &solve_opts(Some(limit), opts.seed),
    )
    .ok()?;
    Some(RefineRecord {
        peak_bound: ceil_rat(&sol.lower_bound),
        status: sol.status.as_str().into(),
        seconds: start.elapsed().as_secs_f64(),
    })
}

fn worker_bound(
    inst: &Instance,
    sol: &stage1::Stage1Solution,
    objective: Stage1Objective,
    refinement: Option<&RefineRecord>,
    demand: &PeriodVector,
) -> Result<(u64, &'static str), MetricError> {
    let mut best = (0u64, "none");
    let mut offer = |v: u64, name: &'static str| {
        if v > best.0 {
            best = (v, name);
        }
    };
    // peak demand is only fixed when there are no tasks to move
    if inst.tasks.is_empty() {
        offer(demand.max_value().ceil() as u64, "peak");
    }
    if let Some(r) = refinement {
        offer(r.peak_bound, "peak");
    }
    match inst.policy.effective_load_kind() {
        Some(LoadKind::Shifts) => {
            if let Some(b) = inst.policy.max_shifts {
                // the stage-one bound counts schedules only under uniform cost
                if objective == Stage1Objective::Cost && inst.costs == CostModel::Uniform {
                    offer(worker_lower_bound(ceil_rat(&sol.lower_bound), b as u64)?, "shifts");
                }
            }
        }
        Some(LoadKind::Hours) => {
            if let Some(h) = inst.policy.max_hours {
                let cap = h as f64 * inst.horizon.hours_per_period();
                if cap > 0.0 {
                    offer((inst.total_demand_hours() / cap - 1e-9).ceil().max(0.0) as u64, "hours");
                }
            }
        }
        None => {}
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bound_arithmetic() {
        assert_eq!(worker_lower_bound(220, 5), Ok(44));
        assert_eq!(worker_lower_bound(499, 5), Ok(100));
        assert_eq!(worker_lower_bound(852, 5), Ok(171));
        assert_eq!(worker_lower_bound(0, 5), Ok(0));
        assert!(worker_lower_bound(3, 0).is_err());
        assert_eq!(optimality_mu(106.0, 100.0), Ok(94.0));
        assert_eq!(optimality_mu(46.0, 45.0), Ok(97.8));
        assert_eq!(optimality_mu(36.0, 26.0), Ok(61.5));
        assert_eq!(optimality_mu(118.0, 116.0), Ok(98.3));
        assert!(optimality_mu(1.0, 0.0).is_err());
        assert_eq!(utilization(50.0, 100.0), Ok(50.0));
        assert!(utilization(1.0, 0.0).is_err());
    }
}

//! Demand splitting for instances whose stage-two model is too large:
//! `R = (rho - 1) R1 + R2` with `R1 = floor(R / rho)`, one roster for `R1`
//! used `rho - 1` times over fresh workers plus one roster for `R2`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::horizon::{dominates, PeriodVector};
use crate::instance::Instance;
use crate::ipcore::SolveOptions;
use crate::patterns::{PatternSet, ShiftSchedule};
use crate::stage1::{self, expand_schedules, Stage1Error, Stage1Extra, Stage1Objective};
use crate::stage2::{self, AssignmentProblem, ModelSize, Roster, Stage2Error, Stage2Options};

#[derive(Debug, Error)]
pub enum SplitError {
    #[error("splitting factor must be at least 2, got {0}")]
    BadRho(usize),
    #[error("demand must be a non-negative integer vector")]
    NotIntegral,
    #[error("subproblem {part}: {source}")]
    Stage1 {
        part: &'static str,
        #[source]
        source: Stage1Error,
    },
    #[error("subproblem {part}: {source}")]
    Stage2 {
        part: &'static str,
        #[source]
        source: Stage2Error,
    },
    #[error("combined roster does not cover the demand")]
    NotCovered,
    #[error("combined roster failed validation: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SplitPlan {
    pub rho: usize,
    pub r1: PeriodVector,
    pub r2: PeriodVector,
    /// Copies of the `R1` roster.
    pub multiplicity: usize,
}

pub fn split_demand(r: &PeriodVector, rho: usize) -> Result<SplitPlan, SplitError> {
    if rho < 2 {
        return Err(SplitError::BadRho(rho));
    }
    let values = r.to_integers().ok_or(SplitError::NotIntegral)?;
    if values.iter().any(|&v| v < 0) {
        return Err(SplitError::NotIntegral);
    }
    let k = rho as i64;
    let r1: Vec<i64> = values.iter().map(|&v| v / k).collect();
    let r2: Vec<i64> = values.iter().zip(&r1).map(|(&v, &a)| v - (k - 1) * a).collect();
    Ok(SplitPlan {
        rho,
        r1: PeriodVector::from_integers(&r1),
        r2: PeriodVector::from_integers(&r2),
        multiplicity: rho - 1,
    })
}

/// Smallest `rho` whose per-subproblem stage-two size fits `budget`.
///
/// Schedules and workers both shrink roughly by `rho` and the conflict
/// pairs by `rho^2`, so the pairwise rows (which dominate) shrink by
/// `rho^3`.
pub fn recommend_rho(size: ModelSize, budget: usize) -> usize {
    let c = size.constraints as u128;
    let budget = budget.max(1) as u128;
    let mut rho: u128 = 1;
    while c > budget * rho * rho * rho {
        rho += 1;
    }
    rho as usize
}

/// Statistics of one subproblem.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SubproblemStats {
    pub demand_hours: f64,
    pub schedules: usize,
    pub stage1_objective: f64,
    pub stage1_bound: f64,
    pub stage1_status: String,
    pub workers: usize,
    pub stage2_status: String,
    pub model_size: ModelSize,
    pub seconds: f64,
}

#[derive(Debug, Clone)]
pub struct SubResult {
    pub schedules: Vec<ShiftSchedule>,
    pub roster: Roster,
    pub stats: SubproblemStats,
}

/// Recombined solution. `schedules` lists the `R1` schedules once per copy
/// followed by the `R2` schedules; `roster` indexes into it, copy `c` of the
/// `R1` roster using workers `(c - 1) w1 + 1 ..= c w1`.
#[derive(Debug, Clone)]
pub struct CombinedRoster {
    pub rho: usize,
    pub copies_of_r1: SubResult,
    pub r2_roster: SubResult,
    pub total_workers: usize,
    pub schedules: Vec<ShiftSchedule>,
    pub roster: Roster,
}

impl CombinedRoster {
    pub fn supply(&self, inst: &Instance, patterns: &PatternSet) -> PeriodVector {
        let mut counts: BTreeMap<ShiftSchedule, u32> = BTreeMap::new();
        for s in &self.schedules {
            *counts.entry(*s).or_default() += 1;
        }
        stage1::supply_of(&counts, patterns, inst)
    }
}

fn sub_instance(inst: &Instance, demand: &PeriodVector) -> Instance {
    let mut sub = inst.clone();
    sub.tasks.clear();
    sub.precedence.clear();
    let values = demand.to_integers().expect("split parts are integral");
    sub.fixed_demand = Some(values.into_iter().map(|v| v as u32).collect());
    sub
}

fn solve_part(
    part: &'static str,
    inst: &Instance,
    demand: &PeriodVector,
    patterns: &PatternSet,
    objective: Stage1Objective,
    s1: &SolveOptions,
    s2: &Stage2Options,
) -> Result<SubResult, SplitError> {
    let start = std::time::Instant::now();
    let sub = sub_instance(inst, demand);
    let sol = stage1::solve_stage1(&sub, patterns, objective, &Stage1Extra::default(), s1)
        .map_err(|source| SplitError::Stage1 { part, source })?;
    let schedules = expand_schedules(&sol.schedule_counts);
    let problem = AssignmentProblem::new(&inst.horizon, patterns, &schedules, &inst.policy);
    let res = stage2::solve_stage2(&problem, s2).map_err(|source| SplitError::Stage2 { part, source })?;
    let stats = SubproblemStats {
        demand_hours: demand.worker_hours(inst.horizon.omega),
        schedules: schedules.len(),
        stage1_objective: num_traits::ToPrimitive::to_f64(&sol.objective_value).unwrap_or(f64::NAN),
        stage1_bound: num_traits::ToPrimitive::to_f64(&sol.lower_bound).unwrap_or(f64::NAN),
        stage1_status: sol.status.as_str().into(),
        workers: res.roster.workers_used,
        stage2_status: res.status.as_str().into(),
        model_size: res.size,
        seconds: start.elapsed().as_secs_f64(),
    };
    Ok(SubResult {
        schedules,
        roster: res.roster,
        stats,
    })
}

/// Solves both parts of a split of `demand` (the two run concurrently) and
/// recombines them. `inst` supplies the horizon, costs and worker policy;
/// its tasks are ignored.
pub fn solve_with_split(
    inst: &Instance,
    demand: &PeriodVector,
    rho: usize,
    patterns: &PatternSet,
    objective: Stage1Objective,
    s1: &SolveOptions,
    s2: &Stage2Options,
) -> Result<CombinedRoster, SplitError> {
    let plan = split_demand(demand, rho)?;
    let (a, b) = std::thread::scope(|scope| {
        let h1 = scope.spawn(|| solve_part("R1", inst, &plan.r1, patterns, objective, s1, s2));
        let r2 = solve_part("R2", inst, &plan.r2, patterns, objective, s1, s2);
        (h1.join().expect("subproblem thread panicked"), r2)
    });
    let (first, second) = (a?, b?);
    let combined = recombine(&plan, first, second);
    let problem = AssignmentProblem::new(&inst.horizon, patterns, &combined.schedules, &inst.policy);
    let violations = stage2::validate_roster(&problem, &combined.roster);
    if !violations.is_empty() {
        return Err(SplitError::Invalid(violations.join("; ")));
    }
    let supply = combined.supply(inst, patterns);
    if !dominates(&supply, demand).unwrap_or(false) {
        return Err(SplitError::NotCovered);
    }
    Ok(combined)
}

fn recombine(plan: &SplitPlan, first: SubResult, second: SubResult) -> CombinedRoster {
    let w1 = first.roster.workers_used;
    let t1 = first.schedules.len();
    let mut schedules = Vec::new();
    let mut roster = Roster::default();
    for c in 0..plan.multiplicity {
        schedules.extend_from_slice(&first.schedules);
        for (&u, list) in &first.roster.assignment {
            let worker = c * w1 + u;
            roster.assignment.insert(worker, list.iter().map(|&v| c * t1 + v).collect());
            if let Some(off) = first.roster.days_off.get(&u) {
                roster.days_off.insert(worker, off.clone());
            }
        }
    }
    let base_w = plan.multiplicity * w1;
    let base_t = plan.multiplicity * t1;
    schedules.extend_from_slice(&second.schedules);
    for (&u, list) in &second.roster.assignment {
        roster.assignment.insert(base_w + u, list.iter().map(|&v| base_t + v).collect());
        if let Some(off) = second.roster.days_off.get(&u) {
            roster.days_off.insert(base_w + u, off.clone());
        }
    }
    let total = base_w + second.roster.workers_used;
    roster.workers_used = roster
        .assignment
        .iter()
        .filter(|(_, l)| !l.is_empty())
        .map(|(&u, _)| u)
        .max()
        .unwrap_or(0);
    CombinedRoster {
        rho: plan.rho,
        copies_of_r1: first,
        r2_roster: second,
        total_workers: total,
        schedules,
        roster,
    }
}

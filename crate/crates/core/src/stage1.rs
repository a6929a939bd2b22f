//! Stage one: choose task starts and shift-schedule counts so that supply
//! covers demand in every TP.
//!
//! Covering rows are written in half units (pattern cells 0, 1, 2 and twice
//! the task resources) so all coefficients are integers.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::horizon::{dominates, PeriodVector};
use crate::instance::{self, induced_demand, Instance, InstanceError, TaskId, Violation};
use crate::ipcore::{self, int, IpModel, LpSession, Rat, Sense, SolveOptions, SolveStatus};
use crate::patterns::{add_footprint, PatternSet, ShiftSchedule};

#[derive(Debug, Error)]
pub enum Stage1Error {
    #[error("invalid instance: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
    #[error(transparent)]
    Instance(#[from] InstanceError),
    #[error("pattern set uses {patterns}-minute TPs but the horizon uses {horizon}")]
    OmegaMismatch { patterns: u32, horizon: u32 },
    #[error("stage one is infeasible; rows in the certificate: {}", .0.join(", "))]
    Infeasible(Vec<String>),
    #[error("no feasible schedule set found within the limits")]
    NoIncumbent,
    #[error(transparent)]
    Solver(#[from] ipcore::SolveError),
    #[error(transparent)]
    Model(#[from] ipcore::ModelError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage1Objective {
    /// Total schedule cost from the instance's cost model.
    Cost,
    /// Total supply, i.e. over-cover plus the constant total demand.
    Overcover,
    /// Peak demand `max_j R_j`; no schedules are chosen.
    MaxCoverage,
}

#[derive(Debug, Clone, Default)]
pub struct Stage1Extra {
    /// Adds `R_j <= cap` for every TP.
    pub coverage_cap: Option<u32>,
}

/// A built stage-one model with the meaning of its variables.
#[derive(Debug, Clone)]
pub struct Stage1Model {
    pub model: IpModel,
    /// `(task, start, variable)`.
    pub y: Vec<(TaskId, usize, usize)>,
    /// `(schedule, variable)`.
    pub x: Vec<(ShiftSchedule, usize)>,
    /// Integer variable `start - l` of each task.
    pub start_vars: BTreeMap<TaskId, usize>,
    /// Peak-demand variable of the max-coverage variant.
    pub peak: Option<usize>,
    pub objective: Stage1Objective,
}

/// Upper bound on `R_j` for every TP over all admissible starts.
fn demand_upper_bound(inst: &Instance) -> Vec<i64> {
    let h = &inst.horizon;
    let mut ub: Vec<i64> = match &inst.fixed_demand {
        Some(d) => d.iter().map(|&v| i64::from(v)).collect(),
        None => vec![0; h.periods],
    };
    for task in &inst.tasks {
        let mut best = vec![0i64; h.periods];
        for start in task.earliest()..=task.latest() {
            for (i, &r) in task.resource.iter().enumerate() {
                if let Some(j) = h.place((start + i) as i64) {
                    best[j - 1] = best[j - 1].max(i64::from(r));
                }
            }
        }
        for (u, b) in ub.iter_mut().zip(best) {
            *u += b;
        }
    }
    ub
}

pub fn build_stage1(
    inst: &Instance,
    patterns: &PatternSet,
    objective: Stage1Objective,
    extra: &Stage1Extra,
) -> Result<Stage1Model, Stage1Error> {
    let violations = instance::validate(inst);
    if !violations.is_empty() {
        return Err(Stage1Error::Invalid(violations));
    }
    let h = &inst.horizon;
    if patterns.omega != h.omega {
        return Err(Stage1Error::OmegaMismatch {
            patterns: patterns.omega,
            horizon: h.omega,
        });
    }
    let t = h.periods;
    let mut model = IpModel::new();

    // y variables only inside the start windows
    let mut y = Vec::new();
    for task in &inst.tasks {
        for j in task.earliest()..=task.latest() {
            let v = model.add_binary(format!("y_{}_{}", task.id, j))?;
            y.push((task.id, j, v));
        }
    }

    let ub = demand_upper_bound(inst);
    let peak_ub = ub.iter().copied().max().unwrap_or(0);

    // per-TP demand terms: (variable, half units) plus the fixed part
    let mut demand_terms: Vec<Vec<(usize, i64)>> = vec![Vec::new(); t];
    {
        let mut yi = 0;
        for task in &inst.tasks {
            for start in task.earliest()..=task.latest() {
                let v = y[yi].2;
                yi += 1;
                for (i, &r) in task.resource.iter().enumerate() {
                    if r == 0 {
                        continue;
                    }
                    if let Some(j) = h.place((start + i) as i64) {
                        demand_terms[j - 1].push((v, 2 * i64::from(r)));
                    }
                }
            }
        }
    }
    let fixed: Vec<i64> = match &inst.fixed_demand {
        Some(d) => d.iter().map(|&v| 2 * i64::from(v)).collect(),
        None => vec![0; t],
    };

    let mut x = Vec::new();
    let mut peak = None;
    if objective == Stage1Objective::MaxCoverage {
        let m = model.add_integer("peak", 0, peak_ub)?;
        peak = Some(m);
        for j in 0..t {
            let mut coefs = vec![(m, int(2))];
            coefs.extend(demand_terms[j].iter().map(|&(v, a)| (v, int(-a))));
            model.add_constraint(format!("peak_{}", j + 1), coefs, Sense::Ge, int(fixed[j]))?;
        }
    } else {
        let mut supply_terms: Vec<Vec<(usize, i64)>> = vec![Vec::new(); t];
        for (pi, p) in patterns.patterns.iter().enumerate() {
            let cap = (2 * peak_ub + p.min_positive_halves() - 1) / p.min_positive_halves();
            for start in 1..=t {
                if !patterns.admits_start(pi, start, h) {
                    continue;
                }
                let v = model.add_integer(format!("x_{}_{}", pi + 1, start), 0, cap.max(0))?;
                x.push((ShiftSchedule { pattern: pi, start }, v));
                for (k, c) in p.cells().iter().enumerate() {
                    if c.halves() == 0 {
                        continue;
                    }
                    if let Some(j) = h.place((start + k) as i64) {
                        supply_terms[j - 1].push((v, c.halves()));
                    }
                }
            }
        }
        for j in 0..t {
            if supply_terms[j].is_empty() && demand_terms[j].is_empty() && fixed[j] == 0 {
                continue;
            }
            let mut coefs: Vec<(usize, Rat)> =
                supply_terms[j].iter().map(|&(v, a)| (v, int(a))).collect();
            coefs.extend(demand_terms[j].iter().map(|&(v, a)| (v, int(-a))));
            model.add_constraint(format!("cover_{}", j + 1), coefs, Sense::Ge, int(fixed[j]))?;
        }
        let obj: Vec<(usize, Rat)> = x
            .iter()
            .map(|&(s, v)| {
                let p = &patterns.patterns[s.pattern];
                let c = match objective {
                    Stage1Objective::Cost => int(inst.costs.cost(s.pattern, p.len(), s.start)),
                    _ => Rat::new(p.availability_halves(), 2),
                };
                (v, c)
            })
            .collect();
        model.set_objective(obj)?;
    }

    // offset_k = start_k - l_k = sum_j (j - l_k) y_kj; branching on it
    // splits a window in half, which is far stronger than branching on
    // single y variables. Offsets rather than raw TP indices keep the
    // coefficients small.
    let ys_of = |id: TaskId| y.iter().filter(move |(k, _, _)| *k == id);
    let mut start_var = BTreeMap::new();
    for task in &inst.tasks {
        let l = task.earliest() as i64;
        let v = model.add_integer(format!("offset_{}", task.id), 0, task.latest() as i64 - l)?;
        model.set_priority(v, 1);
        let mut coefs = vec![(v, int(1))];
        coefs.extend(ys_of(task.id).map(|&(_, j, yv)| (yv, int(l - j as i64))));
        model.add_constraint(format!("offset_{}", task.id), coefs, Sense::Eq, int(0))?;
        start_var.insert(task.id, v);
    }
    // precedence: start_k + d_k - 1 <= start_k'
    for &[a, b] in &inst.precedence {
        let (Some(ta), Some(tb)) = (inst.task(a), inst.task(b)) else {
            continue;
        };
        let rhs = tb.earliest() as i64 - ta.earliest() as i64 - ta.duration as i64 + 1;
        model.add_constraint(
            format!("prec_{a}_{b}"),
            vec![(start_var[&a], int(1)), (start_var[&b], int(-1))],
            Sense::Le,
            int(rhs),
        )?;
    }
    for task in &inst.tasks {
        let coefs = ys_of(task.id).map(|&(_, _, v)| (v, int(1))).collect();
        model.add_constraint(format!("assign_{}", task.id), coefs, Sense::Eq, int(1))?;
    }
    if let Some(cap) = extra.coverage_cap {
        for j in 0..t {
            if demand_terms[j].is_empty() && fixed[j] <= 2 * i64::from(cap) {
                continue;
            }
            let coefs = demand_terms[j].iter().map(|&(v, a)| (v, int(a))).collect();
            model.add_constraint(
                format!("cap_{}", j + 1),
                coefs,
                Sense::Le,
                int(2 * i64::from(cap) - fixed[j]),
            )?;
        }
    }
    if let Some(m) = peak {
        model.set_objective(vec![(m, int(1))])?;
    }
    Ok(Stage1Model {
        model,
        y,
        x,
        start_vars: start_var,
        peak,
        objective,
    })
}

#[derive(Debug, Clone)]
pub struct Stage1Solution {
    pub starts: BTreeMap<TaskId, usize>,
    pub schedule_counts: BTreeMap<ShiftSchedule, u32>,
    pub objective_value: Rat,
    pub lower_bound: Rat,
    pub demand: PeriodVector,
    pub supply: PeriodVector,
    pub num_schedules: usize,
    pub status: SolveStatus,
    pub objective: Stage1Objective,
    pub nodes: u64,
    pub seconds: f64,
}

/// Earliest starts compatible with the windows and precedence pairs.
fn earliest_starts(inst: &Instance) -> Option<BTreeMap<TaskId, usize>> {
    let order = inst.topological_order()?;
    let mut es: BTreeMap<TaskId, usize> = inst.tasks.iter().map(|t| (t.id, t.earliest())).collect();
    for &k in &order {
        let d = inst.task(k)?.duration;
        for &[a, b] in &inst.precedence {
            if a == k {
                let need = es[&a] + d - 1;
                let e = es.get_mut(&b)?;
                *e = (*e).max(need);
            }
        }
    }
    inst.tasks
        .iter()
        .all(|t| es[&t.id] <= t.latest())
        .then_some(es)
}

/// Greedy cover of a demand vector: repeatedly serve the first TP with a
/// deficit using the schedule with the most useful coverage per unit cost.
pub fn greedy_cover(
    inst: &Instance,
    patterns: &PatternSet,
    demand: &PeriodVector,
    objective: Stage1Objective,
) -> Option<BTreeMap<ShiftSchedule, u32>> {
    let h = &inst.horizon;
    let t = h.periods;
    let mut deficit: Vec<i64> = demand.halves().to_vec();
    let mut counts: BTreeMap<ShiftSchedule, u32> = BTreeMap::new();
    let cost_of = |s: ShiftSchedule| -> f64 {
        let p = &patterns.patterns[s.pattern];
        match objective {
            Stage1Objective::Cost => inst.costs.cost(s.pattern, p.len(), s.start) as f64,
            _ => p.availability_halves() as f64 / 2.0,
        }
    };
    loop {
        let Some(j0) = deficit.iter().position(|&d| d > 0) else {
            return Some(counts);
        };
        let mut best: Option<(f64, ShiftSchedule)> = None;
        for (pi, p) in patterns.patterns.iter().enumerate() {
            for k in 0..p.len() {
                if p.cells()[k].halves() == 0 {
                    continue;
                }
                // start so that cell k lands on j0
                let start = crate::horizon::wrap(j0 as i64 + 1 - k as i64, t);
                if !h.cyclic && (start as i64) != j0 as i64 + 1 - k as i64 {
                    continue;
                }
                if !patterns.admits_start(pi, start, h) {
                    continue;
                }
                let s = ShiftSchedule { pattern: pi, start };
                let mut useful = 0i64;
                for (c, cell) in p.cells().iter().enumerate() {
                    if let Some(j) = h.place((start + c) as i64) {
                        useful += cell.halves().min(deficit[j - 1].max(0));
                    }
                }
                let score = useful as f64 / cost_of(s).max(1e-9);
                if best.is_none_or(|(b, bs)| score > b + 1e-12 || (score >= b - 1e-12 && s < bs)) {
                    best = Some((score, s));
                }
            }
        }
        let (_, s) = best?;
        *counts.entry(s).or_default() += 1;
        let p = &patterns.patterns[s.pattern];
        for (c, cell) in p.cells().iter().enumerate() {
            if let Some(j) = h.place((s.start + c) as i64) {
                deficit[j - 1] -= cell.halves();
            }
        }
    }
}

/// Schedule counts minimizing the objective for fixed task starts.
fn cover_for_starts(
    built: &Stage1Model,
    inst: &Instance,
    starts: &BTreeMap<TaskId, usize>,
    opts: &SolveOptions,
) -> Option<Vec<i64>> {
    let mut sub = built.model.clone();
    fix_starts_in_model(&mut sub, built, inst, starts)?;
    let r = ipcore::solve(
        &sub,
        &SolveOptions {
            warm_start: None,
            objective_floor: None,
            node_limit: Some(500),
            ..opts.clone()
        },
    )
    .ok()?;
    r.incumbent.map(|i| i.values)
}

fn fix_starts_in_model(
    m: &mut IpModel,
    built: &Stage1Model,
    inst: &Instance,
    starts: &BTreeMap<TaskId, usize>,
) -> Option<()> {
    for &(k, j, v) in &built.y {
        let on = i64::from(starts[&k] == j);
        m.set_bounds(v, on, on).ok()?;
    }
    for (k, &v) in &built.start_vars {
        let off = (starts[k] - inst.task(*k)?.earliest()) as i64;
        m.set_bounds(v, off, off).ok()?;
    }
    Some(())
}

struct StartSearch<'m, 'a> {
    built: &'m Stage1Model,
    inst: &'a Instance,
    lp: LpSession<'m>,
    ys: BTreeMap<TaskId, Vec<(usize, usize)>>,
    preds: BTreeMap<TaskId, Vec<TaskId>>,
    succs: BTreeMap<TaskId, Vec<TaskId>>,
    deadline: Option<Instant>,
}

impl StartSearch<'_, '_> {
    fn fix(&mut self, k: TaskId, s: usize) {
        for &(j, v) in &self.ys[&k] {
            let on = if j == s { 1.0 } else { 0.0 };
            self.lp.set_bounds(v, on, on);
        }
        let l = self.inst.task(k).map_or(s, |t| t.earliest());
        self.lp.set_bounds(self.built.start_vars[&k], (s - l) as f64, (s - l) as f64);
    }

    fn timed_out(&self) -> bool {
        self.deadline.is_some_and(|d| Instant::now() >= d)
    }

    /// Starts of task `k` compatible with the current starts of its
    /// precedence neighbours.
    fn range(&self, k: TaskId, starts: &BTreeMap<TaskId, usize>) -> (usize, usize) {
        let task = self.inst.task(k).expect("task of the instance");
        let dur = |k: TaskId| self.inst.task(k).map_or(1, |t| t.duration);
        let lo = self.preds.get(&k).into_iter().flatten().map(|&a| starts[&a] + dur(a) - 1);
        let hi = self.succs.get(&k).into_iter().flatten().map(|&b| (starts[&b] + 1).saturating_sub(task.duration));
        (lo.fold(task.earliest(), usize::max), hi.fold(task.latest(), usize::min))
    }

    /// Moves every task to its best start until no single move improves
    /// the LP value. The LP holds `starts` on return.
    fn descend(&mut self, starts: &mut BTreeMap<TaskId, usize>, mut value: f64) -> f64 {
        let ids: Vec<TaskId> = self.inst.tasks.iter().map(|t| t.id).collect();
        loop {
            let mut improved = false;
            for &k in &ids {
                let cur = starts[&k];
                let (lo, hi) = self.range(k, starts);
                let mut best = (value, cur);
                for s in lo..=hi {
                    if s == cur {
                        continue;
                    }
                    if self.timed_out() {
                        break;
                    }
                    self.fix(k, s);
                    if let Some(v) = self.lp.solve(self.deadline) {
                        if v < best.0 - 1e-7 {
                            best = (v, s);
                        }
                    }
                }
                self.fix(k, best.1);
                if best.1 != cur {
                    starts.insert(k, best.1);
                    value = best.0;
                    improved = true;
                }
            }
            if !improved || self.timed_out() {
                return value;
            }
        }
    }
}

/// Iterated local search over task starts. A start map is scored by the LP
/// value of the covering problem it induces (for fixed starts that LP is
/// close to integral). Descents move one task at a time; kicks move a few
/// random tasks and the result is kept unless it got worse.
fn improve_starts(
    built: &Stage1Model,
    inst: &Instance,
    mut starts: BTreeMap<TaskId, usize>,
    deadline: Option<Instant>,
    seed: u64,
) -> BTreeMap<TaskId, usize> {
    let Ok(lp) = LpSession::new(&built.model) else {
        return starts;
    };
    let mut ys: BTreeMap<TaskId, Vec<(usize, usize)>> = BTreeMap::new();
    for &(k, j, v) in &built.y {
        ys.entry(k).or_default().push((j, v));
    }
    let mut preds: BTreeMap<TaskId, Vec<TaskId>> = BTreeMap::new();
    let mut succs: BTreeMap<TaskId, Vec<TaskId>> = BTreeMap::new();
    for &[a, b] in &inst.precedence {
        preds.entry(b).or_default().push(a);
        succs.entry(a).or_default().push(b);
    }
    let mut ss = StartSearch {
        built,
        inst,
        lp,
        ys,
        preds,
        succs,
        deadline,
    };
    for (&k, &s) in &starts {
        ss.fix(k, s);
    }
    let Some(v0) = ss.lp.solve(deadline) else {
        return starts;
    };
    let mut value = ss.descend(&mut starts, v0);
    let mut best = (value, starts.clone());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ids: Vec<TaskId> = inst.tasks.iter().map(|t| t.id).collect();
    let mut stale = 0;
    while stale < MAX_STALE_KICKS && !ss.timed_out() {
        let mut cand = best.1.clone();
        for _ in 0..rng.gen_range(2..=4usize).min(ids.len()) {
            let k = ids[rng.gen_range(0..ids.len())];
            let (lo, hi) = ss.range(k, &cand);
            if lo <= hi {
                cand.insert(k, rng.gen_range(lo..=hi));
            }
        }
        for (&k, &s) in &cand {
            ss.fix(k, s);
        }
        let Some(v) = ss.lp.solve(deadline) else {
            stale += 1;
            continue;
        };
        value = ss.descend(&mut cand, v);
        if value < best.0 - 1e-7 {
            stale = 0;
        } else {
            stale += 1;
        }
        if value <= best.0 + 1e-7 {
            best = (value, cand);
        }
    }
    best.1
}

const MAX_STALE_KICKS: usize = 60;

/// Starts from the root LP: each task at its most-used start, then pushed
/// forward along precedence pairs.
fn lp_rounded_starts(built: &Stage1Model, inst: &Instance, x: &[f64]) -> Option<BTreeMap<TaskId, usize>> {
    let mut best: BTreeMap<TaskId, (f64, usize)> = BTreeMap::new();
    for &(k, j, v) in &built.y {
        let e = best.entry(k).or_insert((f64::NEG_INFINITY, j));
        if x[v] > e.0 + 1e-9 {
            *e = (x[v], j);
        }
    }
    let mut starts: BTreeMap<TaskId, usize> = best.into_iter().map(|(k, (_, j))| (k, j)).collect();
    for k in inst.topological_order()? {
        let d = inst.task(k)?.duration;
        for &[a, b] in &inst.precedence {
            if a == k {
                let need = starts[&a] + d - 1;
                let e = starts.get_mut(&b)?;
                *e = (*e).max(need);
            }
        }
    }
    inst.tasks
        .iter()
        .all(|t| starts[&t.id] <= t.latest())
        .then_some(starts)
}

fn warm_start(
    inst: &Instance,
    patterns: &PatternSet,
    built: &Stage1Model,
    opts: &SolveOptions,
) -> Option<Vec<i64>> {
    let start = Instant::now();
    let earliest = earliest_starts(inst)?;
    if let Some(m) = built.peak {
        let mut x = vec![0i64; built.model.num_vars()];
        for &(k, j, v) in &built.y {
            x[v] = i64::from(earliest[&k] == j);
        }
        for (k, &v) in &built.start_vars {
            x[v] = (earliest[k] - inst.task(*k)?.earliest()) as i64;
        }
        let demand = induced_demand(inst, &earliest).ok()?;
        x[m] = demand.halves().iter().map(|h| (h + 1) / 2).max().unwrap_or(0);
        return Some(x);
    }
    if inst.tasks.is_empty() {
        let demand = induced_demand(inst, &earliest).ok()?;
        let counts = greedy_cover(inst, patterns, &demand, built.objective)?;
        let mut x = vec![0i64; built.model.num_vars()];
        for &(s, v) in &built.x {
            x[v] = counts.get(&s).map_or(0, |&c| i64::from(c));
        }
        return Some(x);
    }
    // a share of the time limit for the heuristic
    let deadline = opts.time_limit.map(|t| start + t.mul_f64(0.3));
    let root = ipcore::lp_relax(&built.model, &SolveOptions { time_limit: opts.time_limit.map(|t| t.mul_f64(0.1)), ..opts.clone() }).ok()?;
    let initial = if root.status == ipcore::LpStatus::Optimal {
        lp_rounded_starts(built, inst, &root.x).unwrap_or(earliest)
    } else {
        earliest
    };
    let starts = improve_starts(built, inst, initial, deadline, opts.seed);
    let sub_opts = SolveOptions {
        time_limit: deadline.map(|d| d.saturating_duration_since(Instant::now()).max(Duration::from_secs(1))),
        ..opts.clone()
    };
    cover_for_starts(built, inst, &starts, &sub_opts)
}

/// Solves stage one. On a time or node limit the incumbent is returned with
/// the solver's bound.
pub fn solve_stage1(
    inst: &Instance,
    patterns: &PatternSet,
    objective: Stage1Objective,
    extra: &Stage1Extra,
    opts: &SolveOptions,
) -> Result<Stage1Solution, Stage1Error> {
    let built = build_stage1(inst, patterns, objective, extra)?;
    let began = Instant::now();
    let mut opts = opts.clone();
    if opts.warm_start.is_none() && extra.coverage_cap.is_none() {
        opts.warm_start = warm_start(inst, patterns, &built, &opts);
        // the heuristics spend part of the overall limit
        opts.time_limit = opts
            .time_limit
            .map(|t| t.saturating_sub(began.elapsed()).max(Duration::from_secs(1)));
    }
    let res = ipcore::solve(&built.model, &opts)?;
    let Some(inc) = res.incumbent.clone() else {
        if res.status == SolveStatus::Infeasible {
            let names = res
                .infeasibility
                .unwrap_or_default()
                .iter()
                .map(|&(i, _)| built.model.constraints()[i].name.clone())
                .collect();
            return Err(Stage1Error::Infeasible(names));
        }
        return Err(Stage1Error::NoIncumbent);
    };
    let mut starts = BTreeMap::new();
    for &(k, j, v) in &built.y {
        if inc.values[v] == 1 {
            starts.insert(k, j);
        }
    }
    let mut counts = BTreeMap::new();
    for &(s, v) in &built.x {
        if inc.values[v] > 0 {
            counts.insert(s, inc.values[v] as u32);
        }
    }
    let demand = induced_demand(inst, &starts)?;
    let supply = supply_of(&counts, patterns, inst);
    let num_schedules = counts.values().map(|&c| c as usize).sum();
    Ok(Stage1Solution {
        starts,
        schedule_counts: counts,
        objective_value: inc.objective,
        lower_bound: res.best_bound.min(inc.objective),
        demand,
        supply,
        num_schedules,
        status: res.status,
        objective,
        nodes: res.stats.nodes,
        seconds: began.elapsed().as_secs_f64(),
    })
}

/// Supply of a multiset of schedules.
pub fn supply_of(
    counts: &BTreeMap<ShiftSchedule, u32>,
    patterns: &PatternSet,
    inst: &Instance,
) -> PeriodVector {
    let mut v = inst.horizon.zeros();
    for (s, &c) in counts {
        add_footprint(&mut v, &patterns.patterns[s.pattern], s.start, &inst.horizon, i64::from(c));
    }
    v
}

/// The schedules `U_1..U_tau`: each `(pattern, start)` repeated by its
/// count, sorted by start and then pattern.
pub fn expand_schedules(counts: &BTreeMap<ShiftSchedule, u32>) -> Vec<ShiftSchedule> {
    let mut out: Vec<ShiftSchedule> = counts
        .iter()
        .flat_map(|(&s, &c)| std::iter::repeat(s).take(c as usize))
        .collect();
    out.sort_by_key(|s| (s.start, s.pattern));
    out
}

/// Checks the stage-one invariants of a solution against its instance.
pub fn check_solution(
    inst: &Instance,
    patterns: &PatternSet,
    sol: &Stage1Solution,
) -> Result<(), String> {
    for task in &inst.tasks {
        let s = sol
            .starts
            .get(&task.id)
            .ok_or_else(|| format!("task {} has no start", task.id))?;
        if *s < task.earliest() || *s > task.latest() {
            return Err(format!("task {} starts outside its window", task.id));
        }
    }
    for &[a, b] in &inst.precedence {
        let d = inst.task(a).map_or(1, |t| t.duration);
        if sol.starts[&a] + d - 1 > sol.starts[&b] {
            return Err(format!("precedence ({a}, {b}) violated"));
        }
    }
    let demand = induced_demand(inst, &sol.starts).map_err(|e| e.to_string())?;
    if demand != sol.demand {
        return Err("reported demand differs from the starts".into());
    }
    let supply = supply_of(&sol.schedule_counts, patterns, inst);
    if supply != sol.supply {
        return Err("reported supply differs from the schedules".into());
    }
    if sol.objective != Stage1Objective::MaxCoverage
        && !dominates(&supply, &demand).map_err(|e| e.to_string())?
    {
        return Err("supply does not cover demand".into());
    }
    Ok(())
}

/// File form of a stage-one solution. Pattern ids are 1-based.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Stage1File {
    pub starts: BTreeMap<TaskId, usize>,
    pub schedules: Vec<[u64; 3]>,
    pub objective: f64,
    pub bound: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub status: Option<String>,
}

impl Stage1File {
    pub fn from_solution(sol: &Stage1Solution) -> Self {
        Self {
            starts: sol.starts.clone(),
            schedules: sol
                .schedule_counts
                .iter()
                .map(|(s, &c)| [s.pattern as u64 + 1, s.start as u64, u64::from(c)])
                .collect(),
            objective: sol.objective_value.to_f64().unwrap_or(f64::NAN),
            bound: sol.lower_bound.to_f64().unwrap_or(f64::NAN),
            status: Some(sol.status.as_str().to_string()),
        }
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        let f: Self = serde_json::from_str(text)?;
        if f.schedules.iter().any(|s| s[0] == 0 || s[1] == 0) {
            return Err(serde::de::Error::custom("pattern ids and starts are 1-based"));
        }
        Ok(f)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("stage-one files always serialize")
    }

    /// Schedule counts with 0-based pattern indices.
    pub fn counts(&self) -> BTreeMap<ShiftSchedule, u32> {
        let mut out = BTreeMap::new();
        for s in &self.schedules {
            *out.entry(ShiftSchedule {
                pattern: (s[0] - 1) as usize,
                start: s[1] as usize,
            })
            .or_default() += s[2] as u32;
        }
        out
    }
}

/// Whether a solution's objective value is zero (no schedules needed).
pub fn is_trivial(sol: &Stage1Solution) -> bool {
    sol.objective_value.is_zero()
}

//! Stage two: assign the expanded schedule list to as few workers as
//! possible under the per-worker rules (shift cap, rest gap, hours cap,
//! days off).
//!
//! Pairwise rows (`z_uv + z_uv' <= 1` for conflicting schedules, and the
//! day-off conflicts) are registered as lazy rows so the LP only carries the
//! ones that bind.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::horizon::Horizon;
use crate::instance::{DaysOff, OverlapMode, Stage2Policy};
use crate::ipcore::{self, int, IpModel, Rat, Sense, SolveOptions, SolveStatus};
use crate::patterns::{PatternSet, ShiftSchedule};

mod tabu;

pub const DEFAULT_BUDGET: usize = 2_000_000;

#[derive(Debug, Error)]
pub enum Stage2Error {
    #[error("stage-two model too large: {variables} variables and {constraints} constraints exceed the budget of {budget}")]
    ModelTooLarge {
        variables: usize,
        constraints: usize,
        budget: usize,
    },
    #[error("stage two is infeasible: {0}")]
    Infeasible(String),
    #[error("no roster found within the limits")]
    NoIncumbent,
    #[error("roster failed validation: {0}")]
    Invalid(String),
    #[error(transparent)]
    Solver(#[from] ipcore::SolveError),
    #[error(transparent)]
    Model(#[from] ipcore::ModelError),
}

/// Whether two schedules conflict under rest gap `g`. `a` and `b` are
/// `(start, length)`; order does not matter.
///
/// Linear mode: with `a` starting first, `b.start <= a.start + a.len - 1 + g`.
/// Cyclic mode also catches the later schedule (plus `g`) running past `t`
/// into the earlier one.
pub fn overlap(a: (usize, usize), b: (usize, usize), g: usize, mode: OverlapMode, t: usize) -> bool {
    let (e, l) = if a.0 <= b.0 { (a, b) } else { (b, a) };
    if l.0 + 1 <= e.0 + e.1 + g {
        return true;
    }
    mode == OverlapMode::Cyclic && l.0 + l.1 + g > e.0 + t
}

/// A day-off block: consecutive whole days starting at `first_day`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DayOffBlock {
    pub first_day: usize,
    pub days: usize,
}

impl DayOffBlock {
    /// `(start TP, length)`.
    pub fn span(&self, h: &Horizon) -> (usize, usize) {
        let ppd = h.periods_per_day();
        ((self.first_day - 1) * ppd + 1, self.days * ppd)
    }
}

/// The stage-two input: schedules `U_1..U_tau` plus the derived conflict
/// structure.
#[derive(Debug, Clone)]
pub struct AssignmentProblem {
    pub horizon: Horizon,
    pub policy: Stage2Policy,
    pub schedules: Vec<ShiftSchedule>,
    /// `(start, length)` of each schedule.
    pub spans: Vec<(usize, usize)>,
    /// Conflicting pairs `(v, v')` with `v < v'`.
    pub overlap_pairs: Vec<(usize, usize)>,
    pub blocks: Vec<DayOffBlock>,
    /// Blocks each worker takes (1 for two consecutive days, 2 for two
    /// single days); 0 without days off.
    pub blocks_per_worker: usize,
    /// `(block, schedule)` pairs whose spans intersect.
    pub block_conflicts: Vec<(usize, usize)>,
}

fn intersects(a: (usize, usize), b: (usize, usize), mode: OverlapMode, t: usize) -> bool {
    overlap(a, b, 0, mode, t)
}

impl AssignmentProblem {
    pub fn new(
        horizon: &Horizon,
        patterns: &PatternSet,
        schedules: &[ShiftSchedule],
        policy: &Stage2Policy,
    ) -> Self {
        let t = horizon.periods;
        let spans: Vec<(usize, usize)> = schedules
            .iter()
            .map(|s| (s.start, patterns.patterns[s.pattern].len()))
            .collect();
        let mut overlap_pairs = Vec::new();
        for a in 0..spans.len() {
            for b in a + 1..spans.len() {
                if overlap(spans[a], spans[b], policy.rest_gap, policy.overlap, t) {
                    overlap_pairs.push((a, b));
                }
            }
        }
        let days = horizon.days();
        let (blocks, per_worker): (Vec<DayOffBlock>, usize) = match policy.days_off {
            DaysOff::None => (Vec::new(), 0),
            DaysOff::TwoConsecutive => {
                // the block over the week's end only exists on a cyclic week
                let last = if policy.overlap == OverlapMode::Cyclic { days } else { days.saturating_sub(1) };
                ((1..=last).map(|d| DayOffBlock { first_day: d, days: 2 }).collect(), 1)
            }
            DaysOff::TwoAny => ((1..=days).map(|d| DayOffBlock { first_day: d, days: 1 }).collect(), 2),
        };
        let mut block_conflicts = Vec::new();
        for (k, b) in blocks.iter().enumerate() {
            for (v, &sp) in spans.iter().enumerate() {
                if intersects(b.span(horizon), sp, policy.overlap, t) {
                    block_conflicts.push((k, v));
                }
            }
        }
        Self {
            horizon: *horizon,
            policy: policy.clone(),
            schedules: schedules.to_vec(),
            spans,
            overlap_pairs,
            blocks,
            blocks_per_worker: per_worker,
            block_conflicts,
        }
    }

    pub fn tau(&self) -> usize {
        self.schedules.len()
    }

    pub fn estimate(&self, w: usize) -> ModelSize {
        estimate_stage2_size(
            self.tau(),
            w,
            &self.policy,
            self.overlap_pairs.len(),
            self.blocks.len(),
            self.block_conflicts.len(),
        )
    }

    /// Lower bounds on the worker count: shift cap, hours cap and the
    /// largest set of pairwise conflicting schedules.
    pub fn worker_floor(&self) -> usize {
        let tau = self.tau();
        if tau == 0 {
            return 0;
        }
        let mut floor = 1;
        if let Some(b) = self.policy.max_shifts {
            floor = floor.max(tau.div_ceil(b.max(1)));
        }
        if let Some(hcap) = self.policy.max_hours {
            let total: usize = self.spans.iter().map(|s| s.1).sum();
            floor = floor.max(total.div_ceil(hcap.max(1)));
        }
        floor.max(self.max_conflict_clique())
    }

    /// Schedules whose span extended by the rest gap covers a common TP
    /// conflict pairwise; the largest such set.
    fn max_conflict_clique(&self) -> usize {
        let t = self.horizon.periods;
        let g = self.policy.rest_gap;
        let mut cover = vec![0usize; t + 1];
        for &(s, m) in &self.spans {
            let reach = (m + g).min(t);
            for k in 0..reach {
                let j = s + k;
                if j <= t {
                    cover[j] += 1;
                } else if self.policy.overlap == OverlapMode::Cyclic {
                    cover[j - t] += 1;
                }
            }
        }
        cover.into_iter().max().unwrap_or(0)
    }
}

/// Variable and constraint counts of the stage-two model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelSize {
    pub variables: usize,
    pub constraints: usize,
}

/// Closed-form size: `w (tau + dummies) + 1` variables; `tau` assignment and
/// `tau` objective-linking rows, one row per worker for each active cap,
/// one row per worker and conflicting pair, and with days off one count row
/// plus one row per block conflict for every worker. Symmetry-breaking rows
/// are not counted.
pub fn estimate_stage2_size(
    tau: usize,
    w: usize,
    policy: &Stage2Policy,
    overlap_pairs: usize,
    dummies: usize,
    block_conflicts: usize,
) -> ModelSize {
    if tau == 0 {
        return ModelSize {
            variables: 1,
            constraints: 0,
        };
    }
    let caps = usize::from(policy.max_shifts.is_some()) + usize::from(policy.max_hours.is_some());
    let mut constraints = 2 * tau + w * caps + w * overlap_pairs;
    if policy.days_off != DaysOff::None {
        constraints += w + w * block_conflicts;
    }
    ModelSize {
        variables: w * (tau + dummies) + 1,
        constraints,
    }
}

/// A built stage-two model.
#[derive(Debug, Clone)]
pub struct Stage2Model {
    pub model: IpModel,
    /// `z[u][v]` for workers `u = 0..w` and schedules then blocks.
    pub z: Vec<Vec<usize>>,
    pub xi: usize,
    pub w: usize,
}

pub fn build_stage2(p: &AssignmentProblem, w: usize, symmetry: bool) -> Result<Stage2Model, Stage2Error> {
    let tau = p.tau();
    let nb = p.blocks.len();
    let mut m = IpModel::new();
    let mut z = Vec::with_capacity(w);
    if tau == 0 {
        let xi = m.add_integer("xi", 0, w as i64)?;
        m.set_objective(vec![(xi, int(1))])?;
        return Ok(Stage2Model { model: m, z, xi, w });
    }
    for u in 0..w {
        let mut row = Vec::with_capacity(tau + nb);
        for v in 0..tau {
            row.push(m.add_binary(format!("z_{}_{}", u + 1, v + 1))?);
        }
        for k in 0..nb {
            row.push(m.add_binary(format!("off_{}_{}", u + 1, k + 1))?);
        }
        z.push(row);
    }
    let xi = m.add_integer("xi", 0, w as i64)?;
    for v in 0..tau {
        m.add_constraint(format!("assign_{}", v + 1), (0..w).map(|u| (z[u][v], int(1))).collect(), Sense::Eq, int(1))?;
    }
    for v in 0..tau {
        let mut coefs: Vec<(usize, Rat)> = (0..w).map(|u| (z[u][v], int(u as i64 + 1))).collect();
        coefs.push((xi, int(-1)));
        m.add_constraint(format!("xi_{}", v + 1), coefs, Sense::Le, int(0))?;
    }
    for u in 0..w {
        if let Some(b) = p.policy.max_shifts {
            m.add_constraint(format!("shifts_{}", u + 1), (0..tau).map(|v| (z[u][v], int(1))).collect(), Sense::Le, int(b as i64))?;
        }
        if let Some(hcap) = p.policy.max_hours {
            m.add_constraint(
                format!("hours_{}", u + 1),
                (0..tau).map(|v| (z[u][v], int(p.spans[v].1 as i64))).collect(),
                Sense::Le,
                int(hcap as i64),
            )?;
        }
        for &(a, b) in &p.overlap_pairs {
            m.add_lazy_constraint(format!("rest_{}_{}_{}", u + 1, a + 1, b + 1), vec![(z[u][a], int(1)), (z[u][b], int(1))], Sense::Le, int(1))?;
        }
        if p.blocks_per_worker > 0 {
            m.add_constraint(
                format!("dayoff_{}", u + 1),
                (0..nb).map(|k| (z[u][tau + k], int(1))).collect(),
                Sense::Eq,
                int(p.blocks_per_worker as i64),
            )?;
            for &(k, v) in &p.block_conflicts {
                m.add_lazy_constraint(
                    format!("off_{}_{}_{}", u + 1, k + 1, v + 1),
                    vec![(z[u][tau + k], int(1)), (z[u][v], int(1))],
                    Sense::Le,
                    int(1),
                )?;
            }
        }
    }
    if symmetry {
        // relabel workers by their first schedule: schedule v only goes to
        // workers 1..=v, and a worker is used only if the previous one is
        for (u, row) in z.iter().enumerate() {
            for (v, &var) in row.iter().enumerate().take(tau) {
                if u > v {
                    m.set_bounds(var, 0, 0)?;
                }
            }
        }
        let big = p.policy.max_shifts.unwrap_or(tau).min(tau) as i64;
        for u in 1..w {
            let mut coefs: Vec<(usize, Rat)> = (0..tau).map(|v| (z[u][v], int(1))).collect();
            coefs.extend((0..tau).map(|v| (z[u - 1][v], int(-big))));
            m.add_constraint(format!("order_{}", u + 1), coefs, Sense::Le, int(0))?;
        }
    }
    m.set_objective(vec![(xi, int(1))])?;
    Ok(Stage2Model { model: m, z, xi, w })
}

/// Worker rosters: 1-based worker index to 0-based schedule indices.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Roster {
    pub assignment: BTreeMap<usize, Vec<usize>>,
    /// Day-off blocks (indices into `AssignmentProblem::blocks`) per worker.
    pub days_off: BTreeMap<usize, Vec<usize>>,
    pub workers_used: usize,
    pub violations: Vec<String>,
}

impl Roster {
    pub fn feasible(&self) -> bool {
        self.violations.is_empty()
    }
}

struct WorkerState {
    schedules: Vec<usize>,
    hours: usize,
}

fn free_blocks(p: &AssignmentProblem, schedules: &[usize]) -> Vec<usize> {
    (0..p.blocks.len())
        .filter(|&k| {
            let span = p.blocks[k].span(&p.horizon);
            schedules
                .iter()
                .all(|&v| !intersects(span, p.spans[v], p.policy.overlap, p.horizon.periods))
        })
        .collect()
}

/// Picks day-off blocks for a worker: the first free block, or for single
/// days the first two free days.
fn choose_blocks(p: &AssignmentProblem, schedules: &[usize]) -> Option<Vec<usize>> {
    if p.blocks_per_worker == 0 {
        return Some(Vec::new());
    }
    let free = free_blocks(p, schedules);
    (free.len() >= p.blocks_per_worker).then(|| free[..p.blocks_per_worker].to_vec())
}

/// First fit in start order: each schedule goes to the lowest-index worker
/// that can still take it under every rule. Returns `None` only when some
/// schedule cannot be worked even alone.
pub fn greedy_first_fit(p: &AssignmentProblem) -> Option<Roster> {
    let mut order: Vec<usize> = (0..p.tau()).collect();
    order.sort_by_key(|&v| (p.spans[v].0, p.schedules[v].pattern, v));
    let mut conflict = vec![Vec::new(); p.tau()];
    for &(a, b) in &p.overlap_pairs {
        conflict[a].push(b);
        conflict[b].push(a);
    }
    let mut workers: Vec<WorkerState> = Vec::new();
    for v in order {
        let fits = |w: &WorkerState| {
            if p.policy.max_shifts.is_some_and(|b| w.schedules.len() + 1 > b) {
                return false;
            }
            if p.policy.max_hours.is_some_and(|h| w.hours + p.spans[v].1 > h) {
                return false;
            }
            if w.schedules.iter().any(|x| conflict[v].contains(x)) {
                return false;
            }
            if p.blocks_per_worker > 0 {
                let mut with = w.schedules.clone();
                with.push(v);
                return choose_blocks(p, &with).is_some();
            }
            true
        };
        match workers.iter().position(fits) {
            Some(u) => {
                workers[u].schedules.push(v);
                workers[u].hours += p.spans[v].1;
            }
            None => {
                let fresh = WorkerState {
                    schedules: Vec::new(),
                    hours: 0,
                };
                if !fits(&fresh) {
                    return None;
                }
                workers.push(WorkerState {
                    schedules: vec![v],
                    hours: p.spans[v].1,
                });
            }
        }
    }
    let mut roster = Roster::default();
    for (u, w) in workers.iter().enumerate() {
        let mut s = w.schedules.clone();
        s.sort_unstable();
        roster.days_off.insert(u + 1, choose_blocks(p, &s)?);
        roster.assignment.insert(u + 1, s);
    }
    roster.workers_used = workers.len();
    Some(roster)
}

/// Re-checks a roster from raw schedule spans, independently of the model:
/// partition, shift cap, rest gap, hours cap and days off.
pub fn validate_roster(p: &AssignmentProblem, roster: &Roster) -> Vec<String> {
    let t = p.horizon.periods;
    let cyclic = p.policy.overlap == OverlapMode::Cyclic;
    let mut out = Vec::new();
    let mut seen = vec![0usize; p.tau()];
    for (u, list) in &roster.assignment {
        for &v in list {
            if v >= p.tau() {
                out.push(format!("worker {u}: unknown schedule {}", v + 1));
            } else {
                seen[v] += 1;
            }
        }
    }
    for (v, &c) in seen.iter().enumerate() {
        if c != 1 {
            out.push(format!("schedule {} assigned {c} times", v + 1));
        }
    }
    // TPs a span occupies, optionally extended by the rest gap
    let occupied = |(s, m): (usize, usize), extra: usize| -> Vec<usize> {
        (0..m + extra)
            .filter_map(|k| {
                let j = s + k;
                if j <= t {
                    Some(j)
                } else if cyclic {
                    Some((j - 1) % t + 1)
                } else {
                    None
                }
            })
            .collect()
    };
    let g = p.policy.rest_gap;
    for (u, list) in &roster.assignment {
        let list: Vec<usize> = list.iter().copied().filter(|&v| v < p.tau()).collect();
        if list.is_empty() {
            continue;
        }
        if let Some(b) = p.policy.max_shifts {
            if list.len() > b {
                out.push(format!("worker {u}: {} shifts exceed {b}", list.len()));
            }
        }
        if let Some(h) = p.policy.max_hours {
            let total: usize = list.iter().map(|&v| p.spans[v].1).sum();
            if total > h {
                out.push(format!("worker {u}: {total} TPs exceed {h}"));
            }
        }
        for (i, &a) in list.iter().enumerate() {
            for &b in &list[i + 1..] {
                let (sa, sb) = (p.spans[a], p.spans[b]);
                // each start must lie outside the other's span plus the gap
                let clash = occupied(sa, g).contains(&sb.0) || occupied(sb, g).contains(&sa.0);
                if clash {
                    out.push(format!("worker {u}: schedules {} and {} violate the rest gap", a + 1, b + 1));
                }
            }
        }
        if p.blocks_per_worker > 0 {
            let blocks = roster.days_off.get(u).cloned().unwrap_or_default();
            let mut distinct = blocks.clone();
            distinct.sort_unstable();
            distinct.dedup();
            if distinct.len() != p.blocks_per_worker || blocks.iter().any(|&k| k >= p.blocks.len()) {
                out.push(format!("worker {u}: day-off blocks {blocks:?} are not a valid choice"));
                continue;
            }
            for &k in &blocks {
                let off = occupied(p.blocks[k].span(&p.horizon), 0);
                for &v in &list {
                    if occupied(p.spans[v], 0).iter().any(|j| off.contains(j)) {
                        out.push(format!("worker {u}: schedule {} falls on day off {}", v + 1, p.blocks[k].first_day));
                    }
                }
            }
        }
    }
    let max_used = roster
        .assignment
        .iter()
        .filter(|(_, l)| !l.is_empty())
        .map(|(u, _)| *u)
        .max()
        .unwrap_or(0);
    if max_used != roster.workers_used {
        out.push(format!("workers_used is {} but the highest used worker is {max_used}", roster.workers_used));
    }
    out
}

#[derive(Debug, Clone)]
pub struct Stage2Options {
    /// Constraint budget checked against the size estimate.
    pub budget: usize,
    pub symmetry: bool,
    pub solve: SolveOptions,
}

impl Default for Stage2Options {
    fn default() -> Self {
        Self {
            budget: DEFAULT_BUDGET,
            symmetry: true,
            solve: SolveOptions::default(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Stage2Result {
    pub roster: Roster,
    pub status: SolveStatus,
    /// Lower bound on the worker count.
    pub bound: usize,
    pub size: ModelSize,
    pub w: usize,
    pub seconds: f64,
    pub nodes: u64,
}

/// Solves stage two exactly (or to the limits), starting from first fit
/// and stopping early when first fit already meets the lower bound.
pub fn solve_stage2(p: &AssignmentProblem, opts: &Stage2Options) -> Result<Stage2Result, Stage2Error> {
    let start = std::time::Instant::now();
    let tau = p.tau();
    let first_fit = greedy_first_fit(p).ok_or_else(|| {
        Stage2Error::Infeasible("some schedule breaks a per-worker rule on its own".into())
    })?;
    let floor = p.worker_floor();
    let mut w = first_fit.workers_used;
    if let Some(cap) = p.policy.max_workers {
        if cap < floor {
            return Err(Stage2Error::Infeasible(format!(
                "at most {cap} workers allowed but at least {floor} are needed"
            )));
        }
        w = w.min(cap);
    }
    let size = p.estimate(w);
    if size.constraints > opts.budget {
        return Err(Stage2Error::ModelTooLarge {
            variables: size.variables,
            constraints: size.constraints,
            budget: opts.budget,
        });
    }
    // local search gets a quarter of the time limit
    let ls_deadline = Some(start + opts.solve.time_limit.map_or(std::time::Duration::from_secs(60), |t| t / 4));
    let greedy = if first_fit.workers_used > floor {
        tabu::improve(p, &first_fit, floor, ls_deadline, opts.solve.seed)
    } else {
        first_fit
    };
    let w = w.min(greedy.workers_used);
    let size = p.estimate(w);
    let finish = |roster: Roster, status, bound, nodes| -> Result<Stage2Result, Stage2Error> {
        let v = validate_roster(p, &roster);
        if !v.is_empty() {
            return Err(Stage2Error::Invalid(v.join("; ")));
        }
        Ok(Stage2Result {
            roster,
            status,
            bound,
            size,
            w,
            seconds: start.elapsed().as_secs_f64(),
            nodes,
        })
    };
    if tau == 0 || (greedy.workers_used == floor && w == greedy.workers_used) {
        return finish(greedy, SolveStatus::Optimal, floor, 0);
    }
    let built = build_stage2(p, w, opts.symmetry)?;
    let mut solve = opts.solve.clone();
    solve.time_limit = solve.time_limit.map(|t| t.saturating_sub(start.elapsed()).max(std::time::Duration::from_secs(1)));
    solve.objective_floor = Some(int(floor as i64));
    if w == greedy.workers_used {
        solve.warm_start = Some(roster_to_point(&built, p, &greedy, opts.symmetry));
    }
    let res = ipcore::solve(&built.model, &solve)?;
    let Some(inc) = res.incumbent else {
        if res.status == SolveStatus::Infeasible {
            return Err(Stage2Error::Infeasible(format!("no assignment of {tau} schedules to {w} workers")));
        }
        return Err(Stage2Error::NoIncumbent);
    };
    let roster = point_to_roster(&built, p, &inc.values);
    let bound = num_traits::ToPrimitive::to_f64(&res.best_bound)
        .map_or(floor, |b| (b - 1e-9).ceil().max(0.0) as usize)
        .max(floor)
        .min(roster.workers_used);
    finish(roster, res.status, bound, res.stats.nodes)
}

/// Model point of a roster. With symmetry rows the workers are relabelled
/// by their first schedule so the point satisfies them.
fn roster_to_point(built: &Stage2Model, p: &AssignmentProblem, r: &Roster, symmetry: bool) -> Vec<i64> {
    let tau = p.tau();
    let mut order: Vec<(usize, &Vec<usize>)> = r.assignment.iter().map(|(&u, l)| (u, l)).collect();
    if symmetry {
        order.sort_by_key(|(_, l)| l.iter().min().copied().unwrap_or(usize::MAX));
    }
    let mut x = vec![0i64; built.model.num_vars()];
    let mut used = 0;
    for (new_u, (old_u, list)) in order.into_iter().enumerate() {
        if new_u >= built.w {
            break;
        }
        for &v in list {
            x[built.z[new_u][v]] = 1;
        }
        if let Some(blocks) = r.days_off.get(&old_u) {
            for &k in blocks {
                x[built.z[new_u][tau + k]] = 1;
            }
        }
        if !list.is_empty() {
            used = new_u + 1;
        }
    }
    // workers without schedules still need their day-off count
    if p.blocks_per_worker > 0 {
        for u in 0..built.w {
            let have: i64 = (0..p.blocks.len()).map(|k| x[built.z[u][tau + k]]).sum();
            if have == 0 {
                for k in 0..p.blocks_per_worker {
                    x[built.z[u][tau + k]] = 1;
                }
            }
        }
    }
    x[built.xi] = used as i64;
    x
}

fn point_to_roster(built: &Stage2Model, p: &AssignmentProblem, x: &[i64]) -> Roster {
    let tau = p.tau();
    let mut r = Roster::default();
    for u in 0..built.w {
        let list: Vec<usize> = (0..tau).filter(|&v| x[built.z[u][v]] == 1).collect();
        if list.is_empty() {
            continue;
        }
        let blocks: Vec<usize> = (0..p.blocks.len()).filter(|&k| x[built.z[u][tau + k]] == 1).collect();
        r.days_off.insert(u + 1, blocks);
        r.assignment.insert(u + 1, list);
        r.workers_used = u + 1;
    }
    r
}

/// File form of a roster. Pattern ids are 1-based; `day_off` is the first
/// day of the two-day block, `days_off` lists single days off.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RosterFile {
    pub workers: Vec<WorkerEntry>,
    pub workers_used: usize,
    pub violations: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WorkerEntry {
    pub index: usize,
    pub schedules: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub day_off: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub days_off: Option<Vec<usize>>,
}

impl RosterFile {
    pub fn from_roster(p: &AssignmentProblem, r: &Roster) -> Self {
        let workers = r
            .assignment
            .iter()
            .map(|(&u, list)| {
                let blocks = r.days_off.get(&u).cloned().unwrap_or_default();
                let days: Vec<usize> = blocks.iter().filter_map(|&k| p.blocks.get(k)).map(|b| b.first_day).collect();
                let (day_off, days_off) = match p.policy.days_off {
                    DaysOff::None => (None, None),
                    DaysOff::TwoConsecutive => (days.first().copied(), None),
                    DaysOff::TwoAny => (None, Some(days)),
                };
                WorkerEntry {
                    index: u,
                    schedules: list
                        .iter()
                        .map(|&v| [p.schedules[v].pattern + 1, p.schedules[v].start])
                        .collect(),
                    day_off,
                    days_off,
                }
            })
            .collect();
        Self {
            workers,
            workers_used: r.workers_used,
            violations: r.violations.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("rosters always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        let f: Self = serde_json::from_str(text)?;
        if f.workers.iter().any(|w| w.index == 0 || w.schedules.iter().any(|s| s[0] == 0 || s[1] == 0)) {
            return Err(serde::de::Error::custom("worker indices, pattern ids and starts are 1-based"));
        }
        Ok(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::patterns::ShiftPattern;

    fn pset(lens: &[usize]) -> PatternSet {
        PatternSet {
            family: "CUSTOM".into(),
            omega: 30,
            patterns: lens
                .iter()
                .map(|&m| ShiftPattern::from_values(&vec![1.0; m]).unwrap())
                .collect(),
            start_window: None,
        }
    }

    fn policy(b: usize, g: usize) -> Stage2Policy {
        Stage2Policy {
            max_shifts: Some(b),
            rest_gap: g,
            ..Stage2Policy::default()
        }
    }

    #[test]
    fn overlap_predicate() {
        let lin = OverlapMode::Linear;
        assert!(overlap((10, 18), (40, 18), 24, lin, 336));
        assert!(!overlap((10, 18), (52, 18), 24, lin, 336));
        assert!(overlap((330, 18), (1, 18), 0, OverlapMode::Cyclic, 336));
        assert!(!overlap((330, 18), (1, 18), 0, lin, 336));
    }

    #[test]
    fn two_disjoint_schedules_one_worker() {
        let h = Horizon::new(336, 30).unwrap();
        let ps = pset(&[10]);
        let s = [ShiftSchedule { pattern: 0, start: 1 }, ShiftSchedule { pattern: 0, start: 100 }];
        let p = AssignmentProblem::new(&h, &ps, &s, &policy(5, 0));
        let r = solve_stage2(&p, &Stage2Options::default()).unwrap();
        assert_eq!(r.roster.workers_used, 1);
    }

    #[test]
    fn overlapping_pair_needs_two() {
        let h = Horizon::new(336, 30).unwrap();
        let ps = pset(&[10]);
        let s = [ShiftSchedule { pattern: 0, start: 1 }, ShiftSchedule { pattern: 0, start: 5 }];
        let p = AssignmentProblem::new(&h, &ps, &s, &policy(5, 0));
        assert_eq!(p.overlap_pairs, vec![(0, 1)]);
        let r = solve_stage2(&p, &Stage2Options::default()).unwrap();
        assert_eq!(r.roster.workers_used, 2);
        let size = estimate_stage2_size(2, 2, &policy(5, 0), 1, 0, 0);
        assert_eq!(size, ModelSize { variables: 5, constraints: 8 });
        assert_eq!(estimate_stage2_size(0, 3, &policy(5, 0), 0, 0, 0), ModelSize { variables: 1, constraints: 0 });
    }

    #[test]
    fn identical_schedules_each_need_a_worker() {
        let h = Horizon::new(336, 30).unwrap();
        let ps = pset(&[16]);
        let s = vec![ShiftSchedule { pattern: 0, start: 20 }; 5];
        let p = AssignmentProblem::new(&h, &ps, &s, &policy(5, 0));
        let r = solve_stage2(&p, &Stage2Options::default()).unwrap();
        assert_eq!(r.roster.workers_used, 5);
    }

    #[test]
    fn shift_cap_floor_is_met() {
        // 220 schedules, one per slot, all compatible: 44 workers of 5
        let h = Horizon::new(2200, 30).unwrap();
        let ps = pset(&[2]);
        let s: Vec<ShiftSchedule> = (0..220).map(|i| ShiftSchedule { pattern: 0, start: 1 + 10 * i }).collect();
        let p = AssignmentProblem::new(&h, &ps, &s, &policy(5, 0));
        let r = solve_stage2(&p, &Stage2Options::default()).unwrap();
        assert_eq!(r.roster.workers_used, 44);
        assert_eq!(r.status, SolveStatus::Optimal);
    }

    #[test]
    fn exact_beats_greedy() {
        // greedy packs short shifts badly under an hours cap
        let h = Horizon::new(96, 30).unwrap();
        let ps = pset(&[4, 6]);
        let s = vec![
            ShiftSchedule { pattern: 0, start: 1 },
            ShiftSchedule { pattern: 1, start: 10 },
            ShiftSchedule { pattern: 0, start: 20 },
            ShiftSchedule { pattern: 1, start: 30 },
        ];
        let pol = Stage2Policy {
            max_shifts: None,
            max_hours: Some(10),
            ..Stage2Policy::default()
        };
        let p = AssignmentProblem::new(&h, &ps, &s, &pol);
        let g = greedy_first_fit(&p).unwrap();
        let r = solve_stage2(&p, &Stage2Options::default()).unwrap();
        assert_eq!(r.roster.workers_used, 2);
        assert!(g.workers_used >= 2);
        assert!(validate_roster(&p, &g).is_empty());
    }

    #[test]
    fn days_off_are_respected() {
        let h = Horizon::new(336, 30).unwrap();
        let ps = pset(&[16]);
        // one shift per day, same time
        let s: Vec<ShiftSchedule> = (0..7).map(|d| ShiftSchedule { pattern: 0, start: d * 48 + 16 }).collect();
        for (mode, kind) in [
            (OverlapMode::Cyclic, DaysOff::TwoConsecutive),
            (OverlapMode::Linear, DaysOff::TwoConsecutive),
            (OverlapMode::Cyclic, DaysOff::TwoAny),
        ] {
            let pol = Stage2Policy {
                max_shifts: Some(5),
                days_off: kind,
                overlap: mode,
                ..Stage2Policy::default()
            };
            let p = AssignmentProblem::new(&h, &ps, &s, &pol);
            let r = solve_stage2(&p, &Stage2Options::default()).unwrap();
            assert_eq!(r.roster.workers_used, 2, "{mode:?} {kind:?}");
            assert!(validate_roster(&p, &r.roster).is_empty());
        }
    }

    #[test]
    fn validator_catches_breaches() {
        let h = Horizon::new(336, 30).unwrap();
        let ps = pset(&[10]);
        let s = [ShiftSchedule { pattern: 0, start: 1 }, ShiftSchedule { pattern: 0, start: 5 }];
        let p = AssignmentProblem::new(&h, &ps, &s, &policy(1, 0));
        let bad = Roster {
            assignment: BTreeMap::from([(1, vec![0, 1])]),
            days_off: BTreeMap::new(),
            workers_used: 1,
            violations: vec![],
        };
        let v = validate_roster(&p, &bad);
        assert!(v.iter().any(|m| m.contains("rest gap")));
        assert!(v.iter().any(|m| m.contains("shifts exceed")));
        let missing = Roster {
            assignment: BTreeMap::from([(2, vec![0])]),
            days_off: BTreeMap::new(),
            workers_used: 1,
            violations: vec![],
        };
        let v = validate_roster(&p, &missing);
        assert!(v.iter().any(|m| m.contains("assigned 0 times")));
        assert!(v.iter().any(|m| m.contains("workers_used")));
    }

    #[test]
    fn size_budget_is_enforced() {
        let h = Horizon::new(336, 30).unwrap();
        let ps = pset(&[10]);
        let s = vec![ShiftSchedule { pattern: 0, start: 3 }; 6];
        let p = AssignmentProblem::new(&h, &ps, &s, &policy(5, 0));
        let opts = Stage2Options {
            budget: 10,
            ..Stage2Options::default()
        };
        assert!(matches!(solve_stage2(&p, &opts), Err(Stage2Error::ModelTooLarge { .. })));
    }

    #[test]
    fn roster_file_roundtrip() {
        let h = Horizon::new(336, 30).unwrap();
        let ps = pset(&[10]);
        let s = [ShiftSchedule { pattern: 0, start: 1 }, ShiftSchedule { pattern: 0, start: 5 }];
        let p = AssignmentProblem::new(&h, &ps, &s, &policy(5, 0));
        let r = solve_stage2(&p, &Stage2Options::default()).unwrap();
        let f = RosterFile::from_roster(&p, &r.roster);
        let back = RosterFile::from_json(&f.to_json()).unwrap();
        assert_eq!(back, f);
        assert_eq!(back.workers_used, 2);
    }
}

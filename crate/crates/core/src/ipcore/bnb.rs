//! LP-based branch and bound over [`IpModel`].

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::time::Instant;

use num_traits::{Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::lp::{Lp, LpOutcome};
use super::model::{IpModel, Rat, Sense};
use super::{
    Checkpoint, Incumbent, LpRelaxation, LpStatus, SolveError, SolveOptions, SolveResult,
    SolveStats, SolveStatus,
};

const INT_TOL: f64 = 1e-6;

/// The LP of a model plus the bookkeeping for lazy rows.
pub(crate) struct Relaxation<'a> {
    model: &'a IpModel,
    pub lp: Lp,
    /// Model row of each LP row.
    pub lp_rows: Vec<usize>,
    pending_lazy: Vec<usize>,
    root_lo: Vec<f64>,
    root_hi: Vec<f64>,
    pub lazy_added: usize,
    max_lazy: usize,
}

fn row_bounds(sense: Sense, rhs: f64) -> (f64, f64) {
    match sense {
        Sense::Le => (f64::NEG_INFINITY, rhs),
        Sense::Ge => (rhs, f64::INFINITY),
        Sense::Eq => (rhs, rhs),
    }
}

fn f(r: &Rat) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

impl<'a> Relaxation<'a> {
    /// Builds the LP; `Err` carries the index of an empty row that no point
    /// can satisfy.
    pub fn new(model: &'a IpModel, max_lazy: usize) -> Result<Self, usize> {
        let n = model.num_vars();
        let mut cols = vec![Vec::new(); n];
        let mut row_lo = Vec::new();
        let mut row_hi = Vec::new();
        let mut lp_rows = Vec::new();
        let mut pending_lazy = Vec::new();
        for (i, c) in model.constraints().iter().enumerate() {
            if c.coefs.is_empty() {
                if !c.satisfied_by(&vec![0; n]) {
                    return Err(i);
                }
                continue;
            }
            if c.lazy {
                pending_lazy.push(i);
                continue;
            }
            let k = lp_rows.len();
            for &(j, a) in &c.coefs {
                cols[j].push((k, f(&a)));
            }
            let (lo, hi) = row_bounds(c.sense, f(&c.rhs));
            row_lo.push(lo);
            row_hi.push(hi);
            lp_rows.push(i);
        }
        let mut cost = vec![0.0; n];
        for (j, c) in model.objective() {
            cost[*j] = f(c);
        }
        let root_lo: Vec<f64> = model.vars().iter().map(|v| v.lower as f64).collect();
        let root_hi: Vec<f64> = model.vars().iter().map(|v| v.upper as f64).collect();
        let lp = Lp::new(cols, cost, root_lo.clone(), root_hi.clone(), row_lo, row_hi, true);
        Ok(Self {
            model,
            lp,
            lp_rows,
            pending_lazy,
            root_lo,
            root_hi,
            lazy_added: 0,
            max_lazy,
        })
    }

    /// Adds the most violated pending lazy rows; returns how many.
    fn separate(&mut self) -> usize {
        if self.pending_lazy.is_empty() {
            return 0;
        }
        let x = self.lp.values();
        let cons = self.model.constraints();
        let mut viol: Vec<(f64, usize)> = self
            .pending_lazy
            .iter()
            .map(|&i| (cons[i].violation_f64(x), i))
            .filter(|(v, _)| *v > 1e-6)
            .collect();
        if viol.is_empty() {
            return 0;
        }
        viol.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
        viol.truncate(self.max_lazy);
        let mut chosen: Vec<usize> = viol.iter().map(|&(_, i)| i).collect();
        chosen.sort_unstable();
        for &i in &chosen {
            let c = &cons[i];
            let coefs: Vec<(usize, f64)> = c.coefs.iter().map(|(j, a)| (*j, f(a))).collect();
            let (lo, hi) = row_bounds(c.sense, f(&c.rhs));
            self.lp.add_row(&coefs, lo, hi);
            self.lp_rows.push(i);
        }
        self.pending_lazy.retain(|i| chosen.binary_search(i).is_err());
        self.lazy_added += chosen.len();
        chosen.len()
    }

    /// Solves the LP under the current bounds, adding violated lazy rows
    /// until none remain.
    pub fn solve(&mut self, cutoff: f64, deadline: Option<Instant>, iter_limit: u64) -> LpOutcome {
        loop {
            let out = self.lp.solve(cutoff, iter_limit, deadline);
            if out != LpOutcome::Optimal {
                return out;
            }
            if self.separate() == 0 {
                return out;
            }
        }
    }

    pub fn reset_bounds(&mut self, vars: impl Iterator<Item = usize>) {
        for j in vars {
            self.lp.set_bounds(j, self.root_lo[j], self.root_hi[j]);
        }
    }

    pub fn certificate(&self) -> Vec<(usize, f64)> {
        self.lp
            .ray()
            .iter()
            .enumerate()
            .filter(|(_, v)| v.abs() > 1e-9)
            .map(|(k, &v)| (self.lp_rows[k], v))
            .collect()
    }
}

pub(crate) fn lp_relax(model: &IpModel, opts: &SolveOptions) -> Result<LpRelaxation, SolveError> {
    model.validate().map_err(|e| SolveError::InvalidModel(e.to_string()))?;
    let deadline = opts.time_limit.map(|t| Instant::now() + t);
    let mut rel = match Relaxation::new(model, opts.max_lazy_per_round) {
        Ok(r) => r,
        Err(_) => {
            return Ok(LpRelaxation {
                status: LpStatus::Infeasible,
                value: f64::INFINITY,
                bound: f64::INFINITY,
                x: Vec::new(),
            })
        }
    };
    let out = rel.solve(f64::INFINITY, deadline, opts.lp_iteration_limit);
    Ok(match out {
        LpOutcome::Optimal => LpRelaxation {
            status: LpStatus::Optimal,
            value: rel.lp.objective(),
            bound: rel.lp.lagrangian_bound(),
            x: rel.lp.values().to_vec(),
        },
        LpOutcome::Infeasible => LpRelaxation {
            status: LpStatus::Infeasible,
            value: f64::INFINITY,
            bound: f64::INFINITY,
            x: Vec::new(),
        },
        _ => LpRelaxation {
            status: LpStatus::LimitReached,
            value: f64::NAN,
            bound: rel.lp.lagrangian_bound(),
            x: rel.lp.values().to_vec(),
        },
    })
}

#[derive(Debug, Clone)]
struct Node {
    id: u64,
    bound: f64,
    depth: u32,
    changes: Vec<(usize, f64, f64)>,
    /// Variable, direction (up), distance moved and parent LP value.
    branch: Option<(usize, bool, f64, f64)>,
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Node {}

impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Node {
    /// Max-heap order: lowest bound first, then deepest, then lowest id.
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .bound
            .total_cmp(&self.bound)
            .then(self.depth.cmp(&other.depth))
            .then(other.id.cmp(&self.id))
    }
}

struct Locks {
    down: Vec<u32>,
    up: Vec<u32>,
}

fn locks(model: &IpModel) -> Locks {
    let n = model.num_vars();
    let mut down = vec![0; n];
    let mut up = vec![0; n];
    for c in model.constraints() {
        for (j, a) in &c.coefs {
            let pos = *a > Rat::zero();
            let (dl, ul) = match c.sense {
                Sense::Eq => (true, true),
                Sense::Ge => (pos, !pos),
                Sense::Le => (!pos, pos),
            };
            down[*j] += u32::from(dl);
            up[*j] += u32::from(ul);
        }
    }
    Locks { down, up }
}

struct Search<'a> {
    model: &'a IpModel,
    opts: &'a SolveOptions,
    rel: Relaxation<'a>,
    start: Instant,
    deadline: Option<Instant>,
    incumbent: Option<Incumbent>,
    inc_value: f64,
    integral_obj: bool,
    locks: Locks,
    /// Variables whose bounds differ from the root in the LP right now.
    applied: Vec<usize>,
    checkpoints: Vec<Checkpoint>,
    global_bound: f64,
    nodes: u64,
    rng: ChaCha8Rng,
    var_rows: Vec<Vec<usize>>,
    /// Per variable: summed unit gains and counts, down then up.
    pseudo: Vec<[(f64, u32); 2]>,
    top_priority: Vec<i32>,
}

impl<'a> Search<'a> {
    fn gap_cutoff(&self) -> f64 {
        if self.incumbent.is_none() {
            return f64::INFINITY;
        }
        let inc = self.inc_value;
        let mut c = inc - self.opts.abs_gap.max(self.opts.rel_gap * inc.abs());
        if self.integral_obj {
            c = c.min(inc - 1.0 + 1e-6);
        }
        c
    }

    fn round_bound(&self, b: f64) -> f64 {
        if self.integral_obj {
            (b - 1e-6).ceil()
        } else {
            b
        }
    }

    fn elapsed(&self) -> f64 {
        self.start.elapsed().as_secs_f64()
    }

    fn checkpoint(&mut self) {
        let bound = self.reported_bound();
        let inc = self.incumbent.as_ref().map(|i| i.objective);
        if let Some(last) = self.checkpoints.last() {
            if last.incumbent == inc && last.bound == bound {
                return;
            }
        }
        self.checkpoints.push(Checkpoint {
            time_s: self.elapsed(),
            nodes: self.nodes,
            incumbent: inc,
            bound,
        });
    }

    fn reported_bound(&self) -> Rat {
        let mut b = self.global_bound;
        if let Some(fl) = &self.opts.objective_floor {
            b = b.max(f(fl));
        }
        let mut r = to_rat_floor(b, self.integral_obj);
        if let Some(fl) = &self.opts.objective_floor {
            if *fl > r {
                r = *fl;
            }
        }
        if let Some(inc) = &self.incumbent {
            if r > inc.objective {
                r = inc.objective;
            }
        }
        r
    }

    fn try_incumbent(&mut self, x: Vec<i64>) -> bool {
        if !self.model.is_feasible(&x) {
            return false;
        }
        let mut x = x;
        self.one_opt(&mut x);
        let obj = self.model.evaluate(&x);
        if self.incumbent.as_ref().is_some_and(|i| i.objective <= obj) {
            return false;
        }
        log::debug!("incumbent {} at node {}", obj, self.nodes);
        self.inc_value = f(&obj);
        self.incumbent = Some(Incumbent {
            values: x,
            objective: obj,
        });
        self.checkpoint();
        true
    }

    /// Moves single variables towards cheaper values while the point stays
    /// feasible.
    fn one_opt(&self, x: &mut [i64]) {
        let cons = self.model.constraints();
        let mut act: Vec<Rat> = cons.iter().map(|c| c.activity(x)).collect();
        let mut order: Vec<(usize, Rat)> = self.model.objective().to_vec();
        order.sort_by(|a, b| b.1.abs().cmp(&a.1.abs()).then(a.0.cmp(&b.0)));
        for (j, c) in order {
            let step: i64 = if c > Rat::zero() { -1 } else { 1 };
            let v = &self.model.vars()[j];
            loop {
                let nx = x[j] + step;
                if nx < v.lower || nx > v.upper {
                    break;
                }
                let ok = self.var_rows[j].iter().all(|&i| {
                    let a = cons[i]
                        .coefs
                        .iter()
                        .find(|(k, _)| *k == j)
                        .map(|(_, a)| *a)
                        .unwrap_or_else(Rat::zero);
                    let na = act[i] + a * Rat::from(step);
                    match cons[i].sense {
                        Sense::Le => na <= cons[i].rhs,
                        Sense::Ge => na >= cons[i].rhs,
                        Sense::Eq => na == cons[i].rhs,
                    }
                });
                if !ok {
                    break;
                }
                for &i in &self.var_rows[j] {
                    let a = cons[i]
                        .coefs
                        .iter()
                        .find(|(k, _)| *k == j)
                        .map(|(_, a)| *a)
                        .unwrap_or_else(Rat::zero);
                    act[i] += a * Rat::from(step);
                }
                x[j] = nx;
            }
        }
    }

    fn record_gain(&mut self, branch: (usize, bool, f64, f64), value: f64) {
        let (j, up, dist, parent) = branch;
        if dist <= 0.0 || !value.is_finite() || !parent.is_finite() {
            return;
        }
        let e = &mut self.pseudo[j][usize::from(up)];
        e.0 += (value - parent).max(0.0) / dist;
        e.1 += 1;
    }

    /// Branching variable: among fractional variables of the highest
    /// priority present, the best pseudocost product score; variables never
    /// branched on use the average unit gain.
    fn fractional(&self, x: &[f64]) -> Option<usize> {
        let vars = self.model.vars();
        let mut avg = [(0.0, 0u32); 2];
        for p in &self.pseudo {
            for d in 0..2 {
                if p[d].1 > 0 {
                    avg[d].0 += p[d].0 / f64::from(p[d].1);
                    avg[d].1 += 1;
                }
            }
        }
        let avg = avg.map(|(s, c)| if c > 0 { s / f64::from(c) } else { 1.0 });
        for &pr in &self.top_priority {
            let mut best: Option<(usize, f64)> = None;
            for (j, &v) in x.iter().enumerate() {
                if vars[j].priority != pr {
                    continue;
                }
                let fr = v - v.floor();
                if fr.min(1.0 - fr) <= INT_TOL {
                    continue;
                }
                let unit = |d: usize| {
                    let (s, c) = self.pseudo[j][d];
                    if c > 0 { s / f64::from(c) } else { avg[d] }
                };
                let score = (unit(0) * fr).max(1e-6) * (unit(1) * (1.0 - fr)).max(1e-6);
                if best.is_none_or(|(_, b)| score > b * (1.0 + 1e-9)) {
                    best = Some((j, score));
                }
            }
            if let Some((j, _)) = best {
                return Some(j);
            }
        }
        None
    }

    fn simple_rounding(&mut self, x: &[f64]) {
        let mut out = Vec::with_capacity(x.len());
        for (j, &v) in x.iter().enumerate() {
            let fr = v - v.floor();
            if fr.min(1.0 - fr) <= INT_TOL {
                out.push(v.round() as i64);
            } else if self.locks.down[j] == 0 {
                out.push(v.floor() as i64);
            } else if self.locks.up[j] == 0 {
                out.push(v.ceil() as i64);
            } else {
                return;
            }
        }
        self.try_incumbent(out);
    }

    fn randomized_rounding(&mut self, x: &[f64], tries: usize) {
        for _ in 0..tries {
            let cand: Vec<i64> = x
                .iter()
                .map(|&v| {
                    let fl = v.floor();
                    let fr = v - fl;
                    if fr <= INT_TOL {
                        fl as i64
                    } else if fr >= 1.0 - INT_TOL {
                        fl as i64 + 1
                    } else if self.rng.gen::<f64>() < fr {
                        fl as i64 + 1
                    } else {
                        fl as i64
                    }
                })
                .collect();
            self.try_incumbent(cand);
        }
    }

    fn apply(&mut self, changes: &[(usize, f64, f64)]) {
        let old = std::mem::take(&mut self.applied);
        self.rel.reset_bounds(old.into_iter());
        for &(j, lo, hi) in changes {
            self.rel.lp.set_bounds(j, lo, hi);
            self.applied.push(j);
        }
    }

    fn out_of_time(&self) -> bool {
        self.deadline.is_some_and(|d| Instant::now() >= d)
    }

    /// Fractional diving from the current LP point. Bounds are restored
    /// afterwards.
    fn dive(&mut self, base: &[(usize, f64, f64)]) {
        let mut changes = base.to_vec();
        let n = self.model.num_vars();
        for _ in 0..(2 * n).min(2000) {
            if self.out_of_time() {
                break;
            }
            let x = self.rel.lp.values().to_vec();
            // least fractional variable, rounded to its nearest side
            let mut pick: Option<(usize, f64)> = None;
            for (j, &v) in x.iter().enumerate() {
                let fr = v - v.floor();
                let dist = fr.min(1.0 - fr);
                if dist > INT_TOL && pick.is_none_or(|(_, d)| dist < d - 1e-12) {
                    pick = Some((j, dist));
                }
            }
            let Some((j, _)) = pick else {
                let cand: Vec<i64> = x.iter().map(|v| v.round() as i64).collect();
                self.try_incumbent(cand);
                break;
            };
            let v = x[j];
            let up_first = v - v.floor() >= 0.5;
            let (lo, hi) = self.rel.lp.bounds(j);
            let mut ok = false;
            for up in [up_first, !up_first] {
                let ch = if up { (j, v.ceil(), hi) } else { (j, lo, v.floor()) };
                self.rel.lp.set_bounds(j, ch.1, ch.2);
                let out = self.rel.solve(self.gap_cutoff(), self.deadline, self.opts.lp_iteration_limit);
                if out == LpOutcome::Optimal {
                    changes.push(ch);
                    self.applied.push(j);
                    ok = true;
                    break;
                }
                self.rel.lp.set_bounds(j, lo, hi);
            }
            if !ok {
                break;
            }
        }
        self.apply(base);
    }
}

fn to_rat_floor(b: f64, integral: bool) -> Rat {
    if b == f64::INFINITY {
        return Rat::from_integer(i64::MAX / 4);
    }
    if b == f64::NEG_INFINITY || b.is_nan() {
        return Rat::from_integer(i64::MIN / 4);
    }
    if integral {
        Rat::from_integer(b.floor() as i64)
    } else {
        Rat::new((b * 1e6).floor() as i64, 1_000_000)
    }
}

pub(crate) fn branch_and_bound(
    model: &IpModel,
    opts: &SolveOptions,
) -> Result<SolveResult, SolveError> {

    model.validate().map_err(|e| SolveError::InvalidModel(e.to_string()))?;
    let start = Instant::now();
    let deadline = opts.time_limit.map(|t| start + t);
    let n = model.num_vars();

    let finish = |status, incumbent: Option<Incumbent>, bound: Rat, stats: SolveStats, cert| {
        Ok(SolveResult {
            status,
            incumbent,
            best_bound: bound,
            stats,
            infeasibility: cert,
        })
    };

    let rel = match Relaxation::new(model, opts.max_lazy_per_round) {
        Ok(r) => r,
        Err(row) => {
            return finish(
                SolveStatus::Infeasible,
                None,
                Rat::zero(),
                SolveStats::default(),
                Some(vec![(row, 1.0)]),
            )
        }
    };
    let mut var_rows = vec![Vec::new(); n];
    for (i, c) in model.constraints().iter().enumerate() {
        for (j, _) in &c.coefs {
            var_rows[*j].push(i);
        }
    }
    let mut s = Search {
        model,
        opts,
        rel,
        start,
        deadline,
        incumbent: None,
        inc_value: f64::INFINITY,
        integral_obj: model.objective_is_integral(),
        locks: locks(model),
        applied: Vec::new(),
        checkpoints: Vec::new(),
        global_bound: f64::NEG_INFINITY,
        nodes: 0,
        rng: ChaCha8Rng::seed_from_u64(opts.seed),
        var_rows,
        pseudo: vec![[(0.0, 0); 2]; n],
        top_priority: {
            let mut p: Vec<i32> = model.vars().iter().map(|v| v.priority).collect();
            p.sort_unstable_by(|a, b| b.cmp(a));
            p.dedup();
            p
        },
    };
    if let Some(ws) = &opts.warm_start {
        if ws.len() == n {
            s.try_incumbent(ws.clone());
        }
    }
    let floor_reached = |s: &Search| -> bool {
        match (&s.incumbent, &s.opts.objective_floor) {
            (Some(inc), Some(fl)) => f(&inc.objective) <= f(fl) + s.opts.abs_gap.max(1e-9),
            _ => false,
        }
    };

    let mut heap = BinaryHeap::new();
    heap.push(Node {
        id: 0,
        bound: f64::NEG_INFINITY,
        depth: 0,
        changes: Vec::new(),
        branch: None,
    });
    let mut next_id = 1u64;
    let mut incomplete = false;
    let mut limit_hit = false;
    let mut certificate = None;

    while let Some(node) = heap.pop() {
        if floor_reached(&s) {
            heap.clear();
            break;
        }
        if node.bound >= s.gap_cutoff() {
            continue;
        }
        if s.out_of_time() || opts.node_limit.is_some_and(|l| s.nodes >= l) {
            heap.push(node);
            limit_hit = true;
            break;
        }
        if node.bound > s.global_bound {
            s.global_bound = node.bound;
            s.checkpoint();
        }
        s.nodes += 1;
        s.apply(&node.changes);
        let out = s.rel.solve(s.gap_cutoff(), deadline, opts.lp_iteration_limit);
        match out {
            LpOutcome::Infeasible => {
                if node.id == 0 {
                    certificate = Some(s.rel.certificate());
                }
                continue;
            }
            LpOutcome::Cutoff => continue,
            LpOutcome::TimeLimit => {
                heap.push(node);
                limit_hit = true;
                break;
            }
            LpOutcome::IterLimit => {
                log::warn!("node {} dropped: LP iteration limit", node.id);
                incomplete = true;
                continue;
            }
            LpOutcome::Optimal => {}
        }
        if let Some(b) = node.branch {
            s.record_gain(b, s.rel.lp.objective());
        }
        let lb = s.round_bound(s.rel.lp.lagrangian_bound().max(node.bound));
        if node.id == 0 {
            s.global_bound = lb;
            s.checkpoint();
        }
        if lb >= s.gap_cutoff() {
            continue;
        }
        let x = s.rel.lp.values().to_vec();
        let Some(j) = s.fractional(&x) else {
            let cand: Vec<i64> = x.iter().map(|v| v.round() as i64).collect();
            if !s.try_incumbent(cand.clone()) && !model.is_feasible(&cand) {
                log::warn!("node {}: integral LP point fails the exact check", node.id);
                incomplete = true;
            }
            continue;
        };
        if opts.heuristics {
            s.simple_rounding(&x);
            if node.id == 0 {
                s.randomized_rounding(&x, 4);
            }
            if node.id == 0 || s.nodes % 64 == 0 || (s.incumbent.is_none() && s.nodes % 8 == 0) {
                s.dive(&node.changes);
                if s.incumbent.is_some() && lb >= s.gap_cutoff() {
                    continue;
                }
            }
        }
        let v = x[j];
        let (lo, hi) = s.rel.lp.bounds(j);
        let parent_value = s.rel.lp.objective();
        for up in [true, false] {
            let mut changes = node.changes.clone();
            let ch = if up { (j, v.ceil(), hi) } else { (j, lo, v.floor()) };
            changes.retain(|c| c.0 != j);
            changes.push(ch);
            let dist = if up { v.ceil() - v } else { v - v.floor() };
            heap.push(Node {
                id: next_id,
                bound: lb,
                depth: node.depth + 1,
                changes,
                branch: Some((j, up, dist, parent_value)),
            });
            next_id += 1;
        }
    }

    let stats_of = |s: &Search| SolveStats {
        nodes: s.nodes,
        lp_iterations: s.rel.lp.iterations,
        wall_time: s.start.elapsed(),
        lazy_rows_added: s.rel.lazy_added,
        lp_rows: s.rel.lp.num_rows(),
        checkpoints: s.checkpoints.clone(),
    };

    let open_min = heap.iter().map(|n| n.bound).fold(f64::INFINITY, f64::min);
    if limit_hit {
        s.global_bound = s.global_bound.max(open_min.min(s.inc_value));
        s.checkpoint();
        let bound = s.reported_bound();
        let st = stats_of(&s);
        return finish(SolveStatus::LimitReached, s.incumbent, bound, st, None);
    }
    match s.incumbent.clone() {
        Some(inc) => {
            let status = if incomplete && !floor_reached(&s) {
                SolveStatus::Feasible
            } else {
                SolveStatus::Optimal
            };
            if status == SolveStatus::Optimal {
                s.global_bound = s.inc_value;
            }
            s.checkpoint();
            let mut bound = s.reported_bound();
            if status == SolveStatus::Optimal {
                bound = inc.objective;
                if !s.integral_obj {
                    // within the gap tolerance of the incumbent
                    bound = s.reported_bound().max(to_rat_floor(
                        s.inc_value - opts.abs_gap.max(opts.rel_gap * s.inc_value.abs()),
                        false,
                    ));
                    if bound > inc.objective {
                        bound = inc.objective;
                    }
                }
            }
            let st = stats_of(&s);
            finish(status, Some(inc), bound, st, None)
        }
        None => {
            let status = if incomplete {
                SolveStatus::LimitReached
            } else {
                SolveStatus::Infeasible
            };
            s.checkpoint();
            let bound = s.reported_bound();
            let st = stats_of(&s);
            finish(status, None, bound, st, certificate)
        }
    }
}

//! Exhaustive oracles for both stages, written against the raw definitions
//! (footprints, windows, rest distances) rather than the library's models.

use std::collections::BTreeMap;

use shiftplan::horizon::Horizon;
use shiftplan::instance::{DaysOff, Instance, OverlapMode, Stage2Policy};
use shiftplan::patterns::{PatternSet, ShiftSchedule};
use shiftplan::stage2::Roster;

/// Every start assignment allowed by the windows and precedence pairs.
pub fn start_combinations(inst: &Instance) -> Vec<BTreeMap<u32, usize>> {
    let mut out = Vec::new();
    let mut cur = BTreeMap::new();
    fn rec(inst: &Instance, i: usize, cur: &mut BTreeMap<u32, usize>, out: &mut Vec<BTreeMap<u32, usize>>) {
        if i == inst.tasks.len() {
            let ok = inst.precedence.iter().all(|&[a, b]| {
                let da = inst.tasks.iter().find(|t| t.id == a).unwrap().duration;
                cur[&a] + da - 1 <= cur[&b]
            });
            if ok {
                out.push(cur.clone());
            }
            return;
        }
        let t = &inst.tasks[i];
        for s in t.window[0]..=t.window[1] {
            cur.insert(t.id, s);
            rec(inst, i + 1, cur, out);
        }
        cur.remove(&t.id);
    }
    rec(inst, 0, &mut cur, &mut out);
    out
}

fn tp(h: &Horizon, j: usize) -> Option<usize> {
    // 1-based position j, possibly past T
    if j <= h.periods {
        Some(j - 1)
    } else if h.cyclic {
        Some((j - 1) % h.periods)
    } else {
        None
    }
}

/// Demand in workers per TP (0-based) for the given starts.
pub fn demand_for(inst: &Instance, starts: &BTreeMap<u32, usize>) -> Vec<i64> {
    let h = &inst.horizon;
    let mut d: Vec<i64> = inst
        .fixed_demand
        .as_ref()
        .map_or(vec![0; h.periods], |f| f.iter().map(|&v| i64::from(v)).collect());
    for t in &inst.tasks {
        for (i, &r) in t.resource.iter().enumerate() {
            if let Some(j) = tp(h, starts[&t.id] + i) {
                d[j] += i64::from(r);
            }
        }
    }
    d
}

/// Supply in half units per TP of one schedule.
pub fn footprint(h: &Horizon, patterns: &PatternSet, s: ShiftSchedule) -> Vec<(usize, i64)> {
    patterns.patterns[s.pattern]
        .values()
        .iter()
        .enumerate()
        .filter_map(|(i, &v)| {
            let halves = (v * 2.0).round() as i64;
            (halves > 0).then_some(())?;
            tp(h, s.start + i).map(|j| (j, halves))
        })
        .collect()
}

pub struct Cover {
    pub options: Vec<(ShiftSchedule, i64, Vec<(usize, i64)>)>,
    by_tp: Vec<Vec<usize>>,
}

impl Cover {
    /// Candidate schedules with their per-schedule weights.
    pub fn new(inst: &Instance, patterns: &PatternSet, weight: impl Fn(ShiftSchedule) -> i64) -> Self {
        let h = &inst.horizon;
        let mut options = Vec::new();
        for p in 0..patterns.patterns.len() {
            for start in 1..=h.periods {
                let s = ShiftSchedule { pattern: p, start };
                options.push((s, weight(s), footprint(h, patterns, s)));
            }
        }
        let mut by_tp = vec![Vec::new(); h.periods];
        for (i, o) in options.iter().enumerate() {
            for &(j, _) in &o.2 {
                by_tp[j].push(i);
            }
        }
        Self { options, by_tp }
    }

    /// Least total weight of a multiset covering `demand` (workers per TP)
    /// that `accept` approves, or `None`. At most `max_depth` schedules.
    pub fn min_weight(
        &self,
        demand: &[i64],
        max_depth: usize,
        accept: &mut dyn FnMut(&[ShiftSchedule]) -> bool,
    ) -> Option<i64> {
        let mut deficit: Vec<i64> = demand.iter().map(|&d| 2 * d).collect();
        let min_w = self.options.iter().map(|o| o.1).min().unwrap_or(1).max(0);
        let mut best = i64::MAX;
        let mut chosen = Vec::new();
        self.dfs(&mut deficit, 0, None, min_w, max_depth, &mut chosen, &mut best, accept);
        (best != i64::MAX).then_some(best)
    }

    #[allow(clippy::too_many_arguments)]
    fn dfs(
        &self,
        deficit: &mut Vec<i64>,
        cost: i64,
        last: Option<(usize, usize)>,
        min_w: i64,
        depth_left: usize,
        chosen: &mut Vec<ShiftSchedule>,
        best: &mut i64,
        accept: &mut dyn FnMut(&[ShiftSchedule]) -> bool,
    ) {
        let Some(j) = deficit.iter().position(|&d| d > 0) else {
            if cost < *best && accept(chosen) {
                *best = cost;
            }
            return;
        };
        if depth_left == 0 {
            return;
        }
        let need = (deficit.iter().max().copied().unwrap_or(0) + 1) / 2;
        if cost + need * min_w >= *best && min_w > 0 {
            return;
        }
        for &i in &self.by_tp[j] {
            // repeated picks for the same TP in index order only
            if let Some((lj, li)) = last {
                if lj == j && i < li {
                    continue;
                }
            }
            let (s, w, fp) = &self.options[i];
            if cost + w >= *best {
                continue;
            }
            for &(k, a) in fp {
                deficit[k] -= a;
            }
            chosen.push(*s);
            self.dfs(deficit, cost + w, Some((j, i)), min_w, depth_left - 1, chosen, best, accept);
            chosen.pop();
            for &(k, a) in fp {
                deficit[k] += a;
            }
        }
    }
}

/// Stage-one optimum by start enumeration and exhaustive covering.
pub fn stage1_min_cost(inst: &Instance, patterns: &PatternSet, weight: impl Fn(ShiftSchedule) -> i64, max_depth: usize) -> Option<i64> {
    let cover = Cover::new(inst, patterns, weight);
    start_combinations(inst)
        .iter()
        .filter_map(|st| cover.min_weight(&demand_for(inst, st), max_depth, &mut |_| true))
        .min()
}

pub fn min_peak(inst: &Instance) -> Option<i64> {
    start_combinations(inst)
        .iter()
        .map(|st| demand_for(inst, st).into_iter().max().unwrap_or(0))
        .min()
}

/// `(start, length)` of a schedule.
pub fn span(patterns: &PatternSet, s: ShiftSchedule) -> (usize, usize) {
    (s.start, patterns.patterns[s.pattern].len())
}

/// Two schedules may share a worker: the forward distance from each start to
/// the other covers its own length plus the rest gap.
pub fn compatible(a: (usize, usize), b: (usize, usize), g: usize, mode: OverlapMode, t: usize) -> bool {
    match mode {
        OverlapMode::Linear => {
            let (e, l) = if a.0 <= b.0 { (a, b) } else { (b, a) };
            l.0 - e.0 >= e.1 + g
        }
        OverlapMode::Cyclic => {
            let d = (b.0 + t - a.0) % t;
            d != 0 && d >= a.1 + g && t - d >= b.1 + g
        }
    }
}

/// Day-off blocks as sets of TPs (1-based).
fn day_blocks(h: &Horizon, policy: &Stage2Policy) -> Vec<Vec<usize>> {
    let ppd = h.periods_per_day();
    let days = h.periods / ppd;
    let day = |d: usize| ((d - 1) * ppd + 1..=d * ppd).collect::<Vec<_>>();
    match policy.days_off {
        DaysOff::None => Vec::new(),
        DaysOff::TwoAny => (1..=days).map(day).collect(),
        DaysOff::TwoConsecutive => {
            let last = if policy.overlap == OverlapMode::Cyclic { days } else { days.saturating_sub(1) };
            (1..=last)
                .map(|d| {
                    let mut b = day(d);
                    b.extend(day(if d == days { 1 } else { d + 1 }));
                    b
                })
                .collect()
        }
    }
}

fn covered(span: (usize, usize), mode: OverlapMode, t: usize) -> Vec<usize> {
    (0..span.1)
        .filter_map(|i| {
            let j = span.0 + i;
            if j <= t {
                Some(j)
            } else if mode == OverlapMode::Cyclic {
                Some((j - 1) % t + 1)
            } else {
                None
            }
        })
        .collect()
}

/// Whether one worker may work exactly these schedules.
pub fn worker_ok(h: &Horizon, policy: &Stage2Policy, spans: &[(usize, usize)]) -> bool {
    let t = h.periods;
    if policy.max_shifts.is_some_and(|b| spans.len() > b) {
        return false;
    }
    if policy.max_hours.is_some_and(|cap| spans.iter().map(|s| s.1).sum::<usize>() > cap) {
        return false;
    }
    for i in 0..spans.len() {
        for k in i + 1..spans.len() {
            if !compatible(spans[i], spans[k], policy.rest_gap, policy.overlap, t) {
                return false;
            }
        }
    }
    let need = match policy.days_off {
        DaysOff::None => return true,
        DaysOff::TwoConsecutive => 1,
        DaysOff::TwoAny => 2,
    };
    let busy: Vec<usize> = spans.iter().flat_map(|&s| covered(s, policy.overlap, t)).collect();
    let free = day_blocks(h, policy)
        .iter()
        .filter(|b| b.iter().all(|j| !busy.contains(j)))
        .count();
    free >= need
}

/// Fewest workers for the schedules, by enumerating set partitions.
pub fn min_workers(h: &Horizon, patterns: &PatternSet, policy: &Stage2Policy, list: &[ShiftSchedule]) -> Option<usize> {
    let spans: Vec<(usize, usize)> = list.iter().map(|&s| span(patterns, s)).collect();
    let mut groups: Vec<Vec<(usize, usize)>> = Vec::new();
    let mut best = usize::MAX;
    fn rec(
        h: &Horizon,
        policy: &Stage2Policy,
        spans: &[(usize, usize)],
        i: usize,
        groups: &mut Vec<Vec<(usize, usize)>>,
        best: &mut usize,
    ) {
        if groups.len() >= *best {
            return;
        }
        if i == spans.len() {
            *best = groups.len();
            return;
        }
        for g in 0..groups.len() {
            groups[g].push(spans[i]);
            if worker_ok(h, policy, &groups[g]) {
                rec(h, policy, spans, i + 1, groups, best);
            }
            groups[g].pop();
        }
        groups.push(vec![spans[i]]);
        if worker_ok(h, policy, &groups[groups.len() - 1]) {
            rec(h, policy, spans, i + 1, groups, best);
        }
        groups.pop();
    }
    rec(h, policy, &spans, 0, &mut groups, &mut best);
    (best != usize::MAX).then_some(best)
}

/// Independent roster re-check: partition, per-worker rules and the worker
/// count. Returns the violations found.
pub fn check_roster(
    h: &Horizon,
    patterns: &PatternSet,
    policy: &Stage2Policy,
    list: &[ShiftSchedule],
    roster: &Roster,
) -> Vec<String> {
    let mut out = Vec::new();
    let mut times = vec![0usize; list.len()];
    for (u, vs) in &roster.assignment {
        for &v in vs {
            match times.get_mut(v) {
                Some(c) => *c += 1,
                None => out.push(format!("worker {u} holds unknown schedule {v}")),
            }
        }
        let spans: Vec<(usize, usize)> = vs.iter().filter(|&&v| v < list.len()).map(|&v| span(patterns, list[v])).collect();
        if !worker_ok(h, policy, &spans) {
            out.push(format!("worker {u} breaks a per-worker rule"));
        }
    }
    if let Some(v) = times.iter().position(|&c| c != 1) {
        out.push(format!("schedule {v} is assigned {} times", times[v]));
    }
    let used = roster.assignment.iter().filter(|(_, v)| !v.is_empty()).count();
    if used != roster.workers_used {
        out.push(format!("{used} workers hold schedules but {} are reported", roster.workers_used));
    }
    if let Some(cap) = policy.max_workers {
        if used > cap {
            out.push(format!("{used} workers exceed the cap {cap}"));
        }
    }
    out
}

/// Joint optimum of schedule cost over starts, covers and assignability.
pub fn joint_min_cost(inst: &Instance, patterns: &PatternSet, max_depth: usize) -> Option<i64> {
    let cover = Cover::new(inst, patterns, |s| {
        inst.costs.cost(s.pattern, patterns.patterns[s.pattern].len(), s.start)
    });
    let h = inst.horizon;
    let policy = inst.policy.clone();
    start_combinations(inst)
        .iter()
        .filter_map(|st| {
            cover.min_weight(&demand_for(inst, st), max_depth, &mut |chosen| {
                match min_workers(&h, patterns, &policy, chosen) {
                    Some(w) => policy.max_workers.map_or(true, |cap| w <= cap),
                    None => false,
                }
            })
        })
        .min()
}

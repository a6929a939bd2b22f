//! Tabu search on a fixed number of workers: relocate schedules between
//! workers to drive the rule violations to zero, then drop a worker and
//! repeat.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{choose_blocks, intersects, AssignmentProblem, Roster};

struct State<'a> {
    p: &'a AssignmentProblem,
    adj: &'a [Vec<usize>],
    sched_blocks: &'a [Vec<usize>],
    hours_unit: usize,
    k: usize,
    of: Vec<usize>,
    /// `conf[v][u]`: conflicting neighbours of `v` on worker `u`.
    conf: Vec<Vec<u32>>,
    count: Vec<usize>,
    hours: Vec<usize>,
    /// `hits[u][block]`: schedules of `u` that fall on the block.
    hits: Vec<Vec<u32>>,
    free: Vec<usize>,
}

impl<'a> State<'a> {
    fn new(
        p: &'a AssignmentProblem,
        adj: &'a [Vec<usize>],
        sched_blocks: &'a [Vec<usize>],
        of: Vec<usize>,
        k: usize,
    ) -> Self {
        let tau = p.tau();
        let nb = p.blocks.len();
        let mut s = State {
            p,
            adj,
            sched_blocks,
            hours_unit: p.spans.iter().map(|x| x.1).min().unwrap_or(1).max(1),
            k,
            of,
            conf: vec![vec![0; k]; tau],
            count: vec![0; k],
            hours: vec![0; k],
            hits: vec![vec![0; nb]; k],
            free: vec![nb; k],
        };
        for v in 0..tau {
            let u = s.of[v];
            s.count[u] += 1;
            s.hours[u] += p.spans[v].1;
            for &x in &adj[v] {
                s.conf[x][u] += 1;
            }
            for &b in &sched_blocks[v] {
                if s.hits[u][b] == 0 {
                    s.free[u] -= 1;
                }
                s.hits[u][b] += 1;
            }
        }
        s
    }

    fn cap_pen(&self, count: usize) -> i64 {
        self.p.policy.max_shifts.map_or(0, |b| count.saturating_sub(b) as i64)
    }

    fn hours_pen(&self, hours: usize) -> i64 {
        self.p
            .policy
            .max_hours
            .map_or(0, |h| hours.saturating_sub(h).div_ceil(self.hours_unit) as i64)
    }

    fn off_pen(&self, free: usize) -> i64 {
        self.p.blocks_per_worker.saturating_sub(free) as i64
    }

    fn worker_pen(&self, u: usize) -> i64 {
        self.cap_pen(self.count[u]) + self.hours_pen(self.hours[u]) + self.off_pen(self.free[u])
    }

    fn cost(&self) -> i64 {
        let conflicts: i64 = (0..self.p.tau()).map(|v| i64::from(self.conf[v][self.of[v]])).sum::<i64>() / 2;
        conflicts + (0..self.k).map(|u| self.worker_pen(u)).sum::<i64>()
    }

    fn delta(&self, v: usize, to: usize) -> i64 {
        let from = self.of[v];
        let len = self.p.spans[v].1;
        let mut d = i64::from(self.conf[v][to]) - i64::from(self.conf[v][from]);
        d += self.cap_pen(self.count[from] - 1) - self.cap_pen(self.count[from]);
        d += self.cap_pen(self.count[to] + 1) - self.cap_pen(self.count[to]);
        d += self.hours_pen(self.hours[from] - len) - self.hours_pen(self.hours[from]);
        d += self.hours_pen(self.hours[to] + len) - self.hours_pen(self.hours[to]);
        if self.p.blocks_per_worker > 0 {
            let freed = self.sched_blocks[v].iter().filter(|&&b| self.hits[from][b] == 1).count();
            let taken = self.sched_blocks[v].iter().filter(|&&b| self.hits[to][b] == 0).count();
            d += self.off_pen(self.free[from] + freed) - self.off_pen(self.free[from]);
            d += self.off_pen(self.free[to] - taken) - self.off_pen(self.free[to]);
        }
        d
    }

    fn apply(&mut self, v: usize, to: usize) {
        let from = self.of[v];
        let len = self.p.spans[v].1;
        for &x in self.adj[v].iter() {
            self.conf[x][from] -= 1;
            self.conf[x][to] += 1;
        }
        self.count[from] -= 1;
        self.count[to] += 1;
        self.hours[from] -= len;
        self.hours[to] += len;
        for &b in self.sched_blocks[v].iter() {
            self.hits[from][b] -= 1;
            if self.hits[from][b] == 0 {
                self.free[from] += 1;
            }
            if self.hits[to][b] == 0 {
                self.free[to] -= 1;
            }
            self.hits[to][b] += 1;
        }
        self.of[v] = to;
    }

    /// Schedules that take part in some violation.
    fn violating(&self) -> Vec<usize> {
        (0..self.p.tau())
            .filter(|&v| self.conf[v][self.of[v]] > 0 || self.worker_pen(self.of[v]) > 0)
            .collect()
    }
}

/// Tries to find a feasible assignment onto `k` workers starting from `of`.
fn search(st: &mut State, deadline: Option<Instant>, max_iters: u64, rng: &mut ChaCha8Rng) -> bool {
    let tau = st.p.tau();
    let mut cost = st.cost();
    if st.k < 2 {
        return cost == 0;
    }
    let mut best = cost;
    let mut tabu = vec![vec![0u64; st.k]; tau];
    for it in 0..max_iters {
        if cost == 0 {
            return true;
        }
        if it % 256 == 0 && deadline.is_some_and(|d| Instant::now() >= d) {
            return false;
        }
        let cand = st.violating();
        let mut pick: Option<(usize, usize)> = None;
        let mut pick_d = i64::MAX;
        let mut ties = 0u32;
        for &v in &cand {
            for u in 0..st.k {
                if u == st.of[v] {
                    continue;
                }
                let d = st.delta(v, u);
                let allowed = tabu[v][u] <= it || cost + d < best;
                if !allowed {
                    continue;
                }
                if d < pick_d {
                    pick_d = d;
                    pick = Some((v, u));
                    ties = 1;
                } else if d == pick_d {
                    ties += 1;
                    if rng.gen_range(0..ties) == 0 {
                        pick = Some((v, u));
                    }
                }
            }
        }
        let Some((v, u)) = pick else {
            // everything tabu: random relocation
            let v = cand[rng.gen_range(0..cand.len())];
            let u = (st.of[v] + 1 + rng.gen_range(0..st.k - 1)) % st.k;
            cost += st.delta(v, u);
            st.apply(v, u);
            continue;
        };
        let from = st.of[v];
        cost += pick_d;
        st.apply(v, u);
        tabu[v][from] = it + 10 + rng.gen_range(0..10) + (cand.len() as u64 * 6) / 10;
        best = best.min(cost);
    }
    cost == 0
}

fn to_roster(p: &AssignmentProblem, of: &[usize], k: usize) -> Option<Roster> {
    let mut lists = vec![Vec::new(); k];
    for (v, &u) in of.iter().enumerate() {
        lists[u].push(v);
    }
    lists.retain(|l| !l.is_empty());
    lists.sort_by_key(|l| l[0]);
    let mut r = Roster::default();
    for (i, l) in lists.into_iter().enumerate() {
        r.days_off.insert(i + 1, choose_blocks(p, &l)?);
        r.assignment.insert(i + 1, l);
        r.workers_used = i + 1;
    }
    Some(r)
}

/// Lowers the worker count of a feasible roster as far as `target` or the
/// deadline allows. Always returns a feasible roster (the input if nothing
/// better is found).
pub(super) fn improve(
    p: &AssignmentProblem,
    start: &Roster,
    target: usize,
    deadline: Option<Instant>,
    seed: u64,
) -> Roster {
    let tau = p.tau();
    let mut adj = vec![Vec::new(); tau];
    for &(a, b) in &p.overlap_pairs {
        adj[a].push(b);
        adj[b].push(a);
    }
    let sched_blocks: Vec<Vec<usize>> = (0..tau)
        .map(|v| {
            (0..p.blocks.len())
                .filter(|&k| intersects(p.blocks[k].span(&p.horizon), p.spans[v], p.policy.overlap, p.horizon.periods))
                .collect()
        })
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = start.clone();
    let mut of = vec![0usize; tau];
    for (i, list) in best.assignment.values().enumerate() {
        for &v in list {
            of[v] = i;
        }
    }
    let mut k = best.assignment.len();
    while k > target.max(1) {
        if deadline.is_some_and(|d| Instant::now() >= d) {
            break;
        }
        // drop the lightest worker and hand its schedules to the others
        let mut load = vec![0usize; k];
        for &u in &of {
            load[u] += 1;
        }
        let gone = (0..k).min_by_key(|&u| load[u]).unwrap_or(k - 1);
        let mut next: Vec<usize> = of.iter().map(|&u| if u > gone { u - 1 } else { u }).collect();
        let k2 = k - 1;
        let moved: Vec<usize> = (0..tau).filter(|&v| of[v] == gone).collect();
        for &v in &moved {
            next[v] = rng.gen_range(0..k2);
        }
        let mut st = State::new(p, &adj, &sched_blocks, next, k2);
        // place each displaced schedule on its cheapest worker
        for &v in &moved {
            let to = (0..k2).min_by_key(|&u| if u == st.of[v] { 0 } else { st.delta(v, u) }).unwrap_or(0);
            if to != st.of[v] && st.delta(v, to) < 0 {
                st.apply(v, to);
            }
        }
        if !search(&mut st, deadline, 200_000, &mut rng) {
            break;
        }
        match to_roster(p, &st.of, k2) {
            Some(r) => {
                k = r.workers_used;
                of = st.of.clone();
                // compact worker indices after empty workers vanished
                let mut remap = vec![usize::MAX; k2];
                let mut n = 0;
                for v in 0..tau {
                    if remap[of[v]] == usize::MAX {
                        remap[of[v]] = n;
                        n += 1;
                    }
                }
                for u in of.iter_mut() {
                    *u = remap[*u];
                }
                best = r;
            }
            None => break,
        }
    }
    best
}

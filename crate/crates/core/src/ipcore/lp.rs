//! Bounded dual simplex over `A x - s = 0`, `l <= x <= u`, `rl <= s <= ru`.
//!
//! Every structural variable is boxed, so the all-logical starting basis is
//! dual feasible once each structural sits at the bound matching the sign of
//! its cost; no phase one is needed. The basis inverse is kept explicitly
//! (dense, row per basis position) and updated by rank-one pivots, which
//! also makes dual steepest-edge weights (squared row norms) exact and lets
//! rows be appended without refactoring. Bounds can be changed between
//! solves while the basis stays dual feasible, which is what branch and
//! bound needs.

use std::time::Instant;

pub(crate) const PRIMAL_TOL: f64 = 1e-7;
const DUAL_TOL: f64 = 1e-9;
const PIVOT_TOL: f64 = 1e-9;
const REFACTOR_EVERY: usize = 400;
/// Pivots since the last refactor before row/column disagreement forces a
/// new one; below this the column value is trusted.
const MIN_DRIFT_REFACTOR: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Stat {
    Basic,
    Lower,
    Upper,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum LpOutcome {
    Optimal,
    Infeasible,
    /// The dual objective proved the LP value is at least the cutoff.
    Cutoff,
    IterLimit,
    TimeLimit,
}

pub(crate) struct Lp {
    n: usize,
    m: usize,
    cols: Vec<Vec<(usize, f64)>>,
    rows: Vec<Vec<(usize, f64)>>,
    cost: Vec<f64>,
    pcost: Vec<f64>,
    lo: Vec<f64>,
    hi: Vec<f64>,
    x: Vec<f64>,
    stat: Vec<Stat>,
    pos: Vec<usize>,
    head: Vec<usize>,
    binv: Vec<Vec<f64>>,
    dse: Vec<f64>,
    d: Vec<f64>,
    since_refactor: usize,
    primal_stale: bool,
    pub iterations: u64,
    ray: Vec<f64>,
    alpha: Vec<f64>,
    touched: Vec<usize>,
    scratch: Vec<f64>,
}

/// Small deterministic cost perturbation in `[0.5, 1)` per column; breaks
/// dual degeneracy in covering models with many equal costs.
fn jitter(j: usize) -> f64 {
    let mut h = (j as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ 0xD1B5_4A32_D192_ED03;
    h ^= h >> 31;
    h = h.wrapping_mul(0xBF58_476D_1CE4_E5B9);
    h ^= h >> 29;
    0.5 + (h >> 11) as f64 / (1u64 << 54) as f64
}

impl Lp {
    /// `cols[j]` lists `(row, coef)` of structural `j`.
    pub fn new(
        cols: Vec<Vec<(usize, f64)>>,
        cost: Vec<f64>,
        lo: Vec<f64>,
        hi: Vec<f64>,
        row_lo: Vec<f64>,
        row_hi: Vec<f64>,
        perturb: bool,
    ) -> Self {
        let n = cols.len();
        let m = row_lo.len();
        let mut rows = vec![Vec::new(); m];
        for (j, col) in cols.iter().enumerate() {
            for &(i, a) in col {
                rows[i].push((j, a));
            }
        }
        let pcost: Vec<f64> = cost
            .iter()
            .enumerate()
            .map(|(j, &c)| {
                if perturb {
                    c + 1e-7 * (1.0 + c.abs()) * jitter(j)
                } else {
                    c
                }
            })
            .collect();
        let mut lp = Self {
            n,
            m,
            cols,
            rows,
            cost,
            pcost,
            lo: lo.into_iter().chain(row_lo).collect(),
            hi: hi.into_iter().chain(row_hi).collect(),
            x: vec![0.0; n + m],
            stat: vec![Stat::Lower; n + m],
            pos: vec![usize::MAX; n + m],
            head: (n..n + m).collect(),
            binv: (0..m)
                .map(|i| {
                    let mut r = vec![0.0; m];
                    r[i] = -1.0;
                    r
                })
                .collect(),
            dse: vec![1.0; m],
            d: vec![0.0; n + m],
            since_refactor: 0,
            primal_stale: true,
            iterations: 0,
            ray: Vec::new(),
            alpha: vec![0.0; n + m],
            touched: Vec::new(),
            scratch: vec![0.0; m],
        };
        for i in 0..m {
            lp.stat[n + i] = Stat::Basic;
            lp.pos[n + i] = i;
        }
        lp.d[..n].copy_from_slice(&lp.pcost);
        lp.place_nonbasic();
        lp
    }

    pub fn num_rows(&self) -> usize {
        self.m
    }

    pub fn values(&self) -> &[f64] {
        &self.x[..self.n]
    }

    pub fn bounds(&self, j: usize) -> (f64, f64) {
        (self.lo[j], self.hi[j])
    }

    /// True objective of the current primal point.
    pub fn objective(&self) -> f64 {
        self.cost.iter().zip(&self.x).map(|(c, x)| c * x).sum()
    }

    /// Farkas multipliers from the last infeasible solve.
    pub fn ray(&self) -> &[f64] {
        &self.ray
    }

    pub fn set_bounds(&mut self, j: usize, lo: f64, hi: f64) {
        if self.lo[j] == lo && self.hi[j] == hi {
            return;
        }
        self.lo[j] = lo;
        self.hi[j] = hi;
        if self.stat[j] != Stat::Basic {
            self.place_one(j);
            self.primal_stale = true;
        }
    }

    fn place_one(&mut self, j: usize) {
        let (lo, hi) = (self.lo[j], self.hi[j]);
        let at_lower = if lo == hi {
            true
        } else if lo.is_infinite() {
            false
        } else if hi.is_infinite() {
            true
        } else {
            self.d[j] >= 0.0
        };
        if at_lower {
            self.stat[j] = Stat::Lower;
            self.x[j] = lo;
        } else {
            self.stat[j] = Stat::Upper;
            self.x[j] = hi;
        }
        // one-sided logicals cannot flip; shift their cost instead
        let wrong = match self.stat[j] {
            Stat::Lower => self.d[j] < 0.0,
            Stat::Upper => self.d[j] > 0.0,
            Stat::Basic => false,
        };
        if wrong && lo != hi {
            self.d[j] = 0.0;
        }
    }

    fn place_nonbasic(&mut self) {
        for j in 0..self.n + self.m {
            if self.stat[j] != Stat::Basic {
                self.place_one(j);
            }
        }
        self.primal_stale = true;
    }

    /// Appends the row `rl <= a x <= ru` with its logical basic.
    pub fn add_row(&mut self, coefs: &[(usize, f64)], rl: f64, ru: f64) {
        let i = self.m;
        let lj = self.n + self.m;
        for row in &mut self.binv {
            row.push(0.0);
        }
        let mut newrow = vec![0.0; self.m + 1];
        let mut act = 0.0;
        for &(j, a) in coefs {
            act += a * self.x[j];
            self.cols[j].push((i, a));
            if self.stat[j] == Stat::Basic {
                let p = self.pos[j];
                for (nr, b) in newrow.iter_mut().zip(&self.binv[p]) {
                    *nr += a * b;
                }
            }
        }
        newrow[i] = -1.0;
        self.dse.push(newrow.iter().map(|v| v * v).sum());
        self.binv.push(newrow);
        self.rows.push(coefs.to_vec());
        self.lo.push(rl);
        self.hi.push(ru);
        self.x.push(act);
        self.stat.push(Stat::Basic);
        self.pos.push(i);
        self.d.push(0.0);
        self.alpha.push(0.0);
        self.scratch.push(0.0);
        self.head.push(lj);
        self.m += 1;
    }

    fn column(&self, q: usize, out: &mut [f64]) {
        out.iter_mut().for_each(|v| *v = 0.0);
        if q < self.n {
            for &(k, a) in &self.cols[q] {
                for (o, row) in out.iter_mut().zip(&self.binv) {
                    *o += row[k] * a;
                }
            }
        } else {
            let k = q - self.n;
            for (o, row) in out.iter_mut().zip(&self.binv) {
                *o = -row[k];
            }
        }
    }

    fn compute_primal(&mut self) {
        let mut r = vec![0.0; self.m];
        for j in 0..self.n {
            if self.stat[j] != Stat::Basic && self.x[j] != 0.0 {
                for &(k, a) in &self.cols[j] {
                    r[k] += a * self.x[j];
                }
            }
        }
        for i in 0..self.m {
            let j = self.n + i;
            if self.stat[j] != Stat::Basic {
                r[i] -= self.x[j];
            }
        }
        let nz: Vec<(usize, f64)> = r
            .iter()
            .enumerate()
            .filter(|(_, v)| **v != 0.0)
            .map(|(k, &v)| (k, v))
            .collect();
        for p in 0..self.m {
            let row = &self.binv[p];
            let v: f64 = nz.iter().map(|&(k, rk)| row[k] * rk).sum();
            self.x[self.head[p]] = -v;
        }
        self.primal_stale = false;
    }

    fn duals(&self, costs: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.m];
        for p in 0..self.m {
            let v = self.head[p];
            let c = if v < self.n { costs[v] } else { 0.0 };
            if c != 0.0 {
                for (yk, b) in y.iter_mut().zip(&self.binv[p]) {
                    *yk += c * b;
                }
            }
        }
        y
    }

    fn compute_duals(&mut self) {
        let y = self.duals(&self.pcost);
        for j in 0..self.n {
            self.d[j] = if self.stat[j] == Stat::Basic {
                0.0
            } else {
                self.pcost[j] - self.cols[j].iter().map(|&(k, a)| y[k] * a).sum::<f64>()
            };
        }
        for i in 0..self.m {
            let j = self.n + i;
            self.d[j] = if self.stat[j] == Stat::Basic { 0.0 } else { y[i] };
        }
    }

    /// A valid lower bound on the LP value for the current bounds, from the
    /// Lagrangian of the current duals with the unperturbed costs.
    pub fn lagrangian_bound(&self) -> f64 {
        let mut y = self.duals(&self.cost);
        let mut bound = 0.0;
        for (i, yi) in y.iter_mut().enumerate() {
            let (rl, ru) = (self.lo[self.n + i], self.hi[self.n + i]);
            if *yi > 0.0 {
                if rl.is_infinite() {
                    *yi = 0.0;
                } else {
                    bound += *yi * rl;
                }
            } else if *yi < 0.0 {
                if ru.is_infinite() {
                    *yi = 0.0;
                } else {
                    bound += *yi * ru;
                }
            }
        }
        for j in 0..self.n {
            let dj = self.cost[j] - self.cols[j].iter().map(|&(k, a)| y[k] * a).sum::<f64>();
            bound += if dj >= 0.0 { dj * self.lo[j] } else { dj * self.hi[j] };
        }
        bound - 1e-9 * (1.0 + bound.abs())
    }

    /// Whether `y^T (A x - s) = 0` has no solution inside the bounds, checked
    /// directly from the rows so it does not depend on the basis inverse.
    fn farkas_holds(&self, y: &[f64]) -> bool {
        let (mut gmin, mut gmax, mut scale) = (0.0, 0.0, 0.0);
        let mut add = |c: f64, lo: f64, hi: f64| {
            if c == 0.0 {
                return;
            }
            let (a, b) = if c > 0.0 { (c * lo, c * hi) } else { (c * hi, c * lo) };
            gmin += a;
            gmax += b;
            scale += a.abs().max(b.abs());
        };
        for j in 0..self.n {
            let c: f64 = self.cols[j].iter().map(|&(k, a)| y[k] * a).sum();
            add(c, self.lo[j], self.hi[j]);
        }
        for (i, &yi) in y.iter().enumerate() {
            add(-yi, self.lo[self.n + i], self.hi[self.n + i]);
        }
        if gmin.is_nan() || gmax.is_nan() {
            return false;
        }
        let tol = 1e-6 + 1e-9 * if scale.is_finite() { scale } else { 0.0 };
        gmax < -tol || gmin > tol
    }

    fn infeasibility(&self, v: usize) -> f64 {
        let xv = self.x[v];
        if xv < self.lo[v] - PRIMAL_TOL {
            self.lo[v] - xv
        } else if xv > self.hi[v] + PRIMAL_TOL {
            xv - self.hi[v]
        } else {
            0.0
        }
    }

    fn choose_row(&self) -> Option<usize> {
        let mut best = None;
        let mut best_score = 0.0;
        for p in 0..self.m {
            let inf = self.infeasibility(self.head[p]);
            if inf > 0.0 {
                let score = inf * inf / self.dse[p].max(1e-12);
                if score > best_score {
                    best_score = score;
                    best = Some(p);
                }
            }
        }
        best
    }

    fn compute_alpha_row(&mut self, r: usize) {
        for &j in &self.touched {
            self.alpha[j] = 0.0;
        }
        self.touched.clear();
        let rho = &self.binv[r];
        for (k, &rk) in rho.iter().enumerate() {
            if rk == 0.0 {
                continue;
            }
            for &(j, a) in &self.rows[k] {
                if self.alpha[j] == 0.0 {
                    self.touched.push(j);
                }
                self.alpha[j] += rk * a;
                if self.alpha[j] == 0.0 {
                    self.alpha[j] = f64::MIN_POSITIVE;
                }
            }
            let lj = self.n + k;
            self.alpha[lj] = -rk;
            self.touched.push(lj);
        }
    }

    /// Harris two-pass ratio test. `up` is true when the leaving variable is
    /// below its lower bound.
    fn ratio_test(&self, up: bool) -> Option<usize> {
        let cand = |j: usize| -> Option<(f64, f64)> {
            let st = self.stat[j];
            if st == Stat::Basic || self.lo[j] == self.hi[j] {
                return None;
            }
            let a = self.alpha[j];
            if a.abs() < PIVOT_TOL {
                return None;
            }
            let ok = match (st, up) {
                (Stat::Lower, true) => a < 0.0,
                (Stat::Upper, true) => a > 0.0,
                (Stat::Lower, false) => a > 0.0,
                (Stat::Upper, false) => a < 0.0,
                _ => false,
            };
            if !ok {
                return None;
            }
            let ds = if st == Stat::Lower { self.d[j] } else { -self.d[j] };
            Some((ds.max(0.0), a.abs()))
        };
        let mut theta_max = f64::INFINITY;
        for &j in &self.touched {
            if let Some((ds, a)) = cand(j) {
                theta_max = theta_max.min((ds + DUAL_TOL) / a);
            }
        }
        if theta_max.is_infinite() {
            return None;
        }
        let mut best: Option<(usize, f64)> = None;
        for &j in &self.touched {
            if let Some((ds, a)) = cand(j) {
                if ds / a <= theta_max {
                    let better = match best {
                        None => true,
                        Some((bj, ba)) => a > ba || (a == ba && j < bj),
                    };
                    if better {
                        best = Some((j, a));
                    }
                }
            }
        }
        best.map(|(j, _)| j)
    }

    fn pivot(&mut self, r: usize, q: usize, col: &[f64]) {
        let piv = col[r];
        let mut rowr = std::mem::take(&mut self.binv[r]);
        let inv = 1.0 / piv;
        rowr.iter_mut().for_each(|v| *v *= inv);
        for p in 0..self.m {
            if p == r || col[p] == 0.0 {
                continue;
            }
            let f = col[p];
            let row = &mut self.binv[p];
            let mut norm = 0.0;
            for (b, a) in row.iter_mut().zip(&rowr) {
                *b -= f * a;
                norm += *b * *b;
            }
            self.dse[p] = norm;
        }
        self.dse[r] = rowr.iter().map(|v| v * v).sum();
        self.binv[r] = rowr;
        let leaving = self.head[r];
        self.head[r] = q;
        self.pos[q] = r;
        self.stat[q] = Stat::Basic;
        self.pos[leaving] = usize::MAX;
        self.since_refactor += 1;
    }

    /// Rebuilds the basis inverse from scratch for the current basic set.
    pub fn refactor(&mut self) {
        let m = self.m;
        let n = self.n;
        let target: Vec<usize> = self.head.clone();
        let mut keep_logical = vec![false; m];
        let mut structurals = Vec::new();
        for &v in &target {
            if v >= n {
                keep_logical[v - n] = true;
            } else {
                structurals.push(v);
            }
        }
        self.binv = (0..m)
            .map(|i| {
                let mut r = vec![0.0; m];
                r[i] = -1.0;
                r
            })
            .collect();
        self.dse = vec![1.0; m];
        for i in 0..m {
            self.head[i] = n + i;
            self.pos[n + i] = i;
            self.stat[n + i] = Stat::Basic;
        }
        let mut free_row: Vec<bool> = keep_logical.iter().map(|k| !k).collect();
        let mut col = vec![0.0; m];
        for q in structurals {
            self.column(q, &mut col);
            let mut best = None;
            let mut best_abs = 1e-9;
            for p in 0..m {
                if free_row[p] && col[p].abs() > best_abs {
                    best_abs = col[p].abs();
                    best = Some(p);
                }
            }
            match best {
                Some(p) => {
                    let leaving = self.head[p];
                    self.stat[leaving] = Stat::Lower;
                    self.pivot(p, q, &col);
                    free_row[p] = false;
                }
                None => {
                    self.stat[q] = Stat::Lower;
                    self.pos[q] = usize::MAX;
                }
            }
        }
        for p in 0..m {
            self.dse[p] = self.binv[p].iter().map(|v| v * v).sum();
        }
        self.since_refactor = 0;
        self.compute_duals();
        self.place_nonbasic();
        self.compute_primal();
    }

    /// Runs dual simplex iterations until the current bounds are optimal,
    /// proven infeasible, or the dual objective reaches `cutoff`.
    pub fn solve(&mut self, cutoff: f64, iter_limit: u64, deadline: Option<Instant>) -> LpOutcome {
        if self.primal_stale {
            self.compute_primal();
        }
        let mut col = vec![0.0; self.m];
        let mut local: u64 = 0;
        let mut retried_infeasible = false;
        let mut clean_rounds = 0;
        loop {
            if col.len() != self.m {
                col = vec![0.0; self.m];
            }
            if self.since_refactor >= REFACTOR_EVERY.max(self.m / 2) {
                self.refactor();
            }
            if local % 32 == 0 && local > 0 {
                if let Some(dl) = deadline {
                    if Instant::now() >= dl {
                        return LpOutcome::TimeLimit;
                    }
                }
                if cutoff.is_finite() {
                    let z: f64 = self.pcost.iter().zip(&self.x).map(|(c, x)| c * x).sum();
                    if z >= cutoff && self.lagrangian_bound() >= cutoff {
                        return LpOutcome::Cutoff;
                    }
                }
            }
            if local >= iter_limit {
                return LpOutcome::IterLimit;
            }
            let Some(r) = self.choose_row() else {
                // confirm optimality with fresh duals
                self.compute_duals();
                let mut flipped = false;
                for j in 0..self.n {
                    let wrong = match self.stat[j] {
                        Stat::Lower => self.d[j] < -DUAL_TOL * 100.0,
                        Stat::Upper => self.d[j] > DUAL_TOL * 100.0,
                        Stat::Basic => false,
                    };
                    if wrong && self.lo[j] != self.hi[j] {
                        self.place_one(j);
                        flipped = true;
                    }
                }
                if flipped && clean_rounds < 5 {
                    clean_rounds += 1;
                    self.compute_primal();
                    continue;
                }
                return LpOutcome::Optimal;
            };
            let leave = self.head[r];
            let up = self.x[leave] < self.lo[leave];
            let bound = if up { self.lo[leave] } else { self.hi[leave] };
            self.compute_alpha_row(r);
            let Some(q) = self.ratio_test(up) else {
                let proven = self.farkas_holds(&self.binv[r]);
                if !proven && !retried_infeasible && self.since_refactor > 0 {
                    retried_infeasible = true;
                    self.refactor();
                    continue;
                }
                self.ray = self.binv[r].clone();
                if !up {
                    self.ray.iter_mut().for_each(|v| *v = -*v);
                }
                return LpOutcome::Infeasible;
            };
            self.column(q, &mut col);
            let aq = self.alpha[q];
            let drift = (col[r] - aq).abs() > 1e-7 * (1.0 + aq.abs());
            if col[r].abs() < PIVOT_TOL || (drift && self.since_refactor >= MIN_DRIFT_REFACTOR) {
                if self.since_refactor == 0 {
                    // the row is unreliable even fresh; give up on this basis
                    return LpOutcome::IterLimit;
                }
                self.refactor();
                continue;
            }
            retried_infeasible = false;
            local += 1;
            self.iterations += 1;

            // dual update
            let theta = self.d[q] / aq;
            for &j in &self.touched {
                if self.stat[j] != Stat::Basic {
                    self.d[j] -= theta * self.alpha[j];
                }
            }
            self.d[q] = 0.0;
            self.d[leave] = -theta;

            // primal update
            let t = (self.x[leave] - bound) / col[r];
            self.x[q] += t;
            for p in 0..self.m {
                if col[p] != 0.0 {
                    let v = self.head[p];
                    self.x[v] -= t * col[p];
                }
            }
            self.pivot(r, q, &col);
            self.x[leave] = bound;
            self.stat[leave] = if up { Stat::Lower } else { Stat::Upper };

            // keep boxed structurals on the side their reduced cost asks for
            for idx in 0..self.touched.len() {
                let j = self.touched[idx];
                if j >= self.n || self.stat[j] == Stat::Basic || self.lo[j] == self.hi[j] {
                    continue;
                }
                let wrong = match self.stat[j] {
                    Stat::Lower => self.d[j] < -DUAL_TOL,
                    Stat::Upper => self.d[j] > DUAL_TOL,
                    Stat::Basic => false,
                };
                if wrong {
                    let old = self.x[j];
                    self.place_one(j);
                    let delta = self.x[j] - old;
                    if delta != 0.0 {
                        let mut c2 = std::mem::take(&mut self.scratch);
                        self.column(j, &mut c2);
                        for p in 0..self.m {
                            if c2[p] != 0.0 {
                                let v = self.head[p];
                                self.x[v] -= delta * c2[p];
                            }
                        }
                        self.scratch = c2;
                    }
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const INF: f64 = f64::INFINITY;

    #[test]
    fn single_bound_row() {
        // min x s.t. x >= 2.5, 0 <= x <= 10
        let mut lp = Lp::new(
            vec![vec![(0, 1.0)]],
            vec![1.0],
            vec![0.0],
            vec![10.0],
            vec![2.5],
            vec![INF],
            false,
        );
        assert_eq!(lp.solve(INF, 1000, None), LpOutcome::Optimal);
        assert!((lp.values()[0] - 2.5).abs() < 1e-9);
        assert!((lp.lagrangian_bound() - 2.5).abs() < 1e-6);
    }

    #[test]
    fn infeasible_rows() {
        // x <= 0 and x >= 1
        let mut lp = Lp::new(
            vec![vec![(0, 1.0), (1, 1.0)]],
            vec![1.0],
            vec![0.0],
            vec![5.0],
            vec![-INF, 1.0],
            vec![0.0, INF],
            false,
        );
        assert_eq!(lp.solve(INF, 1000, None), LpOutcome::Infeasible);
    }

    #[test]
    fn small_covering() {
        // min x1 + x2 + x3, x1 + x2 >= 1, x2 + x3 >= 1, x1 + x3 >= 1 -> 1.5
        let cols = vec![
            vec![(0, 1.0), (2, 1.0)],
            vec![(0, 1.0), (1, 1.0)],
            vec![(1, 1.0), (2, 1.0)],
        ];
        let mut lp = Lp::new(
            cols,
            vec![1.0; 3],
            vec![0.0; 3],
            vec![1.0; 3],
            vec![1.0; 3],
            vec![INF; 3],
            true,
        );
        assert_eq!(lp.solve(INF, 1000, None), LpOutcome::Optimal);
        assert!((lp.objective() - 1.5).abs() < 1e-6);
        assert!((lp.lagrangian_bound() - 1.5).abs() < 1e-5);
        // branch x1 <= 0
        lp.set_bounds(0, 0.0, 0.0);
        assert_eq!(lp.solve(INF, 1000, None), LpOutcome::Optimal);
        assert!((lp.objective() - 2.0).abs() < 1e-6);
        // add a row x2 + x3 <= 1 -> x2 + x3 = 1 and x3 >= 1, x2 >= 1: infeasible
        lp.add_row(&[(1, 1.0), (2, 1.0)], -INF, 1.0);
        assert_eq!(lp.solve(INF, 1000, None), LpOutcome::Infeasible);
    }

    #[test]
    fn refactor_preserves_solution() {
        let cols = vec![
            vec![(0, 2.0), (1, 1.0)],
            vec![(0, 1.0), (1, 3.0)],
            vec![(0, 1.0), (1, 1.0)],
        ];
        let mut lp = Lp::new(
            cols,
            vec![3.0, 4.0, 2.5],
            vec![0.0; 3],
            vec![10.0; 3],
            vec![4.0, 6.0],
            vec![INF, INF],
            false,
        );
        assert_eq!(lp.solve(INF, 1000, None), LpOutcome::Optimal);
        let z = lp.objective();
        lp.refactor();
        assert_eq!(lp.solve(INF, 1000, None), LpOutcome::Optimal);
        assert!((lp.objective() - z).abs() < 1e-9);
    }
}

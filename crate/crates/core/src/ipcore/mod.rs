//! Integer linear programs and a self-contained exact solver.
//!
//! The built-in engine solves LP relaxations with a bounded dual simplex in
//! double precision (feasibility tolerance `1e-7`) and explores a
//! best-bound branch-and-bound tree with most-fractional branching. LP
//! bounds are recomputed as Lagrangian bounds from the final duals, so a
//! reported bound never depends on the simplex having converged exactly, and
//! every incumbent is re-checked in exact rational arithmetic before it is
//! accepted.

mod bnb;
mod lp;
pub mod lpformat;
pub mod model;

use std::time::Duration;

use thiserror::Error;

pub use model::{int, Constraint, IpModel, ModelError, Rat, Sense, VarKind, Variable};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolveError {
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("numerical failure: {0}")]
    Numeric(String),
}

#[derive(Debug, Clone)]
pub struct SolveOptions {
    pub time_limit: Option<Duration>,
    pub abs_gap: f64,
    pub rel_gap: f64,
    pub node_limit: Option<u64>,
    /// Drives the randomized rounding heuristic only.
    pub seed: u64,
    /// A known lower bound on the optimum; the search stops as soon as an
    /// incumbent reaches it.
    pub objective_floor: Option<Rat>,
    /// A starting point, accepted if it is feasible.
    pub warm_start: Option<Vec<i64>>,
    pub lp_iteration_limit: u64,
    pub max_lazy_per_round: usize,
    pub heuristics: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            time_limit: None,
            abs_gap: 1e-6,
            rel_gap: 0.0,
            node_limit: None,
            seed: 0,
            objective_floor: None,
            warm_start: None,
            lp_iteration_limit: 10_000_000,
            max_lazy_per_round: 2000,
            heuristics: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    /// Search completed; the incumbent is optimal within the gap.
    Optimal,
    /// An incumbent exists but some subtree was abandoned after an LP
    /// failure, so optimality is not proven.
    Feasible,
    Infeasible,
    /// A time or node limit stopped the search.
    LimitReached,
}

impl SolveStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            SolveStatus::Optimal => "optimal",
            SolveStatus::Feasible => "feasible",
            SolveStatus::Infeasible => "infeasible",
            SolveStatus::LimitReached => "limit_reached",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Incumbent {
    pub values: Vec<i64>,
    pub objective: Rat,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Checkpoint {
    pub time_s: f64,
    pub nodes: u64,
    pub incumbent: Option<Rat>,
    pub bound: Rat,
}

#[derive(Debug, Clone, Default)]
pub struct SolveStats {
    pub nodes: u64,
    pub lp_iterations: u64,
    pub wall_time: Duration,
    pub lazy_rows_added: usize,
    pub lp_rows: usize,
    pub checkpoints: Vec<Checkpoint>,
}

#[derive(Debug, Clone)]
pub struct SolveResult {
    pub status: SolveStatus,
    pub incumbent: Option<Incumbent>,
    /// Lower bound on the minimum. Meaningless when infeasible.
    pub best_bound: Rat,
    pub stats: SolveStats,
    /// Row multipliers proving infeasibility of the root LP, when found.
    pub infeasibility: Option<Vec<(usize, f64)>>,
}

impl SolveResult {
    pub fn objective(&self) -> Option<Rat> {
        self.incumbent.as_ref().map(|i| i.objective)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    LimitReached,
}

#[derive(Debug, Clone)]
pub struct LpRelaxation {
    pub status: LpStatus,
    /// Objective of the final LP point.
    pub value: f64,
    /// Certified lower bound on the LP optimum.
    pub bound: f64,
    pub x: Vec<f64>,
}

/// Solves a model with the built-in engine.
pub fn solve(model: &IpModel, opts: &SolveOptions) -> Result<SolveResult, SolveError> {
    bnb::branch_and_bound(model, opts)
}

/// Solves the continuous relaxation (lazy rows are added as needed).
pub fn lp_relax(model: &IpModel, opts: &SolveOptions) -> Result<LpRelaxation, SolveError> {
    bnb::lp_relax(model, opts)
}

/// A persistent LP relaxation whose variable bounds can be changed between
/// solves; each re-solve starts from the previous basis. Lazy rows are added
/// as they become violated.
pub struct LpSession<'a> {
    rel: bnb::Relaxation<'a>,
    iteration_limit: u64,
}

impl<'a> LpSession<'a> {
    pub fn new(model: &'a IpModel) -> Result<Self, SolveError> {
        model.validate().map_err(|e| SolveError::InvalidModel(e.to_string()))?;
        let rel = bnb::Relaxation::new(model, usize::MAX)
            .map_err(|row| SolveError::InvalidModel(format!("row {row} can never be satisfied")))?;
        Ok(Self {
            rel,
            iteration_limit: 1_000_000,
        })
    }

    pub fn set_bounds(&mut self, var: usize, lower: f64, upper: f64) {
        self.rel.lp.set_bounds(var, lower, upper);
    }

    /// The LP value, or `None` when the LP is infeasible or the limits hit.
    pub fn solve(&mut self, deadline: Option<std::time::Instant>) -> Option<f64> {
        match self.rel.solve(f64::INFINITY, deadline, self.iteration_limit) {
            lp::LpOutcome::Optimal => Some(self.rel.lp.objective()),
            _ => None,
        }
    }

    pub fn values(&self) -> &[f64] {
        self.rel.lp.values()
    }
}

/// A MILP engine the stages can be pointed at.
pub trait Backend {
    fn name(&self) -> &str;
    fn solve(&self, model: &IpModel, opts: &SolveOptions) -> Result<SolveResult, SolveError>;
}

/// The built-in branch-and-bound engine.
#[derive(Debug, Clone, Copy, Default)]
pub struct Builtin;

impl Backend for Builtin {
    fn name(&self) -> &str {
        "builtin"
    }

    fn solve(&self, model: &IpModel, opts: &SolveOptions) -> Result<SolveResult, SolveError> {
        solve(model, opts)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn min_x_at_least_three() {
        let mut m = IpModel::new();
        let x = m.add_integer("x", 0, 10).unwrap();
        m.add_constraint("c", vec![(x, int(1))], Sense::Ge, int(3)).unwrap();
        m.set_objective(vec![(x, int(1))]).unwrap();
        let r = solve(&m, &SolveOptions::default()).unwrap();
        assert_eq!(r.status, SolveStatus::Optimal);
        assert_eq!(r.incumbent.unwrap().values, vec![3]);
        assert_eq!(r.best_bound, int(3));
    }

    #[test]
    fn infeasible_pair() {
        let mut m = IpModel::new();
        let x = m.add_integer("x", 0, 10).unwrap();
        m.add_constraint("le", vec![(x, int(1))], Sense::Le, int(0)).unwrap();
        m.add_constraint("ge", vec![(x, int(1))], Sense::Ge, int(1)).unwrap();
        m.set_objective(vec![(x, int(1))]).unwrap();
        let r = solve(&m, &SolveOptions::default()).unwrap();
        assert_eq!(r.status, SolveStatus::Infeasible);
        assert!(r.incumbent.is_none());
        assert!(r.infeasibility.is_some());
    }

    #[test]
    fn lp_relaxation_value() {
        let mut m = IpModel::new();
        let x = m.add_integer("x", 0, 10).unwrap();
        m.add_constraint("c", vec![(x, int(2))], Sense::Ge, int(5)).unwrap();
        m.set_objective(vec![(x, int(1))]).unwrap();
        let r = lp_relax(&m, &SolveOptions::default()).unwrap();
        assert_eq!(r.status, LpStatus::Optimal);
        assert!((r.value - 2.5).abs() < 1e-6);
        assert!(r.bound <= 2.5 + 1e-9 && r.bound > 2.5 - 1e-5);
    }

    #[test]
    fn lazy_rows_are_enforced() {
        // max x + y (as min -x - y) with x + y <= 1 lazy
        let mut m = IpModel::new();
        let x = m.add_binary("x").unwrap();
        let y = m.add_binary("y").unwrap();
        m.add_lazy_constraint("pair", vec![(x, int(1)), (y, int(1))], Sense::Le, int(1))
            .unwrap();
        m.set_objective(vec![(x, int(-1)), (y, int(-1))]).unwrap();
        let r = solve(&m, &SolveOptions::default()).unwrap();
        assert_eq!(r.status, SolveStatus::Optimal);
        assert_eq!(r.objective(), Some(int(-1)));
        assert_eq!(r.stats.lazy_rows_added, 1);
    }

    #[test]
    fn objective_floor_stops_early() {
        let mut m = IpModel::new();
        let x = m.add_integer("x", 0, 10).unwrap();
        m.add_constraint("c", vec![(x, int(1))], Sense::Ge, int(4)).unwrap();
        m.set_objective(vec![(x, int(1))]).unwrap();
        let opts = SolveOptions {
            objective_floor: Some(int(4)),
            warm_start: Some(vec![4]),
            ..SolveOptions::default()
        };
        let r = solve(&m, &opts).unwrap();
        assert_eq!(r.status, SolveStatus::Optimal);
        assert_eq!(r.stats.nodes, 0);
        assert_eq!(r.best_bound, int(4));
    }

    #[test]
    fn node_limit_reports_incumbent_and_bound() {
        let mut m = IpModel::new();
        let xs: Vec<usize> = (0..7).map(|i| m.add_binary(format!("x{i}")).unwrap()).collect();
        // odd cycle cover: LP 3.5, IP 4
        for i in 0..7 {
            let j = (i + 1) % 7;
            m.add_constraint(format!("e{i}"), vec![(xs[i], int(1)), (xs[j], int(1))], Sense::Ge, int(1))
                .unwrap();
        }
        m.set_objective(xs.iter().map(|&x| (x, int(1))).collect()).unwrap();
        let r = solve(
            &m,
            &SolveOptions {
                node_limit: Some(0),
                warm_start: Some(vec![1; 7]),
                ..SolveOptions::default()
            },
        )
        .unwrap();
        assert_eq!(r.status, SolveStatus::LimitReached);
        let inc = r.objective().unwrap();
        assert!(inc <= int(7));
        assert!(r.best_bound <= inc);
        let full = solve(&m, &SolveOptions::default()).unwrap();
        assert_eq!(full.status, SolveStatus::Optimal);
        assert_eq!(full.objective(), Some(int(4)));
        assert_eq!(full.best_bound, int(4));
    }
}

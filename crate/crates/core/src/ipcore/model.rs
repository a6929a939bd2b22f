use std::collections::HashMap;
use std::fmt;

use num_rational::Rational64;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Rat = Rational64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("duplicate variable name {0:?}")]
    DuplicateName(String),
    #[error("variable {name:?} has empty domain [{lower}, {upper}]")]
    EmptyDomain { name: String, lower: i64, upper: i64 },
    #[error("binary variable {0:?} must have bounds within [0, 1]")]
    BinaryBounds(String),
    #[error("constraint {row} references unknown variable {var}")]
    UnknownVariable { row: usize, var: usize },
    #[error("objective references unknown variable {0}")]
    UnknownObjectiveVariable(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VarKind {
    Binary,
    Integer,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Variable {
    pub name: String,
    pub kind: VarKind,
    pub lower: i64,
    pub upper: i64,
    /// Branching considers fractional variables of the highest priority
    /// first.
    pub priority: i32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sense {
    Le,
    Eq,
    Ge,
}

impl fmt::Display for Sense {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sense::Le => "<=",
            Sense::Eq => "=",
            Sense::Ge => ">=",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub name: String,
    pub coefs: Vec<(usize, Rat)>,
    pub sense: Sense,
    pub rhs: Rat,
    /// Lazy rows start outside the LP and are added when violated.
    pub lazy: bool,
}

impl Constraint {
    pub fn activity(&self, x: &[i64]) -> Rat {
        self.coefs
            .iter()
            .fold(Rat::zero(), |acc, &(j, a)| acc + a * Rat::from(x[j]))
    }

    pub fn satisfied_by(&self, x: &[i64]) -> bool {
        let lhs = self.activity(x);
        match self.sense {
            Sense::Le => lhs <= self.rhs,
            Sense::Eq => lhs == self.rhs,
            Sense::Ge => lhs >= self.rhs,
        }
    }

    pub(crate) fn violation_f64(&self, x: &[f64]) -> f64 {
        let lhs: f64 = self
            .coefs
            .iter()
            .map(|&(j, a)| a.to_f64().unwrap_or(0.0) * x[j])
            .sum();
        let rhs = self.rhs.to_f64().unwrap_or(0.0);
        match self.sense {
            Sense::Le => lhs - rhs,
            Sense::Ge => rhs - lhs,
            Sense::Eq => (lhs - rhs).abs(),
        }
    }
}

/// An integer linear program: minimize `c x` subject to linear rows and
/// finite variable bounds.
#[derive(Debug, Clone, Default)]
pub struct IpModel {
    vars: Vec<Variable>,
    cons: Vec<Constraint>,
    objective: Vec<(usize, Rat)>,
    names: HashMap<String, usize>,
}

impl IpModel {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_var(
        &mut self,
        name: impl Into<String>,
        kind: VarKind,
        lower: i64,
        upper: i64,
    ) -> Result<usize, ModelError> {
        let name = name.into();
        if self.names.contains_key(&name) {
            return Err(ModelError::DuplicateName(name));
        }
        if lower > upper {
            return Err(ModelError::EmptyDomain { name, lower, upper });
        }
        if kind == VarKind::Binary && (lower < 0 || upper > 1) {
            return Err(ModelError::BinaryBounds(name));
        }
        let id = self.vars.len();
        self.names.insert(name.clone(), id);
        self.vars.push(Variable {
            name,
            kind,
            lower,
            upper,
            priority: 0,
        });
        Ok(id)
    }

    pub fn add_binary(&mut self, name: impl Into<String>) -> Result<usize, ModelError> {
        self.add_var(name, VarKind::Binary, 0, 1)
    }

    pub fn add_integer(
        &mut self,
        name: impl Into<String>,
        lower: i64,
        upper: i64,
    ) -> Result<usize, ModelError> {
        self.add_var(name, VarKind::Integer, lower, upper)
    }

    fn push_row(
        &mut self,
        name: String,
        coefs: Vec<(usize, Rat)>,
        sense: Sense,
        rhs: Rat,
        lazy: bool,
    ) -> Result<usize, ModelError> {
        let row = self.cons.len();
        if let Some(&(var, _)) = coefs.iter().find(|(j, _)| *j >= self.vars.len()) {
            return Err(ModelError::UnknownVariable { row, var });
        }
        // merge duplicates and drop zeros so the LP sees a clean sparse row
        let mut merged: Vec<(usize, Rat)> = Vec::with_capacity(coefs.len());
        let mut sorted = coefs;
        sorted.sort_by_key(|&(j, _)| j);
        for (j, a) in sorted {
            match merged.last_mut() {
                Some((k, b)) if *k == j => *b += a,
                _ => merged.push((j, a)),
            }
        }
        merged.retain(|(_, a)| !a.is_zero());
        self.cons.push(Constraint {
            name,
            coefs: merged,
            sense,
            rhs,
            lazy,
        });
        Ok(row)
    }

    pub fn add_constraint(
        &mut self,
        name: impl Into<String>,
        coefs: Vec<(usize, Rat)>,
        sense: Sense,
        rhs: Rat,
    ) -> Result<usize, ModelError> {
        self.push_row(name.into(), coefs, sense, rhs, false)
    }

    /// A row the solver only adds to the LP once a relaxation violates it.
    /// Incumbents are always checked against it.
    pub fn add_lazy_constraint(
        &mut self,
        name: impl Into<String>,
        coefs: Vec<(usize, Rat)>,
        sense: Sense,
        rhs: Rat,
    ) -> Result<usize, ModelError> {
        self.push_row(name.into(), coefs, sense, rhs, true)
    }

    pub fn set_objective(&mut self, coefs: Vec<(usize, Rat)>) -> Result<(), ModelError> {
        if let Some(&(j, _)) = coefs.iter().find(|(j, _)| *j >= self.vars.len()) {
            return Err(ModelError::UnknownObjectiveVariable(j));
        }
        let mut dense: Vec<Rat> = vec![Rat::zero(); self.vars.len()];
        for (j, a) in coefs {
            dense[j] += a;
        }
        self.objective = dense
            .into_iter()
            .enumerate()
            .filter(|(_, a)| !a.is_zero())
            .collect();
        Ok(())
    }

    pub fn vars(&self) -> &[Variable] {
        &self.vars
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.cons
    }

    pub fn objective(&self) -> &[(usize, Rat)] {
        &self.objective
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn num_constraints(&self) -> usize {
        self.cons.len()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.names.get(name).copied()
    }

    /// Tightens the bounds of an existing variable.
    pub fn set_priority(&mut self, var: usize, priority: i32) {
        self.vars[var].priority = priority;
    }

    pub fn set_bounds(&mut self, var: usize, lower: i64, upper: i64) -> Result<(), ModelError> {
        let v = &mut self.vars[var];
        if lower > upper {
            return Err(ModelError::EmptyDomain {
                name: v.name.clone(),
                lower,
                upper,
            });
        }
        v.lower = lower;
        v.upper = upper;
        Ok(())
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        for v in &self.vars {
            if v.lower > v.upper {
                return Err(ModelError::EmptyDomain {
                    name: v.name.clone(),
                    lower: v.lower,
                    upper: v.upper,
                });
            }
        }
        for (row, c) in self.cons.iter().enumerate() {
            if let Some(&(var, _)) = c.coefs.iter().find(|(j, _)| *j >= self.vars.len()) {
                return Err(ModelError::UnknownVariable { row, var });
            }
        }
        Ok(())
    }

    pub fn evaluate(&self, x: &[i64]) -> Rat {
        self.objective
            .iter()
            .fold(Rat::zero(), |acc, &(j, c)| acc + c * Rat::from(x[j]))
    }

    /// Exact feasibility check of an integer point (bounds and every row,
    /// lazy rows included).
    pub fn is_feasible(&self, x: &[i64]) -> bool {
        x.len() == self.vars.len()
            && self
                .vars
                .iter()
                .zip(x)
                .all(|(v, &xi)| v.lower <= xi && xi <= v.upper)
            && self.cons.iter().all(|c| c.satisfied_by(x))
    }

    /// Indices of rows an integer point violates.
    pub fn violated_rows(&self, x: &[i64]) -> Vec<usize> {
        self.cons
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.satisfied_by(x))
            .map(|(i, _)| i)
            .collect()
    }

    /// Whether every feasible point has an integral objective value.
    pub fn objective_is_integral(&self) -> bool {
        self.objective.iter().all(|(_, c)| c.is_integer())
    }
}

/// Shorthand for an integer coefficient.
pub fn int(v: i64) -> Rat {
    Rat::from_integer(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rows_are_merged_and_checked() {
        let mut m = IpModel::new();
        let x = m.add_integer("x", 0, 5).unwrap();
        let y = m.add_binary("y").unwrap();
        let r = m
            .add_constraint("c", vec![(x, int(1)), (y, int(2)), (x, int(1))], Sense::Ge, int(3))
            .unwrap();
        assert_eq!(m.constraints()[r].coefs, vec![(x, int(2)), (y, int(2))]);
        assert!(m.is_feasible(&[1, 1]));
        assert!(!m.is_feasible(&[1, 0]));
        assert!(m.add_binary("x").is_err());
        assert!(m.add_var("z", VarKind::Binary, 0, 2).is_err());
        assert!(m.add_integer("w", 3, 2).is_err());
        assert!(m.add_constraint("bad", vec![(9, int(1))], Sense::Le, int(0)).is_err());
    }

    #[test]
    fn half_coefficients_are_exact() {
        let mut m = IpModel::new();
        let a = m.add_integer("a", 0, 10).unwrap();
        m.add_constraint("half", vec![(a, Rat::new(1, 2))], Sense::Ge, int(1))
            .unwrap();
        assert!(!m.is_feasible(&[1]));
        assert!(m.is_feasible(&[2]));
    }
}

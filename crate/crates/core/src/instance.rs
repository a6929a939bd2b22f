//! Instance data model, validation and file I/O.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::horizon::{Horizon, PeriodVector};
use crate::patterns::{Family, PatternError, PatternRuleSet, PatternSet, ShiftPattern};

pub type TaskId = u32;

#[derive(Debug, Error)]
pub enum InstanceError {
    #[error("malformed instance JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("malformed demand CSV: {0}")]
    Csv(String),
    #[error("task {task} starts at {start}, outside its window [{l}, {u}]")]
    StartOutsideWindow {
        task: TaskId,
        start: usize,
        l: usize,
        u: usize,
    },
    #[error("no start given for task {0}")]
    MissingStart(TaskId),
    #[error(transparent)]
    Pattern(#[from] PatternError),
    #[error("pattern set uses {patterns}-minute TPs but the horizon uses {horizon}")]
    OmegaMismatch { patterns: u32, horizon: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Task {
    pub id: TaskId,
    /// Admissible start TPs `[l, u]`.
    pub window: [usize; 2],
    pub duration: usize,
    /// Workers needed in each TP of the task.
    pub resource: Vec<u32>,
}

impl Task {
    pub fn earliest(&self) -> usize {
        self.window[0]
    }

    pub fn latest(&self) -> usize {
        self.window[1]
    }

    /// Worker-TPs of the task.
    pub fn work(&self) -> u64 {
        self.resource.iter().map(|&r| u64::from(r)).sum()
    }
}

/// Shift cost `c_ij`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CostModel {
    /// Every schedule costs 1.
    Uniform,
    /// Cost by pattern length in TPs; lengths missing from the table cost
    /// their length.
    PerDuration {
        #[serde(default)]
        table: BTreeMap<usize, i64>,
    },
    /// Explicit `[pattern_id, start, cost]` entries (1-based pattern ids);
    /// unlisted schedules cost `default`.
    PerSchedule {
        entries: Vec<[i64; 3]>,
        #[serde(default = "one_i64")]
        default: i64,
    },
}

fn one_i64() -> i64 {
    1
}

impl Default for CostModel {
    fn default() -> Self {
        CostModel::PerDuration {
            table: BTreeMap::new(),
        }
    }
}

impl CostModel {
    /// Cost of pattern `pattern` (0-based) of length `len` started at `start`.
    pub fn cost(&self, pattern: usize, len: usize, start: usize) -> i64 {
        match self {
            CostModel::Uniform => 1,
            CostModel::PerDuration { table } => table.get(&len).copied().unwrap_or(len as i64),
            CostModel::PerSchedule { entries, default } => entries
                .iter()
                .find(|e| e[0] == pattern as i64 + 1 && e[1] == start as i64)
                .map_or(*default, |e| e[2]),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum DaysOff {
    #[default]
    None,
    /// One block of two consecutive days off per week.
    TwoConsecutive,
    /// Two days off per week, not necessarily consecutive.
    TwoAny,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum OverlapMode {
    Linear,
    #[default]
    Cyclic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LoadKind {
    Shifts,
    Hours,
}

/// Per-worker rules for the assignment stage.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stage2Policy {
    /// At most `b` shifts per worker.
    #[serde(default)]
    pub max_shifts: Option<usize>,
    /// Minimum TPs between the end of one shift and the start of the next.
    #[serde(default)]
    pub rest_gap: usize,
    /// At most `H` working TPs per worker (pattern lengths, breaks included).
    #[serde(default)]
    pub max_hours: Option<usize>,
    #[serde(default)]
    pub days_off: DaysOff,
    #[serde(default)]
    pub max_workers: Option<usize>,
    /// Which load cap drives the worker lower bound; defaults to shifts
    /// when `max_shifts` is set.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub load_kind: Option<LoadKind>,
    #[serde(default)]
    pub overlap: OverlapMode,
}

impl Default for Stage2Policy {
    fn default() -> Self {
        Self {
            max_shifts: Some(5),
            rest_gap: 0,
            max_hours: None,
            days_off: DaysOff::None,
            max_workers: None,
            load_kind: None,
            overlap: OverlapMode::Cyclic,
        }
    }
}

impl Stage2Policy {
    pub fn effective_load_kind(&self) -> Option<LoadKind> {
        self.load_kind.or(if self.max_shifts.is_some() {
            Some(LoadKind::Shifts)
        } else if self.max_hours.is_some() {
            Some(LoadKind::Hours)
        } else {
            None
        })
    }
}

fn default_family() -> String {
    "FX29".to_string()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Instance {
    pub horizon: Horizon,
    #[serde(default)]
    pub tasks: Vec<Task>,
    #[serde(default)]
    pub precedence: Vec<[TaskId; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fixed_demand: Option<Vec<u32>>,
    #[serde(default = "default_family")]
    pub pattern_family: String,
    /// Explicit patterns; used when `pattern_family` is `CUSTOM`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub patterns: Option<Vec<ShiftPattern>>,
    /// Rule sets generating the patterns when `pattern_family` is `CUSTOM`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pattern_rules: Option<Vec<PatternRuleSet>>,
    #[serde(default)]
    pub costs: CostModel,
    #[serde(default)]
    pub policy: Stage2Policy,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    BadHorizon,
    WindowInverted,
    WindowOutOfRange,
    BadDuration,
    ResourceLength,
    ZeroResource,
    DuplicateTaskId,
    UnknownTask,
    SelfPrecedence,
    PrecedenceCycle,
    PrecedenceInfeasible,
    FixedDemandLength,
    NoDemand,
    PatternFamily,
    Policy,
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ViolationKind::BadHorizon => "bad horizon",
            ViolationKind::WindowInverted => "window inverted",
            ViolationKind::WindowOutOfRange => "window out of range",
            ViolationKind::BadDuration => "bad duration",
            ViolationKind::ResourceLength => "resource length mismatch",
            ViolationKind::ZeroResource => "zero resource",
            ViolationKind::DuplicateTaskId => "duplicate task id",
            ViolationKind::UnknownTask => "unknown task",
            ViolationKind::SelfPrecedence => "self precedence",
            ViolationKind::PrecedenceCycle => "precedence cycle",
            ViolationKind::PrecedenceInfeasible => "precedence infeasible",
            ViolationKind::FixedDemandLength => "fixed demand length",
            ViolationKind::NoDemand => "no demand",
            ViolationKind::PatternFamily => "pattern family",
            ViolationKind::Policy => "policy",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub kind: ViolationKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub task: Option<TaskId>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tp: Option<usize>,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.kind, self.message)
    }
}

impl Instance {
    /// A pure staff-scheduling instance: fixed demand, no tasks.
    pub fn from_demand(horizon: Horizon, demand: Vec<u32>, family: &str) -> Self {
        Self {
            horizon,
            tasks: Vec::new(),
            precedence: Vec::new(),
            fixed_demand: Some(demand),
            pattern_family: family.to_string(),
            patterns: None,
            pattern_rules: None,
            costs: CostModel::default(),
            policy: Stage2Policy::default(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self, InstanceError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instances always serialize")
    }

    /// Reads a demand-only instance from a CSV of `T` non-negative integers
    /// (comma, whitespace or newline separated; `#` starts a comment).
    /// `omega` defaults to 30 for 336 values and 15 for 672 values.
    pub fn from_demand_csv(
        text: &str,
        omega: Option<u32>,
        family: &str,
    ) -> Result<Self, InstanceError> {
        let demand = parse_demand_csv(text)?;
        let omega = match (omega, demand.len()) {
            (Some(o), _) => o,
            (None, 336) => 30,
            (None, 672) => 15,
            (None, n) => {
                return Err(InstanceError::Csv(format!(
                    "cannot infer the TP length for {n} values"
                )))
            }
        };
        let horizon = Horizon::new(demand.len(), omega)
            .map_err(|e| InstanceError::Csv(e.to_string()))?;
        Ok(Self::from_demand(horizon, demand, family))
    }

    pub fn task(&self, id: TaskId) -> Option<&Task> {
        self.tasks.iter().find(|t| t.id == id)
    }

    pub fn fixed_demand_vector(&self) -> Option<PeriodVector> {
        self.fixed_demand.as_ref().map(|d| {
            PeriodVector::from_integers(&d.iter().map(|&v| i64::from(v)).collect::<Vec<_>>())
        })
    }

    /// Resolves the pattern family, checking that its TP length matches
    /// the horizon.
    pub fn pattern_set(&self) -> Result<PatternSet, InstanceError> {
        let family = Family::parse(&self.pattern_family)?;
        let set = match family {
            Family::Custom => {
                if let Some(p) = &self.patterns {
                    PatternSet {
                        family: "CUSTOM".into(),
                        omega: self.horizon.omega,
                        patterns: p.clone(),
                        start_window: None,
                    }
                } else if let Some(r) = &self.pattern_rules {
                    PatternSet {
                        family: "CUSTOM".into(),
                        omega: r.first().map_or(self.horizon.omega, |r| r.omega),
                        patterns: crate::patterns::generate_family(Family::Custom, Some(r))?,
                        start_window: r.iter().find_map(|r| r.start_window),
                    }
                } else {
                    return Err(PatternError::MissingRules("CUSTOM".into()).into());
                }
            }
            f => PatternSet::preset(f)?,
        };
        if set.omega != self.horizon.omega {
            return Err(InstanceError::OmegaMismatch {
                patterns: set.omega,
                horizon: self.horizon.omega,
            });
        }
        Ok(set)
    }

    /// Total demand in worker-hours. Independent of the task starts.
    pub fn total_demand_hours(&self) -> f64 {
        let tasks: u64 = self.tasks.iter().map(Task::work).sum();
        let fixed: u64 = self
            .fixed_demand
            .as_ref()
            .map_or(0, |d| d.iter().map(|&v| u64::from(v)).sum());
        (tasks + fixed) as f64 * self.horizon.hours_per_period()
    }

    /// Task ids in an order compatible with the precedence pairs, or `None`
    /// if the pairs contain a cycle.
    pub fn topological_order(&self) -> Option<Vec<TaskId>> {
        let ids: BTreeSet<TaskId> = self.tasks.iter().map(|t| t.id).collect();
        let mut indeg: BTreeMap<TaskId, usize> = ids.iter().map(|&i| (i, 0)).collect();
        let mut succ: BTreeMap<TaskId, Vec<TaskId>> = BTreeMap::new();
        for &[a, b] in &self.precedence {
            if ids.contains(&a) && ids.contains(&b) {
                succ.entry(a).or_default().push(b);
                *indeg.get_mut(&b).unwrap() += 1;
            }
        }
        let mut ready: BTreeSet<TaskId> =
            indeg.iter().filter(|(_, &d)| d == 0).map(|(&i, _)| i).collect();
        let mut order = Vec::with_capacity(ids.len());
        while let Some(i) = ready.pop_first() {
            order.push(i);
            for &j in succ.get(&i).map(Vec::as_slice).unwrap_or(&[]) {
                let d = indeg.get_mut(&j).unwrap();
                *d -= 1;
                if *d == 0 {
                    ready.insert(j);
                }
            }
        }
        (order.len() == ids.len()).then_some(order)
    }
}

fn parse_demand_csv(text: &str) -> Result<Vec<u32>, InstanceError> {
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("");
        for tok in line.split(|c: char| c == ',' || c == ';' || c.is_whitespace()) {
            if tok.is_empty() {
                continue;
            }
            let v = tok.parse::<u32>().map_err(|_| {
                InstanceError::Csv(format!("line {}: {tok:?} is not a non-negative integer", lineno + 1))
            })?;
            out.push(v);
        }
    }
    if out.is_empty() {
        return Err(InstanceError::Csv("no values".into()));
    }
    Ok(out)
}

fn violation(kind: ViolationKind, task: Option<TaskId>, tp: Option<usize>, message: String) -> Violation {
    Violation {
        kind,
        task,
        tp,
        message,
    }
}

/// All schema and invariant violations of an instance; empty means valid.
pub fn validate(inst: &Instance) -> Vec<Violation> {
    use ViolationKind as V;
    let mut out = Vec::new();
    if let Err(e) = Horizon::new(inst.horizon.periods, inst.horizon.omega) {
        out.push(violation(V::BadHorizon, None, None, e.to_string()));
        return out;
    }
    let t = inst.horizon.periods;

    let mut seen = BTreeSet::new();
    for task in &inst.tasks {
        let id = Some(task.id);
        if !seen.insert(task.id) {
            out.push(violation(V::DuplicateTaskId, id, None, format!("task id {} repeats", task.id)));
        }
        let [l, u] = task.window;
        if l > u {
            out.push(violation(
                V::WindowInverted,
                id,
                Some(l),
                format!("task {} has window [{l}, {u}]", task.id),
            ));
        }
        if l < 1 || u > t || l > t {
            out.push(violation(
                V::WindowOutOfRange,
                id,
                Some(if l < 1 { l } else { u }),
                format!("task {} window [{l}, {u}] outside [1, {t}]", task.id),
            ));
        }
        if task.duration == 0 || task.duration > t {
            out.push(violation(
                V::BadDuration,
                id,
                None,
                format!("task {} has duration {}", task.id, task.duration),
            ));
        }
        if task.resource.len() != task.duration {
            out.push(violation(
                V::ResourceLength,
                id,
                None,
                format!(
                    "task {} has {} resource entries for duration {}",
                    task.id,
                    task.resource.len(),
                    task.duration
                ),
            ));
        }
        if task.resource.iter().all(|&r| r == 0) {
            out.push(violation(
                V::ZeroResource,
                id,
                None,
                format!("task {} needs no workers", task.id),
            ));
        }
    }

    let mut pairs_ok = true;
    for &[a, b] in &inst.precedence {
        for x in [a, b] {
            if !seen.contains(&x) {
                pairs_ok = false;
                out.push(violation(
                    V::UnknownTask,
                    Some(x),
                    None,
                    format!("precedence pair ({a}, {b}) names unknown task {x}"),
                ));
            }
        }
        if a == b {
            pairs_ok = false;
            out.push(violation(V::SelfPrecedence, Some(a), None, format!("task {a} precedes itself")));
        }
    }
    if pairs_ok {
        if inst.topological_order().is_none() {
            out.push(violation(
                V::PrecedenceCycle,
                None,
                None,
                "precedence pairs contain a cycle".into(),
            ));
        } else if out.is_empty() {
            out.extend(precedence_window_check(inst));
        }
    }

    match &inst.fixed_demand {
        Some(d) if d.len() != t => out.push(violation(
            V::FixedDemandLength,
            None,
            None,
            format!("fixed demand has {} entries for T = {t}", d.len()),
        )),
        None if inst.tasks.is_empty() => out.push(violation(
            V::NoDemand,
            None,
            None,
            "an instance without tasks needs a fixed demand vector".into(),
        )),
        _ => {}
    }

    if let Err(e) = inst.pattern_set() {
        out.push(violation(V::PatternFamily, None, None, e.to_string()));
    }

    let p = &inst.policy;
    if p.max_shifts.is_none() && p.max_hours.is_none() {
        out.push(violation(
            V::Policy,
            None,
            None,
            "policy needs max_shifts or max_hours".into(),
        ));
    }
    if p.max_shifts == Some(0) || p.max_hours == Some(0) || p.max_workers == Some(0) {
        out.push(violation(V::Policy, None, None, "policy caps must be positive".into()));
    }
    if p.days_off != DaysOff::None && inst.horizon.days() < 2 {
        out.push(violation(
            V::Policy,
            None,
            None,
            "days off need a horizon of at least two days".into(),
        ));
    }
    out
}

/// Earliest/latest start propagation along precedence pairs; a task whose
/// propagated interval is empty cannot be scheduled.
fn precedence_window_check(inst: &Instance) -> Vec<Violation> {
    let Some(order) = inst.topological_order() else {
        return Vec::new();
    };
    let idx: BTreeMap<TaskId, &Task> = inst.tasks.iter().map(|t| (t.id, t)).collect();
    let mut es: BTreeMap<TaskId, usize> = idx.iter().map(|(&i, t)| (i, t.earliest())).collect();
    let mut ls: BTreeMap<TaskId, usize> = idx.iter().map(|(&i, t)| (i, t.latest())).collect();
    for &k in &order {
        for &[a, b] in &inst.precedence {
            if a == k {
                let need = es[&a] + idx[&a].duration - 1;
                let e = es.get_mut(&b).unwrap();
                *e = (*e).max(need);
            }
        }
    }
    for &k in order.iter().rev() {
        for &[a, b] in &inst.precedence {
            if b == k {
                let cap = ls[&b] as i64 - idx[&a].duration as i64 + 1;
                let l = ls.get_mut(&a).unwrap();
                *l = (*l as i64).min(cap).max(0) as usize;
            }
        }
    }
    order
        .iter()
        .filter(|k| es[k] > ls[k])
        .map(|&k| {
            violation(
                ViolationKind::PrecedenceInfeasible,
                Some(k),
                None,
                format!(
                    "task {k} cannot start: precedence forces a start in [{}, {}]",
                    es[&k], ls[&k]
                ),
            )
        })
        .collect()
}

/// Demand induced by the given task starts plus any fixed demand.
pub fn induced_demand(
    inst: &Instance,
    starts: &BTreeMap<TaskId, usize>,
) -> Result<PeriodVector, InstanceError> {
    let h = &inst.horizon;
    let mut v = inst.fixed_demand_vector().unwrap_or_else(|| h.zeros());
    for task in &inst.tasks {
        let &start = starts.get(&task.id).ok_or(InstanceError::MissingStart(task.id))?;
        if start < task.earliest() || start > task.latest() {
            return Err(InstanceError::StartOutsideWindow {
                task: task.id,
                start,
                l: task.earliest(),
                u: task.latest(),
            });
        }
        add_task_demand(&mut v, task, start, h);
    }
    Ok(v)
}

pub(crate) fn add_task_demand(v: &mut PeriodVector, task: &Task, start: usize, h: &Horizon) {
    for (i, &r) in task.resource.iter().enumerate() {
        if let Some(j) = h.place(start as i64 + i as i64) {
            v.add_halves_at(j, 2 * i64::from(r));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn task(id: TaskId, l: usize, u: usize, resource: Vec<u32>) -> Task {
        Task {
            id,
            window: [l, u],
            duration: resource.len(),
            resource,
        }
    }

    fn inst(t: usize, tasks: Vec<Task>, precedence: Vec<[TaskId; 2]>) -> Instance {
        Instance {
            horizon: Horizon::new(t, 30).unwrap(),
            tasks,
            precedence,
            fixed_demand: None,
            pattern_family: "CUSTOM".into(),
            patterns: Some(vec![ShiftPattern::from_values(&[1.0, 1.0]).unwrap()]),
            pattern_rules: None,
            costs: CostModel::Uniform,
            policy: Stage2Policy::default(),
        }
    }

    #[test]
    fn induced_demand_wraps() {
        let i = inst(4, vec![task(1, 1, 4, vec![1, 3])], vec![]);
        let starts = BTreeMap::from([(1, 4)]);
        assert_eq!(
            induced_demand(&i, &starts).unwrap(),
            PeriodVector::from_integers(&[3, 0, 0, 1])
        );
    }

    #[test]
    fn induced_demand_is_linear() {
        let one = inst(6, vec![task(1, 2, 3, vec![2, 1, 1])], vec![]);
        let two = inst(
            6,
            vec![task(1, 2, 3, vec![2, 1, 1]), task(2, 2, 3, vec![2, 1, 1])],
            vec![],
        );
        let a = induced_demand(&one, &BTreeMap::from([(1, 3)])).unwrap();
        let b = induced_demand(&two, &BTreeMap::from([(1, 3), (2, 3)])).unwrap();
        let doubled: Vec<i64> = a.halves().iter().map(|h| 2 * h).collect();
        assert_eq!(b.halves(), &doubled[..]);
    }

    #[test]
    fn start_outside_window_is_error() {
        let i = inst(8, vec![task(1, 2, 3, vec![1])], vec![]);
        assert!(matches!(
            induced_demand(&i, &BTreeMap::from([(1, 5)])),
            Err(InstanceError::StartOutsideWindow { .. })
        ));
    }

    #[test]
    fn validation_reports_inverted_window() {
        let i = inst(20, vec![task(1, 10, 5, vec![1])], vec![]);
        let v = validate(&i);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].kind, ViolationKind::WindowInverted);
        assert_eq!(v[0].kind.to_string(), "window inverted");
    }

    #[test]
    fn validation_reports_cycle() {
        let i = inst(
            20,
            vec![task(1, 1, 5, vec![1]), task(2, 1, 5, vec![1])],
            vec![[1, 2], [2, 1]],
        );
        let v = validate(&i);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].kind, ViolationKind::PrecedenceCycle);
    }

    #[test]
    fn validation_reports_unschedulable_chain() {
        let i = inst(
            20,
            vec![task(1, 5, 6, vec![1, 1, 1]), task(2, 1, 7, vec![1])],
            vec![[1, 2]],
        );
        // the successor may start in the predecessor's last TP
        assert!(validate(&i).is_empty());
        let mut j = i.clone();
        j.tasks[1].window = [1, 6];
        let v = validate(&j);
        assert!(!v.is_empty());
        assert!(v.iter().all(|x| x.kind == ViolationKind::PrecedenceInfeasible));
        assert!(v.iter().any(|x| x.task == Some(2)));
    }

    #[test]
    fn no_tasks_needs_fixed_demand() {
        let mut i = inst(4, vec![], vec![]);
        assert_eq!(validate(&i)[0].kind, ViolationKind::NoDemand);
        i.fixed_demand = Some(vec![1, 1, 0, 0]);
        assert!(validate(&i).is_empty());
        i.fixed_demand = Some(vec![1]);
        assert_eq!(validate(&i)[0].kind, ViolationKind::FixedDemandLength);
    }

    #[test]
    fn omega_mismatch_is_reported() {
        let mut i = Instance::from_demand(Horizon::new(4, 15).unwrap(), vec![1; 4], "FX260");
        assert_eq!(validate(&i)[0].kind, ViolationKind::PatternFamily);
        i.pattern_family = "FX29".into();
        assert!(validate(&i).is_empty());
    }

    #[test]
    fn csv_parsing() {
        let i = Instance::from_demand_csv("# demand\n1,2,3\n4 5\n", Some(30), "FL15").unwrap();
        assert_eq!(i.fixed_demand, Some(vec![1, 2, 3, 4, 5]));
        assert_eq!(i.horizon.periods, 5);
        assert!(Instance::from_demand_csv("1,x", Some(30), "FL15").is_err());
        assert!(Instance::from_demand_csv("1,2,3", None, "FL15").is_err());
        assert!(Instance::from_demand_csv("", Some(30), "FL15").is_err());
        let week = vec!["1"; 672].join(",");
        assert_eq!(
            Instance::from_demand_csv(&week, None, "FX29").unwrap().horizon.omega,
            15
        );
    }

    #[test]
    fn json_roundtrip_and_defaults() {
        let text = r#"{"horizon":{"T":4,"omega":30},"tasks":[{"id":1,"window":[1,2],"duration":2,"resource":[1,1]}],
            "pattern_family":"CUSTOM","patterns":[{"cells":[1,1]}],"costs":{"kind":"uniform"},
            "policy":{"max_shifts":2,"rest_gap":0,"days_off":"none"}}"#;
        let i = Instance::from_json(text).unwrap();
        assert!(validate(&i).is_empty());
        assert_eq!(i.policy.overlap, OverlapMode::Cyclic);
        let back = Instance::from_json(&i.to_json()).unwrap();
        assert_eq!(back, i);
    }

    #[test]
    fn cost_models() {
        assert_eq!(CostModel::Uniform.cost(3, 18, 7), 1);
        assert_eq!(CostModel::default().cost(0, 18, 7), 18);
        let table = CostModel::PerDuration {
            table: BTreeMap::from([(18, 5)]),
        };
        assert_eq!(table.cost(0, 18, 1), 5);
        assert_eq!(table.cost(0, 12, 1), 12);
        let m = CostModel::PerSchedule {
            entries: vec![[1, 4, 9]],
            default: 2,
        };
        assert_eq!(m.cost(0, 5, 4), 9);
        assert_eq!(m.cost(0, 5, 3), 2);
    }

    #[test]
    fn total_demand_is_start_independent() {
        let i = inst(8, vec![task(1, 1, 8, vec![2, 1]), task(2, 3, 4, vec![1])], vec![]);
        let mut totals = BTreeSet::new();
        for s1 in 1..=8 {
            for s2 in 3..=4 {
                let d = induced_demand(&i, &BTreeMap::from([(1, s1), (2, s2)])).unwrap();
                totals.insert(d.total_halves());
            }
        }
        assert_eq!(totals.len(), 1);
        assert_eq!(i.total_demand_hours(), 2.0);
    }
}

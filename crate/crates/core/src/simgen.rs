//! Random integrated shift-and-task instances on a 15-minute week.
//!
//! Three task types are generated: day-long tasks (long, low resource
//! level), peak tasks (short, high level) and precedence chains. The mix
//! fixes each type's share of the total demand, measured either in
//! worker-hours or in number of tasks. All knob defaults are artifact
//! choices; they reproduce the aggregate sizes and shares, nothing finer.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::horizon::Horizon;
use crate::instance::{self, CostModel, Instance, Stage2Policy, Task, TaskId};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("mix percentages sum to {0}, expected 100")]
    BadMix(u32),
    #[error("invalid knob: {0}")]
    BadKnob(String),
    #[error("scale must lie in (0, 1], got {0}")]
    BadScale(f64),
    #[error("could not build a valid instance: {0}")]
    Generation(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Size {
    Small,
    Medium,
    Large,
}

impl Size {
    pub fn target_hours(self) -> f64 {
        match self {
            Size::Small => 600.0,
            Size::Medium => 1000.0,
            Size::Large => 1400.0,
        }
    }

    pub fn parse(s: &str) -> Option<Size> {
        match s.to_ascii_lowercase().as_str() {
            "small" => Some(Size::Small),
            "medium" => Some(Size::Medium),
            "large" => Some(Size::Large),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WindowMode {
    /// Windows gather around a few daily anchor times.
    Clustered,
    /// Window positions drawn uniformly over the week.
    Uniform,
}

/// What the mix percentages are shares of.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Accounting {
    Hours,
    Tasks,
}

/// Percentages of (day-long, peak, precedence).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mix(pub [u32; 3]);

impl Mix {
    pub const S1: Mix = Mix([81, 17, 2]);
    pub const S2: Mix = Mix([79, 17, 4]);
    pub const S3: Mix = Mix([72, 16, 12]);

    /// `S1`..`S6`; the last three repeat the first three's shares and are
    /// meant for uniform windows.
    pub fn named(name: &str) -> Option<(Mix, WindowMode)> {
        Some(match name.to_ascii_uppercase().as_str() {
            "S1" => (Mix::S1, WindowMode::Clustered),
            "S2" => (Mix::S2, WindowMode::Clustered),
            "S3" => (Mix::S3, WindowMode::Clustered),
            "S4" => (Mix::S1, WindowMode::Uniform),
            "S5" => (Mix::S2, WindowMode::Uniform),
            "S6" => (Mix::S3, WindowMode::Uniform),
            _ => return None,
        })
    }
}

/// Inclusive integer range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Span {
    pub min: usize,
    pub max: usize,
}

impl Span {
    pub const fn new(min: usize, max: usize) -> Self {
        Self { min, max }
    }

    fn draw(self, rng: &mut ChaCha8Rng) -> usize {
        rng.gen_range(self.min..=self.max)
    }

    fn check(self, what: &str) -> Result<(), SimError> {
        if self.min > self.max {
            return Err(SimError::BadKnob(format!("{what}: min {} > max {}", self.min, self.max)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Knobs {
    pub day_long_duration: Span,
    pub day_long_level: Span,
    pub peak_duration: Span,
    pub peak_level: Span,
    pub chain_length: Span,
    pub chain_task_duration: Span,
    pub chain_level: Span,
    /// `u - l` of a start window.
    pub window_width: Span,
    /// Extra slack a chain successor's window gets beyond its predecessor.
    pub chain_slack: Span,
    /// Anchor times of day (TP within the day, 1-based) for clustered
    /// windows.
    pub day_long_anchors: Vec<usize>,
    pub peak_anchors: Vec<usize>,
    /// Random shift of a clustered window around its anchor, in TPs.
    pub anchor_jitter: usize,
    pub policy: Stage2Policy,
}

impl Default for Knobs {
    fn default() -> Self {
        Self {
            day_long_duration: Span::new(24, 36),
            day_long_level: Span::new(1, 2),
            peak_duration: Span::new(4, 12),
            peak_level: Span::new(2, 4),
            chain_length: Span::new(2, 4),
            chain_task_duration: Span::new(4, 12),
            chain_level: Span::new(1, 3),
            window_width: Span::new(0, 8),
            chain_slack: Span::new(0, 4),
            // 06:00, 14:00 and 22:00 shifts; 08:00, 12:00 and 17:00 peaks
            day_long_anchors: vec![25, 57, 89],
            peak_anchors: vec![33, 49, 69],
            anchor_jitter: 4,
            policy: Stage2Policy {
                rest_gap: 32,
                ..Stage2Policy::default()
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub target_hours: f64,
    pub mix: Mix,
    pub accounting: Accounting,
    pub window_mode: WindowMode,
    pub seed: u64,
    pub knobs: Knobs,
}

impl SimConfig {
    pub fn new(size: Size, mix: Mix, window_mode: WindowMode, seed: u64) -> Self {
        Self {
            target_hours: size.target_hours(),
            mix,
            accounting: Accounting::Hours,
            window_mode,
            seed,
            knobs: Knobs::default(),
        }
    }

    fn check(&self) -> Result<(), SimError> {
        let total: u32 = self.mix.0.iter().sum();
        if total != 100 {
            return Err(SimError::BadMix(total));
        }
        if !(self.target_hours > 0.0 && self.target_hours.is_finite()) {
            return Err(SimError::BadKnob(format!("target hours {}", self.target_hours)));
        }
        let k = &self.knobs;
        for (s, name) in [
            (k.day_long_duration, "day-long duration"),
            (k.day_long_level, "day-long level"),
            (k.peak_duration, "peak duration"),
            (k.peak_level, "peak level"),
            (k.chain_length, "chain length"),
            (k.chain_task_duration, "chain task duration"),
            (k.chain_level, "chain level"),
            (k.window_width, "window width"),
            (k.chain_slack, "chain slack"),
        ] {
            s.check(name)?;
        }
        for (s, name) in [
            (k.day_long_duration, "day-long duration"),
            (k.peak_duration, "peak duration"),
            (k.chain_task_duration, "chain task duration"),
            (k.day_long_level, "day-long level"),
            (k.peak_level, "peak level"),
            (k.chain_level, "chain level"),
            (k.chain_length, "chain length"),
        ] {
            if s.min == 0 {
                return Err(SimError::BadKnob(format!("{name} must be positive")));
            }
        }
        let chain_span = k.chain_length.max * (k.chain_task_duration.max + k.chain_slack.max)
            + k.window_width.max;
        if k.day_long_duration.max > T || k.peak_duration.max > T || chain_span >= T {
            return Err(SimError::BadKnob("durations do not fit the week".into()));
        }
        if k.day_long_anchors.iter().chain(&k.peak_anchors).any(|&a| a == 0 || a > PPD) {
            return Err(SimError::BadKnob("anchors must lie in 1..=96".into()));
        }
        if self.window_mode == WindowMode::Clustered
            && (k.day_long_anchors.is_empty() || k.peak_anchors.is_empty())
        {
            return Err(SimError::BadKnob("clustered windows need anchors".into()));
        }
        Ok(())
    }
}

const T: usize = 672;
const PPD: usize = 96;
const OMEGA: u32 = 15;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    DayLong,
    Peak,
    Chain,
}

struct Builder<'a> {
    cfg: &'a SimConfig,
    rng: ChaCha8Rng,
    tasks: Vec<Task>,
    precedence: Vec<[TaskId; 2]>,
}

impl Builder<'_> {
    fn next_id(&self) -> TaskId {
        self.tasks.len() as TaskId + 1
    }

    /// Window `[l, l + width]` kept inside the week.
    fn window(&mut self, kind: Kind) -> [usize; 2] {
        let k = &self.cfg.knobs;
        let width = k.window_width.draw(&mut self.rng);
        let l = match self.cfg.window_mode {
            WindowMode::Uniform => self.rng.gen_range(1..=T - width),
            WindowMode::Clustered => {
                let anchors = if kind == Kind::Peak {
                    &k.peak_anchors
                } else {
                    &k.day_long_anchors
                };
                let a = *anchors.choose(&mut self.rng).expect("checked non-empty");
                let day = self.rng.gen_range(0..T / PPD);
                let j = self.rng.gen_range(0..=2 * k.anchor_jitter) as i64 - k.anchor_jitter as i64;
                let l = (day * PPD + a) as i64 + j - (width / 2) as i64;
                l.clamp(1, (T - width) as i64) as usize
            }
        };
        [l, l + width]
    }

    /// Adds one task of `kind` whose work is at most `cap` worker-TPs when a
    /// cap is given; returns the worker-TPs added.
    fn single(&mut self, kind: Kind, cap: Option<u64>) -> u64 {
        let k = &self.cfg.knobs;
        let (dur, lvl) = match kind {
            Kind::DayLong => (k.day_long_duration, k.day_long_level),
            _ => (k.peak_duration, k.peak_level),
        };
        let mut d = dur.draw(&mut self.rng);
        let r = lvl.draw(&mut self.rng);
        if let Some(cap) = cap {
            d = d.min((cap / r as u64).max(1) as usize);
        }
        let window = self.window(kind);
        let id = self.next_id();
        self.tasks.push(Task {
            id,
            window,
            duration: d,
            resource: vec![r as u32; d],
        });
        (d * r) as u64
    }

    /// Adds one precedence chain; successor windows start where the
    /// predecessor can finish at the earliest, so starting every task at
    /// its earliest TP is feasible.
    fn chain(&mut self, cap: Option<u64>) -> u64 {
        let k = self.cfg.knobs.clone();
        let n = k.chain_length.draw(&mut self.rng);
        let durations: Vec<usize> = (0..n).map(|_| k.chain_task_duration.draw(&mut self.rng)).collect();
        let levels: Vec<usize> = (0..n).map(|_| k.chain_level.draw(&mut self.rng)).collect();
        let slacks: Vec<usize> = (0..n).map(|_| k.chain_slack.draw(&mut self.rng)).collect();
        let mut durations = durations;
        if let Some(cap) = cap {
            // shrink the tail tasks until the chain fits the cap
            let mut work: u64 = durations.iter().zip(&levels).map(|(d, r)| (d * r) as u64).sum();
            for i in (0..n).rev() {
                while work > cap && durations[i] > 1 {
                    durations[i] -= 1;
                    work -= levels[i] as u64;
                }
            }
        }
        let [l0, u0] = self.window(Kind::Chain);
        let width = u0 - l0;
        let reach: usize = durations[..n - 1].iter().zip(&slacks[1..]).map(|(d, s)| d - 1 + s).sum();
        let l0 = l0.min(T - width - reach);
        let mut l = l0;
        let mut added = 0;
        let mut prev: Option<TaskId> = None;
        for i in 0..n {
            if i > 0 {
                l += durations[i - 1] - 1 + slacks[i];
            }
            let id = self.next_id();
            self.tasks.push(Task {
                id,
                window: [l, l + width],
                duration: durations[i],
                resource: vec![levels[i] as u32; durations[i]],
            });
            if let Some(p) = prev {
                self.precedence.push([p, id]);
            }
            prev = Some(id);
            added += (durations[i] * levels[i]) as u64;
        }
        added
    }

    fn add(&mut self, kind: Kind, cap: Option<u64>) -> u64 {
        match kind {
            Kind::Chain => self.chain(cap),
            _ => self.single(kind, cap),
        }
    }
}

const KINDS: [Kind; 3] = [Kind::DayLong, Kind::Peak, Kind::Chain];

/// Generates an instance; the same config always gives the same instance.
pub fn simulate(cfg: &SimConfig) -> Result<Instance, SimError> {
    simulate_detailed(cfg).map(|(inst, _)| inst)
}

/// Like [`simulate`], also returning the worker-hours generated for each
/// task type (day-long, peak, precedence).
pub fn simulate_detailed(cfg: &SimConfig) -> Result<(Instance, [f64; 3]), SimError> {
    cfg.check()?;
    let mut by_kind = [0u64; 3];
    let mut b = Builder {
        cfg,
        rng: ChaCha8Rng::seed_from_u64(cfg.seed),
        tasks: Vec::new(),
        precedence: Vec::new(),
    };
    // worker-TPs per worker-hour
    let per_hour = 60.0 / f64::from(OMEGA);
    let target = (cfg.target_hours * per_hour).round() as u64;
    match cfg.accounting {
        Accounting::Hours => {
            for (t, kind) in KINDS.into_iter().enumerate() {
                let budget = target * u64::from(cfg.mix.0[t]) / 100;
                let mut got = 0;
                while got < budget {
                    got += b.add(kind, Some(budget - got));
                }
                by_kind[t] = got;
            }
        }
        Accounting::Tasks => {
            let mut counts = [0u64; 3];
            let mut got = 0;
            while got < target {
                // the type furthest below its share of the task count
                let n = counts.iter().sum::<u64>() + 1;
                let t = (0..3)
                    .filter(|&t| cfg.mix.0[t] > 0)
                    .max_by_key(|&t| (n * u64::from(cfg.mix.0[t])) as i64 - 100 * counts[t] as i64)
                    .expect("mix sums to 100");
                let w = b.add(KINDS[t], Some(target - got));
                got += w;
                by_kind[t] += w;
                counts[t] += 1;
            }
        }
    }
    let inst = Instance {
        horizon: Horizon::weekly(OMEGA).map_err(|e| SimError::Generation(e.to_string()))?,
        tasks: b.tasks,
        precedence: b.precedence,
        fixed_demand: None,
        pattern_family: "FX29".into(),
        patterns: None,
        pattern_rules: None,
        costs: CostModel::default(),
        policy: cfg.knobs.policy.clone(),
    };
    let v = instance::validate(&inst);
    if let Some(first) = v.first() {
        return Err(SimError::Generation(first.to_string()));
    }
    Ok((inst, by_kind.map(|w| w as f64 / per_hour)))
}

/// An instance shaped like a medical emergency desk: `floor(588 * scale)`
/// tasks on the 15-minute week, about a fifth of them in precedence
/// chains, start windows of non-chain tasks at most 4 TPs wide and a
/// total demand of about `3736 * scale` worker-hours.
/// Total demand of the live emergency data, in worker-hours.
pub const EMERGENCY_HOURS: f64 = 3736.0;

pub fn emergency_like(scale: f64) -> Result<Instance, SimError> {
    emergency_like_seeded(scale, 0)
}

pub fn emergency_like_seeded(scale: f64, seed: u64) -> Result<Instance, SimError> {
    if !(scale > 0.0 && scale <= 1.0) {
        return Err(SimError::BadScale(scale));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = (588.0 * scale).floor() as usize;
    let mut chain_tasks = ((116.0 * scale).round() as usize).min(k);
    let mut chains = ((3.0 * scale).round() as usize).max(1);
    if chain_tasks < 2 {
        chain_tasks = 0;
        chains = 0;
    }
    chains = chains.min(chain_tasks / 2);
    let mut tasks = Vec::with_capacity(k);
    let mut precedence = Vec::new();
    let mut next = 1;

    // chains: sizes as equal as possible, spread over different days
    for c in 0..chains {
        let len = chain_tasks / chains + usize::from(c < chain_tasks % chains);
        let durations: Vec<usize> = (0..len).map(|_| rng.gen_range(2..=6)).collect();
        let reach: usize = durations.iter().map(|d| d - 1).sum::<usize>() + len;
        let width = 4;
        let l0 = rng.gen_range(1..=T - reach - width);
        let mut l = l0;
        for (i, &d) in durations.iter().enumerate() {
            if i > 0 {
                l += durations[i - 1] - 1 + rng.gen_range(0..=1);
            }
            let id = next;
            next += 1;
            tasks.push(Task {
                id,
                window: [l, l + width],
                duration: d,
                resource: vec![rng.gen_range(1..=2); d],
            });
            if i > 0 {
                precedence.push([id - 1, id]);
            }
        }
    }
    while tasks.len() < k {
        let d = if rng.gen_bool(0.3) {
            rng.gen_range(16..=32)
        } else {
            rng.gen_range(2..=8)
        };
        let width = rng.gen_range(0..=4);
        let l = rng.gen_range(1..=T - width);
        let id = next;
        next += 1;
        tasks.push(Task {
            id,
            window: [l, l + width],
            duration: d,
            resource: vec![rng.gen_range(1..=3); d],
        });
    }
    // raise levels of random non-chain tasks until the demand reaches the
    // live data's 3736 worker-hours (scaled)
    let target = (EMERGENCY_HOURS * scale * 60.0 / f64::from(OMEGA)).round() as u64;
    let mut work: u64 = tasks.iter().map(Task::work).sum();
    let free = chain_tasks..tasks.len();
    while work < target && !free.is_empty() {
        let t = &mut tasks[rng.gen_range(free.clone())];
        if work + t.duration as u64 > target + t.duration as u64 / 2 {
            // a smaller task gets closer; stop once even that overshoots
            if t.duration <= 2 {
                break;
            }
            continue;
        }
        for r in t.resource.iter_mut() {
            *r += 1;
        }
        work += t.duration as u64;
    }
    let inst = Instance {
        horizon: Horizon::weekly(OMEGA).map_err(|e| SimError::Generation(e.to_string()))?,
        tasks,
        precedence,
        fixed_demand: None,
        pattern_family: "FX29".into(),
        patterns: None,
        pattern_rules: None,
        costs: CostModel::default(),
        policy: Knobs::default().policy,
    };
    let v = instance::validate(&inst);
    if let Some(first) = v.first() {
        return Err(SimError::Generation(first.to_string()));
    }
    Ok(inst)
}

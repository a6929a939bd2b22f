//! Random tiny instances for the exhaustive oracles.

use rand::Rng;
use shiftplan::horizon::Horizon;
use shiftplan::instance::{self, CostModel, DaysOff, Instance, OverlapMode, Stage2Policy, Task};
use shiftplan::patterns::{PatternSet, ShiftPattern, ShiftSchedule};

pub fn random_pattern<R: Rng>(rng: &mut R, max_len: usize) -> ShiftPattern {
    let len = rng.gen_range(1..=max_len);
    let values: Vec<f64> = (0..len)
        .map(|i| {
            if i == 0 || i + 1 == len {
                1.0
            } else {
                match rng.gen_range(0..6) {
                    0 => 0.5,
                    1 => 0.0,
                    _ => 1.0,
                }
            }
        })
        .collect();
    ShiftPattern::from_values(&values).unwrap()
}

pub fn random_policy<R: Rng>(rng: &mut R, days_off: bool) -> Stage2Policy {
    Stage2Policy {
        max_shifts: if rng.gen_bool(0.8) { Some(rng.gen_range(1..=4)) } else { None },
        rest_gap: rng.gen_range(0..=4),
        max_hours: if rng.gen_bool(0.3) { Some(rng.gen_range(6..=14)) } else { None },
        days_off: if days_off {
            match rng.gen_range(0..3) {
                0 => DaysOff::None,
                1 => DaysOff::TwoConsecutive,
                _ => DaysOff::TwoAny,
            }
        } else {
            DaysOff::None
        },
        max_workers: None,
        load_kind: None,
        overlap: if rng.gen_bool(0.5) { OverlapMode::Cyclic } else { OverlapMode::Linear },
    }
}

/// `T <= 24` at 60-minute TPs, at most three patterns and four tasks.
pub fn tiny_instance<R: Rng>(rng: &mut R) -> Instance {
    loop {
        let t = rng.gen_range(6..=24);
        let mut h = Horizon::new(t, 60).unwrap();
        if rng.gen_bool(0.3) {
            h = h.linear();
        }
        let q = rng.gen_range(1..=3);
        let patterns: Vec<ShiftPattern> = (0..q).map(|_| random_pattern(rng, 5.min(t))).collect();
        let k = rng.gen_range(0..=4);
        let mut tasks = Vec::new();
        for id in 1..=k as u32 {
            let duration = rng.gen_range(1..=4.min(t));
            let l = rng.gen_range(1..=t);
            let u = (l + rng.gen_range(0..=3)).min(t);
            let mut resource: Vec<u32> = (0..duration).map(|_| rng.gen_range(0..=2)).collect();
            if resource.iter().all(|&r| r == 0) {
                resource[0] = 1;
            }
            tasks.push(Task {
                id,
                window: [l, u],
                duration,
                resource,
            });
        }
        let mut precedence = Vec::new();
        if k >= 2 && rng.gen_bool(0.5) {
            let a = rng.gen_range(1..=k as u32);
            let b = rng.gen_range(1..=k as u32);
            if a != b {
                precedence.push([a, b]);
            }
        }
        let fixed = if rng.gen_bool(0.4) || k == 0 {
            Some((0..t).map(|_| if rng.gen_bool(0.25) { 1 } else { 0 }).collect())
        } else {
            None
        };
        let costs = match rng.gen_range(0..3) {
            0 => CostModel::Uniform,
            1 => CostModel::PerDuration {
                table: (1..=5).map(|len| (len, rng.gen_range(1..=6))).collect(),
            },
            _ => CostModel::PerSchedule {
                entries: (0..4)
                    .map(|_| [rng.gen_range(1..=q) as i64, rng.gen_range(1..=t) as i64, rng.gen_range(1..=5)])
                    .collect(),
                default: rng.gen_range(1..=3),
            },
        };
        let inst = Instance {
            horizon: h,
            tasks,
            precedence,
            fixed_demand: fixed,
            pattern_family: "CUSTOM".into(),
            patterns: Some(patterns),
            pattern_rules: None,
            costs,
            policy: random_policy(rng, false),
        };
        if instance::validate(&inst).is_empty() && total_work(&inst) <= 14 {
            return inst;
        }
    }
}

fn total_work(inst: &Instance) -> u64 {
    inst.tasks.iter().map(Task::work).sum::<u64>()
        + inst.fixed_demand.as_ref().map_or(0, |d| d.iter().map(|&v| u64::from(v)).sum())
}

/// A weekly horizon at 60-minute TPs with up to `max_tau` random schedules.
pub fn weekly_schedules<R: Rng>(rng: &mut R, max_tau: usize) -> (Horizon, PatternSet, Vec<ShiftSchedule>) {
    let h = Horizon::new(168, 60).unwrap();
    let q = rng.gen_range(1..=3);
    let patterns = PatternSet {
        family: "CUSTOM".into(),
        omega: 60,
        patterns: (0..q).map(|_| random_pattern(rng, 10)).collect(),
        start_window: None,
    };
    let tau = rng.gen_range(0..=max_tau);
    // cluster the starts so conflicts are common
    let base: Vec<usize> = (0..3).map(|_| rng.gen_range(1..=168)).collect();
    let list = (0..tau)
        .map(|_| {
            let b = base[rng.gen_range(0..base.len())];
            let day = rng.gen_range(0..7);
            ShiftSchedule {
                pattern: rng.gen_range(0..q),
                start: (b + 24 * day + rng.gen_range(0..6)) % 168 + 1,
            }
        })
        .collect();
    (h, patterns, list)
}

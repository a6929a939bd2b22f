use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use shiftplan::horizon::Horizon;
use shiftplan::instance::Instance;
use shiftplan::pipeline::RunReport;
use shiftplan::stage2::RosterFile;

fn shiftplan(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_shiftplan")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Two-TP demand blocks a single two-TP pattern covers exactly.
fn small_instance(dir: &Path, max_workers: Option<usize>) -> std::path::PathBuf {
    let h = Horizon::new(24, 60).unwrap();
    let mut d = vec![0u32; 24];
    for s in [1, 9, 17] {
        d[s - 1] = 1;
        d[s] = 1;
    }
    d[8] = 2;
    d[9] = 2;
    let mut inst = Instance::from_demand(h, d, "CUSTOM");
    inst.patterns = Some(vec![shiftplan::patterns::ShiftPattern::from_values(&[1.0, 1.0]).unwrap()]);
    inst.policy.max_shifts = Some(3);
    inst.policy.max_workers = max_workers;
    let p = dir.join("inst.json");
    fs::write(&p, inst.to_json()).unwrap();
    p
}

#[test]
fn patterns_writes_the_family() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("fx260.json");
    let res = shiftplan(&["patterns", "FX260", "--out", path(&out)]);
    assert_eq!(code(&res), 0, "{}", String::from_utf8_lossy(&res.stderr));
    let set: serde_json::Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(set["patterns"].as_array().unwrap().len(), 260);
    assert_eq!(code(&shiftplan(&["patterns", "NOPE"])), 2);
    assert_eq!(code(&shiftplan(&["patterns", "CUSTOM"])), 2);
}

#[test]
fn validate_accepts_json_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let inst = small_instance(dir.path(), None);
    let res = shiftplan(&["validate", path(&inst)]);
    assert_eq!(code(&res), 0);
    assert!(String::from_utf8_lossy(&res.stdout).starts_with("ok: T=24"));

    let csv = dir.path().join("demand.csv");
    let rows: String = (0..336).map(|j| format!("{}\n", j % 4)).collect();
    fs::write(&csv, rows).unwrap();
    // 336 rows mean 30-minute TPs, which FX29 does not use
    assert_eq!(code(&shiftplan(&["validate", path(&csv)])), 2);
    assert_eq!(code(&shiftplan(&["validate", path(&csv), "--family", "FL15"])), 0);
}

#[test]
fn bad_input_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let broken = dir.path().join("broken.json");
    fs::write(&broken, "{\"horizon\": ").unwrap();
    assert_eq!(code(&shiftplan(&["validate", path(&broken)])), 2);
    assert_eq!(code(&shiftplan(&["solve", path(&broken)])), 2);
    assert_eq!(code(&shiftplan(&["validate", "/nonexistent/inst.json"])), 2);
    let csv = dir.path().join("odd.csv");
    fs::write(&csv, "1\n2\n3\n").unwrap();
    assert_eq!(code(&shiftplan(&["validate", path(&csv)])), 2);
    let inst = small_instance(dir.path(), None);
    assert_eq!(code(&shiftplan(&["solve", path(&inst), "--rho", "zero"])), 2);
    assert_eq!(code(&shiftplan(&["solve", path(&inst), "--time-limit", "0"])), 2);
}

#[test]
fn solve_then_report() {
    let dir = tempfile::tempdir().unwrap();
    let inst = small_instance(dir.path(), None);
    let report = dir.path().join("report.json");
    let roster = dir.path().join("roster.json");
    let res = shiftplan(&["solve", path(&inst), "--time-limit", "30", "--out", path(&report), "--roster", path(&roster)]);
    assert_eq!(code(&res), 0, "{}", String::from_utf8_lossy(&res.stderr));
    let r = RunReport::from_json(&fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(r.method, "direct");
    assert_eq!(r.stage2.workers, 2);
    let rf = RosterFile::from_json(&fs::read_to_string(&roster).unwrap()).unwrap();
    assert_eq!(rf.workers_used, 2);
    assert_eq!(rf.workers.iter().map(|w| w.schedules.len()).sum::<usize>(), 4);

    let res = shiftplan(&["report", path(&report)]);
    assert_eq!(code(&res), 0);
    assert!(String::from_utf8_lossy(&res.stdout).contains("method            direct"));

    let res = shiftplan(&["report", path(&report), "--plot", "demand"]);
    let csv = String::from_utf8_lossy(&res.stdout).to_string();
    assert!(csv.starts_with("tp,demand,supply\n"));
    assert_eq!(csv.lines().count(), 25);

    for plot in ["supply", "gantt"] {
        let svg = dir.path().join(format!("{plot}.svg"));
        assert_eq!(code(&shiftplan(&["report", path(&report), "--plot", plot, "--out", path(&svg)])), 0);
        assert!(fs::read_to_string(&svg).unwrap().starts_with("<svg"));
    }
    let gantt = shiftplan(&["report", path(&report), "--plot", "gantt"]);
    assert_eq!(String::from_utf8_lossy(&gantt.stdout).lines().count(), 5);
}

#[test]
fn worker_cap_below_need_is_infeasible() {
    let dir = tempfile::tempdir().unwrap();
    let inst = small_instance(dir.path(), Some(1));
    let res = shiftplan(&["solve", path(&inst), "--time-limit", "10"]);
    assert_eq!(code(&res), 1, "{}", String::from_utf8_lossy(&res.stderr));
}

#[test]
fn direct_solve_over_budget_exits_with_three() {
    let dir = tempfile::tempdir().unwrap();
    let inst = small_instance(dir.path(), None);
    let res = shiftplan(&["solve", path(&inst), "--rho", "1", "--budget", "1", "--time-limit", "10"]);
    assert_eq!(code(&res), 3, "{}", String::from_utf8_lossy(&res.stderr));
}

#[test]
fn simulate_round_trips_through_validate() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sim.json");
    let res = shiftplan(&["simulate", "--size", "small", "--mix", "S4", "--seed", "3", "--out", path(&out)]);
    assert_eq!(code(&res), 0);
    let inst = Instance::from_json(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(inst.horizon.periods, 672);
    assert!((inst.total_demand_hours() - 600.0).abs() < 30.0);
    assert_eq!(code(&shiftplan(&["validate", path(&out)])), 0);

    let em = dir.path().join("em.json");
    assert_eq!(code(&shiftplan(&["simulate", "--emergency", "0.1", "--out", path(&em)])), 0);
    assert_eq!(code(&shiftplan(&["simulate", "--mix", "S9"])), 2);
    assert_eq!(code(&shiftplan(&["simulate", "--emergency", "2"])), 2);
}

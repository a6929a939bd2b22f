//! Replays the checked-in fuzz corpus through the parsers on stable.

use std::fs;
use std::path::PathBuf;

use shiftplan::instance::{self, Instance};
use shiftplan::patterns::{generate_family, Family, PatternRuleSet, PatternSet};
use shiftplan::pipeline::RunReport;
use shiftplan::stage1::Stage1File;
use shiftplan::stage2::RosterFile;

fn seeds(target: &str) -> Vec<(PathBuf, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut out: Vec<_> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| e.unwrap().path())
        .map(|p| {
            let text = fs::read_to_string(&p).unwrap();
            (p, text)
        })
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds for {target}");
    out
}

#[test]
fn instance_seeds_parse_and_validate() {
    for (p, text) in seeds("instance_json") {
        let inst = Instance::from_json(&text).unwrap_or_else(|e| panic!("{}: {e}", p.display()));
        assert!(instance::validate(&inst).is_empty(), "{}", p.display());
        assert_eq!(Instance::from_json(&inst.to_json()).unwrap().to_json(), inst.to_json());
    }
}

#[test]
fn csv_seeds() {
    let mut parsed = 0;
    for (_, text) in seeds("demand_csv") {
        if let Ok(inst) = Instance::from_demand_csv(&text, Some(30), "FL15") {
            assert_eq!(inst.fixed_demand.unwrap().len(), inst.horizon.periods);
            parsed += 1;
        }
    }
    assert!(parsed >= 2);
}

#[test]
fn pattern_seeds_round_trip() {
    for (p, text) in seeds("pattern_set_json") {
        let set = PatternSet::from_json(&text).unwrap_or_else(|e| panic!("{}: {e}", p.display()));
        assert_eq!(PatternSet::from_json(&set.to_json()).unwrap(), set);
    }
    for (p, text) in seeds("pattern_rules_json") {
        let Ok(rules) = serde_json::from_str::<Vec<PatternRuleSet>>(&text) else {
            continue;
        };
        if rules.iter().all(|r| r.validate().is_ok()) {
            generate_family(Family::Custom, Some(&rules)).unwrap_or_else(|e| panic!("{}: {e}", p.display()));
        }
    }
    let fx260: Vec<PatternRuleSet> = serde_json::from_str(&seeds("pattern_rules_json").iter().find(|(p, _)| p.ends_with("fx260.json")).unwrap().1).unwrap();
    assert_eq!(generate_family(Family::Custom, Some(&fx260)).unwrap().len(), 260);
}

#[test]
fn result_file_seeds_round_trip() {
    for (p, text) in seeds("stage1_file") {
        let f = Stage1File::from_json(&text).unwrap_or_else(|e| panic!("{}: {e}", p.display()));
        assert_eq!(Stage1File::from_json(&f.to_json()).unwrap(), f);
    }
    for (p, text) in seeds("roster_file") {
        let f = RosterFile::from_json(&text).unwrap_or_else(|e| panic!("{}: {e}", p.display()));
        assert_eq!(RosterFile::from_json(&f.to_json()).unwrap().to_json(), f.to_json());
    }
    for (p, text) in seeds("run_report") {
        let r = RunReport::from_json(&text).unwrap_or_else(|e| panic!("{}: {e}", p.display()));
        assert_eq!(RunReport::from_json(&r.to_json()).unwrap().to_json(), r.to_json());
    }
}

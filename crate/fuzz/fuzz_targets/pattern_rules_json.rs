#![no_main]
use libfuzzer_sys::fuzz_target;
use shiftplan::patterns::{generate_family, Family, PatternRuleSet};

fuzz_target!(|data: &[u8]| {
    let Ok(rules) = serde_json::from_slice::<Vec<PatternRuleSet>>(data) else { return };
    if rules.iter().any(|r| r.validate().is_err()) {
        return;
    }
    // enumeration is exponential in length and break count
    let small = rules.iter().all(|r| r.sl_max <= 24 && r.breaks.iter().map(|b| b.count).sum::<usize>() <= 3);
    if !rules.is_empty() && rules.len() <= 4 && small {
        if let Ok(list) = generate_family(Family::Custom, Some(&rules)) {
            assert!(list.iter().all(|p| !p.is_empty()));
        }
    }
});

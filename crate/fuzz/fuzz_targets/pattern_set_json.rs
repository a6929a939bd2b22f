#![no_main]
use libfuzzer_sys::fuzz_target;
use shiftplan::patterns::PatternSet;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(set) = PatternSet::from_json(text) {
        for p in &set.patterns {
            let _ = p.availability_halves();
            let _ = p.describe(set.omega);
        }
        assert_eq!(PatternSet::from_json(&set.to_json()).ok(), Some(set));
    }
});

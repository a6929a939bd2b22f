#![no_main]
use libfuzzer_sys::fuzz_target;
use shiftplan::instance::{self, Instance};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(inst) = Instance::from_json(text) else { return };
    let violations = instance::validate(&inst);
    // keep pattern generation and demand vectors to horizons a week can hold
    if violations.is_empty() && inst.horizon.periods <= 2016 {
        let _ = inst.pattern_set();
        let _ = inst.fixed_demand_vector();
        let _ = inst.total_demand_hours();
    }
    let again = Instance::from_json(&inst.to_json()).expect("serialized instance parses");
    assert_eq!(again.to_json(), inst.to_json());
});

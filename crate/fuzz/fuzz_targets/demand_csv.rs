#![no_main]
use libfuzzer_sys::fuzz_target;
use shiftplan::instance::{self, Instance};

fuzz_target!(|data: &[u8]| {
    let Some((&first, rest)) = data.split_first() else { return };
    let Ok(text) = std::str::from_utf8(rest) else { return };
    let omega = (first % 4 != 0).then(|| [15, 30, 60][usize::from(first % 3)]);
    if let Ok(inst) = Instance::from_demand_csv(text, omega, "FX29") {
        assert_eq!(inst.fixed_demand.as_ref().map(Vec::len), Some(inst.horizon.periods));
        let _ = instance::validate(&inst);
    }
});

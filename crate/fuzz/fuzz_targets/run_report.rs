#![no_main]
use libfuzzer_sys::fuzz_target;
use shiftplan::pipeline::RunReport;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(r) = RunReport::from_json(text) {
        let _ = RunReport::from_json(&r.to_json()).expect("serialized report parses");
    }
});

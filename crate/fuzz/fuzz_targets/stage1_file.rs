#![no_main]
use libfuzzer_sys::fuzz_target;
use shiftplan::stage1::Stage1File;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(f) = Stage1File::from_json(text) {
        assert!(f.schedules.iter().all(|s| s[0] > 0 && s[1] > 0));
        let again = Stage1File::from_json(&f.to_json()).expect("serialized file parses");
        assert_eq!(again.schedules, f.schedules);
    }
});

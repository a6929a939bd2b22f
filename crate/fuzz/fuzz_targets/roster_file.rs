#![no_main]
use libfuzzer_sys::fuzz_target;
use shiftplan::stage2::RosterFile;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(f) = RosterFile::from_json(text) {
        let again = RosterFile::from_json(&f.to_json()).expect("serialized roster parses");
        assert_eq!(again.to_json(), f.to_json());
    }
});

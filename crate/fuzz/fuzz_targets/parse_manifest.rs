#![no_main]
use libfuzzer_sys::fuzz_target;

// Parsing only: a valid manifest is not run, its trial count is arbitrary.
fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(m) = fair_noma_cli::parse_manifest(s) {
            let back = fair_noma_cli::parse_manifest(&m.to_json()).expect("manifest round-trips");
            assert_eq!(back, m);
        }
    }
});

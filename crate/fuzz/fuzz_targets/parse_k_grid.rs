#![no_main]
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(g) = fair_noma_cli::parse_k_grid(s) {
            assert!(g.windows(2).all(|w| w[1] > w[0]));
        }
    }
});

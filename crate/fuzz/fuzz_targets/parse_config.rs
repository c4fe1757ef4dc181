#![no_main]
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = std::str::from_utf8(data) {
        if let Ok(c) = fair_noma_cli::parse_config(s) {
            if let Some(g) = &c.xi_db {
                let _ = g.resolve();
            }
            if let Some(g) = &c.k_grid {
                let _ = g.resolve();
            }
        }
    }
});

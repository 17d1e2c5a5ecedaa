#![no_main]

use chemobound::sweep::SweepSpec;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        let _ = SweepSpec::from_toml_str(text);
    }
});

#![no_main]

use chemobound::config::SimConfig;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(config) = SimConfig::from_toml_str(text) {
        let again = SimConfig::from_toml_str(&config.to_toml_string()).unwrap();
        assert_eq!(again, config);
    }
});

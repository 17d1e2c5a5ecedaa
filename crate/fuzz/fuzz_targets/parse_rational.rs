#![no_main]

use chemobound::exact::{format_rational, parse_rational};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(r) = parse_rational(text) {
        // The canonical form parses back to the same value.
        assert_eq!(parse_rational(&format_rational(&r)).unwrap(), r);
    }
});

#![no_main]

use chemobound::certificate::{verify_certificate, Certificate};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(cert) = Certificate::from_document(text) {
        // Verification is total, and the written document reads back.
        let report = verify_certificate(&cert);
        let again = Certificate::from_document(&cert.to_document(&report)).unwrap();
        assert_eq!(again, cert);
    }
});

#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(phi) = bcorlicz::json::parse_phi(text) {
        assert_eq!(bcorlicz::json::parse_phi(&phi.to_string()).unwrap(), phi);
    }
});

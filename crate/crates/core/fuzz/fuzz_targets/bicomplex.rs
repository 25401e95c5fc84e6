#![no_main]

use bcorlicz::json::{parse_bicomplex, WireBiComplex};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(z) = parse_bicomplex(text, "fuzz") else { return };
    let Ok(wire) = serde_json::to_string(&WireBiComplex(z)) else { return };
    // near overflow the two emitted forms may fail the agreement check
    if let Ok(back) = parse_bicomplex(&wire, "round trip") {
        assert_eq!(back, z);
    }
});

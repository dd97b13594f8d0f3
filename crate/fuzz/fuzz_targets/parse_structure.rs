#![no_main]

use libfuzzer_sys::fuzz_target;
use pcsp_core::Structure;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(s) = Structure::parse(text) {
        // accepted documents must survive a round trip
        let again = Structure::parse(&s.serialize()).expect("serialized structure parses");
        assert_eq!(again, s);
        assert!(s.validate().is_empty());
    }
});

#![no_main]

use libfuzzer_sys::fuzz_target;
use pcsp_core::polymorph::NamedOperation;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(op) = NamedOperation::parse(text) {
        let again = NamedOperation::parse(&op.serialize()).expect("serialized operation parses");
        assert_eq!(again, op);
    }
});

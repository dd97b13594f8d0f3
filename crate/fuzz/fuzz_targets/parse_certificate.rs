#![no_main]

use libfuzzer_sys::fuzz_target;
use pcsp_core::sandwich::CertificateDocument;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(doc) = CertificateDocument::parse(text) {
        let g_target = doc.g.iter().max().map_or(1, |&m| m + 1);
        let cert = doc.clone().resolve(g_target).expect("parsed maps resolve");
        let again = CertificateDocument::parse(&cert.to_document()).expect("serialized certificate parses");
        assert_eq!(again, doc);
    }
});

//! Replays the checked-in fuzz seeds through the parsers with the same
//! invariants the fuzz targets assert.

use std::fs;
use std::path::PathBuf;

use pcsp_core::polymorph::NamedOperation;
use pcsp_core::sandwich::CertificateDocument;
use pcsp_core::Structure;

/// Seeds that are deliberately malformed.
const REJECTED: &[&str] =
    &["out_of_range", "short_row", "unterminated", "bad_witness", "missing_rows", "duplicate_row"];

fn seeds(target: &str) -> Vec<(String, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut out: Vec<(String, String)> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|entry| {
            let path = entry.unwrap().path();
            let name = path.file_name().unwrap().to_string_lossy().into_owned();
            (name, fs::read_to_string(&path).unwrap())
        })
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds for {target}");
    out
}

fn expect_verdict<T, E: std::fmt::Display>(name: &str, r: &Result<T, E>) {
    let should_parse = !REJECTED.contains(&name);
    match r {
        Ok(_) => assert!(should_parse, "{name} should be rejected"),
        Err(e) => assert!(!should_parse, "{name}: {e}"),
    }
}

#[test]
fn structure_seeds() {
    for (name, text) in seeds("parse_structure") {
        let r = Structure::parse(&text);
        expect_verdict(&name, &r);
        if let Ok(s) = r {
            assert_eq!(Structure::parse(&s.serialize()).unwrap(), s, "{name}");
        }
    }
}

#[test]
fn operation_seeds() {
    for (name, text) in seeds("parse_operation") {
        let r = NamedOperation::parse(&text);
        expect_verdict(&name, &r);
        if let Ok(op) = r {
            assert_eq!(NamedOperation::parse(&op.serialize()).unwrap(), op, "{name}");
        }
    }
}

#[test]
fn certificate_seeds() {
    for (name, text) in seeds("parse_certificate") {
        let r = CertificateDocument::parse(&text);
        expect_verdict(&name, &r);
        if let Ok(doc) = r {
            let g_target = doc.g.iter().max().map_or(1, |&m| m + 1);
            let cert = doc.clone().resolve(g_target).unwrap();
            assert_eq!(CertificateDocument::parse(&cert.to_document()).unwrap(), doc, "{name}");
        }
    }
}

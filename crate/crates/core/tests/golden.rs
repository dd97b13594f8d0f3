//! Pinned output documents. Regenerate with
//! `pcsp sandwich --family affine A.struct B.struct` and
//! `pcsp verify-example` after an intentional format change.

use pcsp_core::builtin::{self, verify_example, ExampleData};
use pcsp_core::sandwich::{find_affine_sandwich, CertificateDocument, SearchConfig, Witness};

const CERTIFICATE: &str = include_str!("golden/affine_certificate.txt");
const REPORT: &str = include_str!("golden/example_report.txt");

#[test]
fn affine_certificate_document() {
    let (a, b) = (builtin::source(), builtin::target());
    let out = find_affine_sandwich(&a, &b, &SearchConfig::default()).unwrap();
    let cert = out.certificate.expect("size-3 affine sandwich");
    assert_eq!(cert.to_document(), CERTIFICATE);

    let parsed = CertificateDocument::parse(CERTIFICATE).unwrap().resolve(b.domain_size()).unwrap();
    assert_eq!(parsed, cert);
    parsed.verify(&a, &b).unwrap();
    assert_eq!(parsed.middle, builtin::middle());
    assert_eq!(parsed.witness, Witness::Affine { n: 3 });
    assert_eq!(parsed.g, builtin::g_map());
}

#[test]
fn example_report_text() {
    assert_eq!(verify_example(&ExampleData::builtin()).to_string(), REPORT);
}

#[test]
fn tampered_certificates_fail_verification() {
    let (a, b) = (builtin::source(), builtin::target());
    let bad_g = CERTIFICATE.replace("hom g: 0 1 0", "hom g: 0 0 0");
    let cert = CertificateDocument::parse(&bad_g).unwrap().resolve(2).unwrap();
    assert!(cert.verify(&a, &b).is_err());

    let bad_n = CERTIFICATE.replace("affine n=3", "affine n=2");
    let cert = CertificateDocument::parse(&bad_n).unwrap().resolve(2).unwrap();
    assert!(cert.verify(&a, &b).is_err());

    let dropped = CERTIFICATE.replace("1 1 2 0 0 2\n", "");
    let cert = CertificateDocument::parse(&dropped).unwrap().resolve(2).unwrap();
    assert!(cert.verify(&a, &b).is_err(), "closure minus one tuple is not affine");
}

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use pcsp_core::affine::{make_alternating_polymorphism, make_symmetric_polymorphism};
use pcsp_core::builtin;
use pcsp_core::polymorph::OperationTable;
use pcsp_core::sandwich::CertificateDocument;
use pcsp_core::Structure;
use tempfile::TempDir;

fn pcsp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pcsp")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

struct Files {
    dir: TempDir,
}

impl Files {
    fn new() -> Self {
        let dir = TempDir::new().unwrap();
        let f = Files { dir };
        f.write("A.struct", builtin::SOURCE_DOC);
        f.write("B.struct", builtin::TARGET_DOC);
        f.write("C.struct", builtin::MIDDLE_DOC);
        f
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn write(&self, name: &str, text: &str) -> String {
        let p = self.path(name);
        fs::write(&p, text).unwrap();
        p.to_str().unwrap().to_string()
    }

    fn p(&self, name: &str) -> String {
        self.path(name).to_str().unwrap().to_string()
    }
}

#[test]
fn hom_source_into_middle() {
    let f = Files::new();
    let o = pcsp(&["hom", &f.p("A.struct"), &f.p("C.struct")]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(stdout(&o), "0 1\n");
}

#[test]
fn hom_structure_into_itself_is_identity() {
    let f = Files::new();
    let o = pcsp(&["hom", &f.p("C.struct"), &f.p("C.struct"), "--stats"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "0 1 2\n");
    assert!(stderr(&o).contains("nodes:"));
}

#[test]
fn hom_no_answer_exits_one() {
    let f = Files::new();
    // A triangle does not map to a single edge.
    let k3 = f.write("k3", "domain 3\nrel E 2\n0 1\n1 0\n1 2\n2 1\n0 2\n2 0\nend\n");
    let k2 = f.write("k2", "domain 2\nrel E 2\n0 1\n1 0\nend\n");
    let o = pcsp(&["hom", &k3, &k2]);
    assert_eq!(code(&o), 1);
    assert_eq!(stdout(&o), "");
}

#[test]
fn malformed_input_exits_two() {
    let f = Files::new();
    let bad = f.write("bad", "domain 2\nrel R 2\n0 5\nend\n");
    let o = pcsp(&["hom", &bad, &f.p("A.struct")]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));
    let o = pcsp(&["hom", &f.p("missing"), &f.p("A.struct")]);
    assert_eq!(code(&o), 2);
}

#[test]
fn signature_mismatch_exits_two() {
    let f = Files::new();
    let k2 = f.write("k2", "domain 2\nrel E 2\n0 1\n1 0\nend\n");
    assert_eq!(code(&pcsp(&["hom", &k2, &f.p("A.struct")])), 2);
}

#[test]
fn affine_sandwich_certificate() {
    let f = Files::new();
    let o = pcsp(&["sandwich", "--family", "affine", "--n-max", "3", &f.p("A.struct"), &f.p("B.struct")]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let doc = CertificateDocument::parse(&stdout(&o)).unwrap();
    let cert = doc.resolve(2).unwrap();
    assert_eq!(cert.size(), 3);
    cert.verify(&builtin::source(), &builtin::target()).unwrap();
}

#[test]
fn certificate_written_to_file() {
    let f = Files::new();
    let out = f.p("cert.txt");
    let o = pcsp(&["sandwich", &f.p("A.struct"), &f.p("B.struct"), "--size-bound", "2", "--out", &out]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "");
    assert!(stderr(&o).contains("overall: 3"), "{}", stderr(&o));
    let doc = CertificateDocument::parse(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(doc.middle, builtin::middle());
}

#[test]
fn schaefer_sandwich_exits_one() {
    let f = Files::new();
    let o = pcsp(&["sandwich", "--family", "schaefer", &f.p("A.struct"), &f.p("B.struct")]);
    assert_eq!(code(&o), 1);
    let out = stdout(&o);
    assert!(out.starts_with("schaefer: none exists"), "{out}");
    assert_eq!(out.lines().filter(|l| l.starts_with("rejected")).count(), 96);
    assert!(out.contains("f=[0 1] schaefer minority g=[0 1]: 111000 -> 111000 not in B"), "{out}");
}

#[test]
fn majority_sandwich_exits_one_naming_the_tuple() {
    let f = Files::new();
    let o = pcsp(&["sandwich", "--family", "majority", &f.p("A.struct"), &f.p("B.struct")]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("000111"), "{}", stdout(&o));
}

#[test]
fn all_families_with_small_bounds_find_nothing() {
    let f = Files::new();
    let o = pcsp(&["sandwich", "--n-max", "2", "--size-bound", "2", &f.p("A.struct"), &f.p("B.struct")]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("overall: nothing found within bounds"));
}

#[test]
fn budget_exhaustion_exits_two() {
    let f = Files::new();
    let o = pcsp(&["sandwich", "--family", "affine", "--budget", "1", &f.p("A.struct"), &f.p("B.struct")]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("budget"), "{}", stderr(&o));
    let o = pcsp(&["hom", "--budget", "1", &f.p("C.struct"), &f.p("B.struct")]);
    assert_eq!(code(&o), 2);
}

#[test]
fn zero_bounds_are_rejected() {
    let f = Files::new();
    let o = pcsp(&["sandwich", "--n-max", "0", &f.p("A.struct"), &f.p("B.struct")]);
    assert_eq!(code(&o), 2);
    let o = pcsp(&["hom", "--budget", "0", &f.p("A.struct"), &f.p("B.struct")]);
    assert_eq!(code(&o), 2);
}

#[test]
fn verify_example_passes() {
    let o = pcsp(&["verify-example"]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(out.contains("(9 tuples)"));
    for t in ["001110", "010101", "022122", "100011", "112002", "121020", "202212", "211200", "220221"] {
        assert!(out.contains(t), "missing {t}");
    }
    for eq in ["x1 + x2 + x3 = 1", "x1 + x4 = 1", "x2 + x5 = 1", "x3 + x6 = 1"] {
        assert!(out.contains(eq), "missing {eq}");
    }
    assert_eq!(out.matches("[PASS]").count(), 5);
    assert!(out.ends_with("PASS\n"));
}

#[test]
fn verify_example_quiet() {
    let o = pcsp(&["verify-example", "--quiet"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "");
    let o = pcsp(&["verify-example", "--quiet", "--corrupt-closure", "0"]);
    assert_eq!(code(&o), 1);
    assert_eq!(stdout(&o), "");
}

#[test]
fn corrupted_example_names_the_tuple() {
    let o = pcsp(&["verify-example", "--corrupt-closure", "4"]);
    assert_eq!(code(&o), 1);
    let out = stdout(&o);
    assert!(out.contains("[FAIL] closure"), "{out}");
    assert!(out.contains("222222"), "{out}");
    assert!(out.ends_with("FAIL\n"));
}

#[test]
fn solve_affine_and_generic_agree() {
    let f = Files::new();
    // Two variables constrained by one tuple scope (0,1,0,1,0,1).
    let x = f.write("x", "domain 2\nrel R 6\n0 1 0 1 0 1\nend\n");
    let a = pcsp(&["solve", "--affine", "3", "--dump-system", &x, &f.p("C.struct")]);
    let g = pcsp(&["solve", "--generic", &x, &f.p("C.struct")]);
    assert_eq!(code(&a), 0, "{}", stderr(&a));
    assert_eq!(code(&g), 0);
    assert!(stderr(&a).contains("(mod 3)"));
    let check = |out: &str| {
        let vals: Vec<usize> = out.split_whitespace().map(|v| v.parse().unwrap()).collect();
        let t = [vals[0], vals[1], vals[0], vals[1], vals[0], vals[1]];
        assert!(builtin::middle().relation(0).contains(&t), "{out}");
    };
    check(&stdout(&a));
    check(&stdout(&g));

    // x1 = x2 everywhere has no solution: x+x+x = 0 ≠ 1.
    let y = f.write("y", "domain 1\nrel R 6\n0 0 0 0 0 0\nend\n");
    assert_eq!(code(&pcsp(&["solve", "--affine", "3", &y, &f.p("C.struct")])), 1);
    assert_eq!(code(&pcsp(&["solve", "--generic", &y, &f.p("C.struct")])), 1);
}

#[test]
fn solve_affine_rejects_non_affine_template() {
    let f = Files::new();
    let x = f.write("x", "domain 2\nrel R 6\n0 1 0 1 0 1\nend\n");
    let o = pcsp(&["solve", "--affine", "3", &x, &f.p("B.struct")]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("modulus is 3"), "{}", stderr(&o));
    // B has the right size for Z_2 but is not a coset.
    let o = pcsp(&["solve", "--affine", "2", &x, &f.p("B.struct")]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("not affine"), "{}", stderr(&o));
    assert_eq!(code(&pcsp(&["solve", &x, &f.p("C.struct")])), 2);
}

fn write_op(f: &Files, name: &str, op: &OperationTable) -> String {
    f.write(name, &op.serialize(name))
}

#[test]
fn width_of_constructed_operations() {
    let f = Files::new();
    let (incl, g) = (builtin::inclusion(), builtin::g_map());
    let alt = write_op(&f, "alt", &make_alternating_polymorphism(&incl, &g, 3, 2).unwrap());
    let o = pcsp(&["width", &alt]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "blocks: {1,3,5} {2,4}; width: 2\n");

    let sym = write_op(&f, "sym", &make_symmetric_polymorphism(&incl, &g, 3, 1).unwrap());
    assert_eq!(stdout(&pcsp(&["width", &sym])), "blocks: {1,2,3,4}; width: 4\n");

    let proj = write_op(&f, "proj", &OperationTable::projection(2, 2, 0).unwrap());
    assert_eq!(stdout(&pcsp(&["width", &proj])), "blocks: {1} {2}; width: 1\n");

    let bad = f.write("badop", "op f 2 2 2\n0 1\nend\n");
    assert_eq!(code(&pcsp(&["width", &bad])), 2);
}

#[test]
fn schaefer_report() {
    let f = Files::new();
    let o = pcsp(&["schaefer", &f.p("A.struct")]);
    assert_eq!(code(&o), 1);
    let out = stdout(&o);
    assert!(out.contains("minority: violated (001110, 010101, 100011 -> 111000"), "{out}");
    assert!(out.contains("majority: violated (001110, 010101, 100011 -> 000111"), "{out}");
    let horn = f.write("horn", "domain 2\nrel R 2\n0 0\n0 1\n1 1\nend\n");
    let o = pcsp(&["schaefer", &horn]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("meet: preserved"));
    assert_eq!(code(&pcsp(&["schaefer", &f.p("C.struct")])), 2);
}

#[test]
fn affine_close_output_reparses() {
    let f = Files::new();
    let o = pcsp(&["affine-close", "--modulus", "3", &f.p("A.struct")]);
    assert_eq!(code(&o), 0);
    let closed = Structure::parse(&stdout(&o)).unwrap();
    assert_eq!(closed, builtin::middle());
    // Boolean entries are not all residues mod 1.
    assert_eq!(code(&pcsp(&["affine-close", "--modulus", "1", &f.p("A.struct")])), 2);
}

#[test]
fn dump_structures() {
    let o = pcsp(&["dump-paper-structures"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains(builtin::TARGET_DOC));
    let dir = TempDir::new().unwrap();
    let o = pcsp(&["dump-paper-structures", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    for (name, s) in [("A.struct", builtin::source()), ("B.struct", builtin::target()), ("C.struct", builtin::middle())]
    {
        let text = fs::read_to_string(Path::new(dir.path()).join(name)).unwrap();
        assert_eq!(Structure::parse(&text).unwrap(), s);
    }
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(code(&pcsp(&["frobnicate"])), 2);
    assert_eq!(code(&pcsp(&["sandwich", "--family", "nope", "a", "b"])), 2);
    assert_eq!(code(&pcsp(&["--help"])), 0);
}

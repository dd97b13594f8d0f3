//! The Boolean pair with a size-3 affine sandwich and no tractable Boolean
//! one, shipped as embedded documents, plus the end-to-end check that
//! recomputes every intermediate table.
//!
//! * `A`: domain `{0,1}`, `R = {100011, 010101, 001110}`;
//! * `B`: domain `{0,1}`, `R = {0,1}^6` minus `000000, 000111, 111000, 111111`;
//! * `C`: domain `ℤ₃`, `R` = closure of `R^A` under `x − y + z mod 3`;
//! * `g: C → B` with `g(0) = g(2) = 0`, `g(1) = 1`.

use std::fmt;

use crate::affine::{affine_closure, coset_presentation, AffinePresentation, Equation};
use crate::homsearch::is_homomorphism;
use crate::polymorph::SchaeferClass;
use crate::relstruct::{digits, fmt_tuple, DomainMap, Relation, Structure, Tuple};
use crate::sandwich::{boolean_schaefer_sandwich_search, Witness};

pub const SOURCE_DOC: &str = include_str!("../data/source.struct");
pub const TARGET_DOC: &str = include_str!("../data/target.struct");
pub const MIDDLE_DOC: &str = include_str!("../data/middle.struct");

pub fn source() -> Structure {
    Structure::parse(SOURCE_DOC).expect("embedded document parses")
}

pub fn target() -> Structure {
    Structure::parse(TARGET_DOC).expect("embedded document parses")
}

pub fn middle() -> Structure {
    Structure::parse(MIDDLE_DOC).expect("embedded document parses")
}

/// `g(0) = g(2) = 0`, `g(1) = 1`.
pub fn g_map() -> DomainMap {
    DomainMap::new(2, vec![0, 1, 0]).expect("valid map")
}

/// The inclusion `{0,1} ↪ ℤ₃`.
pub fn inclusion() -> DomainMap {
    DomainMap::new(3, vec![0, 1]).expect("valid map")
}

/// `x₁+x₂+x₃ = 1, x₁+x₄ = 1, x₂+x₅ = 1, x₃+x₆ = 1` over `ℤ₃`.
pub fn middle_equations() -> AffinePresentation {
    let eq = |cs: [usize; 6]| Equation::new(cs.to_vec(), 1);
    AffinePresentation {
        modulus: 3,
        arity: 6,
        equations: vec![eq([1, 1, 1, 0, 0, 0]), eq([1, 0, 0, 1, 0, 0]), eq([0, 1, 0, 0, 1, 0]), eq([0, 0, 1, 0, 0, 1])],
    }
}

/// Expected tables the check compares against.
#[derive(Debug, Clone)]
pub struct ExampleData {
    pub source: Structure,
    pub target: Structure,
    pub closure: Vec<Tuple>,
    pub g_image: Vec<Tuple>,
    pub g: DomainMap,
    pub equations: AffinePresentation,
}

impl ExampleData {
    pub fn builtin() -> Self {
        let g_image = ["100011", "010101", "001110", "000001", "000010", "000100", "011000", "101000", "110000"];
        Self {
            source: source(),
            target: target(),
            closure: middle().relation(0).tuples().to_vec(),
            g_image: g_image.iter().map(|t| digits(t)).collect(),
            g: g_map(),
            equations: middle_equations(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone)]
pub struct ExampleReport {
    pub checks: Vec<Check>,
    pub closure: Vec<Tuple>,
    pub g_image: Vec<Tuple>,
    pub presentation: Option<AffinePresentation>,
    pub stated: AffinePresentation,
}

impl ExampleReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn first_difference(got: &Relation, expected: &Relation) -> Option<String> {
    let missing = expected.iter().find(|t| !got.contains(t));
    let extra = got.iter().find(|t| !expected.contains(t));
    match (missing, extra) {
        (Some(m), _) => Some(format!("expected tuple {} not produced", fmt_tuple(m))),
        (None, Some(e)) => Some(format!("unexpected tuple {}", fmt_tuple(e))),
        (None, None) => None,
    }
}

fn check(name: &'static str, failure: Option<String>, ok: String) -> Check {
    match failure {
        None => Check { name, passed: true, detail: ok },
        Some(detail) => Check { name, passed: false, detail },
    }
}

/// Recomputes the closure, both homomorphisms, the Schaefer exclusion and
/// the equation presentation, comparing each with `data`.
pub fn verify_example(data: &ExampleData) -> ExampleReport {
    let a = &data.source;
    let b = &data.target;
    let mut checks = Vec::new();

    let closure = affine_closure(a.relation(0).tuples(), 6, 3).expect("Boolean tuples are residues mod 3");
    let expected_closure = Relation::from_tuples(6, data.closure.clone());
    checks.push(check("closure", first_difference(&closure, &expected_closure), format!("{} tuples", closure.len())));

    let c = Structure::single(3, 6, closure.tuples().to_vec()).expect("closure is a valid relation");
    let incl = inclusion();
    checks.push(check(
        "inclusion A -> C",
        (!is_homomorphism(&incl, a, &c).unwrap_or(false)).then(|| "not a homomorphism".to_string()),
        "homomorphism".to_string(),
    ));

    let image = c.apply_map(&data.g).ok();
    let image_rel = image.as_ref().map(|s| s.relation(0).clone()).unwrap_or_else(|| Relation::empty(6));
    let g_failure = if !is_homomorphism(&data.g, &c, b).unwrap_or(false) {
        Some("g is not a homomorphism C -> B".to_string())
    } else {
        first_difference(&image_rel, &Relation::from_tuples(6, data.g_image.clone()))
    };
    checks.push(check("g: C -> B", g_failure, format!("image has {} tuples inside R^B", image_rel.len())));

    let schaefer_failure = match boolean_schaefer_sandwich_search(a, b) {
        Err(e) => Some(e.to_string()),
        Ok(out) if out.certificate.is_some() => Some("found a Boolean sandwich".to_string()),
        Ok(out) => {
            let id = DomainMap::identity(2);
            let witness = |class| {
                out.rejections
                    .iter()
                    .find(|r| r.f == id && r.g.as_ref() == Some(&id) && r.witness == Witness::Schaefer(class))
                    .and_then(|r| r.offending.as_ref().map(|o| o.2.clone()))
            };
            if witness(SchaeferClass::Minority) != Some(digits("111000")) {
                Some("minority witness is not 111000".to_string())
            } else if witness(SchaeferClass::Majority) != Some(digits("000111")) {
                Some("majority witness is not 000111".to_string())
            } else if out.checked != 96 {
                Some(format!("checked {} candidates, expected 96", out.checked))
            } else {
                None
            }
        }
    };
    checks.push(check(
        "no Boolean Schaefer sandwich",
        schaefer_failure,
        "16 map pairs x 6 classes rejected; minority -> 111000, majority -> 000111".to_string(),
    ));

    let presentation = coset_presentation(closure.tuples(), 3).ok();
    let eq_failure = match &presentation {
        None => Some("closure has no presentation".to_string()),
        Some(p) => {
            let computed = p.solutions(729).expect("3^6 points");
            let given = data.equations.solutions(729).expect("3^6 points");
            first_difference(&computed, &closure)
                .map(|d| format!("computed system: {d}"))
                .or_else(|| first_difference(&given, &closure).map(|d| format!("stated system: {d}")))
        }
    };
    checks.push(check("equations", eq_failure, "both systems have exactly the closure as solutions".to_string()));

    ExampleReport {
        checks,
        closure: closure.into_tuples(),
        g_image: image_rel.into_tuples(),
        presentation,
        stated: data.equations.clone(),
    }
}

impl fmt::Display for ExampleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let row = |ts: &[Tuple]| ts.iter().map(|t| fmt_tuple(t)).collect::<Vec<_>>().join(" ");
        writeln!(f, "closure of R^A under x-y+z mod 3 ({} tuples):", self.closure.len())?;
        writeln!(f, "  {}", row(&self.closure))?;
        writeln!(f, "g(R^C) ({} tuples):", self.g_image.len())?;
        writeln!(f, "  {}", row(&self.g_image))?;
        if let Some(p) = &self.presentation {
            writeln!(f, "computed equations for R^C:")?;
            for line in p.to_string().lines() {
                writeln!(f, "  {line}")?;
            }
        }
        writeln!(f, "stated equations for R^C:")?;
        for line in self.stated.to_string().lines() {
            writeln!(f, "  {line}")?;
        }
        for c in &self.checks {
            writeln!(f, "[{}] {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail)?;
        }
        writeln!(f, "{}", if self.passed() { "PASS" } else { "FAIL" })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_example_passes() {
        let report = verify_example(&ExampleData::builtin());
        assert!(report.passed(), "{report}");
        assert_eq!(report.closure.len(), 9);
        assert_eq!(report.checks.len(), 5);
        assert_eq!(report.presentation.as_ref().unwrap().equations.len(), 4);
    }

    #[test]
    fn corrupted_table_names_the_tuple() {
        let mut data = ExampleData::builtin();
        data.closure[3] = digits("222222");
        let report = verify_example(&data);
        assert!(!report.passed());
        let failed = report.checks.iter().find(|c| !c.passed).unwrap();
        assert_eq!(failed.name, "closure");
        assert!(failed.detail.contains("222222"), "{}", failed.detail);
    }

    #[test]
    fn embedded_documents_are_canonical() {
        assert_eq!(source().serialize(), SOURCE_DOC);
        assert_eq!(target().serialize(), TARGET_DOC);
        assert_eq!(middle().serialize(), MIDDLE_DOC);
        assert_eq!(target().relation(0).len(), 60);
    }
}

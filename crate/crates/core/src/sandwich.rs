//! Sandwich search: structures `C` with homomorphisms `A → C → B` whose CSP
//! is tractable for a reason we can certify.
//!
//! Every family search has the same shape. For a candidate map `f` from `A`
//! into a small domain and a witness operation `op` on that domain, the
//! middle structure is the closure of `f(A)` under `op`. Any structure
//! sandwiched via `f` that is preserved by `op` contains this closure, so
//! the closure is the best possible candidate, and the only remaining
//! question is whether it maps into `B`.
//!
//! Candidates are enumerated in a fixed order (size, then `f`
//! lexicographically, then the witness operation by table) and evaluated in
//! parallel chunks; the first accepted candidate in enumeration order wins
//! regardless of completion order.
//!
//! A negative answer means "nothing within the bounds", except for the
//! Boolean Schaefer search and the majority search, where the bounds are
//! complete and exhaustion is a genuine decision.

use std::fmt;
use std::fmt::Write as _;

use rayon::prelude::*;
use thiserror::Error;

use crate::affine::{self, affine_closure_structure};
use crate::homsearch::{self, find_homomorphism, first_escaping_tuple, HomError, SearchLimits};
use crate::polymorph::{
    self, close_structure, is_majority, is_semilattice, parse_operation_body, OperationTable, SchaeferClass,
};
use crate::relstruct::{fmt_tuple, parse_row, parse_structure_body, DomainMap, Lines, ParseError, Structure, Tuple};

const CHUNK: usize = 64;

/// Bounds for the family searches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchConfig {
    /// Largest cyclic group order tried by the affine search.
    pub n_max: usize,
    /// Largest middle structure tried by the semilattice search.
    pub size_bound: usize,
    /// Node budget for every homomorphism search.
    pub node_budget: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self { n_max: 3, size_bound: 3, node_budget: homsearch::DEFAULT_NODE_BUDGET }
    }
}

impl SearchConfig {
    fn limits(&self) -> SearchLimits {
        SearchLimits::with_budget(self.node_budget)
    }

    fn check(&self) -> Result<(), SandwichError> {
        if self.n_max == 0 || self.size_bound == 0 || self.node_budget == 0 {
            return Err(SandwichError::InvalidConfig);
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SandwichError {
    #[error("structures have different signatures")]
    SignatureMismatch,
    #[error("{which} must have a 2-element domain, found {size}")]
    NotBoolean { which: &'static str, size: usize },
    #[error("search bounds must all be positive")]
    InvalidConfig,
    #[error("node budget exhausted while checking {candidate}")]
    Budget { candidate: String, source: HomError },
    #[error(transparent)]
    Hom(#[from] HomError),
}

fn hom_error(candidate: impl FnOnce() -> String, e: HomError) -> SandwichError {
    match e {
        HomError::BudgetExceeded { .. } => SandwichError::Budget { candidate: candidate(), source: e },
        other => SandwichError::Hom(other),
    }
}

/// The four witness families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    Affine,
    Schaefer,
    Semilattice,
    Majority,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::Affine, Family::Schaefer, Family::Semilattice, Family::Majority];

    pub fn name(self) -> &'static str {
        match self {
            Family::Affine => "affine",
            Family::Schaefer => "schaefer",
            Family::Semilattice => "semilattice",
            Family::Majority => "majority",
        }
    }

    pub fn from_name(s: &str) -> Option<Family> {
        Self::ALL.into_iter().find(|f| f.name() == s)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Why the middle structure has a tractable CSP.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// `x − y + z mod n` is a polymorphism.
    Affine {
        n: usize,
    },
    /// One of the six Boolean Schaefer operations is a polymorphism.
    Schaefer(SchaeferClass),
    Semilattice(OperationTable),
    Majority(OperationTable),
}

impl Witness {
    pub fn family(&self) -> Family {
        match self {
            Witness::Affine { .. } => Family::Affine,
            Witness::Schaefer(_) => Family::Schaefer,
            Witness::Semilattice(_) => Family::Semilattice,
            Witness::Majority(_) => Family::Majority,
        }
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Affine { n } => write!(f, "affine n={n}"),
            Witness::Schaefer(c) => write!(f, "schaefer {c}"),
            Witness::Semilattice(op) => write!(f, "semilattice {}", table_digits(op)),
            Witness::Majority(op) => write!(f, "majority {}", table_digits(op)),
        }
    }
}

fn table_digits(op: &OperationTable) -> String {
    let parts: Vec<String> = op.values().iter().map(|v| v.to_string()).collect();
    format!("[{}]", parts.join(""))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertificateError {
    #[error("f is not a homomorphism from A to the middle structure")]
    BadF,
    #[error("g is not a homomorphism from the middle structure to B")]
    BadG,
    #[error("witness does not hold: {0}")]
    BadWitness(String),
    #[error(transparent)]
    Hom(#[from] HomError),
}

/// A verified sandwich `A --f--> C --g--> B` with a tractability witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SandwichCertificate {
    pub middle: Structure,
    pub f: DomainMap,
    pub g: DomainMap,
    pub witness: Witness,
}

impl SandwichCertificate {
    pub fn size(&self) -> usize {
        self.middle.domain_size()
    }

    /// Re-checks both homomorphisms and the witness from scratch.
    pub fn verify(&self, a: &Structure, b: &Structure) -> Result<(), CertificateError> {
        if !homsearch::is_homomorphism(&self.f, a, &self.middle)? {
            return Err(CertificateError::BadF);
        }
        if !homsearch::is_homomorphism(&self.g, &self.middle, b)? {
            return Err(CertificateError::BadG);
        }
        let c = &self.middle;
        let bad = |why: &str| Err(CertificateError::BadWitness(why.to_string()));
        match &self.witness {
            Witness::Affine { n } => match affine::is_affine(c, *n) {
                Ok(true) => Ok(()),
                Ok(false) => bad("x-y+z is not a polymorphism"),
                Err(e) => bad(&e.to_string()),
            },
            Witness::Schaefer(class) => {
                if c.domain_size() != 2 {
                    return bad("middle structure is not Boolean");
                }
                match polymorph::is_polymorphism(&class.table(), c) {
                    Ok(true) => Ok(()),
                    _ => bad("operation is not a polymorphism"),
                }
            }
            Witness::Semilattice(op) | Witness::Majority(op) => {
                let shape_ok = match &self.witness {
                    Witness::Semilattice(_) => is_semilattice(op),
                    _ => is_majority(op),
                };
                if !shape_ok {
                    return bad("operation is not of the stated kind");
                }
                match polymorph::is_polymorphism(op, c) {
                    Ok(true) => Ok(()),
                    _ => bad("operation is not a polymorphism"),
                }
            }
        }
    }

    /// The certificate document: the middle structure, the two maps and
    /// the witness, followed by the operation table for the families that
    /// carry one.
    ///
    /// ```text
    /// domain 3
    /// rel R 6
    /// ...
    /// end
    /// hom f: 0 1
    /// hom g: 0 1 0
    /// witness: affine n=3
    /// ```
    pub fn to_document(&self) -> String {
        let mut out = self.middle.serialize();
        writeln!(out, "hom f: {}", self.f).unwrap();
        writeln!(out, "hom g: {}", self.g).unwrap();
        match &self.witness {
            Witness::Affine { n } => writeln!(out, "witness: affine n={n}").unwrap(),
            Witness::Schaefer(c) => writeln!(out, "witness: schaefer {c}").unwrap(),
            Witness::Semilattice(op) => {
                out.push_str("witness: semilattice\n");
                out.push_str(&op.serialize("semilattice"));
            }
            Witness::Majority(op) => {
                out.push_str("witness: majority\n");
                out.push_str(&op.serialize("majority"));
            }
        }
        out
    }
}

/// A parsed certificate document. The target size of `g` is not part of
/// the document, so turning it into a [`SandwichCertificate`] needs `B`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertificateDocument {
    pub middle: Structure,
    pub f: Vec<usize>,
    pub g: Vec<usize>,
    pub witness: Witness,
}

impl CertificateDocument {
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut lines = Lines::new(text);
        let middle = parse_structure_body(&mut lines)?;
        let f = parse_hom_line(&mut lines, "f")?;
        let g = parse_hom_line(&mut lines, "g")?;
        if g.len() != middle.domain_size() {
            return Err(ParseError::new(
                lines.last_line(),
                format!("g has {} values but the middle structure has {} elements", g.len(), middle.domain_size()),
            ));
        }
        if let Some(&v) = f.iter().find(|&&v| v >= middle.domain_size()) {
            return Err(ParseError::new(lines.last_line(), format!("f value {v} is outside the middle structure")));
        }
        let (n, line) = lines.expect("`witness: ...`")?;
        let rest = line.strip_prefix("witness:").ok_or_else(|| ParseError::new(n, "expected `witness: ...`"))?.trim();
        let toks: Vec<&str> = rest.split_whitespace().collect();
        let witness = match toks.as_slice() {
            ["affine", n_eq] => {
                let n_val = n_eq
                    .strip_prefix("n=")
                    .and_then(|v| v.parse::<usize>().ok())
                    .ok_or_else(|| ParseError::new(n, "expected `affine n=<order>`"))?;
                Witness::Affine { n: n_val }
            }
            ["schaefer", class] => Witness::Schaefer(
                SchaeferClass::from_name(class)
                    .ok_or_else(|| ParseError::new(n, format!("unknown class `{class}`")))?,
            ),
            ["semilattice"] | ["majority"] => {
                let op = parse_operation_body(&mut lines)?.table;
                if toks[0] == "semilattice" {
                    Witness::Semilattice(op)
                } else {
                    Witness::Majority(op)
                }
            }
            _ => return Err(ParseError::new(n, format!("unknown witness `{rest}`"))),
        };
        if let Some((n, line)) = lines.next() {
            return Err(ParseError::new(n, format!("unexpected trailing line `{line}`")));
        }
        Ok(Self { middle, f, g, witness })
    }

    pub fn resolve(self, b_domain_size: usize) -> Result<SandwichCertificate, String> {
        let f = DomainMap::new(self.middle.domain_size(), self.f).map_err(|e| e.to_string())?;
        let g = DomainMap::new(b_domain_size, self.g).map_err(|e| e.to_string())?;
        Ok(SandwichCertificate { middle: self.middle, f, g, witness: self.witness })
    }
}

fn parse_hom_line(lines: &mut Lines<'_>, name: &str) -> Result<Vec<usize>, ParseError> {
    let (n, line) = lines.expect(&format!("`hom {name}: ...`"))?;
    let prefix = format!("hom {name}:");
    let rest = line
        .strip_prefix(prefix.as_str())
        .ok_or_else(|| ParseError::new(n, format!("expected `{prefix} <values>`")))?;
    let values = parse_row(n, rest)?;
    if values.is_empty() {
        return Err(ParseError::new(n, format!("map {name} has no values")));
    }
    Ok(values)
}

/// A candidate that was tried and rejected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rejection {
    /// Size of the candidate middle structure.
    pub size: usize,
    pub f: DomainMap,
    pub witness: Witness,
    /// The second map, when a specific one was tested.
    pub g: Option<DomainMap>,
    /// A middle tuple whose image under `g` misses `B`, when `g` is known.
    pub offending: Option<(usize, Tuple, Tuple)>,
    /// Tuples the closure added to `f(A)`, by relation index.
    pub added: Vec<(usize, Tuple)>,
}

impl fmt::Display for Rejection {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(out, "size {} f=[{}] {}", self.size, self.f, self.witness)?;
        if let Some(g) = &self.g {
            write!(out, " g=[{g}]")?;
        }
        if let Some((_, t, img)) = &self.offending {
            write!(out, ": {} -> {} not in B", fmt_tuple(t), fmt_tuple(img))?;
        } else {
            write!(out, ": no map into B")?;
        }
        if !self.added.is_empty() {
            let shown: Vec<String> = self.added.iter().take(8).map(|(_, t)| fmt_tuple(t)).collect();
            let more = if self.added.len() > 8 { " ..." } else { "" };
            write!(out, " (closure added {}{more})", shown.join(" "))?;
        }
        Ok(())
    }
}

/// Result of one family search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOutcome {
    pub certificate: Option<SandwichCertificate>,
    /// Number of (map, witness) candidates examined, counting each tested
    /// second map separately for the Schaefer search.
    pub checked: usize,
    pub rejections: Vec<Rejection>,
    /// True when exhausting the bounds decides nonexistence for the family.
    pub decisive: bool,
}

enum Verdict {
    Accept(SandwichCertificate),
    Reject(Vec<Rejection>),
}

/// Evaluates candidates in parallel chunks and returns the first accepted
/// one in input order, or the rejections of all of them.
fn scan<C: Sync>(
    candidates: impl Iterator<Item = C>,
    eval: impl Fn(&C) -> Result<Verdict, SandwichError> + Sync,
) -> Result<(Option<SandwichCertificate>, Vec<Rejection>, usize), SandwichError> {
    let mut rejections = Vec::new();
    let mut checked = 0;
    let mut candidates = candidates.peekable();
    while candidates.peek().is_some() {
        let chunk: Vec<C> = candidates.by_ref().take(CHUNK).collect();
        let verdicts: Vec<Result<Verdict, SandwichError>> = chunk.par_iter().map(&eval).collect();
        for v in verdicts {
            match v? {
                Verdict::Accept(cert) => {
                    checked += 1;
                    return Ok((Some(cert), rejections, checked));
                }
                Verdict::Reject(rs) => {
                    checked += rs.len().max(1);
                    rejections.extend(rs);
                }
            }
        }
    }
    Ok((None, rejections, checked))
}

fn added_tuples(base: &Structure, closed: &Structure) -> Vec<(usize, Tuple)> {
    closed
        .relations()
        .iter()
        .zip(base.relations())
        .enumerate()
        .flat_map(|(i, (rc, rb))| rc.iter().filter(|t| !rb.contains(t)).map(move |t| (i, t.clone())))
        .collect()
}

/// Finds `f: A → C` and `g: C → B`, if both exist.
pub fn check_sandwich(
    a: &Structure,
    c: &Structure,
    b: &Structure,
    limits: SearchLimits,
) -> Result<Option<(DomainMap, DomainMap)>, SandwichError> {
    if !a.same_type(c) || !c.same_type(b) {
        return Err(SandwichError::SignatureMismatch);
    }
    let Some(f) = find_homomorphism(a, c, limits).map_err(|e| hom_error(|| "A -> C".into(), e))?.map else {
        return Ok(None);
    };
    let Some(g) = find_homomorphism(c, b, limits).map_err(|e| hom_error(|| "C -> B".into(), e))?.map else {
        return Ok(None);
    };
    Ok(Some((f, g)))
}

/// Evaluates one closure candidate: `middle` is the closure of `f(A)`.
fn try_middle(
    base: &Structure,
    middle: Structure,
    f: &DomainMap,
    b: &Structure,
    witness: Witness,
    limits: SearchLimits,
) -> Result<Verdict, SandwichError> {
    let found =
        find_homomorphism(&middle, b, limits).map_err(|e| hom_error(|| format!("f=[{f}] with {witness}"), e))?;
    Ok(match found.map {
        Some(g) => Verdict::Accept(SandwichCertificate { middle, f: f.clone(), g, witness }),
        None => Verdict::Reject(vec![Rejection {
            size: middle.domain_size(),
            f: f.clone(),
            added: added_tuples(base, &middle),
            witness,
            g: None,
            offending: None,
        }]),
    })
}

/// Affine middle structures over `ℤ_n` for `n = 1..=n_max`.
///
/// For fixed `n`, any affine `C′` on `ℤ_n` sandwiched via `f′` contains the
/// affine closure of `f′(A)` relation by relation, so that closure is
/// sandwiched too. The search therefore cannot miss a witness of cyclic
/// order `≤ n_max`. Non-cyclic groups are not searched.
pub fn find_affine_sandwich(a: &Structure, b: &Structure, cfg: &SearchConfig) -> Result<SearchOutcome, SandwichError> {
    cfg.check()?;
    if !a.same_type(b) {
        return Err(SandwichError::SignatureMismatch);
    }
    let limits = cfg.limits();
    let candidates = (1..=cfg.n_max).flat_map(|n| DomainMap::all(a.domain_size(), n).map(move |f| (n, f)));
    let (certificate, rejections, checked) = scan(candidates, |(n, f)| {
        let base = a.apply_map(f).expect("map source matches A");
        let middle = affine_closure_structure(&base, *n).expect("image entries are residues mod n");
        try_middle(&base, middle, f, b, Witness::Affine { n: *n }, limits)
    })?;
    Ok(SearchOutcome { certificate, checked, rejections, decisive: false })
}

fn require_boolean(s: &Structure, which: &'static str) -> Result<(), SandwichError> {
    if s.domain_size() != 2 {
        return Err(SandwichError::NotBoolean { which, size: s.domain_size() });
    }
    Ok(())
}

/// Boolean middle structures with one of the six Schaefer polymorphisms.
///
/// Every pair of maps `f: A → {0,1}`, `h: {0,1} → B` and every class is
/// tried: `D` is the closure of `f(A)` under the class operation and is
/// accepted when `h` maps it into `B`. All 16 map pairs are covered, not
/// only the bijections. Exhaustion decides that no Boolean sandwich has a
/// Schaefer polymorphism.
pub fn boolean_schaefer_sandwich_search(a: &Structure, b: &Structure) -> Result<SearchOutcome, SandwichError> {
    require_boolean(a, "A")?;
    require_boolean(b, "B")?;
    if !a.same_type(b) {
        return Err(SandwichError::SignatureMismatch);
    }
    let candidates = DomainMap::all(2, 2).flat_map(|f| SchaeferClass::ALL.into_iter().map(move |c| (f.clone(), c)));
    let (certificate, rejections, checked) = scan(candidates, |(f, class)| {
        let base = a.apply_map(f).expect("Boolean map");
        let middle = close_structure(&class.table(), &base);
        let added = added_tuples(&base, &middle);
        let mut rejected = Vec::new();
        for h in DomainMap::all(2, 2) {
            match first_escaping_tuple(&h, &middle, b) {
                None => {
                    return Ok(Verdict::Accept(SandwichCertificate {
                        middle,
                        f: f.clone(),
                        g: h,
                        witness: Witness::Schaefer(*class),
                    }))
                }
                Some((rel, t)) => rejected.push(Rejection {
                    size: 2,
                    f: f.clone(),
                    witness: Witness::Schaefer(*class),
                    g: Some(h.clone()),
                    offending: Some((rel, t.to_vec(), h.apply_tuple(t))),
                    added: added.clone(),
                }),
            }
        }
        Ok(Verdict::Reject(rejected))
    })?;
    Ok(SearchOutcome { certificate, checked, rejections, decisive: true })
}

/// All semilattice operations on `0..m`, in lexicographic order of their
/// tables. Only the entries above the diagonal are free; they come first in
/// row-major order, so enumerating them lexicographically enumerates the
/// tables lexicographically.
pub fn semilattices(m: usize) -> Vec<OperationTable> {
    assert!(m >= 1);
    let pairs: Vec<(usize, usize)> = (0..m).flat_map(|i| (i + 1..m).map(move |j| (i, j))).collect();
    let mut free = vec![0; pairs.len()];
    let mut out = Vec::new();
    loop {
        let mut values = vec![0; m * m];
        for i in 0..m {
            values[i * m + i] = i;
        }
        for (&(i, j), &v) in pairs.iter().zip(&free) {
            values[i * m + j] = v;
            values[j * m + i] = v;
        }
        let op = OperationTable::from_values(m, m, 2, values).expect("binary table");
        if is_semilattice(&op) {
            out.push(op);
        }
        let mut i = free.len();
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            free[i] += 1;
            if free[i] < m {
                break;
            }
            free[i] = 0;
        }
    }
}

/// Middle structures of size `m ≤ min(size_bound, |A|)` preserved by a
/// semilattice operation, reached by surjective maps `f: A → 0..m`.
///
/// Restricting a conservative polymorphism to the image of `f` keeps it a
/// polymorphism, so a conservative semilattice witness of any size yields
/// one of size at most `|A|`; within that family, exhausting
/// `size_bound ≥ |A|` is complete. Non-conservative semilattices are
/// searched as well but only within the bound.
pub fn conservative_sandwich_search(
    a: &Structure,
    b: &Structure,
    cfg: &SearchConfig,
) -> Result<SearchOutcome, SandwichError> {
    cfg.check()?;
    if !a.same_type(b) {
        return Err(SandwichError::SignatureMismatch);
    }
    let limits = cfg.limits();
    let max_m = cfg.size_bound.min(a.domain_size());
    let ops_by_size: Vec<Vec<OperationTable>> =
        (0..=max_m).map(|m| if m == 0 { Vec::new() } else { semilattices(m) }).collect();
    let candidates = (1..=max_m).flat_map(|m| {
        let ops = &ops_by_size[m];
        DomainMap::all(a.domain_size(), m)
            .filter(DomainMap::is_surjective)
            .flat_map(move |f| ops.iter().map(move |op| (f.clone(), op)))
    });
    let (certificate, rejections, checked) = scan(candidates, |(f, op)| {
        let base = a.apply_map(f).expect("map source matches A");
        let middle = close_structure(op, &base);
        try_middle(&base, middle, f, b, Witness::Semilattice((*op).clone()), limits)
    })?;
    Ok(SearchOutcome { certificate, checked, rejections, decisive: false })
}

/// The majority operation on `0..m` for `m ≤ 2` (unique in both cases).
pub fn majority_table(m: usize) -> OperationTable {
    assert!((1..=2).contains(&m));
    OperationTable::from_fn(m, m, 3, |x| if x[1] == x[2] { x[1] } else { x[0] }).expect("ternary table")
}

/// Middle structures of size at most 2 with a majority polymorphism, for
/// Boolean `A`. A majority polymorphism restricts to the image of `f`,
/// which has at most two elements, so this bound is complete and
/// exhaustion is a decision.
pub fn majority_sandwich_search(
    a: &Structure,
    b: &Structure,
    cfg: &SearchConfig,
) -> Result<SearchOutcome, SandwichError> {
    cfg.check()?;
    require_boolean(a, "A")?;
    if !a.same_type(b) {
        return Err(SandwichError::SignatureMismatch);
    }
    let limits = cfg.limits();
    let candidates = (1..=2).flat_map(|m| DomainMap::all(2, m).map(move |f| (m, f)));
    let (certificate, rejections, checked) = scan(candidates, |(m, f)| {
        let op = majority_table(*m);
        let base = a.apply_map(f).expect("Boolean map");
        let middle = close_structure(&op, &base);
        try_middle(&base, middle, f, b, Witness::Majority(op), limits)
    })?;
    Ok(SearchOutcome { certificate, checked, rejections, decisive: true })
}

/// Shrinks a sandwich `A --f--> C --g--> B` to the substructure induced on
/// `f(A)`. Returns the smaller middle, the corestricted `f` and the
/// restricted `g`.
pub fn restrict_to_image(f: &DomainMap, c: &Structure, g: &DomainMap) -> (Structure, DomainMap, DomainMap) {
    let image = f.image();
    let induced = c.induced_substructure(&image).expect("image is a nonempty subset");
    let f_new = f.values().iter().map(|&x| induced.relabel(x).expect("value lies in the image")).collect();
    let f_new = DomainMap::new(induced.structure.domain_size(), f_new).expect("relabeled values are in range");
    let g_new = induced.inclusion.then(g).expect("inclusion lands in C");
    (induced.structure, f_new, g_new)
}

/// Per-family outcome in a [`SizeReport`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FamilyStatus {
    Found(SandwichCertificate),
    /// Nothing found. `decisive` is true when that settles nonexistence.
    Exhausted {
        decisive: bool,
        bounds: String,
        rejections: Vec<Rejection>,
    },
    NotApplicable(String),
    Failed(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyReport {
    pub family: Family,
    pub status: FamilyStatus,
}

impl FamilyReport {
    pub fn min_size(&self) -> Option<usize> {
        match &self.status {
            FamilyStatus::Found(c) => Some(c.size()),
            _ => None,
        }
    }
}

/// Bounded estimate of the smallest tractable sandwiched structure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SizeReport {
    pub families: Vec<FamilyReport>,
}

impl SizeReport {
    /// Smallest certified size over all families. An upper bound on the
    /// true minimum; `None` says nothing about nonexistence.
    pub fn overall(&self) -> Option<usize> {
        self.families.iter().filter_map(FamilyReport::min_size).min()
    }

    pub fn family(&self, family: Family) -> &FamilyReport {
        self.families.iter().find(|r| r.family == family).expect("all families are reported")
    }

    pub fn errors(&self) -> Vec<&str> {
        self.families
            .iter()
            .filter_map(|r| match &r.status {
                FamilyStatus::Failed(e) => Some(e.as_str()),
                _ => None,
            })
            .collect()
    }
}

impl fmt::Display for SizeReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.families {
            match &r.status {
                FamilyStatus::Found(c) => writeln!(f, "{}: found size {} ({})", r.family, c.size(), c.witness)?,
                FamilyStatus::Exhausted { decisive, bounds, .. } => {
                    let what = if *decisive { "none exists" } else { "not found within bounds" };
                    writeln!(f, "{}: {what} ({bounds})", r.family)?
                }
                FamilyStatus::NotApplicable(why) => writeln!(f, "{}: not applicable ({why})", r.family)?,
                FamilyStatus::Failed(e) => writeln!(f, "{}: error: {e}", r.family)?,
            }
        }
        match self.overall() {
            Some(n) => writeln!(f, "overall: {n}"),
            None => writeln!(f, "overall: nothing found within bounds"),
        }
    }
}

/// Bound description used in reports.
pub fn family_bounds(family: Family, a: &Structure, cfg: &SearchConfig) -> String {
    match family {
        Family::Affine => format!("Z_n for n <= {}", cfg.n_max),
        Family::Schaefer => "all 16 map pairs x 6 classes".to_string(),
        Family::Semilattice => format!("size <= {}", cfg.size_bound.min(a.domain_size())),
        Family::Majority => "size <= 2".to_string(),
    }
}

/// Runs one family search.
pub fn search_family(
    family: Family,
    a: &Structure,
    b: &Structure,
    cfg: &SearchConfig,
) -> Result<SearchOutcome, SandwichError> {
    match family {
        Family::Affine => find_affine_sandwich(a, b, cfg),
        Family::Schaefer => boolean_schaefer_sandwich_search(a, b),
        Family::Semilattice => conservative_sandwich_search(a, b, cfg),
        Family::Majority => majority_sandwich_search(a, b, cfg),
    }
}

/// Runs all four family searches. Budget errors are recorded per family
/// and do not stop the other searches.
pub fn min_sandwich_size_bounded(
    a: &Structure,
    b: &Structure,
    cfg: &SearchConfig,
) -> Result<SizeReport, SandwichError> {
    cfg.check()?;
    if !a.same_type(b) {
        return Err(SandwichError::SignatureMismatch);
    }
    let families = Family::ALL
        .into_iter()
        .map(|family| {
            let applicable = match family {
                Family::Schaefer if a.domain_size() != 2 || b.domain_size() != 2 => {
                    Err("needs Boolean A and B".to_string())
                }
                Family::Majority if a.domain_size() != 2 => Err("needs Boolean A".to_string()),
                _ => Ok(()),
            };
            let status = match applicable {
                Err(why) => FamilyStatus::NotApplicable(why),
                Ok(()) => match search_family(family, a, b, cfg) {
                    Ok(SearchOutcome { certificate: Some(c), .. }) => FamilyStatus::Found(c),
                    Ok(out) => FamilyStatus::Exhausted {
                        decisive: out.decisive,
                        bounds: family_bounds(family, a, cfg),
                        rejections: out.rejections,
                    },
                    Err(e) => FamilyStatus::Failed(e.to_string()),
                },
            };
            FamilyReport { family, status }
        })
        .collect();
    Ok(SizeReport { families })
}

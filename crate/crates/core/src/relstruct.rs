//! Finite relational structures.
//!
//! A [`Structure`] has domain `0..m` and one relation per [`Signature`]
//! entry. Relations are stored as sorted, duplicate-free tuple lists so that
//! serialization is canonical and membership is a binary search.
//!
//! The text format is line based:
//!
//! ```text
//! domain 2
//! rel R 6
//! 0 0 1 1 1 0
//! 0 1 0 1 0 1
//! 1 0 0 0 1 1
//! end
//! ```
//!
//! Lines starting with `#` and blank lines are ignored.

use std::fmt;
use std::fmt::Write as _;

use thiserror::Error;

/// A domain element. Domains are always `0..m`.
pub type Elem = usize;

/// A relation tuple.
pub type Tuple = Vec<Elem>;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RelSymbol {
    pub name: String,
    pub arity: usize,
}

/// Ordered list of relation symbols. Two structures are of the same type
/// when their signatures are equal.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Signature {
    rels: Vec<RelSymbol>,
}

impl Signature {
    pub fn new(rels: Vec<RelSymbol>) -> Result<Self, StructureError> {
        for (i, r) in rels.iter().enumerate() {
            if r.arity == 0 {
                return Err(StructureError::ZeroArity(r.name.clone()));
            }
            if !is_identifier(&r.name) {
                return Err(StructureError::BadName(r.name.clone()));
            }
            if rels[..i].iter().any(|s| s.name == r.name) {
                return Err(StructureError::DuplicateName(r.name.clone()));
            }
        }
        Ok(Self { rels })
    }

    /// Signature with a single relation symbol.
    pub fn single(name: &str, arity: usize) -> Result<Self, StructureError> {
        Self::new(vec![RelSymbol { name: name.to_string(), arity }])
    }

    pub fn symbols(&self) -> &[RelSymbol] {
        &self.rels
    }

    pub fn len(&self) -> usize {
        self.rels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rels.is_empty()
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

/// A relation: a sorted, duplicate-free set of tuples of one arity.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Relation {
    arity: usize,
    tuples: Vec<Tuple>,
}

impl Relation {
    /// Builds a relation, sorting and collapsing duplicates. Tuples must
    /// already have length `arity`.
    pub fn from_tuples(arity: usize, mut tuples: Vec<Tuple>) -> Self {
        debug_assert!(tuples.iter().all(|t| t.len() == arity));
        tuples.sort_unstable();
        tuples.dedup();
        Self { arity, tuples }
    }

    pub fn empty(arity: usize) -> Self {
        Self { arity, tuples: Vec::new() }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn tuples(&self) -> &[Tuple] {
        &self.tuples
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn contains(&self, t: &[Elem]) -> bool {
        self.tuples.binary_search_by(|s| s.as_slice().cmp(t)).is_ok()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Tuple> {
        self.tuples.iter()
    }

    pub fn into_tuples(self) -> Vec<Tuple> {
        self.tuples
    }

    pub fn is_subset(&self, other: &Relation) -> bool {
        self.tuples.iter().all(|t| other.contains(t))
    }
}

impl<'a> IntoIterator for &'a Relation {
    type Item = &'a Tuple;
    type IntoIter = std::slice::Iter<'a, Tuple>;

    fn into_iter(self) -> Self::IntoIter {
        self.tuples.iter()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("domain must be nonempty")]
    EmptyDomain,
    #[error("relation `{0}` has arity 0")]
    ZeroArity(String),
    #[error("`{0}` is not a valid relation name")]
    BadName(String),
    #[error("relation name `{0}` is declared twice")]
    DuplicateName(String),
    #[error("expected {expected} relations for the signature, got {got}")]
    RelationCount { expected: usize, got: usize },
    #[error("{0}")]
    Invalid(Violation),
    #[error("signatures differ")]
    SignatureMismatch,
    #[error("map has source size {map} but structure has domain size {structure}")]
    SizeMismatch { map: usize, structure: usize },
    #[error("subset must be nonempty")]
    EmptySubset,
    #[error("subset element {elem} is outside domain of size {domain}")]
    SubsetOutOfRange { elem: Elem, domain: usize },
}

/// One broken invariant, reported by [`RawStructure::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    EmptyDomain,
    ArityMismatch { relation: String, tuple: Tuple, arity: usize },
    OutOfRange { relation: String, tuple: Tuple, domain: usize },
    Duplicate { relation: String, tuple: Tuple },
    RelationCount { expected: usize, got: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::EmptyDomain => write!(f, "domain is empty"),
            Violation::ArityMismatch { relation, tuple, arity } => {
                write!(f, "tuple {} in `{relation}` has length {}, expected {arity}", fmt_tuple(tuple), tuple.len())
            }
            Violation::OutOfRange { relation, tuple, domain } => {
                write!(f, "tuple {} in `{relation}` has an entry outside domain of size {domain}", fmt_tuple(tuple))
            }
            Violation::Duplicate { relation, tuple } => {
                write!(f, "tuple {} appears twice in `{relation}`", fmt_tuple(tuple))
            }
            Violation::RelationCount { expected, got } => {
                write!(f, "expected {expected} relations, got {got}")
            }
        }
    }
}

/// Renders a tuple the way the examples in the literature write them:
/// digits concatenated when every entry is a single digit, space separated
/// otherwise.
pub fn fmt_tuple(t: &[Elem]) -> String {
    if t.iter().all(|&x| x < 10) {
        t.iter().map(|x| char::from(b'0' + *x as u8)).collect()
    } else {
        let parts: Vec<String> = t.iter().map(|x| x.to_string()).collect();
        format!("({})", parts.join(","))
    }
}

/// Parses the compact digit notation, e.g. `"100011"`.
pub fn digits(s: &str) -> Tuple {
    s.bytes()
        .map(|b| {
            assert!(b.is_ascii_digit(), "not a digit string: {s}");
            (b - b'0') as Elem
        })
        .collect()
}

/// Unvalidated structure data, as read from a file or assembled by hand.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawStructure {
    pub domain_size: usize,
    pub signature: Signature,
    pub relations: Vec<Vec<Tuple>>,
}

impl RawStructure {
    /// All invariant violations, in signature order. Empty iff the data
    /// forms a valid [`Structure`].
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.domain_size == 0 {
            out.push(Violation::EmptyDomain);
        }
        if self.relations.len() != self.signature.len() {
            out.push(Violation::RelationCount { expected: self.signature.len(), got: self.relations.len() });
            return out;
        }
        for (sym, tuples) in self.signature.symbols().iter().zip(&self.relations) {
            let mut seen = std::collections::HashSet::new();
            for t in tuples {
                if t.len() != sym.arity {
                    out.push(Violation::ArityMismatch {
                        relation: sym.name.clone(),
                        tuple: t.clone(),
                        arity: sym.arity,
                    });
                } else if t.iter().any(|&x| x >= self.domain_size) {
                    out.push(Violation::OutOfRange {
                        relation: sym.name.clone(),
                        tuple: t.clone(),
                        domain: self.domain_size,
                    });
                } else if !seen.insert(t) {
                    out.push(Violation::Duplicate { relation: sym.name.clone(), tuple: t.clone() });
                }
            }
        }
        out
    }
}

/// A finite relational structure with domain `0..domain_size`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Structure {
    domain_size: usize,
    signature: Signature,
    relations: Vec<Relation>,
}

impl Structure {
    /// Builds a structure. Duplicate tuples are collapsed; arity and range
    /// errors are rejected.
    pub fn new(domain_size: usize, signature: Signature, relations: Vec<Vec<Tuple>>) -> Result<Self, StructureError> {
        let raw = RawStructure { domain_size, signature, relations };
        if let Some(v) = raw.validate().into_iter().find(|v| !matches!(v, Violation::Duplicate { .. })) {
            return Err(match v {
                Violation::EmptyDomain => StructureError::EmptyDomain,
                Violation::RelationCount { expected, got } => StructureError::RelationCount { expected, got },
                other => StructureError::Invalid(other),
            });
        }
        Ok(Self::from_checked(raw))
    }

    /// Strict conversion: any violation, duplicates included, is an error.
    pub fn from_raw(raw: RawStructure) -> Result<Self, StructureError> {
        match raw.validate().into_iter().next() {
            None => Ok(Self::from_checked(raw)),
            Some(Violation::EmptyDomain) => Err(StructureError::EmptyDomain),
            Some(Violation::RelationCount { expected, got }) => Err(StructureError::RelationCount { expected, got }),
            Some(v) => Err(StructureError::Invalid(v)),
        }
    }

    fn from_checked(raw: RawStructure) -> Self {
        let relations = raw
            .signature
            .symbols()
            .iter()
            .zip(raw.relations)
            .map(|(sym, tuples)| Relation::from_tuples(sym.arity, tuples))
            .collect();
        Self { domain_size: raw.domain_size, signature: raw.signature, relations }
    }

    /// Structure with one relation named `R`.
    pub fn single(domain_size: usize, arity: usize, tuples: Vec<Tuple>) -> Result<Self, StructureError> {
        Self::new(domain_size, Signature::single("R", arity)?, vec![tuples])
    }

    /// Same signature, new domain size and relations. Used by constructions
    /// that already guarantee the invariants.
    pub(crate) fn with_relations(&self, domain_size: usize, relations: Vec<Relation>) -> Self {
        debug_assert_eq!(relations.len(), self.signature.len());
        debug_assert!(relations.iter().all(|r| r.iter().all(|t| t.iter().all(|&x| x < domain_size))));
        Self { domain_size, signature: self.signature.clone(), relations }
    }

    pub fn domain_size(&self) -> usize {
        self.domain_size
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn relation(&self, i: usize) -> &Relation {
        &self.relations[i]
    }

    pub fn relation_by_name(&self, name: &str) -> Option<&Relation> {
        self.signature.symbols().iter().position(|s| s.name == name).map(|i| &self.relations[i])
    }

    pub fn same_type(&self, other: &Structure) -> bool {
        self.signature == other.signature
    }

    pub fn to_raw(&self) -> RawStructure {
        RawStructure {
            domain_size: self.domain_size,
            signature: self.signature.clone(),
            relations: self.relations.iter().map(|r| r.tuples.clone()).collect(),
        }
    }

    /// Invariant violations of this structure. Always empty for values
    /// obtained through the public constructors.
    pub fn validate(&self) -> Vec<Violation> {
        self.to_raw().validate()
    }

    /// Image structure `f(self)`: domain `f.target_size()` and relations
    /// `{ f∘t : t ∈ R }`.
    pub fn apply_map(&self, f: &DomainMap) -> Result<Structure, StructureError> {
        if f.source_size() != self.domain_size {
            return Err(StructureError::SizeMismatch { map: f.source_size(), structure: self.domain_size });
        }
        let relations = self
            .relations
            .iter()
            .map(|r| Relation::from_tuples(r.arity, r.iter().map(|t| f.apply_tuple(t)).collect()))
            .collect();
        Ok(self.with_relations(f.target_size(), relations))
    }

    /// Induced substructure on `subset`, relabeled to `0..|subset|` in
    /// ascending order of the original elements.
    pub fn induced_substructure(&self, subset: &[Elem]) -> Result<Induced, StructureError> {
        let mut elems = subset.to_vec();
        elems.sort_unstable();
        elems.dedup();
        if elems.is_empty() {
            return Err(StructureError::EmptySubset);
        }
        if let Some(&e) = elems.iter().find(|&&e| e >= self.domain_size) {
            return Err(StructureError::SubsetOutOfRange { elem: e, domain: self.domain_size });
        }
        let mut relabel = vec![None; self.domain_size];
        for (new, &old) in elems.iter().enumerate() {
            relabel[old] = Some(new);
        }
        let relations = self
            .relations
            .iter()
            .map(|r| {
                let kept = r.iter().filter_map(|t| t.iter().map(|&x| relabel[x]).collect::<Option<Tuple>>()).collect();
                Relation::from_tuples(r.arity, kept)
            })
            .collect();
        let structure = self.with_relations(elems.len(), relations);
        let inclusion = DomainMap::new(self.domain_size, elems).expect("subset elements were range checked");
        Ok(Induced { structure, inclusion })
    }

    /// Canonical text form; see the module docs.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        writeln!(out, "domain {}", self.domain_size).unwrap();
        for (sym, rel) in self.signature.symbols().iter().zip(&self.relations) {
            writeln!(out, "rel {} {}", sym.name, sym.arity).unwrap();
            for t in rel {
                let parts: Vec<String> = t.iter().map(|x| x.to_string()).collect();
                writeln!(out, "{}", parts.join(" ")).unwrap();
            }
            writeln!(out, "end").unwrap();
        }
        out
    }

    pub fn parse(text: &str) -> Result<Structure, ParseError> {
        let mut lines = Lines::new(text);
        let s = parse_structure_body(&mut lines)?;
        if let Some((n, line)) = lines.next() {
            return Err(ParseError::new(n, format!("unexpected trailing line `{line}`")));
        }
        Ok(s)
    }
}

impl fmt::Display for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.serialize())
    }
}

/// Result of [`Structure::induced_substructure`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Induced {
    pub structure: Structure,
    /// Maps each new element to the original element it came from. This is
    /// a homomorphism from the substructure into the original.
    pub inclusion: DomainMap,
}

impl Induced {
    /// New label of an original element, if it lies in the subset.
    pub fn relabel(&self, original: Elem) -> Option<Elem> {
        self.inclusion.values().iter().position(|&x| x == original)
    }
}

/// A total map `0..source_size -> 0..target_size`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DomainMap {
    target_size: usize,
    values: Vec<Elem>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MapError {
    #[error("map must have a nonempty source")]
    EmptySource,
    #[error("value {value} at position {position} is outside target of size {target}")]
    OutOfRange { position: usize, value: Elem, target: usize },
    #[error("cannot compose: inner target size {inner} differs from outer source size {outer}")]
    NotComposable { inner: usize, outer: usize },
}

impl DomainMap {
    pub fn new(target_size: usize, values: Vec<Elem>) -> Result<Self, MapError> {
        if values.is_empty() {
            return Err(MapError::EmptySource);
        }
        if let Some((position, &value)) = values.iter().enumerate().find(|(_, &v)| v >= target_size) {
            return Err(MapError::OutOfRange { position, value, target: target_size });
        }
        Ok(Self { target_size, values })
    }

    pub fn identity(size: usize) -> Self {
        Self { target_size: size, values: (0..size).collect() }
    }

    pub fn constant(source_size: usize, target_size: usize, value: Elem) -> Self {
        assert!(value < target_size && source_size > 0);
        Self { target_size, values: vec![value; source_size] }
    }

    pub fn source_size(&self) -> usize {
        self.values.len()
    }

    pub fn target_size(&self) -> usize {
        self.target_size
    }

    pub fn values(&self) -> &[Elem] {
        &self.values
    }

    #[inline]
    pub fn get(&self, x: Elem) -> Elem {
        self.values[x]
    }

    pub fn apply_tuple(&self, t: &[Elem]) -> Tuple {
        t.iter().map(|&x| self.values[x]).collect()
    }

    /// `outer ∘ self`.
    pub fn then(&self, outer: &DomainMap) -> Result<DomainMap, MapError> {
        if self.target_size != outer.source_size() {
            return Err(MapError::NotComposable { inner: self.target_size, outer: outer.source_size() });
        }
        Ok(DomainMap { target_size: outer.target_size, values: self.values.iter().map(|&x| outer.values[x]).collect() })
    }

    pub fn image(&self) -> Vec<Elem> {
        let mut img = self.values.clone();
        img.sort_unstable();
        img.dedup();
        img
    }

    pub fn is_surjective(&self) -> bool {
        self.image().len() == self.target_size
    }

    /// All maps `0..source -> 0..target` in lexicographic order of their
    /// value arrays.
    pub fn all(source_size: usize, target_size: usize) -> AllMaps {
        AllMaps { target_size, next: (source_size > 0 && target_size > 0).then(|| vec![0; source_size]) }
    }
}

impl fmt::Display for DomainMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.values.iter().map(|x| x.to_string()).collect();
        f.write_str(&parts.join(" "))
    }
}

/// Iterator returned by [`DomainMap::all`].
pub struct AllMaps {
    target_size: usize,
    next: Option<Vec<Elem>>,
}

impl Iterator for AllMaps {
    type Item = DomainMap;

    fn next(&mut self) -> Option<DomainMap> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        let mut i = succ.len();
        self.next = loop {
            if i == 0 {
                break None;
            }
            i -= 1;
            succ[i] += 1;
            if succ[i] < self.target_size {
                break Some(succ);
            }
            succ[i] = 0;
        };
        Some(DomainMap { target_size: self.target_size, values: current })
    }
}

/// Error from any of the text parsers, with a 1-based line number
/// (0 when the input ended early).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl ParseError {
    pub(crate) fn new(line: usize, message: impl Into<String>) -> Self {
        Self { line, message: message.into() }
    }
}

/// Line cursor shared by the text parsers. Skips blank and `#` lines.
pub(crate) struct Lines<'a> {
    inner: std::iter::Peekable<std::iter::Enumerate<std::str::Lines<'a>>>,
    last_line: usize,
}

impl<'a> Lines<'a> {
    pub(crate) fn new(text: &'a str) -> Self {
        Self { inner: text.lines().enumerate().peekable(), last_line: 0 }
    }

    fn skip_blank(&mut self) {
        while let Some((_, l)) = self.inner.peek() {
            let t = l.trim();
            if t.is_empty() || t.starts_with('#') {
                self.inner.next();
            } else {
                break;
            }
        }
    }

    pub(crate) fn peek(&mut self) -> Option<(usize, &'a str)> {
        self.skip_blank();
        self.inner.peek().map(|&(i, l)| (i + 1, l.trim()))
    }

    pub(crate) fn expect(&mut self, what: &str) -> Result<(usize, &'a str), ParseError> {
        self.next()
            .ok_or_else(|| ParseError::new(self.last_line + 1, format!("unexpected end of input, expected {what}")))
    }

    pub(crate) fn last_line(&self) -> usize {
        self.last_line
    }
}

impl<'a> Iterator for Lines<'a> {
    type Item = (usize, &'a str);

    fn next(&mut self) -> Option<Self::Item> {
        self.skip_blank();
        let (i, l) = self.inner.next()?;
        self.last_line = i + 1;
        Some((i + 1, l.trim()))
    }
}

pub(crate) fn parse_usize(line: usize, tok: &str, what: &str) -> Result<usize, ParseError> {
    tok.parse::<usize>().map_err(|_| ParseError::new(line, format!("invalid {what} `{tok}`")))
}

pub(crate) fn parse_row(line: usize, text: &str) -> Result<Vec<usize>, ParseError> {
    text.split_whitespace().map(|tok| parse_usize(line, tok, "element")).collect()
}

/// Parses a structure from the cursor, stopping after the last `end` of
/// its relation blocks (the block list ends at the first line that does not
/// start with `rel`).
pub(crate) fn parse_structure_body(lines: &mut Lines<'_>) -> Result<Structure, ParseError> {
    let (n, header) = lines.expect("`domain <m>`")?;
    let mut toks = header.split_whitespace();
    if toks.next() != Some("domain") {
        return Err(ParseError::new(n, "expected `domain <m>`"));
    }
    let domain_size = match (toks.next(), toks.next()) {
        (Some(tok), None) => parse_usize(n, tok, "domain size")?,
        _ => return Err(ParseError::new(n, "expected `domain <m>`")),
    };
    if domain_size == 0 {
        return Err(ParseError::new(n, "domain must be nonempty"));
    }

    let mut symbols = Vec::new();
    let mut relations = Vec::new();
    while let Some((n, line)) = lines.peek() {
        let mut toks = line.split_whitespace();
        if toks.next() != Some("rel") {
            break;
        }
        lines.next();
        let (name, arity) = match (toks.next(), toks.next(), toks.next()) {
            (Some(name), Some(arity), None) => (name, parse_usize(n, arity, "arity")?),
            _ => return Err(ParseError::new(n, "expected `rel <name> <arity>`")),
        };
        if arity == 0 {
            return Err(ParseError::new(n, format!("relation `{name}` has arity 0")));
        }
        if !is_identifier(name) {
            return Err(ParseError::new(n, format!("`{name}` is not a valid relation name")));
        }
        if symbols.iter().any(|s: &RelSymbol| s.name == name) {
            return Err(ParseError::new(n, format!("relation `{name}` is declared twice")));
        }
        let mut tuples: Vec<Tuple> = Vec::new();
        loop {
            let (n, line) = lines.expect("a tuple or `end`")?;
            if line == "end" {
                break;
            }
            let t = parse_row(n, line)?;
            if t.len() != arity {
                return Err(ParseError::new(
                    n,
                    format!("tuple has {} entries, relation `{name}` has arity {arity}", t.len()),
                ));
            }
            if let Some(&x) = t.iter().find(|&&x| x >= domain_size) {
                return Err(ParseError::new(n, format!("element {x} is outside domain of size {domain_size}")));
            }
            if tuples.contains(&t) {
                return Err(ParseError::new(n, format!("duplicate tuple in `{name}`")));
            }
            tuples.push(t);
        }
        symbols.push(RelSymbol { name: name.to_string(), arity });
        relations.push(tuples);
    }
    let signature = Signature::new(symbols).map_err(|e| ParseError::new(lines.last_line(), e.to_string()))?;
    Structure::from_raw(RawStructure { domain_size, signature, relations })
        .map_err(|e| ParseError::new(lines.last_line(), e.to_string()))
}

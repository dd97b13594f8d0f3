//! Finitary operations as explicit tables, and the polymorphism machinery
//! built on them.
//!
//! An [`OperationTable`] of arity `k` from a domain of size `m` into a
//! target of size `m'` stores `m^k` values in mixed-radix order with the
//! first argument most significant, so row order matches the ascending
//! argument order of the text format:
//!
//! ```text
//! op meet 2 2 2
//! 0 0 0
//! 0 1 0
//! 1 0 0
//! 1 1 1
//! end
//! ```

use std::collections::HashSet;
use std::fmt;
use std::fmt::Write as _;

use thiserror::Error;

use crate::relstruct::{parse_row, parse_usize, Elem, Lines, ParseError, Relation, Structure, Tuple};

/// Arity limit used by the table constructors unless another is given.
pub const DEFAULT_MAX_ARITY: usize = 7;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OpError {
    #[error("arity {arity} exceeds the table limit of {max}")]
    ArityTooLarge { arity: usize, max: usize },
    #[error("arity must be at least 1")]
    ZeroArity,
    #[error("table size overflows")]
    TableTooLarge,
    #[error("domain and target must be nonempty")]
    EmptyDomain,
    #[error("table has {got} entries, expected {expected}")]
    TableLength { expected: usize, got: usize },
    #[error("table value {value} is outside target of size {target}")]
    ValueOutOfRange { value: Elem, target: usize },
    #[error("expected {expected} arguments, got {got}")]
    WrongArgCount { expected: usize, got: usize },
    #[error("argument {arg} is outside domain of size {domain}")]
    ArgOutOfRange { arg: Elem, domain: usize },
    #[error("operation is {op_domain} -> {op_target} but structures have domains {a_size} and {b_size}")]
    SizeMismatch { op_domain: usize, op_target: usize, a_size: usize, b_size: usize },
    #[error("structures have different signatures")]
    SignatureMismatch,
    #[error("operation must map a domain into itself")]
    NotEndomorphic,
    #[error("structure must have a 2-element domain, found {0}")]
    NotBoolean(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OperationTable {
    domain_size: usize,
    target_size: usize,
    arity: usize,
    values: Vec<Elem>,
}

impl OperationTable {
    pub fn from_values(
        domain_size: usize,
        target_size: usize,
        arity: usize,
        values: Vec<Elem>,
    ) -> Result<Self, OpError> {
        Self::check_shape(domain_size, target_size, arity, usize::MAX)?;
        let expected = table_len(domain_size, arity).ok_or(OpError::TableTooLarge)?;
        if values.len() != expected {
            return Err(OpError::TableLength { expected, got: values.len() });
        }
        if let Some(&value) = values.iter().find(|&&v| v >= target_size) {
            return Err(OpError::ValueOutOfRange { value, target: target_size });
        }
        Ok(Self { domain_size, target_size, arity, values })
    }

    /// Tabulates `f` under the default arity limit.
    pub fn from_fn(
        domain_size: usize,
        target_size: usize,
        arity: usize,
        f: impl FnMut(&[Elem]) -> Elem,
    ) -> Result<Self, OpError> {
        Self::from_fn_bounded(domain_size, target_size, arity, DEFAULT_MAX_ARITY, f)
    }

    pub fn from_fn_bounded(
        domain_size: usize,
        target_size: usize,
        arity: usize,
        max_arity: usize,
        mut f: impl FnMut(&[Elem]) -> Elem,
    ) -> Result<Self, OpError> {
        Self::check_shape(domain_size, target_size, arity, max_arity)?;
        let len = table_len(domain_size, arity).ok_or(OpError::TableTooLarge)?;
        let mut values = Vec::with_capacity(len);
        let mut args = vec![0; arity];
        for _ in 0..len {
            let v = f(&args);
            if v >= target_size {
                return Err(OpError::ValueOutOfRange { value: v, target: target_size });
            }
            values.push(v);
            increment(&mut args, domain_size);
        }
        Ok(Self { domain_size, target_size, arity, values })
    }

    fn check_shape(domain_size: usize, target_size: usize, arity: usize, max_arity: usize) -> Result<(), OpError> {
        if arity == 0 {
            return Err(OpError::ZeroArity);
        }
        if arity > max_arity {
            return Err(OpError::ArityTooLarge { arity, max: max_arity });
        }
        if domain_size == 0 || target_size == 0 {
            return Err(OpError::EmptyDomain);
        }
        Ok(())
    }

    pub fn projection(domain_size: usize, arity: usize, coordinate: usize) -> Result<Self, OpError> {
        assert!(coordinate < arity, "projection coordinate out of range");
        Self::from_fn(domain_size, domain_size, arity, |x| x[coordinate])
    }

    pub fn constant(domain_size: usize, arity: usize, value: Elem) -> Result<Self, OpError> {
        Self::from_fn(domain_size, domain_size, arity, |_| value)
    }

    pub fn domain_size(&self) -> usize {
        self.domain_size
    }

    pub fn target_size(&self) -> usize {
        self.target_size
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn values(&self) -> &[Elem] {
        &self.values
    }

    pub fn is_endomorphic(&self) -> bool {
        self.domain_size == self.target_size
    }

    pub fn eval(&self, args: &[Elem]) -> Result<Elem, OpError> {
        if args.len() != self.arity {
            return Err(OpError::WrongArgCount { expected: self.arity, got: args.len() });
        }
        if let Some(&arg) = args.iter().find(|&&a| a >= self.domain_size) {
            return Err(OpError::ArgOutOfRange { arg, domain: self.domain_size });
        }
        Ok(self.at(args))
    }

    /// Unchecked lookup; arguments must be valid.
    #[inline]
    pub(crate) fn at(&self, args: &[Elem]) -> Elem {
        let idx = args.iter().fold(0, |acc, &a| acc * self.domain_size + a);
        self.values[idx]
    }

    /// Componentwise application to `arity` tuples of equal length.
    pub fn apply_to_tuples(&self, tuples: &[&[Elem]]) -> Tuple {
        assert_eq!(tuples.len(), self.arity);
        let len = tuples.first().map_or(0, |t| t.len());
        let mut args = vec![0; self.arity];
        (0..len)
            .map(|pos| {
                for (slot, t) in args.iter_mut().zip(tuples) {
                    *slot = t[pos];
                }
                self.at(&args)
            })
            .collect()
    }

    /// Iterates over `(args, value)` rows in table order.
    pub fn rows(&self) -> impl Iterator<Item = (Vec<Elem>, Elem)> + '_ {
        let mut args = vec![0; self.arity];
        self.values.iter().map(move |&v| {
            let row = args.clone();
            increment(&mut args, self.domain_size);
            (row, v)
        })
    }

    /// Text form with the given name; see the module docs.
    pub fn serialize(&self, name: &str) -> String {
        let mut out = String::new();
        writeln!(out, "op {name} {} {} {}", self.domain_size, self.target_size, self.arity).unwrap();
        for (args, v) in self.rows() {
            for a in args {
                write!(out, "{a} ").unwrap();
            }
            writeln!(out, "{v}").unwrap();
        }
        out.push_str("end\n");
        out
    }
}

pub(crate) fn table_len(domain_size: usize, arity: usize) -> Option<usize> {
    domain_size.checked_pow(u32::try_from(arity).ok()?)
}

/// Advances a mixed-radix counter, last position fastest.
pub(crate) fn increment(args: &mut [Elem], radix: usize) {
    for slot in args.iter_mut().rev() {
        *slot += 1;
        if *slot < radix {
            return;
        }
        *slot = 0;
    }
}

/// An operation together with the name it carries in a file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedOperation {
    pub name: String,
    pub table: OperationTable,
}

impl NamedOperation {
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut lines = Lines::new(text);
        let op = parse_operation_body(&mut lines)?;
        if let Some((n, line)) = lines.next() {
            return Err(ParseError::new(n, format!("unexpected trailing line `{line}`")));
        }
        Ok(op)
    }

    pub fn serialize(&self) -> String {
        self.table.serialize(&self.name)
    }
}

pub(crate) fn parse_operation_body(lines: &mut Lines<'_>) -> Result<NamedOperation, ParseError> {
    let (n, header) = lines.expect("`op <name> <m> <m'> <k>`")?;
    let toks: Vec<&str> = header.split_whitespace().collect();
    let [kw, name, m, mt, k] = toks.as_slice() else {
        return Err(ParseError::new(n, "expected `op <name> <m> <m'> <k>`"));
    };
    if *kw != "op" {
        return Err(ParseError::new(n, "expected `op <name> <m> <m'> <k>`"));
    }
    let m = parse_usize(n, m, "domain size")?;
    let mt = parse_usize(n, mt, "target size")?;
    let k = parse_usize(n, k, "arity")?;
    OperationTable::check_shape(m, mt, k, DEFAULT_MAX_ARITY).map_err(|e| ParseError::new(n, e.to_string()))?;
    let len = table_len(m, k).ok_or_else(|| ParseError::new(n, "table too large"))?;
    let mut expected = vec![0; k];
    let mut values = Vec::with_capacity(len);
    for _ in 0..len {
        let (n, line) = lines.expect("a table row")?;
        if line == "end" {
            return Err(ParseError::new(n, format!("table ended after {} of {len} rows", values.len())));
        }
        let row = parse_row(n, line)?;
        if row.len() != k + 1 {
            return Err(ParseError::new(n, format!("row has {} entries, expected {}", row.len(), k + 1)));
        }
        if row[..k] != expected[..] {
            return Err(ParseError::new(n, "rows must list arguments in ascending mixed-radix order"));
        }
        if row[k] >= mt {
            return Err(ParseError::new(n, format!("value {} is outside target of size {mt}", row[k])));
        }
        values.push(row[k]);
        increment(&mut expected, m);
    }
    let (n, line) = lines.expect("`end`")?;
    if line != "end" {
        return Err(ParseError::new(n, "expected `end`"));
    }
    let table = OperationTable::from_values(m, mt, k, values).map_err(|e| ParseError::new(n, e.to_string()))?;
    Ok(NamedOperation { name: name.to_string(), table })
}

/// A choice of member tuples whose componentwise image leaves the target
/// relation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PreservationViolation {
    pub relation: usize,
    pub args: Vec<Tuple>,
    pub image: Tuple,
}

/// First argument list (lexicographic in tuple indices) of members of
/// `source` whose image under `op` is not in `target`.
pub fn relation_violation(op: &OperationTable, source: &Relation, target: &Relation) -> Option<(Vec<Tuple>, Tuple)> {
    let tuples = source.tuples();
    if tuples.is_empty() {
        return None;
    }
    let mut idx = vec![0; op.arity()];
    let total = table_len(tuples.len(), op.arity()).expect("argument space fits in usize");
    let mut chosen: Vec<&[Elem]> = Vec::with_capacity(op.arity());
    for _ in 0..total {
        chosen.clear();
        chosen.extend(idx.iter().map(|&i| tuples[i].as_slice()));
        let image = op.apply_to_tuples(&chosen);
        if !target.contains(&image) {
            return Some((chosen.iter().map(|t| t.to_vec()).collect(), image));
        }
        increment(&mut idx, tuples.len());
    }
    None
}

fn check_pair_shape(op: &OperationTable, a: &Structure, b: &Structure) -> Result<(), OpError> {
    if !a.same_type(b) {
        return Err(OpError::SignatureMismatch);
    }
    if op.domain_size() != a.domain_size() || op.target_size() != b.domain_size() {
        return Err(OpError::SizeMismatch {
            op_domain: op.domain_size(),
            op_target: op.target_size(),
            a_size: a.domain_size(),
            b_size: b.domain_size(),
        });
    }
    Ok(())
}

/// First violation of `op` as a member of Pol(a, b), if any.
pub fn pair_violation(
    op: &OperationTable,
    a: &Structure,
    b: &Structure,
) -> Result<Option<PreservationViolation>, OpError> {
    check_pair_shape(op, a, b)?;
    Ok(a.relations().iter().zip(b.relations()).enumerate().find_map(|(relation, (ra, rb))| {
        relation_violation(op, ra, rb).map(|(args, image)| PreservationViolation { relation, args, image })
    }))
}

/// Is `op: A^k → B` applied componentwise a map from every `R^A` into `R^B`?
pub fn is_polymorphism_pair(op: &OperationTable, a: &Structure, b: &Structure) -> Result<bool, OpError> {
    Ok(pair_violation(op, a, b)?.is_none())
}

pub fn polymorphism_violation(op: &OperationTable, c: &Structure) -> Result<Option<PreservationViolation>, OpError> {
    pair_violation(op, c, c)
}

/// Does `op` preserve every relation of `c`?
pub fn is_polymorphism(op: &OperationTable, c: &Structure) -> Result<bool, OpError> {
    Ok(polymorphism_violation(op, c)?.is_none())
}

/// Least superset of `tuples` closed under componentwise application of
/// `op`. The operation must map its domain into itself.
pub fn close_under(op: &OperationTable, tuples: &[Tuple], arity: usize) -> Relation {
    assert!(op.is_endomorphic(), "closure needs an operation on one domain");
    let mut all: Vec<Tuple> = Vec::new();
    let mut seen: HashSet<Tuple> = HashSet::new();
    for t in tuples {
        debug_assert_eq!(t.len(), arity);
        if seen.insert(t.clone()) {
            all.push(t.clone());
        }
    }
    let k = op.arity();
    // Semi-naive rounds: only argument lists that use a tuple added in the
    // previous round can produce something new.
    let mut old = 0;
    while old < all.len() {
        let frontier = all.len();
        let combos = table_len(frontier, k).expect("closure grew beyond addressable size");
        let mut idx = vec![0; k];
        let mut fresh = Vec::new();
        let mut chosen: Vec<&[Elem]> = Vec::with_capacity(k);
        for _ in 0..combos {
            if idx.iter().any(|&i| i >= old) {
                chosen.clear();
                chosen.extend(idx.iter().map(|&i| all[i].as_slice()));
                let image = op.apply_to_tuples(&chosen);
                if !seen.contains(&image) {
                    seen.insert(image.clone());
                    fresh.push(image);
                }
            }
            increment(&mut idx, frontier);
        }
        old = frontier;
        all.extend(fresh);
    }
    Relation::from_tuples(arity, all)
}

/// Applies [`close_under`] to every relation of `s`.
pub fn close_structure(op: &OperationTable, s: &Structure) -> Structure {
    assert_eq!(op.domain_size(), s.domain_size());
    let relations = s.relations().iter().map(|r| close_under(op, r.tuples(), r.arity())).collect();
    s.with_relations(s.domain_size(), relations)
}

/// `f(a₁,…,a_k) ∈ {a₁,…,a_k}` for every argument list.
pub fn is_conservative(op: &OperationTable) -> bool {
    op.is_endomorphic() && op.rows().all(|(args, v)| args.contains(&v))
}

/// Which of the standard witness families an operation belongs to.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OperationClass {
    pub constant: Option<Elem>,
    pub semilattice: bool,
    pub majority: bool,
    pub minority: bool,
}

impl OperationClass {
    pub fn is_none(&self) -> bool {
        *self == Self::default()
    }
}

pub fn classify_operation(op: &OperationTable) -> OperationClass {
    if !op.is_endomorphic() {
        return OperationClass::default();
    }
    let first = op.values()[0];
    OperationClass {
        constant: op.values().iter().all(|&v| v == first).then_some(first),
        semilattice: is_semilattice(op),
        majority: is_near_unanimity3(op, false),
        minority: is_near_unanimity3(op, true),
    }
}

/// Binary, idempotent, commutative and associative.
pub fn is_semilattice(op: &OperationTable) -> bool {
    if op.arity() != 2 || !op.is_endomorphic() {
        return false;
    }
    let m = op.domain_size();
    let f = |x, y| op.at(&[x, y]);
    (0..m).all(|x| f(x, x) == x)
        && (0..m).all(|x| (0..m).all(|y| f(x, y) == f(y, x)))
        && (0..m).all(|x| (0..m).all(|y| (0..m).all(|z| f(f(x, y), z) == f(x, f(y, z)))))
}

pub fn is_majority(op: &OperationTable) -> bool {
    is_near_unanimity3(op, false)
}

pub fn is_minority(op: &OperationTable) -> bool {
    is_near_unanimity3(op, true)
}

// Majority: m(x,x,y)=m(x,y,x)=m(y,x,x)=x. Minority: same patterns give y.
fn is_near_unanimity3(op: &OperationTable, minority: bool) -> bool {
    if op.arity() != 3 || !op.is_endomorphic() {
        return false;
    }
    let m = op.domain_size();
    (0..m).all(|x| {
        (0..m).all(|y| {
            let want = if minority { y } else { x };
            op.at(&[x, x, y]) == want && op.at(&[x, y, x]) == want && op.at(&[y, x, x]) == want
        })
    })
}

/// Restriction of `op` to `subset`, relabeled to `0..|subset|` in ascending
/// order, or `None` when the subset is not closed under `op`.
pub fn restrict_operation(op: &OperationTable, subset: &[Elem]) -> Option<OperationTable> {
    if !op.is_endomorphic() {
        return None;
    }
    let mut elems = subset.to_vec();
    elems.sort_unstable();
    elems.dedup();
    if elems.is_empty() || elems.iter().any(|&e| e >= op.domain_size()) {
        return None;
    }
    let mut original = vec![0; op.arity()];
    let mut closed = true;
    let table = OperationTable::from_fn_bounded(elems.len(), elems.len(), op.arity(), op.arity(), |args| {
        for (slot, &a) in original.iter_mut().zip(args) {
            *slot = elems[a];
        }
        match elems.binary_search(&op.at(&original)) {
            Ok(i) => i,
            Err(_) => {
                closed = false;
                0
            }
        }
    })
    .ok()?;
    closed.then_some(table)
}

/// The six Boolean operations of Schaefer's classification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SchaeferClass {
    Const0,
    Const1,
    Meet,
    Join,
    Minority,
    Majority,
}

impl SchaeferClass {
    pub const ALL: [SchaeferClass; 6] = [
        SchaeferClass::Const0,
        SchaeferClass::Const1,
        SchaeferClass::Meet,
        SchaeferClass::Join,
        SchaeferClass::Minority,
        SchaeferClass::Majority,
    ];

    /// The operation on `{0,1}`. Constants are unary.
    pub fn table(self) -> OperationTable {
        let t = match self {
            SchaeferClass::Const0 => OperationTable::constant(2, 1, 0),
            SchaeferClass::Const1 => OperationTable::constant(2, 1, 1),
            SchaeferClass::Meet => OperationTable::from_fn(2, 2, 2, |x| x[0] & x[1]),
            SchaeferClass::Join => OperationTable::from_fn(2, 2, 2, |x| x[0] | x[1]),
            SchaeferClass::Minority => OperationTable::from_fn(2, 2, 3, |x| x[0] ^ x[1] ^ x[2]),
            SchaeferClass::Majority => OperationTable::from_fn(2, 2, 3, |x| usize::from(x[0] + x[1] + x[2] >= 2)),
        };
        t.expect("fixed Boolean tables are valid")
    }

    pub fn name(self) -> &'static str {
        match self {
            SchaeferClass::Const0 => "const0",
            SchaeferClass::Const1 => "const1",
            SchaeferClass::Meet => "meet",
            SchaeferClass::Join => "join",
            SchaeferClass::Minority => "minority",
            SchaeferClass::Majority => "majority",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.name() == name)
    }
}

impl fmt::Display for SchaeferClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SchaeferReport {
    pub present: Vec<SchaeferClass>,
    /// One violation for each absent class, in class order.
    pub violations: Vec<(SchaeferClass, PreservationViolation)>,
}

impl SchaeferReport {
    pub fn is_tractable(&self) -> bool {
        !self.present.is_empty()
    }

    pub fn violation(&self, class: SchaeferClass) -> Option<&PreservationViolation> {
        self.violations.iter().find(|(c, _)| *c == class).map(|(_, v)| v)
    }
}

pub fn schaefer_classify(s: &Structure) -> Result<SchaeferReport, OpError> {
    if s.domain_size() != 2 {
        return Err(OpError::NotBoolean(s.domain_size()));
    }
    let mut present = Vec::new();
    let mut violations = Vec::new();
    for class in SchaeferClass::ALL {
        match polymorphism_violation(&class.table(), s)? {
            None => present.push(class),
            Some(v) => violations.push((class, v)),
        }
    }
    Ok(SchaeferReport { present, violations })
}

/// A partition of the argument positions. Positions are stored 0-based and
/// displayed 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockPartition {
    arity: usize,
    blocks: Vec<Vec<usize>>,
}

impl BlockPartition {
    /// Blocks must be disjoint, nonempty and cover `0..arity`. They are
    /// normalized: each block sorted, blocks ordered by least element.
    pub fn new(arity: usize, mut blocks: Vec<Vec<usize>>) -> Option<Self> {
        let mut seen = vec![false; arity];
        for b in &mut blocks {
            if b.is_empty() {
                return None;
            }
            b.sort_unstable();
            for &i in b.iter() {
                if i >= arity || std::mem::replace(&mut seen[i], true) {
                    return None;
                }
            }
        }
        if seen.iter().any(|&s| !s) {
            return None;
        }
        blocks.sort_unstable_by_key(|b| b[0]);
        Some(Self { arity, blocks })
    }

    pub fn singletons(arity: usize) -> Self {
        Self { arity, blocks: (0..arity).map(|i| vec![i]).collect() }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn min_block_size(&self) -> usize {
        self.blocks.iter().map(Vec::len).min().unwrap_or(0)
    }
}

impl fmt::Display for BlockPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (n, b) in self.blocks.iter().enumerate() {
            if n > 0 {
                f.write_str(" ")?;
            }
            let parts: Vec<String> = b.iter().map(|i| (i + 1).to_string()).collect();
            write!(f, "{{{}}}", parts.join(","))?;
        }
        Ok(())
    }
}

/// An argument list on which swapping positions `i` and `j` changes the
/// value of `op`, if one exists.
pub fn transposition_witness(op: &OperationTable, i: usize, j: usize) -> Option<Vec<Elem>> {
    let mut swapped = vec![0; op.arity()];
    op.rows().map(|(args, _)| args).find(|args| {
        swapped.copy_from_slice(args);
        swapped.swap(i, j);
        op.at(args) != op.at(&swapped)
    })
}

/// Is `op` invariant under permutations inside each block? Checks the
/// adjacent transpositions of each block, which generate its symmetric
/// group.
pub fn is_block_symmetric(op: &OperationTable, partition: &BlockPartition) -> bool {
    partition.arity() == op.arity()
        && partition.blocks().iter().all(|b| b.windows(2).all(|w| transposition_witness(op, w[0], w[1]).is_none()))
}

/// The unique coarsest partition for which `op` is block-symmetric.
///
/// Positions `i` and `j` are joined when swapping them leaves `op`
/// unchanged; the blocks are the connected components of that graph. Any
/// block-symmetric partition has every block inside one component, and the
/// transpositions along a spanning tree of a component generate all of its
/// permutations, so the components themselves form a block-symmetric
/// partition and it is the coarsest one.
pub fn coarsest_block_partition(op: &OperationTable) -> BlockPartition {
    let k = op.arity();
    let mut parent: Vec<usize> = (0..k).collect();
    fn root(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for i in 0..k {
        for j in i + 1..k {
            if root(&mut parent, i) == root(&mut parent, j) {
                continue;
            }
            if transposition_witness(op, i, j).is_none() {
                let (ri, rj) = (root(&mut parent, i), root(&mut parent, j));
                parent[ri.max(rj)] = ri.min(rj);
            }
        }
    }
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut block_of = vec![usize::MAX; k];
    for i in 0..k {
        let r = root(&mut parent, i);
        if block_of[r] == usize::MAX {
            block_of[r] = blocks.len();
            blocks.push(Vec::new());
        }
        blocks[block_of[r]].push(i);
    }
    BlockPartition::new(k, blocks).expect("components partition the positions")
}

/// Size of the smallest block of the coarsest block-symmetric partition.
pub fn width(op: &OperationTable) -> usize {
    coarsest_block_partition(op).min_block_size()
}

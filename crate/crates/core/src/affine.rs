//! Affine structures over cyclic groups `ℤ_n`.
//!
//! A structure on `ℤ_n` is affine when `x − y + z` preserves every relation,
//! i.e. every nonempty relation is a coset of a subgroup of `ℤ_n^r`. Over a
//! prime modulus such a coset is the solution set of a linear system, so
//! the CSP of an affine template is Gaussian elimination.

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::fmt::Write as _;

use thiserror::Error;

use crate::polymorph::{self, increment, table_len, OpError, OperationTable, DEFAULT_MAX_ARITY};
use crate::relstruct::{DomainMap, Elem, Relation, Structure, Tuple};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AffineError {
    #[error("modulus must be at least 1")]
    ZeroModulus,
    #[error("{0} is not prime")]
    NotPrime(usize),
    #[error("entry {entry} is not reduced modulo {modulus}")]
    EntryOutOfRange { entry: Elem, modulus: usize },
    #[error("tuple set is empty")]
    Empty,
    #[error("tuples have different lengths")]
    MixedArity,
    #[error("tuple set is not closed under x-y+z mod {0}")]
    NotClosed(usize),
    #[error("template has domain size {domain} but modulus is {modulus}")]
    DomainMismatch { domain: usize, modulus: usize },
    #[error("template is not affine over Z_{0}")]
    NotAffine(usize),
    #[error("structures have different signatures")]
    SignatureMismatch,
    #[error("map sizes do not fit: {0}")]
    MapMismatch(String),
    #[error("k must be at least 1")]
    ZeroK,
    #[error("coefficients sum to {sum} mod {modulus}, expected 1")]
    BadCoefficients { sum: usize, modulus: usize },
    #[error(transparent)]
    Table(#[from] OpError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CyclicGroup {
    n: usize,
}

impl CyclicGroup {
    pub fn new(n: usize) -> Result<Self, AffineError> {
        if n == 0 {
            return Err(AffineError::ZeroModulus);
        }
        Ok(Self { n })
    }

    pub fn order(self) -> usize {
        self.n
    }

    pub fn add(self, x: Elem, y: Elem) -> Elem {
        (x + y) % self.n
    }

    pub fn neg(self, x: Elem) -> Elem {
        (self.n - x % self.n) % self.n
    }

    pub fn sub(self, x: Elem, y: Elem) -> Elem {
        self.add(x, self.neg(y))
    }

    /// `a·x` for an integer coefficient `a`.
    pub fn scale(self, a: i64, x: Elem) -> Elem {
        let a = a.rem_euclid(self.n as i64) as usize;
        (a * x) % self.n
    }

    /// The ternary operation `x − y + z` as a table.
    pub fn malcev(self) -> OperationTable {
        OperationTable::from_fn(self.n, self.n, 3, |v| self.add(self.sub(v[0], v[1]), v[2]))
            .expect("ternary table over a nonempty domain")
    }
}

pub fn is_prime(p: usize) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

fn check_entries(tuples: &[Tuple], n: usize) -> Result<usize, AffineError> {
    let arity = tuples.first().map_or(0, Vec::len);
    for t in tuples {
        if t.len() != arity {
            return Err(AffineError::MixedArity);
        }
        if let Some(&entry) = t.iter().find(|&&x| x >= n) {
            return Err(AffineError::EntryOutOfRange { entry, modulus: n });
        }
    }
    Ok(arity)
}

/// Least superset of `tuples` closed under componentwise `x − y + z mod n`.
///
/// For a nonempty input this is the coset `t₀ + ⟨tᵢ − t₀⟩`, which is what
/// is computed: a breadth-first walk from `t₀` along the difference
/// vectors. In a finite group the additive closure of the generators is
/// already the subgroup they generate.
pub fn affine_closure(tuples: &[Tuple], arity: usize, n: usize) -> Result<Relation, AffineError> {
    let group = CyclicGroup::new(n)?;
    if check_entries(tuples, n)? != arity && !tuples.is_empty() {
        return Err(AffineError::MixedArity);
    }
    let Some(base) = tuples.first() else {
        return Ok(Relation::empty(arity));
    };
    let mut gens: Vec<Tuple> = tuples
        .iter()
        .map(|t| t.iter().zip(base).map(|(&x, &b)| group.sub(x, b)).collect::<Tuple>())
        .filter(|d| d.iter().any(|&x| x != 0))
        .collect();
    gens.sort_unstable();
    gens.dedup();

    let mut seen: HashSet<Tuple> = HashSet::from([base.clone()]);
    let mut queue = VecDeque::from([base.clone()]);
    while let Some(u) = queue.pop_front() {
        for d in &gens {
            let v: Tuple = u.iter().zip(d).map(|(&x, &y)| group.add(x, y)).collect();
            if seen.insert(v.clone()) {
                queue.push_back(v);
            }
        }
    }
    Ok(Relation::from_tuples(arity, seen.into_iter().collect()))
}

/// Applies [`affine_closure`] to every relation of `s`, reading its elements
/// as residues mod `n` (the result has domain `n`).
pub fn affine_closure_structure(s: &Structure, n: usize) -> Result<Structure, AffineError> {
    let relations =
        s.relations().iter().map(|r| affine_closure(r.tuples(), r.arity(), n)).collect::<Result<Vec<_>, _>>()?;
    Ok(s.with_relations(n, relations))
}

/// Is `x − y + z mod n` a polymorphism of `c`?
pub fn is_affine(c: &Structure, n: usize) -> Result<bool, AffineError> {
    let group = CyclicGroup::new(n)?;
    if c.domain_size() != n {
        return Err(AffineError::DomainMismatch { domain: c.domain_size(), modulus: n });
    }
    Ok(polymorph::is_polymorphism(&group.malcev(), c)?)
}

fn mod_inverse(a: usize, p: usize) -> usize {
    // p is prime and a is nonzero mod p
    let (mut t, mut new_t) = (0i64, 1i64);
    let (mut r, mut new_r) = (p as i64, (a % p) as i64);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    debug_assert_eq!(r, 1);
    t.rem_euclid(p as i64) as usize
}

/// One linear equation `coeffs · x = rhs` over `ℤ_n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Equation {
    pub coeffs: Vec<Elem>,
    pub rhs: Elem,
}

impl Equation {
    pub fn new(coeffs: Vec<Elem>, rhs: Elem) -> Self {
        Self { coeffs, rhs }
    }

    pub fn holds(&self, x: &[Elem], n: usize) -> bool {
        let lhs = self.coeffs.iter().zip(x).fold(0, |acc, (&c, &v)| (acc + c * v) % n);
        lhs == self.rhs % n
    }
}

/// A relation given as the solution set of linear equations over `ℤ_n`.
/// Row form is not canonical; compare presentations by
/// [`AffinePresentation::solutions`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffinePresentation {
    pub modulus: usize,
    pub arity: usize,
    pub equations: Vec<Equation>,
}

impl AffinePresentation {
    pub fn contains(&self, t: &[Elem]) -> bool {
        t.len() == self.arity && self.equations.iter().all(|e| e.holds(t, self.modulus))
    }

    /// All solutions by exhaustive enumeration of `ℤ_n^arity`. Returns
    /// `None` when that space has more than `budget` points.
    pub fn solutions(&self, budget: usize) -> Option<Relation> {
        let total = table_len(self.modulus, self.arity).filter(|&t| t <= budget)?;
        let mut t = vec![0; self.arity];
        let mut out = Vec::new();
        for _ in 0..total {
            if self.contains(&t) {
                out.push(t.clone());
            }
            increment(&mut t, self.modulus);
        }
        Some(Relation::from_tuples(self.arity, out))
    }
}

impl fmt::Display for AffinePresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.equations {
            let terms: Vec<String> = e
                .coeffs
                .iter()
                .enumerate()
                .filter(|(_, &c)| c != 0)
                .map(|(i, &c)| if c == 1 { format!("x{}", i + 1) } else { format!("{c}x{}", i + 1) })
                .collect();
            let lhs = if terms.is_empty() { "0".to_string() } else { terms.join(" + ") };
            writeln!(f, "{lhs} = {} (mod {})", e.rhs, self.modulus)?;
        }
        Ok(())
    }
}

/// Row-reduces `rows` in place over `ℤ_p` (columns `0..cols`, with an
/// optional trailing augmented column at index `cols`). Returns the pivot
/// column of each nonzero row; the rows are truncated to those.
fn row_reduce(rows: &mut Vec<Vec<Elem>>, cols: usize, p: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..cols {
        let Some(found) = (r..rows.len()).find(|&i| rows[i][col] != 0) else {
            continue;
        };
        rows.swap(r, found);
        let inv = mod_inverse(rows[r][col], p);
        for v in rows[r].iter_mut() {
            *v = (*v * inv) % p;
        }
        for i in 0..rows.len() {
            if i != r && rows[i][col] != 0 {
                let factor = rows[i][col];
                for j in 0..rows[i].len() {
                    let sub = (factor * rows[r][j]) % p;
                    rows[i][j] = (rows[i][j] + p - sub) % p;
                }
            }
        }
        pivots.push(col);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

/// Linear equations for a nonempty coset in `ℤ_p^r`.
///
/// The set is translated to the origin, a basis of the difference subgroup
/// is extracted by row reduction, and the equations are a basis of its
/// annihilator, with right-hand sides fixed by the base point.
pub fn coset_presentation(tuples: &[Tuple], p: usize) -> Result<AffinePresentation, AffineError> {
    if !is_prime(p) {
        return Err(AffineError::NotPrime(p));
    }
    let arity = check_entries(tuples, p)?;
    let Some(base) = tuples.first() else {
        return Err(AffineError::Empty);
    };
    let given = Relation::from_tuples(arity, tuples.to_vec());
    if affine_closure(tuples, arity, p)? != given {
        return Err(AffineError::NotClosed(p));
    }
    let group = CyclicGroup::new(p)?;
    let mut basis: Vec<Vec<Elem>> =
        tuples.iter().map(|t| t.iter().zip(base).map(|(&x, &b)| group.sub(x, b)).collect()).collect();
    let pivots = row_reduce(&mut basis, arity, p);

    // Null space of the basis: one vector per free column.
    let mut equations = Vec::new();
    for free in (0..arity).filter(|c| !pivots.contains(c)) {
        let mut y = vec![0; arity];
        y[free] = 1;
        for (row, &pc) in basis.iter().zip(&pivots) {
            y[pc] = group.neg(row[free]);
        }
        let rhs = y.iter().zip(base).fold(0, |acc, (&c, &b)| (acc + c * b) % p);
        equations.push(Equation::new(y, rhs));
    }
    Ok(AffinePresentation { modulus: p, arity, equations })
}

/// Linear system over a prime field `ℤ_p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearSystem {
    modulus: usize,
    num_vars: usize,
    rows: Vec<Equation>,
}

impl LinearSystem {
    pub fn new(modulus: usize, num_vars: usize) -> Result<Self, AffineError> {
        if !is_prime(modulus) {
            return Err(AffineError::NotPrime(modulus));
        }
        Ok(Self { modulus, num_vars, rows: Vec::new() })
    }

    pub fn modulus(&self) -> usize {
        self.modulus
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn rows(&self) -> &[Equation] {
        &self.rows
    }

    /// Adds a row, reducing entries mod p.
    pub fn push(&mut self, coeffs: Vec<Elem>, rhs: Elem) {
        assert_eq!(coeffs.len(), self.num_vars);
        let p = self.modulus;
        self.rows.push(Equation::new(coeffs.into_iter().map(|c| c % p).collect(), rhs % p));
    }

    /// A solution with every free variable set to 0, or `None` when the
    /// system is inconsistent.
    pub fn solve(&self) -> Option<Vec<Elem>> {
        let n = self.num_vars;
        let mut m: Vec<Vec<Elem>> =
            self.rows.iter().map(|e| e.coeffs.iter().copied().chain([e.rhs]).collect()).collect();
        // A pivot in the augmented column means a row 0 = b with b ≠ 0.
        let pivots = row_reduce(&mut m, n + 1, self.modulus);
        if pivots.last() == Some(&n) {
            return None;
        }
        let mut x = vec![0; n];
        for (row, &pc) in m.iter().zip(&pivots) {
            x[pc] = row[n];
        }
        debug_assert!(self.rows.iter().all(|e| e.holds(&x, self.modulus)));
        Some(x)
    }

    /// One line per equation: `c1 c2 ... cr = b (mod p)`.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for e in &self.rows {
            let cs: Vec<String> = e.coeffs.iter().map(|c| c.to_string()).collect();
            writeln!(out, "{} = {} (mod {})", cs.join(" "), e.rhs, self.modulus).unwrap();
        }
        out
    }
}

/// Outcome of [`solve_affine_csp`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineSolution {
    pub map: Option<DomainMap>,
    pub system: LinearSystem,
}

/// Decides whether `x` maps into the affine template `c` over `ℤ_p` by
/// turning every constraint into linear equations.
pub fn solve_affine_csp(x: &Structure, c: &Structure, p: usize) -> Result<AffineSolution, AffineError> {
    if !is_prime(p) {
        return Err(AffineError::NotPrime(p));
    }
    if !x.same_type(c) {
        return Err(AffineError::SignatureMismatch);
    }
    if !is_affine(c, p)? {
        return Err(AffineError::NotAffine(p));
    }
    let vars = x.domain_size();
    let mut system = LinearSystem::new(p, vars)?;
    for (rx, rc) in x.relations().iter().zip(c.relations()) {
        if rx.is_empty() {
            continue;
        }
        if rc.is_empty() {
            system.push(vec![0; vars], 1);
            continue;
        }
        let pres = coset_presentation(rc.tuples(), p)?;
        for scope in rx {
            for eq in &pres.equations {
                let mut row = vec![0; vars];
                for (&v, &coef) in scope.iter().zip(&eq.coeffs) {
                    row[v] = (row[v] + coef) % p;
                }
                system.push(row, eq.rhs);
            }
        }
    }
    let map = system.solve().map(|values| DomainMap::new(p, values).expect("solution entries are residues"));
    Ok(AffineSolution { map, system })
}

fn check_sandwich_maps(f: &DomainMap, g: &DomainMap, n: usize) -> Result<(), AffineError> {
    if f.target_size() != n || g.source_size() != n {
        return Err(AffineError::MapMismatch(format!(
            "need f: A -> Z_{n} and g: Z_{n} -> B, got f into {} and g from {}",
            f.target_size(),
            g.source_size()
        )));
    }
    Ok(())
}

/// `(x₁,…,x_k) ↦ g(Σ aᵢ f(xᵢ) mod n)` for integer coefficients summing to 1
/// mod n.
pub fn make_affine_combination(
    f: &DomainMap,
    g: &DomainMap,
    n: usize,
    coeffs: &[i64],
    max_arity: usize,
) -> Result<OperationTable, AffineError> {
    let group = CyclicGroup::new(n)?;
    check_sandwich_maps(f, g, n)?;
    let sum = coeffs.iter().fold(0, |acc, &a| group.add(acc, group.scale(a, 1)));
    if sum != 1 % n {
        return Err(AffineError::BadCoefficients { sum, modulus: n });
    }
    Ok(OperationTable::from_fn_bounded(f.source_size(), g.target_size(), coeffs.len(), max_arity, |args| {
        let s = args.iter().zip(coeffs).fold(0, |acc, (&x, &a)| group.add(acc, group.scale(a, f.get(x))));
        g.get(s)
    })?)
}

/// The symmetric map of arity `nk + 1`: all coefficients 1.
pub fn make_symmetric_polymorphism(
    f: &DomainMap,
    g: &DomainMap,
    n: usize,
    k: usize,
) -> Result<OperationTable, AffineError> {
    if k == 0 {
        return Err(AffineError::ZeroK);
    }
    let arity = n * k + 1;
    if arity > DEFAULT_MAX_ARITY {
        return Err(OpError::ArityTooLarge { arity, max: DEFAULT_MAX_ARITY }.into());
    }
    make_affine_combination(f, g, n, &vec![1; arity], DEFAULT_MAX_ARITY)
}

/// The alternating map of arity `2k + 1`: coefficients `+1, −1, +1, …, +1`.
/// It is block-symmetric for the odd and even positions.
pub fn make_alternating_polymorphism(
    f: &DomainMap,
    g: &DomainMap,
    n: usize,
    k: usize,
) -> Result<OperationTable, AffineError> {
    if k == 0 {
        return Err(AffineError::ZeroK);
    }
    let coeffs: Vec<i64> = (0..2 * k + 1).map(|i| if i % 2 == 0 { 1 } else { -1 }).collect();
    make_affine_combination(f, g, n, &coeffs, DEFAULT_MAX_ARITY)
}

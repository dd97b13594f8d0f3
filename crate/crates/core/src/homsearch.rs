//! Homomorphism search `X → A`.
//!
//! Every element of `X` is a variable over the domain of `A`, every tuple of
//! every relation of `X` is a constraint whose scope must map into the
//! matching relation of `A`. The solver is plain backtracking that
//! maintains generalized arc consistency after every assignment.
//!
//! Two branching orders are used:
//! * [`find_homomorphism`] branches on the variable with the fewest
//!   remaining values (ties broken by index);
//! * [`enumerate_homomorphisms`] branches on the lowest-index open variable,
//!   so solutions come out in lexicographic order of their value arrays.
//!
//! Values are always tried in ascending order, so both are deterministic.

use std::collections::VecDeque;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::relstruct::{DomainMap, Elem, Structure};

/// Default node budget for a single search.
pub const DEFAULT_NODE_BUDGET: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchLimits {
    /// Maximum number of search nodes. Running out is an error, never a
    /// negative answer.
    pub node_budget: u64,
}

impl Default for SearchLimits {
    fn default() -> Self {
        Self { node_budget: DEFAULT_NODE_BUDGET }
    }
}

impl SearchLimits {
    pub fn with_budget(node_budget: u64) -> Self {
        Self { node_budget }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub nodes_expanded: u64,
    pub propagation_calls: u64,
    pub elapsed: Duration,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HomError {
    #[error("structures have different signatures")]
    SignatureMismatch,
    #[error("map is {map_source} -> {map_target} but structures have domains {x_size} and {a_size}")]
    SizeMismatch { map_source: usize, map_target: usize, x_size: usize, a_size: usize },
    #[error("node budget of {budget} exceeded after {} nodes", stats.nodes_expanded)]
    BudgetExceeded { budget: u64, stats: SearchStats },
    #[error("enumeration limit must be at least 1")]
    ZeroLimit,
}

/// Result of [`find_homomorphism`]. `map` is `None` only when the search
/// space was exhausted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomOutcome {
    pub map: Option<DomainMap>,
    pub stats: SearchStats,
}

/// True iff `f` sends every tuple of every relation of `x` into the
/// corresponding relation of `a`.
pub fn is_homomorphism(f: &DomainMap, x: &Structure, a: &Structure) -> Result<bool, HomError> {
    if !x.same_type(a) {
        return Err(HomError::SignatureMismatch);
    }
    if f.source_size() != x.domain_size() || f.target_size() != a.domain_size() {
        return Err(HomError::SizeMismatch {
            map_source: f.source_size(),
            map_target: f.target_size(),
            x_size: x.domain_size(),
            a_size: a.domain_size(),
        });
    }
    Ok(first_escaping_tuple(f, x, a).is_none())
}

/// The first `(relation index, tuple)` of `x` whose image under `f` is not
/// in `a`. Sizes and signatures are assumed compatible.
pub fn first_escaping_tuple<'x>(f: &DomainMap, x: &'x Structure, a: &Structure) -> Option<(usize, &'x [Elem])> {
    let mut image = Vec::new();
    for (i, (rx, ra)) in x.relations().iter().zip(a.relations()).enumerate() {
        for t in rx {
            image.clear();
            image.extend(t.iter().map(|&v| f.get(v)));
            if !ra.contains(&image) {
                return Some((i, t));
            }
        }
    }
    None
}

pub fn find_homomorphism(x: &Structure, a: &Structure, limits: SearchLimits) -> Result<HomOutcome, HomError> {
    let mut solver = Solver::new(x, a, limits)?;
    let mut found = None;
    solver.run(Branching::MinRemaining, &mut |m| {
        found = Some(m);
        false
    })?;
    Ok(HomOutcome { map: found, stats: solver.finish() })
}

/// The first `limit` homomorphisms in lexicographic order of value arrays;
/// all of them if fewer exist.
pub fn enumerate_homomorphisms(
    x: &Structure,
    a: &Structure,
    limit: usize,
    limits: SearchLimits,
) -> Result<Vec<DomainMap>, HomError> {
    if limit == 0 {
        return Err(HomError::ZeroLimit);
    }
    let mut solver = Solver::new(x, a, limits)?;
    let mut out = Vec::new();
    solver.run(Branching::Lexicographic, &mut |m| {
        out.push(m);
        out.len() < limit
    })?;
    Ok(out)
}

/// Does `x` map homomorphically into `a`?
pub fn csp_decide(x: &Structure, a: &Structure, limits: SearchLimits) -> Result<bool, HomError> {
    Ok(find_homomorphism(x, a, limits)?.map.is_some())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Branching {
    MinRemaining,
    Lexicographic,
}

struct Constraint {
    rel: usize,
    scope: Vec<usize>,
    /// Distinct variables of the scope with one representative position each.
    vars: Vec<(usize, usize)>,
    /// `first[i]` is the first position holding the same variable as `i`.
    first: Vec<usize>,
}

/// Candidate sets, one row of `values` flags per variable.
#[derive(Clone)]
struct Domains {
    width: usize,
    live: Vec<bool>,
    sizes: Vec<usize>,
}

impl Domains {
    fn contains(&self, var: usize, val: Elem) -> bool {
        self.live[var * self.width + val]
    }

    fn assign(&mut self, var: usize, val: Elem) {
        let row = &mut self.live[var * self.width..(var + 1) * self.width];
        row.iter_mut().for_each(|b| *b = false);
        row[val] = true;
        self.sizes[var] = 1;
    }

    fn values(&self, var: usize) -> impl Iterator<Item = Elem> + '_ {
        let row = &self.live[var * self.width..(var + 1) * self.width];
        row.iter().enumerate().filter(|(_, &b)| b).map(|(v, _)| v)
    }
}

struct Solver<'s> {
    template: &'s Structure,
    constraints: Vec<Constraint>,
    watchers: Vec<Vec<usize>>,
    num_vars: usize,
    limits: SearchLimits,
    stats: SearchStats,
    started: Instant,
    // scratch: supported[var * width + val]
    supported: Vec<bool>,
}

impl<'s> Solver<'s> {
    fn new(x: &Structure, a: &'s Structure, limits: SearchLimits) -> Result<Self, HomError> {
        if !x.same_type(a) {
            return Err(HomError::SignatureMismatch);
        }
        let num_vars = x.domain_size();
        let mut constraints = Vec::new();
        let mut watchers = vec![Vec::new(); num_vars];
        for (rel, r) in x.relations().iter().enumerate() {
            for t in r {
                let first: Vec<usize> = (0..t.len()).map(|i| t.iter().position(|&v| v == t[i]).unwrap()).collect();
                let vars: Vec<(usize, usize)> = (0..t.len()).filter(|&i| first[i] == i).map(|i| (t[i], i)).collect();
                let id = constraints.len();
                for &(v, _) in &vars {
                    watchers[v].push(id);
                }
                constraints.push(Constraint { rel, scope: t.clone(), vars, first });
            }
        }
        Ok(Self {
            template: a,
            constraints,
            watchers,
            num_vars,
            limits,
            stats: SearchStats::default(),
            started: Instant::now(),
            supported: vec![false; num_vars * a.domain_size()],
        })
    }

    fn finish(mut self) -> SearchStats {
        self.stats.elapsed = self.started.elapsed();
        self.stats
    }

    fn run(&mut self, branching: Branching, sink: &mut dyn FnMut(DomainMap) -> bool) -> Result<(), HomError> {
        let width = self.template.domain_size();
        let mut doms = Domains { width, live: vec![true; self.num_vars * width], sizes: vec![width; self.num_vars] };
        let queue: VecDeque<usize> = (0..self.constraints.len()).collect();
        if !self.propagate(&mut doms, queue) {
            self.count_node()?;
            return Ok(());
        }
        self.search(doms, branching, sink).map(|_| ())
    }

    fn count_node(&mut self) -> Result<(), HomError> {
        self.stats.nodes_expanded += 1;
        if self.stats.nodes_expanded > self.limits.node_budget {
            self.stats.elapsed = self.started.elapsed();
            return Err(HomError::BudgetExceeded { budget: self.limits.node_budget, stats: self.stats });
        }
        Ok(())
    }

    /// Returns `Ok(false)` once the sink asked to stop.
    fn search(
        &mut self,
        doms: Domains,
        branching: Branching,
        sink: &mut dyn FnMut(DomainMap) -> bool,
    ) -> Result<bool, HomError> {
        self.count_node()?;
        let open = (0..self.num_vars).filter(|&v| doms.sizes[v] > 1);
        let choice = match branching {
            Branching::Lexicographic => open.min(),
            Branching::MinRemaining => open.min_by_key(|&v| (doms.sizes[v], v)),
        };
        let Some(var) = choice else {
            let values =
                (0..self.num_vars).map(|v| doms.values(v).next().expect("nonempty after propagation")).collect();
            let map = DomainMap::new(doms.width, values).expect("values are in range");
            return Ok(sink(map));
        };
        let candidates: Vec<Elem> = doms.values(var).collect();
        for val in candidates {
            let mut next = doms.clone();
            next.assign(var, val);
            let queue = self.watchers[var].iter().copied().collect();
            if self.propagate(&mut next, queue) {
                if !self.search(next, branching, sink)? {
                    return Ok(false);
                }
            } else {
                self.count_node()?;
            }
        }
        Ok(true)
    }

    /// Enforces generalized arc consistency. Returns false on a wipe-out.
    fn propagate(&mut self, doms: &mut Domains, mut queue: VecDeque<usize>) -> bool {
        let mut queued = vec![false; self.constraints.len()];
        for &c in &queue {
            queued[c] = true;
        }
        while let Some(c) = queue.pop_front() {
            queued[c] = false;
            self.stats.propagation_calls += 1;
            let changed = match self.revise(c, doms) {
                Some(changed) => changed,
                None => return false,
            };
            for var in changed {
                for &d in &self.watchers[var] {
                    if d != c && !queued[d] {
                        queued[d] = true;
                        queue.push_back(d);
                    }
                }
            }
        }
        true
    }

    /// Removes unsupported values from the scope of constraint `c`. Returns
    /// the variables whose domains shrank, or `None` if one became empty.
    fn revise(&mut self, c: usize, doms: &mut Domains) -> Option<Vec<usize>> {
        let con = &self.constraints[c];
        let width = doms.width;
        for &(v, _) in &con.vars {
            self.supported[v * width..(v + 1) * width].iter_mut().for_each(|b| *b = false);
        }
        for s in self.template.relation(con.rel) {
            let consistent =
                con.scope.iter().enumerate().all(|(i, &v)| s[i] == s[con.first[i]] && doms.contains(v, s[i]));
            if consistent {
                for &(v, pos) in &con.vars {
                    self.supported[v * width + s[pos]] = true;
                }
            }
        }
        let mut changed = Vec::new();
        for &(v, _) in &con.vars {
            let mut size = 0;
            for val in 0..width {
                let idx = v * width + val;
                if doms.live[idx] && !self.supported[idx] {
                    doms.live[idx] = false;
                } else if doms.live[idx] {
                    size += 1;
                }
            }
            if size == 0 {
                return None;
            }
            if size != doms.sizes[v] {
                doms.sizes[v] = size;
                changed.push(v);
            }
        }
        Some(changed)
    }
}

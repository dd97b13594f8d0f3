use std::collections::BTreeMap;

use proptest::prelude::*;

use pcsp_core::affine::{affine_closure, coset_presentation, solve_affine_csp, CyclicGroup};
use pcsp_core::homsearch::{csp_decide, enumerate_homomorphisms, find_homomorphism, is_homomorphism, SearchLimits};
use pcsp_core::polymorph::{
    close_under, coarsest_block_partition, is_block_symmetric, is_conservative, is_polymorphism, restrict_operation,
    transposition_witness, NamedOperation, OperationTable,
};
use pcsp_core::relstruct::RelSymbol;
use pcsp_core::{DomainMap, Relation, Signature, Structure, Tuple};

fn signature() -> Signature {
    Signature::new(vec![RelSymbol { name: "E".into(), arity: 2 }, RelSymbol { name: "U".into(), arity: 1 }]).unwrap()
}

fn tuples(m: usize, arity: usize, max: usize) -> impl Strategy<Value = Vec<Tuple>> {
    prop::collection::vec(prop::collection::vec(0..m, arity), 0..=max)
}

fn structure_of_size(m: usize) -> impl Strategy<Value = Structure> {
    (tuples(m, 2, 6), tuples(m, 1, 2)).prop_map(move |(e, u)| Structure::new(m, signature(), vec![e, u]).unwrap())
}

fn structure(max_m: usize) -> impl Strategy<Value = Structure> {
    (1..=max_m).prop_flat_map(structure_of_size)
}

fn map(source: usize, target: usize) -> impl Strategy<Value = DomainMap> {
    prop::collection::vec(0..target, source).prop_map(move |v| DomainMap::new(target, v).unwrap())
}

fn operation(m: usize, max_arity: usize) -> impl Strategy<Value = OperationTable> {
    (1..=max_arity).prop_flat_map(move |k| {
        prop::collection::vec(0..m, m.pow(k as u32))
            .prop_map(move |vals| OperationTable::from_values(m, m, k, vals).unwrap())
    })
}

fn brute_force(x: &Structure, a: &Structure) -> Vec<DomainMap> {
    DomainMap::all(x.domain_size(), a.domain_size()).filter(|f| is_homomorphism(f, x, a).unwrap()).collect()
}

fn add_tuple(s: &Structure, rel: usize, t: Tuple) -> Structure {
    let mut rels: Vec<Vec<Tuple>> = s.relations().iter().map(|r| r.tuples().to_vec()).collect();
    rels[rel].push(t);
    Structure::new(s.domain_size(), s.signature().clone(), rels).unwrap()
}

proptest! {
    #[test]
    fn structure_text_round_trip(s in structure(5)) {
        let text = s.serialize();
        prop_assert_eq!(Structure::parse(&text).unwrap(), s);
    }

    #[test]
    fn operation_text_round_trip(op in operation(3, 3)) {
        let named = NamedOperation { name: "f".into(), table: op };
        prop_assert_eq!(NamedOperation::parse(&named.serialize()).unwrap(), named);
    }

    #[test]
    fn map_composition_is_associative_and_acts_on_structures(
        (s, f, g, h) in (1..=4usize, 1..=4usize, 1..=4usize, 1..=4usize)
            .prop_flat_map(|(a, b, c, d)| (structure_of_size(a), map(a, b), map(b, c), map(c, d)))
    ) {
        let fg = f.then(&g).unwrap();
        prop_assert_eq!(fg.then(&h).unwrap(), f.then(&g.then(&h).unwrap()).unwrap());
        prop_assert_eq!(s.apply_map(&f).unwrap().apply_map(&g).unwrap(), s.apply_map(&fg).unwrap());
        prop_assert!(is_homomorphism(&f, &s, &s.apply_map(&f).unwrap()).unwrap());
        prop_assert_eq!(DomainMap::identity(s.domain_size()).then(&f).unwrap(), f);
    }

    #[test]
    fn homomorphism_search_matches_brute_force(x in structure(5), a in structure(3)) {
        let all = brute_force(&x, &a);
        let found = find_homomorphism(&x, &a, SearchLimits::default()).unwrap().map;
        prop_assert_eq!(found.is_some(), !all.is_empty());
        if let Some(f) = found {
            prop_assert!(is_homomorphism(&f, &x, &a).unwrap());
        }
        let listed = enumerate_homomorphisms(&x, &a, usize::MAX, SearchLimits::default()).unwrap();
        let mut sorted = all.clone();
        sorted.sort_by(|p, q| p.values().cmp(q.values()));
        prop_assert_eq!(listed, sorted);
    }

    #[test]
    fn homomorphisms_compose(x in structure(4), a in structure(3), b in structure(3)) {
        let Some(f) = find_homomorphism(&x, &a, SearchLimits::default()).unwrap().map else { return Ok(()) };
        for g in brute_force(&a, &b) {
            prop_assert!(is_homomorphism(&f.then(&g).unwrap(), &x, &b).unwrap());
        }
    }

    #[test]
    fn enumeration_respects_the_limit(x in structure(4), a in structure(3), limit in 1..5usize) {
        let all = enumerate_homomorphisms(&x, &a, usize::MAX, SearchLimits::default()).unwrap();
        let some = enumerate_homomorphisms(&x, &a, limit, SearchLimits::default()).unwrap();
        prop_assert_eq!(&some[..], &all[..all.len().min(limit)]);
    }

    #[test]
    fn adding_target_tuples_keeps_yes_and_source_tuples_keeps_no(
        (x, a, tx, ta) in (1..=4usize, 1..=3usize).prop_flat_map(|(m, n)| {
            (structure_of_size(m), structure_of_size(n), prop::collection::vec(0..m, 2), prop::collection::vec(0..n, 2))
        })
    ) {
        let before = csp_decide(&x, &a, SearchLimits::default()).unwrap();
        let bigger_a = add_tuple(&a, 0, ta);
        let bigger_x = add_tuple(&x, 0, tx);
        if before {
            prop_assert!(csp_decide(&x, &bigger_a, SearchLimits::default()).unwrap());
        } else {
            prop_assert!(!csp_decide(&bigger_x, &a, SearchLimits::default()).unwrap());
        }
    }

    #[test]
    fn closure_is_a_closure_operator(op in operation(3, 3), ts in tuples(3, 2, 5), extra in tuples(3, 2, 2)) {
        let closed = close_under(&op, &ts, 2);
        prop_assert!(ts.iter().all(|t| closed.contains(t)));
        prop_assert_eq!(close_under(&op, closed.tuples(), 2), closed.clone());
        let mut more = ts.clone();
        more.extend(extra);
        prop_assert!(closed.is_subset(&close_under(&op, &more, 2)));
        let s = Structure::single(3, 2, closed.into_tuples()).unwrap();
        prop_assert!(is_polymorphism(&op, &s).unwrap());
    }

    #[test]
    fn polymorphism_iff_closure_adds_nothing(op in operation(3, 3), ts in tuples(3, 2, 5)) {
        let s = Structure::single(3, 2, ts.clone()).unwrap();
        let closed = close_under(&op, &ts, 2);
        prop_assert_eq!(is_polymorphism(&op, &s).unwrap(), &closed == s.relation(0));
    }

    #[test]
    fn conservative_operations_restrict_to_every_subset(
        choices in prop::collection::vec(0..3usize, 27),
        subset in prop::collection::btree_set(0..3usize, 1..=3),
        ts in tuples(3, 2, 5),
    ) {
        // pick one argument per row, so the table is conservative
        let mut i = 0;
        let op = OperationTable::from_fn(3, 3, 3, |args| { i += 1; args[choices[i - 1]] }).unwrap();
        prop_assert!(is_conservative(&op));
        let c = Structure::single(3, 2, close_under(&op, &ts, 2).into_tuples()).unwrap();
        let subset: Vec<usize> = subset.into_iter().collect();
        let r = restrict_operation(&op, &subset).expect("conservative operations restrict");
        prop_assert!(is_conservative(&r));
        let induced = c.induced_substructure(&subset).unwrap();
        prop_assert!(is_polymorphism(&r, &induced.structure).unwrap());
        prop_assert!(is_homomorphism(&induced.inclusion, &induced.structure, &c).unwrap());
    }

    #[test]
    fn coarsest_partition_is_symmetric_and_coarsest(op in operation(2, 4)) {
        let p = coarsest_block_partition(&op);
        prop_assert!(is_block_symmetric(&op, &p));
        let block_of: BTreeMap<usize, usize> =
            p.blocks().iter().enumerate().flat_map(|(b, ps)| ps.iter().map(move |&i| (i, b))).collect();
        for i in 0..op.arity() {
            for j in i + 1..op.arity() {
                // a transposition across blocks is never a symmetry
                if block_of[&i] != block_of[&j] {
                    prop_assert!(transposition_witness(&op, i, j).is_some());
                }
            }
        }
        prop_assert_eq!(p.blocks().iter().map(Vec::len).sum::<usize>(), op.arity());
    }

    #[test]
    fn operations_built_symmetric_are_found_symmetric(
        cut in 1..4usize,
        vals in prop::collection::vec(0..2usize, 64),
    ) {
        // arity 4, blocks {0..cut} and {cut..4}; value depends on the two block counts
        let op = OperationTable::from_fn(2, 2, 4, |x| {
            let left: usize = x[..cut].iter().sum();
            let right: usize = x[cut..].iter().sum();
            vals[left * 5 + right]
        }).unwrap();
        let p = coarsest_block_partition(&op);
        let block_of = |i: usize| p.blocks().iter().position(|b| b.contains(&i)).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                if (i < cut) == (j < cut) {
                    prop_assert_eq!(block_of(i), block_of(j));
                }
            }
        }
    }

    #[test]
    fn affine_closure_is_the_malcev_closure_and_a_coset(
        (p, k, ts) in prop_oneof![Just((2usize, 3usize)), Just((3, 3)), Just((5, 2))]
            .prop_flat_map(|(p, k)| (Just(p), Just(k), prop::collection::vec(prop::collection::vec(0..p, k), 1..=4)))
    ) {
        let closure = affine_closure(&ts, k, p).unwrap();
        let malcev = CyclicGroup::new(p).unwrap().malcev();
        prop_assert_eq!(&closure, &close_under(&malcev, &ts, k));
        let mut size = closure.len();
        while size.is_multiple_of(p) {
            size /= p;
        }
        prop_assert_eq!(size, 1, "coset size {} is not a power of {}", closure.len(), p);
        let pres = coset_presentation(closure.tuples(), p).unwrap();
        prop_assert_eq!(pres.solutions(usize::MAX).unwrap(), closure);
    }

    #[test]
    fn affine_solver_agrees_with_backtracking(
        (p, template, x) in prop_oneof![Just(2usize), Just(3usize)].prop_flat_map(|p| {
            (
                Just(p),
                prop::collection::vec(prop::collection::vec(0..p, 3), 1..=3),
                (1..=5usize).prop_flat_map(|v| tuples(v, 3, 4).prop_map(move |ts| (v, ts))),
            )
        })
    ) {
        let c = Structure::single(p, 3, affine_closure(&template, 3, p).unwrap().into_tuples()).unwrap();
        let x = Structure::single(x.0, 3, x.1).unwrap();
        let sol = solve_affine_csp(&x, &c, p).unwrap();
        prop_assert_eq!(sol.map.is_some(), csp_decide(&x, &c, SearchLimits::default()).unwrap());
        if let Some(m) = sol.map {
            prop_assert!(is_homomorphism(&m, &x, &c).unwrap());
        }
    }
}

#[test]
fn relation_is_a_sorted_set() {
    let r = Relation::from_tuples(2, vec![vec![1, 0], vec![0, 1], vec![1, 0]]);
    assert_eq!(r.tuples(), &[vec![0, 1], vec![1, 0]]);
}

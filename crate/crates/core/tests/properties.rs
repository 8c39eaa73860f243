use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

use rigid_galois_core::galois::{brute_force_galois, build_galois, step_partitions, AreaClasses};
use rigid_galois_core::graph::{
    all_henneberg1_sequences, henneberg1_sequence, is_laman, is_laman_exhaustive, random_labelling, Vertex,
};
use rigid_galois_core::realization::{enumerate_realizations, match_realizations};
use rigid_galois_core::tower::multiquadratic::multiquadratic_degree;
use rigid_galois_core::{Graph, Monomial, Perm, RootId, Tower, TowerElement};

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// sqrt 2, sqrt 3, sqrt(1 + sqrt 2), sqrt(-5)
fn sample_tower() -> Tower {
    let mut t = Tower::new();
    let r0 = t.adjoin_sqrt(TowerElement::from(2)).unwrap();
    t.adjoin_sqrt(TowerElement::from(3)).unwrap();
    t.adjoin_sqrt(&TowerElement::one() + &TowerElement::root(r0)).unwrap();
    t.adjoin_sqrt(TowerElement::from(-5)).unwrap();
    t
}

fn element() -> impl Strategy<Value = TowerElement> {
    prop::collection::vec((0u128..16, -20i64..=20, 1i64..=9), 0..6).prop_map(|terms| {
        TowerElement::from_terms(terms.into_iter().map(|(m, n, d)| (Monomial::from_bits(m), q(n, d))))
    })
}

fn nonzero_element() -> impl Strategy<Value = TowerElement> {
    element().prop_filter("nonzero", |e| !e.is_zero())
}

/// Random Henneberg-1 construction on `n` vertices from the edge 1-2.
fn type1_graph(n: usize) -> impl Strategy<Value = Graph> {
    let choices: Vec<_> = (3..=n).map(|v| (0..v - 1, 0..v - 2)).collect();
    choices.prop_map(move |picks| {
        let mut edges = vec![(1, 2)];
        for (idx, (a, b)) in picks.into_iter().enumerate() {
            let v = idx as Vertex + 3;
            let i = a as Vertex + 1;
            // second neighbour distinct from the first
            let mut j = b as Vertex + 1;
            if j >= i {
                j += 1;
            }
            edges.push((i, v));
            edges.push((j, v));
        }
        Graph::new(n, edges, Some((1, 2))).unwrap()
    })
}

fn any_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (2..=max_n)
        .prop_flat_map(|n| {
            let pairs: Vec<(Vertex, Vertex)> = (1..=n as Vertex)
                .flat_map(|u| (u + 1..=n as Vertex).map(move |v| (u, v)))
                .collect();
            let m = pairs.len();
            prop::collection::vec(any::<bool>(), m).prop_map(move |mask| {
                let edges: Vec<_> = pairs.iter().zip(&mask).filter(|(_, &b)| b).map(|(e, _)| *e).collect();
                Graph::new(n, edges, None)
            })
        })
        .prop_filter_map("needs an edge", |g| g.ok())
}

/// Square check through integer square roots only.
fn is_square(x: &BigInt) -> bool {
    !x.is_negative() && {
        let r = x.sqrt();
        &r * &r == *x
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms(a in element(), b in element(), c in element()) {
        let t = sample_tower();
        prop_assert_eq!(t.mul(&a, &b), t.mul(&b, &a));
        prop_assert_eq!(t.mul(&t.mul(&a, &b), &c), t.mul(&a, &t.mul(&b, &c)));
        prop_assert_eq!(t.mul(&a, &(&b + &c)), &t.mul(&a, &b) + &t.mul(&a, &c));
        prop_assert_eq!(&(&a + &b) - &b, a.clone());
        prop_assert_eq!(t.mul(&a, &TowerElement::one()), a);
    }

    #[test]
    fn inverses(a in nonzero_element()) {
        let t = sample_tower();
        let inv = t.inv(&a).unwrap();
        prop_assert_eq!(t.mul(&a, &inv), TowerElement::one());
        prop_assert_eq!(t.inv(&inv).unwrap(), a);
    }

    #[test]
    fn normalization_is_idempotent(raw in prop::collection::vec((prop::collection::vec(0usize..4, 0..5), -9i64..=9), 0..5)) {
        let t = sample_tower();
        let roots: Vec<(Vec<RootId>, BigRational)> =
            raw.into_iter().map(|(rs, n)| (rs.into_iter().map(RootId).collect(), q(n, 1))).collect();
        let once = t.normalize(roots.iter().map(|(r, c)| (r.as_slice(), c)));
        let terms: Vec<(Vec<RootId>, BigRational)> = once
            .iter()
            .map(|(m, c)| (m.roots().map(RootId).collect(), c.clone()))
            .collect();
        let twice = t.normalize(terms.iter().map(|(r, c)| (r.as_slice(), c)));
        prop_assert_eq!(once, twice);
    }

    #[test]
    fn numeric_products_enclose(a in element(), b in element()) {
        let t = sample_tower();
        let prec = 1e-20;
        let (ea, eb) = (t.numeric_eval(&a, prec).unwrap(), t.numeric_eval(&b, prec).unwrap());
        let eab = t.numeric_eval(&t.mul(&a, &b), prec).unwrap();
        prop_assert!(eab.overlaps(&ea.mul(&eb)));
        prop_assert!(eab.radius() <= prec);
    }

    #[test]
    fn laman_matches_exhaustive(g in any_graph(7)) {
        prop_assert_eq!(is_laman(&g), is_laman_exhaustive(&g));
    }

    #[test]
    fn constructed_graphs_are_laman(g in (2usize..=9).prop_flat_map(type1_graph)) {
        prop_assert!(is_laman(&g));
        let seq = henneberg1_sequence(&g).unwrap();
        prop_assert_eq!(seq.replay().unwrap(), g.edges().clone());
        for s in all_henneberg1_sequences(&g, 16) {
            prop_assert!(s.is_valid_for(&g));
        }
    }

    #[test]
    fn multiquadratic_rank_matches_subset_squares(values in prop::collection::vec((1i64..=300).prop_union(-300i64..=-1), 1..=8)) {
        let input: Vec<BigRational> = values.iter().map(|&v| q(v, 1)).collect();
        let got = multiquadratic_degree(&input).unwrap();
        let k = values.len();
        let squares = (0u32..1 << k)
            .filter(|mask| {
                let p: BigInt = (0..k).filter(|i| mask >> i & 1 == 1).map(|i| BigInt::from(values[i])).product();
                is_square(&p)
            })
            .count();
        prop_assert_eq!(squares << got.rank, 1usize << k);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn realization_invariants(g in (3usize..=6).prop_flat_map(type1_graph), seed in 0u64..1000) {
        let seq = henneberg1_sequence(&g).unwrap();
        let lab = random_labelling(&g, seed, 100);
        let Ok(rs) = enumerate_realizations(&g, &seq, &lab) else {
            // degenerate labellings are possible, just rare
            return Ok(());
        };
        prop_assert_eq!(rs.len(), 1 << (g.n() - 2));
        prop_assert!(rs.check_compatibility(&g, &lab).is_ok());
        prop_assert!(rs.check_pairing().is_ok());
        prop_assert!(rs.check_cayley_menger().is_ok());
        prop_assert!(rs.check_lambda_area_correspondence().is_ok());
        let parts = step_partitions(&rs);
        prop_assert_eq!(parts[0].k(), 1);
        for p in &parts {
            let covered: usize = p.blocks.iter().map(Vec::len).sum();
            prop_assert_eq!(covered, 1 << (p.step - 1));
        }
        let group = build_galois(&rs, &parts).unwrap();
        let exponent: usize = parts.iter().map(|p| p.k()).sum();
        prop_assert_eq!(group.order_log2(), exponent as u64);
        prop_assert_eq!(group.elements().unwrap().len(), 1usize << exponent);
        let classes = AreaClasses::new(&rs);
        for gen in group.generators() {
            for step in 1..=rs.steps() {
                prop_assert!(classes.preserved_by(gen, step));
            }
        }
    }

    #[test]
    fn oracle_equivalence(g in (3usize..=5).prop_flat_map(type1_graph), seed in 0u64..1000) {
        let seq = henneberg1_sequence(&g).unwrap();
        let Ok(rs) = enumerate_realizations(&g, &seq, &random_labelling(&g, seed, 100)) else {
            return Ok(());
        };
        let recursive = build_galois(&rs, &step_partitions(&rs)).unwrap();
        let brute = brute_force_galois(&rs).unwrap();
        prop_assert_eq!(recursive.element_set().unwrap(), brute.element_set().unwrap());
    }
}

/// Groups from different sequences agree once realizations are matched by
/// coordinates.
#[test]
fn sequence_independence_on_example_graph() {
    let g = rigid_galois_core::graph::parse_graph("1 3\n1 2\n2 3\n1 4\n2 4\n3 5\n4 5").unwrap();
    let lab = random_labelling(&g, 7, 100);
    let sequences = all_henneberg1_sequences(&g, 64);
    assert!(sequences.len() > 1);
    let first = enumerate_realizations(&g, &sequences[0], &lab).unwrap();
    let reference = build_galois(&first, &step_partitions(&first))
        .unwrap()
        .element_set()
        .unwrap();
    for seq in &sequences[1..] {
        let rs = enumerate_realizations(&g, seq, &lab).unwrap();
        let map = match_realizations(&first, &rs).unwrap().expect("same realizations");
        let group = build_galois(&rs, &step_partitions(&rs)).unwrap();
        // conjugate into the first indexing: i -> map^-1(g(map(i)))
        let inv: Vec<usize> = {
            let mut v = vec![0; map.len()];
            for (i, &j) in map.iter().enumerate() {
                v[j] = i;
            }
            v
        };
        let moved: BTreeSet<Perm> = group
            .elements()
            .unwrap()
            .iter()
            .map(|h| Perm::from_images(&(0..map.len()).map(|i| inv[h.apply(map[i])]).collect::<Vec<_>>()).unwrap())
            .collect();
        assert_eq!(moved, reference, "sequence {:?}", seq.moves);
    }
}

#[test]
fn zero_is_rejected_by_inverse() {
    let t = sample_tower();
    assert!(t.inv(&TowerElement::zero()).is_err());
    assert!(TowerElement::zero().is_zero());
    assert!(!q(1, 3).is_zero());
}

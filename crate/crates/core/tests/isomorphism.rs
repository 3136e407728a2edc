use std::collections::BTreeMap;

use hyperdilute::generators::random_hypergraph;
use hyperdilute::iso::DEFAULT_ISO_BUDGET;
use hyperdilute::*;
use proptest::prelude::*;

/// Tries every vertex bijection.
fn brute_isomorphic(a: &Hypergraph, b: &Hypergraph) -> bool {
    if a.num_vertices() != b.num_vertices() || a.num_edges() != b.num_edges() {
        return false;
    }
    let av: Vec<&Vertex> = a.vertices().iter().collect();
    let bv: Vec<&Vertex> = b.vertices().iter().collect();
    let mut perm: Vec<usize> = (0..bv.len()).collect();
    loop {
        let map: BTreeMap<Vertex, Vertex> = av.iter().zip(&perm).map(|(x, &i)| ((*x).clone(), bv[i].clone())).collect();
        if a.rename(&map) == *b {
            return true;
        }
        // next permutation
        let Some(i) = (1..perm.len()).rev().find(|&i| perm[i - 1] < perm[i]) else {
            return false;
        };
        let j = (i..perm.len()).rev().find(|&j| perm[j] > perm[i - 1]).unwrap();
        perm.swap(i - 1, j);
        perm[i..].reverse();
    }
}

fn arb_small() -> impl Strategy<Value = Hypergraph> {
    (1usize..=6, 1usize..=5, 1usize..=3, 1usize..=3, 0u64..40).prop_filter_map("infeasible", |(nv, ne, d, r, s)| {
        random_hypergraph(nv, ne, d, r, s).ok()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn agrees_with_brute_force(a in arb_small(), b in arb_small()) {
        let want = brute_isomorphic(&a, &b);
        let got = isomorphic(&a, &b, DEFAULT_ISO_BUDGET).unwrap();
        prop_assert_eq!(got.is_some(), want);
        if let Some(w) = got {
            prop_assert!(w.is_valid(&a, &b));
        }
        let same = certificate(&a, DEFAULT_ISO_BUDGET).unwrap() == certificate(&b, DEFAULT_ISO_BUDGET).unwrap();
        prop_assert_eq!(same, want);
    }
}

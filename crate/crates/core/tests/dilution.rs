use hyperdilute::dilution::{track_labels, trace_sequence, DEFAULT_SEARCH_BUDGET};
use hyperdilute::format::{parse_hypergraph, parse_sequence, print_hypergraph, print_sequence};
use hyperdilute::generators::{jigsaw, mesh, random_hypergraph};
use hyperdilute::iso::DEFAULT_ISO_BUDGET;
use hyperdilute::suite::random_sequence;
use hyperdilute::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn arb_hypergraph() -> impl Strategy<Value = Hypergraph> {
    (1usize..=7, 1usize..=6, 1usize..=3, 1usize..=4, any::<u64>()).prop_filter_map(
        "infeasible parameters",
        |(nv, ne, d, r, seed)| random_hypergraph(nv, ne, d, r, seed).ok(),
    )
}

fn arb_diluted() -> impl Strategy<Value = (Hypergraph, DilutionSequence)> {
    (arb_hypergraph(), any::<u64>()).prop_map(|(h, seed)| {
        let seq = random_sequence(&mut ChaCha8Rng::seed_from_u64(seed), &h, 5);
        (h, seq)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn applied_sequences_verify((h, seq) in arb_diluted()) {
        let end = apply_sequence(&h, &seq).unwrap();
        prop_assert!(verify_dilution(&h, &seq, &end).unwrap().is_some());
        prop_assert!(end.num_vertices() <= h.num_vertices());
        prop_assert!(end.num_edges() <= h.num_edges());
        let trace = trace_sequence(&h, &seq).unwrap();
        prop_assert_eq!(trace.len(), seq.len() + 1);
    }

    #[test]
    fn search_rediscovers_reduced_targets((h, seq) in arb_diluted()) {
        let end = apply_sequence(&h, &seq).unwrap();
        match search_dilution(&h, &end, DEFAULT_SEARCH_BUDGET) {
            Ok(out) => {
                let found = out.found().expect("a sequence exists");
                prop_assert!(verify_dilution(&h, found, &end).unwrap().is_some());
            }
            Err(e) => prop_assert!(e.is_resource_limit(), "{e}"),
        }
    }

    #[test]
    fn labels_stay_disjoint_and_connected((h, seq) in arb_diluted()) {
        let labels = track_labels(&h, &seq).unwrap();
        prop_assert!(labels.pairwise_disjoint());
        let end = apply_sequence(&h, &seq).unwrap();
        prop_assert!(labels.labels.keys().eq(end.edges().iter()));
    }

    #[test]
    fn reduce_is_idempotent(h in arb_hypergraph()) {
        let (r, seq) = reduce(&h);
        prop_assert!(r.is_reduced() || r.num_edges() == 1);
        prop_assert_eq!(apply_sequence(&h, &seq).unwrap(), r.clone());
        prop_assert!(reduce(&r).1.is_empty());
    }

    #[test]
    fn text_formats_round_trip((h, seq) in arb_diluted()) {
        prop_assert_eq!(parse_hypergraph(&print_hypergraph(&h)).unwrap(), h);
        prop_assert_eq!(parse_sequence(&print_sequence(&seq)).unwrap(), seq);
    }

    #[test]
    fn isomorphism_ignores_names(h in arb_hypergraph()) {
        let map = h.vertices().iter().rev().enumerate().map(|(i, v)| (v.clone(), format!("y{i}"))).collect();
        let renamed = h.rename(&map);
        let w = isomorphic(&h, &renamed, DEFAULT_ISO_BUDGET).unwrap().expect("renamed copy");
        prop_assert!(w.is_valid(&h, &renamed));
        prop_assert_eq!(certificate(&h, DEFAULT_ISO_BUDGET).unwrap(), certificate(&renamed, DEFAULT_ISO_BUDGET).unwrap());
    }
}

#[test]
fn size_obstruction_is_immediate() {
    let small = jigsaw(2, 2).unwrap();
    let big = mesh(3, 3);
    assert_eq!(search_dilution(&small, &big, 1).unwrap(), SearchOutcome::Absent);
}

#[test]
fn jigsaws_dilute_to_smaller_jigsaws() {
    let out = search_dilution(&jigsaw(2, 3).unwrap(), &jigsaw(2, 2).unwrap(), DEFAULT_SEARCH_BUDGET).unwrap();
    assert!(out.found().is_some());
    // but never the other way round
    let out = search_dilution(&jigsaw(2, 2).unwrap(), &jigsaw(2, 3).unwrap(), DEFAULT_SEARCH_BUDGET).unwrap();
    assert!(out.found().is_none());
}

#[test]
fn broken_steps_report_their_index() {
    let h = jigsaw(2, 2).unwrap();
    let seq = DilutionSequence::new(vec![
        DilutionStep::DeleteVertex("h1_1".into()),
        DilutionStep::DeleteVertex("h1_1".into()),
    ]);
    match apply_sequence(&h, &seq).unwrap_err() {
        Error::InvalidStep { index, .. } => assert_eq!(index, 1),
        e => panic!("unexpected {e:?}"),
    }
}

use hyperdilute::cq::*;
use hyperdilute::format::{parse_database, parse_query, print_database, print_query};
use hyperdilute::suite::random_reduction_instance;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reduction_preserves_answers(seed in any::<u64>()) {
        let inst = random_reduction_instance(&mut ChaCha8Rng::seed_from_u64(seed));
        let want = evaluate_naive(&inst.query, &inst.database);
        prop_assert_eq!(&evaluate(&inst.query, &inst.database).unwrap(), &want);
        let red = reduce_along_dilution(&inst.query, &inst.database, &inst.h, &inst.seq).unwrap();
        let got = evaluate(&red.query, &red.database).unwrap();
        prop_assert_eq!(project(&got, &red.rename), want.clone());
        prop_assert_eq!(got.len(), want.len());
        prop_assert_eq!(red.sizes.len(), inst.seq.len());
    }

    #[test]
    fn self_join_elimination_keeps_answers(seed in any::<u64>()) {
        let inst = random_reduction_instance(&mut ChaCha8Rng::seed_from_u64(seed));
        let (q, db) = eliminate_self_joins(&inst.query, &inst.database).unwrap();
        prop_assert!(q.is_self_join_free());
        prop_assert_eq!(evaluate(&q, &db).unwrap(), evaluate(&inst.query, &inst.database).unwrap());
    }

    #[test]
    fn query_and_database_round_trip(seed in any::<u64>()) {
        let inst = random_reduction_instance(&mut ChaCha8Rng::seed_from_u64(seed));
        prop_assert_eq!(parse_query(&print_query(&inst.query)).unwrap(), inst.query.clone());
        let db = parse_database(&print_database(&inst.database)).unwrap();
        // relations without facts cannot be written down
        for (r, rel) in &inst.database.relations {
            match db.relations.get(r) {
                Some(back) => prop_assert_eq!(back, rel),
                None => prop_assert!(rel.tuples.is_empty()),
            }
        }
    }

    #[test]
    fn core_is_equivalent(seed in any::<u64>()) {
        let inst = random_reduction_instance(&mut ChaCha8Rng::seed_from_u64(seed));
        let q = &inst.query;
        prop_assume!(q.variables().len() <= DEFAULT_CORE_LIMIT);
        let core = compute_core(q, DEFAULT_CORE_LIMIT).unwrap();
        prop_assert!(find_homomorphism(q, &core).is_some());
        prop_assert!(find_homomorphism(&core, q).is_some());
        prop_assert!(core.atoms.len() <= q.atoms.len());
        // a core has no proper retract
        prop_assert_eq!(compute_core(&core, DEFAULT_CORE_LIMIT).unwrap().atoms.len(), core.atoms.len());
    }
}

#[test]
fn reserved_prefix_is_refused() {
    let q = parse_query("R(x,y)\n").unwrap();
    let db = parse_database("R(_fresh_0,a).\n").unwrap();
    let h = hypergraph_of(&q);
    let err = reduce_along_dilution(&q, &db, &h, &Default::default()).unwrap_err();
    assert!(matches!(err, hyperdilute::Error::ReservedConstant(_)));
}

#[test]
fn database_size_counts_cells() {
    let db = parse_database("R(1,2).\nR(2,3).\nU(1).\nZ().\n").unwrap();
    assert_eq!(database_size(&db), 2 * 2 + 1 + 1);
}

use coverpoly::covering::{build, minimal_covers, relaxation, CoveringMatrix, PolyhedronKind};
use coverpoly::numeric::{ratio, QVector};
use coverpoly::polyhedron::{h_to_v, Representation, VRep};
use coverpoly::skeleton::{build_skeleton, Method};
use coverpoly::verify::{
    check_graph_case, oracle, random_graph_instance, random_instance, run_statement,
    three_way_agreement, InstanceSpec, StatementId,
};
use proptest::prelude::*;

fn small_instance() -> impl Strategy<Value = CoveringMatrix> {
    (any::<u64>(), 2usize..=5, 1usize..=6, 1i64..=3).prop_map(|(seed, n, m, d)| {
        random_instance(&InstanceSpec::new(seed, n, m, ratio(d, 4))).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn every_statement_holds(a in small_instance()) {
        for id in StatementId::PER_MATRIX {
            let r = run_statement(id, &a).unwrap();
            prop_assert!(r.confirmed(), "{}", r.to_json_line());
        }
    }

    #[test]
    fn methods_agree_on_both_up_monotone_polyhedra(a in small_instance()) {
        for kind in [PolyhedronKind::QStar, PolyhedronKind::Q] {
            prop_assert!(three_way_agreement(&a, kind).unwrap().disagreements.is_empty());
        }
    }

    #[test]
    fn minimal_covers_match_brute_force(a in small_instance()) {
        prop_assert_eq!(minimal_covers(&a).unwrap(), oracle::brute_minimal_covers(&a));
    }

    #[test]
    fn double_description_matches_basic_solutions(a in small_instance()) {
        for h in [relaxation(&a), relaxation(&a).truncate_hypercube()] {
            prop_assert_eq!(h_to_v(&h).unwrap().vertices().to_vec(), oracle::basic_vertices(&h).unwrap());
        }
    }

    #[test]
    fn rank_adjacency_matches_the_midpoint_oracle(a in small_instance()) {
        let rep = build(&a, PolyhedronKind::QBar).unwrap();
        let g = build_skeleton(&rep, Method::Rank).unwrap();
        let p = VRep::new(a.n(), g.nodes.clone(), Vec::new()).unwrap();
        for i in 0..g.nodes.len() {
            for j in i + 1..g.nodes.len() {
                let brute = oracle::brute_adjacent(&p, &g.nodes[i], &g.nodes[j]).unwrap();
                prop_assert_eq!(brute, g.edges.contains(&(i, j)));
            }
        }
    }

    #[test]
    fn skeletons_are_deterministic(a in small_instance()) {
        let rep = build(&a, PolyhedronKind::QStar).unwrap();
        let g1 = build_skeleton(&rep, Method::Both).unwrap();
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let g2 = pool.install(|| build_skeleton(&rep, Method::Both).unwrap());
        prop_assert_eq!(g1.to_json().to_string(), g2.to_json().to_string());
    }

    #[test]
    fn random_graphs_keep_the_property(seed in any::<u64>(), nodes in 3usize..=6, frac in 0.0f64..1.0) {
        let max = nodes * (nodes - 1) / 2;
        let edges = 1 + ((max - 1) as f64 * frac) as usize;
        let a = random_graph_instance(seed, nodes, edges).unwrap();
        prop_assert!(check_graph_case(&a).unwrap().confirmed());
    }

    #[test]
    fn generator_is_reproducible(seed in any::<u64>(), n in 1usize..=8, m in 1usize..=8) {
        let spec = InstanceSpec::new(seed, n, m, ratio(1, 2));
        let a = random_instance(&spec).unwrap();
        prop_assert_eq!(&a, &random_instance(&spec).unwrap());
        prop_assert!(a.m() <= m && a.m() >= 1);
        prop_assert!(a.rows().iter().all(|r| r.iter().any(|&b| b)));
    }
}

#[test]
fn brute_adjacent_on_the_square() {
    let q = |x: &[i64]| QVector::from_ints(x);
    let sq = VRep::new(
        2,
        vec![q(&[0, 0]), q(&[0, 1]), q(&[1, 0]), q(&[1, 1])],
        vec![],
    )
    .unwrap();
    assert!(!oracle::brute_adjacent(&sq, &q(&[0, 0]), &q(&[1, 1])).unwrap());
    assert!(oracle::brute_adjacent(&sq, &q(&[0, 0]), &q(&[0, 1])).unwrap());
}

#[test]
fn contrast_relaxation_has_a_fractional_vertex() {
    // the binary-vertex hypothesis matters: Qbar(A) itself is not integral
    let a = CoveringMatrix::circulant3();
    let Representation::H(h) = build(&a, PolyhedronKind::QBar).unwrap() else {
        panic!()
    };
    let v = h_to_v(&h).unwrap();
    assert!(v.vertices().iter().any(|x| !x.is_binary()));
    assert!(v.vertices().contains(&"1/2,1/2,1/2".parse().unwrap()));
}

#[test]
fn perturbed_circulant_is_reported_not_asserted() {
    // adding the all-ones row: the report describes whatever holds
    let a = CoveringMatrix::from_rows(&[&[1, 1, 0], &[0, 1, 1], &[1, 0, 1], &[1, 1, 1]]);
    for id in StatementId::PER_MATRIX {
        let r = run_statement(id, &a).unwrap();
        assert!(!r.facts.is_empty());
    }
}

#[test]
fn sweep_instances_respect_the_matrix_invariants() {
    for seed in 1..=100 {
        let spec = InstanceSpec::sweep(seed);
        let a = random_instance(&spec).unwrap();
        assert_eq!(a.n(), spec.n);
        let reparsed = CoveringMatrix::new(a.n(), a.rows().to_vec()).unwrap();
        assert!(reparsed.warnings.is_empty());
    }
}

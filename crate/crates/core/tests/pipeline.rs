use num_bigint::BigUint;
use rand::Rng;

use tdham::decomposition::{
    anchor_bags, balanced_path_decomposition, default_root, lift_to_split, make_nice, min_fill_decomposition,
    parse_decomposition, validate_decomposition, write_decomposition, TreeDecomposition,
};
use tdham::generators::{cycle, path, random_connected, random_partial_ktree, rng};
use tdham::graph::choose_anchor;
use tdham::zeta::EngineOptions;
use tdham::{parse_edge_list, split_anchor, tsp, Engine, Error, Graph};

#[test]
fn anchored_decompositions_validate() {
    let mut r = rng(1);
    for _ in 0..100 {
        let n = r.gen_range(3..=12);
        let g = random_connected(n, r.gen_range(0.1..0.8), &mut r);
        let td = min_fill_decomposition(&g);
        assert!(validate_decomposition(&g, &td).is_valid());
        let (split, info) = split_anchor(&g, choose_anchor(&g).unwrap()).unwrap();
        let lifted = lift_to_split(&td, &info);
        assert!(validate_decomposition(&split, &lifted).is_valid());
        let ntd = anchor_bags(&make_nice(&lifted, default_root(&lifted, &info)).unwrap(), &info);
        ntd.check().unwrap();
        let (s1, s2) = info.split_pair;
        assert!(ntd.nodes().iter().all(|x| x.bag.contains(&s1) && x.bag.contains(&s2)));
        assert!(validate_decomposition(&split, &ntd.to_tree_decomposition()).is_valid());
    }
}

#[test]
fn make_nice_preserves_width() {
    let mut r = rng(2);
    for _ in 0..100 {
        let n = r.gen_range(4..=25);
        let (g, td) = random_partial_ktree(n, 3, 0.6, &mut r);
        let root = r.gen_range(0..td.node_count());
        let ntd = make_nice(&td, root).unwrap();
        ntd.check().unwrap();
        assert_eq!(ntd.width(), td.width());
        assert!(validate_decomposition(&g, &ntd.to_tree_decomposition()).is_valid());
    }
}

#[test]
fn balanced_path_decomposition_is_shallow() {
    for n in [2usize, 3, 7, 15, 31, 63, 100] {
        let td = balanced_path_decomposition(n);
        assert!(validate_decomposition(&path(n), &td).is_valid());
        assert!(td.width() <= 2);
        let log = (usize::BITS - n.leading_zeros()) as usize;
        assert!(td.depth(0) <= log + 2, "n={n} depth {}", td.depth(0));
    }
}

#[test]
fn invalid_decomposition_is_rejected() {
    let g = cycle(4);
    let td = TreeDecomposition::new(vec![vec![0, 1], vec![2, 3]], vec![(0, 1)]);
    assert!(!validate_decomposition(&g, &td).is_valid());
    let err = tdham::count_cycles(&g, Some(&td), None, Engine::Zeta, EngineOptions::default()).unwrap_err();
    assert!(matches!(err, Error::InvalidDecomposition(_)));
}

#[test]
fn decomposition_text_round_trip() {
    let (_, td) = random_partial_ktree(12, 2, 0.7, &mut rng(3));
    let text = write_decomposition(&td);
    assert_eq!(parse_decomposition(&text).unwrap(), td);
}

#[test]
fn edge_list_parsing() {
    let g = parse_edge_list("# triangle\np 3\n0 1 1\n1 2 2\n0 2 3\n").unwrap();
    assert_eq!(g.total_weight(), 6);
    assert!(parse_edge_list("p 3\n0 0\n").is_err());
    assert!(parse_edge_list("p 2\n0 5\n").is_err());
}

fn weighted(n: usize, edges: &[(u32, u32, u64)]) -> Graph {
    Graph::from_weighted_edges(n, edges)
}

#[test]
fn tsp_weighted_triangle() {
    let report = tsp(&weighted(3, &[(0, 1, 1), (1, 2, 2), (0, 2, 3)]), None, None, Engine::Zeta, EngineOptions::default())
        .unwrap();
    assert_eq!(report.solution.min_cost, Some(6));
    assert_eq!(report.solution.cycles_at_min, BigUint::from(1u32));
    let nonzero: Vec<usize> = (0..report.solution.histogram.len())
        .filter(|&c| report.solution.histogram[c] > BigUint::from(0u32))
        .collect();
    assert_eq!(nonzero, vec![6]);
}

#[test]
fn tsp_cycle_and_path() {
    let c5 = tsp(&cycle(5), None, None, Engine::Reference, EngineOptions::default()).unwrap();
    assert_eq!(c5.solution.min_cost, Some(5));
    assert_eq!(c5.solution.cycles_at_min, BigUint::from(1u32));
    assert_eq!(c5.solution.total_cycles, BigUint::from(1u32));
    let p4 = tsp(&path(4), None, None, Engine::Zeta, EngineOptions::default()).unwrap();
    assert_eq!(p4.solution.min_cost, None);
    assert_eq!(p4.solution.total_cycles, BigUint::from(0u32));
}

#[test]
fn unit_weights_put_every_tour_at_degree_n() {
    let mut r = rng(4);
    for _ in 0..20 {
        let n = r.gen_range(3..=8);
        let g = random_connected(n, 0.6, &mut r);
        let report = tsp(&g, None, None, Engine::Zeta, EngineOptions::default()).unwrap();
        let count = tdham::count_cycles(&g, None, None, Engine::Zeta, EngineOptions::default()).unwrap().count;
        for (c, k) in report.solution.histogram.iter().enumerate() {
            let expected = if c == n { count.clone() } else { BigUint::from(0u32) };
            assert_eq!(*k, expected, "degree {c}");
        }
    }
}

mod common;

use std::collections::BTreeSet;

use common::*;
use proptest::prelude::*;
use rand_core::SeedableRng;
use rand_xoshiro::Xoshiro256StarStar;
use trisat::constructions::{construction1, construction_c4};
use trisat::graph::{
    degree_profile, from_edge_list, from_json, host_nonedges, iso_equivalent, nonedges,
    parse_graph, to_edge_list, to_json, v, GraphBuilder, GraphError,
};
use trisat::search::shuffle;
use trisat::{Edge, TripartiteGraph};

#[test]
fn host_edge_counts() {
    assert_eq!(TripartiteGraph::new_host(2, 2, 2).unwrap().edge_count(), 12);
    assert_eq!(TripartiteGraph::new_host(3, 2, 2).unwrap().edge_count(), 16);
    assert!(matches!(
        TripartiteGraph::new_host(2, 3, 2),
        Err(GraphError::Ordering(_))
    ));
    assert!(TripartiteGraph::new_host(2, 2, 0).is_err());
}

#[test]
fn degree_profile_examples() {
    let full = TripartiteGraph::new_host(2, 2, 2).unwrap();
    assert_eq!(degree_profile(&full).min_degree, [4, 4, 4]);
    let empty = TripartiteGraph::empty(sizes(2, 2, 2));
    assert_eq!(degree_profile(&empty).min_degree, [0, 0, 0]);
}

#[test]
fn degree_profile_matches_recount_on_c4_construction() {
    let g = construction_c4(3, 2, 2).unwrap();
    let prof = degree_profile(&g);
    for p in 1..=3 {
        let naive: Vec<usize> = (1..=g.sizes().part(p))
            .map(|a| naive_degree(&g, v(p, a)))
            .collect();
        assert_eq!(prof.min_degree[p - 1], *naive.iter().min().unwrap());
        for (a, &d) in naive.iter().enumerate() {
            assert_eq!(prof.degree(v(p, a + 1)), d);
        }
    }
}

#[test]
fn nonedges_examples() {
    let host = TripartiteGraph::new_host(3, 2, 2).unwrap();
    assert!(nonedges(&host, &host).unwrap().is_empty());
    let one = TripartiteGraph::new_host(1, 1, 1).unwrap();
    let empty = TripartiteGraph::empty(sizes(1, 1, 1));
    assert_eq!(nonedges(&empty, &one).unwrap().len(), 3);
    assert!(matches!(
        nonedges(&one, &empty),
        Err(GraphError::NotSubgraph(_))
    ));
    assert!(matches!(
        nonedges(&empty, &host),
        Err(GraphError::SizeMismatch(..))
    ));
}

#[test]
fn nonedges_of_construction_by_set_difference() {
    let g = construction1(2, 1, 7, 6, 6).unwrap();
    let host = TripartiteGraph::new_host(7, 6, 6).unwrap();
    let all: BTreeSet<_> = cross_pairs(g.sizes()).into_iter().collect();
    let present: BTreeSet<_> = g.edges().map(|e| e.endpoints()).collect();
    let expected: Vec<_> = all.difference(&present).copied().collect();
    let got: Vec<_> = nonedges(&g, &host)
        .unwrap()
        .iter()
        .map(|e| e.endpoints())
        .collect();
    let got_set: BTreeSet<_> = got.iter().copied().collect();
    assert_eq!(got_set.into_iter().collect::<Vec<_>>(), expected);
    assert_eq!(got.len(), host.edge_count() - g.edge_count());
    let mut sorted = nonedges(&g, &host).unwrap();
    sorted.sort();
    assert_eq!(sorted, nonedges(&g, &host).unwrap());
}

#[test]
fn builder_edits() {
    let s = sizes(2, 2, 1);
    let g = TripartiteGraph::empty(s)
        .with_edge(v(1, 1), v(3, 1))
        .unwrap();
    let h = g.with_edge(v(1, 2), v(2, 1)).unwrap();
    assert_eq!(h.without_edge(v(2, 1), v(1, 2)).unwrap(), g);
    assert_eq!(g.edge_count(), 1);
    assert!(matches!(
        g.with_edge(v(1, 1), v(1, 2)),
        Err(GraphError::SamePart(..))
    ));
    assert!(g.without_edge(v(1, 2), v(2, 2)).is_err());
    assert!(g.with_edge(v(3, 1), v(1, 1)).is_err());
    assert!(g.with_edge(v(1, 3), v(2, 1)).is_err());
    let mut b = GraphBuilder::new(s);
    b.add_edge(v(1, 1), v(2, 2)).unwrap();
    assert!(b.add_edge(v(2, 2), v(1, 1)).is_err());
}

#[test]
fn edge_list_format() {
    let empty = TripartiteGraph::empty(sizes(1, 1, 1));
    assert_eq!(to_edge_list(&empty), "tripartite 1 1 1\n");
    let full = TripartiteGraph::new_host(1, 1, 1).unwrap();
    assert_eq!(
        to_edge_list(&full),
        "tripartite 1 1 1\n1 1 2 1\n1 1 3 1\n2 1 3 1\n"
    );
    assert_eq!(
        to_json(&full).trim_end(),
        r#"{"parts":[1,1,1],"edges":[[1,1,2,1],[1,1,3,1],[2,1,3,1]]}"#
    );
}

#[test]
fn malformed_input_reports_position() {
    let err = from_edge_list("tripartite 2 2 2\n1 1 2 1\n1 1 1 2\n").unwrap_err();
    assert!(err.to_string().contains("line 3"), "{err}");
    let err = from_edge_list("tripartite 2 2\n").unwrap_err();
    assert!(err.to_string().contains("line 1"), "{err}");
    assert!(from_json(r#"{"parts":[1,1,1],"edges":[[1,1,2,2]]}"#).is_err());
    assert!(from_json(r#"{"parts":[1,1,1],"edges":[],"extra":1}"#).is_err());
    assert!(parse_graph("").is_err());
}

#[test]
fn c1_and_c2_with_single_hubs_are_not_isomorphic() {
    use trisat::constructions::{Construction, ConstructionParams};
    let c1 = construction1(1, 1, 5, 5, 5).unwrap();
    let c2 = ConstructionParams::new(Construction::C2(1), 1, 1, 1, [5, 5, 5])
        .build(true)
        .unwrap();
    assert_eq!(c1.edge_count(), c2.edge_count());
    // Degree sequences are invariant under every part and vertex permutation.
    let seq = |g: &TripartiteGraph| {
        let mut d: Vec<usize> = g.vertices().map(|x| naive_degree(g, x)).collect();
        d.sort();
        d
    };
    assert_ne!(seq(&c1), seq(&c2));
    assert!(!iso_equivalent(&c1, &c2));
}

#[test]
fn iso_detects_part_relabeling() {
    let g = construction_c4(3, 2, 2).unwrap();
    let swapped = relabel_parts(&g, [1, 3, 2]);
    assert!(iso_equivalent(&g, &swapped));
    let moved = relabel_parts(&g, [2, 3, 1]);
    assert_eq!(moved.sizes().as_array(), [2, 3, 2]);
    assert!(iso_equivalent(&g, &moved));
    let e = g.edges().next().unwrap().endpoints();
    assert!(!iso_equivalent(&g, &g.without_edge(e.0, e.1).unwrap()));
    assert!(!iso_equivalent(
        &g,
        &TripartiteGraph::new_host(3, 2, 2).unwrap()
    ));
}

fn random_perms(s: trisat::PartSizes, seed: u64) -> [Vec<usize>; 3] {
    let mut rng = Xoshiro256StarStar::seed_from_u64(seed);
    [1, 2, 3].map(|p| {
        let mut perm: Vec<usize> = (1..=s.part(p)).collect();
        shuffle(&mut perm, &mut rng);
        perm
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn serialization_round_trips(g in graph_strategy(5)) {
        prop_assert_eq!(&from_json(&to_json(&g)).unwrap(), &g);
        prop_assert_eq!(&from_edge_list(&to_edge_list(&g)).unwrap(), &g);
        prop_assert_eq!(&parse_graph(&to_json(&g)).unwrap(), &g);
        prop_assert_eq!(&parse_graph(&to_edge_list(&g)).unwrap(), &g);
    }

    #[test]
    fn part_degree_sums_match_pair_counts(g in graph_strategy(6)) {
        let prof = degree_profile(&g);
        for p in 1..=3usize {
            let sum: usize = (1..=g.sizes().part(p)).map(|a| prof.degree(v(p, a))).sum();
            let pairs: usize = (1..=3).filter(|&q| q != p).map(|q| g.pair_edge_count(p, q)).sum();
            prop_assert_eq!(sum, pairs);
        }
        let total: usize = [(1, 2), (1, 3), (2, 3)].iter().map(|&(p, q)| g.pair_edge_count(p, q)).sum();
        prop_assert_eq!(total, g.edge_count());
    }

    #[test]
    fn nonedges_partition_the_host(g in graph_strategy(5)) {
        let host = TripartiteGraph::complete(g.sizes());
        let missing = nonedges(&g, &host).unwrap();
        prop_assert_eq!(&missing, &host_nonedges(&g));
        let present: BTreeSet<Edge> = g.edges().collect();
        let missing_set: BTreeSet<Edge> = missing.iter().copied().collect();
        prop_assert!(present.is_disjoint(&missing_set));
        let union: BTreeSet<Edge> = present.union(&missing_set).copied().collect();
        let all: BTreeSet<Edge> = host.edges().collect();
        prop_assert_eq!(union, all);
        prop_assert!(missing.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn iso_reflexive_symmetric_and_label_invariant(
        g in graph_strategy(4),
        h in graph_strategy(4),
        seed in any::<u64>(),
    ) {
        prop_assert!(iso_equivalent(&g, &g));
        prop_assert_eq!(iso_equivalent(&g, &h), iso_equivalent(&h, &g));
        let shuffled = relabel_within(&g, &random_perms(g.sizes(), seed));
        prop_assert!(iso_equivalent(&g, &shuffled));
        prop_assert_eq!(iso_equivalent(&shuffled, &h), iso_equivalent(&g, &h));
    }
}

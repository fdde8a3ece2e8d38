mod common;

use common::*;
use trisat::constructions::*;
use trisat::graph::{iso_equivalent, v};
use trisat::verifier::{is_saturated, residual_structure_check};
use trisat::{contains, TripartiteGraph};

fn certified(g: &TripartiteGraph, l: usize, m: usize, p: usize) -> bool {
    is_saturated(g, g.sizes(), &pat(l, m, p))
        .unwrap()
        .is_saturated
}

#[test]
fn hub_construction_examples() {
    let g = construction1(1, 1, 4, 4, 4).unwrap();
    assert_eq!(g.edge_count(), 18);
    assert!(naive_saturated(&g, &pat(1, 1, 1)));
    let g = construction1(1, 1, 5, 5, 5).unwrap();
    assert!(certified(&g, 1, 1, 1));
    assert!(naive_saturated(&g, &pat(1, 1, 1)));
    let g = construction1(2, 1, 7, 6, 6).unwrap();
    assert_eq!(g.edge_count(), 47);
    assert!(certified(&g, 2, 1, 1));
}

#[test]
fn removed_hub_edges_are_the_top_triangle() {
    let g = construction1(1, 1, 4, 4, 4).unwrap();
    for (x, y) in [(v(1, 4), v(2, 4)), (v(1, 4), v(3, 4)), (v(2, 4), v(3, 4))] {
        assert!(!g.has_edge(x, y));
    }
    assert_eq!(naive_degree(&g, v(1, 4)), 6);
    assert_eq!(naive_degree(&g, v(1, 1)), 2);
}

#[test]
fn path_removal_examples() {
    let c2 = construction2(1, 2, 2, 6, 6, 6).unwrap();
    let c1 = construction1(2, 2, 6, 6, 6).unwrap();
    assert_eq!(c2.edge_count(), c1.edge_count());
    assert!(certified(&c2, 2, 2, 2));
    assert!(!iso_equivalent(&c1, &c2));
    for (x, y) in [(v(1, 6), v(2, 6)), (v(1, 5), v(3, 6)), (v(2, 6), v(3, 6))] {
        assert!(!c2.has_edge(x, y));
    }
}

#[test]
fn path_removal_variants_are_cyclic_relabelings() {
    for (l, n) in [(2, 4), (3, 5)] {
        let g = [1, 2, 3].map(|i| construction2(i, l, l, n, n, n).unwrap());
        // Shifting every part index by one maps variant i onto variant i+1.
        assert_eq!(relabel_parts(&g[0], [2, 3, 1]), g[1]);
        assert_eq!(relabel_parts(&g[1], [2, 3, 1]), g[2]);
        assert!(iso_equivalent(&g[0], &g[1]));
        assert!(iso_equivalent(&g[0], &g[2]));
    }
    let a = construction2(1, 3, 2, 5, 5, 5).unwrap();
    let b = construction2(2, 3, 2, 5, 5, 5).unwrap();
    assert!(iso_equivalent(&a, &b));
}

#[test]
fn path_removal_rejects_single_hubs() {
    assert!(matches!(
        construction2(1, 1, 1, 5, 5, 5),
        Err(ConstructionError::Invalid { .. })
    ));
    assert!(construction2(4, 2, 2, 6, 6, 6).is_err());
    let forced = ConstructionParams::new(Construction::C2(1), 1, 1, 1, [5, 5, 5])
        .build(true)
        .unwrap();
    assert!(contains(&forced, &pat(1, 1, 1)).is_some());
}

#[test]
fn bottom_hub_examples() {
    let g = construction3(2, 2, 1, 5, 5, 5).unwrap();
    assert_eq!(g.edge_count(), 27);
    assert!(certified(&g, 2, 2, 1));
    assert!(naive_saturated(&g, &pat(2, 2, 1)));
    assert_eq!(construction3(3, 2, 1, 6, 6, 6).unwrap().edge_count(), 48);
    assert!(construction3(2, 2, 2, 5, 5, 5).is_err());
    assert!(construction3(3, 2, 1, 4, 3, 2).is_err());
}

#[test]
fn tiered_examples() {
    assert!(iso_equivalent(
        &construction4(1, 1, 5).unwrap(),
        &construction1(1, 1, 5, 5, 5).unwrap()
    ));
    let g = construction4(3, 1, 12).unwrap();
    assert_eq!(g.edge_count(), 129);
    assert!(certified(&g, 3, 1, 1));
    for (x, y) in [(v(1, 1), v(2, 1)), (v(1, 1), v(3, 1)), (v(2, 1), v(3, 1))] {
        assert!(!g.has_edge(x, y));
    }
    assert!(construction4(3, 1, 5).is_err());
    assert!(
        ConstructionParams::new(Construction::C4, 3, 1, 1, [7, 6, 6])
            .build(false)
            .is_err()
    );
}

#[test]
fn regular_residual_examples() {
    assert_eq!(
        construction5(2, 2, 1, 5).unwrap(),
        construction3(2, 2, 1, 5, 5, 5).unwrap()
    );
    let g = construction5(4, 2, 1, 8).unwrap();
    assert_eq!(g.edge_count(), 84);
    assert!(certified(&g, 4, 2, 1));
}

#[test]
fn three_star_examples() {
    let g = construction_c4(2, 2, 2).unwrap();
    assert_eq!(g.edge_count(), 6);
    assert!(certified(&g, 2, 2, 0));
    assert!(naive_saturated(&g, &pat(2, 2, 0)));
    assert!(g.vertices().all(|x| naive_degree(&g, x) >= 1));
    let g = construction_c4(3, 2, 2).unwrap();
    assert_eq!(g.edge_count(), 7);
    assert!(naive_saturated(&g, &pat(2, 2, 0)));
    assert!(construction_c4(2, 2, 1).is_err());
}

/// Every tuple of the agreement grid that the generators accept.
fn grid() -> Vec<ConstructionParams> {
    let mut out = Vec::new();
    let mut at = |which: Construction, l: usize, m: usize, p: usize| {
        let n = smallest_n(which, l, m, p).unwrap();
        for n in [n, n + 3] {
            out.push(ConstructionParams::new(which, l, m, p, [n; 3]));
        }
    };
    for (l, m) in [(1, 1), (2, 1), (2, 2), (3, 2), (3, 3)] {
        at(Construction::C1, l, m, m);
        if m >= 2 {
            for i in 1..=3 {
                at(Construction::C2(i), l, m, m);
            }
        }
    }
    for (l, m, p) in [(2, 2, 1), (3, 2, 1), (3, 3, 2), (4, 2, 1)] {
        at(Construction::C3, l, m, p);
        at(Construction::C5, l, m, p);
    }
    for (l, m) in [(1, 1), (3, 1), (4, 2)] {
        at(Construction::C4, l, m, m);
    }
    out
}

#[test]
fn grid_edge_counts_match_formulas_and_graphs_are_saturated() {
    for params in grid() {
        let g = params.build(false).unwrap();
        let f = params.formula().unwrap();
        assert_eq!(g.edge_count() as i128, f.value, "{params:?}");
        let pattern = params.pattern().unwrap();
        let report = is_saturated(&g, g.sizes(), &pattern).unwrap();
        assert!(report.is_saturated, "{params:?}: {report:?}");
        if g.sizes().total() <= 12 {
            assert!(naive_saturated(&g, &pattern), "{params:?}");
        }
    }
}

#[test]
fn smallest_sizes() {
    let n = |w, l, m, p| smallest_n(w, l, m, p).unwrap();
    assert_eq!(n(Construction::C1, 1, 1, 1), 3);
    assert_eq!(n(Construction::C1, 3, 2, 2), 5);
    assert_eq!(n(Construction::C3, 4, 2, 1), 4);
    assert_eq!(n(Construction::C5, 4, 2, 1), 4);
    assert_eq!(n(Construction::C4, 3, 1, 1), 6);
    assert_eq!(n(Construction::C4, 4, 2, 2), 7);
    assert!(smallest_n(Construction::C2(1), 2, 1, 1).is_err());
}

#[test]
fn hub_residuals_are_triangle_free() {
    for params in grid() {
        if !matches!(
            params.which,
            Construction::C1 | Construction::C2(_) | Construction::C4
        ) {
            continue;
        }
        let g = params.build(false).unwrap();
        let d = residual_structure_check(&g, &params.excluded_ranges()).unwrap();
        assert!(d.triangle_free, "{params:?}: {:?}", d.triangle);
    }
}

#[test]
fn circulant_residual_degree_caps() {
    for params in grid() {
        let k = params.l - params.m;
        let g = params.build(false).unwrap();
        let d = residual_structure_check(&g, &params.excluded_ranges()).unwrap();
        match params.which {
            Construction::C3 => {
                for (i, j) in [(1, 2), (1, 3), (2, 3)] {
                    assert!(d.max_degree(i, j) <= k && d.max_degree(j, i) <= k);
                    // The higher-numbered part is the one with exactly k.
                    assert!(
                        d.degrees[j - 1].iter().all(|(_, deg)| deg[i - 1] == k),
                        "{params:?}"
                    );
                }
            }
            Construction::C5 | Construction::C4 => assert!(d.is_biregular(k), "{params:?}"),
            _ => {}
        }
    }
}

#[test]
fn tiered_residual_biregular() {
    let params = ConstructionParams::new(Construction::C4, 3, 1, 1, [12; 3]);
    let d =
        residual_structure_check(&params.build(false).unwrap(), &params.excluded_ranges()).unwrap();
    assert!(d.triangle_free);
    assert!(d.is_biregular(2));
}

#[test]
fn triangle_free_residual_layouts() {
    for k in 1..=4 {
        for r in 1..=14 {
            let Some(edges) = triangle_free_residual(r, k) else {
                assert!(r + 1 < 3 * k, "r={r} k={k}");
                continue;
            };
            let g = TripartiteGraph::from_edges(
                sizes(r, r, r),
                edges.iter().map(|&((i, a), (j, b))| (v(i, a), v(j, b))),
            )
            .unwrap();
            assert!(contains(&g, &pat(1, 1, 1)).is_none(), "r={r} k={k}");
            assert!(g.vertices().all(|x| (1..=3)
                .filter(|&q| q != x.part)
                .all(|q| g.neighbors_in(x, q).len() == k)));
        }
    }
}

#[test]
fn generators_are_deterministic() {
    for params in grid() {
        let a = params.build(false).unwrap();
        let b = params.build(false).unwrap();
        assert_eq!(a.edges().collect::<Vec<_>>(), b.edges().collect::<Vec<_>>());
    }
}

#[test]
fn construction_names_round_trip() {
    for w in [
        Construction::C1,
        Construction::C2(1),
        Construction::C2(3),
        Construction::C3,
        Construction::C4,
        Construction::C5,
        Construction::C4Cycle,
    ] {
        assert_eq!(w.to_string().parse::<Construction>().unwrap(), w);
    }
    assert_eq!("2".parse::<Construction>().unwrap(), Construction::C2(1));
    assert!("6".parse::<Construction>().is_err());
}

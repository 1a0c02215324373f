// Copyright 2026 The ghzsim Developers
// SPDX-License-Identifier: Apache-2.0

mod common;

use common::*;
use ghzsim::hv::{classify_pair, symmetric_transitive_closure, ArrangementKind, Block, HvSet, RelationGraph, Vertex};
use proptest::prelude::*;

fn random_graph() -> impl Strategy<Value = RelationGraph> {
    let sets = prop::collection::vec(any::<bool>(), 2..=4);
    sets.prop_flat_map(|partitioned| {
        let names: Vec<String> = (0..partitioned.len()).map(|i| format!("s{i}")).collect();
        let mut vertices = Vec::new();
        for (name, &p) in names.iter().zip(&partitioned) {
            if p {
                vertices.push(Vertex::new(name.clone(), Block::Plus));
                vertices.push(Vertex::new(name.clone(), Block::Minus));
            } else {
                vertices.push(Vertex::new(name.clone(), Block::Whole));
            }
        }
        let n = vertices.len();
        let sets: Vec<HvSet> = names
            .iter()
            .zip(&partitioned)
            .map(|(name, &p)| if p { HvSet::symbolic(name, 1) } else { HvSet::symbolic_whole(name, 1) })
            .collect();
        prop::collection::vec((0..n, 0..n), 0..10).prop_map(move |picks| {
            let mut g = RelationGraph::with_sets(sets.clone()).unwrap();
            for (i, j) in picks {
                if vertices[i].set != vertices[j].set {
                    g.add_edge(vertices[i].clone(), vertices[j].clone()).unwrap();
                }
            }
            g
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn closure_matches_reachability(g in random_graph()) {
        prop_assert_eq!(edge_set(&symmetric_transitive_closure(&g)), reachability_closure(&g));
    }

    #[test]
    fn closure_is_idempotent(g in random_graph()) {
        let once = symmetric_transitive_closure(&g);
        prop_assert_eq!(symmetric_transitive_closure(&once), once);
    }

    #[test]
    fn closure_only_adds_edges(g in random_graph()) {
        let closed = edge_set(&symmetric_transitive_closure(&g));
        prop_assert!(edge_set(&g).is_subset(&closed));
    }

    #[test]
    fn closure_never_relates_a_set_with_itself(g in random_graph()) {
        prop_assert!(symmetric_transitive_closure(&g).edges().all(|(a, b)| a.set != b.set));
    }

    #[test]
    fn graph_json_round_trip(g in random_graph()) {
        prop_assert_eq!(RelationGraph::from_json(&g.to_json().unwrap()).unwrap(), g);
    }
}

#[test]
fn every_four_set_configuration_matches_reachability() {
    for config in all_configs() {
        let g = build(&config, [1; 4]);
        let closed = symmetric_transitive_closure(&g);
        assert_eq!(edge_set(&closed), reachability_closure(&g), "{config:?}");
        assert_eq!(symmetric_transitive_closure(&closed), closed);
    }
}

#[test]
fn arranged_chains_stay_arranged() {
    for config in all_configs().filter(|c| !c.contains(&Link::Disarranged)) {
        for sizes in all_sizes() {
            let closed = symmetric_transitive_closure(&build(&config, sizes));
            for (k, &(a, b)) in PAIRS.iter().enumerate() {
                let kind = classify_pair(&closed, SETS[a], SETS[b]).unwrap();
                let connected = config[k] == Link::Arranged || kind != ArrangementKind::Unrelated;
                if connected {
                    assert_eq!(kind, ArrangementKind::Arranged, "{config:?} {a}-{b}");
                }
            }
        }
    }
}

#[test]
fn bridged_arranged_pairs_are_arranged() {
    for config in all_configs().filter(|c| !c.contains(&Link::Disarranged)) {
        for (a, b, c, d) in [(0, 1, 2, 3), (0, 2, 1, 3), (0, 3, 1, 2)] {
            let bridges = [(a, c), (a, d), (b, c), (b, d)];
            let has_pairs = config[pair_index(a, b)] == Link::Arranged && config[pair_index(c, d)] == Link::Arranged;
            if !has_pairs || !bridges.iter().any(|&(x, y)| config[pair_index(x, y)] == Link::Arranged) {
                continue;
            }
            let closed = symmetric_transitive_closure(&build(&config, [2; 4]));
            for (x, y) in bridges {
                assert_eq!(classify_pair(&closed, SETS[x], SETS[y]).unwrap(), ArrangementKind::Arranged);
            }
        }
    }
}

#[test]
fn common_third_set_transfers_the_relation() {
    for config in all_configs() {
        for third in 0..4 {
            let others: Vec<usize> = (0..4).filter(|&k| k != third).collect();
            for (i, &x) in others.iter().enumerate() {
                for &y in &others[i + 1..] {
                    let lx = config[pair_index(x, third)];
                    let ly = config[pair_index(y, third)];
                    if lx != ly || lx == Link::None {
                        continue;
                    }
                    let closed = symmetric_transitive_closure(&build(&config, [1; 4]));
                    let kind = classify_pair(&closed, SETS[x], SETS[y]).unwrap();
                    match lx {
                        Link::Disarranged => assert_eq!(kind, ArrangementKind::Disarranged),
                        Link::Arranged if !config.contains(&Link::Disarranged) => {
                            assert_eq!(kind, ArrangementKind::Arranged)
                        }
                        _ => {}
                    }
                }
            }
        }
    }
}

#[test]
fn disarranged_link_in_a_chain_disarranges_the_ends() {
    let mut config = [Link::None; 6];
    config[pair_index(0, 1)] = Link::Arranged;
    config[pair_index(1, 2)] = Link::Disarranged;
    config[pair_index(2, 3)] = Link::Arranged;
    let closed = symmetric_transitive_closure(&build(&config, [1; 4]));
    assert_eq!(classify_pair(&closed, "A", "D").unwrap(), ArrangementKind::Disarranged);
}

#[test]
fn whole_set_does_not_merge_blocks() {
    let mut g = RelationGraph::with_sets([
        HvSet::symbolic("n", 1),
        HvSet::symbolic("e", 1),
        HvSet::symbolic_whole("a", 1),
    ])
    .unwrap();
    g.arrange("n", "e").unwrap();
    g.relate("a", "e").unwrap();
    let closed = symmetric_transitive_closure(&g);
    assert_eq!(classify_pair(&closed, "n", "e").unwrap(), ArrangementKind::Arranged);
    assert_eq!(closed.edges_between("n", "a").len(), 2);
}

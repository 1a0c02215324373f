// Copyright 2026 The ghzsim Developers
// SPDX-License-Identifier: Apache-2.0

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use ghzsim::hv::{Block, HvSet, RelationGraph, Vertex};

/// Union-find over vertex indices.
pub struct Components {
    parent: Vec<usize>,
}

impl Components {
    pub fn new(n: usize) -> Self {
        Self { parent: (0..n).collect() }
    }

    pub fn find(&mut self, x: usize) -> usize {
        let p = self.parent[x];
        if p == x {
            return x;
        }
        let root = self.find(p);
        self.parent[x] = root;
        root
    }

    pub fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        self.parent[ra] = rb;
    }
}

/// Cross-set pairs implied by reachability: two blocks are related when a
/// path of blocks joins them, any pair involving an unpartitioned set when
/// they share a component at all.
pub fn reachability_closure(graph: &RelationGraph) -> BTreeSet<(Vertex, Vertex)> {
    let vertices = graph.vertices();
    let index: BTreeMap<&Vertex, usize> = vertices.iter().enumerate().map(|(i, v)| (v, i)).collect();
    let mut full = Components::new(vertices.len());
    let mut blocks_only = Components::new(vertices.len());
    for (a, b) in graph.edges() {
        let (i, j) = (index[a], index[b]);
        full.union(i, j);
        if a.block != Block::Whole && b.block != Block::Whole {
            blocks_only.union(i, j);
        }
    }
    let mut out = BTreeSet::new();
    for (i, u) in vertices.iter().enumerate() {
        for (j, w) in vertices.iter().enumerate().skip(i + 1) {
            if u.set == w.set {
                continue;
            }
            let related = if u.block != Block::Whole && w.block != Block::Whole {
                blocks_only.find(i) == blocks_only.find(j)
            } else {
                full.find(i) == full.find(j)
            };
            if related {
                out.insert(if u <= w { (u.clone(), w.clone()) } else { (w.clone(), u.clone()) });
            }
        }
    }
    out
}

pub fn edge_set(graph: &RelationGraph) -> BTreeSet<(Vertex, Vertex)> {
    graph.edges().cloned().collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Link {
    None,
    Arranged,
    Disarranged,
}

pub const LINKS: [Link; 3] = [Link::None, Link::Arranged, Link::Disarranged];
pub const SETS: [&str; 4] = ["A", "B", "C", "D"];
pub const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// One relation per set pair, indexed like [`PAIRS`].
pub type Config = [Link; 6];

pub fn all_configs() -> impl Iterator<Item = Config> {
    (0..729usize).map(|mut code| {
        std::array::from_fn(|_| {
            let link = LINKS[code % 3];
            code /= 3;
            link
        })
    })
}

/// Four partitioned sets with `sizes[k]` elements in each block of set `k`.
pub fn build(config: &Config, sizes: [usize; 4]) -> RelationGraph {
    let sets = SETS.iter().zip(sizes).map(|(name, n)| HvSet::symbolic(name, n));
    let mut g = RelationGraph::with_sets(sets).unwrap();
    for (&(a, b), link) in PAIRS.iter().zip(config) {
        match link {
            Link::None => {}
            Link::Arranged => g.arrange(SETS[a], SETS[b]).unwrap(),
            Link::Disarranged => g.relate(SETS[a], SETS[b]).unwrap(),
        }
    }
    g
}

pub fn pair_index(a: usize, b: usize) -> usize {
    let key = (a.min(b), a.max(b));
    PAIRS.iter().position(|&p| p == key).unwrap()
}

pub fn all_sizes() -> impl Iterator<Item = [usize; 4]> {
    (0..16usize).map(|bits| std::array::from_fn(|k| 1 + (bits >> k & 1)))
}

// Copyright 2026 The ghzsim Developers
// SPDX-License-Identifier: Apache-2.0

//! Relation graphs between partition blocks of hidden-variable sets.
//!
//! Vertices are `(set, block)` pairs. A partitioned set contributes a `+`
//! and a `-` vertex, an unpartitioned set a single whole-set vertex `*`.
//! Edges only join vertices of different sets. The relation is symmetric and
//! transitive but never reflexive.
//!
//! Closure rule: from `u ~ v` and `v ~ w` infer `u ~ w`, except when `v` is a
//! whole-set vertex and `u`, `w` are both partition blocks. A whole-set
//! vertex is related to a set as a whole and carries no block information,
//! so it cannot pair one block with another. Same-set pairs (`n+ ~ n-`) take
//! part in chaining but are dropped from the closed graph.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Block {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
    #[serde(rename = "*")]
    Whole,
}

impl Block {
    pub fn symbol(self) -> &'static str {
        match self {
            Block::Plus => "+",
            Block::Minus => "-",
            Block::Whole => "*",
        }
    }
}

impl fmt::Display for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// Two-block split of a set's elements.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    pub plus: Vec<String>,
    pub minus: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HvSet {
    name: String,
    elements: Vec<String>,
    partition: Option<Partition>,
}

impl HvSet {
    pub fn unpartitioned(name: impl Into<String>, elements: Vec<String>) -> Result<Self> {
        let set = Self { name: name.into(), elements, partition: None };
        set.validate()?;
        Ok(set)
    }

    /// Partitioned set whose elements are `plus` followed by `minus`.
    pub fn partitioned(name: impl Into<String>, plus: Vec<String>, minus: Vec<String>) -> Result<Self> {
        let elements = plus.iter().chain(&minus).cloned().collect();
        let set = Self { name: name.into(), elements, partition: Some(Partition { plus, minus }) };
        set.validate()?;
        Ok(set)
    }

    /// Partitioned set with `per_block` generated labels in each block.
    pub fn symbolic(name: &str, per_block: usize) -> Self {
        let gen = |sign: &str| (0..per_block).map(|i| format!("{name}{sign}{i}")).collect();
        Self::partitioned(name, gen("+"), gen("-")).expect("generated labels are distinct")
    }

    pub fn symbolic_whole(name: &str, size: usize) -> Self {
        let elements = (0..size).map(|i| format!("{name}{i}")).collect();
        Self::unpartitioned(name, elements).expect("generated labels are distinct")
    }

    fn validate(&self) -> Result<()> {
        if self.name.is_empty() {
            return Err(Error::invalid("HV set needs a name"));
        }
        let distinct: BTreeSet<_> = self.elements.iter().collect();
        if distinct.len() != self.elements.len() {
            return Err(Error::invalid(format!("set {} has repeated elements", self.name)));
        }
        if let Some(p) = &self.partition {
            let plus: BTreeSet<_> = p.plus.iter().collect();
            let minus: BTreeSet<_> = p.minus.iter().collect();
            if plus.len() != p.plus.len() || minus.len() != p.minus.len() || !plus.is_disjoint(&minus) {
                return Err(Error::invalid(format!("partition of {} is not disjoint", self.name)));
            }
            let union: BTreeSet<_> = plus.union(&minus).copied().collect();
            if union != distinct {
                return Err(Error::invalid(format!("partition of {} is not exhaustive", self.name)));
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn partition(&self) -> Option<&Partition> {
        self.partition.as_ref()
    }

    pub fn is_partitioned(&self) -> bool {
        self.partition.is_some()
    }

    pub fn blocks(&self) -> &'static [Block] {
        if self.is_partitioned() {
            &[Block::Plus, Block::Minus]
        } else {
            &[Block::Whole]
        }
    }

    /// Elements belonging to `block`.
    pub fn block_elements(&self, block: Block) -> &[String] {
        match (&self.partition, block) {
            (Some(p), Block::Plus) => &p.plus,
            (Some(p), Block::Minus) => &p.minus,
            (None, Block::Whole) => &self.elements,
            _ => &[],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Vertex {
    pub set: String,
    pub block: Block,
}

impl Vertex {
    pub fn new(set: impl Into<String>, block: Block) -> Self {
        Self { set: set.into(), block }
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.set, self.block)
    }
}

pub type Edge = (Vertex, Vertex);

fn normalize(a: Vertex, b: Vertex) -> Edge {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RelationGraph {
    sets: BTreeMap<String, HvSet>,
    edges: BTreeSet<Edge>,
}

impl RelationGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_sets(sets: impl IntoIterator<Item = HvSet>) -> Result<Self> {
        let mut g = Self::new();
        for s in sets {
            g.add_set(s)?;
        }
        Ok(g)
    }

    pub fn add_set(&mut self, set: HvSet) -> Result<()> {
        if self.sets.contains_key(set.name()) {
            return Err(Error::invalid(format!("duplicate set {}", set.name())));
        }
        self.sets.insert(set.name().to_owned(), set);
        Ok(())
    }

    pub fn set(&self, name: &str) -> Result<&HvSet> {
        self.sets.get(name).ok_or_else(|| Error::invalid(format!("unknown set {name:?}")))
    }

    pub fn sets(&self) -> impl Iterator<Item = &HvSet> {
        self.sets.values()
    }

    pub fn vertices(&self) -> Vec<Vertex> {
        self.sets
            .values()
            .flat_map(|s| s.blocks().iter().map(|&b| Vertex::new(s.name(), b)))
            .collect()
    }

    fn check_vertex(&self, v: &Vertex) -> Result<()> {
        if self.set(&v.set)?.blocks().contains(&v.block) {
            Ok(())
        } else {
            Err(Error::invalid(format!("set {} has no block {}", v.set, v.block)))
        }
    }

    /// Adds one block-to-block edge; returns whether it was new.
    pub fn add_edge(&mut self, a: Vertex, b: Vertex) -> Result<bool> {
        self.check_vertex(&a)?;
        self.check_vertex(&b)?;
        if a.set == b.set {
            return Err(Error::invalid(format!("edge {a} ~ {b} stays inside one set")));
        }
        Ok(self.edges.insert(normalize(a, b)))
    }

    /// `{a} R {b}` with no block structure: every block of `a` with every
    /// block of `b` (the Cartesian product).
    pub fn relate(&mut self, a: &str, b: &str) -> Result<()> {
        let blocks_a = self.set(a)?.blocks();
        let blocks_b = self.set(b)?.blocks();
        for &x in blocks_a {
            for &y in blocks_b {
                self.add_edge(Vertex::new(a, x), Vertex::new(b, y))?;
            }
        }
        Ok(())
    }

    /// Matched-block relation `{a+} R {b+}`, `{a-} R {b-}`.
    pub fn arrange(&mut self, a: &str, b: &str) -> Result<()> {
        for name in [a, b] {
            if !self.set(name)?.is_partitioned() {
                return Err(Error::invalid(format!("set {name} is not partitioned")));
            }
        }
        for block in [Block::Plus, Block::Minus] {
            self.add_edge(Vertex::new(a, block), Vertex::new(b, block))?;
        }
        Ok(())
    }

    pub fn has_edge(&self, a: &Vertex, b: &Vertex) -> bool {
        self.edges.contains(&normalize(a.clone(), b.clone()))
    }

    pub fn edges(&self) -> impl Iterator<Item = &Edge> {
        self.edges.iter()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Block pairs `(block of a, block of b)` joined by an edge.
    pub fn edges_between(&self, a: &str, b: &str) -> Vec<(Block, Block)> {
        self.edges
            .iter()
            .filter_map(|(x, y)| {
                if x.set == a && y.set == b {
                    Some((x.block, y.block))
                } else if x.set == b && y.set == a {
                    Some((y.block, x.block))
                } else {
                    None
                }
            })
            .collect()
    }

    /// Element-level pairs implied by the block edges between `a` and `b`.
    pub fn element_pairs(&self, a: &str, b: &str) -> Result<Vec<(String, String)>> {
        let (sa, sb) = (self.set(a)?, self.set(b)?);
        let mut pairs = Vec::new();
        for (x, y) in self.edges_between(a, b) {
            for ea in sa.block_elements(x) {
                for eb in sb.block_elements(y) {
                    pairs.push((ea.clone(), eb.clone()));
                }
            }
        }
        Ok(pairs)
    }

    pub fn to_document(&self) -> GraphDocument {
        GraphDocument {
            sets: self
                .sets
                .values()
                .map(|s| SetDocument {
                    name: s.name().to_owned(),
                    blocks: s.blocks().to_vec(),
                    partition: s.partition().cloned(),
                    elements: if s.is_partitioned() { None } else { Some(s.elements().to_vec()) },
                })
                .collect(),
            edges: self
                .edges
                .iter()
                .map(|(a, b)| EdgeDocument(a.set.clone(), a.block, b.set.clone(), b.block))
                .collect(),
        }
    }

    pub fn from_document(doc: GraphDocument) -> Result<Self> {
        let mut g = Self::new();
        for s in doc.sets {
            let set = match (s.blocks.as_slice(), s.partition, s.elements) {
                ([Block::Plus, Block::Minus] | [Block::Minus, Block::Plus], Some(p), _) => {
                    HvSet::partitioned(s.name, p.plus, p.minus)?
                }
                ([Block::Plus, Block::Minus] | [Block::Minus, Block::Plus], None, _) => {
                    HvSet::symbolic(&s.name, 1)
                }
                ([Block::Whole] | [], None, elements) => {
                    let elements = elements.unwrap_or_else(|| vec![format!("{}0", s.name)]);
                    HvSet::unpartitioned(s.name, elements)?
                }
                (blocks, _, _) => {
                    return Err(Error::DataFormat(format!(
                        "set {}: blocks {blocks:?} must be [\"+\",\"-\"] or [\"*\"]",
                        s.name
                    )))
                }
            };
            g.add_set(set)?;
        }
        for EdgeDocument(sa, ba, sb, bb) in doc.edges {
            g.add_edge(Vertex::new(sa, ba), Vertex::new(sb, bb))?;
        }
        Ok(g)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.to_document())?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: GraphDocument =
            serde_json::from_str(text).map_err(|e| Error::DataFormat(e.to_string()))?;
        Self::from_document(doc)
    }
}

/// Serialized graph: `{sets: [{name, blocks}], edges: [[setA, blockA, setB, blockB]]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphDocument {
    pub sets: Vec<SetDocument>,
    pub edges: Vec<EdgeDocument>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SetDocument {
    pub name: String,
    pub blocks: Vec<Block>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub partition: Option<Partition>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elements: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeDocument(pub String, pub Block, pub String, pub Block);

/// Closed graph plus the cross-set edges it gained, in the order inferred.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Closure {
    pub graph: RelationGraph,
    pub trace: Vec<Edge>,
}

pub fn symmetric_transitive_closure(graph: &RelationGraph) -> RelationGraph {
    closure_with_trace(graph).graph
}

pub fn closure_with_trace(graph: &RelationGraph) -> Closure {
    let vertices = graph.vertices();
    let n = vertices.len();
    let index: BTreeMap<&Vertex, usize> = vertices.iter().enumerate().map(|(i, v)| (v, i)).collect();
    let whole: Vec<bool> = vertices.iter().map(|v| v.block == Block::Whole).collect();
    let mut adj = vec![vec![false; n]; n];
    for (a, b) in graph.edges() {
        let (i, j) = (index[a], index[b]);
        adj[i][j] = true;
        adj[j][i] = true;
    }

    let mut closed = graph.clone();
    let mut trace = Vec::new();
    let mut changed = true;
    while changed {
        changed = false;
        for v in 0..n {
            for u in 0..n {
                if u == v || !adj[u][v] {
                    continue;
                }
                for w in (u + 1)..n {
                    if w == v || !adj[v][w] || adj[u][w] {
                        continue;
                    }
                    if whole[v] && !whole[u] && !whole[w] {
                        continue;
                    }
                    adj[u][w] = true;
                    adj[w][u] = true;
                    changed = true;
                    if vertices[u].set != vertices[w].set {
                        let edge = normalize(vertices[u].clone(), vertices[w].clone());
                        closed.edges.insert(edge.clone());
                        trace.push(edge);
                    }
                }
            }
        }
    }
    Closure { graph: closed, trace }
}

/// How two partitioned sets are related in a graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ArrangementKind {
    /// Exactly the matched pairs `(+,+)` and `(-,-)`.
    Arranged,
    /// All four block pairs.
    Disarranged,
    /// No edges at all.
    Unrelated,
    /// Any other pattern, listed as `(block of a, block of b)` pairs.
    Mixed(Vec<(Block, Block)>),
}

impl fmt::Display for ArrangementKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ArrangementKind::Arranged => f.write_str("Arranged"),
            ArrangementKind::Disarranged => f.write_str("Disarranged"),
            ArrangementKind::Unrelated => f.write_str("Unrelated"),
            ArrangementKind::Mixed(pairs) => {
                let parts: Vec<_> = pairs.iter().map(|(a, b)| format!("({a},{b})")).collect();
                write!(f, "Mixed[{}]", parts.join(" "))
            }
        }
    }
}

/// Classifies the edges present between `a` and `b`; call on a closed
/// graph to classify the implied relation.
pub fn classify_pair(graph: &RelationGraph, a: &str, b: &str) -> Result<ArrangementKind> {
    for name in [a, b] {
        if !graph.set(name)?.is_partitioned() {
            return Err(Error::invalid(format!("set {name} is not partitioned")));
        }
    }
    let mut pairs = graph.edges_between(a, b);
    pairs.sort();
    use Block::{Minus, Plus};
    Ok(match pairs.as_slice() {
        [] => ArrangementKind::Unrelated,
        [(Plus, Plus), (Minus, Minus)] | [(Minus, Minus), (Plus, Plus)] => ArrangementKind::Arranged,
        [_, _, _, _] => ArrangementKind::Disarranged,
        _ => ArrangementKind::Mixed(pairs),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn three_sets() -> RelationGraph {
        RelationGraph::with_sets(["A", "B", "C"].map(|s| HvSet::symbolic(s, 1))).unwrap()
    }

    #[test]
    fn transitivity_adds_the_missing_edge() {
        let mut g = three_sets();
        g.add_edge(Vertex::new("A", Block::Plus), Vertex::new("B", Block::Plus)).unwrap();
        g.add_edge(Vertex::new("B", Block::Plus), Vertex::new("C", Block::Plus)).unwrap();
        let closure = closure_with_trace(&g);
        assert_eq!(
            closure.trace,
            vec![(Vertex::new("A", Block::Plus), Vertex::new("C", Block::Plus))]
        );
        assert_eq!(closure.graph.edge_count(), 3);
    }

    #[test]
    fn empty_graph_stays_empty() {
        let g = three_sets();
        assert_eq!(symmetric_transitive_closure(&g), g);
        assert_eq!(symmetric_transitive_closure(&RelationGraph::new()), RelationGraph::new());
    }

    #[test]
    fn classification_examples() {
        let mut g = RelationGraph::with_sets([HvSet::symbolic("n", 2), HvSet::symbolic("e", 2)]).unwrap();
        assert_eq!(classify_pair(&g, "n", "e").unwrap(), ArrangementKind::Unrelated);
        g.arrange("n", "e").unwrap();
        assert_eq!(classify_pair(&g, "n", "e").unwrap(), ArrangementKind::Arranged);
        g.relate("n", "e").unwrap();
        assert_eq!(classify_pair(&g, "n", "e").unwrap(), ArrangementKind::Disarranged);

        let mut g = RelationGraph::with_sets([HvSet::symbolic("n", 1), HvSet::symbolic("e", 1)]).unwrap();
        g.add_edge(Vertex::new("n", Block::Plus), Vertex::new("e", Block::Minus)).unwrap();
        assert_eq!(
            classify_pair(&g, "n", "e").unwrap(),
            ArrangementKind::Mixed(vec![(Block::Plus, Block::Minus)])
        );
    }

    #[test]
    fn classification_needs_partitions() {
        let g = RelationGraph::with_sets([HvSet::symbolic("n", 1), HvSet::symbolic_whole("a", 1)]).unwrap();
        assert!(matches!(classify_pair(&g, "n", "a"), Err(Error::InvalidArgument(_))));
        assert!(matches!(classify_pair(&g, "n", "zz"), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn edges_must_cross_sets_and_exist() {
        let mut g = three_sets();
        assert!(g.add_edge(Vertex::new("A", Block::Plus), Vertex::new("A", Block::Minus)).is_err());
        assert!(g.add_edge(Vertex::new("A", Block::Whole), Vertex::new("B", Block::Plus)).is_err());
        assert!(g.add_edge(Vertex::new("Q", Block::Plus), Vertex::new("B", Block::Plus)).is_err());
    }

    #[test]
    fn whole_vertex_does_not_pair_blocks() {
        let mut g = RelationGraph::with_sets([
            HvSet::symbolic("n", 1),
            HvSet::symbolic("e", 1),
            HvSet::symbolic_whole("w", 1),
        ])
        .unwrap();
        g.relate("n", "w").unwrap();
        g.relate("e", "w").unwrap();
        let closed = symmetric_transitive_closure(&g);
        assert_eq!(classify_pair(&closed, "n", "e").unwrap(), ArrangementKind::Unrelated);
    }

    #[test]
    fn partition_validation() {
        assert!(HvSet::partitioned("x", vec!["a".into()], vec!["a".into()]).is_err());
        assert!(HvSet::unpartitioned("x", vec!["a".into(), "a".into()]).is_err());
        assert!(HvSet::unpartitioned("", vec![]).is_err());
        let s = HvSet::partitioned("x", vec!["a".into()], vec!["b".into(), "c".into()]).unwrap();
        assert_eq!(s.elements().len(), 3);
        assert_eq!(s.block_elements(Block::Minus).len(), 2);
    }

    #[test]
    fn json_round_trip() {
        let mut g = RelationGraph::with_sets([
            HvSet::symbolic("n", 2),
            HvSet::symbolic("e", 1),
            HvSet::symbolic_whole("a", 3),
        ])
        .unwrap();
        g.arrange("n", "e").unwrap();
        g.relate("a", "n").unwrap();
        let text = g.to_json().unwrap();
        assert_eq!(RelationGraph::from_json(&text).unwrap(), g);

        let minimal = r#"{"sets":[{"name":"x","blocks":["+","-"]},{"name":"y","blocks":["*"]}],
                          "edges":[["x","+","y","*"]]}"#;
        let g = RelationGraph::from_json(minimal).unwrap();
        assert_eq!(g.edge_count(), 1);
        let bad = r#"{"sets":[{"name":"x","blocks":["+"]}],"edges":[]}"#;
        assert!(matches!(RelationGraph::from_json(bad), Err(Error::DataFormat(_))));
    }
}

// Copyright 2026 The ghzsim Developers
// SPDX-License-Identifier: Apache-2.0

//! Named relations between the register, the assistants and environment
//! systems, and the derivation of the register–assistant relation from them.
//!
//! Sets (all partitioned unless noted):
//!
//! | name       | meaning                                              |
//! |------------|------------------------------------------------------|
//! | `n`        | entangled register                                   |
//! | `e`        | second assistant (`q4`), selects the setting type    |
//! | `a`        | first assistant (`q0`), unpartitioned                |
//! | `lambda`   | a common environment system (mediator)               |
//! | `lambda_n` | environment system tied to `n`                       |
//! | `lambda_e` | environment system tied to `e`                       |
//! | `lambda_a` | environment system tied to `a`, unpartitioned        |
//!
//! A bundle without a block suffix (`RM1`, `e1`, ...) relates two sets with
//! no block structure, i.e. the Cartesian product of their blocks.

use serde::{Deserialize, Serialize};

use super::graph::{classify_pair, closure_with_trace, ArrangementKind, Block, Edge, HvSet, RelationGraph, Vertex};
use crate::error::{Error, Result};

pub const REGISTER: &str = "n";
pub const SELECTOR: &str = "e";
pub const FIRST_ASSISTANT: &str = "a";

const ELEMENTS_PER_BLOCK: usize = 2;

fn base_graph() -> RelationGraph {
    let mut sets: Vec<HvSet> = ["n", "e", "lambda", "lambda_n", "lambda_e"]
        .iter()
        .map(|s| HvSet::symbolic(s, ELEMENTS_PER_BLOCK))
        .collect();
    sets.push(HvSet::symbolic_whole("a", ELEMENTS_PER_BLOCK));
    sets.push(HvSet::symbolic_whole("lambda_a", ELEMENTS_PER_BLOCK));
    RelationGraph::with_sets(sets).expect("distinct set names")
}

enum Rel {
    Blocks(&'static str, Block, &'static str, Block),
    Sets(&'static str, &'static str),
}

use Block::{Minus, Plus, Whole};

/// Bundle names in canonical spelling.
pub const BUNDLES: &[&str] = &[
    "E1+", "E1-", "E2+", "E2-", "E3", "RM1", "RM2", "RM1+", "RM1-", "RM2+", "RM2-", "e1", "e2",
    "e3", "e'1", "e'2", "e'3", "e'4", "e'5", "M1+", "M1-", "M2+", "M2-", "M3",
];

fn bundle(name: &str) -> Option<Rel> {
    Some(match name {
        "E1+" => Rel::Blocks("lambda_n", Plus, "n", Plus),
        "E1-" => Rel::Blocks("lambda_n", Minus, "n", Minus),
        "E2+" => Rel::Blocks("lambda_e", Plus, "e", Plus),
        "E2-" => Rel::Blocks("lambda_e", Minus, "e", Minus),
        "E3" => Rel::Sets("lambda_a", "a"),
        "RM1" => Rel::Sets("lambda_n", "lambda_e"),
        "RM2" => Rel::Sets("lambda_n", "lambda_a"),
        "RM1+" => Rel::Blocks("lambda_n", Plus, "lambda_e", Plus),
        "RM1-" => Rel::Blocks("lambda_n", Minus, "lambda_e", Minus),
        "RM2+" => Rel::Blocks("lambda_e", Plus, "lambda_a", Whole),
        "RM2-" => Rel::Blocks("lambda_e", Minus, "lambda_a", Whole),
        "e1" => Rel::Sets("lambda", "n"),
        "e2" => Rel::Sets("lambda", "e"),
        "e3" => Rel::Sets("lambda", "a"),
        "e'1" => Rel::Sets("lambda_n", "n"),
        "e'2" => Rel::Sets("lambda_e", "e"),
        "e'3" => Rel::Sets("lambda_a", "a"),
        "e'4" => Rel::Sets("lambda_n", "lambda_e"),
        "e'5" => Rel::Sets("lambda_n", "lambda_a"),
        "M1+" => Rel::Blocks("lambda", Plus, "n", Plus),
        "M1-" => Rel::Blocks("lambda", Minus, "n", Minus),
        "M2+" => Rel::Blocks("lambda", Plus, "e", Plus),
        "M2-" => Rel::Blocks("lambda", Minus, "e", Minus),
        "M3" => Rel::Sets("lambda", "a"),
        _ => return None,
    })
}

/// Named bundle collections.
pub const PRESETS: &[(&str, &[&str])] = &[
    // Environment blocks arranged with n and e, environments disarranged with each other.
    ("fig12", &["E1+", "E1-", "E2+", "E2-", "E3", "RM1", "RM2"]),
    // Same, but the environments are arranged with each other.
    ("fig13", &["E1+", "E1-", "E2+", "E2-", "E3", "RM1+", "RM1-", "RM2+", "RM2-"]),
    // One mediator arranged with both n and e.
    ("fig14", &["M1+", "M1-", "M2+", "M2-", "M3"]),
    // One environment related to n, e and a as a Cartesian product.
    ("env-common", &["e1", "e2", "e3"]),
    // Separate environments, each disarranged with its qubit and with each other.
    ("env-separate", &["e'1", "e'2", "e'3", "e'4", "e'5"]),
];

pub fn preset(name: &str) -> Result<&'static [&'static str]> {
    PRESETS
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, b)| *b)
        .ok_or_else(|| {
            let known: Vec<_> = PRESETS.iter().map(|(n, _)| *n).collect();
            Error::invalid(format!("unknown preset {name:?}; known: {}", known.join(", ")))
        })
}

/// Accepts `E1(+)`, `E1^(-)`, `e′1`, unicode minus and similar spellings.
pub fn canonical_bundle_name(raw: &str) -> Result<&'static str> {
    let cleaned: String = raw
        .trim()
        .chars()
        .filter(|c| !matches!(c, '^' | '(' | ')' | ' '))
        .map(|c| match c {
            '′' | '’' => '\'',
            '−' | '–' => '-',
            c => c,
        })
        .collect();
    BUNDLES
        .iter()
        .find(|b| **b == cleaned)
        .copied()
        .ok_or_else(|| Error::invalid(format!("unknown relation bundle {raw:?}")))
}

/// Result of closing a bundle graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Derivation {
    pub bundles: Vec<&'static str>,
    /// Relation between the register and the setting selector after closure.
    pub verdict: ArrangementKind,
    pub trace: Vec<Edge>,
    pub closed: RelationGraph,
}

impl Derivation {
    /// Whether the closed graph relates the two sets at all.
    pub fn related(&self, a: &str, b: &str) -> bool {
        !self.closed.edges_between(a, b).is_empty()
    }

    pub fn summary(&self) -> DerivationSummary {
        DerivationSummary {
            bundles: self.bundles.iter().map(|s| s.to_string()).collect(),
            verdict: self.verdict.clone(),
            register_first_assistant_related: self.related(REGISTER, FIRST_ASSISTANT),
            trace: self
                .trace
                .iter()
                .map(|(a, b)| [a.set.clone(), a.block.symbol().into(), b.set.clone(), b.block.symbol().into()])
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivationSummary {
    pub bundles: Vec<String>,
    pub verdict: ArrangementKind,
    pub register_first_assistant_related: bool,
    pub trace: Vec<[String; 4]>,
}

/// Builds the graph of the named bundles, closes it, and classifies the
/// register/selector pair `(n, e)`.
pub fn derive_environment_relation<S: AsRef<str>>(bundles: &[S]) -> Result<Derivation> {
    let mut graph = base_graph();
    let mut names = Vec::with_capacity(bundles.len());
    for raw in bundles {
        let name = canonical_bundle_name(raw.as_ref())?;
        match bundle(name).expect("canonical names resolve") {
            Rel::Blocks(a, ba, b, bb) => {
                graph.add_edge(Vertex::new(a, ba), Vertex::new(b, bb))?;
            }
            Rel::Sets(a, b) => graph.relate(a, b)?,
        }
        names.push(name);
    }
    let closure = closure_with_trace(&graph);
    let verdict = classify_pair(&closure.graph, REGISTER, SELECTOR)?;
    Ok(Derivation { bundles: names, verdict, trace: closure.trace, closed: closure.graph })
}

pub fn derive_preset(name: &str) -> Result<Derivation> {
    derive_environment_relation(preset(name)?)
}

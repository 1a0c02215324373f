// Copyright 2026 The ghzsim Developers
// SPDX-License-Identifier: Apache-2.0

//! Hidden-variable relation calculus.
//!
//! Sets of hidden variables (HVs) are split into `(+)`/`(-)` blocks and
//! related block-to-block. [`graph`] holds the relation graph and its
//! symmetric/transitive closure, [`bundles`] the named environment relations
//! and their derivations, [`strategy`] deterministic response functions and
//! the classical Mermin bound, and [`sampler`] the arranged/disarranged
//! mixture that turns an arranged fraction into counts tables.

pub mod bundles;
pub mod graph;
pub mod sampler;
pub mod strategy;

pub use bundles::{derive_environment_relation, Derivation, PRESETS};
pub use graph::{
    classify_pair, closure_with_trace, symmetric_transitive_closure, ArrangementKind, Block,
    Closure, HvSet, RelationGraph, Vertex,
};
pub use sampler::{estimate_arranged_fraction, sample_hv_shots};
pub use strategy::{classical_bound_oracle, HvResponseModel, Setting, SettingCombination, Strategy};

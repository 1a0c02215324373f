// Copyright 2026 The ghzsim Developers
// SPDX-License-Identifier: Apache-2.0

//! Simulation and analysis of quantum-assisted GHZ experiments.
//!
//! Three five-qubit circuits prepare the entangled register `q1 q2 q3` in
//! `(|000⟩ + i|111⟩)/√2` while two assistant qubits (`q0`, `q4`) select,
//! impose and report which phase-gate setting combination was applied. The
//! crate covers the whole pipeline:
//!
//! * [`qsim`]: dense statevector kernel with seeded, parallel shot sampling.
//! * [`circuit`] and [`experiments`]: circuit model, JSON form and builders.
//! * [`noise`]: classical readout bit-flip channel and its analytic effect.
//! * [`analysis`]: shot classification, signed tallies and the Mermin value.
//! * [`hv`]: hidden-variable relation graphs, deterministic strategies and
//!   the arranged/disarranged mixture sampler.
//! * [`cli`]: the `ghzsim` command-line front end.
//!
//! Amplitude index bit `k` is qubit `q[k]` (q0 least significant). Count
//! keys are written `c4 c3 c2 c1 c0`, so the assistants are the outer
//! characters and the entangled register sits in the middle.

pub mod analysis;
pub mod circuit;
pub mod cli;
pub mod error;
pub mod experiments;
pub mod hv;
pub mod noise;
pub mod qsim;
pub mod rng;
pub mod simulate;

pub use error::{Error, Result};

// Copyright 2026 The ghzsim Developers
// SPDX-License-Identifier: Apache-2.0

//! Builders for the three assisted experiments, the transpiled schedules and
//! the mediator toy circuit.
//!
//! Wire roles in the experiment circuits: `q0` is the first assistant, always
//! prepared in `|1⟩`, and imposes one `P(-π/2)` on the entangled qubit named
//! by the experiment id. `q4` is the second assistant, prepared in `|+⟩`, and
//! imposes `P(-π/2)` on the other two entangled qubits. `q1 q2 q3` carry the
//! GHZ-like register.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, Op};
use crate::error::{Error, Result};
use crate::qsim::{self, GateOp, ShotRecord};

pub const ASSISTANT_FIRST: usize = 0;
pub const ASSISTANT_SECOND: usize = 4;
pub const REGISTER: [usize; 3] = [1, 2, 3];

/// Phase angle imposed by both assistants.
pub const SETTING_PHASE: f64 = -FRAC_PI_2;

/// Which entangled qubit receives the `q0`-controlled phase gate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub struct ExperimentId(u8);

impl ExperimentId {
    pub const ALL: [ExperimentId; 3] = [ExperimentId(1), ExperimentId(2), ExperimentId(3)];

    pub fn new(value: u8) -> Result<Self> {
        if (1..=3).contains(&value) {
            Ok(Self(value))
        } else {
            Err(Error::invalid(format!("experiment id must be 1, 2 or 3, got {value}")))
        }
    }

    pub fn value(self) -> u8 {
        self.0
    }

    /// Zero-based slot, convenient for indexing per-experiment arrays.
    pub fn index(self) -> usize {
        usize::from(self.0 - 1)
    }

    /// Register qubit hit by the single-gate setting.
    pub fn single_gate_qubit(self) -> usize {
        usize::from(self.0)
    }

    /// The two register qubits that only `q4` can phase.
    pub fn second_assistant_targets(self) -> [usize; 2] {
        let b = self.single_gate_qubit();
        let mut rest = REGISTER.iter().copied().filter(|&q| q != b);
        [rest.next().unwrap(), rest.next().unwrap()]
    }
}

impl TryFrom<u8> for ExperimentId {
    type Error = Error;

    fn try_from(value: u8) -> Result<Self> {
        Self::new(value)
    }
}

impl From<ExperimentId> for u8 {
    fn from(id: ExperimentId) -> u8 {
        id.0
    }
}

impl fmt::Display for ExperimentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// `(|000⟩ + i|111⟩)/√2` on the register from `|000⟩`.
fn prepare_register(c: Circuit) -> Circuit {
    c.gate(GateOp::h(1))
        .gate(GateOp::cx(1, 2))
        .gate(GateOp::cx(2, 3))
        .gate(GateOp::phase(1, FRAC_PI_2))
}

fn prepare(id: ExperimentId, label: String) -> Circuit {
    let c = Circuit::new(label, 5)
        .gate(GateOp::x(ASSISTANT_FIRST))
        .gate(GateOp::h(ASSISTANT_SECOND));
    prepare_register(c)
        .gate(GateOp::cphase(ASSISTANT_FIRST, id.single_gate_qubit(), SETTING_PHASE))
        .measure(ASSISTANT_FIRST)
}

fn measure_register(c: Circuit) -> Circuit {
    REGISTER.iter().fold(c, |c, &q| c.measure(q))
}

/// The assisted experiment circuit for `id`.
pub fn build_experiment(id: ExperimentId) -> Circuit {
    let [c, d] = id.second_assistant_targets();
    let circuit = prepare(id, format!("experiment-{id}"))
        .gate(GateOp::cphase(ASSISTANT_SECOND, c, SETTING_PHASE))
        .gate(GateOp::cphase(ASSISTANT_SECOND, d, SETTING_PHASE))
        .measure(ASSISTANT_SECOND);
    let circuit = REGISTER.iter().fold(circuit, |c, &q| c.gate(GateOp::h(q)));
    measure_register(circuit)
}

const TRANSPILED_FIXTURES: [&str; 3] = [
    include_str!("../fixtures/transpiled/experiment1.json"),
    include_str!("../fixtures/transpiled/experiment2.json"),
    include_str!("../fixtures/transpiled/experiment3.json"),
];

/// Frozen hardware-style schedule for `id`: the `q4` phase gates are split
/// into a native controlled phase and a CX-based decomposition, and the
/// already-phased register qubit gets its Hadamard early. Functionally equal
/// to [`build_experiment`].
pub fn transpiled_schedule(id: ExperimentId) -> Circuit {
    Circuit::from_json(TRANSPILED_FIXTURES[id.index()])
        .expect("bundled transpiled fixture is valid")
}

/// Builds the same schedule the fixtures were frozen from.
pub fn decomposed_schedule(id: ExperimentId) -> Circuit {
    let [c, d] = id.second_assistant_targets();
    let half = SETTING_PHASE / 2.0;
    debug_assert_eq!(half, -FRAC_PI_4);
    let circuit = prepare(id, format!("experiment-{id}-transpiled"))
        .gate(GateOp::h(id.single_gate_qubit()))
        .gate(GateOp::cphase(ASSISTANT_SECOND, c, SETTING_PHASE))
        .gate(GateOp::phase(ASSISTANT_SECOND, half))
        .gate(GateOp::cx(ASSISTANT_SECOND, d))
        .gate(GateOp::phase(d, -half))
        .gate(GateOp::cx(ASSISTANT_SECOND, d))
        .gate(GateOp::phase(d, half))
        .measure(ASSISTANT_SECOND)
        .gate(GateOp::h(c))
        .gate(GateOp::h(d));
    measure_register(circuit)
}

/// Knobs for the mediator toy circuit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ToyOptions {
    /// Undo the mediator's flips. Disabling this is the negative control.
    pub unflip: bool,
}

impl Default for ToyOptions {
    fn default() -> Self {
        Self { unflip: true }
    }
}

pub const TOY_FLIPPED: [usize; 3] = [1, 2, 5];

/// Mediator stage of the toy circuit, no measurements: `q0` is raised to
/// `|1⟩`, flips `q1 q2 q5` through CX gates, flips them back, and is reset.
pub fn toy_mediator_stage(options: ToyOptions) -> Circuit {
    let label = if options.unflip { "toy-mediator" } else { "toy-mediator-no-unflip" };
    let mut c = Circuit::new(label, 6).gate(GateOp::x(0));
    let rounds = if options.unflip { 2 } else { 1 };
    for _ in 0..rounds {
        for q in TOY_FLIPPED {
            c = c.gate(GateOp::cx(0, q));
        }
    }
    c.gate(GateOp::x(0))
}

pub fn build_toy_circuit() -> Circuit {
    build_toy_circuit_with(ToyOptions::default())
}

pub fn build_toy_circuit_with(options: ToyOptions) -> Circuit {
    (0..6).fold(toy_mediator_stage(options), |c, q| c.measure(q))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ToyTraceStep {
    pub op: String,
    /// Basis state after the op, written `q5 … q0`.
    pub state: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ToyReport {
    pub unflip: bool,
    pub trace: Vec<ToyTraceStep>,
    /// Probability mass on q1..q5 all zero after the mediator stage.
    pub restored_probability: f64,
    /// Largest |amplitude - target| against `|0…0⟩` over the full register.
    pub max_deviation: f64,
    pub pass: bool,
}

/// Simulates the mediator stage and checks that q1..q5 end in `|0⟩`.
pub fn toy_report(options: ToyOptions) -> Result<ToyReport> {
    let stage = toy_mediator_stage(options);
    let mut state = qsim::new_zero_state(stage.num_qubits())?;
    let mut trace = Vec::new();
    for op in stage.ops() {
        if let Op::Gate(g) = op {
            state.apply_in_place(g)?;
            let probs = state.probabilities();
            let (idx, _) = probs
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.total_cmp(b.1))
                .expect("non-empty");
            let key = ShotRecord::new(stage.num_qubits(), idx as u8)?.key();
            trace.push(ToyTraceStep { op: g.to_string(), state: key });
        }
    }
    let restored_probability: f64 = state
        .probabilities()
        .iter()
        .enumerate()
        .filter(|(i, _)| i >> 1 == 0)
        .map(|(_, p)| p)
        .sum();
    let max_deviation = state
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(i, a)| (a - if i == 0 { 1.0 } else { 0.0 }).norm())
        .fold(0.0, f64::max);
    Ok(ToyReport {
        unflip: options.unflip,
        trace,
        restored_probability,
        max_deviation,
        pass: max_deviation < 1e-12,
    })
}

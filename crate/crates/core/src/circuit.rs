// Copyright 2026 The ghzsim Developers
// SPDX-License-Identifier: Apache-2.0

//! Circuit model, its JSON document form and schedule metadata.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qsim::{GateKind, GateOp, MAX_QUBITS};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Op {
    Gate(GateOp),
    Measure(usize),
}

/// Ordered gate and measurement list on a fixed number of wires.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    label: String,
    num_qubits: usize,
    ops: Vec<Op>,
}

impl Circuit {
    pub fn new(label: impl Into<String>, num_qubits: usize) -> Self {
        Self { label: label.into(), num_qubits, ops: Vec::new() }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn ops(&self) -> &[Op] {
        &self.ops
    }

    pub fn gate(mut self, gate: GateOp) -> Self {
        self.ops.push(Op::Gate(gate));
        self
    }

    pub fn measure(mut self, qubit: usize) -> Self {
        self.ops.push(Op::Measure(qubit));
        self
    }

    pub fn push(&mut self, op: Op) {
        self.ops.push(op);
    }

    /// Structural checks: qubit count, gate wires, single measurement per
    /// qubit, and no gate touching a qubit after it was measured.
    pub fn validate(&self) -> Result<()> {
        if !(1..=MAX_QUBITS).contains(&self.num_qubits) {
            return Err(Error::invalid(format!(
                "circuit {:?} has {} qubits; supported range is 1..={MAX_QUBITS}",
                self.label, self.num_qubits
            )));
        }
        let mut measured = vec![false; self.num_qubits];
        for (pos, op) in self.ops.iter().enumerate() {
            match op {
                Op::Gate(g) => {
                    g.validate(self.num_qubits)?;
                    let wires = std::iter::once(g.target).chain(g.control);
                    for q in wires {
                        if measured[q] {
                            return Err(Error::invalid(format!(
                                "op {pos} ({g}) acts on q{q} after it was measured"
                            )));
                        }
                    }
                }
                Op::Measure(q) => {
                    let slot = measured.get_mut(*q).ok_or_else(|| {
                        Error::invalid(format!("op {pos} measures q{q}, out of range"))
                    })?;
                    if std::mem::replace(slot, true) {
                        return Err(Error::invalid(format!("q{q} measured twice")));
                    }
                }
            }
        }
        Ok(())
    }

    fn measure_position(&self, qubit: usize) -> Option<usize> {
        self.ops.iter().position(|op| *op == Op::Measure(qubit))
    }

    /// Ops strictly between the first assistant measurement (`q0`) and the
    /// second (`q4`).
    pub fn selection_delay(&self) -> Result<usize> {
        let first = self
            .measure_position(0)
            .ok_or_else(|| Error::config("circuit never measures q0"))?;
        let second = self
            .measure_position(4)
            .ok_or_else(|| Error::config("circuit never measures q4"))?;
        if second < first {
            return Err(Error::config("q4 is measured before q0"));
        }
        Ok(second - first - 1)
    }

    pub fn schedule_metadata(&self) -> Result<ScheduleMetadata> {
        let selection_delay_gates = self.selection_delay()?;
        let tau_labels = (0..self.num_qubits)
            .flat_map(|q| {
                TauStage::ALL.iter().map(move |&stage| TauLabel { qubit: q, stage })
            })
            .collect();
        Ok(ScheduleMetadata { selection_delay_gates, tau_labels })
    }

    pub fn to_document(&self) -> CircuitDocument {
        CircuitDocument {
            label: self.label.clone(),
            num_qubits: self.num_qubits,
            ops: self.ops.iter().map(OpDocument::from).collect(),
        }
    }

    pub fn from_document(doc: CircuitDocument) -> Result<Self> {
        let ops = doc.ops.into_iter().map(Op::try_from).collect::<Result<_>>()?;
        let circuit = Self { label: doc.label, num_qubits: doc.num_qubits, ops };
        circuit.validate()?;
        Ok(circuit)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.to_document())?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: CircuitDocument =
            serde_json::from_str(text).map_err(|e| Error::DataFormat(e.to_string()))?;
        Self::from_document(doc)
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::from_json(&fs::read_to_string(path)?)
    }
}

/// Serialized circuit: `{label, num_qubits, ops: [...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CircuitDocument {
    pub label: String,
    pub num_qubits: usize,
    pub ops: Vec<OpDocument>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OpDocument {
    Measure {
        measure: usize,
    },
    Gate {
        kind: String,
        target: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        control: Option<usize>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        theta: Option<f64>,
    },
}

impl From<&Op> for OpDocument {
    fn from(op: &Op) -> Self {
        match *op {
            Op::Measure(q) => OpDocument::Measure { measure: q },
            Op::Gate(g) => {
                let kind = match g.kind {
                    GateKind::Hadamard => "h",
                    GateKind::PauliX => "x",
                    GateKind::Phase(_) => "p",
                    GateKind::ControlledPhase(_) => "cp",
                    GateKind::ControlledX => "cx",
                };
                OpDocument::Gate {
                    kind: kind.to_owned(),
                    target: g.target,
                    control: g.control,
                    theta: g.kind.theta(),
                }
            }
        }
    }
}

impl TryFrom<OpDocument> for Op {
    type Error = Error;

    fn try_from(doc: OpDocument) -> Result<Self> {
        let (kind, target, control, theta) = match doc {
            OpDocument::Measure { measure } => return Ok(Op::Measure(measure)),
            OpDocument::Gate { kind, target, control, theta } => (kind, target, control, theta),
        };
        let need_theta = || theta.ok_or_else(|| Error::DataFormat(format!("{kind} needs theta")));
        let kind = match kind.as_str() {
            "h" => GateKind::Hadamard,
            "x" => GateKind::PauliX,
            "p" => GateKind::Phase(need_theta()?),
            "cp" => GateKind::ControlledPhase(need_theta()?),
            "cx" => GateKind::ControlledX,
            other => return Err(Error::DataFormat(format!("unknown gate kind {other:?}"))),
        };
        if theta.is_some() && kind.theta().is_none() {
            return Err(Error::DataFormat("theta given for a fixed gate".into()));
        }
        Ok(Op::Gate(GateOp { kind, target, control }))
    }
}

/// Symbolic interval stage of a qubit's life in a shot; no physical units.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TauStage {
    Initial,
    On,
    Measurement,
}

impl TauStage {
    pub const ALL: [TauStage; 3] = [TauStage::Initial, TauStage::On, TauStage::Measurement];

    /// `(τ1,τ2)`, `(τ3,τ4)` or `(τ5,τ6)`.
    pub fn interval(self) -> &'static str {
        match self {
            TauStage::Initial => "(τ1,τ2)",
            TauStage::On => "(τ3,τ4)",
            TauStage::Measurement => "(τ5,τ6)",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TauLabel {
    pub qubit: usize,
    pub stage: TauStage,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScheduleMetadata {
    pub selection_delay_gates: usize,
    pub tau_labels: Vec<TauLabel>,
}

impl ScheduleMetadata {
    /// True when every qubit's labels run initial, on, measurement in order.
    pub fn is_ordered(&self) -> bool {
        let mut last: Vec<Option<TauStage>> = Vec::new();
        for label in &self.tau_labels {
            if last.len() <= label.qubit {
                last.resize(label.qubit + 1, None);
            }
            if last[label.qubit].is_some_and(|prev| prev > label.stage) {
                return false;
            }
            last[label.qubit] = Some(label.stage);
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn adjacent_assistant_measurements_have_zero_delay() {
        let c = Circuit::new("adj", 5).measure(0).measure(4);
        assert_eq!(c.selection_delay().unwrap(), 0);
    }

    #[test]
    fn missing_assistant_measurement_is_config_error() {
        let c = Circuit::new("half", 5).measure(0);
        assert!(matches!(c.selection_delay(), Err(Error::Config(_))));
        let c = Circuit::new("none", 5).gate(GateOp::h(1));
        assert!(matches!(c.selection_delay(), Err(Error::Config(_))));
    }

    #[test]
    fn gate_after_measurement_is_rejected() {
        let c = Circuit::new("late", 2).measure(0).gate(GateOp::x(0));
        assert!(c.validate().is_err());
        let c = Circuit::new("late-control", 2).measure(0).gate(GateOp::cx(0, 1));
        assert!(c.validate().is_err());
        let c = Circuit::new("twice", 1).measure(0).measure(0);
        assert!(c.validate().is_err());
    }

    #[test]
    fn document_rejects_unknown_kind_and_missing_theta() {
        let bad = r#"{"label":"b","num_qubits":1,"ops":[{"kind":"rz","target":0}]}"#;
        assert!(matches!(Circuit::from_json(bad), Err(Error::DataFormat(_))));
        let bad = r#"{"label":"b","num_qubits":1,"ops":[{"kind":"p","target":0}]}"#;
        assert!(matches!(Circuit::from_json(bad), Err(Error::DataFormat(_))));
    }

    #[test]
    fn schedule_labels_are_ordered() {
        let c = Circuit::new("adj", 5).measure(0).gate(GateOp::h(1)).measure(4);
        let meta = c.schedule_metadata().unwrap();
        assert_eq!(meta.selection_delay_gates, 1);
        assert_eq!(meta.tau_labels.len(), 15);
        assert!(meta.is_ordered());
        let mut shuffled = meta.clone();
        shuffled.tau_labels.swap(0, 2);
        assert!(!shuffled.is_ordered());
    }

    fn arb_op(n: usize) -> impl Strategy<Value = Op> {
        let q = 0..n;
        let theta = prop::num::f64::NORMAL | prop::num::f64::ZERO;
        prop_oneof![
            q.clone().prop_map(|t| Op::Gate(GateOp::h(t))),
            q.clone().prop_map(|t| Op::Gate(GateOp::x(t))),
            (q.clone(), theta).prop_map(|(t, th)| Op::Gate(GateOp::phase(t, th))),
            (q.clone(), 1..n, theta).prop_map(move |(c, d, th)| {
                Op::Gate(GateOp::cphase(c, (c + d) % n, th))
            }),
            (q, 1..n).prop_map(move |(c, d)| Op::Gate(GateOp::cx(c, (c + d) % n))),
        ]
    }

    proptest! {
        #[test]
        fn json_round_trip_is_exact(ops in prop::collection::vec(arb_op(5), 0..24)) {
            let mut c = Circuit::new("prop", 5);
            for op in ops {
                c.push(op);
            }
            for q in 0..5 {
                c.push(Op::Measure(q));
            }
            let text = c.to_json().unwrap();
            let back = Circuit::from_json(&text).unwrap();
            prop_assert_eq!(&back, &c);
            for (a, b) in back.ops().iter().zip(c.ops()) {
                if let (Op::Gate(a), Op::Gate(b)) = (a, b) {
                    prop_assert_eq!(a.kind.theta().map(f64::to_bits), b.kind.theta().map(f64::to_bits));
                }
            }
            prop_assert_eq!(back.to_json().unwrap(), text);
        }
    }
}

// Copyright 2026 The ghzsim Developers
// SPDX-License-Identifier: Apache-2.0

//! Dense statevector simulation for up to six qubits.
//!
//! Amplitude index bit `k` corresponds to qubit `q[k]`, so `q0` is the least
//! significant bit. Measurement is done by sampling the joint distribution of
//! the final state; [`sample_shot_sequential`] provides the collapse-as-you-go
//! path used to check that the two agree.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;

use crate::circuit::{Circuit, Op};
use crate::error::{Error, Result};
use crate::rng::StreamKey;

pub const MAX_QUBITS: usize = 6;

/// Norm tolerance checked after construction from raw amplitudes.
pub const NORM_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GateKind {
    Hadamard,
    PauliX,
    /// `diag(1, e^{iθ})`, θ in radians.
    Phase(f64),
    /// Controlled `Phase(θ)`; only the `|11⟩` component picks up `e^{iθ}`.
    ControlledPhase(f64),
    ControlledX,
}

impl GateKind {
    pub fn is_controlled(&self) -> bool {
        matches!(self, GateKind::ControlledPhase(_) | GateKind::ControlledX)
    }

    pub fn theta(&self) -> Option<f64> {
        match *self {
            GateKind::Phase(t) | GateKind::ControlledPhase(t) => Some(t),
            _ => None,
        }
    }
}

/// One gate on a designated wire, optionally controlled by another.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GateOp {
    pub kind: GateKind,
    pub target: usize,
    pub control: Option<usize>,
}

impl GateOp {
    pub fn h(target: usize) -> Self {
        Self { kind: GateKind::Hadamard, target, control: None }
    }

    pub fn x(target: usize) -> Self {
        Self { kind: GateKind::PauliX, target, control: None }
    }

    pub fn phase(target: usize, theta: f64) -> Self {
        Self { kind: GateKind::Phase(theta), target, control: None }
    }

    pub fn cphase(control: usize, target: usize, theta: f64) -> Self {
        Self { kind: GateKind::ControlledPhase(theta), target, control: Some(control) }
    }

    pub fn cx(control: usize, target: usize) -> Self {
        Self { kind: GateKind::ControlledX, target, control: Some(control) }
    }

    /// Checks wire indices against `num_qubits` and the gate's own invariants.
    pub fn validate(&self, num_qubits: usize) -> Result<()> {
        if self.target >= num_qubits {
            return Err(Error::invalid(format!(
                "target q{} out of range for {num_qubits} qubits",
                self.target
            )));
        }
        if let Some(theta) = self.kind.theta() {
            if !theta.is_finite() {
                return Err(Error::invalid("phase angle must be finite"));
            }
        }
        match (self.kind.is_controlled(), self.control) {
            (true, None) => Err(Error::invalid("controlled gate without a control qubit")),
            (false, Some(_)) => Err(Error::invalid("control qubit given for an uncontrolled gate")),
            (true, Some(c)) if c >= num_qubits => Err(Error::invalid(format!(
                "control q{c} out of range for {num_qubits} qubits"
            ))),
            (true, Some(c)) if c == self.target => {
                Err(Error::invalid(format!("control and target are both q{c}")))
            }
            _ => Ok(()),
        }
    }

    /// The gate that undoes this one.
    pub fn inverse(&self) -> Self {
        let kind = match self.kind {
            GateKind::Phase(t) => GateKind::Phase(-t),
            GateKind::ControlledPhase(t) => GateKind::ControlledPhase(-t),
            k => k,
        };
        Self { kind, ..*self }
    }
}

impl fmt::Display for GateOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.kind, self.control) {
            (GateKind::Hadamard, _) => write!(f, "H q{}", self.target),
            (GateKind::PauliX, _) => write!(f, "X q{}", self.target),
            (GateKind::Phase(t), _) => write!(f, "P({t}) q{}", self.target),
            (GateKind::ControlledPhase(t), Some(c)) => write!(f, "cP({t}) q{c}->q{}", self.target),
            (GateKind::ControlledX, Some(c)) => write!(f, "CX q{c}->q{}", self.target),
            (_, None) => write!(f, "<malformed> q{}", self.target),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Statevector {
    num_qubits: usize,
    amplitudes: Vec<Complex64>,
}

/// `|0…0⟩` on `num_qubits` wires.
pub fn new_zero_state(num_qubits: usize) -> Result<Statevector> {
    check_qubit_count(num_qubits)?;
    let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << num_qubits];
    amplitudes[0] = Complex64::new(1.0, 0.0);
    Ok(Statevector { num_qubits, amplitudes })
}

fn check_qubit_count(num_qubits: usize) -> Result<()> {
    if (1..=MAX_QUBITS).contains(&num_qubits) {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "num_qubits must be in 1..={MAX_QUBITS}, got {num_qubits}"
        )))
    }
}

impl Statevector {
    /// Wraps raw amplitudes, rejecting wrong lengths and unnormalized input.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let len = amplitudes.len();
        if !len.is_power_of_two() {
            return Err(Error::invalid(format!("{len} amplitudes is not a power of two")));
        }
        let num_qubits = len.trailing_zeros() as usize;
        check_qubit_count(num_qubits)?;
        let state = Self { num_qubits, amplitudes };
        let norm = state.norm_sqr();
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::invalid(format!("state norm² is {norm}, expected 1")));
        }
        Ok(state)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amplitudes[index]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Pure form of [`Statevector::apply_in_place`].
    pub fn apply_gate(&self, gate: &GateOp) -> Result<Statevector> {
        let mut next = self.clone();
        next.apply_in_place(gate)?;
        Ok(next)
    }

    pub fn apply_in_place(&mut self, gate: &GateOp) -> Result<()> {
        gate.validate(self.num_qubits)?;
        let t = 1usize << gate.target;
        let c = gate.control.map_or(0, |c| 1usize << c);
        let amps = &mut self.amplitudes;
        match gate.kind {
            GateKind::Hadamard => {
                for i in (0..amps.len()).filter(|i| i & t == 0) {
                    let (a, b) = (amps[i], amps[i | t]);
                    amps[i] = (a + b) * FRAC_1_SQRT_2;
                    amps[i | t] = (a - b) * FRAC_1_SQRT_2;
                }
            }
            GateKind::PauliX | GateKind::ControlledX => {
                for i in (0..amps.len()).filter(|i| i & t == 0 && i & c == c) {
                    amps.swap(i, i | t);
                }
            }
            GateKind::Phase(theta) | GateKind::ControlledPhase(theta) => {
                let phase = Complex64::from_polar(1.0, theta);
                for (i, a) in amps.iter_mut().enumerate() {
                    if i & t != 0 && i & c == c {
                        *a *= phase;
                    }
                }
            }
        }
        Ok(())
    }

    /// Born-rule probabilities, indexed like the amplitudes.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Probability that measuring `qubit` yields 1.
    pub fn prob_one(&self, qubit: usize) -> f64 {
        let m = 1usize << qubit;
        self.amplitudes
            .iter()
            .enumerate()
            .filter(|(i, _)| i & m != 0)
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    /// Post-measurement state after observing `bit` on `qubit`, or `None` if
    /// that outcome has zero probability.
    pub fn project(&self, qubit: usize, bit: bool) -> Option<Statevector> {
        let m = 1usize << qubit;
        let keep = |i: usize| (i & m != 0) == bit;
        let p: f64 = self
            .amplitudes
            .iter()
            .enumerate()
            .filter(|(i, _)| keep(*i))
            .map(|(_, a)| a.norm_sqr())
            .sum();
        if p <= f64::EPSILON {
            return None;
        }
        let scale = 1.0 / p.sqrt();
        let amplitudes = self
            .amplitudes
            .iter()
            .enumerate()
            .map(|(i, a)| if keep(i) { a * scale } else { Complex64::new(0.0, 0.0) })
            .collect();
        Some(Statevector { num_qubits: self.num_qubits, amplitudes })
    }

    /// Normalized state of `register` conditioned on the `fixed` qubit values.
    ///
    /// Output index bit `k` is `register[k]`. Every qubit must appear in
    /// exactly one of the two lists.
    pub fn conditional_register(
        &self,
        fixed: &[(usize, bool)],
        register: &[usize],
    ) -> Result<Vec<Complex64>> {
        let mut seen = vec![false; self.num_qubits];
        for &q in fixed.iter().map(|(q, _)| q).chain(register) {
            if q >= self.num_qubits || std::mem::replace(&mut seen[q], true) {
                return Err(Error::invalid(format!("qubit q{q} repeated or out of range")));
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::invalid("every qubit must be fixed or in the register"));
        }
        let base: usize = fixed.iter().filter(|(_, b)| *b).map(|(q, _)| 1 << q).sum();
        let mut out: Vec<Complex64> = (0..1usize << register.len())
            .map(|r| {
                let idx = register
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| r >> k & 1 == 1)
                    .fold(base, |acc, (_, q)| acc | 1 << q);
                self.amplitudes[idx]
            })
            .collect();
        let norm: f64 = out.iter().map(|a| a.norm_sqr()).sum();
        if norm <= f64::EPSILON {
            return Err(Error::invalid("conditioning outcome has zero probability"));
        }
        let scale = 1.0 / norm.sqrt();
        out.iter_mut().for_each(|a| *a *= scale);
        Ok(out)
    }
}

/// Joint outcome of one shot. Bit `k` of `bits` is qubit `q[k]`'s result.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ShotRecord {
    num_qubits: u8,
    bits: u8,
}

impl ShotRecord {
    pub fn new(num_qubits: usize, bits: u8) -> Result<Self> {
        check_qubit_count(num_qubits)?;
        if u32::from(bits) >> num_qubits != 0 {
            return Err(Error::invalid(format!("bits {bits:#b} exceed {num_qubits} qubits")));
        }
        Ok(Self { num_qubits: num_qubits as u8, bits })
    }

    /// Parses a key written most-significant qubit first (`"c4 c3 c2 c1 c0"`).
    pub fn from_key(key: &str) -> Result<Self> {
        let n = key.len();
        if !(1..=MAX_QUBITS).contains(&n) || !key.bytes().all(|b| b == b'0' || b == b'1') {
            return Err(Error::DataFormat(format!("malformed bit-string key {key:?}")));
        }
        let bits = key.bytes().fold(0u8, |acc, b| (acc << 1) | (b - b'0'));
        Self::new(n, bits)
    }

    pub fn num_qubits(&self) -> usize {
        usize::from(self.num_qubits)
    }

    pub fn bits(&self) -> u8 {
        self.bits
    }

    pub fn bit(&self, qubit: usize) -> u8 {
        (self.bits >> qubit) & 1
    }

    pub fn flipped(&self, qubit: usize) -> Self {
        Self { bits: self.bits ^ (1 << qubit), ..*self }
    }

    /// Count-table key, highest qubit leftmost.
    pub fn key(&self) -> String {
        (0..self.num_qubits())
            .rev()
            .map(|q| if self.bit(q) == 1 { '1' } else { '0' })
            .collect()
    }
}

impl fmt::Display for ShotRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.key())
    }
}

/// Applies every gate of `circuit` to `|0…0⟩`, skipping measurements.
pub fn final_state(circuit: &Circuit) -> Result<Statevector> {
    let mut state = new_zero_state(circuit.num_qubits())?;
    for op in circuit.ops() {
        if let Op::Gate(g) = op {
            state.apply_in_place(g)?;
        }
    }
    Ok(state)
}

fn require_full_measurement(circuit: &Circuit) -> Result<()> {
    let mut measured = vec![0u32; circuit.num_qubits()];
    for op in circuit.ops() {
        if let Op::Measure(q) = op {
            match measured.get_mut(*q) {
                Some(m) => *m += 1,
                None => return Err(Error::config(format!("measure of q{q} is out of range"))),
            }
        }
    }
    match measured.iter().position(|&m| m != 1) {
        Some(q) => Err(Error::config(format!(
            "q{q} is measured {} times; every output qubit must be measured exactly once",
            measured[q]
        ))),
        None => Ok(()),
    }
}

/// Samples shots of a circuit from its precomputed final distribution.
#[derive(Debug, Clone)]
pub struct ShotSampler {
    num_qubits: usize,
    cumulative: Vec<f64>,
}

impl ShotSampler {
    pub fn new(circuit: &Circuit) -> Result<Self> {
        circuit.validate()?;
        require_full_measurement(circuit)?;
        let state = final_state(circuit)?;
        let cumulative = state
            .probabilities()
            .into_iter()
            .scan(0.0, |acc, p| {
                *acc += p;
                Some(*acc)
            })
            .collect();
        Ok(Self { num_qubits: circuit.num_qubits(), cumulative })
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> ShotRecord {
        let total = *self.cumulative.last().expect("non-empty distribution");
        let u = rng.random::<f64>() * total;
        // First bucket whose upper edge exceeds u; zero-mass buckets are never hit.
        let idx = self.cumulative.partition_point(|&c| c <= u).min(self.cumulative.len() - 1);
        ShotRecord { num_qubits: self.num_qubits as u8, bits: idx as u8 }
    }

    /// `shots` records drawn in parallel, shot `i` from substream `i`.
    pub fn sample_many(&self, key: StreamKey, shots: u64) -> Vec<ShotRecord> {
        (0..shots)
            .into_par_iter()
            .map(|i| self.sample(&mut key.shot(i)))
            .collect()
    }
}

/// One shot drawn from the final-state distribution of `circuit`.
pub fn sample_shot<R: Rng + ?Sized>(circuit: &Circuit, rng: &mut R) -> Result<ShotRecord> {
    Ok(ShotSampler::new(circuit)?.sample(rng))
}

/// One shot with every measurement performed where it occurs in the circuit,
/// collapsing the state before later gates act.
pub fn sample_shot_sequential<R: Rng + ?Sized>(circuit: &Circuit, rng: &mut R) -> Result<ShotRecord> {
    circuit.validate()?;
    require_full_measurement(circuit)?;
    let mut state = new_zero_state(circuit.num_qubits())?;
    let mut bits = 0u8;
    for op in circuit.ops() {
        match op {
            Op::Gate(g) => state.apply_in_place(g)?,
            Op::Measure(q) => {
                let one = rng.random::<f64>() < state.prob_one(*q);
                state = state
                    .project(*q, one)
                    .ok_or_else(|| Error::config("sampled a zero-probability outcome"))?;
                bits |= u8::from(one) << q;
            }
        }
    }
    ShotRecord::new(circuit.num_qubits(), bits)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn basis(n: usize, idx: usize) -> Statevector {
        let mut amps = vec![c(0.0, 0.0); 1 << n];
        amps[idx] = c(1.0, 0.0);
        Statevector::from_amplitudes(amps).unwrap()
    }

    fn assert_amps(actual: &[Complex64], expected: &[Complex64], tol: f64) {
        assert_eq!(actual.len(), expected.len());
        for (i, (a, e)) in actual.iter().zip(expected).enumerate() {
            assert!((a - e).norm() < tol, "amplitude {i}: {a} vs {e}");
        }
    }

    #[test]
    fn zero_state_shapes() {
        assert_eq!(new_zero_state(1).unwrap().amplitudes(), &[c(1.0, 0.0), c(0.0, 0.0)]);
        let s = new_zero_state(3).unwrap();
        assert_eq!(s.amplitudes().len(), 8);
        assert_eq!(s.amplitude(0), c(1.0, 0.0));
        assert!(s.amplitudes()[1..].iter().all(|a| *a == c(0.0, 0.0)));
        assert!(matches!(new_zero_state(7), Err(Error::InvalidArgument(_))));
        assert!(matches!(new_zero_state(0), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn hadamard_on_zero() {
        let s = new_zero_state(1).unwrap().apply_gate(&GateOp::h(0)).unwrap();
        let r = FRAC_1_SQRT_2;
        assert_amps(s.amplitudes(), &[c(r, 0.0), c(r, 0.0)], 1e-12);
        let p = s.probabilities();
        assert!((p[0] - 0.5).abs() < 1e-12 && (p[1] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn phase_minus_half_pi_on_one() {
        let s = basis(1, 1).apply_gate(&GateOp::phase(0, -FRAC_PI_2)).unwrap();
        assert_amps(s.amplitudes(), &[c(0.0, 0.0), c(0.0, -1.0)], 1e-12);
    }

    #[test]
    fn controlled_phase_only_touches_11() {
        let g = GateOp::cphase(0, 1, -FRAC_PI_2);
        for idx in 0..3 {
            let s = basis(2, idx).apply_gate(&g).unwrap();
            assert_amps(s.amplitudes(), basis(2, idx).amplitudes(), 1e-12);
        }
        let s = basis(2, 3).apply_gate(&g).unwrap();
        assert_amps(s.amplitudes(), &[c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, -1.0)], 1e-12);
    }

    #[test]
    fn controlled_x_flips_when_control_set() {
        let g = GateOp::cx(0, 1);
        assert_eq!(basis(2, 0b01).apply_gate(&g).unwrap(), basis(2, 0b11));
        assert_eq!(basis(2, 0b10).apply_gate(&g).unwrap(), basis(2, 0b10));
    }

    #[test]
    fn gate_validation() {
        let s = new_zero_state(2).unwrap();
        assert!(matches!(s.apply_gate(&GateOp::h(2)), Err(Error::InvalidArgument(_))));
        assert!(matches!(s.apply_gate(&GateOp::cx(1, 1)), Err(Error::InvalidArgument(_))));
        assert!(matches!(s.apply_gate(&GateOp::cx(5, 0)), Err(Error::InvalidArgument(_))));
        let bad = GateOp { kind: GateKind::ControlledX, target: 0, control: None };
        assert!(bad.validate(2).is_err());
        assert!(GateOp::phase(0, f64::NAN).validate(1).is_err());
    }

    #[test]
    fn ghz_like_probabilities() {
        let r = FRAC_1_SQRT_2;
        let mut amps = vec![c(0.0, 0.0); 8];
        amps[0] = c(r, 0.0);
        amps[7] = c(0.0, r);
        let p = Statevector::from_amplitudes(amps).unwrap().probabilities();
        for (i, pi) in p.iter().enumerate() {
            let want = if i == 0 || i == 7 { 0.5 } else { 0.0 };
            assert!((pi - want).abs() < 1e-12);
        }
    }

    #[test]
    fn from_amplitudes_rejects_bad_input() {
        assert!(Statevector::from_amplitudes(vec![c(1.0, 0.0); 3]).is_err());
        assert!(Statevector::from_amplitudes(vec![c(1.0, 0.0), c(1.0, 0.0)]).is_err());
    }

    #[test]
    fn projection_renormalizes() {
        let s = new_zero_state(2)
            .unwrap()
            .apply_gate(&GateOp::h(0))
            .unwrap()
            .apply_gate(&GateOp::cx(0, 1))
            .unwrap();
        let p = s.project(0, true).unwrap();
        assert_amps(p.amplitudes(), basis(2, 3).amplitudes(), 1e-12);
        assert!(basis(2, 0).project(1, true).is_none());
    }

    #[test]
    fn shot_keys() {
        let shot = ShotRecord::new(5, 0b00001).unwrap();
        assert_eq!(shot.key(), "00001");
        assert_eq!(ShotRecord::from_key("10001").unwrap().bits(), 0b10001);
        assert!(ShotRecord::from_key("10x01").is_err());
        assert!(ShotRecord::new(2, 0b100).is_err());
        assert_eq!(shot.flipped(4).key(), "10001");
    }
}

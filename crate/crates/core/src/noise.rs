// Copyright 2026 The ghzsim Developers
// SPDX-License-Identifier: Apache-2.0

//! Classical readout bit-flip channel.
//!
//! Each recorded bit is inverted independently with its qubit's probability.
//! For a source whose register parity is fixed per setting, flips on
//! `q1 q2 q3` with common probability `p` shrink every average product by
//! `(1 - 2p)^3`, so the ideal Mermin value 4 becomes `4 (1 - 2p)^3`. Flips on
//! `q0` only move shots into the discard bucket.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qsim::ShotRecord;

pub const MAX_FLIP: f64 = 0.5;
pub const BISECTION_TOLERANCE: f64 = 1e-10;
pub const IDEAL_M3: f64 = 4.0;

/// Per-qubit readout flip probabilities; absent qubits never flip.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BTreeMap<String, f64>", into = "BTreeMap<String, f64>")]
pub struct NoiseModel {
    readout_flip: BTreeMap<usize, f64>,
}

impl NoiseModel {
    pub fn noiseless() -> Self {
        Self::default()
    }

    pub fn with_flip(mut self, qubit: usize, p: f64) -> Result<Self> {
        check_probability(p)?;
        if qubit >= crate::qsim::MAX_QUBITS {
            return Err(Error::invalid(format!("q{qubit} is out of range")));
        }
        if p == 0.0 {
            self.readout_flip.remove(&qubit);
        } else {
            self.readout_flip.insert(qubit, p);
        }
        Ok(self)
    }

    /// Same probability on each listed qubit.
    pub fn uniform(qubits: &[usize], p: f64) -> Result<Self> {
        qubits.iter().try_fold(Self::default(), |m, &q| m.with_flip(q, p))
    }

    pub fn flip_probability(&self, qubit: usize) -> f64 {
        self.readout_flip.get(&qubit).copied().unwrap_or(0.0)
    }

    pub fn is_noiseless(&self) -> bool {
        self.readout_flip.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.readout_flip.iter().map(|(&q, &p)| (q, p))
    }
}

fn check_probability(p: f64) -> Result<()> {
    if (0.0..=MAX_FLIP).contains(&p) {
        Ok(())
    } else {
        Err(Error::invalid(format!("flip probability {p} outside [0, {MAX_FLIP}]")))
    }
}

fn parse_qubit_label(label: &str) -> Result<usize> {
    label
        .trim()
        .strip_prefix('q')
        .and_then(|n| n.parse().ok())
        .ok_or_else(|| Error::invalid(format!("qubit label {label:?} is not of the form qN")))
}

impl TryFrom<BTreeMap<String, f64>> for NoiseModel {
    type Error = Error;

    fn try_from(map: BTreeMap<String, f64>) -> Result<Self> {
        map.iter()
            .try_fold(Self::default(), |m, (label, &p)| m.with_flip(parse_qubit_label(label)?, p))
    }
}

impl From<NoiseModel> for BTreeMap<String, f64> {
    fn from(model: NoiseModel) -> Self {
        model.iter().map(|(q, p)| (format!("q{q}"), p)).collect()
    }
}

/// Parses `q1=0.0881,q2=0.0881`. An empty string is the noiseless model.
impl FromStr for NoiseModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.split(',')
            .map(str::trim)
            .filter(|part| !part.is_empty())
            .try_fold(Self::default(), |m, part| {
                let (label, p) = part
                    .split_once('=')
                    .ok_or_else(|| Error::invalid(format!("expected qN=p, got {part:?}")))?;
                let p: f64 = p
                    .trim()
                    .parse()
                    .map_err(|_| Error::invalid(format!("bad probability in {part:?}")))?;
                m.with_flip(parse_qubit_label(label)?, p)
            })
    }
}

impl fmt::Display for NoiseModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<_> = self.iter().map(|(q, p)| format!("q{q}={p}")).collect();
        f.write_str(&parts.join(","))
    }
}

/// Flips each bit of `shot` independently per `model`.
///
/// One uniform draw is consumed per qubit of the shot, in qubit order,
/// whether or not that qubit can flip, so the stream layout does not depend
/// on the model.
pub fn apply_readout_noise<R: Rng + ?Sized>(
    shot: ShotRecord,
    model: &NoiseModel,
    rng: &mut R,
) -> ShotRecord {
    (0..shot.num_qubits()).fold(shot, |s, q| {
        let u: f64 = rng.random();
        if u < model.flip_probability(q) {
            s.flipped(q)
        } else {
            s
        }
    })
}

/// `4 (1 - 2p)^3`: the Mermin value left after flips with probability `p`
/// on each register qubit.
pub fn expected_m3_under_readout(p: f64) -> Result<f64> {
    check_probability(p)?;
    Ok(IDEAL_M3 * (1.0 - 2.0 * p).powi(3))
}

/// Solves `4 (1 - 2p)^3 = m3_target` for `p` by bisection on `[0, 0.5]`.
pub fn calibrate_p_for_target(m3_target: f64) -> Result<f64> {
    if !(m3_target > 0.0 && m3_target <= IDEAL_M3) {
        return Err(Error::invalid(format!("target {m3_target} outside (0, {IDEAL_M3}]")));
    }
    let f = |p: f64| IDEAL_M3 * (1.0 - 2.0 * p).powi(3) - m3_target;
    let (mut lo, mut hi) = (0.0_f64, MAX_FLIP);
    if f(lo) <= 0.0 {
        return Ok(0.0);
    }
    // f is strictly decreasing: f(lo) > 0 >= f(hi) throughout.
    while hi - lo > BISECTION_TOLERANCE {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{Domain, StreamKey};

    #[test]
    fn parse_and_display() {
        let m: NoiseModel = "q1=0.0881, q2=0.0881,q3=0.0881".parse().unwrap();
        assert_eq!(m.flip_probability(2), 0.0881);
        assert_eq!(m.flip_probability(0), 0.0);
        assert_eq!(m.to_string(), "q1=0.0881,q2=0.0881,q3=0.0881");
        assert!("".parse::<NoiseModel>().unwrap().is_noiseless());
        assert!("q1=0.6".parse::<NoiseModel>().is_err());
        assert!("q1=-0.1".parse::<NoiseModel>().is_err());
        assert!("x1=0.1".parse::<NoiseModel>().is_err());
        assert!("q1".parse::<NoiseModel>().is_err());
        assert!("q9=0.1".parse::<NoiseModel>().is_err());
    }

    #[test]
    fn json_form_uses_qubit_labels() {
        let m = NoiseModel::uniform(&[0], 0.0536).unwrap();
        let text = serde_json::to_string(&m).unwrap();
        assert_eq!(text, r#"{"q0":0.0536}"#);
        assert_eq!(serde_json::from_str::<NoiseModel>(&text).unwrap(), m);
        assert!(serde_json::from_str::<NoiseModel>(r#"{"q0":0.9}"#).is_err());
    }

    #[test]
    fn noiseless_leaves_shot_unchanged() {
        let key = StreamKey::new(1, Domain::Readout(0));
        let shot = ShotRecord::new(5, 0b10110).unwrap();
        for i in 0..100 {
            assert_eq!(apply_readout_noise(shot, &NoiseModel::noiseless(), &mut key.shot(i)), shot);
        }
    }

    #[test]
    fn half_flip_randomizes_marginal() {
        let model = NoiseModel::uniform(&[1], 0.5).unwrap();
        let key = StreamKey::new(9, Domain::Readout(0));
        let n = 100_000u64;
        let shot = ShotRecord::new(5, 0).unwrap();
        let ones = (0..n)
            .filter(|&i| apply_readout_noise(shot, &model, &mut key.shot(i)).bit(1) == 1)
            .count() as f64;
        let sigma = (0.25 / n as f64).sqrt();
        assert!((ones / n as f64 - 0.5).abs() < 3.0 * sigma);
    }

    #[test]
    fn parity_contrast_scales_by_cube() {
        let p = 0.1;
        let model = NoiseModel::uniform(&[1, 2, 3], p).unwrap();
        let key = StreamKey::new(11, Domain::Readout(0));
        let n = 100_000u64;
        let even = ShotRecord::new(5, 0b00111).unwrap(); // register 011 -> even parity
        let sum: i64 = (0..n)
            .map(|i| {
                let s = apply_readout_noise(even, &model, &mut key.shot(i));
                if (s.bit(1) + s.bit(2) + s.bit(3)).is_multiple_of(2) { 1 } else { -1 }
            })
            .sum();
        let mean = sum as f64 / n as f64;
        let expected = (1.0 - 2.0 * p).powi(3);
        assert!((expected - 0.512).abs() < 1e-12);
        let sigma = ((1.0 - expected * expected) / n as f64).sqrt();
        assert!((mean - expected).abs() < 3.0 * sigma, "{mean} vs {expected}");
    }

    #[test]
    fn analytic_formula_values() {
        assert_eq!(expected_m3_under_readout(0.0).unwrap(), 4.0);
        assert_eq!(expected_m3_under_readout(0.5).unwrap(), 0.0);
        // 4 * (1 - 0.1762)^3 = 4 * 0.8238^3
        let v = expected_m3_under_readout(0.0881).unwrap();
        assert!((v - 4.0 * 0.8238f64.powi(3)).abs() < 1e-12);
        assert!((v - 2.2363).abs() < 1e-3);
        assert!(expected_m3_under_readout(0.51).is_err());
    }

    #[test]
    fn analytic_formula_is_strictly_decreasing() {
        let vals: Vec<f64> = (0..=500).map(|i| expected_m3_under_readout(i as f64 / 1000.0).unwrap()).collect();
        assert!(vals.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn calibration_inverts_the_formula() {
        assert_eq!(calibrate_p_for_target(4.0).unwrap(), 0.0);
        let p = calibrate_p_for_target(2.235863182).unwrap();
        assert!((p - 0.0881).abs() < 1e-3, "{p}");
        assert!((expected_m3_under_readout(p).unwrap() - 2.235863182).abs() < 1e-8);
        let closed = (1.0 - 0.5f64.powf(1.0 / 3.0)) / 2.0;
        let p = calibrate_p_for_target(2.0).unwrap();
        assert!((p - closed).abs() < 1e-9);
        assert!((p - 0.1031).abs() < 1e-4);
        assert!((calibrate_p_for_target(0.5).unwrap() - 0.25).abs() < 1e-9);
        assert!(calibrate_p_for_target(0.0).is_err());
        assert!(calibrate_p_for_target(4.5).is_err());
        assert!(calibrate_p_for_target(f64::NAN).is_err());
    }
}

// Copyright 2026 The ghzsim Developers
// SPDX-License-Identifier: Apache-2.0

//! Deterministic response functions and the classical Mermin bound.
//!
//! A register hidden value fixes, for each entangled qubit and each local
//! setting, an outcome `±1`. "Primed" is the phase-gate setting. With
//! `a_k` / `a'_k` the responses of qubit `k`,
//!
//! ```text
//! M3 = a'_1 a_2 a_3 + a_1 a'_2 a_3 + a_1 a_2 a'_3 - a'_1 a'_2 a'_3
//! ```

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::experiments::ExperimentId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Setting {
    Identity,
    PhaseGate,
}

impl Setting {
    fn index(self) -> usize {
        match self {
            Setting::Identity => 0,
            Setting::PhaseGate => 1,
        }
    }
}

/// Which phase gates the assistants impose on the register.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SettingCombination {
    /// Only the experiment's single-gate qubit is phased.
    NonOdd,
    /// All three register qubits are phased.
    Odd,
}

impl SettingCombination {
    pub fn settings(self, experiment: ExperimentId) -> [Setting; 3] {
        let b = experiment.index();
        std::array::from_fn(|k| match self {
            SettingCombination::Odd => Setting::PhaseGate,
            SettingCombination::NonOdd if k == b => Setting::PhaseGate,
            SettingCombination::NonOdd => Setting::Identity,
        })
    }

    /// Product sign predicted for an ideal GHZ-like register.
    pub fn quantum_sign(self) -> i8 {
        match self {
            SettingCombination::NonOdd => 1,
            SettingCombination::Odd => -1,
        }
    }
}

/// Outcomes of the three register qubits under both settings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Strategy {
    /// `responses[k][s]`: qubit `k+1` under setting `s` (0 identity, 1 phase).
    responses: [[i8; 2]; 3],
}

impl Strategy {
    pub const COUNT: u8 = 64;

    pub fn new(responses: [[i8; 2]; 3]) -> Result<Self> {
        if responses.iter().flatten().any(|&r| r != 1 && r != -1) {
            return Err(Error::invalid("responses must be +1 or -1"));
        }
        Ok(Self { responses })
    }

    /// Strategy `index` in `0..64`; bit `2k + s` set means qubit `k+1`
    /// answers `-1` under setting `s`.
    pub fn from_index(index: u8) -> Result<Self> {
        if index >= Self::COUNT {
            return Err(Error::invalid(format!("strategy index {index} >= 64")));
        }
        let responses = std::array::from_fn(|k| {
            std::array::from_fn(|s| if index >> (2 * k + s) & 1 == 1 { -1 } else { 1 })
        });
        Ok(Self { responses })
    }

    pub fn all() -> impl Iterator<Item = Strategy> {
        (0..Self::COUNT).map(|i| Self::from_index(i).expect("in range"))
    }

    pub fn response(&self, qubit: usize, setting: Setting) -> i8 {
        self.responses[qubit][setting.index()]
    }

    /// Same strategy with one response negated.
    pub fn flipped(&self, qubit: usize, setting: Setting) -> Self {
        let mut responses = self.responses;
        responses[qubit][setting.index()] *= -1;
        Self { responses }
    }

    pub fn product(&self, settings: [Setting; 3]) -> i8 {
        (0..3).map(|k| self.response(k, settings[k])).product()
    }

    pub fn mermin_value(&self) -> i32 {
        let [p, i] = [Setting::PhaseGate, Setting::Identity];
        i32::from(self.product([p, i, i]))
            + i32::from(self.product([i, p, i]))
            + i32::from(self.product([i, i, p]))
            - i32::from(self.product([p, p, p]))
    }
}

/// Extremes of `M3` over all 64 deterministic strategies.
pub fn classical_bound_oracle() -> (f64, f64) {
    let values = Strategy::all().map(|s| s.mermin_value());
    let (min, max) = values.fold((i32::MAX, i32::MIN), |(lo, hi), v| (lo.min(v), hi.max(v)));
    (f64::from(min), f64::from(max))
}

/// Register responses per register hidden value, and the setting type chosen
/// per selector hidden value. The first assistant's hidden values never enter:
/// its only role is fixing which qubit gets the single gate, which is the
/// experiment id.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HvResponseModel {
    responses: BTreeMap<String, Strategy>,
    setting_rule: BTreeMap<String, SettingCombination>,
}

impl HvResponseModel {
    pub fn new(
        responses: BTreeMap<String, Strategy>,
        setting_rule: BTreeMap<String, SettingCombination>,
    ) -> Result<Self> {
        if responses.is_empty() || setting_rule.is_empty() {
            return Err(Error::invalid("response model needs register and selector values"));
        }
        Ok(Self { responses, setting_rule })
    }

    pub fn setting(&self, selector: &str) -> Result<SettingCombination> {
        self.setting_rule
            .get(selector)
            .copied()
            .ok_or_else(|| Error::invalid(format!("no setting rule for {selector:?}")))
    }

    pub fn strategy(&self, register: &str) -> Result<&Strategy> {
        self.responses
            .get(register)
            .ok_or_else(|| Error::invalid(format!("no responses for {register:?}")))
    }

    /// Register outcomes `(q1, q2, q3)` for one shot.
    pub fn outcome(&self, experiment: ExperimentId, register: &str, selector: &str) -> Result<[i8; 3]> {
        let settings = self.setting(selector)?.settings(experiment);
        let s = self.strategy(register)?;
        Ok(std::array::from_fn(|k| s.response(k, settings[k])))
    }

    /// Mermin value when every `(register, selector)` pair in `pairs` occurs
    /// equally often in each experiment.
    pub fn mermin_average(&self, pairs: &[(String, String)]) -> Result<f64> {
        let mut nosc = [0.0; 3];
        let mut osc = [0.0; 3];
        for experiment in ExperimentId::ALL {
            let mut sums = [(0i64, 0u64); 2];
            for (n, e) in pairs {
                let sc = self.setting(e)?;
                let product: i8 = self.outcome(experiment, n, e)?.iter().product();
                let slot = &mut sums[usize::from(sc == SettingCombination::Odd)];
                slot.0 += i64::from(product);
                slot.1 += 1;
            }
            let avg = |(sum, count): (i64, u64)| {
                if count == 0 {
                    Err(Error::UndefinedAverage("a setting combination never occurs".into()))
                } else {
                    Ok(sum as f64 / count as f64)
                }
            };
            nosc[experiment.index()] = avg(sums[0])?;
            osc[experiment.index()] = avg(sums[1])?;
        }
        let total_osc = crate::analysis::total_osc_average(osc);
        Ok(crate::analysis::mermin_m3(nosc, total_osc))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bound_is_two() {
        assert_eq!(classical_bound_oracle(), (-2.0, 2.0));
    }

    #[test]
    fn all_plus_gives_two() {
        let s = Strategy::new([[1, 1]; 3]).unwrap();
        assert_eq!(s.mermin_value(), 2);
        assert_eq!(Strategy::from_index(0).unwrap(), s);
    }

    #[test]
    fn single_flip_changes_by_even_amount() {
        for s in Strategy::all() {
            for k in 0..3 {
                let delta = s.flipped(k, Setting::PhaseGate).mermin_value() - s.mermin_value();
                assert_eq!(delta % 2, 0);
            }
        }
    }

    #[test]
    fn strategies_are_distinct() {
        let all: std::collections::HashSet<_> = Strategy::all().collect();
        assert_eq!(all.len(), 64);
        assert!(Strategy::from_index(64).is_err());
        assert!(Strategy::new([[1, 0], [1, 1], [1, 1]]).is_err());
    }

    #[test]
    fn settings_per_combination() {
        let id = ExperimentId::new(2).unwrap();
        use Setting::{Identity as I, PhaseGate as P};
        assert_eq!(SettingCombination::NonOdd.settings(id), [I, P, I]);
        assert_eq!(SettingCombination::Odd.settings(id), [P, P, P]);
    }
}

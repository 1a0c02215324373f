// Copyright 2026 The ghzsim Developers
// SPDX-License-Identifier: Apache-2.0

//! Arranged/disarranged mixture sampler.
//!
//! Each shot is arranged with probability `f_A`: its register parity matches
//! the imposed setting (even for one gate, odd for three). Otherwise the
//! parity is a fair coin independent of the setting. Every average product
//! then has mean `f_A · (±1)` and the Mermin value has mean `4 f_A`.

use rand::Rng;
use rayon::prelude::*;

use crate::analysis::CountsTable;
use crate::error::{Error, Result};
use crate::experiments::ExperimentId;
use crate::hv::strategy::SettingCombination;
use crate::rng::{Domain, StreamKey};

const EVEN_REGISTERS: [u8; 4] = [0b000, 0b011, 0b101, 0b110];
const ODD_REGISTERS: [u8; 4] = [0b001, 0b010, 0b100, 0b111];

fn check_fraction(f: f64) -> Result<()> {
    if (0.0..=1.0).contains(&f) {
        Ok(())
    } else {
        Err(Error::invalid(format!("arranged fraction {f} outside [0, 1]")))
    }
}

/// Draws `shots_per_sc` shots for each setting combination of each
/// experiment. `q0` always reads 1 and `q4` reports the combination.
pub fn sample_hv_shots(arranged_fraction: f64, shots_per_sc: u64, seed: u64) -> Result<[CountsTable; 3]> {
    check_fraction(arranged_fraction)?;
    let tables = ExperimentId::ALL.map(|id| {
        let key = StreamKey::new(seed, Domain::HiddenVariables(u32::from(id.value())));
        let histogram = (0..2 * shots_per_sc)
            .into_par_iter()
            .fold(
                || [0u64; 32],
                |mut hist, i| {
                    let sc = if i < shots_per_sc {
                        SettingCombination::NonOdd
                    } else {
                        SettingCombination::Odd
                    };
                    let mut rng = key.shot(i);
                    let arranged = rng.random::<f64>() < arranged_fraction;
                    let even = if arranged {
                        sc.quantum_sign() > 0
                    } else {
                        rng.random::<bool>()
                    };
                    let pool = if even { &EVEN_REGISTERS } else { &ODD_REGISTERS };
                    let register = pool[rng.random_range(0..4)];
                    let q4 = u8::from(sc == SettingCombination::Odd);
                    hist[usize::from((q4 << 4) | (register << 1) | 1)] += 1;
                    hist
                },
            )
            .reduce(|| [0u64; 32], |a, b| std::array::from_fn(|k| a[k] + b[k]));
        CountsTable::from_histogram(&histogram)
    });
    Ok(tables)
}

/// `m3 / 4`: the arranged fraction implied by a Mermin value.
pub fn estimate_arranged_fraction(m3: f64) -> Result<f64> {
    if !(-4.0..=4.0).contains(&m3) {
        return Err(Error::invalid(format!("m3 {m3} outside [-4, 4]")));
    }
    Ok(m3 / 4.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::analyze_counts;

    #[test]
    fn fully_arranged_gives_four() {
        let tables = sample_hv_shots(1.0, 500, 3).unwrap();
        let report = analyze_counts(&tables).unwrap();
        assert_eq!(report.m3, 4.0);
        assert_eq!(report.discard_fraction, 0.0);
        assert!(tables.iter().all(|t| t.total_shots() == 1000));
    }

    #[test]
    fn deterministic_per_seed() {
        assert_eq!(sample_hv_shots(0.4, 300, 8).unwrap(), sample_hv_shots(0.4, 300, 8).unwrap());
        assert_ne!(sample_hv_shots(0.4, 300, 8).unwrap(), sample_hv_shots(0.4, 300, 9).unwrap());
    }

    #[test]
    fn fraction_validation() {
        assert!(sample_hv_shots(1.5, 10, 0).is_err());
        assert!(sample_hv_shots(-0.1, 10, 0).is_err());
    }

    #[test]
    fn estimate_examples() {
        assert_eq!(estimate_arranged_fraction(4.0).unwrap(), 1.0);
        assert_eq!(estimate_arranged_fraction(0.0).unwrap(), 0.0);
        assert!((estimate_arranged_fraction(2.235863182).unwrap() - 0.558965796).abs() < 1e-9);
        assert!(estimate_arranged_fraction(4.1).is_err());
    }
}

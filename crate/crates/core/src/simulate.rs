// Copyright 2026 The ghzsim Developers
// SPDX-License-Identifier: Apache-2.0

//! Shot simulation of the three experiments with optional readout noise.

use rayon::prelude::*;

use crate::analysis::{CountsTable, SHOT_WIDTH};
use crate::error::Result;
use crate::experiments::{build_experiment, ExperimentId};
use crate::noise::{apply_readout_noise, NoiseModel};
use crate::qsim::ShotSampler;
use crate::rng::{Domain, StreamKey};

/// Counts for `shots` runs of one experiment.
///
/// Shot `i` draws its ideal outcome from the `Shots` substream `i` and its
/// readout flips from the `Readout` substream `i`, so the result does not
/// depend on thread count.
pub fn simulate_counts(id: ExperimentId, shots: u64, seed: u64, noise: &NoiseModel) -> Result<CountsTable> {
    let sampler = ShotSampler::new(&build_experiment(id))?;
    let tag = u32::from(id.value());
    let shot_key = StreamKey::new(seed, Domain::Shots(tag));
    let readout_key = StreamKey::new(seed, Domain::Readout(tag));
    let histogram = (0..shots)
        .into_par_iter()
        .fold(
            || [0u64; 1 << SHOT_WIDTH],
            |mut hist, i| {
                let mut shot = sampler.sample(&mut shot_key.shot(i));
                if !noise.is_noiseless() {
                    shot = apply_readout_noise(shot, noise, &mut readout_key.shot(i));
                }
                hist[usize::from(shot.bits())] += 1;
                hist
            },
        )
        .reduce(|| [0u64; 1 << SHOT_WIDTH], |a, b| std::array::from_fn(|k| a[k] + b[k]));
    Ok(CountsTable::from_histogram(&histogram))
}

/// [`simulate_counts`] for experiments 1, 2 and 3.
pub fn simulate_all(shots: u64, seed: u64, noise: &NoiseModel) -> Result<[CountsTable; 3]> {
    let [a, b, c] = ExperimentId::ALL.map(|id| simulate_counts(id, shots, seed, noise));
    Ok([a?, b?, c?])
}

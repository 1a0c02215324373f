// Copyright 2026 The ghzsim Developers
// SPDX-License-Identifier: Apache-2.0

use ghzsim::analysis::analyze_counts;
use ghzsim::experiments::{build_experiment, decomposed_schedule, transpiled_schedule, ExperimentId};
use ghzsim::noise::{expected_m3_under_readout, NoiseModel};
use ghzsim::qsim::{final_state, sample_shot_sequential, ShotSampler};
use ghzsim::rng::{Domain, StreamKey};
use ghzsim::simulate::{simulate_all, simulate_counts};
use num_complex::Complex64;

const EVEN: [usize; 4] = [0b000, 0b011, 0b101, 0b110];
const ODD: [usize; 4] = [0b001, 0b010, 0b100, 0b111];

fn half_on(support: [usize; 4]) -> Vec<Complex64> {
    (0..8)
        .map(|i| Complex64::new(if support.contains(&i) { 0.5 } else { 0.0 }, 0.0))
        .collect()
}

fn max_error(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

#[test]
fn register_states_conditioned_on_assistants() {
    for id in ExperimentId::ALL {
        for circuit in [build_experiment(id), transpiled_schedule(id), decomposed_schedule(id)] {
            let state = final_state(&circuit).unwrap();
            let even = state.conditional_register(&[(0, true), (4, false)], &[1, 2, 3]).unwrap();
            let odd = state.conditional_register(&[(0, true), (4, true)], &[1, 2, 3]).unwrap();
            assert!(max_error(&even, &half_on(EVEN)) < 1e-12, "{}", circuit.label());
            assert!(max_error(&odd, &half_on(ODD)) < 1e-12, "{}", circuit.label());
            assert!(state.conditional_register(&[(0, false), (4, false)], &[1, 2, 3]).is_err());
        }
    }
}

#[test]
fn second_assistant_is_a_fair_coin() {
    for id in ExperimentId::ALL {
        let p = final_state(&build_experiment(id)).unwrap().prob_one(4);
        assert!((p - 0.5).abs() < 1e-12);
    }
}

fn tvd(a: &[f64], b: &[f64]) -> f64 {
    0.5 * a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum::<f64>()
}

#[test]
fn collapse_path_matches_final_state_distribution() {
    const SHOTS: u64 = 100_000;
    let circuit = build_experiment(ExperimentId::new(2).unwrap());
    let exact = final_state(&circuit).unwrap().probabilities();
    let key = StreamKey::new(77, Domain::Shots(2));
    let mut sequential = vec![0.0; exact.len()];
    for i in 0..SHOTS {
        let shot = sample_shot_sequential(&circuit, &mut key.shot(i)).unwrap();
        sequential[usize::from(shot.bits())] += 1.0 / SHOTS as f64;
    }
    let mut deferred = vec![0.0; exact.len()];
    for shot in ShotSampler::new(&circuit).unwrap().sample_many(key, SHOTS) {
        deferred[usize::from(shot.bits())] += 1.0 / SHOTS as f64;
    }
    assert!(tvd(&sequential, &exact) < 0.02);
    assert!(tvd(&deferred, &exact) < 0.02);
    assert!(tvd(&sequential, &deferred) < 0.02);
}

#[test]
fn parallel_sampling_equals_serial_loop() {
    let sampler = ShotSampler::new(&build_experiment(ExperimentId::new(1).unwrap())).unwrap();
    let key = StreamKey::new(3, Domain::Shots(1));
    let serial: Vec<_> = (0..5000).map(|i| sampler.sample(&mut key.shot(i))).collect();
    assert_eq!(sampler.sample_many(key, 5000), serial);
}

#[test]
fn counts_do_not_depend_on_thread_count() {
    let noise = NoiseModel::uniform(&[0, 1, 2, 3], 0.07).unwrap();
    let id = ExperimentId::new(3).unwrap();
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| simulate_counts(id, 20_000, 123, &noise).unwrap())
    };
    assert_eq!(run(1), run(4));
}

#[test]
fn noiseless_support_is_the_eight_expected_keys() {
    let table = simulate_counts(ExperimentId::new(1).unwrap(), 8000, 42, &NoiseModel::noiseless()).unwrap();
    let keys: Vec<&str> = table.support().collect();
    assert_eq!(
        keys,
        ["00001", "00111", "01011", "01101", "10011", "10101", "11001", "11111"]
    );
}

#[test]
fn readout_noise_tracks_the_analytic_curve() {
    for p in [0.0, 0.05, 0.1, 0.2] {
        let noise = NoiseModel::uniform(&[1, 2, 3], p).unwrap();
        let report = analyze_counts(&simulate_all(8000, 2024, &noise).unwrap()).unwrap();
        let expected = expected_m3_under_readout(p).unwrap();
        let sigma = report.m3_standard_error();
        assert!((report.m3 - expected).abs() <= 3.0 * sigma.max(1e-12), "p={p} m3={} sigma={sigma}", report.m3);
    }
}

#[test]
fn q0_flips_only_discard() {
    let noise = NoiseModel::noiseless().with_flip(0, 0.2).unwrap();
    let report = analyze_counts(&simulate_all(8000, 5, &noise).unwrap()).unwrap();
    assert_eq!(report.m3, 4.0);
    let n: f64 = 24_000.0;
    let sigma = (0.2 * 0.8 / n).sqrt();
    assert!((report.discard_fraction - 0.2).abs() < 3.0 * sigma);
}

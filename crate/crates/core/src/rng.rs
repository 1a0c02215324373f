// Copyright 2026 The ghzsim Developers
// SPDX-License-Identifier: Apache-2.0

//! Counter-based random substreams.
//!
//! Every random draw in the crate comes from a stream keyed by
//! `(seed, domain, index)`. The domain separates independent uses of the
//! same seed (shot sampling for experiment 2, readout noise for experiment 2,
//! hidden-variable sampling, ...) and the index is the shot number. A shot's
//! draws therefore never depend on scheduling, so serial and parallel runs
//! produce identical records.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Purpose tag mixed into the stream key.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Domain {
    /// Final-state sampling for the given experiment/circuit slot.
    Shots(u32),
    /// Readout bit flips for the given slot.
    Readout(u32),
    /// Hidden-variable mixture sampling for the given slot.
    HiddenVariables(u32),
}

impl Domain {
    fn tag(self) -> u64 {
        match self {
            Domain::Shots(i) => (1 << 32) | u64::from(i),
            Domain::Readout(i) => (2 << 32) | u64::from(i),
            Domain::HiddenVariables(i) => (3 << 32) | u64::from(i),
        }
    }
}

/// Stream factory for one `(seed, domain)` pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StreamKey {
    seed: u64,
    domain: Domain,
}

impl StreamKey {
    pub fn new(seed: u64, domain: Domain) -> Self {
        Self { seed, domain }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Independent generator for shot `index`.
    pub fn shot(&self, index: u64) -> ChaCha8Rng {
        let mut key = [0u8; 32];
        key[..8].copy_from_slice(&self.seed.to_le_bytes());
        key[8..16].copy_from_slice(&self.domain.tag().to_le_bytes());
        let mut rng = ChaCha8Rng::from_seed(key);
        rng.set_stream(index);
        rng
    }
}

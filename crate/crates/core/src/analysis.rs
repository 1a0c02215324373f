// Copyright 2026 The ghzsim Developers
// SPDX-License-Identifier: Apache-2.0

//! Shot classification, signed tallies and the Mermin value.
//!
//! A shot is classified by its assistants: `q0 = 0` is discarded, otherwise
//! `q4` says whether one phase gate (non-odd setting, `q4 = 0`) or three
//! (odd setting, `q4 = 1`) were imposed. The register's parity sign is
//! `+1` for an even number of ones, `-1` for odd. Each setting's average is
//! `(N_plus + N_minus) / (|N_plus| + |N_minus|)` with `N_minus` stored
//! negative, and
//!
//! ```text
//! M3 = Σ_experiments avg(non-odd) - mean_experiments avg(odd)
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qsim::ShotRecord;

pub const SHOT_WIDTH: usize = 5;

/// `+1` for an even number of ones among the three register bits, else `-1`.
pub fn parity_sign(bits: [u8; 3]) -> i8 {
    if bits.iter().map(|&b| b & 1).sum::<u8>() % 2 == 0 {
        1
    } else {
        -1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Classification {
    /// One phase gate imposed (`c0 = 1`, `c4 = 0`).
    NonOddSc,
    /// Three phase gates imposed (`c0 = 1`, `c4 = 1`).
    OddSc,
    /// First assistant read 0; no setting combination can be inferred.
    Discarded,
}

pub fn classify_shot(shot: &ShotRecord) -> Classification {
    match (shot.bit(0), shot.bit(4)) {
        (0, _) => Classification::Discarded,
        (_, 0) => Classification::NonOddSc,
        _ => Classification::OddSc,
    }
}

fn register_bits(shot: &ShotRecord) -> [u8; 3] {
    [shot.bit(1), shot.bit(2), shot.bit(3)]
}

/// Joint outcome frequencies keyed `"c4 c3 c2 c1 c0"`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawCountsTable")]
pub struct CountsTable {
    counts: BTreeMap<String, u64>,
    total_shots: u64,
}

#[derive(Deserialize)]
struct RawCountsTable {
    counts: BTreeMap<String, u64>,
    total_shots: u64,
}

impl TryFrom<RawCountsTable> for CountsTable {
    type Error = Error;

    fn try_from(raw: RawCountsTable) -> Result<Self> {
        let table = CountsTable { counts: raw.counts, total_shots: raw.total_shots };
        table.validate()?;
        Ok(table)
    }
}

fn check_key(key: &str) -> Result<()> {
    if key.len() == SHOT_WIDTH && key.bytes().all(|b| b == b'0' || b == b'1') {
        Ok(())
    } else {
        Err(Error::DataFormat(format!("count key {key:?} is not a 5-bit string")))
    }
}

impl CountsTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_shots<'a>(shots: impl IntoIterator<Item = &'a ShotRecord>) -> Result<Self> {
        let mut table = Self::new();
        for shot in shots {
            table.record(shot)?;
        }
        Ok(table)
    }

    /// Table from a dense histogram indexed by the five-bit outcome.
    pub fn from_histogram(histogram: &[u64; 1 << SHOT_WIDTH]) -> Self {
        let mut table = Self::new();
        for (bits, &n) in histogram.iter().enumerate() {
            table.add(&format!("{bits:05b}"), n).expect("five-bit key");
        }
        table
    }

    pub fn record(&mut self, shot: &ShotRecord) -> Result<()> {
        if shot.num_qubits() != SHOT_WIDTH {
            return Err(Error::invalid(format!(
                "counts tables hold {SHOT_WIDTH}-qubit shots, got {}",
                shot.num_qubits()
            )));
        }
        self.add(&shot.key(), 1)
    }

    pub fn add(&mut self, key: &str, count: u64) -> Result<()> {
        check_key(key)?;
        if count > 0 {
            *self.counts.entry(key.to_owned()).or_default() += count;
            self.total_shots += count;
        }
        Ok(())
    }

    pub fn merge(&mut self, other: &CountsTable) {
        for (k, &v) in &other.counts {
            *self.counts.entry(k.clone()).or_default() += v;
        }
        self.total_shots += other.total_shots;
    }

    pub fn validate(&self) -> Result<()> {
        self.counts.keys().try_for_each(|k| check_key(k))?;
        let sum: u64 = self.counts.values().sum();
        if sum != self.total_shots {
            return Err(Error::DataFormat(format!(
                "counts sum to {sum} but total_shots is {}",
                self.total_shots
            )));
        }
        Ok(())
    }

    pub fn counts(&self) -> &BTreeMap<String, u64> {
        &self.counts
    }

    pub fn get(&self, key: &str) -> u64 {
        self.counts.get(key).copied().unwrap_or(0)
    }

    pub fn total_shots(&self) -> u64 {
        self.total_shots
    }

    pub fn is_empty(&self) -> bool {
        self.total_shots == 0
    }

    /// Keys with a non-zero count.
    pub fn support(&self) -> impl Iterator<Item = &str> {
        self.counts.iter().filter(|(_, &v)| v > 0).map(|(k, _)| k.as_str())
    }
}

/// Signed tallies for one setting combination: `plus >= 0`, `minus <= 0`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SettingTally {
    pub plus: i64,
    pub minus: i64,
}

impl SettingTally {
    pub fn shots(&self) -> u64 {
        self.plus.unsigned_abs() + self.minus.unsigned_abs()
    }

    pub fn average(&self) -> Result<f64> {
        setting_average(self.plus, self.minus)
    }

    fn push(&mut self, sign: i8) {
        if sign > 0 {
            self.plus += 1;
        } else {
            self.minus -= 1;
        }
    }

    fn add_n(&mut self, sign: i8, n: u64) {
        let n = n as i64;
        if sign > 0 {
            self.plus += n;
        } else {
            self.minus -= n;
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExperimentTally {
    pub nosc: SettingTally,
    pub osc: SettingTally,
    pub discarded: u64,
}

impl ExperimentTally {
    pub fn total_shots(&self) -> u64 {
        self.nosc.shots() + self.osc.shots() + self.discarded
    }

    pub fn record(&mut self, shot: &ShotRecord) {
        let sign = parity_sign(register_bits(shot));
        match classify_shot(shot) {
            Classification::NonOddSc => self.nosc.push(sign),
            Classification::OddSc => self.osc.push(sign),
            Classification::Discarded => self.discarded += 1,
        }
    }
}

/// Classifies and signs every key of `table`.
pub fn tally_counts(table: &CountsTable) -> Result<ExperimentTally> {
    table.validate()?;
    let mut tally = ExperimentTally::default();
    for (key, &n) in table.counts() {
        let shot = ShotRecord::from_key(key)?;
        let sign = parity_sign(register_bits(&shot));
        match classify_shot(&shot) {
            Classification::NonOddSc => tally.nosc.add_n(sign, n),
            Classification::OddSc => tally.osc.add_n(sign, n),
            Classification::Discarded => tally.discarded += n,
        }
    }
    Ok(tally)
}

/// `(N_nonodd + N_odd) / (|N_nonodd| + |N_odd|)` on signed counts.
pub fn setting_average(n_expected_sign_total: i64, n_opposite_sign_total: i64) -> Result<f64> {
    let denom = n_expected_sign_total.unsigned_abs() + n_opposite_sign_total.unsigned_abs();
    if denom == 0 {
        return Err(Error::UndefinedAverage("setting combination has no shots".into()));
    }
    Ok((n_expected_sign_total + n_opposite_sign_total) as f64 / denom as f64)
}

pub fn total_osc_average(osc_averages: [f64; 3]) -> f64 {
    osc_averages.iter().sum::<f64>() / 3.0
}

pub fn mermin_m3(nosc_averages: [f64; 3], total_osc: f64) -> f64 {
    nosc_averages.iter().sum::<f64>() - total_osc
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SettingSummary {
    pub plus: i64,
    pub minus: i64,
    pub average: f64,
}

impl SettingSummary {
    fn from_tally(t: SettingTally) -> Result<Self> {
        Ok(Self { plus: t.plus, minus: t.minus, average: t.average()? })
    }

    fn shots(&self) -> u64 {
        self.plus.unsigned_abs() + self.minus.unsigned_abs()
    }

    /// Squared standard error of a ±1 mean.
    fn variance_of_mean(&self) -> f64 {
        (1.0 - self.average * self.average) / self.shots() as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSummary {
    pub nosc: SettingSummary,
    pub osc: SettingSummary,
    pub discarded: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MerminReport {
    pub experiments: [ExperimentSummary; 3],
    pub total_osc_average: f64,
    pub m3: f64,
    pub discard_fraction: f64,
}

impl MerminReport {
    pub fn nosc_averages(&self) -> [f64; 3] {
        self.experiments.map(|e| e.nosc.average)
    }

    pub fn osc_averages(&self) -> [f64; 3] {
        self.experiments.map(|e| e.osc.average)
    }

    pub fn total_shots(&self) -> u64 {
        self.experiments.iter().map(|e| e.nosc.shots() + e.osc.shots() + e.discarded).sum()
    }

    pub fn discarded(&self) -> u64 {
        self.experiments.iter().map(|e| e.discarded).sum()
    }

    /// Recomputes `m3` from the stored averages.
    pub fn m3_from_fields(&self) -> f64 {
        mermin_m3(self.nosc_averages(), self.total_osc_average)
    }

    /// Shot-noise standard error of `m3`, treating every setting average as
    /// an independent mean of ±1 outcomes.
    pub fn m3_standard_error(&self) -> f64 {
        let nosc: f64 = self.experiments.iter().map(|e| e.nosc.variance_of_mean()).sum();
        let osc: f64 = self.experiments.iter().map(|e| e.osc.variance_of_mean()).sum();
        (nosc + osc / 9.0).sqrt()
    }

    /// Per-experiment summary table: sums, totals, averages and `<M3>`.
    pub fn render_table(&self) -> String {
        let row = |label: &str, f: &dyn Fn(&ExperimentSummary) -> String| {
            let cells: String = self.experiments.iter().map(|e| format!("{:>20}", f(e))).collect();
            format!("{label:<20}{cells}\n")
        };
        let mut out = String::new();
        out += &format!("{:<20}{:>20}{:>20}{:>20}\n", "", "EXPERIMENT 1", "EXPERIMENT 2", "EXPERIMENT 3");
        out += &row("one P gate sums", &|e| format!("{} {}", e.nosc.plus, e.nosc.minus));
        out += &row("  total", &|e| e.nosc.shots().to_string());
        out += &row("  average product", &|e| format!("{:.9}", e.nosc.average));
        out += &row("three P gate sums", &|e| format!("{} {}", e.osc.minus, e.osc.plus));
        out += &row("  total", &|e| e.osc.shots().to_string());
        out += &row("  average product", &|e| format!("{:.9}", e.osc.average));
        out += &row("discarded", &|e| e.discarded.to_string());
        let _ = writeln!(out, "total odd average = {:.9}", self.total_osc_average);
        let _ = writeln!(out, "discard fraction  = {:.9}", self.discard_fraction);
        let _ = writeln!(out, "<M3> = {:.9}", self.m3);
        out
    }
}

pub fn analyze_tallies(tallies: &[ExperimentTally; 3]) -> Result<MerminReport> {
    let mut experiments = Vec::with_capacity(3);
    for (i, t) in tallies.iter().enumerate() {
        let wrap = |e: Error| match e {
            Error::UndefinedAverage(m) => Error::UndefinedAverage(format!("experiment {}: {m}", i + 1)),
            other => other,
        };
        experiments.push(ExperimentSummary {
            nosc: SettingSummary::from_tally(t.nosc).map_err(wrap)?,
            osc: SettingSummary::from_tally(t.osc).map_err(wrap)?,
            discarded: t.discarded,
        });
    }
    let experiments: [ExperimentSummary; 3] = experiments.try_into().expect("three experiments");
    let total_osc = total_osc_average(experiments.map(|e| e.osc.average));
    let m3 = mermin_m3(experiments.map(|e| e.nosc.average), total_osc);
    let total: u64 = tallies.iter().map(ExperimentTally::total_shots).sum();
    let discarded: u64 = tallies.iter().map(|t| t.discarded).sum();
    Ok(MerminReport {
        experiments,
        total_osc_average: total_osc,
        m3,
        discard_fraction: discarded as f64 / total as f64,
    })
}

pub fn analyze_counts(tables: &[CountsTable; 3]) -> Result<MerminReport> {
    if let Some(i) = tables.iter().position(CountsTable::is_empty) {
        return Err(Error::UndefinedAverage(format!("experiment {} has no shots", i + 1)));
    }
    let tallies = [tally_counts(&tables[0])?, tally_counts(&tables[1])?, tally_counts(&tables[2])?];
    analyze_tallies(&tallies)
}

/// Hardware per-setting tallies bundled with the crate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TallyFixture {
    #[serde(default)]
    pub description: String,
    pub shots_per_experiment: u64,
    pub experiments: [ExperimentTally; 3],
}

impl TallyFixture {
    pub fn from_json(text: &str) -> Result<Self> {
        let fixture: Self =
            serde_json::from_str(text).map_err(|e| Error::DataFormat(e.to_string()))?;
        for (i, t) in fixture.experiments.iter().enumerate() {
            if t.nosc.plus < 0 || t.osc.plus < 0 || t.nosc.minus > 0 || t.osc.minus > 0 {
                return Err(Error::DataFormat(format!("experiment {}: tally signs are wrong", i + 1)));
            }
            if t.total_shots() != fixture.shots_per_experiment {
                return Err(Error::DataFormat(format!(
                    "experiment {}: tallies cover {} shots, expected {}",
                    i + 1,
                    t.total_shots(),
                    fixture.shots_per_experiment
                )));
            }
        }
        Ok(fixture)
    }
}

pub const TABLE1_JSON: &str = include_str!("../fixtures/table1.json");

pub fn table1_fixture() -> TallyFixture {
    TallyFixture::from_json(TABLE1_JSON).expect("bundled fixture is valid")
}

/// Writes `path` as `bitstring,count` CSV sorted by key and a JSON mirror
/// next to it (same stem, `.json`). Returns the mirror's path.
pub fn export_histogram(table: &CountsTable, path: &Path) -> Result<PathBuf> {
    table.validate()?;
    let mut writer = csv::Writer::from_path(path)?;
    writer.write_record(["bitstring", "count"])?;
    for (key, count) in table.counts() {
        writer.write_record([key.as_str(), &count.to_string()])?;
    }
    writer.flush()?;
    let mirror = path.with_extension("json");
    fs::write(&mirror, serde_json::to_string_pretty(table)? + "\n")?;
    Ok(mirror)
}

pub fn import_histogram(path: &Path) -> Result<CountsTable> {
    let mut reader = csv::Reader::from_path(path)?;
    let headers = reader.headers()?.clone();
    if headers.iter().collect::<Vec<_>>() != ["bitstring", "count"] {
        return Err(Error::DataFormat(format!("unexpected CSV header {headers:?}")));
    }
    let mut table = CountsTable::new();
    for row in reader.records() {
        let row = row?;
        let count: u64 = row[1]
            .parse()
            .map_err(|_| Error::DataFormat(format!("bad count {:?}", &row[1])))?;
        table.add(&row[0], count)?;
    }
    Ok(table)
}

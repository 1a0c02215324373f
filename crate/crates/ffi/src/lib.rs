// Copyright 2026 The ghzsim Developers
// SPDX-License-Identifier: Apache-2.0

//! C ABI over `ghzsim`.
//!
//! Every fallible call returns a [`GhzStatus`] and writes results through
//! out-pointers. On failure the thread-local message from [`ghz_last_error`]
//! describes the cause. Handles are opaque and must be released with the
//! matching `*_free` function.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use ghzsim::analysis::{analyze_counts, analyze_tallies, table1_fixture, CountsTable, MerminReport, TallyFixture};
use ghzsim::experiments::ExperimentId;
use ghzsim::hv::{classical_bound_oracle, derive_environment_relation, sample_hv_shots, ArrangementKind};
use ghzsim::noise::{calibrate_p_for_target, expected_m3_under_readout, NoiseModel};
use ghzsim::qsim::MAX_QUBITS;
use ghzsim::simulate::simulate_counts;
use ghzsim::Error;

pub const GHZ_ABI_VERSION: u32 = 1;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GhzStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Config = 3,
    UndefinedAverage = 4,
    DataFormat = 5,
    Io = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GhzArrangement {
    Arranged = 0,
    Disarranged = 1,
    Unrelated = 2,
    Mixed = 3,
}

/// Outcome counts of one experiment.
pub struct GhzCounts(CountsTable);

/// Mermin report over three experiments.
pub struct GhzReport(MerminReport);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let msg = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(msg));
}

fn status_of(err: &Error) -> GhzStatus {
    match err {
        Error::InvalidArgument(_) => GhzStatus::InvalidArgument,
        Error::Config(_) => GhzStatus::Config,
        Error::UndefinedAverage(_) => GhzStatus::UndefinedAverage,
        Error::DataFormat(_) | Error::Json(_) | Error::Csv(_) => GhzStatus::DataFormat,
        Error::Io(_) => GhzStatus::Io,
    }
}

enum Fail {
    Null(&'static str),
    Core(Error),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Core(e)
    }
}

fn guard(body: impl FnOnce() -> Result<(), Fail>) -> GhzStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
            GhzStatus::Ok
        }
        Ok(Err(Fail::Null(name))) => {
            set_last_error(format!("{name} is null"));
            GhzStatus::NullPointer
        }
        Ok(Err(Fail::Core(e))) => {
            set_last_error(e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_last_error("internal panic".into());
            GhzStatus::Panic
        }
    }
}

unsafe fn out_ref<'a, T>(p: *mut T, name: &'static str) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or(Fail::Null(name))
}

unsafe fn in_ref<'a, T>(p: *const T, name: &'static str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or(Fail::Null(name))
}

unsafe fn in_str<'a>(p: *const c_char, name: &'static str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail::Null(name));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail::Core(Error::InvalidArgument(format!("{name} is not UTF-8"))))
}

#[no_mangle]
pub extern "C" fn ghz_abi_version() -> u32 {
    GHZ_ABI_VERSION
}

/// Message for the last failed call on this thread, or null. Valid until the
/// next call on the same thread.
#[no_mangle]
pub extern "C" fn ghz_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |m| m.as_ptr()))
}

/// Simulates `shots` runs of `experiment` (1, 2 or 3).
///
/// `readout_flip` holds `flip_len` per-qubit flip probabilities starting at
/// q0, or is null for a noiseless readout.
#[no_mangle]
pub unsafe extern "C" fn ghz_simulate(
    experiment: u8,
    shots: u64,
    seed: u64,
    readout_flip: *const f64,
    flip_len: usize,
    out: *mut *mut GhzCounts,
) -> GhzStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let id = ExperimentId::new(experiment)?;
        let mut noise = NoiseModel::noiseless();
        if !readout_flip.is_null() {
            if flip_len > MAX_QUBITS {
                return Err(Error::InvalidArgument(format!("flip_len {flip_len} > {MAX_QUBITS}")).into());
            }
            for (q, &p) in std::slice::from_raw_parts(readout_flip, flip_len).iter().enumerate() {
                noise = noise.with_flip(q, p)?;
            }
        }
        let table = simulate_counts(id, shots, seed, &noise)?;
        *out = Box::into_raw(Box::new(GhzCounts(table)));
        Ok(())
    })
}

/// Writes three handles, one per experiment, into `out[0..3]`.
#[no_mangle]
pub unsafe extern "C" fn ghz_hv_sample(
    arranged_fraction: f64,
    shots_per_setting: u64,
    seed: u64,
    out: *mut *mut GhzCounts,
) -> GhzStatus {
    guard(|| {
        if out.is_null() {
            return Err(Fail::Null("out"));
        }
        let tables = sample_hv_shots(arranged_fraction, shots_per_setting, seed)?;
        for (i, table) in tables.into_iter().enumerate() {
            *out.add(i) = Box::into_raw(Box::new(GhzCounts(table)));
        }
        Ok(())
    })
}

/// Count for the five-bit outcome `bits` (bit k is qubit k).
#[no_mangle]
pub unsafe extern "C" fn ghz_counts_get(counts: *const GhzCounts, bits: u8, out: *mut u64) -> GhzStatus {
    guard(|| {
        let counts = in_ref(counts, "counts")?;
        let out = out_ref(out, "out")?;
        if bits >= 32 {
            return Err(Error::InvalidArgument(format!("outcome {bits} needs more than 5 bits")).into());
        }
        *out = counts.0.get(&format!("{bits:05b}"));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn ghz_counts_total(counts: *const GhzCounts, out: *mut u64) -> GhzStatus {
    guard(|| {
        *out_ref(out, "out")? = in_ref(counts, "counts")?.0.total_shots();
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn ghz_counts_free(counts: *mut GhzCounts) {
    if !counts.is_null() {
        drop(Box::from_raw(counts));
    }
}

/// Analyzes the counts of experiments 1, 2 and 3.
#[no_mangle]
pub unsafe extern "C" fn ghz_analyze_counts(
    first: *const GhzCounts,
    second: *const GhzCounts,
    third: *const GhzCounts,
    out: *mut *mut GhzReport,
) -> GhzStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let tables = [
            in_ref(first, "first")?.0.clone(),
            in_ref(second, "second")?.0.clone(),
            in_ref(third, "third")?.0.clone(),
        ];
        *out = Box::into_raw(Box::new(GhzReport(analyze_counts(&tables)?)));
        Ok(())
    })
}

/// Analyzes a tallies document; null `json` selects the bundled table.
#[no_mangle]
pub unsafe extern "C" fn ghz_analyze_tallies(json: *const c_char, out: *mut *mut GhzReport) -> GhzStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let fixture = if json.is_null() {
            table1_fixture()
        } else {
            TallyFixture::from_json(in_str(json, "json")?)?
        };
        *out = Box::into_raw(Box::new(GhzReport(analyze_tallies(&fixture.experiments)?)));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn ghz_report_m3(report: *const GhzReport, out: *mut f64) -> GhzStatus {
    guard(|| {
        *out_ref(out, "out")? = in_ref(report, "report")?.0.m3;
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn ghz_report_standard_error(report: *const GhzReport, out: *mut f64) -> GhzStatus {
    guard(|| {
        *out_ref(out, "out")? = in_ref(report, "report")?.0.m3_standard_error();
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn ghz_report_discard_fraction(report: *const GhzReport, out: *mut f64) -> GhzStatus {
    guard(|| {
        *out_ref(out, "out")? = in_ref(report, "report")?.0.discard_fraction;
        Ok(())
    })
}

/// Per-experiment averages: `nosc[3]` for one phase gate, `osc[3]` for three.
#[no_mangle]
pub unsafe extern "C" fn ghz_report_averages(report: *const GhzReport, nosc: *mut f64, osc: *mut f64) -> GhzStatus {
    guard(|| {
        let report = &in_ref(report, "report")?.0;
        if nosc.is_null() {
            return Err(Fail::Null("nosc"));
        }
        if osc.is_null() {
            return Err(Fail::Null("osc"));
        }
        std::slice::from_raw_parts_mut(nosc, 3).copy_from_slice(&report.nosc_averages());
        std::slice::from_raw_parts_mut(osc, 3).copy_from_slice(&report.osc_averages());
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn ghz_report_free(report: *mut GhzReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

#[no_mangle]
pub unsafe extern "C" fn ghz_calibrate_p(m3_target: f64, out: *mut f64) -> GhzStatus {
    guard(|| {
        *out_ref(out, "out")? = calibrate_p_for_target(m3_target)?;
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn ghz_expected_m3(p: f64, out: *mut f64) -> GhzStatus {
    guard(|| {
        *out_ref(out, "out")? = expected_m3_under_readout(p)?;
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn ghz_classical_bound(min: *mut f64, max: *mut f64) -> GhzStatus {
    guard(|| {
        let min = out_ref(min, "min")?;
        let max = out_ref(max, "max")?;
        (*min, *max) = classical_bound_oracle();
        Ok(())
    })
}

fn derive<S: AsRef<str>>(names: &[S]) -> Result<GhzArrangement, Fail> {
    Ok(match derive_environment_relation(names)?.verdict {
        ArrangementKind::Arranged => GhzArrangement::Arranged,
        ArrangementKind::Disarranged => GhzArrangement::Disarranged,
        ArrangementKind::Unrelated => GhzArrangement::Unrelated,
        ArrangementKind::Mixed(_) => GhzArrangement::Mixed,
    })
}

/// Register/selector verdict for a comma-separated list of bundle names.
#[no_mangle]
pub unsafe extern "C" fn ghz_derive_relation(bundles: *const c_char, out: *mut GhzArrangement) -> GhzStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        let names: Vec<&str> = in_str(bundles, "bundles")?.split(',').map(str::trim).collect();
        *out = derive(&names)?;
        Ok(())
    })
}

/// Same as `ghz_derive_relation` for a named preset such as `fig13`.
#[no_mangle]
pub unsafe extern "C" fn ghz_derive_preset(name: *const c_char, out: *mut GhzArrangement) -> GhzStatus {
    guard(|| {
        let out = out_ref(out, "out")?;
        *out = derive(ghzsim::hv::bundles::preset(in_str(name, "name")?)?)?;
        Ok(())
    })
}

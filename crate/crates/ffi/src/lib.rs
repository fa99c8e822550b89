//! C interface to the `sixstate` library.
//!
//! Every function returns a [`SixstateStatus`]; results are written through
//! out-pointers. Attack parameters live behind opaque handles that the
//! caller releases with the matching `_free` function. After a failure,
//! [`sixstate_last_error`] describes it.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use sixstate::coherent2::{self, Coherent2Params, Metric2};
use sixstate::coherent3::{self, Coherent3Params, Metric3};
use sixstate::incoherent::IncoherentAttack;
use sixstate::postproc;
use sixstate::sim::{self, Pairing, SimConfig, SimStats, Strategy};
use sixstate::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SixstateStatus {
    Ok = 0,
    NullPointer = 1,
    /// Argument outside its domain.
    InvalidArgument = 2,
    /// Parameters do not describe a valid attack.
    Infeasible = 3,
    /// Internal numerical failure.
    Numerical = 4,
    Panic = 5,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SixstateMetric {
    /// Guess every bit of the group.
    Pcg = 0,
    /// Guess a bit Bob received undisturbed.
    Undisturbed = 1,
    Shannon = 2,
    Renyi = 3,
    Xor = 4,
}

/// Two-qubit attack parameters.
pub struct SixstateCoherent2(Coherent2Params);

/// Three-qubit attack parameters.
pub struct SixstateCoherent3(Coherent3Params);

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct SixstateIncoherentMetrics {
    pub fidelity: f64,
    pub disturbance: f64,
    pub ps: f64,
    pub pg: f64,
    pub pg_undisturbed: f64,
    pub shannon: f64,
    pub renyi: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct SixstateCoherent2Metrics {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub pcg: f64,
    pub pcg_undisturbed: f64,
    pub shannon: f64,
    pub renyi: f64,
    pub xor: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct SixstateCoherent3Metrics {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
    pub pcg: f64,
    pub undisturbed_accuracy: f64,
    pub xor: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct SixstateOptimum {
    pub alpha: f64,
    /// Zero for the two-qubit attack.
    pub beta: f64,
    pub value: f64,
}

/// Point estimates of a simulation run; `eve_xor_accuracy` is NaN when
/// pairing was off or no pair qualified.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct SixstateSimSummary {
    pub qubits_sent: u64,
    pub sifted: u64,
    pub pairs: u64,
    pub sift_rate: f64,
    pub qber: f64,
    pub eve_bit_accuracy: f64,
    pub eve_undisturbed_accuracy: f64,
    pub eve_disturbed_accuracy: f64,
    pub eve_xor_accuracy: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> SixstateStatus {
    match e {
        Error::Domain { .. } | Error::Contract(_) => SixstateStatus::InvalidArgument,
        Error::Validity(_) | Error::Infeasible(_) => SixstateStatus::Infeasible,
        _ => SixstateStatus::Numerical,
    }
}

fn guard(f: impl FnOnce() -> Result<(), SixstateStatus>) -> SixstateStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SixstateStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("internal panic");
            SixstateStatus::Panic
        }
    }
}

fn lift<T>(r: sixstate::Result<T>) -> Result<T, SixstateStatus> {
    r.map_err(|e| {
        set_error(&e.to_string());
        status_of(&e)
    })
}

fn invalid(msg: &str) -> SixstateStatus {
    set_error(msg);
    SixstateStatus::InvalidArgument
}

/// # Safety
/// `p` must be null or valid for writes of `T`.
unsafe fn write<T>(p: *mut T, v: T) -> Result<(), SixstateStatus> {
    if p.is_null() {
        set_error("null output pointer");
        return Err(SixstateStatus::NullPointer);
    }
    p.write(v);
    Ok(())
}

/// # Safety
/// `p` must be null or point to a live handle.
unsafe fn read<'a, T>(p: *const T) -> Result<&'a T, SixstateStatus> {
    p.as_ref().ok_or_else(|| {
        set_error("null handle");
        SixstateStatus::NullPointer
    })
}

/// Message for the last failure on this thread. The pointer stays valid
/// until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn sixstate_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn sixstate_status_str(status: SixstateStatus) -> *const c_char {
    let s: &'static [u8] = match status {
        SixstateStatus::Ok => b"ok\0",
        SixstateStatus::NullPointer => b"null pointer\0",
        SixstateStatus::InvalidArgument => b"invalid argument\0",
        SixstateStatus::Infeasible => b"infeasible attack parameters\0",
        SixstateStatus::Numerical => b"numerical failure\0",
        SixstateStatus::Panic => b"internal panic\0",
    };
    s.as_ptr().cast()
}

/// Metrics of the single-qubit attack with disturbance `d` in `[0, 2/3]`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sixstate_incoherent_metrics(d: f64, out: *mut SixstateIncoherentMetrics) -> SixstateStatus {
    guard(|| {
        let m = lift(IncoherentAttack::from_disturbance(d))?.metrics();
        write(
            out,
            SixstateIncoherentMetrics {
                fidelity: m.fidelity,
                disturbance: m.disturbance,
                ps: m.ps,
                pg: m.pg,
                pg_undisturbed: m.pg_undist,
                shannon: m.shannon,
                renyi: m.renyi,
            },
        )
    })
}

/// Two-qubit attack at disturbance `d` with weight `alpha` on the undisturbed pair.
///
/// # Safety
/// `out` must be valid for writes; release the handle with [`sixstate_coherent2_free`].
#[no_mangle]
pub unsafe extern "C" fn sixstate_coherent2_new(
    d: f64,
    alpha: f64,
    out: *mut *mut SixstateCoherent2,
) -> SixstateStatus {
    guard(|| {
        let p = lift(Coherent2Params::from_disturbance(d, alpha))?;
        write(out, Box::into_raw(Box::new(SixstateCoherent2(p))))
    })
}

/// # Safety
/// `h` must be null or a handle from [`sixstate_coherent2_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sixstate_coherent2_free(h: *mut SixstateCoherent2) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// # Safety
/// `h` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sixstate_coherent2_metrics(
    h: *const SixstateCoherent2,
    out: *mut SixstateCoherent2Metrics,
) -> SixstateStatus {
    guard(|| {
        let p = read(h)?.0;
        let m = p.metrics();
        let pr = p.probs();
        write(
            out,
            SixstateCoherent2Metrics {
                alpha: p.alpha,
                beta: p.beta,
                gamma: p.gamma,
                pcg: m.pcg,
                pcg_undisturbed: m.pcg_undist,
                shannon: m.shannon,
                renyi: m.renyi,
                xor: pr.p02 + pr.p00,
            },
        )
    })
}

/// Best two-qubit attack at disturbance `d` in `(0, 1/2)` for `metric`.
/// `grid` is the number of scan points; 0 selects the default.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sixstate_coherent2_optimize(
    d: f64,
    metric: SixstateMetric,
    grid: u32,
    out: *mut SixstateOptimum,
) -> SixstateStatus {
    guard(|| {
        let (alpha, value) = if metric == SixstateMetric::Xor {
            let o = lift(postproc::p_xor2_max(d))?;
            (o.alpha, o.value)
        } else {
            let m = match metric {
                SixstateMetric::Pcg => Metric2::Pcg,
                SixstateMetric::Undisturbed => Metric2::PcgUndist,
                SixstateMetric::Shannon => Metric2::Shannon,
                SixstateMetric::Renyi => Metric2::Renyi,
                SixstateMetric::Xor => unreachable!(),
            };
            let grid = if grid == 0 {
                coherent2::DEFAULT_GRID
            } else {
                grid as usize
            };
            let o = lift(coherent2::optimize(d, m, grid))?;
            (o.alpha, o.value)
        };
        write(
            out,
            SixstateOptimum {
                alpha,
                beta: 0.0,
                value,
            },
        )
    })
}

/// Three-qubit attack at disturbance `d` with weights `alpha` (no qubit
/// disturbed) and `beta` (one given qubit disturbed).
///
/// # Safety
/// `out` must be valid for writes; release the handle with [`sixstate_coherent3_free`].
#[no_mangle]
pub unsafe extern "C" fn sixstate_coherent3_new(
    d: f64,
    alpha: f64,
    beta: f64,
    out: *mut *mut SixstateCoherent3,
) -> SixstateStatus {
    guard(|| {
        let p = lift(Coherent3Params::from_disturbance(d, alpha, beta))?;
        write(out, Box::into_raw(Box::new(SixstateCoherent3(p))))
    })
}

/// # Safety
/// `h` must be null or a handle from [`sixstate_coherent3_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn sixstate_coherent3_free(h: *mut SixstateCoherent3) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// # Safety
/// `h` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sixstate_coherent3_metrics(
    h: *const SixstateCoherent3,
    out: *mut SixstateCoherent3Metrics,
) -> SixstateStatus {
    guard(|| {
        let p = read(h)?.0;
        let m = p.metrics();
        write(
            out,
            SixstateCoherent3Metrics {
                alpha: p.alpha,
                beta: p.beta,
                gamma: p.gamma,
                delta: p.delta,
                pcg: m.pcg,
                undisturbed_accuracy: m.undisturbed_accuracy,
                xor: p.p_xor(),
            },
        )
    })
}

/// Best three-qubit attack at disturbance `d` in `(0, 1/2)`. Only `Pcg`,
/// `Undisturbed` and `Xor` are available. `grid` is the per-axis scan
/// resolution; 0 selects the default.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sixstate_coherent3_optimize(
    d: f64,
    metric: SixstateMetric,
    grid: u32,
    out: *mut SixstateOptimum,
) -> SixstateStatus {
    guard(|| {
        let m = match metric {
            SixstateMetric::Pcg => Metric3::Pcg,
            SixstateMetric::Undisturbed => Metric3::Undist,
            SixstateMetric::Xor => Metric3::Xor,
            _ => return Err(invalid("metric not available for the three-qubit attack")),
        };
        let grid = if grid == 0 {
            coherent3::DEFAULT_GRID
        } else {
            grid as usize
        };
        let o = lift(coherent3::optimize(d, m, grid))?;
        write(
            out,
            SixstateOptimum {
                alpha: o.alpha,
                beta: o.beta,
                value: o.value,
            },
        )
    })
}

/// Xor guessing probability with one probe per qubit.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sixstate_p_xor1(d: f64, out: *mut f64) -> SixstateStatus {
    guard(|| write(out, lift(postproc::p_xor1(d))?))
}

/// Xor guessing probability with one probe on both qubits.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sixstate_p_xor2(alpha: f64, d: f64, out: *mut f64) -> SixstateStatus {
    guard(|| write(out, lift(postproc::p_xor2(alpha, d))?))
}

fn summary(s: &SimStats) -> SixstateSimSummary {
    SixstateSimSummary {
        qubits_sent: s.qubits_sent,
        sifted: s.qber.n,
        pairs: s.eve_xor_accuracy.map_or(0, |x| x.n),
        sift_rate: s.sift_rate.value,
        qber: s.qber.value,
        eve_bit_accuracy: s.eve_bit_accuracy.value,
        eve_undisturbed_accuracy: s.eve_undisturbed_accuracy.value,
        eve_disturbed_accuracy: s.eve_disturbed_accuracy.value,
        eve_xor_accuracy: s.eve_xor_accuracy.map_or(f64::NAN, |x| x.value),
    }
}

fn simulate(
    strategy: Strategy,
    trials: u64,
    seed: u64,
    xor_pairing: bool,
) -> Result<SixstateSimSummary, SixstateStatus> {
    let config = SimConfig {
        strategy,
        trials,
        seed,
        pairing: if xor_pairing {
            Pairing::WithinProbeXor
        } else {
            Pairing::None
        },
    };
    Ok(summary(&lift(sim::run_protocol(&config))?))
}

/// Monte Carlo run with the single-qubit attack at disturbance `d`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sixstate_simulate_incoherent(
    d: f64,
    trials: u64,
    seed: u64,
    xor_pairing: bool,
    out: *mut SixstateSimSummary,
) -> SixstateStatus {
    guard(|| {
        let a = lift(IncoherentAttack::from_disturbance(d))?;
        write(out, simulate(Strategy::incoherent(&a), trials, seed, xor_pairing)?)
    })
}

/// # Safety
/// `h` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sixstate_simulate_coherent2(
    h: *const SixstateCoherent2,
    trials: u64,
    seed: u64,
    xor_pairing: bool,
    out: *mut SixstateSimSummary,
) -> SixstateStatus {
    guard(|| {
        let p = read(h)?.0;
        write(out, simulate(Strategy::coherent2(&p), trials, seed, xor_pairing)?)
    })
}

/// # Safety
/// `h` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn sixstate_simulate_coherent3(
    h: *const SixstateCoherent3,
    trials: u64,
    seed: u64,
    xor_pairing: bool,
    out: *mut SixstateSimSummary,
) -> SixstateStatus {
    guard(|| {
        let p = read(h)?.0;
        write(out, simulate(Strategy::coherent3(&p), trials, seed, xor_pairing)?)
    })
}

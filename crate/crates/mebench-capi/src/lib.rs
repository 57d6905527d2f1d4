//! C ABI over the mebench library, for bindings from other languages.
//!
//! Conventions: every fallible call returns a [`MebStatus`]; results come
//! back through out-pointers. Handles ([`MebFrame`], [`MebMotionField`])
//! are opaque and owned by the caller until passed to the matching
//! `_free`. On failure a thread-local message is set, readable through
//! [`meb_last_error_message`] until the next failing call on the same
//! thread. No call unwinds across the boundary: panics are caught and
//! reported as [`MebStatus::Panic`].

use mebench::fitness_approx::DistanceMetric;
use mebench::hsbm::estimate_frame_edge;
use mebench::{Frame, HsBmConfig, MotionField, SearchWindow};
use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

/// Result of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum MebStatus {
    /// The call succeeded.
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// An argument failed validation; see meb_last_error_message().
    InvalidArgument = 2,
    /// An internal invariant failed; see meb_last_error_message().
    Panic = 3,
}

/// Candidate-distance metric of the fitness strategy.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum MebMetric {
    Euclidean = 0,
    Manhattan = 1,
    Chebyshev = 2,
}

/// Search parameters; fill with meb_config_default() and adjust.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct MebConfig {
    /// Search window radius in pixels.
    pub window: u32,
    /// Harmony memory size.
    pub hms: u32,
    /// Memory-consideration rate in [0, 1].
    pub hmcr: f64,
    /// Pitch-adjustment rate in [0, 1].
    pub par: f64,
    /// Pitch-adjustment bandwidth in pixels.
    pub bw: f64,
    /// Improvisations per block.
    pub ni: u32,
    /// Distance threshold of the fitness strategy; 0 disables estimation.
    pub d: f64,
    /// Run seed; equal seeds reproduce results exactly.
    pub seed: u64,
    /// Bias the fresh candidate draw one lattice step positive.
    pub offset_reinit: bool,
    /// Distance metric used by the fitness strategy.
    pub metric: MebMetric,
}

/// Opaque luma frame handle.
pub struct MebFrame {
    inner: Frame,
}

/// Opaque per-block motion field handle, with its search statistics.
pub struct MebMotionField {
    field: MotionField,
    total_evaluations: u64,
    avg_evaluations_per_block: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn fail(status: MebStatus, message: impl std::fmt::Display) -> MebStatus {
    let text = message.to_string().replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(text).expect("NULs were stripped");
    });
    status
}

fn guard(f: impl FnOnce() -> MebStatus) -> MebStatus {
    catch_unwind(AssertUnwindSafe(f))
        .unwrap_or_else(|_| fail(MebStatus::Panic, "internal panic"))
}

macro_rules! require {
    ($ptr:expr) => {
        if $ptr.is_null() {
            return fail(
                MebStatus::NullArgument,
                concat!(stringify!($ptr), " is null"),
            );
        }
    };
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn meb_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Message of the last failure on this thread. The pointer stays valid
/// until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn meb_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Creates a frame from `len` row-major 8-bit luma samples; `len` must
/// equal `width * height`.
#[no_mangle]
pub unsafe extern "C" fn meb_frame_new(
    width: u32,
    height: u32,
    samples: *const u8,
    len: usize,
    out: *mut *mut MebFrame,
) -> MebStatus {
    guard(|| {
        require!(samples);
        require!(out);
        let data = unsafe { std::slice::from_raw_parts(samples, len) }.to_vec();
        match Frame::new(width, height, data) {
            Ok(inner) => {
                unsafe { *out = Box::into_raw(Box::new(MebFrame { inner })) };
                MebStatus::Ok
            }
            Err(e) => fail(MebStatus::InvalidArgument, e),
        }
    })
}

/// Releases a frame. Null is a no-op.
#[no_mangle]
pub unsafe extern "C" fn meb_frame_free(frame: *mut MebFrame) {
    if !frame.is_null() {
        drop(unsafe { Box::from_raw(frame) });
    }
}

/// Reads a frame's dimensions.
#[no_mangle]
pub unsafe extern "C" fn meb_frame_dimensions(
    frame: *const MebFrame,
    width: *mut u32,
    height: *mut u32,
) -> MebStatus {
    guard(|| {
        require!(frame);
        require!(width);
        require!(height);
        let f = unsafe { &(*frame).inner };
        unsafe {
            *width = f.width();
            *height = f.height();
        }
        MebStatus::Ok
    })
}

/// Borrows a frame's sample buffer (row-major, `width * height` bytes).
/// The pointer is valid while the frame handle lives.
#[no_mangle]
pub unsafe extern "C" fn meb_frame_samples(
    frame: *const MebFrame,
    samples: *mut *const u8,
    len: *mut usize,
) -> MebStatus {
    guard(|| {
        require!(frame);
        require!(samples);
        require!(len);
        let s = unsafe { (*frame).inner.samples() };
        unsafe {
            *samples = s.as_ptr();
            *len = s.len();
        }
        MebStatus::Ok
    })
}

/// Fills `out` with the tuned defaults for a window radius (8 or 16 are
/// the standard choices).
#[no_mangle]
pub unsafe extern "C" fn meb_config_default(window: u32, out: *mut MebConfig) -> MebStatus {
    guard(|| {
        require!(out);
        if window == 0 {
            return fail(
                MebStatus::InvalidArgument,
                "window radius must be at least 1",
            );
        }
        let c = HsBmConfig::for_window(SearchWindow(window));
        unsafe {
            *out = MebConfig {
                window: c.window.0,
                hms: c.hms as u32,
                hmcr: c.hmcr,
                par: c.par,
                bw: c.bw,
                ni: c.ni,
                d: c.d,
                seed: c.seed,
                offset_reinit: c.offset_reinit,
                metric: MebMetric::Euclidean,
            };
        }
        MebStatus::Ok
    })
}

fn to_hsbm_config(c: &MebConfig) -> Result<HsBmConfig, String> {
    if c.window == 0 {
        return Err("window radius must be at least 1".into());
    }
    let metric = match c.metric {
        MebMetric::Euclidean => DistanceMetric::Euclidean,
        MebMetric::Manhattan => DistanceMetric::Manhattan,
        MebMetric::Chebyshev => DistanceMetric::Chebyshev,
    };
    let config = HsBmConfig {
        window: SearchWindow(c.window),
        hms: c.hms as usize,
        hmcr: c.hmcr,
        par: c.par,
        bw: c.bw,
        ni: c.ni,
        d: c.d,
        seed: c.seed,
        offset_reinit: c.offset_reinit,
        metric,
    };
    config.params().validate().map_err(|e| e.to_string())?;
    if !config.d.is_finite() || config.d < 0.0 {
        return Err("distance threshold must be finite and non-negative".into());
    }
    Ok(config)
}

/// Runs the harmony search over one frame pair on a `block_edge` grid
/// (16 is the standard edge). Both frames must have equal dimensions,
/// divisible by the edge. The result carries one vector per block plus
/// evaluation statistics; free it with meb_motion_field_free().
#[no_mangle]
pub unsafe extern "C" fn meb_estimate(
    current: *const MebFrame,
    previous: *const MebFrame,
    config: *const MebConfig,
    frame_index: u64,
    block_edge: u32,
    out: *mut *mut MebMotionField,
) -> MebStatus {
    guard(|| {
        require!(current);
        require!(previous);
        require!(config);
        require!(out);
        let config = match to_hsbm_config(unsafe { &*config }) {
            Ok(c) => c,
            Err(e) => return fail(MebStatus::InvalidArgument, e),
        };
        let cur = unsafe { &(*current).inner };
        let prev = unsafe { &(*previous).inner };
        match estimate_frame_edge(cur, prev, &config, frame_index as usize, block_edge) {
            Ok((field, report)) => {
                let handle = MebMotionField {
                    field,
                    total_evaluations: report.total_evaluations(),
                    avg_evaluations_per_block: report.avg_evaluations_per_block(),
                };
                unsafe { *out = Box::into_raw(Box::new(handle)) };
                MebStatus::Ok
            }
            Err(e) => fail(MebStatus::InvalidArgument, e),
        }
    })
}

/// Releases a motion field. Null is a no-op.
#[no_mangle]
pub unsafe extern "C" fn meb_motion_field_free(field: *mut MebMotionField) {
    if !field.is_null() {
        drop(unsafe { Box::from_raw(field) });
    }
}

/// Reads the block-grid dimensions of a motion field.
#[no_mangle]
pub unsafe extern "C" fn meb_motion_field_dimensions(
    field: *const MebMotionField,
    cols: *mut u32,
    rows: *mut u32,
) -> MebStatus {
    guard(|| {
        require!(field);
        require!(cols);
        require!(rows);
        let f = unsafe { &(*field).field };
        unsafe {
            *cols = f.cols();
            *rows = f.rows();
        }
        MebStatus::Ok
    })
}

/// Reads one block's motion vector and its matching error.
#[no_mangle]
pub unsafe extern "C" fn meb_motion_field_vector(
    field: *const MebMotionField,
    row: u32,
    col: u32,
    u: *mut i32,
    v: *mut i32,
    sad: *mut u32,
) -> MebStatus {
    guard(|| {
        require!(field);
        require!(u);
        require!(v);
        require!(sad);
        let f = unsafe { &(*field).field };
        if row >= f.rows() || col >= f.cols() {
            return fail(
                MebStatus::InvalidArgument,
                format!(
                    "block ({row}, {col}) outside the {}x{} grid",
                    f.rows(),
                    f.cols()
                ),
            );
        }
        let mv = f.get(row, col);
        unsafe {
            *u = mv.u;
            *v = mv.v;
            *sad = f.sad(row, col);
        }
        MebStatus::Ok
    })
}

/// Reads the search cost: exact error evaluations, total and per block.
#[no_mangle]
pub unsafe extern "C" fn meb_motion_field_cost(
    field: *const MebMotionField,
    total_evaluations: *mut u64,
    avg_evaluations_per_block: *mut f64,
) -> MebStatus {
    guard(|| {
        require!(field);
        require!(total_evaluations);
        require!(avg_evaluations_per_block);
        unsafe {
            *total_evaluations = (*field).total_evaluations;
            *avg_evaluations_per_block = (*field).avg_evaluations_per_block;
        }
        MebStatus::Ok
    })
}

/// Rebuilds the predicted frame a motion field describes over `previous`.
#[no_mangle]
pub unsafe extern "C" fn meb_compensate(
    previous: *const MebFrame,
    field: *const MebMotionField,
    out: *mut *mut MebFrame,
) -> MebStatus {
    guard(|| {
        require!(previous);
        require!(field);
        require!(out);
        let prev = unsafe { &(*previous).inner };
        let f = unsafe { &(*field).field };
        match mebench::matching::compensate(prev, f) {
            Ok(frame) => {
                unsafe { *out = Box::into_raw(Box::new(MebFrame { inner: frame })) };
                MebStatus::Ok
            }
            Err(e) => fail(MebStatus::InvalidArgument, e),
        }
    })
}

/// Peak signal-to-noise ratio between two equal-sized frames, in dB,
/// capped at 100 for identical frames.
#[no_mangle]
pub unsafe extern "C" fn meb_psnr(
    a: *const MebFrame,
    b: *const MebFrame,
    out: *mut f64,
) -> MebStatus {
    guard(|| {
        require!(a);
        require!(b);
        require!(out);
        match mebench::metrics::psnr(unsafe { &(*a).inner }, unsafe { &(*b).inner }) {
            Ok(value) => {
                unsafe { *out = value };
                MebStatus::Ok
            }
            Err(e) => fail(MebStatus::InvalidArgument, e),
        }
    })
}

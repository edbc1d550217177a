//! C ABI over `seqham`.
//!
//! Graphs cross the boundary as opaque `SeqhamGraph` handles created by a
//! constructor and released with `seqham_graph_free`. Every fallible call
//! returns a `SeqhamStatus`; on anything but `SEQHAM_OK` a message is kept in
//! thread-local storage and can be read with `seqham_last_error`. Cycles are
//! written into caller buffers of `n` vertex labels (1-indexed).

use std::cell::RefCell;
use std::ffi::CString;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use libc::c_char;
use seqham::graph::{gen_gnp, Graph};
use seqham::ham::{brute_hamilton, posa_solve, RotationParams};
use seqham::inversion::{count_inversions, first_moment_bound};
use seqham::ordered::{solve_ordered_graph, OrderedParams};
use seqham::{Error, HamCycle};

#[repr(C)]
#[allow(non_camel_case_types)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeqhamStatus {
    SEQHAM_OK = 0,
    SEQHAM_NULL_POINTER = 1,
    SEQHAM_INVALID_ARGUMENT = 2,
    /// The buffer is shorter than the number of vertices.
    SEQHAM_BUFFER_TOO_SMALL = 3,
    /// The solver gave up, or the instance has no solution.
    SEQHAM_NOT_FOUND = 4,
    SEQHAM_CAP_EXCEEDED = 5,
    SEQHAM_PANIC = 6,
}

use SeqhamStatus::*;

/// Opaque graph handle.
pub struct SeqhamGraph(Graph);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn fail(status: SeqhamStatus, msg: impl Into<String>) -> SeqhamStatus {
    let msg = CString::new(msg.into().replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
    status
}

fn from_error(e: Error) -> SeqhamStatus {
    let status = match e {
        Error::CapExceeded { .. } => SEQHAM_CAP_EXCEEDED,
        Error::BudgetExhausted { .. } => SEQHAM_NOT_FOUND,
        _ => SEQHAM_INVALID_ARGUMENT,
    };
    fail(status, e.to_string())
}

fn guarded(f: impl FnOnce() -> SeqhamStatus) -> SeqhamStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| fail(SEQHAM_PANIC, "internal panic"))
}

unsafe fn write_cycle(h: &HamCycle, out: *mut u32, cap: usize) -> SeqhamStatus {
    if out.is_null() {
        return fail(SEQHAM_NULL_POINTER, "output buffer is null");
    }
    if cap < h.len() {
        return fail(SEQHAM_BUFFER_TOO_SMALL, format!("buffer holds {cap} labels, cycle has {}", h.len()));
    }
    ptr::copy_nonoverlapping(h.as_slice().as_ptr(), out, h.len());
    SEQHAM_OK
}

/// Message for the last failed call on this thread, or NULL. The pointer
/// stays valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn seqham_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Samples G(n, p) into `*out`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn seqham_graph_gnp(n: usize, p: f64, seed: u64, out: *mut *mut SeqhamGraph) -> SeqhamStatus {
    guarded(|| {
        if out.is_null() {
            return fail(SEQHAM_NULL_POINTER, "out is null");
        }
        match gen_gnp(n, p, seed) {
            Ok(g) => {
                *out = Box::into_raw(Box::new(SeqhamGraph(g)));
                SEQHAM_OK
            }
            Err(e) => from_error(e),
        }
    })
}

/// Builds a graph on `1..=n` from `m` edges given as `2m` labels.
///
/// # Safety
/// `edges` must point to `2 * m` readable labels (or be NULL when `m` is 0)
/// and `out` to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn seqham_graph_from_edges(
    n: usize,
    edges: *const u32,
    m: usize,
    out: *mut *mut SeqhamGraph,
) -> SeqhamStatus {
    guarded(|| {
        if out.is_null() || (edges.is_null() && m > 0) {
            return fail(SEQHAM_NULL_POINTER, "edges or out is null");
        }
        let flat: &[u32] = if m == 0 { &[] } else { std::slice::from_raw_parts(edges, 2 * m) };
        match Graph::from_edges(n, flat.chunks_exact(2).map(|c| (c[0], c[1]))) {
            Ok(g) => {
                *out = Box::into_raw(Box::new(SeqhamGraph(g)));
                SEQHAM_OK
            }
            Err(e) => from_error(e),
        }
    })
}

/// Releases a handle. NULL is ignored.
///
/// # Safety
/// `g` must come from a constructor of this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn seqham_graph_free(g: *mut SeqhamGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Number of vertices, or 0 for NULL.
///
/// # Safety
/// `g` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn seqham_graph_n(g: *const SeqhamGraph) -> usize {
    g.as_ref().map_or(0, |g| g.0.n())
}

/// Number of edges, or 0 for NULL.
///
/// # Safety
/// `g` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn seqham_graph_edge_count(g: *const SeqhamGraph) -> usize {
    g.as_ref().map_or(0, |g| g.0.edge_count())
}

/// Randomized rotation-extension search for a Hamilton cycle.
///
/// # Safety
/// `g` must be a live handle and `out` must point to `cap` writable labels.
#[no_mangle]
pub unsafe extern "C" fn seqham_posa_solve(
    g: *const SeqhamGraph,
    seed: u64,
    out: *mut u32,
    cap: usize,
) -> SeqhamStatus {
    guarded(|| {
        let Some(g) = g.as_ref() else {
            return fail(SEQHAM_NULL_POINTER, "graph is null");
        };
        match posa_solve(&g.0, &[], None, &RotationParams::default(), seed) {
            Ok(sol) => write_cycle(&sol.cycle, out, cap),
            Err(f) => fail(SEQHAM_NOT_FOUND, f.to_string()),
        }
    })
}

/// Exhaustive search; decides Hamiltonicity for small graphs.
///
/// # Safety
/// `g` must be a live handle and `out` must point to `cap` writable labels.
#[no_mangle]
pub unsafe extern "C" fn seqham_brute_solve(g: *const SeqhamGraph, out: *mut u32, cap: usize) -> SeqhamStatus {
    guarded(|| {
        let Some(g) = g.as_ref() else {
            return fail(SEQHAM_NULL_POINTER, "graph is null");
        };
        match brute_hamilton(&g.0, |_| true) {
            Ok(Some(h)) => write_cycle(&h, out, cap),
            Ok(None) => fail(SEQHAM_NOT_FOUND, "graph is not Hamiltonian"),
            Err(e) => from_error(e),
        }
    })
}

/// Hamilton cycle visiting `s0[0], ..., s0[k-1]` in this cyclic order.
///
/// # Safety
/// `g` must be a live handle, `s0` must point to `k` readable labels and
/// `out` to `cap` writable labels.
#[no_mangle]
pub unsafe extern "C" fn seqham_ordered_solve(
    g: *const SeqhamGraph,
    s0: *const u32,
    k: usize,
    seed: u64,
    out: *mut u32,
    cap: usize,
) -> SeqhamStatus {
    guarded(|| {
        let Some(g) = g.as_ref() else {
            return fail(SEQHAM_NULL_POINTER, "graph is null");
        };
        if s0.is_null() && k > 0 {
            return fail(SEQHAM_NULL_POINTER, "s0 is null");
        }
        let order: &[u32] = if k == 0 { &[] } else { std::slice::from_raw_parts(s0, k) };
        match solve_ordered_graph(&g.0, order, &OrderedParams::default(), seed) {
            Ok(sol) => write_cycle(&sol.cycle, out, cap),
            Err(f) => fail(SEQHAM_NOT_FOUND, f.to_string()),
        }
    })
}

/// Inversion count of a permutation of `1..=len`.
///
/// # Safety
/// `seq` must point to `len` readable labels and `out` to one writable u64.
#[no_mangle]
pub unsafe extern "C" fn seqham_count_inversions(seq: *const u32, len: usize, out: *mut u64) -> SeqhamStatus {
    guarded(|| {
        if out.is_null() || (seq.is_null() && len > 0) {
            return fail(SEQHAM_NULL_POINTER, "seq or out is null");
        }
        let s: &[u32] = if len == 0 { &[] } else { std::slice::from_raw_parts(seq, len) };
        let mut sorted = s.to_vec();
        sorted.sort_unstable();
        if sorted.iter().enumerate().any(|(i, &v)| v as usize != i + 1) {
            return fail(SEQHAM_INVALID_ARGUMENT, "not a permutation of 1..=len");
        }
        *out = count_inversions(s);
        SEQHAM_OK
    })
}

/// Expected number of Hamilton cycles of G(n, p) with at most `m` inversions.
#[no_mangle]
pub extern "C" fn seqham_first_moment_bound(n: usize, m: u64, p: f64) -> f64 {
    first_moment_bound(n, m, p)
}

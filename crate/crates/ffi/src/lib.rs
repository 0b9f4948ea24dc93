//! C ABI over `factorium`.
//!
//! Graphs live behind an opaque `FactoriumGraph` handle. Every fallible call
//! returns a `FactoriumStatus`; on failure a message for the calling thread
//! is available from `factorium_last_error` until its next failing call.
//! Vertex sets cross the boundary as `uint64_t` masks (certificates are
//! limited to 16 vertices) and matchings as mate arrays.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use factorium::error::Error;
use factorium::factorization::Factorization;
use factorium::{factor, factorization, graph, graph6, Graph};

/// Largest order accepted by `factorium_graph_from_edges`.
pub const FACTORIUM_MAX_ORDER: usize = 1 << 16;

/// Opaque graph handle.
pub struct FactoriumGraph {
    inner: Graph,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FactoriumStatus {
    Ok = 0,
    /// The requested object does not exist (no factor, no certificate...).
    NotFound = 1,
    NullPointer = 2,
    ParseError = 3,
    InvalidArgument = 4,
    SizeLimit = 5,
    /// The output buffer is too small; the required length was written.
    BufferTooSmall = 6,
    Panic = 7,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).expect("interior nuls removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn status_of(e: &Error) -> FactoriumStatus {
    set_error(e.to_string());
    match e {
        Error::Parse { .. } => FactoriumStatus::ParseError,
        Error::UnsupportedSize(_) | Error::SizeLimit { .. } => FactoriumStatus::SizeLimit,
        Error::Argument(_) => FactoriumStatus::InvalidArgument,
    }
}

fn guarded(f: impl FnOnce() -> FactoriumStatus) -> FactoriumStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| {
        set_error("internal panic");
        FactoriumStatus::Panic
    })
}

fn null(what: &str) -> FactoriumStatus {
    set_error(format!("{what} is null"));
    FactoriumStatus::NullPointer
}

/// # Safety
/// `g` must be null or a live handle from this library.
unsafe fn graph_ref<'a>(g: *const FactoriumGraph) -> Option<&'a Graph> {
    unsafe { g.as_ref() }.map(|h| &h.inner)
}

/// Message describing the last failure on this thread, or null. The
/// pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn factorium_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |m| m.as_ptr()))
}

/// Parses a NUL-terminated graph6 string into a new handle.
///
/// # Safety
/// `text` must be a valid C string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn factorium_graph_from_graph6(text: *const c_char, out: *mut *mut FactoriumGraph) -> FactoriumStatus {
    guarded(|| {
        if text.is_null() {
            return null("text");
        }
        if out.is_null() {
            return null("out");
        }
        let bytes = unsafe { CStr::from_ptr(text) }.to_bytes();
        match graph6::parse_graph6(bytes) {
            Ok(g) => {
                unsafe { *out = Box::into_raw(Box::new(FactoriumGraph { inner: g })) };
                FactoriumStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Builds a graph on `n` vertices from `edge_count` pairs stored flat in
/// `edges` (`u0, v0, u1, v1, ...`).
///
/// # Safety
/// `edges` must point to `2 * edge_count` values (may be null when
/// `edge_count` is 0) and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn factorium_graph_from_edges(
    n: usize,
    edges: *const u32,
    edge_count: usize,
    out: *mut *mut FactoriumGraph,
) -> FactoriumStatus {
    guarded(|| {
        if out.is_null() {
            return null("out");
        }
        if n > FACTORIUM_MAX_ORDER {
            set_error(format!("at most {FACTORIUM_MAX_ORDER} vertices, got {n}"));
            return FactoriumStatus::SizeLimit;
        }
        let flat: &[u32] = if edge_count == 0 {
            &[]
        } else if edges.is_null() {
            return null("edges");
        } else {
            unsafe { std::slice::from_raw_parts(edges, 2 * edge_count) }
        };
        let pairs = flat.chunks_exact(2).map(|p| (p[0] as usize, p[1] as usize));
        match Graph::from_edges(n, pairs) {
            Ok(g) => {
                unsafe { *out = Box::into_raw(Box::new(FactoriumGraph { inner: g })) };
                FactoriumStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Releases a handle; null is ignored.
///
/// # Safety
/// `g` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn factorium_graph_free(g: *mut FactoriumGraph) {
    if !g.is_null() {
        drop(unsafe { Box::from_raw(g) });
    }
}

/// Number of vertices; 0 for a null handle.
///
/// # Safety
/// `g` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn factorium_graph_order(g: *const FactoriumGraph) -> usize {
    unsafe { graph_ref(g) }.map_or(0, Graph::order)
}

/// Number of edges; 0 for a null handle.
///
/// # Safety
/// `g` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn factorium_graph_edge_count(g: *const FactoriumGraph) -> usize {
    unsafe { graph_ref(g) }.map_or(0, Graph::edge_count)
}

/// Encodes as graph6. Release the string with `factorium_string_free`.
///
/// # Safety
/// `g` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn factorium_graph_to_graph6(g: *const FactoriumGraph, out: *mut *mut c_char) -> FactoriumStatus {
    guarded(|| {
        let Some(g) = (unsafe { graph_ref(g) }) else {
            return null("graph");
        };
        if out.is_null() {
            return null("out");
        }
        match graph6::emit_graph6(g) {
            Ok(s) => {
                let c = CString::new(s).expect("graph6 is printable ASCII");
                unsafe { *out = c.into_raw() };
                FactoriumStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// # Safety
/// `s` must be null or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn factorium_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}

/// Minimum of `d(u) + d(v) - (n + k - 2)` over nonadjacent pairs. When
/// there is no such pair `*has_pair` is false and `*deficit` is left alone.
///
/// # Safety
/// `g` must be a live handle; outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn factorium_ore_deficit(
    g: *const FactoriumGraph,
    k: usize,
    deficit: *mut i64,
    has_pair: *mut bool,
) -> FactoriumStatus {
    guarded(|| {
        let Some(g) = (unsafe { graph_ref(g) }) else {
            return null("graph");
        };
        if deficit.is_null() || has_pair.is_null() {
            return null("output");
        }
        let report = graph::ore_report(g, k);
        unsafe {
            *has_pair = report.deficit.is_some();
            if let Some(d) = report.deficit {
                *deficit = d;
            }
        }
        FactoriumStatus::Ok
    })
}

/// Writes the edges of a k-factor as flat pairs into `edges` (room for
/// `capacity` pairs) and their number into `*edge_count`. Returns
/// `NotFound` when none exists and `BufferTooSmall` when `capacity` is
/// short, with `*edge_count` set to the size needed.
///
/// # Safety
/// `g` must be a live handle, `edges` must hold `2 * capacity` values and
/// `edge_count` must be writable.
#[no_mangle]
pub unsafe extern "C" fn factorium_find_k_factor(
    g: *const FactoriumGraph,
    k: usize,
    edges: *mut u32,
    capacity: usize,
    edge_count: *mut usize,
) -> FactoriumStatus {
    guarded(|| {
        let Some(g) = (unsafe { graph_ref(g) }) else {
            return null("graph");
        };
        if edge_count.is_null() {
            return null("edge_count");
        }
        if k == 0 {
            set_error("k must be at least 1");
            return FactoriumStatus::InvalidArgument;
        }
        let Some(f) = factor::find_k_factor(g, k) else {
            unsafe { *edge_count = 0 };
            return FactoriumStatus::NotFound;
        };
        unsafe { *edge_count = f.edges.len() };
        if f.edges.len() > capacity {
            set_error(format!("need room for {} edges", f.edges.len()));
            return FactoriumStatus::BufferTooSmall;
        }
        if f.edges.is_empty() {
            return FactoriumStatus::Ok;
        }
        if edges.is_null() {
            return null("edges");
        }
        let out = unsafe { std::slice::from_raw_parts_mut(edges, 2 * f.edges.len()) };
        for (slot, &(u, v)) in out.chunks_exact_mut(2).zip(&f.edges) {
            slot[0] = u as u32;
            slot[1] = v as u32;
        }
        FactoriumStatus::Ok
    })
}

/// Minimum-deficiency certificate that no k-factor exists: `S` and `T` as
/// vertex masks and the deficiency `eta`. `NotFound` means a k-factor
/// exists.
///
/// # Safety
/// `g` must be a live handle; outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn factorium_tutte_certificate(
    g: *const FactoriumGraph,
    k: usize,
    eta: *mut i64,
    s_mask: *mut u64,
    t_mask: *mut u64,
) -> FactoriumStatus {
    guarded(|| {
        let Some(g) = (unsafe { graph_ref(g) }) else {
            return null("graph");
        };
        if eta.is_null() || s_mask.is_null() || t_mask.is_null() {
            return null("output");
        }
        match factor::find_tutte_certificate(g, k) {
            Ok(Some(c)) => {
                let mask = |set: &[usize]| set.iter().fold(0u64, |m, &v| m | 1 << v);
                unsafe {
                    *eta = c.eta;
                    *s_mask = mask(&c.s);
                    *t_mask = mask(&c.t);
                }
                FactoriumStatus::Ok
            }
            Ok(None) => FactoriumStatus::NotFound,
            Err(e) => status_of(&e),
        }
    })
}

/// Writes matching `i` as row `i` of `mates` (`n` entries, `mates[i*n+v]`
/// is the partner of `v`) and the number of rows into `*count`.
fn write_mates(f: &Factorization, n: usize, mates: *mut u32, capacity: usize, count: *mut usize) -> FactoriumStatus {
    unsafe { *count = f.len() };
    let need = f.len() * n;
    if need > capacity {
        set_error(format!("need room for {need} entries"));
        return FactoriumStatus::BufferTooSmall;
    }
    if need == 0 {
        return FactoriumStatus::Ok;
    }
    if mates.is_null() {
        return null("mates");
    }
    let out = unsafe { std::slice::from_raw_parts_mut(mates, need) };
    for (row, m) in out.chunks_exact_mut(n).zip(&f.matchings) {
        for &(u, v) in m.edges() {
            row[u] = v as u32;
            row[v] = u as u32;
        }
    }
    FactoriumStatus::Ok
}

/// `k` edge-disjoint perfect matchings as `k` mate rows of `n` entries in
/// `mates` (room for `capacity` entries). `NotFound` when none exist.
///
/// # Safety
/// `g` must be a live handle, `mates` must hold `capacity` values and
/// `count` must be writable.
#[no_mangle]
pub unsafe extern "C" fn factorium_k_disjoint_perfect_matchings(
    g: *const FactoriumGraph,
    k: usize,
    mates: *mut u32,
    capacity: usize,
    count: *mut usize,
) -> FactoriumStatus {
    guarded(|| {
        let Some(g) = (unsafe { graph_ref(g) }) else {
            return null("graph");
        };
        if count.is_null() {
            return null("count");
        }
        match factorization::k_disjoint_perfect_matchings(g, k) {
            Ok(Some(f)) => write_mates(&f, g.order(), mates, capacity, count),
            Ok(None) => {
                unsafe { *count = 0 };
                FactoriumStatus::NotFound
            }
            Err(e) => status_of(&e),
        }
    })
}

/// 1-factorization of a regular graph of even order, laid out like
/// `factorium_k_disjoint_perfect_matchings`.
///
/// # Safety
/// As for `factorium_k_disjoint_perfect_matchings`.
#[no_mangle]
pub unsafe extern "C" fn factorium_one_factorization(
    g: *const FactoriumGraph,
    mates: *mut u32,
    capacity: usize,
    count: *mut usize,
) -> FactoriumStatus {
    guarded(|| {
        let Some(g) = (unsafe { graph_ref(g) }) else {
            return null("graph");
        };
        if count.is_null() {
            return null("count");
        }
        match factorization::one_factorization(g) {
            Ok(Some(f)) => write_mates(&f, g.order(), mates, capacity, count),
            Ok(None) => {
                unsafe { *count = 0 };
                FactoriumStatus::NotFound
            }
            Err(e) => status_of(&e),
        }
    })
}

/// # Safety
/// `g` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn factorium_vertex_connectivity(g: *const FactoriumGraph, out: *mut usize) -> FactoriumStatus {
    guarded(|| {
        let Some(g) = (unsafe { graph_ref(g) }) else {
            return null("graph");
        };
        if out.is_null() {
            return null("out");
        }
        if g.order() < 2 {
            set_error("connectivity needs at least two vertices");
            return FactoriumStatus::InvalidArgument;
        }
        unsafe { *out = graph::vertex_connectivity(g) };
        FactoriumStatus::Ok
    })
}

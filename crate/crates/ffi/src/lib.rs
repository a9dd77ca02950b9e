//! C ABI over the `quasihex` library.
//!
//! Regions and graphs cross the boundary as opaque handles created by the
//! `qh_*_new`/`qh_*_build` functions and released with the matching
//! `qh_*_free`. Every fallible call returns a [`QhStatus`]; on failure a
//! description is available from [`qh_last_error`] on the same thread.
//! Counts are returned as heap-allocated decimal strings (`"17920"`, or
//! `"3/2"` for weighted graphs) that the caller releases with
//! [`qh_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use quasihex::families::FamilySpec;
use quasihex::formulas;
use quasihex::graph::{dual_graph, Counter, MatchGraph, Oracle};
use quasihex::lattice::{self, Region, RegionParams};
use quasihex::Error;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QhStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidParams = 3,
    ResourceLimit = 4,
    PrecisionLoss = 5,
    PreconditionFailed = 6,
    Parse = 7,
    Failed = 8,
    Panic = 9,
}

/// The three region constructions.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QhRegionKind {
    Symmetric = 0,
    Douglas = 1,
    Asymmetric = 2,
}

/// How [`qh_graph_count`] counts perfect matchings.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QhMethod {
    /// The memoized exact counter.
    Counter = 0,
    /// Brute-force enumeration, limited to `max_vertices`.
    Oracle = 1,
}

/// Opaque handle to a constructed region.
pub struct QhRegion(Region);

/// Opaque handle to a weighted matching graph.
pub struct QhGraph(MatchGraph);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(QhStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::InvalidParams(_)
            | Error::BoundaryIntersection { .. }
            | Error::LengthMismatch { .. } => QhStatus::InvalidParams,
            Error::ResourceLimit(_) => QhStatus::ResourceLimit,
            Error::PrecisionLoss(_) => QhStatus::PrecisionLoss,
            Error::PreconditionFailed(_) => QhStatus::PreconditionFailed,
            Error::Parse(_) => QhStatus::Parse,
            _ => QhStatus::Failed,
        };
        Failure(status, e.to_string())
    }
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn guard(body: impl FnOnce() -> Result<(), Failure>) -> QhStatus {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => QhStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_last_error(&msg);
            status
        }
        Err(_) => {
            set_last_error("internal panic");
            QhStatus::Panic
        }
    }
}

fn null() -> Failure {
    Failure(QhStatus::NullPointer, "null pointer argument".into())
}

unsafe fn as_ref<'a, T>(p: *const T) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(null)
}

unsafe fn str_arg<'a>(p: *const c_char) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null());
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| Failure(QhStatus::InvalidUtf8, e.to_string()))
}

unsafe fn slice_arg<'a>(p: *const u32, len: usize) -> Result<&'a [u32], Failure> {
    match (p.is_null(), len) {
        (_, 0) => Ok(&[]),
        (true, _) => Err(null()),
        (false, n) => Ok(std::slice::from_raw_parts(p, n)),
    }
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null());
    }
    out.write(value);
    Ok(())
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    let c = CString::new(s).map_err(|e| Failure(QhStatus::Failed, e.to_string()))?;
    write_out(out, c.into_raw())
}

/// Returns the message of the last failed call on this thread, or null if
/// the last call succeeded. The pointer stays valid until the next call
/// into this library from the same thread.
#[no_mangle]
pub extern "C" fn qh_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must be null or a string returned by this library that has not been
/// freed yet.
#[no_mangle]
pub unsafe extern "C" fn qh_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds a region from its side length and distance lists. Lists that a
/// kind does not use must have length zero.
///
/// # Safety
/// Each list pointer must be valid for its length (or the length must be
/// zero), and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qh_region_new(
    kind: QhRegionKind,
    a: u32,
    d: *const u32,
    d_len: usize,
    c: *const u32,
    c_len: usize,
    dprime: *const u32,
    dprime_len: usize,
    out: *mut *mut QhRegion,
) -> QhStatus {
    guard(|| {
        let (d, c, dprime) = (
            slice_arg(d, d_len)?,
            slice_arg(c, c_len)?,
            slice_arg(dprime, dprime_len)?,
        );
        let kind = match kind {
            QhRegionKind::Symmetric => lattice::RegionKind::Symmetric,
            QhRegionKind::Douglas => lattice::RegionKind::Douglas,
            QhRegionKind::Asymmetric => lattice::RegionKind::Asymmetric,
        };
        let params = RegionParams {
            kind,
            a,
            d: d.to_vec(),
            c: c.to_vec(),
            dprime: dprime.to_vec(),
        };
        let region = lattice::build(&params)?;
        write_out(out, Box::into_raw(Box::new(QhRegion(region))))
    })
}

/// Parses a region from its JSON form.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qh_region_from_json(
    json: *const c_char,
    out: *mut *mut QhRegion,
) -> QhStatus {
    guard(|| {
        let region = Region::from_json(str_arg(json)?)?;
        write_out(out, Box::into_raw(Box::new(QhRegion(region))))
    })
}

/// Serialises a region to JSON.
///
/// # Safety
/// `region` must be a live handle and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qh_region_to_json(
    region: *const QhRegion,
    out: *mut *mut c_char,
) -> QhStatus {
    guard(|| write_string(out, as_ref(region)?.0.to_json()?))
}

/// Number of unit cells in the region, or zero for a null handle.
///
/// # Safety
/// `region` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qh_region_cell_count(region: *const QhRegion) -> usize {
    region.as_ref().map_or(0, |r| r.0.len())
}

/// Evaluates the closed-form tiling count of the region.
///
/// # Safety
/// `region` must be a live handle and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qh_region_count_formula(
    region: *const QhRegion,
    out: *mut *mut c_char,
) -> QhStatus {
    guard(|| {
        write_string(
            out,
            formulas::count_region(&as_ref(region)?.0)?
                .value
                .to_string(),
        )
    })
}

/// Extracts the dual graph of the region as a new graph handle.
///
/// # Safety
/// `region` must be a live handle and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qh_region_dual_graph(
    region: *const QhRegion,
    out: *mut *mut QhGraph,
) -> QhStatus {
    guard(|| {
        let g = dual_graph(&as_ref(region)?.0);
        write_out(out, Box::into_raw(Box::new(QhGraph(g))))
    })
}

/// Releases a region handle. Null is ignored.
///
/// # Safety
/// `region` must be null or a handle that has not been freed yet.
#[no_mangle]
pub unsafe extern "C" fn qh_region_free(region: *mut QhRegion) {
    if !region.is_null() {
        drop(Box::from_raw(region));
    }
}

/// Builds a named graph family such as `"ar"`, `"gamma"` or `"hexagon-dual"`.
///
/// # Safety
/// `family` must be a NUL-terminated string, `params` must be valid for
/// `params_len` values, and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qh_family_build(
    family: *const c_char,
    params: *const u32,
    params_len: usize,
    out: *mut *mut QhGraph,
) -> QhStatus {
    guard(|| {
        let g = FamilySpec::parse(str_arg(family)?, slice_arg(params, params_len)?)?.build()?;
        write_out(out, Box::into_raw(Box::new(QhGraph(g))))
    })
}

/// Parses a graph from its JSON form.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qh_graph_from_json(
    json: *const c_char,
    out: *mut *mut QhGraph,
) -> QhStatus {
    guard(|| {
        let g = MatchGraph::from_json(str_arg(json)?)?;
        write_out(out, Box::into_raw(Box::new(QhGraph(g))))
    })
}

/// Serialises a graph to JSON.
///
/// # Safety
/// `graph` must be a live handle and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qh_graph_to_json(
    graph: *const QhGraph,
    out: *mut *mut c_char,
) -> QhStatus {
    guard(|| write_string(out, as_ref(graph)?.0.to_json()?))
}

/// Number of vertices, or zero for a null handle.
///
/// # Safety
/// `graph` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qh_graph_vertex_count(graph: *const QhGraph) -> usize {
    graph.as_ref().map_or(0, |g| g.0.vertex_count())
}

/// Number of edges, or zero for a null handle.
///
/// # Safety
/// `graph` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn qh_graph_edge_count(graph: *const QhGraph) -> usize {
    graph.as_ref().map_or(0, |g| g.0.edge_count())
}

/// Counts weighted perfect matchings. `max_vertices` caps the graph size
/// for the oracle and is ignored by the counter.
///
/// # Safety
/// `graph` must be a live handle and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qh_graph_count(
    graph: *const QhGraph,
    method: QhMethod,
    max_vertices: usize,
    out: *mut *mut c_char,
) -> QhStatus {
    guard(|| {
        let g = &as_ref(graph)?.0;
        let count = match method {
            QhMethod::Counter => Counter::default().count(g)?,
            QhMethod::Oracle => Oracle::with_max_vertices(max_vertices).count(g)?,
        };
        write_string(out, count.to_string())
    })
}

/// Releases a graph handle. Null is ignored.
///
/// # Safety
/// `graph` must be null or a handle that has not been freed yet.
#[no_mangle]
pub unsafe extern "C" fn qh_graph_free(graph: *mut QhGraph) {
    if !graph.is_null() {
        drop(Box::from_raw(graph));
    }
}

/// Plane partitions in an `a` by `b` by `c` box.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qh_formula_macmahon(
    a: u64,
    b: u64,
    c: u64,
    out: *mut *mut c_char,
) -> QhStatus {
    guard(|| write_string(out, formulas::macmahon(a, b, c).to_string()))
}

/// Domino tilings of the Aztec diamond of order `n`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qh_formula_aztec_diamond(n: u64, out: *mut *mut c_char) -> QhStatus {
    guard(|| write_string(out, formulas::aztec_diamond(n).to_string()))
}

/// Domino tilings of a `2m` by `2n` board.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qh_formula_kasteleyn(m: u32, n: u32, out: *mut *mut c_char) -> QhStatus {
    guard(|| write_string(out, formulas::kasteleyn_rectangle(m, n)?.to_string()))
}

/// Perfect matchings of the gamma graph with parameters `a` to `e`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qh_formula_gamma(
    a: u32,
    b: u32,
    c: u32,
    d: u32,
    e: u32,
    out: *mut *mut c_char,
) -> QhStatus {
    guard(|| write_string(out, formulas::gamma_count(a, b, c, d, e)?.to_string()))
}

//! C ABI over the `sparsity` crate.
//!
//! Graphs live behind an opaque [`SparsityGraph`] handle. Every fallible
//! function returns a [`SparsityStatus`]; on failure a message is available
//! from [`sparsity_last_error`] on the same thread. Orders cross the
//! boundary as arrays of `n` vertex ids, smallest first; a null order
//! pointer means ascending ids. Strings returned by the library must be
//! released with [`sparsity_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use sparsity::augment::{build_augmented, extract_spanning_tree, verify_claims};
use sparsity::reach::{exact_optimum, greedy_order, metric_profile_with, AdmMode, Metric};
use sparsity::scatter::{audit, scatter_extract};
use sparsity::splitter::{play_game, replay, ConnectorKind, Winner, WcolSplitter};
use sparsity::uniform::{build_uniform_order, verify_invariant, Variant};
use sparsity::{parse_graph, Error, Graph, LinearOrder, VertexSet};

/// Parent entry of the root in [`sparsity_spanning_tree`].
pub const SPARSITY_NO_PARENT: usize = usize::MAX;

/// Opaque graph handle.
pub struct SparsityGraph {
    graph: Graph,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SparsityStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    CapExceeded = 4,
    Precondition = 5,
    /// The computation ran but its self-check failed.
    CheckFailed = 6,
    Internal = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SparsityMetric {
    Wcol = 0,
    Col = 1,
    Adm = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SparsityVariant {
    Plain = 0,
    Successor = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SparsityConnector {
    MaxBall = 0,
    First = 1,
    /// Uses the `seed` argument.
    Random = 2,
}

/// Profile maxima under one order.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SparsityProfile {
    pub wcol: usize,
    pub col: usize,
    pub adm_lower: usize,
    pub adm_upper: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn status_of(err: &Error) -> SparsityStatus {
    match err {
        Error::Parse { .. } | Error::VertexOutOfRange { .. } | Error::SelfLoop { .. } => SparsityStatus::Parse,
        Error::CapExceeded { .. } => SparsityStatus::CapExceeded,
        Error::Precondition(_) | Error::TargetUnreachable { .. } => SparsityStatus::Precondition,
        Error::SpanningTree(_) | Error::IllegalMove { .. } => SparsityStatus::CheckFailed,
        Error::UnknownVertex(_) | Error::InvalidOrder(_) | Error::NotAComponent(_) => SparsityStatus::InvalidArgument,
        Error::Io(_) | Error::Json(_) => SparsityStatus::Internal,
    }
}

struct Fail(SparsityStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(SparsityStatus::NullPointer, format!("{what} is null"))
}

/// Runs `f`, converting errors and panics into a status code.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> SparsityStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            SparsityStatus::Ok
        }
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            SparsityStatus::Internal
        }
    }
}

unsafe fn graph_ref<'a>(g: *const SparsityGraph) -> Result<&'a Graph, Fail> {
    g.as_ref().map(|h| &h.graph).ok_or_else(|| null("graph"))
}

unsafe fn order_arg(g: &Graph, order: *const usize) -> Result<LinearOrder, Fail> {
    if order.is_null() {
        return Ok(LinearOrder::identity(g.n()));
    }
    let seq = std::slice::from_raw_parts(order, g.n()).to_vec();
    Ok(LinearOrder::from_sequence(seq)?)
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(value);
    Ok(())
}

unsafe fn write_slice(out: *mut usize, values: &[usize]) {
    if !out.is_null() {
        ptr::copy_nonoverlapping(values.as_ptr(), out, values.len());
    }
}

fn json_string(value: &impl serde::Serialize) -> Result<*mut c_char, Fail> {
    let text = serde_json::to_string(value).map_err(Error::from)?;
    Ok(CString::new(text).map_err(|e| Fail(SparsityStatus::Internal, e.to_string()))?.into_raw())
}

/// Message for the last failed call on this thread, or null. Valid until
/// the next library call on the same thread.
#[no_mangle]
pub extern "C" fn sparsity_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn sparsity_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Builds a graph on `n` vertices from `edge_count` pairs stored flat in
/// `edges` (`2 * edge_count` ids).
///
/// # Safety
/// `edges` must point to `2 * edge_count` readable ids (or be null when
/// `edge_count` is 0); `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sparsity_graph_new(
    n: usize,
    edges: *const usize,
    edge_count: usize,
    out: *mut *mut SparsityGraph,
) -> SparsityStatus {
    guard(|| {
        let flat: &[usize] = if edge_count == 0 {
            &[]
        } else if edges.is_null() {
            return Err(null("edges"));
        } else {
            std::slice::from_raw_parts(edges, 2 * edge_count)
        };
        let graph = Graph::from_edges(n, flat.chunks_exact(2).map(|p| (p[0], p[1])))?;
        write_out(out, Box::into_raw(Box::new(SparsityGraph { graph })))
    })
}

/// Parses an edge-list document. Ids are remapped densely when the
/// document has no `p n m` header.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sparsity_graph_parse(text: *const c_char, out: *mut *mut SparsityGraph) -> SparsityStatus {
    guard(|| {
        if text.is_null() {
            return Err(null("text"));
        }
        let text = CStr::from_ptr(text).to_str().map_err(|e| Fail(SparsityStatus::Parse, e.to_string()))?;
        let parsed = parse_graph(text)?;
        write_out(out, Box::into_raw(Box::new(SparsityGraph { graph: parsed.graph })))
    })
}

/// # Safety
/// `g` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn sparsity_graph_free(g: *mut SparsityGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// # Safety
/// `g` must be a live handle or null (returns 0).
#[no_mangle]
pub unsafe extern "C" fn sparsity_graph_vertex_count(g: *const SparsityGraph) -> usize {
    g.as_ref().map_or(0, |h| h.graph.n())
}

/// # Safety
/// `g` must be a live handle or null (returns 0).
#[no_mangle]
pub unsafe extern "C" fn sparsity_graph_edge_count(g: *const SparsityGraph) -> usize {
    g.as_ref().map_or(0, |h| h.graph.m())
}

/// Profile maxima under `order` at radius `r`. The per-vertex arrays are
/// optional (null to skip) and must hold `n` entries each.
///
/// # Safety
/// Pointers must be valid for the sizes described above.
#[no_mangle]
pub unsafe extern "C" fn sparsity_profile(
    g: *const SparsityGraph,
    order: *const usize,
    r: usize,
    exact_adm: bool,
    out: *mut SparsityProfile,
    wreach_sizes: *mut usize,
    adm_upper: *mut usize,
) -> SparsityStatus {
    guard(|| {
        let g = graph_ref(g)?;
        let order = order_arg(g, order)?;
        let mode = if exact_adm { AdmMode::Exact } else { AdmMode::Bounds };
        let p = metric_profile_with(g, &order, r, mode)?;
        let w: Vec<usize> = p.per_vertex.iter().map(|v| v.wreach).collect();
        let a: Vec<usize> = p.per_vertex.iter().map(|v| v.adm_upper).collect();
        write_slice(wreach_sizes, &w);
        write_slice(adm_upper, &a);
        write_out(out, SparsityProfile { wcol: p.wcol, col: p.col, adm_lower: p.adm_lower, adm_upper: p.adm_upper })
    })
}

/// Minimum of `metric` over all orders; `out_order` (optional, `n`
/// entries) receives an optimal order.
///
/// # Safety
/// Pointers must be valid for the sizes described above.
#[no_mangle]
pub unsafe extern "C" fn sparsity_exact_optimum(
    g: *const SparsityGraph,
    r: usize,
    metric: SparsityMetric,
    cap: usize,
    out_value: *mut usize,
    out_order: *mut usize,
) -> SparsityStatus {
    guard(|| {
        let g = graph_ref(g)?;
        let metric = match metric {
            SparsityMetric::Wcol => Metric::Wcol,
            SparsityMetric::Col => Metric::Col,
            SparsityMetric::Adm => Metric::Adm,
        };
        let opt = exact_optimum(g, r, metric, cap)?;
        write_slice(out_order, opt.order.sequence());
        write_out(out_value, opt.value)
    })
}

/// Heuristic order for radius `r` into `out_order` (`n` entries).
///
/// # Safety
/// `out_order` must hold `n` entries.
#[no_mangle]
pub unsafe extern "C" fn sparsity_greedy_order(g: *const SparsityGraph, r: usize, out_order: *mut usize) -> SparsityStatus {
    guard(|| {
        let g = graph_ref(g)?;
        if out_order.is_null() {
            return Err(null("out_order"));
        }
        write_slice(out_order, greedy_order(g, r).sequence());
        Ok(())
    })
}

/// Radius-independent fragment order into `out_order` (`n` entries). The
/// construction trace is verified; a failed check yields `CheckFailed`.
/// `out_trace_json` (optional) receives the trace as JSON.
///
/// # Safety
/// `out_order` must hold `n` entries; `out_trace_json` must be writable or null.
#[no_mangle]
pub unsafe extern "C" fn sparsity_uniform_order(
    g: *const SparsityGraph,
    variant: SparsityVariant,
    out_order: *mut usize,
    out_trace_json: *mut *mut c_char,
) -> SparsityStatus {
    guard(|| {
        let g = graph_ref(g)?;
        if out_order.is_null() {
            return Err(null("out_order"));
        }
        let variant = match variant {
            SparsityVariant::Plain => Variant::Plain,
            SparsityVariant::Successor => Variant::Successor,
        };
        let (order, trace) = build_uniform_order(g, variant)?;
        let report = verify_invariant(g, &trace);
        if !report.ok {
            return Err(Fail(SparsityStatus::CheckFailed, report.violation.unwrap_or_default()));
        }
        write_slice(out_order, order.sequence());
        if !out_trace_json.is_null() {
            out_trace_json.write(json_string(&trace)?);
        }
        Ok(())
    })
}

/// Scatter extraction on `a` (`a_len` ids). The result JSON, including its
/// audit, goes to `out_json`; a failed audit yields `CheckFailed`.
///
/// # Safety
/// `a` must hold `a_len` ids; `order` is null or holds `n` ids; `out_json` writable.
#[no_mangle]
pub unsafe extern "C" fn sparsity_scatter(
    g: *const SparsityGraph,
    order: *const usize,
    r: usize,
    a: *const usize,
    a_len: usize,
    m: usize,
    out_json: *mut *mut c_char,
) -> SparsityStatus {
    guard(|| {
        let g = graph_ref(g)?;
        let order = order_arg(g, order)?;
        if a.is_null() && a_len > 0 {
            return Err(null("a"));
        }
        let members: &[usize] = if a_len == 0 { &[] } else { std::slice::from_raw_parts(a, a_len) };
        for &v in members {
            g.check_vertex(v)?;
        }
        let a = VertexSet::from_unsorted(members.to_vec());
        let res = scatter_extract(g, &order, r, &a, m)?;
        let rep = audit(g, &a, &res);
        let mut value = serde_json::to_value(&res).map_err(Error::from)?;
        value["audit"] = serde_json::to_value(&rep).map_err(Error::from)?;
        write_out(out_json, json_string(&value)?)?;
        if rep.ok {
            Ok(())
        } else {
            Err(Fail(SparsityStatus::CheckFailed, "scatter audit failed".into()))
        }
    })
}

/// Plays the splitter game with the order-minimum splitter. The transcript
/// is replay-validated.
///
/// # Safety
/// `order` is null or holds `n` ids; outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn sparsity_splitter_game(
    g: *const SparsityGraph,
    order: *const usize,
    r: usize,
    connector: SparsityConnector,
    seed: u64,
    round_cap: usize,
    out_rounds: *mut usize,
    out_splitter_won: *mut bool,
) -> SparsityStatus {
    guard(|| {
        let g = graph_ref(g)?;
        let order = order_arg(g, order)?;
        let kind = match connector {
            SparsityConnector::MaxBall => ConnectorKind::MaxBall,
            SparsityConnector::First => ConnectorKind::First,
            SparsityConnector::Random => ConnectorKind::Random(seed),
        };
        let mut splitter = WcolSplitter { order };
        let mut conn = kind.build();
        let t = play_game(g, r, &mut splitter, conn.as_mut(), round_cap)?;
        replay(g, &t).map_err(|e| Fail(SparsityStatus::CheckFailed, e))?;
        write_out(out_rounds, t.rounds_used)?;
        write_out(out_splitter_won, t.winner == Winner::Splitter)
    })
}

/// Spanning tree of the augmented graph as a parent array (`n` entries,
/// [`SPARSITY_NO_PARENT`] at the root). `out_added_edges` (optional)
/// receives the number of edges added to the input graph.
///
/// # Safety
/// `out_parent` must hold `n` entries; the other outputs writable or null.
#[no_mangle]
pub unsafe extern "C" fn sparsity_spanning_tree(
    g: *const SparsityGraph,
    out_parent: *mut usize,
    out_root: *mut usize,
    out_added_edges: *mut usize,
) -> SparsityStatus {
    guard(|| {
        let g = graph_ref(g)?;
        if out_parent.is_null() {
            return Err(null("out_parent"));
        }
        let aug = build_augmented(g)?;
        let tree = extract_spanning_tree(&aug)?;
        let parents: Vec<usize> = tree.parent.iter().map(|p| p.unwrap_or(SPARSITY_NO_PARENT)).collect();
        write_slice(out_parent, &parents);
        if !out_root.is_null() {
            out_root.write(tree.root);
        }
        if !out_added_edges.is_null() {
            out_added_edges.write(aug.added.len());
        }
        Ok(())
    })
}

/// Claim checks of the augmentation at radius `r`; the report JSON goes to
/// `out_json` (optional) and `out_ok` receives the verdict.
///
/// # Safety
/// `out_ok` must be writable; `out_json` writable or null.
#[no_mangle]
pub unsafe extern "C" fn sparsity_verify_claims(
    g: *const SparsityGraph,
    r: usize,
    out_ok: *mut bool,
    out_json: *mut *mut c_char,
) -> SparsityStatus {
    guard(|| {
        let g = graph_ref(g)?;
        let rep = verify_claims(&build_augmented(g)?, r);
        if !out_json.is_null() {
            out_json.write(json_string(&rep)?);
        }
        write_out(out_ok, rep.ok)
    })
}

/// # Safety
/// `s` must be a string returned by this library, or null.
#[no_mangle]
pub unsafe extern "C" fn sparsity_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

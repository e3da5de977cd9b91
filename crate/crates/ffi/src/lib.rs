//! C ABI over the venuevec toolkit.
//!
//! Objects cross the boundary as opaque handles created by `*_load` /
//! `*_new` functions and released with the matching `*_free`. Every
//! fallible function returns a [`VvStatus`]; on failure a description is
//! available from [`vv_last_error_message`] on the same thread. Strings are
//! NUL-terminated UTF-8. No function unwinds across the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::ptr;

use venuevec::corpus::{generate_trail_corpus, load_citation_graph, write_trails, PaperGraph};
use venuevec::sgns::{train, TrainConfig};
use venuevec::vectorspace::{build_axis, project_on_axis, Neighbor, VectorStore};
use venuevec::Error;

/// Result codes. `VV_STATUS_OK` is zero; every other value is an error.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VvStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Io = 3,
    Parse = 4,
    Integrity = 5,
    Config = 6,
    Lookup = 7,
    Unsatisfiable = 8,
    UndefinedSimilarity = 9,
    DegenerateAxis = 10,
    Convergence = 11,
    Undefined = 12,
    Panic = 99,
}

impl From<&Error> for VvStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::Io { .. } => VvStatus::Io,
            Error::Parse { .. } => VvStatus::Parse,
            Error::Integrity(_) => VvStatus::Integrity,
            Error::Config(_) => VvStatus::Config,
            Error::Lookup(_) => VvStatus::Lookup,
            Error::UnsatisfiableCorpus => VvStatus::Unsatisfiable,
            Error::UndefinedSimilarity => VvStatus::UndefinedSimilarity,
            Error::DegenerateAxis => VvStatus::DegenerateAxis,
            Error::Convergence { .. } => VvStatus::Convergence,
            Error::Undefined(_) => VvStatus::Undefined,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(CString::new(msg).expect("NULs removed")));
}

struct Failure(VvStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(VvStatus::from(&e), e.to_string())
    }
}

type FfiResult<T> = Result<T, Failure>;

/// Runs `f`, converting errors and panics into a status plus message.
fn guard(f: impl FnOnce() -> FfiResult<()>) -> VvStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            VvStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            VvStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> FfiResult<&'a str> {
    if p.is_null() {
        return Err(Failure(VvStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(VvStatus::InvalidUtf8, format!("{what} is not valid UTF-8")))
}

unsafe fn str_list<'a>(p: *const *const c_char, n: usize, what: &str) -> FfiResult<Vec<&'a str>> {
    if p.is_null() && n > 0 {
        return Err(Failure(VvStatus::NullPointer, format!("{what} is null")));
    }
    (0..n).map(|i| str_arg(*p.add(i), what)).collect()
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> FfiResult<&'a T> {
    p.as_ref().ok_or_else(|| Failure(VvStatus::NullPointer, format!("{what} handle is null")))
}

unsafe fn out_ptr<'a, T>(p: *mut T, what: &str) -> FfiResult<&'a mut T> {
    p.as_mut().ok_or_else(|| Failure(VvStatus::NullPointer, format!("{what} output pointer is null")))
}

/// Message describing the most recent failure on this thread, or NULL if
/// the last call succeeded. Valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn vv_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn vv_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

// ---------------------------------------------------------------------------
// Vector store

/// Opaque handle to loaded periodical vectors.
pub struct VvStore(VectorStore);

/// Loads a model file. `metadata_path` may be NULL.
///
/// # Safety
/// String arguments must be NULL or valid NUL-terminated strings; `out`
/// must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn vv_store_load(
    model_path: *const c_char,
    metadata_path: *const c_char,
    out: *mut *mut VvStore,
) -> VvStatus {
    guard(|| {
        let out = out_ptr(out, "store")?;
        let model = str_arg(model_path, "model path")?;
        let meta = if metadata_path.is_null() { None } else { Some(PathBuf::from(str_arg(metadata_path, "metadata path")?)) };
        let store = VectorStore::load(model, meta.as_deref())?;
        *out = Box::into_raw(Box::new(VvStore(store)));
        Ok(())
    })
}

/// Releases a store. NULL is ignored.
///
/// # Safety
/// `store` must come from [`vv_store_load`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn vv_store_free(store: *mut VvStore) {
    if !store.is_null() {
        drop(Box::from_raw(store));
    }
}

/// Number of periodicals, or 0 for a NULL handle.
///
/// # Safety
/// `store` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn vv_store_len(store: *const VvStore) -> usize {
    store.as_ref().map_or(0, |s| s.0.names().len())
}

/// Vector dimension, or 0 for a NULL handle.
///
/// # Safety
/// `store` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn vv_store_dim(store: *const VvStore) -> usize {
    store.as_ref().map_or(0, |s| s.0.dim())
}

/// Cosine similarity between two periodicals.
///
/// # Safety
/// Pointers must be valid; strings NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn vv_store_similarity(
    store: *const VvStore,
    a: *const c_char,
    b: *const c_char,
    out: *mut f64,
) -> VvStatus {
    guard(|| {
        let s = &handle(store, "store")?.0;
        let out = out_ptr(out, "similarity")?;
        let (a, b) = (str_arg(a, "first id")?, str_arg(b, "second id")?);
        *out = venuevec::vectorspace::cosine_similarity(s.unit_vector(a)?, s.unit_vector(b)?)?;
        Ok(())
    })
}

/// Opaque ranked result list.
pub struct VvNeighbors {
    ids: Vec<CString>,
    scores: Vec<f64>,
}

fn neighbors(list: Vec<Neighbor>) -> *mut VvNeighbors {
    let (ids, scores) = list
        .into_iter()
        .map(|n| (CString::new(n.id).expect("ids contain no NUL"), n.score))
        .unzip();
    Box::into_raw(Box::new(VvNeighbors { ids, scores }))
}

/// The `top_n` periodicals most similar to `id`.
///
/// # Safety
/// Pointers must be valid; strings NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn vv_store_most_similar(
    store: *const VvStore,
    id: *const c_char,
    top_n: usize,
    out: *mut *mut VvNeighbors,
) -> VvStatus {
    guard(|| {
        let s = &handle(store, "store")?.0;
        let out = out_ptr(out, "neighbors")?;
        *out = neighbors(s.most_similar(str_arg(id, "id")?, top_n, &[])?);
        Ok(())
    })
}

/// The `top_n` periodicals closest to `c − a + b`, excluding the three
/// query periodicals.
///
/// # Safety
/// Pointers must be valid; strings NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn vv_store_analogy(
    store: *const VvStore,
    a: *const c_char,
    b: *const c_char,
    c: *const c_char,
    top_n: usize,
    out: *mut *mut VvNeighbors,
) -> VvStatus {
    guard(|| {
        let s = &handle(store, "store")?.0;
        let out = out_ptr(out, "neighbors")?;
        *out = neighbors(s.analogy_query(str_arg(a, "a")?, str_arg(b, "b")?, str_arg(c, "c")?, top_n)?);
        Ok(())
    })
}

/// Cosine projection of `id` on the axis from the centroid of `negative`
/// to the centroid of `positive`.
///
/// # Safety
/// Arrays must hold the given number of valid strings.
#[no_mangle]
pub unsafe extern "C" fn vv_store_project(
    store: *const VvStore,
    id: *const c_char,
    positive: *const *const c_char,
    n_positive: usize,
    negative: *const *const c_char,
    n_negative: usize,
    out: *mut f64,
) -> VvStatus {
    guard(|| {
        let s = &handle(store, "store")?.0;
        let out = out_ptr(out, "projection")?;
        let pos = str_list(positive, n_positive, "positive id")?;
        let neg = str_list(negative, n_negative, "negative id")?;
        let axis = build_axis(s, &pos, &neg)?;
        *out = project_on_axis(s, str_arg(id, "id")?, &axis)?;
        Ok(())
    })
}

/// Number of entries, or 0 for NULL.
///
/// # Safety
/// `list` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn vv_neighbors_len(list: *const VvNeighbors) -> usize {
    list.as_ref().map_or(0, |l| l.ids.len())
}

/// Periodical id at position `i`, or NULL when out of range. The string
/// lives as long as the list.
///
/// # Safety
/// `list` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn vv_neighbors_id(list: *const VvNeighbors, i: usize) -> *const c_char {
    list.as_ref().and_then(|l| l.ids.get(i)).map_or(ptr::null(), |s| s.as_ptr())
}

/// Score at position `i`, or NaN when out of range.
///
/// # Safety
/// `list` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn vv_neighbors_score(list: *const VvNeighbors, i: usize) -> f64 {
    list.as_ref().and_then(|l| l.scores.get(i).copied()).unwrap_or(f64::NAN)
}

/// Releases a result list. NULL is ignored.
///
/// # Safety
/// `list` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn vv_neighbors_free(list: *mut VvNeighbors) {
    if !list.is_null() {
        drop(Box::from_raw(list));
    }
}

// ---------------------------------------------------------------------------
// Citation graph, walks and training

/// Opaque handle to a loaded paper citation graph.
pub struct VvGraph(PaperGraph);

/// Loads `edges.tsv` and `papers.tsv`.
///
/// # Safety
/// Strings must be valid; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn vv_graph_load(
    edges_path: *const c_char,
    papers_path: *const c_char,
    out: *mut *mut VvGraph,
) -> VvStatus {
    guard(|| {
        let out = out_ptr(out, "graph")?;
        let (g, _) = load_citation_graph(str_arg(edges_path, "edges path")?, str_arg(papers_path, "papers path")?)?;
        *out = Box::into_raw(Box::new(VvGraph(g)));
        Ok(())
    })
}

/// Releases a graph. NULL is ignored.
///
/// # Safety
/// `graph` must come from [`vv_graph_load`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn vv_graph_free(graph: *mut VvGraph) {
    if !graph.is_null() {
        drop(Box::from_raw(graph));
    }
}

/// # Safety
/// `graph` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn vv_graph_paper_count(graph: *const VvGraph) -> usize {
    graph.as_ref().map_or(0, |g| g.0.paper_count())
}

/// # Safety
/// `graph` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn vv_graph_edge_count(graph: *const VvGraph) -> usize {
    graph.as_ref().map_or(0, |g| g.0.edge_count())
}

/// # Safety
/// `graph` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn vv_graph_periodical_count(graph: *const VvGraph) -> usize {
    graph.as_ref().map_or(0, |g| g.0.periodical_count())
}

/// Samples `n` citation trails and writes them as periodical trails.
///
/// # Safety
/// `graph` must be a live handle and `out_path` a valid string.
#[no_mangle]
pub unsafe extern "C" fn vv_walk(
    graph: *const VvGraph,
    n: usize,
    seed: u64,
    workers: usize,
    out_path: *const c_char,
) -> VvStatus {
    guard(|| {
        let g = &handle(graph, "graph")?.0;
        let corpus = generate_trail_corpus(g, n, seed, workers)?;
        write_trails(&corpus, str_arg(out_path, "output path")?)?;
        Ok(())
    })
}

/// Training hyperparameters. `subsample <= 0` disables subsampling.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct VvTrainConfig {
    pub window: usize,
    pub dim: usize,
    pub negatives: usize,
    pub min_count: u64,
    pub epochs: usize,
    pub initial_lr: f64,
    pub final_lr: f64,
    pub subsample: f64,
    pub shrink_window: bool,
    pub noise_exponent: f64,
    pub seed: u64,
}

/// The library's default training configuration.
#[no_mangle]
pub extern "C" fn vv_train_config_default() -> VvTrainConfig {
    let d = TrainConfig::default();
    VvTrainConfig {
        window: d.window,
        dim: d.dim,
        negatives: d.negatives,
        min_count: d.min_count,
        epochs: d.epochs,
        initial_lr: d.initial_lr,
        final_lr: d.final_lr,
        subsample: d.subsample.unwrap_or(0.0),
        shrink_window: d.shrink_window,
        noise_exponent: d.noise_exponent,
        seed: d.seed,
    }
}

/// Trains on a trail file and writes the model file.
///
/// # Safety
/// `config` must point to a valid struct; strings must be valid.
#[no_mangle]
pub unsafe extern "C" fn vv_train(
    corpus_path: *const c_char,
    config: *const VvTrainConfig,
    workers: usize,
    out_path: *const c_char,
) -> VvStatus {
    guard(|| {
        let c = *handle(config, "config")?;
        let cfg = TrainConfig {
            window: c.window,
            dim: c.dim,
            negatives: c.negatives,
            min_count: c.min_count,
            epochs: c.epochs,
            initial_lr: c.initial_lr,
            final_lr: c.final_lr,
            subsample: (c.subsample > 0.0).then_some(c.subsample),
            shrink_window: c.shrink_window,
            noise_exponent: c.noise_exponent,
            seed: c.seed,
        };
        let m = train(str_arg(corpus_path, "corpus path")?, &cfg, workers)?;
        m.save(str_arg(out_path, "output path")?)?;
        Ok(())
    })
}

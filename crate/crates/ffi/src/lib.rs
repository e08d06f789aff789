//! C ABI over the `tsim` library.
//!
//! Every fallible call returns a [`TsimStatus`] and writes results through out
//! pointers. Objects are opaque handles owned by the caller and released with
//! the matching `*_free` function. After a non-`Ok` status,
//! [`tsim_last_error_message`] describes the failure on the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use tsim::{Clustering, Dataset, Error, SimilarityConfig, SimilarityMatrix};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TsimStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidArgument = 3,
    Parse = 4,
    NotFound = 5,
    Compute = 6,
    OutOfRange = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TsimMeasure {
    Tsim = 0,
    Jaccard = 1,
    Cosine = 2,
    Euclidean = 3,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TsimStdMode {
    Sample = 0,
    Population = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TsimConfig {
    pub measure: TsimMeasure,
    pub std_mode: TsimStdMode,
    /// Must be finite and >= 1.
    pub lambda: f64,
}

/// Opaque transaction dataset.
pub struct TsimDataset(Dataset);

/// Opaque pairwise similarity matrix.
pub struct TsimMatrix(SimilarityMatrix);

/// Opaque threshold clustering.
pub struct TsimClustering(Clustering);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn fail(status: TsimStatus, msg: impl Into<String>) -> TsimStatus {
    set_last_error(msg);
    status
}

fn status_of(err: &Error) -> TsimStatus {
    match err.exit_code() {
        1 => TsimStatus::InvalidArgument,
        2 => TsimStatus::Parse,
        _ if matches!(err, Error::NotFound(_)) => TsimStatus::NotFound,
        _ => TsimStatus::Compute,
    }
}

/// Runs `body`, converting library errors and panics into status codes.
fn guard(body: impl FnOnce() -> Result<(), TsimStatus>) -> TsimStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            TsimStatus::Ok
        }
        Ok(Err(status)) => status,
        Err(_) => fail(TsimStatus::Panic, "internal panic"),
    }
}

fn lib<T>(r: tsim::Result<T>) -> Result<T, TsimStatus> {
    r.map_err(|e| fail(status_of(&e), e.to_string()))
}

unsafe fn deref<'a, T>(p: *const T) -> Result<&'a T, TsimStatus> {
    p.as_ref()
        .ok_or_else(|| fail(TsimStatus::NullPointer, "null handle"))
}

unsafe fn out_ptr<'a, T>(p: *mut T) -> Result<&'a mut T, TsimStatus> {
    p.as_mut()
        .ok_or_else(|| fail(TsimStatus::NullPointer, "null output pointer"))
}

unsafe fn c_str<'a>(p: *const c_char) -> Result<&'a str, TsimStatus> {
    if p.is_null() {
        return Err(fail(TsimStatus::NullPointer, "null string"));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail(TsimStatus::InvalidUtf8, "string is not valid UTF-8"))
}

unsafe fn bytes<'a>(data: *const u8, len: usize) -> Result<&'a [u8], TsimStatus> {
    if len == 0 {
        return Ok(&[]);
    }
    if data.is_null() {
        return Err(fail(TsimStatus::NullPointer, "null buffer"));
    }
    Ok(std::slice::from_raw_parts(data, len))
}

fn to_c_string(bytes: Vec<u8>) -> Result<*mut c_char, TsimStatus> {
    CString::new(bytes)
        .map(CString::into_raw)
        .map_err(|_| fail(TsimStatus::Compute, "output contains a NUL byte"))
}

impl From<TsimConfig> for SimilarityConfig {
    fn from(c: TsimConfig) -> Self {
        SimilarityConfig {
            lambda: c.lambda,
            std_mode: match c.std_mode {
                TsimStdMode::Sample => tsim::StdMode::Sample,
                TsimStdMode::Population => tsim::StdMode::Population,
            },
            measure: match c.measure {
                TsimMeasure::Tsim => tsim::Measure::Tsim,
                TsimMeasure::Jaccard => tsim::Measure::Jaccard,
                TsimMeasure::Cosine => tsim::Measure::Cosine,
                TsimMeasure::Euclidean => tsim::Measure::Euclidean,
            },
        }
    }
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn tsim_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// TSIM with sample deviation and lambda 1.
#[no_mangle]
pub extern "C" fn tsim_config_default() -> TsimConfig {
    TsimConfig {
        measure: TsimMeasure::Tsim,
        std_mode: TsimStdMode::Sample,
        lambda: 1.0,
    }
}

/// Message for the last failed call on this thread, or NULL after a success.
/// The pointer stays valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn tsim_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Parses basket CSV (`transaction_id,item[,count]`).
///
/// # Safety
/// `data` must point to `len` readable bytes; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tsim_dataset_parse_basket(
    data: *const u8,
    len: usize,
    out: *mut *mut TsimDataset,
) -> TsimStatus {
    guard(|| {
        let out = out_ptr(out)?;
        let ds = lib(tsim::io::parse_basket_file(bytes(data, len)?))?;
        *out = Box::into_raw(Box::new(TsimDataset(ds)));
        Ok(())
    })
}

/// Parses a transaction/item count matrix CSV.
///
/// # Safety
/// `data` must point to `len` readable bytes; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tsim_dataset_parse_matrix(
    data: *const u8,
    len: usize,
    out: *mut *mut TsimDataset,
) -> TsimStatus {
    guard(|| {
        let out = out_ptr(out)?;
        let ds = lib(tsim::io::parse_matrix_file(bytes(data, len)?))?;
        *out = Box::into_raw(Box::new(TsimDataset(ds)));
        Ok(())
    })
}

/// # Safety
/// `ds` must be NULL or a handle from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn tsim_dataset_free(ds: *mut TsimDataset) {
    if !ds.is_null() {
        drop(Box::from_raw(ds));
    }
}

/// # Safety
/// `ds` must be a live dataset handle.
#[no_mangle]
pub unsafe extern "C" fn tsim_dataset_transaction_count(ds: *const TsimDataset) -> usize {
    ds.as_ref().map_or(0, |d| d.0.len())
}

/// # Safety
/// `ds` must be a live dataset handle.
#[no_mangle]
pub unsafe extern "C" fn tsim_dataset_item_count(ds: *const TsimDataset) -> usize {
    ds.as_ref().map_or(0, |d| d.0.catalog().len())
}

/// Similarity of two transactions under `config`. Per-item statistics are
/// taken over the whole dataset.
///
/// # Safety
/// `ds` must be a live handle, `tid_a`/`tid_b` NUL-terminated strings, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn tsim_pair_similarity(
    ds: *const TsimDataset,
    tid_a: *const c_char,
    tid_b: *const c_char,
    config: TsimConfig,
    out: *mut f64,
) -> TsimStatus {
    guard(|| {
        let ds = &deref(ds)?.0;
        let (a, b) = (c_str(tid_a)?, c_str(tid_b)?);
        let out = out_ptr(out)?;
        let cfg = SimilarityConfig::from(config);
        lib(cfg.validate())?;
        let (va, vb) = (lib(ds.get_vector(a))?, lib(ds.get_vector(b))?);
        *out = match cfg.measure {
            tsim::Measure::Tsim => {
                let stats = lib(tsim::compute_stats(ds, cfg.std_mode))?;
                tsim::similarity::tsim_vectors(va, vb, &stats, cfg.lambda)
            }
            tsim::Measure::Jaccard => tsim::baseline::jaccard(va, vb),
            tsim::Measure::Cosine => tsim::baseline::cosine(va, vb),
            tsim::Measure::Euclidean => tsim::baseline::euclidean_sim(va, vb),
        };
        Ok(())
    })
}

/// # Safety
/// `ds` must be a live handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tsim_matrix_compute(
    ds: *const TsimDataset,
    config: TsimConfig,
    out: *mut *mut TsimMatrix,
) -> TsimStatus {
    guard(|| {
        let ds = &deref(ds)?.0;
        let out = out_ptr(out)?;
        let m = lib(tsim::similarity_matrix(ds, &config.into()))?;
        *out = Box::into_raw(Box::new(TsimMatrix(m)));
        Ok(())
    })
}

/// # Safety
/// `m` must be NULL or a handle from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn tsim_matrix_free(m: *mut TsimMatrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Number of rows (= columns).
///
/// # Safety
/// `m` must be a live matrix handle.
#[no_mangle]
pub unsafe extern "C" fn tsim_matrix_size(m: *const TsimMatrix) -> usize {
    m.as_ref().map_or(0, |m| m.0.len())
}

/// # Safety
/// `m` must be a live matrix handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tsim_matrix_get(
    m: *const TsimMatrix,
    row: usize,
    col: usize,
    out: *mut f64,
) -> TsimStatus {
    guard(|| {
        let m = &deref(m)?.0;
        let out = out_ptr(out)?;
        if row >= m.len() || col >= m.len() {
            return Err(fail(
                TsimStatus::OutOfRange,
                format!("({row}, {col}) outside a {0}x{0} matrix", m.len()),
            ));
        }
        *out = m.get(row, col);
        Ok(())
    })
}

/// Matrix as CSV with six decimals. Release the string with [`tsim_string_free`].
///
/// # Safety
/// `m` must be a live matrix handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tsim_matrix_to_csv(
    m: *const TsimMatrix,
    out: *mut *mut c_char,
) -> TsimStatus {
    guard(|| {
        let m = &deref(m)?.0;
        let out = out_ptr(out)?;
        *out = to_c_string(tsim::io::write_matrix(m))?;
        Ok(())
    })
}

/// Connected components of the graph with edges where similarity >= `threshold`.
///
/// # Safety
/// `m` must be a live matrix handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tsim_cluster(
    m: *const TsimMatrix,
    threshold: f64,
    out: *mut *mut TsimClustering,
) -> TsimStatus {
    guard(|| {
        let m = &deref(m)?.0;
        let out = out_ptr(out)?;
        let c = lib(tsim::threshold_cluster(m, threshold))?;
        *out = Box::into_raw(Box::new(TsimClustering(c)));
        Ok(())
    })
}

/// # Safety
/// `c` must be NULL or a handle from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn tsim_clustering_free(c: *mut TsimClustering) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// # Safety
/// `c` must be a live clustering handle.
#[no_mangle]
pub unsafe extern "C" fn tsim_clustering_count(c: *const TsimClustering) -> usize {
    c.as_ref().map_or(0, |c| c.0.len())
}

/// # Safety
/// `c` must be a live clustering handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tsim_clustering_cluster_size(
    c: *const TsimClustering,
    index: usize,
    out: *mut usize,
) -> TsimStatus {
    guard(|| {
        let c = &deref(c)?.0;
        let out = out_ptr(out)?;
        let cluster = c.clusters.get(index).ok_or_else(|| {
            fail(
                TsimStatus::OutOfRange,
                format!("cluster {index} of {}", c.len()),
            )
        })?;
        *out = cluster.len();
        Ok(())
    })
}

/// Clustering as the JSON cluster document. Release with [`tsim_string_free`].
///
/// # Safety
/// `c` must be a live clustering handle; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tsim_clustering_to_json(
    c: *const TsimClustering,
    out: *mut *mut c_char,
) -> TsimStatus {
    guard(|| {
        let c = &deref(c)?.0;
        let out = out_ptr(out)?;
        *out = to_c_string(tsim::io::write_clusters(c))?;
        Ok(())
    })
}

/// # Safety
/// `s` must be NULL or a string returned by this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn tsim_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

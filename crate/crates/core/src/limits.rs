//! Process-wide resource caps.
//!
//! Kronecker powers grow as `dim^n`, so every allocation that scales that way
//! is checked against these limits and fails with [`Error::SizeCap`] instead
//! of exhausting memory. The defaults suit desk-scale problems; the CLI can
//! override them from a config file or `BELLKRON_SIZE_CAP`.

use std::sync::atomic::{AtomicUsize, Ordering};

use crate::error::{Error, Result};

pub const DEFAULT_SIZE_CAP: usize = 10_000_000;
pub const DEFAULT_DENSE_CAP: usize = 4096;
pub const DEFAULT_SYM_ARITY_CAP: usize = 10;

static SIZE_CAP: AtomicUsize = AtomicUsize::new(DEFAULT_SIZE_CAP);
static DENSE_CAP: AtomicUsize = AtomicUsize::new(DEFAULT_DENSE_CAP);
static SYM_ARITY_CAP: AtomicUsize = AtomicUsize::new(DEFAULT_SYM_ARITY_CAP);

/// Maximum number of entries in any matrix or vector.
pub fn size_cap() -> usize {
    SIZE_CAP.load(Ordering::Relaxed)
}

pub fn set_size_cap(cap: usize) {
    SIZE_CAP.store(cap.max(1), Ordering::Relaxed);
}

/// Maximum side length of a densely materialized permutation or symmetrizer.
pub fn dense_cap() -> usize {
    DENSE_CAP.load(Ordering::Relaxed)
}

pub fn set_dense_cap(cap: usize) {
    DENSE_CAP.store(cap.max(1), Ordering::Relaxed);
}

/// Maximum tensor arity the symmetrizer will average over.
pub fn sym_arity_cap() -> usize {
    SYM_ARITY_CAP.load(Ordering::Relaxed)
}

pub fn set_sym_arity_cap(cap: usize) {
    SYM_ARITY_CAP.store(cap.max(1), Ordering::Relaxed);
}

/// Checks a `rows × cols` allocation against the size cap.
pub fn check_entries(what: &str, rows: usize, cols: usize) -> Result<usize> {
    let requested = rows as u128 * cols as u128;
    let cap = size_cap();
    if requested > cap as u128 {
        return Err(Error::SizeCap {
            what: format!("{what} ({rows}x{cols})"),
            requested,
            cap,
        });
    }
    Ok(requested as usize)
}

/// `base^exp` as an entry count, or a cap error naming `what`.
pub fn checked_pow(what: &str, base: usize, exp: usize) -> Result<usize> {
    let mut acc: u128 = 1;
    let cap = size_cap() as u128;
    for _ in 0..exp {
        acc = acc.saturating_mul(base as u128);
        if acc > cap {
            return Err(Error::SizeCap {
                what: format!("{what} ({base}^{exp})"),
                requested: (base as u128).saturating_pow(exp as u32),
                cap: cap as usize,
            });
        }
    }
    Ok(acc as usize)
}

//! Fixed-precision arithmetic in `Z_p` and its unramified extensions.

pub mod arith;
pub mod digits;
mod context;
mod element;
pub mod fpoly;

pub use context::{set_table_cache_dir, PadicContext};
pub use element::{one_like, PadicElement};

use std::sync::Arc;

use crate::error::Result;

/// Builds (or fetches from the process cache) the context for `(p, d, N)`.
pub fn make_context(p: u64, degree: usize, precision: u32) -> Result<Arc<PadicContext>> {
    PadicContext::shared(p, degree, precision)
}

//! Decode instrumentation.
//!
//! Every path that materializes uncompressed values from an encoded column
//! reports the number of values decoded through this counter. Query routes
//! that operate directly on compressed data never touch it, which lets tests
//! assert the no-decode guarantee.
//!
//! The counter is thread-local so concurrent queries (and parallel tests)
//! observe only their own decode work.

use std::cell::Cell;

thread_local! {
    static DECODED_VALUES: Cell<u64> = const { Cell::new(0) };
}

/// Record that `n` values were materialized from an encoded form.
pub fn record_decoded(n: u64) {
    DECODED_VALUES.with(|c| c.set(c.get() + n));
}

/// Values decoded on this thread since the last reset.
pub fn decoded_values() -> u64 {
    DECODED_VALUES.with(|c| c.get())
}

pub fn reset_decoded() {
    DECODED_VALUES.with(|c| c.set(0));
}

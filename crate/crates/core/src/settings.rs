//! Process-wide numeric settings.
//!
//! The tolerance applies to every zero, idempotency and unitarity test on
//! floating-point scalars. Exact scalars ignore it.

use std::sync::atomic::{AtomicU64, AtomicUsize, Ordering};

pub const DEFAULT_EPSILON: f64 = 1e-9;
pub const DEFAULT_MAX_DIM: usize = 16;

static EPSILON_BITS: AtomicU64 = AtomicU64::new(0x3E11_2E0B_E826_D695); // 1e-9
static MAX_DIM: AtomicUsize = AtomicUsize::new(DEFAULT_MAX_DIM);

pub fn epsilon() -> f64 {
    f64::from_bits(EPSILON_BITS.load(Ordering::Relaxed))
}

/// Sets the global tolerance. Non-positive or non-finite values are ignored.
pub fn set_epsilon(eps: f64) {
    if eps.is_finite() && eps > 0.0 {
        EPSILON_BITS.store(eps.to_bits(), Ordering::Relaxed);
    }
}

pub fn max_dim() -> usize {
    MAX_DIM.load(Ordering::Relaxed)
}

pub fn set_max_dim(dim: usize) {
    if dim > 0 {
        MAX_DIM.store(dim, Ordering::Relaxed);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_epsilon_bits() {
        assert_eq!(f64::from_bits(0x3E11_2E0B_E826_D695), DEFAULT_EPSILON);
        assert_eq!(epsilon(), DEFAULT_EPSILON);
    }
}

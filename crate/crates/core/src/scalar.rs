//! Floating-point scalar abstraction for the solver's numeric kernels.
//!
//! Everything algorithmic in this crate is generic over [`Scalar`] so the
//! same machinery runs in f32 or f64. Concrete f64 aliases live at the
//! crate root; f64 is the working precision of the CLI and the external
//! blackbox wire format.

use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Floating-point type the solver can run on.
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + Debug + Display + Send + Sync + 'static
{
    /// Bit pattern used for exact-match cache keys. -0.0 collapses to +0.0
    /// so a coordinate produced as a signed zero cannot alias a fresh point.
    fn key_bits(self) -> u64;

    /// Nearest f64, for text output. Infinities pass through.
    fn to_f64_lossy(self) -> f64;

    /// Shorthand for converting an f64 literal.
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable")
    }
}

impl Scalar for f64 {
    fn key_bits(self) -> u64 {
        if self == 0.0 { 0 } else { self.to_bits() }
    }

    fn to_f64_lossy(self) -> f64 {
        self
    }
}

impl Scalar for f32 {
    fn key_bits(self) -> u64 {
        if self == 0.0 { 0 } else { self.to_bits() as u64 }
    }

    fn to_f64_lossy(self) -> f64 {
        self as f64
    }
}

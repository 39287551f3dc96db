//! Scalar abstraction for the dense linear-algebra kernels.
//!
//! The matrix-level operations (standard form, diamond sums, path evolution)
//! are generic over the floating scalar; eigen-solver-backed operations are
//! provided for `f64` only. Concrete aliases live at the crate root.

use nalgebra::RealField;
use num_traits::{Float, FromPrimitive};

/// Floating scalar usable in the symplectic kernels. In practice `f32` or `f64`.
pub trait Scalar: RealField + Float + FromPrimitive + Copy + Send + Sync + 'static {
    fn approx(v: f64) -> Self {
        <Self as FromPrimitive>::from_f64(v).expect("scalar conversion")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

//! Exact and certified high-precision number support.

pub mod angle;
pub mod cf;
pub mod fixed;

pub use angle::{Angle, FracPart};
pub use fixed::Frac128;

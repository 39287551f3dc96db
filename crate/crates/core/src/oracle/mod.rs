//! Independent numerical computation of omega-indices of generated paths,
//! splitting-number limits, and the pinned fixture machinery.

pub mod fixture;
pub mod generator;
pub mod index;
pub mod path;
pub mod splitting;

pub use generator::{generator_path_for, generator_product_path};
pub use index::{omega_index, omega_index_sweep, CrossingReport, OracleOptions};
pub use path::{PathSegment, PathSpec, PathSpecJson};
pub use splitting::{numeric_splitting, EpsSequence};

pub mod error;
pub mod idx;
pub mod num;
pub mod oracle;
pub mod scalar;
pub mod sp;

pub use error::{Result, SikError};

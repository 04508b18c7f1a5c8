pub mod adaptive;
pub mod assembly;
pub mod error;
pub mod estimators;
pub mod linalg;
pub mod mesh;
pub mod space;

pub use error::{Error, Result};

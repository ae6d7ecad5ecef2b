pub mod error;
pub mod exact;
pub mod grassmann;
pub mod operator;
pub mod reflection;
pub mod solver;
pub mod torus;
pub mod univariate;
pub mod weights;

pub use error::{Error, Result};

pub mod analysis;
pub mod cli;
pub mod closed_form;
pub mod entangle;
pub mod error;
pub mod gibbs;
pub mod linalg;
pub mod model;

pub use error::{Error, Result};

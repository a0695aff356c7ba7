//! Exact and numerical tools for calibrated geometry.

pub mod calibnum;
pub mod cartan;
pub mod catalog;
pub mod error;
pub mod exact;
pub mod exterior;
pub mod models;
pub mod report;
pub mod stabilizer;

pub use error::{Error, Result};

//! Spectral design of perfect encoded state transfer: extends a mirror
//! symmetric spin network by a pair of engineered chains so that a vector
//! encoded on one end arrives perfectly on the other.

pub mod driver;
pub mod error;
pub mod exact;
pub mod inverse;
pub mod linalg;
pub mod mp;
pub mod network;
pub mod selector;
pub mod spectral;
pub mod transfer;

pub use error::{Error, Result};

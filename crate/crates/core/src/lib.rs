pub mod analytic;
pub mod anomaly;
pub mod eigen;
pub mod error;
pub mod fir;
pub mod graphs;
pub mod learn;
pub mod modulation;
pub mod spectral;

pub use eigen::C64;
pub use error::{Error, Result};

pub mod accel;
pub mod config;
pub mod error;
pub mod greens;
pub mod grid;
pub mod hfunction;
pub mod mittag_leffler;
pub mod quadrature;
pub mod riesz_feller;
pub mod solver;
pub mod special;
pub mod verify;

pub use error::{Error, Result};

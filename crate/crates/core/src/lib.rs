pub mod base;
pub mod batch;
pub mod cli;
pub mod error;
pub mod free_rb;
pub mod limits;
pub mod linear;
pub mod localize;
pub mod presented;
pub mod rb;
pub mod sample;
pub mod scalar;

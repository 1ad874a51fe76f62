#![no_std]

extern crate alloc;
#[cfg(feature = "std")]
extern crate std;

pub mod arma1q;
pub mod armapq;
pub mod error;
mod fft;
pub mod jordan;
pub mod linalg;
pub mod mpoly;
pub mod noise;
pub mod rational;
pub mod report;
pub mod sim;
pub mod tol;

pub use error::{Error, Result};
pub use tol::Tolerances;

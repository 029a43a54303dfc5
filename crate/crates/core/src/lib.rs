//! Periodic points of `z^d + c` on Z/pZ: brute-force period-2 counts,
//! polynomial root counting over F_p, and the average and density
//! statistics built on them.

pub mod dynamics;
pub mod error;
pub mod modmath;
pub mod polyfp;
pub mod report;
pub mod selfcheck;
pub mod stats;

pub use error::{Error, Result};

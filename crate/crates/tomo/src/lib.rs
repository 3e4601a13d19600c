//! Numerical geometric tomography: section functions of convex bodies,
//! their Fourier and Radon-inversion counterparts, and detection tests for
//! polynomial and algebraic structure in the section data.

pub mod asymptotics;
pub mod bodies;
pub mod error;
pub mod grid;
pub mod harmonics;
pub mod moments;
pub mod polyalg;
pub mod quad;
pub mod report;
pub mod slice;

pub use error::{Result, TomoError};

//! Polar codes with large binary kernels: kernel analysis, decoding-window
//! complexity, column-permutation search, window SC/SCL decoding and
//! Monte-Carlo simulation.

pub mod cost;
pub mod error;
pub mod format;
pub mod gf2;
pub mod kernel;
pub mod permsearch;
pub mod simlab;
pub mod windec;

pub use cost::{kernel_cost, ComplexityProfile};
pub use error::{Error, Result};
pub use gf2::BitMatrix;
pub use kernel::{window_profile, Kernel, Permutation, WindowProfile};
pub use windec::{DecoderKind, PolarCode};

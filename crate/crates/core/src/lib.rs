//! Planning simulator for CV-QKD and classical WDM traffic sharing a fiber mesh.
//!
//! QKD demands are allocated first, with a capacity margin, and each fiber's
//! quantum channel receives a spontaneous Raman scattering budget. Classical
//! lightpaths are then admitted under those budgets, with either first-fit or
//! quantum-aware wavelength assignment.

pub mod cli;
pub mod error;
pub mod io;
pub mod network;
pub mod physmodels;
pub mod planner;
pub mod spectrum;

pub use error::{Error, Result};

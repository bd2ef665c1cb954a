//! Analytical co-design models for STT-MRAM on-chip memory in deep-learning
//! accelerators.
//!
//! The crate evaluates the MTJ reliability equations (retention failure, read
//! disturb, write error rate) forwards and backwards, applies process- and
//! temperature-variation guard bands to a scaled thermal stability factor,
//! derives per-layer data occupancy times for a reconfigurable conv/systolic
//! core, and rolls workload-driven traffic into buffer energy, DRAM overflow
//! cost, and area/power comparisons between SRAM and MRAM implementations.
//!
//! All operations are pure functions of their inputs and safe to call
//! concurrently. The `sttdse` CLI crate layers config files, sweeps, and CSV
//! reporting on top.

pub mod constants;
pub mod error;
pub mod guardband;
pub mod inject;
pub mod memory;
pub mod mtj;
pub mod timing;
pub mod traffic;
pub mod workload;

pub use error::{Error, Result};

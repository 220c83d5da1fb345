//! Multi-speed quasilinear wave systems: exact null-condition checks, a
//! finite-difference solver, weighted diagnostics and an empirical harness
//! for the weighted estimates used in global existence arguments.

pub mod diagnostics;
pub mod estimates;
pub mod grid;
pub mod runner;
pub mod solver;
pub mod system;

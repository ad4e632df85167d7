//! Experiment driver for the symba simulators: configuration, run types,
//! the robustness sweep and image/CSV exporters.

pub mod app;
pub mod config;
pub mod render;
pub mod robustness;
pub mod run;

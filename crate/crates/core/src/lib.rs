//! Planar frame analysis with tension-only cables, aimed at timber bridge
//! models: parametric bridge generators, staged cantilever erection checks,
//! a line-oriented model format, JSON reports and SVG diagrams.

pub mod model;
pub mod solver;
pub mod catalog;
pub mod erection;
pub mod format;
pub mod report;
pub mod svg;
pub mod cli;

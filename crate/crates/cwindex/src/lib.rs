//! Symbolic-numeric toolkit for characteristic classes, Chern-Weil
//! evaluation and distributional indices on coordinate charts.

pub mod expr;
pub mod forms;
pub mod classes;
pub mod geometry;
pub mod index;
pub mod manifest;
pub mod quad;
pub mod report;
pub mod verify;

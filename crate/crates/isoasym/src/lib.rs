//! Construction and verification of surface families through a common
//! asymptotic spine curve in three-dimensional Minkowski space.

pub mod config;
pub mod curve;
pub mod expr;
pub mod marching;
pub mod mesh;
pub mod mlinalg;
pub mod presets;
pub mod report;
pub mod surface;
pub mod verify;

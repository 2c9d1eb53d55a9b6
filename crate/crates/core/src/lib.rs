//! Exact overlap computation and conservative remapping between two
//! admissible quadrilateral meshes that share one logical structure.
//!
//! The old mesh carries a piecewise-constant density; the new mesh receives
//! cell masses either through signed swept regions of its faces
//! ([`swept::remap_fb`]) or through the explicit old/new cell intersection
//! polygons of the swap region ([`swap::remap_cib`]). Both routes are exact up
//! to floating-point rounding and agree cell by cell.
//!
//! Indices are 0-based in the API. Reports, CSV files and `Display` impls use
//! 1-based indices.

pub mod classify;
pub mod fields;
pub mod geom;
pub mod gridgen;
pub mod harness;
pub mod mesh;
pub mod remap;
pub mod swap;
pub mod swept;

pub use geom::{OrientedPolygon, Point2, Segment, EPS_GEOM};
pub use mesh::{CellIndex, EdgeIndex, StructuredQuadMesh};
pub use remap::{Method, RemapResult};

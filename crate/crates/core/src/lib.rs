//! Exact tools for convex lattice polygons that avoid a sublattice of Z².
//!
//! The crate covers sublattice arithmetic ([`lattice`]), convex integer
//! polygons ([`polygon`]), slope chains and their witness inequalities
//! ([`slope`]), the six splitting types and the reductions between them
//! ([`typeclass`]), and exhaustive verification of vertex bounds over
//! bounded regions ([`verify`]).

pub mod error;
pub mod geom;
pub mod lattice;
pub mod polygon;
pub mod sample;
pub mod slope;
pub mod typeclass;
pub mod verify;

pub use error::{Error, Result};
pub use geom::{Mat2, Point, COORD_LIMIT};
pub use lattice::{AffineMap, InvariantFactors, Lattice2, SignedAxis, UnimodularMap};
pub use polygon::{LatticePolygon, Line, Location, Segment};

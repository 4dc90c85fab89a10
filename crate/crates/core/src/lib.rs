//! Exact computations for commutation classes of reduced words of the
//! longest element, Q-data, the categories built from layer modules of the
//! preprojective algebra, and inverse quantum Cartan matrices.
//!
//! All arithmetic is over the integers or exact rationals.

#![allow(clippy::needless_range_loop)]

pub mod cats;
pub mod check;
pub mod commclass;
pub mod error;
pub mod export;
pub mod linalg;
pub mod preproj;
pub mod qcm;
pub mod qdatum;
pub mod rootsys;

pub use cats::{Category, EulerValue, GabrielQuiver, IndObject, MeshReport, QCategory};
pub use commclass::{CommClass, Coord, Frieze, Mesh};
pub use error::{Error, Result};
pub use export::Quiver;
pub use preproj::{Morphism, Orientation, QuiverRep};
pub use qcm::{FoldedCartan, InverseSeries, LaurentPoly, LaurentTable, QcmRow};
pub use qdatum::{FoldedVertex, HatVertex, QDatum, Validation};
pub use rootsys::{DynkinDiagram, Family, FoldedType, LatticeMap, RootSystem, Vertex, Weight};

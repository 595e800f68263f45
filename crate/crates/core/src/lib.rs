//! Hilbert metric geometry on planar convex domains.
//!
//! The geometry and metric layers are generic over [`Scalar`] (`f32`/`f64`);
//! measure, constructions and entropy work in `f64`. Crate-root aliases fix
//! the scalar to `f64`.

// `!(x > 0.0)` style tests are used on purpose: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod constructions;
pub mod entropy;
pub mod error;
pub mod geometry;
pub mod measure;
pub mod metric;
pub mod scalar;

pub use error::{Error, Result};
pub use geometry::{convex_hull, inscribed_hull, Chord, ConvexDomain, Mat2, Point2, Polygon, Ring, RingPolygon, Vec2};
pub use scalar::Scalar;

pub type Domain = ConvexDomain<f64>;
pub type Point = Point2<f64>;
pub type Vector = Vec2<f64>;
pub type Matrix = Mat2<f64>;

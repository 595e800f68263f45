//! Domains, vectors and the ray–boundary query.

mod domain;
mod hull;
pub mod io;
mod polygon;
mod ring;
mod vec2;

pub(crate) use domain::outside;
pub use domain::{Chord, ConvexDomain};
pub use hull::{convex_hull, inscribed_hull};
pub(crate) use polygon::one_minus_norm_sq;
pub use polygon::Polygon;
pub use ring::{Ring, RingPolygon};
pub use vec2::{Mat2, Point2, Vec2};

//! Exact planar primitives: scalars, points, segments, matchings, convex
//! polygons, and the validity predicates everything else is built on.

mod hull;
mod line;
mod predicates;
mod scalar;
mod types;

pub use line::{OrientedLine, Side};
pub use hull::{convex_hull, convex_hull_of, convex_order, Hull};
pub use predicates::{compatible, disjoint, on_segment, orientation_test, segments_conflict, segments_cross, Orientation};
pub use scalar::{ParseScalarError, Scalar};
pub use types::{BoundingBox, Containment, ConvexPolygon, Coord, Matching, Point, PointId, PointSet, Segment};

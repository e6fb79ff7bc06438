//! Ball-bodies: intersections of unit Euclidean balls.
//!
//! The planar kernel ([`disk`]) represents ball-bodies exactly as
//! disk-polygons and implements c-duality, c-hulls, areas, support
//! functions and Hausdorff distances. [`symmetry`] builds Minkowski, Steiner
//! and two-point symmetrals on top of it, [`lps`] follows bodies along linear
//! parameter systems, and [`lens`] holds the closed-form machinery for
//! two-ball lenses in ℝⁿ, including the curvature witnesses showing that
//! Steiner symmetrization leaves the class in dimension three.

pub mod dd;
pub mod disk;
pub mod error;
pub mod geom;
pub mod lens;
pub mod lps;
pub mod quad;
pub mod random;
pub mod seb;
pub mod support;
pub mod symmetry;
#[doc(hidden)]
pub mod testing;

pub use disk::{cdual, chull, intersect_unit_disks, Classification, DiskPolygon, PointSet};
pub use error::{Error, Result};
pub use geom::{Direction, Point, ToleranceConfig, Vec2, EPS_GEOM};
pub use seb::smallest_enclosing_ball;
pub use support::{SupportFunction, SupportProfile};

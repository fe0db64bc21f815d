//! Upper half-plane geometry: scalars, Möbius maps, points and geodesics.

mod geodesic;
mod intmat;
mod moebius;
mod point;
mod scalar;

pub use geodesic::{ball_volume, direction_angle, geodesic_point, geodesic_sample};
pub(crate) use geodesic::wrap_angle;
pub use intmat::IntMat;
pub use moebius::{IsometryKind, Moebius};
pub use point::{dist_f64, Distance, Point};
pub use scalar::{format_rational, parse_rational, ratio_to_f64, Mode, Scalar, TAU};

/// `cosh d(p, q)`, exact where the inputs are.
pub fn cosh_dist(p: &Point, q: &Point) -> crate::Result<Scalar> {
    p.cosh_dist(q)
}

/// Hyperbolic distance between two points.
pub fn dist(p: &Point, q: &Point) -> crate::Result<Distance> {
    p.dist(q)
}

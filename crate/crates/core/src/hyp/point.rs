use std::fmt;

use crate::error::{Error, Result};

use super::scalar::{Mode, Scalar};

/// A point `x + iy` of the upper half-plane.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Point {
    x: Scalar,
    y: Scalar,
}

/// A hyperbolic distance, carried as `cosh d` (exact where the inputs are)
/// together with its length.
#[derive(Clone, Debug, PartialEq)]
pub struct Distance {
    pub cosh: Scalar,
    pub length: f64,
}

impl Point {
    pub fn new(x: Scalar, y: Scalar) -> Result<Self> {
        if x.mode() != y.mode() {
            return Err(Error::ModeMismatch(x.mode(), y.mode()));
        }
        if y.signum() <= 0 {
            return Err(Error::InvalidArgument(format!(
                "imaginary part {y} is not positive"
            )));
        }
        Ok(Point { x, y })
    }

    pub(crate) fn from_parts(x: Scalar, y: Scalar) -> Self {
        Point { x, y }
    }

    pub fn i(mode: Mode) -> Self {
        Point {
            x: Scalar::zero(mode),
            y: Scalar::one(mode),
        }
    }

    /// `xn/xd + i yn/yd`; panics on a non-positive imaginary part.
    pub fn exact(xn: i64, xd: i64, yn: i64, yd: i64) -> Self {
        Point::new(Scalar::ratio(xn, xd), Scalar::ratio(yn, yd)).expect("point off the half-plane")
    }

    pub fn real(x: f64, y: f64) -> Self {
        Point::new(Scalar::Real(x), Scalar::Real(y)).expect("point off the half-plane")
    }

    pub fn x(&self) -> &Scalar {
        &self.x
    }

    pub fn y(&self) -> &Scalar {
        &self.y
    }

    pub fn mode(&self) -> Mode {
        self.x.mode()
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.x.to_f64(), self.y.to_f64())
    }

    pub fn to_floating(&self) -> Point {
        let (x, y) = self.to_f64();
        Point::real(x, y)
    }

    /// `cosh d(p, q) = 1 + |p - q|^2 / (2 Im p Im q)`.
    pub fn cosh_dist(&self, other: &Point) -> Result<Scalar> {
        if self.mode() != other.mode() {
            return Err(Error::ModeMismatch(self.mode(), other.mode()));
        }
        let mode = self.mode();
        let num = (&self.x - &other.x).square() + (&self.y - &other.y).square();
        let den = Scalar::from_i64(2, mode) * &self.y * &other.y;
        Ok(Scalar::one(mode) + num / den)
    }

    pub fn dist(&self, other: &Point) -> Result<Distance> {
        let cosh = self.cosh_dist(other)?;
        Ok(Distance {
            cosh,
            length: dist_f64(self.to_f64(), other.to_f64()),
        })
    }

    pub fn approx_eq(&self, other: &Point) -> bool {
        self.x.approx_eq(&other.x) && self.y.approx_eq(&other.y)
    }
}

/// Hyperbolic distance via `sinh(d/2) = |p - q| / (2 sqrt(Im p Im q))`,
/// which keeps full precision for nearby points.
pub fn dist_f64(p: (f64, f64), q: (f64, f64)) -> f64 {
    let e = (p.0 - q.0).hypot(p.1 - q.1);
    2.0 * (e / (2.0 * (p.1 * q.1).sqrt())).asinh()
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_lower_half_plane() {
        assert!(Point::new(Scalar::ratio(0, 1), Scalar::ratio(-1, 2)).is_err());
        assert!(Point::new(Scalar::Real(0.0), Scalar::Real(0.0)).is_err());
    }

    #[test]
    fn dist_examples() {
        let i = Point::i(Mode::Exact);
        let d0 = i.dist(&i).unwrap();
        assert_eq!(d0.cosh, Scalar::one(Mode::Exact));
        assert_eq!(d0.length, 0.0);

        let d = i.dist(&Point::exact(0, 1, 2, 1)).unwrap();
        assert_eq!(d.cosh, Scalar::ratio(5, 4));
        assert!((d.length - 2f64.ln()).abs() < 1e-12);

        let d = i.dist(&Point::exact(1, 1, 1, 1)).unwrap();
        assert_eq!(d.cosh, Scalar::ratio(3, 2));
        assert!((d.length - 0.962424).abs() < 1e-6);
    }

    #[test]
    fn dist_is_symmetric() {
        let p = Point::exact(3, 7, 2, 5);
        let q = Point::exact(-1, 3, 9, 4);
        assert_eq!(p.cosh_dist(&q).unwrap(), q.cosh_dist(&p).unwrap());
    }
}

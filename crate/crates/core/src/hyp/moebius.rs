use std::fmt;

use crate::error::{Error, Result};

use super::point::Point;
use super::scalar::{Mode, Scalar, TAU};

/// Type of a non-identity isometry, read off the trace.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum IsometryKind {
    Identity,
    Elliptic,
    Parabolic,
    Hyperbolic,
}

/// An element of PSL(2, R): a unit-determinant matrix up to sign.
///
/// Stored sign-normalized, so that the first nonzero entry of `(a, b, c, d)`
/// is positive; equal projective elements therefore compare and hash equal
/// (exactly in exact mode).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Moebius {
    a: Scalar,
    b: Scalar,
    c: Scalar,
    d: Scalar,
}

impl Moebius {
    /// Checked constructor: all entries share one mode and `ad - bc = 1`
    /// (exactly, or within `TAU`).
    pub fn new(a: Scalar, b: Scalar, c: Scalar, d: Scalar) -> Result<Self> {
        let mode = a.mode();
        for s in [&b, &c, &d] {
            if s.mode() != mode {
                return Err(Error::ModeMismatch(mode, s.mode()));
            }
        }
        let det = &a * &d - &b * &c;
        let ok = match mode {
            Mode::Exact => det == Scalar::one(Mode::Exact),
            Mode::Floating => (det.to_f64() - 1.0).abs() <= TAU,
        };
        if !ok {
            return Err(Error::InvalidArgument(format!(
                "matrix [[{a}, {b}], [{c}, {d}]] has determinant {det}, expected 1"
            )));
        }
        Ok(Self::normalized(a, b, c, d))
    }

    pub fn from_i64(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        let m = Mode::Exact;
        Self::new(
            Scalar::from_i64(a, m),
            Scalar::from_i64(b, m),
            Scalar::from_i64(c, m),
            Scalar::from_i64(d, m),
        )
    }

    pub fn from_f64(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        Self::new(
            Scalar::Real(a),
            Scalar::Real(b),
            Scalar::Real(c),
            Scalar::Real(d),
        )
    }

    pub(crate) fn normalized(a: Scalar, b: Scalar, c: Scalar, d: Scalar) -> Self {
        let first = [&a, &b, &c, &d]
            .into_iter()
            .map(Scalar::signum)
            .find(|&s| s != 0)
            .unwrap_or(1);
        if first < 0 {
            Moebius {
                a: -a,
                b: -b,
                c: -c,
                d: -d,
            }
        } else {
            Moebius { a, b, c, d }
        }
    }

    pub fn identity(mode: Mode) -> Self {
        Moebius {
            a: Scalar::one(mode),
            b: Scalar::zero(mode),
            c: Scalar::zero(mode),
            d: Scalar::one(mode),
        }
    }

    /// `z -> -1/z`.
    pub fn s(mode: Mode) -> Self {
        Self::normalized(
            Scalar::zero(mode),
            Scalar::from_i64(-1, mode),
            Scalar::one(mode),
            Scalar::zero(mode),
        )
    }

    /// `z -> z + 1`.
    pub fn t(mode: Mode) -> Self {
        Moebius {
            a: Scalar::one(mode),
            b: Scalar::one(mode),
            c: Scalar::zero(mode),
            d: Scalar::one(mode),
        }
    }

    pub fn entries(&self) -> [&Scalar; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    pub fn mode(&self) -> Mode {
        self.a.mode()
    }

    pub fn trace(&self) -> Scalar {
        &self.a + &self.d
    }

    pub fn compose(&self, other: &Moebius) -> Result<Moebius> {
        if self.mode() != other.mode() {
            return Err(Error::ModeMismatch(self.mode(), other.mode()));
        }
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, o: &Moebius) -> Moebius {
        let a = &self.a * &o.a + &self.b * &o.c;
        let b = &self.a * &o.b + &self.b * &o.d;
        let c = &self.c * &o.a + &self.d * &o.c;
        let d = &self.c * &o.b + &self.d * &o.d;
        match self.mode() {
            Mode::Exact => Self::normalized(a, b, c, d),
            Mode::Floating => {
                // Rescale back onto det = 1 so long products do not drift.
                let det = (&a * &d - &b * &c).to_f64();
                let k = Scalar::Real(1.0 / det.sqrt());
                Self::normalized(&a * &k, &b * &k, &c * &k, &d * &k)
            }
        }
    }

    pub fn invert(&self) -> Moebius {
        Self::normalized(self.d.clone(), -&self.b, -&self.c, self.a.clone())
    }

    /// `z -> (az + b) / (cz + d)`; exact input stays exact.
    pub fn apply(&self, p: &Point) -> Result<Point> {
        if self.mode() != p.mode() {
            return Err(Error::ModeMismatch(self.mode(), p.mode()));
        }
        let (x, y) = (p.x(), p.y());
        let y2 = y.square();
        let nx = &self.a * x + &self.b;
        let dx = &self.c * x + &self.d;
        let den = dx.square() + self.c.square() * &y2;
        let re = (&nx * &dx + &self.a * &self.c * &y2) / &den;
        let im = y / &den;
        Ok(Point::from_parts(re, im))
    }

    pub fn is_identity(&self) -> bool {
        let one = Scalar::one(self.mode());
        self.b.is_zero() && self.c.is_zero() && self.a.approx_eq(&one) && self.d.approx_eq(&one)
    }

    pub fn classify(&self) -> IsometryKind {
        if self.is_identity() {
            return IsometryKind::Identity;
        }
        let two = Scalar::from_i64(2, self.mode());
        match self.trace().abs().compare(&two) {
            std::cmp::Ordering::Less => IsometryKind::Elliptic,
            std::cmp::Ordering::Equal => IsometryKind::Parabolic,
            std::cmp::Ordering::Greater => IsometryKind::Hyperbolic,
        }
    }

    /// `2 arccosh(|tr| / 2)` for hyperbolic elements.
    pub fn translation_length(&self) -> Result<f64> {
        if self.classify() != IsometryKind::Hyperbolic {
            return Err(Error::NotHyperbolic(self.trace().abs().to_string()));
        }
        Ok(2.0 * (self.trace().to_f64().abs() / 2.0).acosh())
    }

    /// Order two in PSL(2, R): trace zero (exactly, or within `TAU`).
    pub fn is_involution(&self) -> bool {
        self.trace().is_zero()
    }

    /// The unique fixed point in the upper half-plane of an involution.
    pub fn involution_fixed_point(&self) -> Result<Point> {
        if !self.is_involution() {
            return Err(Error::NotInvolution(self.to_string()));
        }
        let two = Scalar::from_i64(2, self.mode());
        let x = (&self.a - &self.d) / (&two * &self.c);
        let y = match self.mode() {
            Mode::Exact => self.c.abs().recip(),
            Mode::Floating => {
                let tr = self.trace().to_f64();
                Scalar::Real((4.0 - tr * tr).sqrt() / (2.0 * self.c.to_f64().abs()))
            }
        };
        Ok(Point::from_parts(x, y))
    }

    pub fn to_f64(&self) -> [f64; 4] {
        [
            self.a.to_f64(),
            self.b.to_f64(),
            self.c.to_f64(),
            self.d.to_f64(),
        ]
    }

    pub fn to_floating(&self) -> Moebius {
        let [a, b, c, d] = self.to_f64();
        Self::normalized(
            Scalar::Real(a),
            Scalar::Real(b),
            Scalar::Real(c),
            Scalar::Real(d),
        )
    }

    /// Entries as integers, when all are exact integers fitting in `i64`.
    pub fn as_i64(&self) -> Option<[i64; 4]> {
        Some([
            self.a.as_i64()?,
            self.b.as_i64()?,
            self.c.as_i64()?,
            self.d.as_i64()?,
        ])
    }

    pub fn approx_eq(&self, other: &Moebius) -> bool {
        self.entries()
            .iter()
            .zip(other.entries())
            .all(|(x, y)| x.approx_eq(y))
    }
}

impl fmt::Display for Moebius {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

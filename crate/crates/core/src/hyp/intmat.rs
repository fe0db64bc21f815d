use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::moebius::Moebius;
use super::point::Point;
use super::scalar::Scalar;

/// An element of PSL(2, Z) in machine integers, sign-normalized like
/// [`Moebius`]. The hot loops of the modular group run on this type.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntMat {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl IntMat {
    pub const ID: IntMat = IntMat { a: 1, b: 0, c: 0, d: 1 };
    /// `z -> -1/z`, stored sign-normalized.
    pub const S: IntMat = IntMat { a: 0, b: 1, c: -1, d: 0 };
    pub const T: IntMat = IntMat { a: 1, b: 1, c: 0, d: 1 };
    pub const R: IntMat = IntMat { a: 1, b: 1, c: 0, d: 1 };
    pub const L: IntMat = IntMat { a: 1, b: 0, c: 1, d: 1 };

    /// Normalizing constructor; `None` unless `ad - bc = 1`.
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Option<IntMat> {
        (a as i128 * d as i128 - b as i128 * c as i128 == 1).then(|| Self::norm(a, b, c, d))
    }

    pub(crate) fn norm(a: i64, b: i64, c: i64, d: i64) -> IntMat {
        let first = [a, b, c, d].into_iter().find(|&v| v != 0).unwrap_or(1);
        if first < 0 {
            IntMat { a: -a, b: -b, c: -c, d: -d }
        } else {
            IntMat { a, b, c, d }
        }
    }

    pub fn inv(self) -> IntMat {
        Self::norm(self.d, -self.b, -self.c, self.a)
    }

    pub fn trace(self) -> i64 {
        self.a + self.d
    }

    /// Squared Frobenius norm; `cosh d(i, g i)` is half of it.
    pub fn norm2(self) -> i128 {
        [self.a, self.b, self.c, self.d]
            .iter()
            .map(|&v| v as i128 * v as i128)
            .sum()
    }

    /// `g^k` for `k >= 0`.
    pub fn pow(self, mut k: u32) -> IntMat {
        let (mut acc, mut base) = (IntMat::ID, self);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            k >>= 1;
        }
        acc
    }

    /// `g(i) = ((ac + bd) + i) / (c^2 + d^2)`, as `(ac + bd, c^2 + d^2)`.
    pub fn image_of_i(self) -> (i128, i128) {
        let (a, b, c, d) = (self.a as i128, self.b as i128, self.c as i128, self.d as i128);
        (a * c + b * d, c * c + d * d)
    }

    pub fn apply_i(self) -> Point {
        let (num, den) = self.image_of_i();
        let den = BigInt::from(den);
        Point::new(
            Scalar::Exact(BigRational::new(BigInt::from(num), den.clone())),
            Scalar::Exact(BigRational::new(BigInt::from(1), den)),
        )
        .expect("image of i lies in the upper half-plane")
    }

    pub fn to_moebius(self) -> Moebius {
        Moebius::from_i64(self.a, self.b, self.c, self.d).expect("determinant one")
    }

    pub fn from_moebius(g: &Moebius) -> Option<IntMat> {
        let [a, b, c, d] = g.as_i64()?;
        IntMat::new(a, b, c, d)
    }

    pub fn to_f64(self) -> [f64; 4] {
        [self.a as f64, self.b as f64, self.c as f64, self.d as f64]
    }
}

impl Mul for IntMat {
    type Output = IntMat;
    fn mul(self, o: IntMat) -> IntMat {
        Self::norm(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )
    }
}

impl fmt::Display for IntMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

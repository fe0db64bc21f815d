//! Conjugacy keys for dihedral classes.
//!
//! A class is keyed by the unoriented cyclic word of its translation. When
//! that word is an even power, two classes share it: their involutions sit
//! at the even or at the odd points of the maximal class. The axis through
//! `i`, after conjugating an involution of the class to `S`, separates
//! them; it is the circle about a rational centre.

use std::f64::consts::TAU as TWO_PI;

use num_integer::Integer;

use crate::hyp::IntMat;

use super::word::{primitive_period, rl_word_int, unoriented_key};

/// Centre of the geodesic through `i` and `M i`, as `"p/q"` or `"inf"` for
/// the vertical line. Unchanged under `M -> S M` and `M -> M S`.
pub(crate) fn axis_centre(m: IntMat) -> String {
    let (a, b, c, d) = (m.a as i128, m.b as i128, m.c as i128, m.d as i128);
    let num = a * a + b * b - c * c - d * d;
    let den = 2 * (a * c + b * d);
    if den == 0 {
        return "inf".into();
    }
    let g = num.gcd(&den);
    let (n, d) = (num / g * den.signum(), (den / g).abs());
    if d == 1 {
        n.to_string()
    } else {
        format!("{n}/{d}")
    }
}

/// Key data of the class `<S, M S M^-1>`.
pub(crate) struct WordKey {
    pub key: String,
    pub word: String,
    pub power: u32,
}

pub(crate) fn word_key(m: IntMat) -> WordKey {
    let t = IntMat::S * m * IntMat::S * m.inv();
    let w = rl_word_int(t).expect("distinct involutions generate a hyperbolic");
    let u = unoriented_key(&w);
    let power = (u.len() / primitive_period(&u)) as u32;
    let word = String::from_utf8(u).expect("ascii");
    let key = if power % 2 == 0 {
        format!("{word}@{}", axis_centre(m))
    } else {
        word.clone()
    };
    WordKey { key, word, power }
}

/// Axis angle at a fixed point, modulo the rotation of its stabilizer.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct Marking {
    pub class: usize,
    pub angle: f64,
    pub period: f64,
}

impl Marking {
    pub(crate) fn new(class: usize, angle: f64, order: u32) -> Self {
        let period = TWO_PI / order.max(1) as f64;
        Marking {
            class,
            angle: angle.rem_euclid(period),
            period,
        }
    }

    pub(crate) fn gap(&self, o: &Marking) -> f64 {
        if self.class != o.class {
            return f64::INFINITY;
        }
        let d = (self.angle - o.angle).rem_euclid(self.period);
        d.min(self.period - d)
    }
}

/// Largest componentwise gap between two marking pairs, over both
/// matchings of the unordered pairs.
pub(crate) fn pair_gap(a: &[Marking; 2], b: &[Marking; 2]) -> f64 {
    let straight = a[0].gap(&b[0]).max(a[1].gap(&b[1]));
    let crossed = a[0].gap(&b[1]).max(a[1].gap(&b[0]));
    straight.min(crossed)
}

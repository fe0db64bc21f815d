//! Tolerance-based identity for floating-mode points and group elements.

use std::collections::{HashMap, HashSet};

use crate::hyp::{dist_f64, Moebius};

/// Two floating points are the same point when their hyperbolic distance is
/// at most this.
pub const POINT_EPS: f64 = 1e-6;

const PITCH: f64 = 1e-4;

/// Grid index over the upper half-plane whose cells are roughly `PITCH`
/// wide in the hyperbolic metric at every height, so a query only has to
/// scan the 3x3 block around its own cell.
#[derive(Debug)]
pub(crate) struct PointIndex<T> {
    cells: HashMap<(i64, i64), Vec<((f64, f64), T)>>,
}

impl<T> Default for PointIndex<T> {
    fn default() -> Self {
        PointIndex {
            cells: HashMap::new(),
        }
    }
}

fn row(y: f64) -> i64 {
    (y.ln() / PITCH).floor() as i64
}

fn col(x: f64, row: i64) -> i64 {
    (x / (PITCH * (row as f64 * PITCH).exp())).floor() as i64
}

impl<T> PointIndex<T> {
    pub fn find(&self, p: (f64, f64), mut accept: impl FnMut(&T) -> bool) -> Option<&T> {
        let r0 = row(p.1);
        for r in r0 - 1..=r0 + 1 {
            let c0 = col(p.0, r);
            for c in c0 - 1..=c0 + 1 {
                if let Some(v) = self.cells.get(&(r, c)) {
                    for (q, t) in v {
                        if dist_f64(p, *q) <= POINT_EPS && accept(t) {
                            return Some(t);
                        }
                    }
                }
            }
        }
        None
    }

    pub fn insert(&mut self, p: (f64, f64), t: T) {
        let r = row(p.1);
        self.cells.entry((r, col(p.0, r))).or_default().push((p, t));
    }
}

// Generic probe points: an orientation-preserving isometry moving neither
// of two distinct points is the identity.
const PROBES: [(f64, f64); 2] = [(0.123_456_7, 1.234_567), (-0.345_678, 0.765_432_1)];

fn apply_f64(m: [f64; 4], z: (f64, f64)) -> (f64, f64) {
    let [a, b, c, d] = m;
    let (x, y) = z;
    let den = (c * x + d).powi(2) + (c * y).powi(2);
    (((a * x + b) * (c * x + d) + a * c * y * y) / den, y / den)
}

/// A set of group elements: exact equality, or equality of the images of two
/// probe points up to `POINT_EPS`.
#[derive(Debug)]
pub(crate) enum ElementSet {
    Exact(HashSet<Moebius>),
    Floating(PointIndex<(f64, f64)>),
}

impl ElementSet {
    pub fn new(exact: bool) -> Self {
        if exact {
            ElementSet::Exact(HashSet::new())
        } else {
            ElementSet::Floating(PointIndex::default())
        }
    }

    /// Inserts `g`; false when it was already present.
    pub fn insert(&mut self, g: &Moebius) -> bool {
        match self {
            ElementSet::Exact(s) => s.insert(g.clone()),
            ElementSet::Floating(idx) => {
                let m = g.to_f64();
                let (z1, z2) = (apply_f64(m, PROBES[0]), apply_f64(m, PROBES[1]));
                if idx.find(z1, |w| dist_f64(*w, z2) <= POINT_EPS).is_some() {
                    return false;
                }
                idx.insert(z1, z2);
                true
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_nearby_points_at_any_height() {
        let mut idx = PointIndex::default();
        for &(x, y) in &[(0.0, 1.0), (3.5, 1e-5), (-2.0, 40.0)] {
            idx.insert((x, y), ());
        }
        assert!(idx.find((0.0, 1.0 + 1e-8), |_| true).is_some());
        assert!(idx.find((3.5 + 1e-12, 1e-5), |_| true).is_some());
        assert!(idx.find((3.5 + 1e-9, 1e-5), |_| true).is_none());
        assert!(idx.find((-2.0 + 1e-5, 40.0), |_| true).is_some());
        assert!(idx.find((0.5, 1.0), |_| true).is_none());
    }

    #[test]
    fn element_set_dedupes_floating_products() {
        let s = Moebius::s(crate::hyp::Mode::Floating);
        let t = Moebius::t(crate::hyp::Mode::Floating);
        let mut set = ElementSet::new(false);
        assert!(set.insert(&t));
        assert!(set.insert(&s));
        let sst = s.compose(&s).unwrap().compose(&t).unwrap();
        assert!(!set.insert(&sst));
    }
}

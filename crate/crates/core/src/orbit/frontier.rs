//! Generic orbit enumeration: nearest-first expansion over the symmetric
//! generating set, keeping every element within `radius + slack` of `q`.
//!
//! Completeness is not proven for this route. It is validated by slack
//! doubling and by agreement with the direct routes where those apply.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashSet};

use crate::error::Result;
use crate::group::GroupSpec;
use crate::hyp::{dist_f64, Mode, Moebius, Point, Scalar};
use crate::tol::{ElementSet, PointIndex};

use super::{Meter, OrbitPoint};

/// Default slack: twice the largest generator displacement at `p`, the
/// step length between an element and its children in the orbit.
pub fn default_slack(spec: &GroupSpec, p: &Point) -> Result<f64> {
    let mut m: f64 = 0.0;
    for g in spec.symmetric_generators() {
        let gp = g.apply(p)?;
        m = m.max(dist_f64(p.to_f64(), gp.to_f64()));
    }
    Ok(2.0 * m)
}

enum Seen {
    Exact(HashSet<Point>),
    Floating(PointIndex<()>),
}

impl Seen {
    fn insert(&mut self, p: &Point) -> bool {
        match self {
            Seen::Exact(s) => s.insert(p.clone()),
            Seen::Floating(idx) => {
                let z = p.to_f64();
                if idx.find(z, |_| true).is_some() {
                    return false;
                }
                idx.insert(z, ());
                true
            }
        }
    }
}

#[allow(clippy::too_many_arguments)]
pub(crate) fn frontier_orbit(
    spec: &GroupSpec,
    p: &Point,
    q: &Point,
    cosh_bound: &Scalar,
    slack: f64,
    punctured: bool,
    meter: &Meter,
) -> Result<Vec<OrbitPoint>> {
    let gens = spec.symmetric_generators();
    let exact = spec.mode == Mode::Exact;
    let reach = cosh_bound.to_f64().max(1.0).acosh() + slack;
    let qf = q.to_f64();

    let mut elements = ElementSet::new(exact);
    let mut points = if exact {
        Seen::Exact(HashSet::new())
    } else {
        Seen::Floating(PointIndex::default())
    };
    let mut store: Vec<(Moebius, Point)> = Vec::new();
    let mut heap = BinaryHeap::new();
    let mut out = Vec::new();

    let id = Moebius::identity(spec.mode);
    elements.insert(&id);
    let d0 = dist_f64(p.to_f64(), qf);
    store.push((id, p.clone()));
    // Distances are non-negative, so their bit patterns order like the values.
    heap.push(Reverse((d0.to_bits(), 0usize)));

    while let Some(Reverse((_, idx))) = heap.pop() {
        meter.add(1)?;
        if idx % 1024 == 0 {
            meter.check_time()?;
        }
        let (g, gp) = store[idx].clone();
        let cosh = q.cosh_dist(&gp)?;
        let inside = cosh.compare(cosh_bound) != std::cmp::Ordering::Greater;
        let center = match spec.mode {
            Mode::Exact => &gp == q,
            Mode::Floating => dist_f64(gp.to_f64(), qf) <= crate::tol::POINT_EPS,
        };
        if inside && !(punctured && center) && points.insert(&gp) {
            out.push(OrbitPoint {
                point: gp.clone(),
                witness: g.clone(),
                cosh_dist: cosh,
            });
        }
        for s in &gens {
            let h = g.mul_unchecked(s);
            if !elements.insert(&h) {
                continue;
            }
            let hp = h.apply(p)?;
            let d = dist_f64(hp.to_f64(), qf);
            if d <= reach {
                store.push((h, hp));
                heap.push(Reverse((d.to_bits(), store.len() - 1)));
            }
        }
    }
    Ok(out)
}

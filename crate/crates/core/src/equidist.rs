//! Tangent-vector histograms of reciprocal geodesics on the modular surface,
//! compared with the Liouville measure cell by cell.
//!
//! Cells live in the standard fundamental domain `|Re z| <= 1/2, |z| >= 1`:
//! `nx` columns in `x`, `ny` rows spaced uniformly in `1/y` between the
//! lowest point `sqrt(3)/2` and the cusp cut `Y_MAX`, and `na` sectors of
//! tangent angle. Everything above the cut is one cusp bin.

use std::f64::consts::{FRAC_PI_3, PI, TAU as TWO_PI};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::census::census;
use crate::error::{Error, Result};
use crate::group::psl2z;
use crate::hyp::{direction_angle, dist_f64, geodesic_point, wrap_angle, IntMat, Mode, Moebius, Point, Scalar};
use crate::orbit::orbit_ball;

/// Height above which reduced samples go to the cusp bin.
pub const Y_MAX: f64 = 10.0;
pub const DEFAULT_STEP: f64 = 0.02;
const MAX_STEP: f64 = 0.1;
const CHUNK: usize = 64;

/// Reduces `p` into the closed fundamental domain, returning the image and
/// the element `g` with `g p` equal to it.
pub fn reduce_fd(p: &Point) -> (Point, Moebius) {
    let mut g = IntMat::ID;
    let out = match p.mode() {
        Mode::Exact => {
            let (mut x, mut y) = (p.x().as_exact().unwrap().clone(), p.y().as_exact().unwrap().clone());
            let half = BigRational::new(BigInt::one(), BigInt::from(2));
            loop {
                let n = (&x + &half).floor();
                if !n.numer().is_zero() {
                    x -= &n;
                    let n = i64::try_from(n.to_integer()).expect("translation fits i64");
                    let t = IntMat::T.pow(n.unsigned_abs() as u32);
                    g = if n > 0 { t.inv() } else { t } * g;
                }
                let r2 = &x * &x + &y * &y;
                if r2 >= BigRational::one() {
                    break;
                }
                x = -x / &r2;
                y /= &r2;
                g = IntMat::S * g;
            }
            Point::new(Scalar::Exact(x), Scalar::Exact(y)).expect("upper half-plane")
        }
        Mode::Floating => {
            let ((x, y), _, h) = reduce_tangent_with(p.to_f64(), 0.0);
            g = h;
            Point::real(x, y)
        }
    };
    let g = match p.mode() {
        Mode::Exact => g.to_moebius(),
        Mode::Floating => g.to_moebius().to_floating(),
    };
    (out, g)
}

fn reduce_tangent_with(z: (f64, f64), angle: f64) -> ((f64, f64), f64, IntMat) {
    let (mut x, mut y, mut a) = (z.0, z.1, angle);
    let mut g = IntMat::ID;
    for _ in 0..10_000 {
        let n = (x + 0.5).floor();
        if n != 0.0 {
            x -= n;
            let t = IntMat::T.pow(n.abs() as u32);
            g = if n > 0.0 { t.inv() } else { t } * g;
        }
        let r2 = x * x + y * y;
        if r2 >= 1.0 {
            break;
        }
        // z -> -1/z turns tangent vectors by -2 arg z.
        a -= 2.0 * y.atan2(x);
        x = -x / r2;
        y /= r2;
        g = IntMat::S * g;
    }
    ((x, y), wrap_angle(a), g)
}

/// Reduces a unit tangent vector `(z, angle)` into the fundamental domain.
pub fn reduce_tangent(z: (f64, f64), angle: f64) -> ((f64, f64), f64) {
    let (w, a, _) = reduce_tangent_with(z, angle);
    (w, a)
}

/// Grid dimensions, parsed from `"NXxNYxNA"`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Grid {
    pub nx: usize,
    pub ny: usize,
    pub na: usize,
}

impl Default for Grid {
    fn default() -> Self {
        Grid { nx: 12, ny: 12, na: 8 }
    }
}

impl FromStr for Grid {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<usize> = s
            .split('x')
            .map(|t| t.trim().parse::<usize>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::InvalidArgument(format!("grid {s:?} is not of the form NXxNYxNA")))?;
        match parts[..] {
            [nx, ny, na] if nx > 0 && ny > 0 && na > 0 => Ok(Grid { nx, ny, na }),
            _ => Err(Error::InvalidArgument(format!("grid {s:?} needs three positive sizes"))),
        }
    }
}

impl std::fmt::Display for Grid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}x{}x{}", self.nx, self.ny, self.na)
    }
}

impl Grid {
    fn y_edges(&self) -> Vec<f64> {
        let (lo, hi) = (1.0 / Y_MAX, 2.0 / 3f64.sqrt());
        (0..=self.ny)
            .map(|r| 1.0 / (hi - (hi - lo) * r as f64 / self.ny as f64))
            .collect()
    }

    fn cells(&self) -> usize {
        self.nx * self.ny * self.na
    }

    /// Bin of a reduced tangent vector; the last index is the cusp.
    fn locate(&self, edges: &[f64], (x, y): (f64, f64), angle: f64) -> usize {
        if y > Y_MAX {
            return self.cells();
        }
        let col = (((x + 0.5) * self.nx as f64).floor() as usize).min(self.nx - 1);
        let row = edges[1..].partition_point(|&e| e < y).min(self.ny - 1);
        let sec = ((angle / TWO_PI * self.na as f64).floor() as usize).min(self.na - 1);
        (row * self.nx + col) * self.na + sec
    }
}

/// `int int dx dy / y^2` over `[x0, x1] x [y0, y1]` above the unit circle.
fn cell_area(x0: f64, x1: f64, y0: f64, y1: f64) -> f64 {
    let floor = |x: f64| (1.0 - x * x).max(0.0).sqrt();
    let mut cuts = vec![x0, x1];
    for y in [y0, y1] {
        if y < 1.0 {
            let c = (1.0 - y * y).sqrt();
            cuts.extend([-c, c].into_iter().filter(|&c| c > x0 && c < x1));
        }
    }
    cuts.sort_by(f64::total_cmp);
    cuts.windows(2)
        .map(|w| {
            let (a, b) = (w[0], w[1]);
            let s = floor(0.5 * (a + b));
            if s >= y1 {
                0.0
            } else if s > y0 {
                // Integrand 1/sqrt(1 - x^2) - 1/y1.
                b.asin() - a.asin() - (b - a) / y1
            } else {
                (b - a) * (1.0 / y0 - 1.0 / y1)
            }
        })
        .sum()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Bin3D {
    pub x_range: (f64, f64),
    pub y_range: (f64, f64),
    pub angle_range: (f64, f64),
    pub ref_mass: f64,
    pub mass: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Histogram3D {
    pub grid: Grid,
    /// Cells in row, column, sector order, then the cusp bin.
    pub bins: Vec<Bin3D>,
    pub total_mass: f64,
}

impl Histogram3D {
    pub fn empty(grid: Grid) -> Self {
        let edges = grid.y_edges();
        let area = FRAC_PI_3;
        let mut bins = Vec::with_capacity(grid.cells() + 1);
        for r in 0..grid.ny {
            for c in 0..grid.nx {
                let x0 = -0.5 + c as f64 / grid.nx as f64;
                let x1 = -0.5 + (c + 1) as f64 / grid.nx as f64;
                let (y0, y1) = (edges[r], edges[r + 1]);
                let cell = cell_area(x0, x1, y0, y1) / area;
                for s in 0..grid.na {
                    let a0 = TWO_PI * s as f64 / grid.na as f64;
                    let a1 = TWO_PI * (s + 1) as f64 / grid.na as f64;
                    bins.push(Bin3D {
                        x_range: (x0, x1),
                        y_range: (y0, y1),
                        angle_range: (a0, a1),
                        ref_mass: cell / grid.na as f64,
                        mass: 0.0,
                    });
                }
            }
        }
        bins.push(Bin3D {
            x_range: (-0.5, 0.5),
            y_range: (Y_MAX, f64::INFINITY),
            angle_range: (0.0, TWO_PI),
            ref_mass: (1.0 / Y_MAX) / area,
            mass: 0.0,
        });
        Histogram3D {
            grid,
            bins,
            total_mass: 0.0,
        }
    }

    fn add(&mut self, o: &Histogram3D) {
        for (a, b) in self.bins.iter_mut().zip(&o.bins) {
            a.mass += b.mass;
        }
        self.total_mass += o.total_mass;
    }
}

/// Direction in which each lifted segment is traversed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    #[default]
    Forward,
    Reversed,
    Symmetrized,
}

impl FromStr for Orientation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "forward" => Ok(Orientation::Forward),
            "reversed" => Ok(Orientation::Reversed),
            "symmetrized" => Ok(Orientation::Symmetrized),
            _ => Err(Error::InvalidArgument(format!("unknown orientation {s:?}"))),
        }
    }
}

/// A geodesic segment from `start` in direction `angle` of the given length.
#[derive(Clone, Copy, Debug)]
struct Segment {
    start: (f64, f64),
    angle: f64,
    length: f64,
}

fn check_step(step: f64) -> Result<()> {
    if !(step > 0.0 && step <= MAX_STEP) {
        return Err(Error::InvalidArgument(format!("step {step} must lie in (0, {MAX_STEP}]")));
    }
    Ok(())
}

/// Deposits `length / n` at the midpoints of `n = ceil(length / step)`
/// equal pieces of every segment.
fn deposit(segments: &[Segment], grid: Grid, step: f64, orientation: Orientation) -> Histogram3D {
    let edges = grid.y_edges();
    let sample = |h: &mut Histogram3D, seg: &Segment| {
        let n = (seg.length / step).ceil().max(1.0) as usize;
        let w = seg.length / n as f64;
        for k in 0..n {
            let s = (k as f64 + 0.5) * w;
            let (z, a) = geodesic_point(seg.start, seg.angle, s);
            let (z, a) = reduce_tangent(z, a);
            match orientation {
                Orientation::Forward => h.bins[grid.locate(&edges, z, a)].mass += w,
                Orientation::Reversed => h.bins[grid.locate(&edges, z, wrap_angle(a + PI))].mass += w,
                Orientation::Symmetrized => {
                    h.bins[grid.locate(&edges, z, a)].mass += 0.5 * w;
                    h.bins[grid.locate(&edges, z, wrap_angle(a + PI))].mass += 0.5 * w;
                }
            }
        }
        h.total_mass += seg.length;
    };
    // Fixed chunks summed in order keep the result independent of the
    // thread count.
    let parts: Vec<Histogram3D> = segments
        .par_chunks(CHUNK)
        .map(|chunk| {
            let mut h = Histogram3D::empty(grid);
            for seg in chunk {
                sample(&mut h, seg);
            }
            h
        })
        .collect();
    let mut out = Histogram3D::empty(grid);
    for p in &parts {
        out.add(p);
    }
    out
}

/// Tangent vectors of all reciprocal geodesics of length at most `l` on
/// the modular surface, each traversed once at unit speed.
pub fn mu_l_histogram(l: f64, grid: Grid, step: f64, orientation: Orientation) -> Result<Histogram3D> {
    check_step(step)?;
    let g = psl2z();
    let c = census(&g, l)?;
    let i = Point::i(Mode::Exact);
    let segments: Vec<Segment> = c
        .classes
        .iter()
        .map(|k| -> Result<Segment> {
            // The segment from i to tau(i) has midpoint gamma(i), the fixed
            // point of tau = gamma S gamma^-1, and covers the closed geodesic once.
            let mid = k.witness.gamma.apply(&i)?.to_f64();
            Ok(Segment {
                start: (0.0, 1.0),
                angle: direction_angle((0.0, 1.0), mid),
                length: 2.0 * k.length,
            })
        })
        .collect::<Result<_>>()?;
    Ok(deposit(&segments, grid, step, orientation))
}

/// Arcs from `y` to every orbit point of `x` in the punctured ball of
/// radius `l` about `y`.
pub fn segment_histogram(x: &Point, y: &Point, l: f64, grid: Grid, step: f64) -> Result<Histogram3D> {
    check_step(step)?;
    let g = psl2z();
    let pts = orbit_ball(&g, x, y, l, true)?;
    let yf = y.to_f64();
    let segments: Vec<Segment> = pts
        .iter()
        .map(|o| {
            let z = o.point.to_f64();
            Segment {
                start: yf,
                angle: direction_angle(yf, z),
                length: dist_f64(yf, z),
            }
        })
        .collect();
    Ok(deposit(&segments, grid, step, Orientation::Forward))
}

/// Total variation distance between the normalized histogram and the
/// Liouville reference.
pub fn discrepancy(h: &Histogram3D) -> Result<f64> {
    if !(h.total_mass > 0.0) {
        return Err(Error::ZeroMass);
    }
    Ok(0.5
        * h.bins
            .iter()
            .map(|b| (b.mass / h.total_mass - b.ref_mass).abs())
            .sum::<f64>())
}

/// Largest imaginary part among reduced samples of a segment.
pub(crate) fn segment_height(start: (f64, f64), angle: f64, length: f64, step: f64) -> f64 {
    let n = (length / step).ceil().max(1.0) as usize;
    (0..=n)
        .map(|k| {
            let (z, _) = geodesic_point(start, angle, length * k as f64 / n as f64);
            reduce_tangent(z, 0.0).0 .1
        })
        .fold(0.0, f64::max)
}

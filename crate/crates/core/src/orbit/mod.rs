//! Orbit points `Gamma p` in (punctured) balls about `q`, Delsarte counts
//! and growth-rate estimates.
//!
//! Three routes share one interface:
//! - the modular group with `p, q` in `PSL(2, Z) i` is enumerated directly
//!   by bottom rows, which is complete by construction;
//! - the free products `Gamma_k` are enumerated as reduced words with
//!   fundamental-domain pruning;
//! - anything else goes through the nearest-first frontier.
//!
//! Ball radii are carried as bounds on `cosh d`, so membership on the
//! integral routes is an integer comparison `|M|_F^2 <= floor(2 cosh L)`.

mod frontier;
mod modular;
mod tree;

use std::sync::atomic::{AtomicUsize, Ordering as AtomicOrdering};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{word_ball, GroupSpec};
use crate::hyp::{ball_volume, dist_f64, IntMat, Mode, Moebius, Point, Scalar};
use crate::tol::POINT_EPS;

pub use frontier::default_slack;
pub(crate) use tree::eta_pow;

/// Limits on an enumeration. Exceeding either one is an error, never a
/// truncated result.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Budget {
    pub max_points: Option<usize>,
    pub max_seconds: Option<f64>,
}

pub(crate) struct Meter {
    start: Instant,
    limit: Option<usize>,
    deadline: Option<Duration>,
    seen: AtomicUsize,
}

impl Meter {
    pub(crate) fn new(budget: &Budget) -> Self {
        Meter {
            start: Instant::now(),
            limit: budget.max_points,
            deadline: budget.max_seconds.map(Duration::from_secs_f64),
            seen: AtomicUsize::new(0),
        }
    }

    #[cfg(test)]
    pub(crate) fn unbounded() -> Self {
        Self::new(&Budget::default())
    }

    pub(crate) fn add(&self, n: usize) -> Result<()> {
        let total = self.seen.fetch_add(n, AtomicOrdering::Relaxed) + n;
        match self.limit {
            Some(max) if total > max => Err(Error::BudgetExceeded(format!(
                "more than {max} points; raise --max-points"
            ))),
            _ => Ok(()),
        }
    }

    pub(crate) fn check_time(&self) -> Result<()> {
        match self.deadline {
            Some(d) if self.start.elapsed() > d => Err(Error::BudgetExceeded(format!(
                "time limit of {:.1} s reached; raise --max-seconds",
                d.as_secs_f64()
            ))),
            _ => Ok(()),
        }
    }
}

/// One orbit point `witness(p)` and `cosh d(q, point)`.
#[derive(Clone, Debug, PartialEq)]
pub struct OrbitPoint {
    pub point: Point,
    pub witness: Moebius,
    pub cosh_dist: Scalar,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OrbitOptions {
    pub punctured: bool,
    /// Frontier slack; `None` uses [`default_slack`].
    pub slack: Option<f64>,
    /// Skip the direct routes and use the frontier.
    pub force_frontier: bool,
    pub budget: Budget,
}

impl Default for OrbitOptions {
    fn default() -> Self {
        OrbitOptions {
            punctured: true,
            slack: None,
            force_frontier: false,
            budget: Budget::default(),
        }
    }
}

/// `cosh L` as an exact rational (the exact value of the double).
pub fn cosh_bound(l: f64) -> Result<BigRational> {
    if !l.is_finite() || l < 0.0 {
        return Err(Error::InvalidArgument(format!("radius {l} must be finite and >= 0")));
    }
    Ok(BigRational::from_float(l.cosh()).expect("finite"))
}

/// `floor(2 c)`, the largest admissible squared Frobenius norm.
pub(crate) fn norm_limit(cosh: &BigRational) -> i128 {
    let two = BigRational::from_integer(BigInt::from(2));
    (cosh * two).floor().to_integer().to_i128().unwrap_or(i128::MAX)
}

/// An integral matrix `h` with `h(i) = p`, when `p` lies in `PSL(2, Z) i`.
pub fn lift_to_modular(p: &Point) -> Option<IntMat> {
    let (x, y) = (p.x().as_exact()?, p.y().as_exact()?);
    if !y.numer().to_i64().is_some_and(|v| v == 1) {
        return None;
    }
    let n = y.denom().to_i64()?;
    let xn = x * BigRational::from_integer(BigInt::from(n));
    if !xn.is_integer() {
        return None;
    }
    let xx = xn.to_integer().to_i128()?;
    let mut c = 1i64;
    while c * c <= n {
        let d2 = n - c * c;
        let d = (d2 as f64).sqrt().round() as i64;
        if d * d == d2 && num_integer::gcd(c, d) == 1 {
            let (a0, b0) = solve_top(c, d)?;
            let u = a0 as i128 * c as i128 + b0 as i128 * d as i128;
            if (xx - u).rem_euclid(n as i128) == 0 {
                let t = ((xx - u) / n as i128) as i64;
                return IntMat::new(a0 + t * c, b0 + t * d, c, d);
            }
        }
        c += 1;
    }
    None
}

fn solve_top(c: i64, d: i64) -> Option<(i64, i64)> {
    let e = num_integer::Integer::extended_gcd(&d, &c);
    (e.gcd == 1).then_some((e.x, -e.y))
}

/// How an integral route parametrizes `Gamma p` around `q`.
#[derive(Clone, Copy, Debug)]
pub(crate) enum Frame {
    Modular { h_p: IntMat, h_q: IntMat },
    GammaK { k: u32, jp: i64, mq: i64 },
}

impl Frame {
    pub(crate) fn h_p(self) -> IntMat {
        match self {
            Frame::Modular { h_p, .. } => h_p,
            Frame::GammaK { jp, .. } => eta_pow(jp),
        }
    }

    pub(crate) fn h_q(self) -> IntMat {
        match self {
            Frame::Modular { h_q, .. } => h_q,
            Frame::GammaK { mq, .. } => eta_pow(mq),
        }
    }
}

fn gamma_k_center(p: &Point, k: u32) -> Option<i64> {
    let (x, y) = (p.x().as_i64()?, p.y().as_i64()?);
    (y == 1 && x % 2 == 0 && (x / 2).abs() <= k as i64).then_some(x / 2)
}

pub(crate) fn integral_frame(spec: &GroupSpec, p: &Point, q: &Point) -> Option<Frame> {
    if spec.is_modular() {
        return Some(Frame::Modular {
            h_p: lift_to_modular(p)?,
            h_q: lift_to_modular(q)?,
        });
    }
    let k = spec.gamma_k_index()?;
    Some(Frame::GammaK {
        k,
        jp: gamma_k_center(p, k)?,
        mq: gamma_k_center(q, k)?,
    })
}

/// Folds over `M = h_q^-1 g h_p`, one per orbit point `g p` with
/// `|M|_F^2 <= n_max`; `cosh d(q, g p) = |M|^2 / 2`.
pub(crate) fn fold_integral<A, I, F, G>(
    frame: Frame,
    n_max: i128,
    punctured: bool,
    meter: &Meter,
    init: I,
    fold: F,
    merge: G,
) -> Result<A>
where
    A: Send,
    I: Fn() -> A + Sync + Send,
    F: Fn(&mut A, IntMat, i128) + Sync + Send,
    G: Fn(A, A) -> A + Sync + Send,
{
    match frame {
        Frame::Modular { .. } => modular::fold_cosets(n_max, punctured, meter, init, fold, merge),
        Frame::GammaK { k, jp, mq } => {
            tree::fold_gamma_k(k, jp, mq, n_max, punctured, meter, init, fold, merge)
        }
    }
}

fn check_modes(spec: &GroupSpec, p: &Point, q: &Point) -> Result<()> {
    for z in [p, q] {
        if z.mode() != spec.mode {
            return Err(Error::ModeMismatch(spec.mode, z.mode()));
        }
    }
    Ok(())
}

fn sort_points(v: &mut [OrbitPoint]) {
    v.sort_by(|a, b| {
        a.cosh_dist
            .compare(&b.cosh_dist)
            .then_with(|| a.point.x().compare(b.point.x()))
            .then_with(|| a.point.y().compare(b.point.y()))
    });
}

/// Orbit points of `Gamma p` with `d(q, .) <= l` (and `> 0` if punctured).
pub fn orbit_ball(spec: &GroupSpec, p: &Point, q: &Point, l: f64, punctured: bool) -> Result<Vec<OrbitPoint>> {
    let opts = OrbitOptions {
        punctured,
        ..OrbitOptions::default()
    };
    orbit_ball_cosh(spec, p, q, &cosh_bound(l)?, &opts)
}

/// As [`orbit_ball`], with the radius given as an exact bound on `cosh d`.
pub fn orbit_ball_cosh(
    spec: &GroupSpec,
    p: &Point,
    q: &Point,
    cosh: &BigRational,
    opts: &OrbitOptions,
) -> Result<Vec<OrbitPoint>> {
    check_modes(spec, p, q)?;
    let meter = Meter::new(&opts.budget);
    let frame = (!opts.force_frontier)
        .then(|| integral_frame(spec, p, q))
        .flatten();
    let mut out = match frame {
        Some(frame) => {
            let ms: Vec<(IntMat, i128)> = fold_integral(
                frame,
                norm_limit(cosh),
                opts.punctured,
                &meter,
                Vec::new,
                |v, m, n| v.push((m, n)),
                |mut a, b| {
                    a.extend(b);
                    a
                },
            )?;
            let (h_p_inv, h_q) = (frame.h_p().inv(), frame.h_q());
            ms.into_iter()
                .map(|(m, n)| OrbitPoint {
                    point: (h_q * m).apply_i(),
                    witness: (h_q * m * h_p_inv).to_moebius(),
                    cosh_dist: Scalar::ratio(n as i64, 2),
                })
                .collect()
        }
        None => {
            let bound = match spec.mode {
                Mode::Exact => Scalar::Exact(cosh.clone()),
                Mode::Floating => Scalar::Real(crate::hyp::ratio_to_f64(cosh)),
            };
            let slack = match opts.slack {
                Some(s) => s,
                None => default_slack(spec, p)?,
            };
            frontier::frontier_orbit(spec, p, q, &bound, slack, opts.punctured, &meter)?
        }
    };
    sort_points(&mut out);
    Ok(out)
}

/// Squared-norm values (integral routes) or `2 cosh d` values (frontier)
/// of all orbit points within `cosh`, without materializing points when
/// a direct route applies.
fn orbit_norms(
    spec: &GroupSpec,
    p: &Point,
    q: &Point,
    cosh: &BigRational,
    opts: &OrbitOptions,
) -> Result<Vec<f64>> {
    check_modes(spec, p, q)?;
    let frame = (!opts.force_frontier)
        .then(|| integral_frame(spec, p, q))
        .flatten();
    match frame {
        Some(frame) => {
            let meter = Meter::new(&opts.budget);
            let mut v: Vec<f64> = fold_integral(
                frame,
                norm_limit(cosh),
                opts.punctured,
                &meter,
                Vec::new,
                |v, _, n| v.push(n as f64),
                |mut a, b| {
                    a.extend(b);
                    a
                },
            )?;
            v.sort_by(f64::total_cmp);
            Ok(v)
        }
        None => {
            let pts = orbit_ball_cosh(spec, p, q, cosh, opts)?;
            Ok(pts.iter().map(|o| 2.0 * o.cosh_dist.to_f64()).collect())
        }
    }
}

/// Number of orbit points within `l`.
pub fn orbit_count(spec: &GroupSpec, p: &Point, q: &Point, l: f64, opts: &OrbitOptions) -> Result<u64> {
    check_modes(spec, p, q)?;
    let cosh = cosh_bound(l)?;
    if let Some(frame) = (!opts.force_frontier).then(|| integral_frame(spec, p, q)).flatten() {
        let meter = Meter::new(&opts.budget);
        return fold_integral(
            frame,
            norm_limit(&cosh),
            opts.punctured,
            &meter,
            || 0u64,
            |n, _, _| *n += 1,
            |a, b| a + b,
        );
    }
    Ok(orbit_ball_cosh(spec, p, q, &cosh, opts)?.len() as u64)
}

/// Order of the stabilizer of `p`: a declared normalizer order when `p` is
/// (an integral translate of) a declared fixed point, else a count over a
/// short word ball.
pub fn stabilizer_order(spec: &GroupSpec, p: &Point) -> Result<u32> {
    for c in &spec.involution_classes {
        if c.fixed_point.mode() == p.mode() && c.fixed_point.approx_eq(p) {
            return Ok(c.normalizer_order);
        }
    }
    if spec.is_modular() && lift_to_modular(p).is_some() {
        for c in &spec.involution_classes {
            if lift_to_modular(&c.fixed_point).is_some() {
                return Ok(c.normalizer_order);
            }
        }
    }
    let pf = p.to_f64();
    let mut n = 0;
    for g in word_ball(spec, 4) {
        if dist_f64(g.apply(p)?.to_f64(), pf) <= POINT_EPS {
            n += 1;
        }
    }
    Ok(n)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DelsarteReport {
    pub radius: f64,
    pub count: u64,
    pub predicted: f64,
    pub ratio: f64,
    pub stabilizer_order: u32,
}

/// Punctured-ball orbit count against `vol B(R) / (|Stab p| covolume)`.
pub fn delsarte_ratio(spec: &GroupSpec, p: &Point, q: &Point, r: f64, opts: &OrbitOptions) -> Result<DelsarteReport> {
    if r <= 0.0 {
        return Err(Error::InvalidArgument(format!("radius {r} must be positive")));
    }
    let area = spec.area().ok_or_else(|| {
        Error::InvalidArgument(format!("{} has no finite covolume", spec.name))
    })?;
    let stab = stabilizer_order(spec, p)?;
    let opts = OrbitOptions {
        punctured: true,
        ..opts.clone()
    };
    let count = orbit_count(spec, p, q, r, &opts)?;
    let predicted = ball_volume(r) / (stab as f64 * area);
    Ok(DelsarteReport {
        radius: r,
        count,
        predicted,
        ratio: count as f64 / predicted,
        stabilizer_order: stab,
    })
}

/// Orbit counts sampled at increasing radii.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CountCurve {
    pub samples: Vec<(f64, u64)>,
}

impl CountCurve {
    pub fn new(samples: Vec<(f64, u64)>) -> Result<Self> {
        if samples.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(Error::InvalidArgument(
                "count curve radii must be strictly increasing".into(),
            ));
        }
        if samples.windows(2).any(|w| w[1].1 < w[0].1) {
            return Err(Error::InvalidArgument("counts must be non-decreasing".into()));
        }
        Ok(CountCurve { samples })
    }
}

/// Punctured orbit counts at each radius in `radii` (sorted ascending).
pub fn count_curve(spec: &GroupSpec, p: &Point, q: &Point, radii: &[f64], opts: &OrbitOptions) -> Result<CountCurve> {
    let Some(&top) = radii.last() else {
        return CountCurve::new(Vec::new());
    };
    let norms = orbit_norms(spec, p, q, &cosh_bound(top)?, opts)?;
    let mut samples = Vec::with_capacity(radii.len());
    for &l in radii {
        let limit = norm_limit(&cosh_bound(l)?) as f64;
        let n = norms.partition_point(|&v| v <= limit + 1e-9);
        samples.push((l, n as u64));
    }
    CountCurve::new(samples)
}

/// Least-squares slope of `log count` against radius over the window.
pub fn critical_exponent_estimate(curve: &CountCurve, window: (f64, f64)) -> Result<f64> {
    let pts: Vec<(f64, f64)> = curve
        .samples
        .iter()
        .filter(|(l, _)| *l >= window.0 - 1e-12 && *l <= window.1 + 1e-12)
        .map(|&(l, n)| (l, n))
        .filter(|&(_, n)| n > 0)
        .map(|(l, n)| (l, (n as f64).ln()))
        .collect();
    let in_window = curve
        .samples
        .iter()
        .filter(|(l, _)| *l >= window.0 - 1e-12 && *l <= window.1 + 1e-12)
        .count();
    if pts.len() < 3 || pts.len() < in_window {
        return Err(Error::InsufficientData(format!(
            "need at least 3 positive counts in [{}, {}], have {}",
            window.0,
            window.1,
            pts.len()
        )));
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Ok(sxy / sxx)
}

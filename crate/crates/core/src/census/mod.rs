//! Dihedral classes of bounded length.
//!
//! Each class representative pair `(sigma, sigma_bar)` and each orbit point
//! `gamma p_sigma_bar` in the punctured ball about `p_sigma` gives the group
//! `<sigma, gamma sigma_bar gamma^-1>`. Grouping these by conjugacy key
//! yields the classes, and the group sizes are the fiber counts.
//!
//! Groups that contain `S` and have all involution fixed points in
//! `PSL(2, Z) i` are keyed exactly by words. Everything else is keyed by
//! length and axis markings and deduplicated within a tolerance.

mod key;
pub mod word;

use std::collections::{BTreeMap, HashMap};
use std::sync::Mutex;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::GroupSpec;
use crate::hyp::{direction_angle, IntMat, Mode, Moebius, Scalar};
use crate::orbit::{cosh_bound, fold_integral, integral_frame, norm_limit, orbit_ball_cosh, orbit_count, Frame, Meter, OrbitOptions};

use key::{pair_gap, word_key, Marking};
pub use word::{is_reciprocal, least_rotation, reverse_swap, rl_word, unoriented_key};

/// Floating classes closer than this in length and in every marking angle
/// are merged.
pub const CLUSTER_EPS: f64 = 1e-7;
/// Distinct floating classes closer than this are reported as near ties.
pub const NEAR_TIE_EPS: f64 = 1e-5;

/// Which pair and which group element produced a class.
#[derive(Clone, Debug, PartialEq)]
pub struct Witness {
    pub sigma: usize,
    pub sigma_bar: usize,
    pub gamma: Moebius,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DihedralClass {
    pub key: String,
    pub length: f64,
    /// `|tr|` of the translation `sigma gamma sigma_bar gamma^-1`.
    pub trace: Scalar,
    pub maximal: bool,
    pub witness: Witness,
    pub fiber_count: u64,
    /// Unoriented cyclic word of the translation (word-keyed classes only).
    pub word: Option<String>,
    /// Index in the maximal class with the same axis.
    pub index: u32,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Census {
    /// Sorted by trace, then key.
    pub classes: Vec<DihedralClass>,
    /// Number of parametrizing orbit points, summed over pairs.
    pub raw_count: u64,
    /// Keys are tolerance-based rather than exact.
    pub approximate: bool,
    pub warnings: Vec<String>,
}

impl Census {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn maximal_count(&self) -> usize {
        self.classes.iter().filter(|c| c.maximal).count()
    }
}

/// Classes of length at most `l`.
pub fn census(spec: &GroupSpec, l: f64) -> Result<Census> {
    if l <= 0.0 {
        return Err(Error::InvalidArgument(format!("census length {l} must be positive")));
    }
    census_cosh(spec, &cosh_bound(l)?, &OrbitOptions::default())
}

/// Classes whose translation has `|tr| <= x`.
pub fn census_by_trace(spec: &GroupSpec, x: f64, opts: &OrbitOptions) -> Result<Census> {
    if !(x > 2.0) || !x.is_finite() {
        return Err(Error::InvalidArgument(format!("trace bound {x} must exceed 2")));
    }
    let half = BigRational::from_float(x).expect("finite") / BigInt::from(2);
    census_cosh(spec, &half, opts)
}

/// Classes with `cosh(length) <= cosh`.
pub fn census_cosh(spec: &GroupSpec, cosh: &BigRational, opts: &OrbitOptions) -> Result<Census> {
    let opts = OrbitOptions {
        punctured: true,
        ..opts.clone()
    };
    match word_frames(spec) {
        Some(frames) => word_census(&frames, cosh, &opts),
        None => marked_census(spec, cosh, &opts),
    }
}

/// Integral frames for every ordered pair `(center, orbit)`, when every
/// class representative is the conjugate of `S` by its frame.
fn word_frames(spec: &GroupSpec) -> Option<Vec<(usize, usize, Frame)>> {
    if spec.mode != Mode::Exact {
        return None;
    }
    let n = spec.involution_classes.len();
    let mut out = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let ci = &spec.involution_classes[i];
            let cj = &spec.involution_classes[j];
            let frame = integral_frame(spec, &cj.fixed_point, &ci.fixed_point)?;
            let h = frame.h_q();
            if IntMat::from_moebius(&ci.rep)? != h * IntMat::S * h.inv() {
                return None;
            }
            out.push((i, j, frame));
        }
    }
    Some(out)
}

struct WordAcc {
    word: String,
    index: u32,
    norm: i128,
    fiber: u64,
    /// Least `(sigma, sigma_bar, M)` seen.
    witness: (usize, usize, IntMat),
}

fn merge_acc(mut a: HashMap<String, WordAcc>, b: HashMap<String, WordAcc>) -> HashMap<String, WordAcc> {
    for (k, v) in b {
        match a.get_mut(&k) {
            Some(e) => {
                e.fiber += v.fiber;
                e.witness = e.witness.min(v.witness);
            }
            None => {
                a.insert(k, v);
            }
        }
    }
    a
}

fn word_census(
    frames: &[(usize, usize, Frame)],
    cosh: &BigRational,
    opts: &OrbitOptions,
) -> Result<Census> {
    let meter = Meter::new(&opts.budget);
    let n_max = norm_limit(cosh);
    let mut all: HashMap<String, WordAcc> = HashMap::new();
    let mut raw = 0u64;
    for &(i, j, frame) in frames {
        let part = fold_integral(
            frame,
            n_max,
            true,
            &meter,
            HashMap::new,
            |acc: &mut HashMap<String, WordAcc>, m, n| {
                let wk = word_key(m);
                let e = acc.entry(wk.key).or_insert_with(|| WordAcc {
                    word: wk.word,
                    index: wk.power,
                    norm: n,
                    fiber: 0,
                    witness: (i, j, m),
                });
                e.fiber += 1;
                e.witness = e.witness.min((i, j, m));
            },
            merge_acc,
        )?;
        raw += part.values().map(|a| a.fiber).sum::<u64>();
        all = merge_acc(all, part);
    }
    let frame_of: HashMap<(usize, usize), Frame> = frames.iter().map(|&(i, j, f)| ((i, j), f)).collect();
    let mut classes: Vec<DihedralClass> = all
        .into_iter()
        .map(|(key, a)| {
            let (i, j, m) = a.witness;
            let f = frame_of[&(i, j)];
            DihedralClass {
                key,
                length: (a.norm as f64 / 2.0).acosh(),
                trace: Scalar::from_i64(a.norm as i64, Mode::Exact),
                maximal: a.index == 1,
                witness: Witness {
                    sigma: i,
                    sigma_bar: j,
                    gamma: (f.h_q() * m * f.h_p().inv()).to_moebius(),
                },
                fiber_count: a.fiber,
                word: Some(a.word),
                index: a.index,
            }
        })
        .collect();
    sort_classes(&mut classes);
    Ok(Census {
        classes,
        raw_count: raw,
        approximate: false,
        warnings: Vec::new(),
    })
}

fn sort_classes(v: &mut [DihedralClass]) {
    v.sort_by(|a, b| {
        a.trace
            .compare(&b.trace)
            .then_with(|| a.length.total_cmp(&b.length))
            .then_with(|| a.key.cmp(&b.key))
    });
}

struct Candidate {
    length: f64,
    trace: f64,
    marks: [Marking; 2],
    witness: Witness,
}

struct Cluster {
    first: Candidate,
    fiber: u64,
}

fn marked_census(spec: &GroupSpec, cosh: &BigRational, opts: &OrbitOptions) -> Result<Census> {
    let classes = &spec.involution_classes;
    let mut cands = Vec::new();
    for (i, ci) in classes.iter().enumerate() {
        for (j, cj) in classes.iter().enumerate() {
            let pts = orbit_ball_cosh(spec, &cj.fixed_point, &ci.fixed_point, cosh, opts)?;
            let (pi, pj) = (ci.fixed_point.to_f64(), cj.fixed_point.to_f64());
            for o in pts {
                let g = o.witness;
                let back = g.invert().apply(&ci.fixed_point)?.to_f64();
                let t = ci.rep.mul_unchecked(&g).mul_unchecked(&cj.rep).mul_unchecked(&g.invert());
                let mut marks = [
                    Marking::new(i, direction_angle(pi, o.point.to_f64()), ci.normalizer_order),
                    Marking::new(j, direction_angle(pj, back), cj.normalizer_order),
                ];
                if (marks[1].class, marks[1].angle) < (marks[0].class, marks[0].angle) {
                    marks.swap(0, 1);
                }
                cands.push(Candidate {
                    length: o.cosh_dist.to_f64().max(1.0).acosh(),
                    trace: t.trace().abs().to_f64(),
                    marks,
                    witness: Witness {
                        sigma: i,
                        sigma_bar: j,
                        gamma: g,
                    },
                });
            }
        }
    }
    let raw = cands.len() as u64;
    cands.sort_by(|a, b| a.length.total_cmp(&b.length));

    let mut clusters: Vec<Cluster> = Vec::new();
    let mut warnings = Vec::new();
    for c in cands {
        let mut hit = None;
        for (idx, k) in clusters.iter().enumerate().rev() {
            let dl = c.length - k.first.length;
            if dl > NEAR_TIE_EPS {
                break;
            }
            let gap = dl.abs().max(pair_gap(&c.marks, &k.first.marks));
            if gap <= CLUSTER_EPS {
                hit = Some(idx);
                break;
            }
            if gap <= NEAR_TIE_EPS {
                warnings.push(format!(
                    "near tie at length {:.9}: marking gap {gap:.2e}",
                    c.length
                ));
            }
        }
        match hit {
            Some(idx) => clusters[idx].fiber += 1,
            None => clusters.push(Cluster { first: c, fiber: 1 }),
        }
    }

    // A class is a proper subgroup when a class of length l/m shares one of
    // its markings.
    let index_of = |k: &Cluster| -> u32 {
        let mut best = 1;
        for o in &clusters {
            if o.first.length > k.first.length / 2.0 + CLUSTER_EPS {
                break;
            }
            let m = (k.first.length / o.first.length).round();
            if m < 2.0 || (k.first.length - m * o.first.length).abs() > 1e-6 * m {
                continue;
            }
            let shares = k.first.marks.iter().any(|a| o.first.marks.iter().any(|b| a.gap(b) <= 1e-6));
            if shares {
                best = best.max(m as u32);
            }
        }
        best
    };
    let indices: Vec<u32> = clusters.iter().map(index_of).collect();
    let mut out: Vec<DihedralClass> = clusters
        .into_iter()
        .zip(indices)
        .map(|(k, index)| {
            let [a, b] = k.first.marks;
            DihedralClass {
                key: format!(
                    "{:.9}|{}:{:.7}|{}:{:.7}",
                    k.first.length, a.class, a.angle, b.class, b.angle
                ),
                length: k.first.length,
                trace: Scalar::Real(k.first.trace),
                maximal: index == 1,
                witness: k.first.witness,
                fiber_count: k.fiber,
                word: None,
                index,
            }
        })
        .collect();
    sort_classes(&mut out);
    warnings.sort();
    warnings.dedup();
    Ok(Census {
        classes: out,
        raw_count: raw,
        approximate: true,
        warnings,
    })
}

pub fn is_maximal(cls: &DihedralClass) -> bool {
    match &cls.word {
        Some(w) => word::is_primitive_word(w.as_bytes()),
        None => cls.maximal,
    }
}

/// Lengths of the subgroups of a maximal class up to length `l`, with the
/// number of conjugacy classes at each index: one for odd, two for even.
pub fn expand_maximal(cls: &DihedralClass, l: f64) -> Result<Vec<(f64, u32)>> {
    if !cls.maximal {
        return Err(Error::NonMaximal(cls.key.clone()));
    }
    Ok(expand_length(cls.length, l))
}

pub fn expand_length(l0: f64, l: f64) -> Vec<(f64, u32)> {
    (1..)
        .map(|m| (m, m as f64 * l0))
        .take_while(|&(_, len)| len <= l + 1e-12)
        .map(|(m, len)| (len, if m % 2 == 0 { 2 } else { 1 }))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CensusBounds {
    /// Orbit points summed over pairs, weighted by `1 / (n_sigma + n_sigma_bar)`.
    #[serde(serialize_with = "crate::serde_rational")]
    pub lower: BigRational,
    /// Orbit points summed over pairs.
    pub upper: u64,
    /// Upper bound on the number of maximal classes.
    #[serde(serialize_with = "crate::serde_rational")]
    pub maximal_upper: BigRational,
}

pub fn census_bounds(spec: &GroupSpec, l: f64, opts: &OrbitOptions) -> Result<CensusBounds> {
    if l <= 0.0 {
        return Err(Error::InvalidArgument(format!("census length {l} must be positive")));
    }
    let opts = OrbitOptions {
        punctured: true,
        ..opts.clone()
    };
    let mut upper = 0u64;
    let mut lower = BigRational::zero();
    for ci in &spec.involution_classes {
        for cj in &spec.involution_classes {
            let n = orbit_count(spec, &cj.fixed_point, &ci.fixed_point, l, &opts)?;
            upper += n;
            lower += BigRational::new(
                BigInt::from(n),
                BigInt::from(ci.normalizer_order + cj.normalizer_order),
            );
        }
    }
    Ok(CensusBounds {
        maximal_upper: lower.clone(),
        lower,
        upper,
    })
}

static EPSILON0: Mutex<BTreeMap<String, f64>> = Mutex::new(BTreeMap::new());

/// Shortest dihedral length, found by doubling the census radius.
pub fn epsilon0(spec: &GroupSpec) -> Result<f64> {
    let tag = format!("{}|{}", spec.name, spec.generators.iter().map(|g| g.to_string()).collect::<Vec<_>>().join(";"));
    if let Some(&e) = EPSILON0.lock().expect("poisoned").get(&tag) {
        return Ok(e);
    }
    let mut l = 1.0;
    while l <= 32.0 {
        let c = census(spec, l)?;
        if let Some(e) = c.classes.iter().map(|c| c.length).min_by(f64::total_cmp) {
            EPSILON0.lock().expect("poisoned").insert(tag, e);
            return Ok(e);
        }
        l *= 2.0;
    }
    Err(Error::InsufficientData(format!(
        "{} has no dihedral class of length <= 32",
        spec.name
    )))
}

/// Lower bound for the number of maximal classes of length at most `l`,
/// from the total counts at `l` and `l / 2`.
pub fn maximal_lower_bound(spec: &GroupSpec, l: f64) -> Result<f64> {
    let e0 = epsilon0(spec)?;
    let full = census(spec, l)?.len() as f64;
    let half = census(spec, l / 2.0)?.len() as f64;
    Ok(full - 3.0 * l / (2.0 * e0) * half)
}

/// Number of classes (or maximal classes) with `|tr| <= x`.
pub fn count_by_trace(spec: &GroupSpec, x: f64, primitive_only: bool) -> Result<u64> {
    let c = census_by_trace(spec, x, &OrbitOptions::default())?;
    Ok(if primitive_only {
        c.maximal_count()
    } else {
        c.len()
    } as u64)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConstantReport {
    #[serde(rename = "C", serialize_with = "crate::serde_rational")]
    pub c: BigRational,
    /// The same constant from the double sum over ordered pairs.
    #[serde(serialize_with = "crate::serde_rational")]
    pub c_double_sum: BigRational,
    /// `C / |chi|`, when the Euler characteristic is known.
    #[serde(serialize_with = "crate::serde_opt_rational")]
    pub slope: Option<BigRational>,
}

/// Both closed forms in floating point, as an independent check of the
/// exact values.
pub fn constant_forms(orders: &[u32]) -> (f64, f64) {
    let s: f64 = orders.iter().map(|&n| 1.0 / n as f64).sum();
    let mut d = 0.0;
    for &a in orders {
        for &b in orders {
            d += 1.0 / (b as f64 * (a + b) as f64);
        }
    }
    (0.25 * s * s, 0.5 * d)
}

pub fn constant_c(spec: &GroupSpec) -> Result<ConstantReport> {
    let orders: Vec<u32> = spec.involution_classes.iter().map(|c| c.normalizer_order).collect();
    if orders.is_empty() {
        return Err(Error::InvalidArgument(format!("{} has no involution classes", spec.name)));
    }
    let r = |n: u32| BigRational::new(BigInt::one(), BigInt::from(n));
    let s: BigRational = orders.iter().map(|&n| r(n)).sum();
    let c = &s * &s / BigInt::from(4);
    let mut d = BigRational::zero();
    for &a in &orders {
        for &b in &orders {
            d += r(b) * r(a + b);
        }
    }
    let d = d / BigInt::from(2);
    let (cf, df) = constant_forms(&orders);
    if (cf - df).abs() > 1e-12 || c != d {
        return Err(Error::ConstantMismatch(cf, df));
    }
    let slope = spec
        .euler_char
        .as_ref()
        .filter(|chi| !chi.is_zero())
        .map(|chi| &c / chi.abs());
    Ok(ConstantReport {
        c,
        c_double_sum: d,
        slope,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{build_gamma_k, psl2z, triangle237};
    use crate::hyp::{Point, TAU};
    use std::collections::HashMap;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn small_psl2z_censuses() {
        let g = psl2z();
        assert!(census(&g, 0.5).unwrap().is_empty());
        let c = census(&g, 1.0).unwrap();
        assert_eq!(c.len(), 1);
        let k = &c.classes[0];
        assert_eq!(k.trace, Scalar::from_i64(3, Mode::Exact));
        assert!((k.length - 1.5f64.acosh()).abs() < 1e-12);
        assert!(k.maximal);
        assert_eq!(k.fiber_count, 4);
        assert_eq!(c.raw_count, 4);
        assert!(census(&g, -1.0).is_err());
    }

    #[test]
    fn class_invariants_hold() {
        let g = psl2z();
        let c = census(&g, 6.0).unwrap();
        let i = Point::i(Mode::Exact);
        for k in &c.classes {
            let w = &k.witness;
            let s = &g.involution_classes[w.sigma].rep;
            let tau = w.gamma.compose(&g.involution_classes[w.sigma_bar].rep).unwrap().compose(&w.gamma.invert()).unwrap();
            let t = s.compose(&tau).unwrap();
            assert_eq!(t.trace().abs(), k.trace);
            let p = w.gamma.apply(&i).unwrap();
            let cosh = i.cosh_dist(&p).unwrap();
            assert_eq!(cosh * Scalar::from_i64(2, Mode::Exact), k.trace);
            let wd = k.word.as_ref().unwrap();
            assert!(is_reciprocal(wd));
            assert_eq!(is_maximal(k), k.maximal);
            let expect = match (k.maximal, k.index % 2) {
                (true, _) => 4,
                (false, 0) => 2,
                _ => 4,
            };
            assert_eq!(k.fiber_count, expect, "{}", k.key);
        }
        let total: u64 = c.classes.iter().map(|k| k.fiber_count).sum();
        assert_eq!(total, c.raw_count);
    }

    #[test]
    fn doubled_class_appears_twice() {
        let g = psl2z();
        let l0 = 1.5f64.acosh();
        let c = census(&g, 2.0 * l0 + 0.01).unwrap();
        let doubled: Vec<_> = c.classes.iter().filter(|k| k.word.as_deref() == Some("LRLR")).collect();
        assert_eq!(doubled.len(), 2);
        for k in doubled {
            assert!(!k.maximal);
            assert_eq!(k.index, 2);
            assert!((k.length - 3.5f64.acosh()).abs() < 1e-12);
        }
    }

    #[test]
    fn expansion_counts() {
        let cum = |l: f64| expand_length(1.0, l).iter().map(|e| e.1).sum::<u32>();
        assert_eq!(expand_length(1.0, 1.0), vec![(1.0, 1)]);
        assert_eq!(expand_length(1.0, 2.0), vec![(1.0, 1), (2.0, 2)]);
        assert_eq!(cum(4.0), 6);
        for k in 1..=8u32 {
            assert_eq!(cum(k as f64), 3 * k / 2);
        }
        let g = psl2z();
        let c = census(&g, 2.5).unwrap();
        let non = c.classes.iter().find(|k| !k.maximal).unwrap();
        assert!(matches!(expand_maximal(non, 3.0), Err(Error::NonMaximal(_))));
    }

    #[test]
    fn bounds_sandwich_the_census() {
        let g = psl2z();
        let b = census_bounds(&g, 1.0, &OrbitOptions::default()).unwrap();
        assert_eq!((b.lower.clone(), b.upper), (q(1, 1), 4));
        let small = census_bounds(&g, 0.5, &OrbitOptions::default()).unwrap();
        assert_eq!((small.lower, small.upper), (q(0, 1), 0));
        let mut prev = 0;
        for l in [2.0, 3.0, 4.0, 5.0] {
            let b = census_bounds(&g, l, &OrbitOptions::default()).unwrap();
            let n = census(&g, l).unwrap().len();
            assert!(b.lower <= q(n as i64, 1) && n as u64 <= b.upper);
            assert!(b.upper >= prev);
            prev = b.upper;
        }
    }

    #[test]
    fn trace_counts() {
        let g = psl2z();
        assert_eq!(count_by_trace(&g, 3.0, false).unwrap(), 1);
        assert_eq!(count_by_trace(&g, 3.0, true).unwrap(), 1);
        assert_eq!(count_by_trace(&g, 2.9, false).unwrap(), 0);
        assert!(count_by_trace(&g, 2.0, false).is_err());
    }

    #[test]
    fn epsilon0_and_maximal_bound() {
        let g = psl2z();
        let e = epsilon0(&g).unwrap();
        assert!((e - 1.5f64.acosh()).abs() < 1e-12);
        let c = census(&g, 6.0).unwrap();
        let lb = maximal_lower_bound(&g, 6.0).unwrap();
        assert!(lb <= c.maximal_count() as f64);
    }

    #[test]
    fn constants() {
        let r = constant_c(&psl2z()).unwrap();
        assert_eq!(r.c, q(1, 16));
        assert_eq!(r.slope, Some(q(3, 8)));
        let (a, b) = constant_forms(&[5]);
        assert!((a - 1.0 / 100.0).abs() < 1e-15 && (b - 1.0 / 100.0).abs() < 1e-15);
        let (a, b) = constant_forms(&[2, 3]);
        assert!((a - 25.0 / 144.0).abs() < 1e-15 && (b - 25.0 / 144.0).abs() < 1e-15);
        let t = constant_c(&triangle237()).unwrap();
        assert_eq!(t.c, q(1, 16));
        assert!(constant_c(&build_gamma_k(1)).unwrap().slope.is_none());
    }

    #[test]
    fn gamma_k_censuses() {
        assert!(census(&build_gamma_k(0), 8.0).unwrap().is_empty());
        let sub = census(&build_gamma_k(1), 5.0).unwrap();
        assert!(!sub.is_empty());
        let full: HashMap<String, u64> = census(&psl2z(), 5.0).unwrap().classes.into_iter().map(|c| (c.key, c.fiber_count)).collect();
        for k in &sub.classes {
            assert!(full.contains_key(&k.key), "{} missing from the full census", k.key);
        }
    }

    #[test]
    fn floating_census_of_psl2z_matches_exact() {
        let mut g = psl2z();
        g.mode = Mode::Floating;
        g.generators = g.generators.iter().map(|m| m.to_floating()).collect();
        for c in &mut g.involution_classes {
            c.rep = c.rep.to_floating();
            c.fixed_point = c.fixed_point.to_floating();
        }
        let exact = census(&psl2z(), 4.0).unwrap();
        let float = census_cosh(&g, &cosh_bound(4.0).unwrap(), &OrbitOptions::default()).unwrap();
        assert!(float.approximate);
        assert_eq!(float.len(), exact.len());
        let mut a: Vec<(i64, bool, u64)> = exact.classes.iter().map(|c| (c.trace.as_i64().unwrap(), c.maximal, c.fiber_count)).collect();
        let mut b: Vec<(i64, bool, u64)> = float.classes.iter().map(|c| (c.trace.to_f64().round() as i64, c.maximal, c.fiber_count)).collect();
        a.sort();
        b.sort();
        assert_eq!(a, b);
        for c in &float.classes {
            assert!((c.trace.to_f64() - 2.0 * c.length.cosh()).abs() < 1e3 * TAU * c.trace.to_f64());
        }
    }

    #[test]
    fn triangle_census_respects_fiber_bound() {
        let g = triangle237();
        let c = census(&g, 3.0).unwrap();
        assert!(!c.is_empty());
        assert!(c.approximate);
        for k in &c.classes {
            assert!(k.fiber_count <= 4, "{}: {}", k.key, k.fiber_count);
            if k.maximal {
                assert_eq!(k.fiber_count, 4, "{}", k.key);
            }
        }
    }
}

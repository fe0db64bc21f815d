//! Acceptance suite: nine end-to-end criteria, one PASS/FAIL line each.
//!
//! Run with `cargo test -p recip-core --test acceptance`.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use recip_core::census::{
    census, census_bounds, census_by_trace, constant_c, constant_forms, count_by_trace, expand_maximal, is_reciprocal,
};
use recip_core::equidist::{discrepancy, mu_l_histogram, segment_histogram, Grid, Orientation};
use recip_core::group::{psl2z, triangle237, GroupSpec, InvolutionClass};
use recip_core::hyp::{IntMat, Mode, Moebius, Point, Scalar};
use recip_core::lowlying::{delta_curve, lowlying_census};
use recip_core::orbit::{delsarte_ratio, OrbitOptions};

const TRACE_RATIO_BAND: (f64, f64) = (0.85, 1.15);
const ORACLE_TRACE: i64 = 50;
const CONJUGATOR_LENGTH: usize = 12;
const DELSARTE_BAND: (f64, f64) = (0.9, 1.1);
const CONSTANT_TOL: f64 = 1e-12;
const SYNTHETIC_SPECS: usize = 20;
const FIBER_MAX: u64 = 4;
const EXPANSION_L_MAX: f64 = 6.0;
const LOWLYING_FLOOR: f64 = 148.4;
const EQUIDIST_STEP: f64 = 0.02;
const EQUIDIST_CEILING: f64 = 0.25;
const IDENTITY_CHECKS: usize = 100_000;
const SEED: u64 = 0x5eed;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: String) -> Outcome {
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn c1_trace_constant() -> Outcome {
    let g = psl2z();
    let ratio = |x: f64| count_by_trace(&g, x, false).map(|n| n as f64 / (0.375 * x));
    let small = ratio(1e2).map_err(|e| e.to_string())?;
    let large = ratio(1e4).map_err(|e| e.to_string())?;
    ensure(
        (TRACE_RATIO_BAND.0..=TRACE_RATIO_BAND.1).contains(&large) && (large - 1.0).abs() < (small - 1.0).abs(),
        format!("ratio {large:.4} at X=1e4, {small:.4} at X=1e2"),
    )
}

// --- independent classification for criterion 2 ---------------------------

fn floor_div(a: i128, b: i128) -> i128 {
    a.div_euclid(b)
}

fn isqrt(n: i128) -> i128 {
    let mut r = (n as f64).sqrt() as i128;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// Primitive R/L word read off the periodic continued fraction of a fixed
/// point `(P + sqrt D) / Q` of a hyperbolic matrix.
fn periodic_word(g: [i64; 4]) -> String {
    let [a, _, c, d] = g.map(|v| v as i128);
    let disc = (a + d) * (a + d) - 4;
    let root = isqrt(disc);
    let (mut p, mut q) = (a - d, 2 * c);
    let mut seen: HashMap<(i128, i128), usize> = HashMap::new();
    let mut quotients = Vec::new();
    let start = loop {
        if let Some(&s) = seen.get(&(p, q)) {
            break s;
        }
        seen.insert((p, q), quotients.len());
        let k = if q > 0 { floor_div(p + root, q) } else { -floor_div(p + root, -q) - 1 };
        quotients.push(k);
        p = k * q - p;
        q = (disc - p * p) / q;
    };
    let period = &quotients[start..];
    let reps = if period.len() % 2 == 0 { 1 } else { 2 };
    let mut w = String::new();
    for r in 0..reps {
        for (i, &k) in period.iter().enumerate() {
            let letter = if (start + r * period.len() + i) % 2 == 0 { 'R' } else { 'L' };
            w.extend(std::iter::repeat(letter).take(k as usize));
        }
    }
    w
}

fn word_matrix(w: &str) -> IntMat {
    w.chars().fold(IntMat::ID, |m, c| m * if c == 'R' { IntMat::R } else { IntMat::L })
}

fn naive_unoriented(w: &str) -> String {
    let rev: String = w.chars().rev().map(|c| if c == 'R' { 'L' } else { 'R' }).collect();
    let mut best: Option<String> = None;
    for s in [w, rev.as_str()] {
        for k in 0..s.len() {
            let r = format!("{}{}", &s[k..], &s[..k]);
            if best.as_ref().is_none_or(|b| &r < b) {
                best = Some(r);
            }
        }
    }
    best.unwrap()
}

fn is_proper_power(w: &str) -> bool {
    let n = w.len();
    (1..n).any(|p| n % p == 0 && w[p..] == w[..n - p])
}

/// Conjugator search over words of length at most `CONJUGATOR_LENGTH` in
/// `S, T, T^-1`.
fn conjugator_ball() -> Vec<IntMat> {
    let gens = [IntMat::S, IntMat::T, IntMat::T.inv()];
    let mut seen = HashSet::from([IntMat::ID]);
    let mut layer = vec![IntMat::ID];
    for _ in 0..CONJUGATOR_LENGTH {
        let mut next = Vec::new();
        for h in &layer {
            for s in gens {
                let k = *h * s;
                if seen.insert(k) {
                    next.push(k);
                }
            }
        }
        layer = next;
    }
    let mut v: Vec<IntMat> = seen.into_iter().collect();
    v.sort_by_key(|m| m.norm2());
    v
}

fn c2_small_trace_oracle() -> Outcome {
    let x = ORACLE_TRACE;
    let ball = conjugator_ball();
    // Involutions [[a, b], [c, -a]], c > 0, of bounded entries; every one
    // is conjugate to S, so S times these covers every class.
    let mut words: BTreeMap<String, i64> = BTreeMap::new();
    for a in -x..=x {
        for c in 1..=x {
            if (1 + a * a) % c != 0 {
                continue;
            }
            let b = -(1 + a * a) / c;
            if b.abs() > x {
                continue;
            }
            let tau = IntMat::new(a, b, c, -a).expect("det 1");
            let g = IntMat::S * tau;
            let tr = g.trace().abs();
            if tr <= 2 || tr > x {
                continue;
            }
            let root = periodic_word([g.a, g.b, g.c, g.d]);
            let mut m = 1;
            while word_matrix(&root.repeat(m)).trace() < tr {
                m += 1;
            }
            assert_eq!(word_matrix(&root.repeat(m)).trace(), tr, "trace of {root}^{m}");
            let key = naive_unoriented(&root.repeat(m));
            if words.contains_key(&key) {
                continue;
            }
            let inv = g.inv();
            assert!(ball.iter().any(|h| *h * g * h.inv() == inv), "no conjugator for {g}");
            assert!(!is_proper_power(&root), "root {root} is a power");
            words.insert(key, tr);
        }
    }
    let mut oracle: Vec<(String, i64, bool)> = Vec::new();
    for (w, tr) in &words {
        let n = w.len();
        let p = (1..=n).find(|&p| n % p == 0 && w[p..] == w[..n - p]).unwrap();
        let m = n / p;
        for _ in 0..if m % 2 == 0 { 2 } else { 1 } {
            oracle.push((w.clone(), *tr, m == 1));
        }
    }
    oracle.sort();

    let c = census_by_trace(&psl2z(), x as f64, &OrbitOptions::default()).map_err(|e| e.to_string())?;
    let mut got: Vec<(String, i64, bool)> = c
        .classes
        .iter()
        .map(|k| (k.word.clone().unwrap(), k.trace.as_i64().unwrap(), k.maximal))
        .collect();
    got.sort();
    let reciprocal = c.classes.iter().all(|k| is_reciprocal(k.word.as_deref().unwrap()));
    let keys: HashSet<&str> = c.classes.iter().map(|k| k.key.as_str()).collect();
    ensure(
        got == oracle && reciprocal && keys.len() == c.len(),
        format!("{} census classes, {} oracle classes, trace <= {x}", got.len(), oracle.len()),
    )
}

fn c3_delsarte() -> Outcome {
    let g = psl2z();
    let i = Point::i(Mode::Exact);
    let mut dev = Vec::new();
    let mut last = 0.0;
    for r in [8.0, 10.0, 12.0] {
        let d = delsarte_ratio(&g, &i, &i, r, &OrbitOptions::default()).map_err(|e| e.to_string())?;
        dev.push((d.ratio - 1.0).abs());
        last = d.ratio;
    }
    ensure(
        (DELSARTE_BAND.0..=DELSARTE_BAND.1).contains(&last) && dev.windows(2).all(|w| w[1] < w[0]),
        format!("ratio {last:.5} at R=12, deviations {dev:.4?}"),
    )
}

fn synthetic_spec(orders: &[u32]) -> GroupSpec {
    let s = Moebius::s(Mode::Exact);
    GroupSpec {
        name: "synthetic".into(),
        mode: Mode::Exact,
        generators: vec![s.clone()],
        involution_classes: orders.iter().map(|&n| InvolutionClass::new(s.clone(), n).unwrap()).collect(),
        euler_char: None,
        covolume: None,
    }
}

fn c4_constants() -> Outcome {
    let p = constant_c(&psl2z()).map_err(|e| e.to_string())?;
    let exact = p.c == BigRational::new(1.into(), 16.into()) && p.slope == Some(BigRational::new(3.into(), 8.into()));
    let mut worst: f64 = 0.0;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut specs = vec![psl2z(), triangle237()];
    for _ in 0..SYNTHETIC_SPECS {
        let n = rng.gen_range(1..=6);
        let orders: Vec<u32> = (0..n).map(|_| rng.gen_range(2..=12)).collect();
        specs.push(synthetic_spec(&orders));
    }
    for s in &specs {
        let r = constant_c(s).map_err(|e| e.to_string())?;
        let orders: Vec<u32> = s.involution_classes.iter().map(|c| c.normalizer_order).collect();
        let (a, b) = constant_forms(&orders);
        worst = worst.max((a - b).abs());
        if r.c != r.c_double_sum {
            return Err(format!("exact forms differ for {orders:?}"));
        }
    }
    ensure(
        exact && worst <= CONSTANT_TOL,
        format!("C(psl2z) = 1/16, slope 3/8; worst gap {worst:.1e} over {} specs", specs.len()),
    )
}

fn c5_fibers_and_sandwich() -> Outcome {
    let g = psl2z();
    let opts = OrbitOptions::default();
    let mut checked = 0;
    for k in 1..=16 {
        let l = 0.5 * k as f64;
        let c = census(&g, l).map_err(|e| e.to_string())?;
        let b = census_bounds(&g, l, &opts).map_err(|e| e.to_string())?;
        let n = c.len() as u64;
        if b.lower > BigRational::from_integer(n.into()) || n > b.upper {
            return Err(format!("sandwich fails at L={l}: {} <= {n} <= {}", b.lower, b.upper));
        }
        for cls in &c.classes {
            if cls.fiber_count > FIBER_MAX || (cls.maximal && cls.fiber_count != FIBER_MAX) {
                return Err(format!("fiber {} for {} at L={l}", cls.fiber_count, cls.key));
            }
        }
        checked += c.len();
    }
    Ok(format!("16 radii up to L=8, {checked} class checks"))
}

fn c6_expansion() -> Outcome {
    let g = psl2z();
    for k in 2..=12 {
        let l = 0.5 * k as f64;
        let c = census(&g, l).map_err(|e| e.to_string())?;
        let mut direct: Vec<(String, u32, i64)> = c
            .classes
            .iter()
            .map(|k| {
                let w = k.word.clone().unwrap();
                let root = w[..w.len() / k.index as usize].to_string();
                (root, k.index, k.trace.as_i64().unwrap())
            })
            .collect();
        let mut expanded = Vec::new();
        for m in c.classes.iter().filter(|k| k.maximal) {
            let root = m.word.clone().unwrap();
            for (idx, (len, mult)) in expand_maximal(m, l).map_err(|e| e.to_string())?.into_iter().enumerate() {
                let tr = (2.0 * len.cosh()).round() as i64;
                for _ in 0..mult {
                    expanded.push((root.clone(), idx as u32 + 1, tr));
                }
            }
        }
        direct.sort();
        expanded.sort();
        if direct != expanded {
            return Err(format!("direct census and expansion differ at L={l}"));
        }
    }
    let one = census(&g, 1.0).map_err(|e| e.to_string())?.classes[0].clone();
    for k in 1..=8u32 {
        let total: u32 = expand_maximal(&one, k as f64 * one.length + 1e-9).unwrap().iter().map(|e| e.1).sum();
        if total != 3 * k / 2 {
            return Err(format!("index <= {k}: {total} classes"));
        }
    }
    Ok(format!("L <= {EXPANSION_L_MAX}; floor(3k/2) for k <= 8"))
}

fn c7_lowlying() -> Outcome {
    let opts = OrbitOptions::default();
    let r = lowlying_census(3, 10.0, &opts).map_err(|e| e.to_string())?;
    let d = delta_curve(&[1, 3], 10.0, &opts).map_err(|e| e.to_string())?;
    let (d1, d3) = (d[0].1, d[1].1);
    ensure(
        r.class_count as f64 > LOWLYING_FLOOR && r.height_bound.is_finite() && d1 < d3 && d3 < 1.0,
        format!(
            "{} classes, height <= {:.3}, delta_hat(1) = {d1:.3}, delta_hat(3) = {d3:.3}",
            r.class_count, r.height_bound
        ),
    )
}

fn c8_equidistribution() -> Outcome {
    let grid = Grid::default();
    let i = Point::i(Mode::Exact);
    let mut mu = Vec::new();
    let mut seg = Vec::new();
    for l in [5.0, 7.0, 9.0] {
        let h = mu_l_histogram(l, grid, EQUIDIST_STEP, Orientation::Forward).map_err(|e| e.to_string())?;
        mu.push(discrepancy(&h).map_err(|e| e.to_string())?);
        let s = segment_histogram(&i, &i, l, grid, EQUIDIST_STEP).map_err(|e| e.to_string())?;
        seg.push(discrepancy(&s).map_err(|e| e.to_string())?);
    }
    let falls = |v: &[f64]| v.windows(2).all(|w| w[1] < w[0]);
    ensure(
        falls(&mu) && falls(&seg) && mu[2] < EQUIDIST_CEILING,
        format!("mu_L {mu:.4?}, segments {seg:.4?}"),
    )
}

fn random_element(rng: &mut ChaCha8Rng) -> Moebius {
    let mut g = Moebius::identity(Mode::Exact);
    for _ in 0..rng.gen_range(1..=4) {
        let h = match rng.gen_range(0..3) {
            0 => Moebius::from_i64(1, rng.gen_range(-4..=4), 0, 1).unwrap(),
            1 => Moebius::s(Mode::Exact),
            _ => {
                let (n, d) = (rng.gen_range(1..=3i64), rng.gen_range(1..=3i64));
                Moebius::new(Scalar::ratio(n, d), Scalar::ratio(0, 1), Scalar::ratio(0, 1), Scalar::ratio(d, n)).unwrap()
            }
        };
        g = g.compose(&h).unwrap();
    }
    g
}

fn c9_exactness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let s = Moebius::s(Mode::Exact);
    let two = Scalar::from_i64(2, Mode::Exact);
    for n in 0..IDENTITY_CHECKS {
        let ok = match n % 3 {
            0 => {
                let g = random_element(&mut rng);
                let p = Point::exact(rng.gen_range(-9..=9), rng.gen_range(1..=5), rng.gen_range(1..=9), rng.gen_range(1..=5));
                let q = Point::exact(rng.gen_range(-9..=9), rng.gen_range(1..=5), rng.gen_range(1..=9), rng.gen_range(1..=5));
                p.cosh_dist(&q).unwrap() == g.apply(&p).unwrap().cosh_dist(&g.apply(&q).unwrap()).unwrap()
            }
            1 => {
                let (g, h) = (random_element(&mut rng), random_element(&mut rng));
                let sigma = g.compose(&s).unwrap().compose(&g.invert()).unwrap();
                let tau = h.compose(&s).unwrap().compose(&h.invert()).unwrap();
                let d = sigma.involution_fixed_point().unwrap().cosh_dist(&tau.involution_fixed_point().unwrap()).unwrap();
                sigma.compose(&tau).unwrap().trace().abs() == d * two.clone()
            }
            _ => {
                let (g, h) = (random_element(&mut rng), random_element(&mut rng));
                let sigma = h.compose(&s).unwrap().compose(&h.invert()).unwrap();
                let conj = g.compose(&sigma).unwrap().compose(&g.invert()).unwrap();
                conj.involution_fixed_point().unwrap() == g.apply(&sigma.involution_fixed_point().unwrap()).unwrap()
            }
        };
        if !ok {
            return Err(format!("identity {n} failed"));
        }
    }
    Ok(format!("{IDENTITY_CHECKS} exact identities"))
}

/// Written to the raw stderr handle so the lines survive output capture.
fn report(line: &str) {
    let _ = writeln!(std::io::stderr(), "{line}");
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("1 trace counting constant", c1_trace_constant),
        ("2 small-trace oracle", c2_small_trace_oracle),
        ("3 Delsarte ratio", c3_delsarte),
        ("4 constant identities", c4_constants),
        ("5 fiber and sandwich laws", c5_fibers_and_sandwich),
        ("6 expansion identity", c6_expansion),
        ("7 low-lying growth", c7_lowlying),
        ("8 equidistribution trend", c8_equidistribution),
        ("9 exactness regression", c9_exactness),
    ];
    let mut failed = Vec::new();
    for (name, run) in criteria {
        let t = std::time::Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(msg) => report(&format!("PASS  criterion {name}: {msg} ({secs:.1} s)")),
            Err(msg) => {
                report(&format!("FAIL  criterion {name}: {msg} ({secs:.1} s)"));
                failed.push(name);
            }
        }
    }
    assert!(failed.is_empty(), "failed: {failed:?}");
}

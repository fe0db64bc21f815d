//! Fuchsian groups with 2-torsion described as data.
//!
//! A [`GroupSpec`] carries a marked generating set, a declared set of
//! involution conjugacy-class representatives with their normalizer orders,
//! and the orbifold Euler characteristic. The representatives are taken as
//! given; completeness of the declared set is not checked.

use std::f64::consts::PI;
use std::path::Path;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::hyp::{
    dist_f64, format_rational, parse_rational, IntMat, Mode, Moebius, Point, Scalar, TAU,
};
use crate::tol::{ElementSet, POINT_EPS};

/// Word-length bound used when checking that declared involution classes
/// are pairwise non-conjugate.
pub const CONJUGACY_CHECK_BOUND: usize = 3;

#[derive(Clone, Debug, PartialEq)]
pub struct InvolutionClass {
    pub rep: Moebius,
    pub fixed_point: Point,
    pub normalizer_order: u32,
}

impl InvolutionClass {
    pub fn new(rep: Moebius, normalizer_order: u32) -> Result<Self> {
        let fixed_point = rep.involution_fixed_point()?;
        if normalizer_order == 0 {
            return Err(Error::group("normalizer_order", "must be a positive integer"));
        }
        Ok(InvolutionClass {
            rep,
            fixed_point,
            normalizer_order,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GroupSpec {
    pub name: String,
    pub mode: Mode,
    pub generators: Vec<Moebius>,
    pub involution_classes: Vec<InvolutionClass>,
    /// Orbifold Euler characteristic; `None` for infinite-covolume groups.
    pub euler_char: Option<BigRational>,
    pub covolume: Option<f64>,
}

impl GroupSpec {
    /// Generators together with their inverses, without repeats, in a
    /// fixed order.
    pub fn symmetric_generators(&self) -> Vec<Moebius> {
        let mut out: Vec<Moebius> = Vec::new();
        for g in &self.generators {
            for h in [g.clone(), g.invert()] {
                if !out.iter().any(|o| o.approx_eq(&h)) {
                    out.push(h);
                }
            }
        }
        out
    }

    /// Declared covolume, else `2 pi |chi|`.
    pub fn area(&self) -> Option<f64> {
        self.covolume.or_else(|| {
            self.euler_char
                .as_ref()
                .map(|chi| 2.0 * PI * crate::hyp::ratio_to_f64(&chi.abs()))
        })
    }

    /// Generators as machine-integer matrices, when every generator is an
    /// exact integral matrix.
    pub fn integral_generators(&self) -> Option<Vec<IntMat>> {
        if self.mode != Mode::Exact {
            return None;
        }
        self.generators.iter().map(IntMat::from_moebius).collect()
    }

    /// True when the generators include `S` and `T^{+-1}` and are all
    /// integral, so the group is exactly PSL(2, Z).
    pub fn is_modular(&self) -> bool {
        match self.integral_generators() {
            Some(gens) => {
                gens.contains(&IntMat::S)
                    && (gens.contains(&IntMat::T) || gens.contains(&IntMat::T.inv()))
            }
            None => false,
        }
    }

    /// Recognizes the free product `<eta^j S eta^-j : |j| <= k>` with
    /// `eta(z) = z + 2`, returning `k`.
    pub fn gamma_k_index(&self) -> Option<u32> {
        let gens = self.integral_generators()?;
        if gens.len() % 2 == 0 {
            return None;
        }
        let k = (gens.len() / 2) as u32;
        let mut want = gamma_k_generators(k);
        let mut have = gens;
        want.sort();
        have.sort();
        (want == have).then_some(k)
    }

    pub fn to_json(&self) -> Value {
        let entry = |s: &Scalar| match s {
            Scalar::Exact(q) => Value::String(format_rational(q)),
            Scalar::Real(x) => serde_json::json!(x),
        };
        let mat = |m: &Moebius| Value::Array(m.entries().into_iter().map(entry).collect());
        let file = GroupFile {
            name: self.name.clone(),
            mode: self.mode,
            generators: self.generators.iter().map(mat).collect(),
            involutions: self
                .involution_classes
                .iter()
                .map(|c| InvolutionFile {
                    rep: mat(&c.rep),
                    normalizer_order: c.normalizer_order,
                })
                .collect(),
            euler_char: self.euler_char.as_ref().map(format_rational),
            covolume: self.covolume,
        };
        serde_json::to_value(file).expect("group spec serializes")
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(&self.to_json()).expect("json");
        std::fs::write(path, text + "\n")?;
        Ok(())
    }

    /// Checks every invariant a loaded spec must satisfy.
    pub fn validate(&self) -> Result<()> {
        if self.generators.is_empty() {
            return Err(Error::group("generators", "at least one generator is required"));
        }
        for g in &self.generators {
            if g.mode() != self.mode {
                return Err(Error::group("generators", format!("{g} is not in {} mode", self.mode)));
            }
        }
        if self.involution_classes.is_empty() {
            return Err(Error::group(
                "involutions",
                "at least one involution class is required",
            ));
        }
        for c in &self.involution_classes {
            if c.rep.mode() != self.mode {
                return Err(Error::group("involutions", format!("{} is not in {} mode", c.rep, self.mode)));
            }
            if !c.rep.is_involution() {
                return Err(Error::NotInvolution(c.rep.to_string()));
            }
        }
        if let Some(chi) = &self.euler_char {
            if !chi.is_negative() {
                return Err(Error::group(
                    "euler_char",
                    "orbifold Euler characteristic must be negative",
                ));
            }
            if let Some(area) = self.covolume {
                let expected = 2.0 * PI * crate::hyp::ratio_to_f64(&chi.abs());
                if (area - expected).abs() > TAU {
                    return Err(Error::group(
                        "covolume",
                        format!("{area} disagrees with 2 pi |euler_char| = {expected}"),
                    ));
                }
            }
        }
        self.check_classes_distinct(CONJUGACY_CHECK_BOUND)
    }

    fn check_classes_distinct(&self, bound: usize) -> Result<()> {
        let n = self.involution_classes.len();
        if n < 2 {
            return Ok(());
        }
        for g in word_ball(self, bound) {
            let gi = g.invert();
            for i in 0..n {
                let conj = g
                    .mul_unchecked(&self.involution_classes[i].rep)
                    .mul_unchecked(&gi);
                for j in (i + 1)..n {
                    if conj.approx_eq(&self.involution_classes[j].rep) {
                        return Err(Error::group(
                            "involutions",
                            format!("classes {i} and {j} are conjugate by {g}"),
                        ));
                    }
                }
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct InvolutionFile {
    rep: Value,
    normalizer_order: u32,
}

#[derive(Serialize, Deserialize)]
struct GroupFile {
    name: String,
    mode: Mode,
    generators: Vec<Value>,
    involutions: Vec<InvolutionFile>,
    #[serde(skip_serializing_if = "Option::is_none")]
    euler_char: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    covolume: Option<f64>,
}

fn parse_entry(v: &Value, mode: Mode, field: &str) -> Result<Scalar> {
    match (mode, v) {
        (Mode::Exact, Value::String(s)) => Ok(Scalar::Exact(parse_rational(s)?)),
        (Mode::Exact, Value::Number(n)) if n.is_i64() => Ok(Scalar::Exact(BigRational::from_integer(
            BigInt::from(n.as_i64().unwrap()),
        ))),
        (Mode::Floating, Value::Number(n)) => Ok(Scalar::Real(n.as_f64().unwrap())),
        (Mode::Floating, Value::String(s)) => {
            Ok(Scalar::Real(crate::hyp::ratio_to_f64(&parse_rational(s)?)))
        }
        _ => Err(Error::group(field, format!("bad matrix entry {v} for {mode} mode"))),
    }
}

fn parse_matrix(v: &Value, mode: Mode, field: &str) -> Result<Moebius> {
    let arr = v
        .as_array()
        .filter(|a| a.len() == 4)
        .ok_or_else(|| Error::group(field, format!("expected [a, b, c, d], got {v}")))?;
    let e: Vec<Scalar> = arr
        .iter()
        .map(|x| parse_entry(x, mode, field))
        .collect::<Result<_>>()?;
    let [a, b, c, d]: [Scalar; 4] = e.try_into().expect("four entries");
    Moebius::new(a, b, c, d).map_err(|e| Error::group(field, e.to_string()))
}

/// Parse and validate a JSON group description.
pub fn parse_group(text: &str) -> Result<GroupSpec> {
    let file: GroupFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let generators = file
        .generators
        .iter()
        .map(|g| parse_matrix(g, file.mode, "generators"))
        .collect::<Result<Vec<_>>>()?;
    let mut involution_classes = Vec::new();
    for inv in &file.involutions {
        let rep = parse_matrix(&inv.rep, file.mode, "involutions")?;
        involution_classes.push(InvolutionClass::new(rep, inv.normalizer_order)?);
    }
    let euler_char = match &file.euler_char {
        Some(s) => Some(parse_rational(s).map_err(|e| Error::group("euler_char", e.to_string()))?),
        None => return Err(Error::group("euler_char", "missing")),
    };
    let spec = GroupSpec {
        name: file.name,
        mode: file.mode,
        generators,
        involution_classes,
        euler_char,
        covolume: file.covolume,
    };
    spec.validate()?;
    Ok(spec)
}

pub fn load_group(path: &Path) -> Result<GroupSpec> {
    parse_group(&std::fs::read_to_string(path)?)
}

/// `psl2z` (exact) or `triangle237` (floating).
pub fn builtin_group(name: &str) -> Result<GroupSpec> {
    match name {
        "psl2z" => Ok(psl2z()),
        "triangle237" => Ok(triangle237()),
        _ => Err(Error::UnknownGroup(name.to_string())),
    }
}

pub fn psl2z() -> GroupSpec {
    let s = Moebius::s(Mode::Exact);
    GroupSpec {
        name: "psl2z".into(),
        mode: Mode::Exact,
        generators: vec![Moebius::t(Mode::Exact), s.clone()],
        involution_classes: vec![InvolutionClass::new(s, 2).expect("S is an involution")],
        euler_char: Some(BigRational::new((-1).into(), 6.into())),
        covolume: None,
    }
}

/// The (2,3,7) triangle group generated by an involution `x = S` and an
/// order-3 rotation `y` with `xy` of order 7.
pub fn triangle237() -> GroupSpec {
    let lambda = 2.0 * (PI / 7.0).cos();
    let c = (-lambda + (lambda * lambda - 3.0).sqrt()) / 2.0;
    let b = lambda + c;
    let x = Moebius::s(Mode::Floating);
    let y = Moebius::from_f64(0.5, b, c, 0.5).expect("unit determinant");
    GroupSpec {
        name: "triangle237".into(),
        mode: Mode::Floating,
        generators: vec![x.clone(), y],
        involution_classes: vec![InvolutionClass::new(x, 2).expect("x is an involution")],
        euler_char: Some(BigRational::new((-1).into(), 42.into())),
        covolume: None,
    }
}

/// `eta^j S eta^-j` for `j = -k..=k`, with `eta = [[1, 2], [0, 1]]`.
pub fn gamma_k_generators(k: u32) -> Vec<IntMat> {
    let k = k as i64;
    (-k..=k)
        .map(|j| IntMat::new(2 * j, -(4 * j * j + 1), 1, -2 * j).expect("unit determinant"))
        .collect()
}

/// The free product of the `2k + 1` half-turns `eta^j S eta^-j`. It has
/// infinite covolume, so it carries no Euler characteristic.
pub fn build_gamma_k(k: u32) -> GroupSpec {
    let gens: Vec<Moebius> = gamma_k_generators(k)
        .into_iter()
        .map(IntMat::to_moebius)
        .collect();
    GroupSpec {
        name: format!("gamma_k{k}"),
        mode: Mode::Exact,
        involution_classes: gens
            .iter()
            .map(|g| InvolutionClass::new(g.clone(), 2).expect("half-turn"))
            .collect(),
        generators: gens,
        euler_char: None,
        covolume: None,
    }
}

/// Elements of word length at most `bound` in the symmetric generators.
pub fn word_ball(spec: &GroupSpec, bound: usize) -> Vec<Moebius> {
    let gens = spec.symmetric_generators();
    let mut seen = ElementSet::new(spec.mode == Mode::Exact);
    let id = Moebius::identity(spec.mode);
    seen.insert(&id);
    let mut all = vec![id.clone()];
    let mut layer = vec![id];
    for _ in 0..bound {
        let mut next = Vec::new();
        for g in &layer {
            for s in &gens {
                let h = g.mul_unchecked(s);
                if seen.insert(&h) {
                    next.push(h);
                }
            }
        }
        all.extend(next.iter().cloned());
        layer = next;
    }
    all
}

/// Number of distinct elements of word length at most `word_bound` fixing
/// the fixed point of class `class`.
pub fn verify_normalizer_order(spec: &GroupSpec, class: usize, word_bound: usize) -> Result<usize> {
    let cls = spec
        .involution_classes
        .get(class)
        .ok_or_else(|| Error::InvalidArgument(format!("no involution class {class}")))?;
    let p = &cls.fixed_point;
    let pf = p.to_f64();
    let mut n = 0;
    for g in word_ball(spec, word_bound) {
        let gp = g.apply(p)?;
        let fixes = match spec.mode {
            Mode::Exact => &gp == p,
            Mode::Floating => dist_f64(gp.to_f64(), pf) <= POINT_EPS,
        };
        n += fixes as usize;
    }
    Ok(n)
}

//! Dihedral classes of the free products `Gamma_k`, whose reciprocal
//! geodesics stay in a bounded part of the modular surface.

use serde::Serialize;

use crate::census::census_cosh;
use crate::equidist::segment_height;
use crate::error::{Error, Result};
use crate::hyp::{direction_angle, Mode, Point};
use crate::orbit::{cosh_bound, count_curve, critical_exponent_estimate, OrbitOptions};

pub use crate::group::build_gamma_k;

/// Arc-length spacing of the axis samples behind the height bound.
pub const HEIGHT_STEP: f64 = 0.05;
/// Spacing of the radii in growth-rate fits.
pub const CURVE_STEP: f64 = 0.5;
/// Default fitting window width below the largest radius.
pub const WINDOW: f64 = 4.0;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LowLyingReport {
    pub k: u32,
    #[serde(rename = "L")]
    pub l: f64,
    pub class_count: u64,
    /// Largest imaginary part over reduced axis samples of every class.
    pub height_bound: f64,
    /// `None` when the window holds too few nonzero counts.
    pub delta_hat: Option<f64>,
}

fn radii(window: (f64, f64)) -> Vec<f64> {
    let n = ((window.1 - window.0) / CURVE_STEP).round() as usize;
    (0..=n).map(|s| window.0 + CURVE_STEP * s as f64).collect()
}

fn default_window(l_max: f64) -> (f64, f64) {
    ((l_max - WINDOW).max(CURVE_STEP), l_max)
}

/// Growth rate of `|Gamma_k i ∩ B*(i, R)|` over the window.
pub fn delta_hat(k: u32, window: (f64, f64), opts: &OrbitOptions) -> Result<f64> {
    if !(window.0 > 0.0 && window.1 > window.0) {
        return Err(Error::InvalidArgument(format!("bad window [{}, {}]", window.0, window.1)));
    }
    let g = build_gamma_k(k);
    let i = Point::i(Mode::Exact);
    let curve = count_curve(&g, &i, &i, &radii(window), opts)?;
    critical_exponent_estimate(&curve, window)
}

pub fn lowlying_census(k: u32, l: f64, opts: &OrbitOptions) -> Result<LowLyingReport> {
    lowlying_census_with_window(k, l, WINDOW, opts)
}

/// As [`lowlying_census`], fitting `delta_hat` over `[l - width, l]`.
pub fn lowlying_census_with_window(k: u32, l: f64, width: f64, opts: &OrbitOptions) -> Result<LowLyingReport> {
    if !(width > 0.0) {
        return Err(Error::InvalidArgument(format!("window width {width} must be positive")));
    }
    if k < 1 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    if !(l > 0.0) {
        return Err(Error::InvalidArgument(format!("length {l} must be positive")));
    }
    let g = build_gamma_k(k);
    let c = census_cosh(&g, &cosh_bound(l)?, opts)?;
    let mut height: f64 = 0.0;
    for cls in &c.classes {
        let w = &cls.witness;
        let p = &g.involution_classes[w.sigma].fixed_point;
        let q = w.gamma.apply(&g.involution_classes[w.sigma_bar].fixed_point)?;
        let (pf, qf) = (p.to_f64(), q.to_f64());
        height = height.max(segment_height(pf, direction_angle(pf, qf), 2.0 * cls.length, HEIGHT_STEP));
    }
    let delta = match delta_hat(k, ((l - width).max(CURVE_STEP), l), opts) {
        Ok(d) => Some(d),
        Err(_) if l <= CURVE_STEP => None,
        Err(Error::InsufficientData(_)) => None,
        Err(e) => return Err(e),
    };
    Ok(LowLyingReport {
        k,
        l,
        class_count: c.len() as u64,
        height_bound: height,
        delta_hat: delta,
    })
}

/// `delta_hat` for each `k`, fitted over `[l_max - 4, l_max]`.
pub fn delta_curve(ks: &[u32], l_max: f64, opts: &OrbitOptions) -> Result<Vec<(u32, f64)>> {
    ks.iter()
        .map(|&k| {
            if k < 1 {
                return Err(Error::InvalidArgument("k must be at least 1".into()));
            }
            Ok((k, delta_hat(k, default_window(l_max), opts)?))
        })
        .collect()
}

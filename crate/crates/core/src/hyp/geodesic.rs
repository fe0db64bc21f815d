//! Unit-speed geodesics, tangent directions and ball volumes (floating point).

use std::f64::consts::{FRAC_PI_2, PI, TAU as TWO_PI};

use num_complex::Complex64;

use crate::error::{Error, Result};

use super::point::{dist_f64, Point};

/// Hyperbolic area of a ball of radius `r`.
pub fn ball_volume(r: f64) -> f64 {
    2.0 * PI * (r.cosh() - 1.0)
}

pub(crate) fn wrap_angle(a: f64) -> f64 {
    let w = a.rem_euclid(TWO_PI);
    if w >= TWO_PI {
        0.0
    } else {
        w
    }
}

/// Angle in `[0, 2pi)`, measured from the positive real direction, of the
/// unit tangent vector at `p` pointing along the geodesic toward `q`.
pub fn direction_angle(p: (f64, f64), q: (f64, f64)) -> f64 {
    // z -> (z - x_p) / y_p sends p to i with positive real derivative.
    let w = Complex64::new((q.0 - p.0) / p.1, q.1 / p.1);
    let i = Complex64::i();
    wrap_angle(((w - i) / (w + i)).arg() + FRAC_PI_2)
}

/// The point at arc length `s` from `p` in direction `theta`, with the
/// tangent angle there.
pub fn geodesic_point(p: (f64, f64), theta: f64, s: f64) -> ((f64, f64), f64) {
    // g = h K(theta - pi/2) maps the upward geodesic through i onto the
    // requested one, where h(i) = p and K rotates the tangent plane at i.
    let (sy, half) = (p.1.sqrt(), (theta - FRAC_PI_2) / 2.0);
    let (sn, cs) = half.sin_cos();
    let (a, b, c, d) = (
        sy * cs - p.0 / sy * sn,
        sy * sn + p.0 / sy * cs,
        -sn / sy,
        cs / sy,
    );
    let w = Complex64::new(0.0, s.exp());
    let den = c * w + d;
    let z = (a * w + b) / den;
    let angle = wrap_angle(FRAC_PI_2 - 2.0 * den.arg());
    ((z.re, z.im.max(f64::MIN_POSITIVE)), angle)
}

/// Point at arc-length fraction `t` along the segment from `p` to `q`, with
/// the tangent angle there.
pub fn geodesic_sample(p: &Point, q: &Point, t: f64) -> Result<(Point, f64)> {
    let (pf, qf) = (p.to_f64(), q.to_f64());
    let d = dist_f64(pf, qf);
    if d == 0.0 {
        return Err(Error::InvalidArgument(
            "geodesic endpoints coincide".to_string(),
        ));
    }
    let theta = direction_angle(pf, qf);
    let ((x, y), angle) = geodesic_point(pf, theta, t * d);
    Ok((Point::real(x, y), angle))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyp::Mode;

    #[test]
    fn ball_volume_examples() {
        assert_eq!(ball_volume(0.0), 0.0);
        assert!((ball_volume(1.0) - 3.412_276).abs() < 1e-6);
        let r = 20.0;
        assert!((ball_volume(r) / (PI * r.exp()) - 1.0).abs() < 1e-8);
    }

    #[test]
    fn vertical_midpoint() {
        let (m, a) = geodesic_sample(&Point::real(0.0, 1.0), &Point::real(0.0, 4.0), 0.5).unwrap();
        let (x, y) = m.to_f64();
        assert!(x.abs() < 1e-12 && (y - 2.0).abs() < 1e-12);
        assert!((a - FRAC_PI_2).abs() < 1e-12);
    }

    #[test]
    fn endpoints_and_midpoint() {
        let p = Point::i(Mode::Exact);
        let q = Point::exact(1, 1, 1, 1);
        let (s0, _) = geodesic_sample(&p, &q, 0.0).unwrap();
        assert!(s0.approx_eq(&p.to_floating()));
        let (s1, _) = geodesic_sample(&p, &q, 1.0).unwrap();
        let (x1, y1) = s1.to_f64();
        assert!((x1 - 1.0).abs() < 1e-12 && (y1 - 1.0).abs() < 1e-12);
        let (m, _) = geodesic_sample(&p, &q, 0.5).unwrap();
        let mf = m.to_f64();
        assert!((dist_f64(mf, (0.0, 1.0)) - dist_f64(mf, (1.0, 1.0))).abs() < 1e-12);
        assert!(((mf.0 - 0.5).hypot(mf.1) - 1.25f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn coincident_endpoints_rejected() {
        let p = Point::real(0.3, 2.0);
        assert!(geodesic_sample(&p, &p, 0.5).is_err());
    }

    #[test]
    fn tangent_is_consistent_with_motion() {
        let p = (0.7, 0.4);
        let theta = 2.1;
        let (z0, a0) = geodesic_point(p, theta, 1.3);
        let (z1, _) = geodesic_point(p, theta, 1.3 + 1e-6);
        let moved = (z1.1 - z0.1).atan2(z1.0 - z0.0);
        assert!((wrap_angle(moved) - a0).abs() < 1e-5);
        let (_, a_start) = geodesic_point(p, theta, 0.0);
        assert!((a_start - theta).abs() < 1e-12);
    }
}

//! Direct enumeration of `PSL(2, Z) i` inside a ball about `i`.
//!
//! Points of the orbit are the cosets `M {1, S}`. Right multiplication by
//! `S` rotates the bottom row `(c, d) -> (d, -c)`, so each coset has exactly
//! one representative with `c > 0, d >= 0`. For a fixed bottom row the
//! tops are `(a0 + tc, b0 + td)`, which translates the point by `t`.

use rayon::prelude::*;

use crate::error::Result;
use crate::hyp::IntMat;

use super::Meter;

/// `(g, x, y)` with `g x + y = gcd`, for non-negative inputs.
fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a % b);
        (g, y, x - (a / b) * y)
    }
}

fn isqrt(n: i128) -> i128 {
    if n < 0 {
        return -1;
    }
    let mut r = (n as f64).sqrt() as i128;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// Visits one representative `M` of each coset `M {1, S}` with
/// `|M|_F^2 <= n_max`, together with that norm. `cosh d(i, M i)` is half
/// the norm, so the identity coset is the unique one with norm 2.
pub(crate) fn fold_cosets<A, I, F, G>(
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
    if n_max < 2 {
        return Ok(init());
    }
    // N = c^2 + d^2 < n_max since |M|^2 = (X^2 + 1)/N + N.
    let c_max = isqrt(n_max - 1) as i64;
    (1..=c_max)
        .into_par_iter()
        .try_fold(&init, |mut acc, c| {
            meter.check_time()?;
            let mut visited = 0;
            let mut d = 0i64;
            loop {
                let n = c as i128 * c as i128 + d as i128 * d as i128;
                if n >= n_max {
                    break;
                }
                let (g, x, y) = ext_gcd(d, c);
                if g == 1 {
                    // x d + y c = 1, so (a0, b0) = (x, -y) has a0 d - b0 c = 1.
                    let (a0, b0) = (x, -y);
                    let u = a0 as i128 * c as i128 + b0 as i128 * d as i128;
                    let bound = isqrt(n * (n_max - n) - 1);
                    if bound >= 0 {
                        let first = u + n * (-bound - u).div_euclid(n)
                            + if (-bound - u).rem_euclid(n) == 0 { 0 } else { n };
                        let mut xx = first;
                        while xx <= bound {
                            let t = ((xx - u) / n) as i64;
                            let norm = (xx * xx + 1) / n + n;
                            if !(punctured && norm == 2) {
                                let m = IntMat::norm(a0 + t * c, b0 + t * d, c, d);
                                fold(&mut acc, m, norm);
                                visited += 1;
                            }
                            xx += n;
                        }
                    }
                }
                d += 1;
            }
            meter.add(visited)?;
            Ok(acc)
        })
        .try_reduce(&init, |a, b| Ok(merge(a, b)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn brute(n_max: i128) -> HashSet<(i128, i128)> {
        let b = isqrt(n_max) as i64;
        let mut pts = HashSet::new();
        for a in -b..=b {
            for bb in -b..=b {
                for c in -b..=b {
                    for d in -b..=b {
                        if let Some(m) = IntMat::new(a, bb, c, d) {
                            if m.norm2() <= n_max {
                                pts.insert(m.image_of_i());
                            }
                        }
                    }
                }
            }
        }
        pts
    }

    #[test]
    fn matches_brute_force() {
        for n_max in [2, 3, 5, 10, 27, 60] {
            let meter = Meter::unbounded();
            let got: Vec<(i128, i128)> = fold_cosets(
                n_max,
                false,
                &meter,
                Vec::new,
                |v, m, n| {
                    assert_eq!(m.norm2(), n);
                    v.push(m.image_of_i())
                },
                |mut a, b| {
                    a.extend(b);
                    a
                },
            )
            .unwrap();
            let set: HashSet<_> = got.iter().cloned().collect();
            assert_eq!(set.len(), got.len(), "duplicate coset at {n_max}");
            assert_eq!(set, brute(n_max), "n_max {n_max}");
        }
    }

    #[test]
    fn ext_gcd_identity() {
        for (a, b) in [(0, 1), (1, 0), (3, 7), (12, 5), (1, 1)] {
            let (g, x, y) = ext_gcd(a, b);
            assert_eq!(g, 1);
            assert_eq!(x * a + y * b, 1);
        }
    }
}

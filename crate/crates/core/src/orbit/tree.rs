//! Orbits of the free product `Gamma_k = <sigma_j : |j| <= k>`, where
//! `sigma_j = eta^j S eta^-j` is the half-turn about `2j + i`.
//!
//! Elements are reduced words. The domain bounded by the unit semicircles
//! `W_j` about `2j` is a fundamental domain, and every extension of a word
//! `g sigma_j` maps it into `g(D_j)`, where `D_j` is the disk bounded by `W_j`.
//! A subtree is skipped when the ball misses `g(D_j)`.

use rayon::prelude::*;

use crate::error::Result;
use crate::group::gamma_k_generators;
use crate::hyp::IntMat;

use super::Meter;

/// Pruning must never drop a point inside the ball.
const PRUNE_MARGIN: f64 = 1e-6;

pub(crate) fn eta_pow(j: i64) -> IntMat {
    IntMat::norm(1, 2 * j, 0, 1)
}

fn apply_inverse(g: IntMat, z: (f64, f64)) -> (f64, f64) {
    let [a, b, c, d] = g.inv().to_f64();
    let (x, y) = z;
    let den = (c * x + d).powi(2) + (c * y).powi(2);
    (((a * x + b) * (c * x + d) + a * c * y * y) / den, y / den)
}

/// Lower bound on the distance from `q` to `g(D_j)`: zero when `q` may lie
/// inside, else the distance to the boundary geodesic `g(W_j)`.
fn dist_to_region(g: IntMat, j: i64, q: (f64, f64)) -> f64 {
    let (x, y) = apply_inverse(g, q);
    let r2 = (x - 2.0 * j as f64).powi(2) + y * y;
    if r2 <= 1.0 + 1e-9 {
        0.0
    } else {
        ((r2 - 1.0) / (2.0 * y)).asinh()
    }
}

/// Visits `M = eta^-mq g eta^jp` for one `g` per orbit point
/// `g (2 jp + i)` with `cosh d(2 mq + i, g (2 jp + i)) = |M|^2 / 2` at
/// most `n_max / 2`.
#[allow(clippy::too_many_arguments)]
pub(crate) fn fold_gamma_k<A, I, F, G>(
    k: u32,
    jp: i64,
    mq: i64,
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
    let gens = gamma_k_generators(k);
    let k = k as i64;
    let letter_p = (jp + k) as usize;
    let (left, right) = (eta_pow(-mq), eta_pow(jp));
    let q = (2.0 * mq as f64, 1.0);
    let radius = (n_max as f64 / 2.0).max(1.0).acosh() + PRUNE_MARGIN;

    let visit = |acc: &mut A, g: IntMat, last: Option<usize>| -> bool {
        if last == Some(letter_p) {
            return false;
        }
        let m = left * g * right;
        let n = m.norm2();
        if n <= n_max && !(punctured && n == 2) {
            fold(acc, m, n);
            return true;
        }
        false
    };

    let mut root = init();
    if visit(&mut root, IntMat::ID, None) {
        meter.add(1)?;
    }
    let subtrees = (0..gens.len())
        .into_par_iter()
        .try_fold(&init, |mut acc, first| {
            let j = first as i64 - k;
            if dist_to_region(IntMat::ID, j, q) > radius {
                return Ok::<A, crate::Error>(acc);
            }
            let mut stack = vec![(gens[first], first)];
            let mut visited = 0usize;
            let mut steps = 0usize;
            while let Some((g, last)) = stack.pop() {
                steps += 1;
                if steps % 4096 == 0 {
                    meter.check_time()?;
                }
                if visit(&mut acc, g, Some(last)) {
                    visited += 1;
                    if visited % 4096 == 0 {
                        meter.add(visited)?;
                        visited = 0;
                    }
                }
                for (letter, s) in gens.iter().enumerate() {
                    if letter != last && dist_to_region(g, letter as i64 - k, q) <= radius {
                        stack.push((g * *s, letter));
                    }
                }
            }
            meter.add(visited)?;
            Ok(acc)
        })
        .try_reduce(&init, |a, b| Ok(merge(a, b)))?;
    Ok(merge(root, subtrees))
}

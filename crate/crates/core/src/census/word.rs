//! Positive `R`/`L` words: the conjugacy normal form of hyperbolic elements
//! of the modular group, unique up to cyclic rotation.

use crate::error::{Error, Result};
use crate::hyp::{IntMat, Moebius};

/// Conjugates a hyperbolic element to a matrix with positive entries and
/// positive trace.
fn positive_conjugate(g: IntMat) -> IntMat {
    let mut g = g;
    // (A, B, C) are the coefficients of the fixed-point equation
    // A z^2 + B z + C = 0; the loop stops once the roots have opposite signs.
    loop {
        let (a, b, c) = (g.c as i128, (g.d - g.a) as i128, -g.b as i128);
        if a * c < 0 {
            break;
        }
        // Shift so that |B| <= |A|.
        let k = (-b).div_euclid(2 * a);
        let best = [k, k + 1]
            .into_iter()
            .min_by_key(|k| (b + 2 * a * k).abs())
            .unwrap() as i64;
        let t = IntMat::T.pow(best.unsigned_abs() as u32);
        let t = if best < 0 { t.inv() } else { t };
        g = t.inv() * g * t;
        let (a, c) = (g.c as i128, -g.b as i128);
        if a * c < 0 {
            break;
        }
        // Here |C| < |A|, so the swap strictly shrinks |A|.
        g = IntMat::S.inv() * g * IntMat::S;
    }
    if g.b < 0 {
        g = IntMat::S.inv() * g * IntMat::S;
    }
    if g.trace() < 0 {
        g = IntMat { a: -g.a, b: -g.b, c: -g.c, d: -g.d };
    }
    debug_assert!(g.a > 0 && g.b > 0 && g.c > 0 && g.d > 0, "{g}");
    g
}

fn word_product(w: &[u8]) -> IntMat {
    w.iter().fold(IntMat::ID, |m, &l| {
        m * if l == b'R' { IntMat::R } else { IntMat::L }
    })
}

/// The `R`/`L` word of a positive matrix, by peeling letters from the right.
fn peel(mut m: IntMat) -> Vec<u8> {
    let mut rev = Vec::new();
    while m != IntMat::ID {
        let (a, b, c, d) = (m.a, m.b, m.c, m.d);
        let (letter, k) = if b == 0 {
            (b'L', c)
        } else if c == 0 {
            (b'R', b)
        } else if a >= b && c >= d {
            (b'L', (a / b).min(c / d))
        } else {
            (b'R', (b / a).min(d / c))
        };
        let step = if letter == b'L' { IntMat::L } else { IntMat::R };
        m = m * step.inv().pow(k as u32);
        rev.extend(std::iter::repeat(letter).take(k as usize));
    }
    rev.reverse();
    rev
}

/// Word of a hyperbolic element of `PSL(2, Z)`, as bytes `b'R'`/`b'L'`.
pub fn rl_word_int(g: IntMat) -> Result<Vec<u8>> {
    if g.trace().abs() <= 2 {
        return Err(Error::NotHyperbolic(g.trace().abs().to_string()));
    }
    let pos = positive_conjugate(g);
    let w = peel(pos);
    assert_eq!(word_product(&w), pos, "R/L reconstruction failed for {g}");
    Ok(w)
}

/// Word of a hyperbolic element given as an exact integral Möbius map.
pub fn rl_word(g: &Moebius) -> Result<String> {
    let m = IntMat::from_moebius(g).ok_or_else(|| Error::NotExact(g.to_string()))?;
    let w = rl_word_int(m)?;
    let trace = word_product(&w).trace();
    assert_eq!(trace, m.trace().abs(), "trace changed for {g}");
    Ok(String::from_utf8(w).expect("ascii"))
}

/// Start index of the lexicographically least rotation (Booth).
fn least_rotation_start(s: &[u8]) -> usize {
    let n = s.len();
    let mut f = vec![usize::MAX; 2 * n];
    let mut k = 0usize;
    for j in 1..2 * n {
        let sj = s[j % n];
        let mut i = f[j - k - 1];
        while i != usize::MAX && sj != s[(k + i + 1) % n] {
            if sj < s[(k + i + 1) % n] {
                k = j - i - 1;
            }
            i = f[i];
        }
        if i == usize::MAX && sj != s[(k + i.wrapping_add(1)) % n] {
            if sj < s[(k + i.wrapping_add(1)) % n] {
                k = j;
            }
            f[j - k] = usize::MAX;
        } else {
            f[j - k] = i.wrapping_add(1);
        }
    }
    k
}

pub fn least_rotation(s: &[u8]) -> Vec<u8> {
    if s.is_empty() {
        return Vec::new();
    }
    let k = least_rotation_start(s);
    s[k..].iter().chain(&s[..k]).copied().collect()
}

/// The word of the inverse class: reversed, with `R` and `L` swapped.
pub fn reverse_swap(s: &[u8]) -> Vec<u8> {
    s.iter()
        .rev()
        .map(|&c| if c == b'R' { b'L' } else { b'R' })
        .collect()
}

/// Least rotation over the word and its inverse word.
pub fn unoriented_key(s: &[u8]) -> Vec<u8> {
    least_rotation(s).min(least_rotation(&reverse_swap(s)))
}

/// True iff the cyclic class of `w` equals that of its inverse word.
pub fn is_reciprocal(w: &str) -> bool {
    let b = w.as_bytes();
    least_rotation(b) == least_rotation(&reverse_swap(b))
}

/// Smallest period `p` dividing `|w|` with `w = u^(|w|/p)`.
pub fn primitive_period(w: &[u8]) -> usize {
    let n = w.len();
    if n == 0 {
        return 0;
    }
    let mut pi = vec![0usize; n];
    for i in 1..n {
        let mut k = pi[i - 1];
        while k > 0 && w[i] != w[k] {
            k = pi[k - 1];
        }
        if w[i] == w[k] {
            k += 1;
        }
        pi[i] = k;
    }
    let p = n - pi[n - 1];
    if n % p == 0 {
        p
    } else {
        n
    }
}

/// Not a proper power of a shorter word.
pub fn is_primitive_word(w: &[u8]) -> bool {
    primitive_period(w) == w.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(a: i64, b: i64, c: i64, d: i64) -> IntMat {
        IntMat::new(a, b, c, d).unwrap()
    }

    fn naive_least_rotation(s: &[u8]) -> Vec<u8> {
        (0..s.len())
            .map(|k| s[k..].iter().chain(&s[..k]).copied().collect::<Vec<u8>>())
            .min()
            .unwrap_or_default()
    }

    #[test]
    fn examples() {
        let rl = rl_word(&m(2, 1, 1, 1).to_moebius()).unwrap();
        assert_eq!(least_rotation(rl.as_bytes()), b"LR");
        let lr = rl_word(&m(1, 1, 1, 2).to_moebius()).unwrap();
        assert_eq!(least_rotation(lr.as_bytes()), b"LR");
        let g = m(2, 1, 1, 1);
        let w2 = rl_word_int(g * g).unwrap();
        assert_eq!(least_rotation(&w2), b"LRLR");
        assert!(rl_word(&IntMat::T.to_moebius()).is_err());
        assert!(rl_word(&crate::hyp::Moebius::s(crate::hyp::Mode::Floating)).is_err());
    }

    #[test]
    fn reciprocity_examples() {
        assert!(is_reciprocal("RL"));
        assert!(!is_reciprocal("RRL"));
        assert!(is_reciprocal("RRLL"));
        assert!(is_reciprocal("RLRL"));
        assert!(!is_reciprocal("RRLRRL"));
    }

    #[test]
    fn primitivity() {
        assert!(is_primitive_word(b"RL"));
        assert!(!is_primitive_word(b"RLRL"));
        assert!(!is_primitive_word(b"RRR"));
        assert!(is_primitive_word(b"RRL"));
        assert_eq!(primitive_period(b"RLLRLL"), 3);
    }

    proptest! {
        #[test]
        fn booth_matches_naive(w in proptest::collection::vec(prop_oneof![Just(b'L'), Just(b'R')], 1..40)) {
            prop_assert_eq!(least_rotation(&w), naive_least_rotation(&w));
        }

        #[test]
        fn word_is_a_conjugacy_invariant(
            w in proptest::collection::vec(prop_oneof![Just(b'L'), Just(b'R')], 2..14),
            conj in proptest::collection::vec(0u8..3, 0..8),
        ) {
            prop_assume!(w.contains(&b'L') && w.contains(&b'R'));
            let g = word_product(&w);
            let h = conj.iter().fold(IntMat::ID, |h, &c| h * match c {
                0 => IntMat::S,
                1 => IntMat::T,
                _ => IntMat::T.inv(),
            });
            let conjugate = h * g * h.inv();
            let got = rl_word_int(conjugate).unwrap();
            prop_assert_eq!(least_rotation(&got), least_rotation(&w));
            let inv = rl_word_int(g.inv()).unwrap();
            prop_assert_eq!(least_rotation(&inv), least_rotation(&reverse_swap(&w)));
        }
    }
}

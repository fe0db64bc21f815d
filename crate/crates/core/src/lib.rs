//! Counting, classifying and sampling infinite dihedral subgroups of Fuchsian
//! lattices and the reciprocal geodesics they determine.

pub mod census;
pub mod equidist;
pub mod error;
pub mod group;
pub mod hyp;
pub mod lowlying;
pub mod orbit;
mod tol;

pub use error::{Error, Result};
pub use group::{builtin_group, load_group, GroupSpec, InvolutionClass};

use num_rational::BigRational;

/// Exact rationals serialize as `"p/q"` strings.
pub fn serde_rational<S: serde::Serializer>(q: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&hyp::format_rational(q))
}

pub fn serde_opt_rational<S: serde::Serializer>(
    q: &Option<BigRational>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match q {
        Some(q) => s.serialize_str(&hyp::format_rational(q)),
        None => s.serialize_none(),
    }
}

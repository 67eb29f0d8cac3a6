//! Exact arithmetic: fields, univariate and bivariate polynomials, linear
//! algebra, and their text/JSON forms.

pub mod field;
pub mod linalg;
pub mod parse;
pub mod poly;
pub mod univariate;

pub use field::{is_square, quadratic_has_root, Field, FieldElem, FieldSpec};
pub use linalg::nullspace;
pub use poly::{BivarPoly, Monomial};
pub use univariate::UniPoly;

/// Full Galois orbit of `x` over the base field of its field.
pub fn galois_conjugates(x: &FieldElem) -> Vec<FieldElem> {
    x.galois_conjugates()
}

/// The quotient `b / a` when `a` divides `b` exactly.
pub fn poly_divides(a: &BivarPoly, b: &BivarPoly) -> Option<BivarPoly> {
    if a.is_zero() {
        return None;
    }
    b.div_exact(a)
}

//! The one-parameter tori of curve types 3–5 and their distinguished
//! involutions, with the group law written on parameters.
//!
//! * type 3: t ↦ (tx, t⁻¹y), involution σ = (y, x);
//! * type 4: (a, b) ↦ [[a, −νb], [λb, a]] with a² + λνb² = 1, involution τ = (x, −y);
//! * type 5: (a, b) ↦ [[a, b], [b, a + μb]] with a² + μab + b² = 1, involution σ_μ = (x + μy, y).
//!
//! In each case the involution inverts the torus by conjugation.

use serde_json::{json, Value};

use crate::algebra::parse::elem_to_json;
use crate::algebra::{Field, FieldElem};
use crate::autmap::{diagonal, linear, swap, PlaneAut};
use crate::classify::CurveType;

#[derive(Clone, Debug, PartialEq)]
pub enum Torus {
    Scalar,
    Norm { lambda: FieldElem, nu: FieldElem },
    Char2 { mu: FieldElem },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TorusElem {
    Scalar(FieldElem),
    Pair(FieldElem, FieldElem),
}

impl TorusElem {
    pub fn to_json(&self) -> Value {
        match self {
            TorusElem::Scalar(t) => elem_to_json(t),
            TorusElem::Pair(a, b) => json!([elem_to_json(a), elem_to_json(b)]),
        }
    }

    pub fn field(&self) -> &Field {
        match self {
            TorusElem::Scalar(t) => t.field(),
            TorusElem::Pair(a, _) => a.field(),
        }
    }
}

impl std::fmt::Display for TorusElem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TorusElem::Scalar(t) => write!(f, "{t}"),
            TorusElem::Pair(a, b) => write!(f, "({a}, {b})"),
        }
    }
}

impl Torus {
    pub fn from_type(t: &CurveType) -> Option<Torus> {
        match t {
            CurveType::T3 { .. } => Some(Torus::Scalar),
            CurveType::T4 { lambda, nu } => Some(Torus::Norm {
                lambda: lambda.clone(),
                nu: nu.clone(),
            }),
            CurveType::T5 { mu } => Some(Torus::Char2 { mu: mu.clone() }),
            _ => None,
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Torus::Scalar => "{(t*x, y/t)}".to_string(),
            Torus::Norm { lambda, nu } => {
                format!("T_(lambda,nu) = {{[[a, -({nu})*b], [({lambda})*b, a]] : a^2 + ({lambda})*({nu})*b^2 = 1}}")
            }
            Torus::Char2 { mu } => {
                format!("T_mu = {{[[a, b], [b, a + ({mu})*b]] : a^2 + ({mu})*a*b + b^2 = 1}}")
            }
        }
    }

    pub fn identity(&self, k: &Field) -> TorusElem {
        match self {
            Torus::Scalar => TorusElem::Scalar(k.one()),
            _ => TorusElem::Pair(k.one(), k.zero()),
        }
    }

    pub fn is_identity(&self, t: &TorusElem) -> bool {
        *t == self.identity(t.field())
    }

    pub fn is_member(&self, t: &TorusElem) -> bool {
        match (self, t) {
            (Torus::Scalar, TorusElem::Scalar(t)) => !t.is_zero(),
            (Torus::Norm { lambda, nu }, TorusElem::Pair(a, b)) => (a * a + lambda * nu * b * b).is_one(),
            (Torus::Char2 { mu }, TorusElem::Pair(a, b)) => (a * a + mu * a * b + b * b).is_one(),
            _ => false,
        }
    }

    pub fn mul(&self, s: &TorusElem, t: &TorusElem) -> TorusElem {
        match (self, s, t) {
            (Torus::Scalar, TorusElem::Scalar(x), TorusElem::Scalar(y)) => TorusElem::Scalar(x * y),
            (Torus::Norm { lambda, nu }, TorusElem::Pair(a, b), TorusElem::Pair(c, d)) => {
                TorusElem::Pair(a * c - lambda * nu * b * d, a * d + b * c)
            }
            (Torus::Char2 { mu }, TorusElem::Pair(a, b), TorusElem::Pair(c, d)) => {
                TorusElem::Pair(a * c + b * d, a * d + b * c + mu * b * d)
            }
            _ => panic!("torus element of the wrong shape"),
        }
    }

    pub fn inv(&self, t: &TorusElem) -> TorusElem {
        match (self, t) {
            (Torus::Scalar, TorusElem::Scalar(x)) => TorusElem::Scalar(x.inv().expect("nonzero")),
            (Torus::Norm { .. }, TorusElem::Pair(a, b)) => TorusElem::Pair(a.clone(), -b),
            (Torus::Char2 { mu }, TorusElem::Pair(a, b)) => TorusElem::Pair(a + mu * b, b.clone()),
            _ => panic!("torus element of the wrong shape"),
        }
    }

    pub fn pow(&self, t: &TorusElem, n: i64) -> TorusElem {
        let base = if n < 0 { self.inv(t) } else { t.clone() };
        let mut acc = self.identity(t.field());
        let mut sq = base;
        let mut e = n.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &sq);
            }
            e >>= 1;
            if e > 0 {
                sq = self.mul(&sq, &sq);
            }
        }
        acc
    }

    /// The automorphism attached to a torus parameter.
    pub fn element(&self, t: &TorusElem) -> PlaneAut {
        match (self, t) {
            (Torus::Scalar, TorusElem::Scalar(x)) => diagonal(x.clone(), x.inv().expect("nonzero")).expect("nonzero"),
            (Torus::Norm { lambda, nu }, TorusElem::Pair(a, b)) => {
                linear([[a.clone(), -(nu * b)], [lambda * b, a.clone()]]).expect("invertible")
            }
            (Torus::Char2 { mu }, TorusElem::Pair(a, b)) => {
                linear([[a.clone(), b.clone()], [b.clone(), a + mu * b]]).expect("invertible")
            }
            _ => panic!("torus element of the wrong shape"),
        }
    }

    /// σ, τ or σ_μ.
    pub fn involution(&self, k: &Field) -> PlaneAut {
        match self {
            Torus::Scalar => swap(k),
            Torus::Norm { .. } => diagonal(k.one(), -k.one()).expect("nonzero"),
            Torus::Char2 { mu } => linear([[k.one(), mu.clone()], [k.zero(), k.one()]]).expect("invertible"),
        }
    }

    /// t · involution.
    pub fn coset_element(&self, t: &TorusElem) -> PlaneAut {
        self.element(t).compose(&self.involution(t.field()))
    }

    /// Writes a linear map as t or t·involution, if it is one of those.
    pub fn decompose(&self, g: &PlaneAut) -> Option<(TorusElem, bool)> {
        let m = g.as_linear()?;
        let k = g.field();
        let [[m00, m01], [m10, m11]] = m;
        let found = match self {
            Torus::Scalar => {
                if m01.is_zero() && m10.is_zero() && (&m00 * &m11).is_one() {
                    Some((TorusElem::Scalar(m00), false))
                } else if m00.is_zero() && m11.is_zero() && (&m01 * &m10).is_one() {
                    // (x, y) ↦ (t·y, t⁻¹·x)
                    Some((TorusElem::Scalar(m01), true))
                } else {
                    None
                }
            }
            Torus::Norm { lambda, nu } => {
                let b = &m10 / lambda;
                if m11 == m00 && m01 == -(nu * &b) {
                    Some((TorusElem::Pair(m00, b), false))
                } else if m11 == -&m00 && m01 == nu * &b {
                    Some((TorusElem::Pair(m00, b), true))
                } else {
                    None
                }
            }
            Torus::Char2 { mu } => {
                if m01 == m10 && m11 == &m00 + mu * &m10 {
                    Some((TorusElem::Pair(m00, m10), false))
                } else if m11 == m00 && m01 == mu * &m00 + &m10 {
                    Some((TorusElem::Pair(m00, m10), true))
                } else {
                    None
                }
            }
        };
        let _ = k;
        found.filter(|(t, _)| self.is_member(t))
    }

    /// All torus parameters over a finite field.
    pub fn enumerate(&self, k: &Field) -> Vec<TorusElem> {
        match self {
            Torus::Scalar => k.nonzero_elements().into_iter().map(TorusElem::Scalar).collect(),
            _ => {
                let els = k.elements();
                let mut out = Vec::new();
                for a in &els {
                    for b in &els {
                        let t = TorusElem::Pair(a.clone(), b.clone());
                        if self.is_member(&t) {
                            out.push(t);
                        }
                    }
                }
                out
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_law_matches_composition() {
        let f7 = Field::prime(7).unwrap();
        // −λν = −3 ≡ 4 is a square mod 7, so use λ = 1, ν = 1: −1 is not a square mod 7
        let tor = Torus::Norm {
            lambda: f7.one(),
            nu: f7.one(),
        };
        let ts = tor.enumerate(&f7);
        assert_eq!(ts.len(), 8);
        for s in &ts {
            for t in &ts {
                let prod = tor.element(s).compose(&tor.element(t));
                assert!(prod.same_map(&tor.element(&tor.mul(s, t))));
            }
            let inv = tor.involution(&f7);
            let conj = inv.compose(&tor.element(s)).compose(&inv);
            assert!(conj.same_map(&tor.element(&tor.inv(s))));
            assert_eq!(tor.decompose(&tor.coset_element(s)), Some((s.clone(), true)));
        }
    }

    #[test]
    fn char2_torus() {
        let f4 = Field::finite(4).unwrap();
        let mu = f4.ext_generator().unwrap();
        let tor = Torus::Char2 { mu };
        let ts = tor.enumerate(&f4);
        assert_eq!(ts.len(), 5);
        for s in &ts {
            assert!(tor.coset_element(s).is_involution());
            for t in &ts {
                let prod = tor.element(s).compose(&tor.element(t));
                assert!(prod.same_map(&tor.element(&tor.mul(s, t))));
            }
            assert!(tor.is_identity(&tor.mul(s, &tor.inv(s))));
        }
    }
}

//! Recognition of the canonical curve types and their symmetry groups.
//!
//! Canonical forms (λ, ν, μ nonzero):
//!
//! | type | curve | symmetry group |
//! |------|-------|----------------|
//! | 1 | x^b − λy^a, a, b > 1 coprime | (t^a x, t^b y) |
//! | 2 | x^b y^a − λ, a, b ≥ 1 coprime, ab ≠ 1 | (t^a x, t^{-b} y) |
//! | 3 | xy − λ | (tx, t⁻¹y) ⋊ ⟨σ⟩, σ = (y, x) |
//! | 4 | λx² + νy² − 1, char ≠ 2, −λν not a square | T_{λ,ν} ⋊ ⟨τ⟩, τ = (x, −y) |
//! | 5 | x² + μxy + y² − 1, char 2, x² + μx + 1 rootless | T_μ ⋊ ⟨σ_μ⟩, σ_μ = (x + μy, y) |
//! | 6 | x | (ax, by + P(x)) |
//!
//! plus fences P(x) = 0. Anything else is reported as "other".

use num_integer::Integer;
use serde_json::{json, Value};

use crate::algebra::parse::{elem_to_json, poly_to_json, unipoly_to_json};
use crate::algebra::{is_square, quadratic_has_root, BivarPoly, Field, FieldElem, Monomial, UniPoly};
use crate::autmap::{affine, diagonal, elementary, PlaneAut};
use crate::error::{Error, Result};
use crate::torus::{Torus, TorusElem};

#[derive(Clone, Debug, PartialEq)]
pub enum CurveType {
    /// x^b − λ y^a
    T1 {
        a: u32,
        b: u32,
        lambda: FieldElem,
    },
    /// x^b y^a − λ
    T2 {
        a: u32,
        b: u32,
        lambda: FieldElem,
    },
    /// xy − λ
    T3 {
        lambda: FieldElem,
    },
    /// λx² + νy² − 1
    T4 {
        lambda: FieldElem,
        nu: FieldElem,
    },
    /// x² + μxy + y² − 1
    T5 {
        mu: FieldElem,
    },
    /// the line x = 0
    T6,
    /// P(x) = 0
    Fence {
        p: UniPoly,
    },
    Other,
}

impl CurveType {
    pub fn name(&self) -> &'static str {
        match self {
            CurveType::T1 { .. } => "T1",
            CurveType::T2 { .. } => "T2",
            CurveType::T3 { .. } => "T3",
            CurveType::T4 { .. } => "T4",
            CurveType::T5 { .. } => "T5",
            CurveType::T6 => "T6",
            CurveType::Fence { .. } => "fence",
            CurveType::Other => "other",
        }
    }

    pub fn params_json(&self) -> Value {
        match self {
            CurveType::T1 { a, b, lambda } | CurveType::T2 { a, b, lambda } => {
                json!({"a": a, "b": b, "lambda": elem_to_json(lambda)})
            }
            CurveType::T3 { lambda } => json!({"lambda": elem_to_json(lambda)}),
            CurveType::T4 { lambda, nu } => {
                json!({"lambda": elem_to_json(lambda), "nu": elem_to_json(nu)})
            }
            CurveType::T5 { mu } => json!({"mu": elem_to_json(mu)}),
            CurveType::Fence { p } => json!({"P": unipoly_to_json(p), "P_text": p.to_string()}),
            CurveType::T6 | CurveType::Other => json!({}),
        }
    }

    pub fn is_torus_type(&self) -> bool {
        matches!(self, CurveType::T3 { .. } | CurveType::T4 { .. } | CurveType::T5 { .. })
    }
}

#[derive(Clone, Debug)]
pub struct CurveDescriptor {
    pub curve_type: CurveType,
    /// Monic defining polynomial of the canonical curve.
    pub defining_poly: BivarPoly,
    /// A map carrying the caller's curve onto the canonical one, when given.
    pub conjugator: Option<PlaneAut>,
    pub side_conditions: Vec<(String, bool)>,
    pub note: Option<String>,
}

impl CurveDescriptor {
    pub fn field(&self) -> &Field {
        self.defining_poly.field()
    }

    pub fn to_json(&self) -> Value {
        let side: serde_json::Map<String, Value> = self
            .side_conditions
            .iter()
            .map(|(k, v)| (k.clone(), json!(v)))
            .collect();
        json!({
            "type": self.curve_type.name(),
            "params": self.curve_type.params_json(),
            "defining_poly": poly_to_json(&self.defining_poly),
            "defining_poly_text": self.defining_poly.to_string(),
            "conjugator": self.conjugator.as_ref().map(PlaneAut::word_to_json),
            "side_conditions": side,
            "note": self.note,
        })
    }
}

fn other(f: &BivarPoly, side: Vec<(String, bool)>, note: &str) -> CurveDescriptor {
    CurveDescriptor {
        curve_type: CurveType::Other,
        defining_poly: f.clone(),
        conjugator: None,
        side_conditions: side,
        note: Some(note.to_string()),
    }
}

/// Matches a polynomial against the canonical templates, in the order
/// conics (types 4, 5), type 3, type 2, type 1, type 6 / fence.
pub fn classify_canonical(f: &BivarPoly) -> CurveDescriptor {
    if f.is_zero() {
        return other(f, vec![], "zero polynomial");
    }
    let f = f.monic();
    let k = f.field().clone();
    let supp = f.support();
    let has = |i, j| supp.contains(&Monomial::new(i, j));
    let one = Monomial::ONE;
    let make = |t: CurveType, side: Vec<(String, bool)>| CurveDescriptor {
        curve_type: t,
        defining_poly: f.clone(),
        conjugator: None,
        side_conditions: side,
        note: None,
    };

    // Conics: support within {x², xy, y², 1}, containing x², y², 1.
    let conic = [Monomial::new(2, 0), Monomial::new(1, 1), Monomial::new(0, 2), one];
    if supp.iter().all(|m| conic.contains(m)) && has(2, 0) && has(0, 2) && has(0, 0) {
        let e = f.coeff(0, 0);
        let c = f.coeff(0, 2);
        let mu = f.coeff(1, 1);
        if k.characteristic() == 2 {
            // x² + μxy + y² + 1 (−1 = 1)
            if !c.is_one() || !e.is_one() || mu.is_zero() {
                return other(&f, vec![], "char 2 conic not of the form x^2 + mu*x*y + y^2 - 1");
            }
            let rootless = !quadratic_has_root(&mu);
            let side = vec![("rootless_quadratic".to_string(), rootless)];
            if !rootless {
                return other(&f, side, "x^2 + mu*x + 1 has a root: the conic is split");
            }
            return make(CurveType::T5 { mu }, side);
        }
        if !mu.is_zero() {
            return other(&f, vec![], "conic with an xy term is not in canonical form");
        }
        // x² + c y² + e = −e (λx² + νy² − 1)
        let lambda = -(e.inv().expect("nonzero"));
        let nu = &lambda * &c;
        let nonsquare = !is_square(&-(&lambda * &nu));
        let side = vec![("nonsquare_minus_lambda_nu".to_string(), nonsquare)];
        if !nonsquare {
            return other(&f, side, "-lambda*nu is a square: the conic is split");
        }
        return make(CurveType::T4 { lambda, nu }, side);
    }

    if supp.len() == 2 && has(0, 0) {
        let m = *supp.iter().find(|m| **m != one).expect("two monomials");
        let lambda = -f.coeff(0, 0);
        if m == Monomial::new(1, 1) {
            return make(CurveType::T3 { lambda }, vec![]);
        }
        if m.i >= 1 && m.j >= 1 {
            let (b, a) = (m.i, m.j);
            let coprime = a.gcd(&b) == 1;
            let side = vec![("coprime".to_string(), coprime)];
            if !coprime {
                return other(&f, side, "exponents not coprime: the curve is reducible");
            }
            return make(CurveType::T2 { a, b, lambda }, side);
        }
    }

    if supp.len() == 2 && supp.iter().all(|m| m.i == 0 || m.j == 0) && !has(0, 0) {
        let xb = *supp.iter().find(|m| m.j == 0).expect("x power");
        let ya = supp.iter().find(|m| m.i == 0);
        if let Some(ya) = ya {
            let (b, a) = (xb.i, ya.j);
            let lambda = -(f.coeff(0, a) / f.coeff(b, 0));
            let coprime = a.gcd(&b) == 1;
            let side = vec![
                ("coprime".to_string(), coprime),
                ("exponents_above_one".to_string(), a > 1 && b > 1),
            ];
            if a > 1 && b > 1 && coprime {
                return make(CurveType::T1 { a, b, lambda }, side);
            }
            return other(&f, side, "binomial x^b - lambda*y^a outside the canonical range");
        }
    }

    if f == BivarPoly::x(&k) {
        return make(CurveType::T6, vec![]);
    }
    if let Some(p) = f.to_univariate_x() {
        if p.degree().unwrap_or(0) >= 1 {
            return make(CurveType::Fence { p }, vec![]);
        }
    }
    other(&f, vec![], "no canonical template matches")
}

/// Classifies the image of the caller's curve under `conjugator`.
pub fn classify_with_conjugator(f: &BivarPoly, conjugator: &PlaneAut) -> CurveDescriptor {
    // φ(V(F)) = V(F ∘ φ⁻¹)
    let image = conjugator.inverse().pullback(f);
    let mut d = classify_canonical(&image);
    d.conjugator = Some(conjugator.clone());
    d
}

/// Parameters for [`make_family_element`].
#[derive(Clone, Debug)]
pub enum FamilyParams {
    /// t for types 1–3.
    Scalar(FieldElem),
    /// (a, b) for types 4 and 5.
    Pair(FieldElem, FieldElem),
    /// (ax, by + P(x)) for type 6.
    Jonquieres { a: FieldElem, b: FieldElem, p: UniPoly },
    /// (αx + β, γy + Q(x)) for fences.
    FenceMap {
        alpha: FieldElem,
        beta: FieldElem,
        gamma: FieldElem,
        q: UniPoly,
    },
}

/// The element of the symmetry group with the given parameters, optionally
/// right-multiplied by the distinguished involution (types 3–5).
pub fn make_family_element(desc: &CurveDescriptor, params: &FamilyParams, with_involution: bool) -> Result<PlaneAut> {
    let bad = |m: &str| Error::NotInFamily(m.to_string());
    if with_involution && !desc.curve_type.is_torus_type() {
        return Err(bad("only types 3-5 carry an involution"));
    }
    let g = match (&desc.curve_type, params) {
        (CurveType::T1 { a, b, .. }, FamilyParams::Scalar(t)) => {
            if t.is_zero() {
                return Err(bad("t must be nonzero"));
            }
            diagonal(t.pow(*a as u64), t.pow(*b as u64))?
        }
        (CurveType::T2 { a, b, .. }, FamilyParams::Scalar(t)) => {
            if t.is_zero() {
                return Err(bad("t must be nonzero"));
            }
            diagonal(t.pow(*a as u64), t.powi(-(*b as i64)))?
        }
        (ct, FamilyParams::Scalar(_) | FamilyParams::Pair(..)) if ct.is_torus_type() => {
            let torus = Torus::from_type(ct).expect("torus type");
            let t = match params {
                FamilyParams::Scalar(t) => TorusElem::Scalar(t.clone()),
                FamilyParams::Pair(a, b) => TorusElem::Pair(a.clone(), b.clone()),
                _ => unreachable!(),
            };
            if !torus.is_member(&t) {
                return Err(bad(&format!("parameters violate the equation of {}", torus.describe())));
            }
            if with_involution {
                torus.coset_element(&t)
            } else {
                torus.element(&t)
            }
        }
        (CurveType::T6, FamilyParams::Jonquieres { a, b, p }) => {
            elementary(a.clone(), b.clone(), p.clone()).map_err(|_| bad("a and b must be nonzero"))?
        }
        (CurveType::Fence { p }, FamilyParams::FenceMap { alpha, beta, gamma, q }) => {
            if alpha.is_zero() || gamma.is_zero() {
                return Err(bad("alpha and gamma must be nonzero"));
            }
            if p.compose_affine(alpha, beta).ratio_if_associate(p).is_none() {
                return Err(bad("x -> alpha*x + beta does not preserve the roots of P"));
            }
            let k = alpha.field().clone();
            let shift = affine([[k.one(), k.zero()], [k.zero(), k.one()]], [beta.clone(), k.zero()])?;
            shift.compose(&elementary(alpha.clone(), gamma.clone(), q.clone())?)
        }
        _ => return Err(bad("parameters do not match the curve type")),
    };
    if !g.stabilizes(&desc.defining_poly) {
        return Err(bad("constructed map does not stabilize the curve"));
    }
    Ok(g)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Countability {
    Finite(usize),
    CountablyInfinite,
    /// A positive-dimensional family parametrized by field elements.
    Parametrized,
}

impl Countability {
    pub fn to_json(&self) -> Value {
        match self {
            Countability::Finite(n) => json!({"finite": n}),
            Countability::CountablyInfinite => json!("countably infinite"),
            Countability::Parametrized => json!("continuum-parametrized"),
        }
    }
}

#[allow(clippy::large_enum_variant)]
#[derive(Clone, Debug)]
pub enum Presentation {
    /// (t^a x, t^b y), t ∈ k*.
    TorusWeights { a: i64, b: i64, split: bool },
    /// A one-parameter torus extended by an involution inverting it.
    TorusExtInvolution { torus: Torus, involution: PlaneAut },
    /// {(ax, by + P(x))} acting on the line x = 0; Ker(R) = {(ax, y + P(x)) : P(0) = 0}.
    JonquieresLine,
    /// {(αx + β, γy + Q(x)) : P(αx + β)/P(x) ∈ k*} for the fence P(x) = 0.
    FenceFamily { p: UniPoly },
}

#[derive(Clone, Debug)]
pub struct GroupDescriptor {
    pub presentation: Presentation,
    /// Explicit elements, for finite groups.
    pub elements: Option<Vec<PlaneAut>>,
    pub countability: Countability,
    pub is_algebraic: bool,
}

impl GroupDescriptor {
    pub fn to_json(&self) -> Value {
        let pres = match &self.presentation {
            Presentation::TorusWeights { a, b, split } => {
                json!({"kind": "torus_weights", "a": a, "b": b, "split": split})
            }
            Presentation::TorusExtInvolution { torus, involution } => json!({
                "kind": "torus_ext_involution",
                "torus": torus.describe(),
                "involution": involution.word_to_json(),
                "involution_map": involution.to_string(),
            }),
            Presentation::JonquieresLine => json!({
                "kind": "jonquieres_line",
                "family": "(a*x, b*y + P(x)), a, b != 0",
                "restriction": "R: g -> g restricted to x = 0, image Aut(A^1)",
                "kernel": "{(a*x, y + P(x)) : P(0) = 0}",
            }),
            Presentation::FenceFamily { p } => json!({
                "kind": "fence_family",
                "family": format!("(alpha*x + beta, gamma*y + Q(x)) with P(alpha*x + beta)/P(x) constant, P = {p}"),
            }),
        };
        json!({
            "presentation": pres,
            "elements": self.elements.as_ref().map(|es| es.iter().map(PlaneAut::word_to_json).collect::<Vec<_>>()),
            "element_maps": self.elements.as_ref().map(|es| es.iter().map(|e| e.to_string()).collect::<Vec<_>>()),
            "countability": self.countability.to_json(),
            "is_algebraic": self.is_algebraic,
        })
    }
}

fn dedup_maps(maps: Vec<PlaneAut>) -> Vec<PlaneAut> {
    let mut out: Vec<PlaneAut> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for m in maps {
        if seen.insert(m.expand().clone()) {
            out.push(m);
        }
    }
    out
}

/// The full automorphism group of a canonical curve.
pub fn symmetry_group(desc: &CurveDescriptor) -> Result<GroupDescriptor> {
    let k = desc.field().clone();
    let finite = k.is_finite();
    let (presentation, elements) = match &desc.curve_type {
        CurveType::T1 { a, b, .. } | CurveType::T2 { a, b, .. } => {
            let b_signed = if matches!(desc.curve_type, CurveType::T1 { .. }) {
                *b as i64
            } else {
                -(*b as i64)
            };
            let elements = finite.then(|| {
                dedup_maps(
                    k.nonzero_elements()
                        .into_iter()
                        .map(|t| diagonal(t.pow(*a as u64), t.powi(b_signed)).expect("nonzero"))
                        .collect(),
                )
            });
            (
                Presentation::TorusWeights {
                    a: *a as i64,
                    b: b_signed,
                    split: true,
                },
                elements,
            )
        }
        ct if ct.is_torus_type() => {
            let torus = Torus::from_type(ct).expect("torus type");
            let elements = finite.then(|| {
                let ts = torus.enumerate(&k);
                let mut es: Vec<PlaneAut> = ts.iter().map(|t| torus.element(t)).collect();
                es.extend(ts.iter().map(|t| torus.coset_element(t)));
                es
            });
            let involution = torus.involution(&k);
            (Presentation::TorusExtInvolution { torus, involution }, elements)
        }
        CurveType::T6 => (Presentation::JonquieresLine, None),
        CurveType::Fence { p } => (Presentation::FenceFamily { p: p.clone() }, None),
        _ => {
            return Err(Error::InvalidArgument(
                "no symmetry group for an unrecognized curve".into(),
            ))
        }
    };
    let countability = match &elements {
        Some(es) => Countability::Finite(es.len()),
        None => Countability::Parametrized,
    };
    let mut g = GroupDescriptor {
        presentation,
        elements,
        countability,
        is_algebraic: false,
    };
    g.is_algebraic = group_algebraicity(&g).is_algebraic;
    Ok(g)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Algebraicity {
    pub is_algebraic: bool,
    pub reason: String,
}

impl Algebraicity {
    pub fn new(is_algebraic: bool, reason: &str) -> Algebraicity {
        Algebraicity {
            is_algebraic,
            reason: reason.to_string(),
        }
    }
}

/// Whether a full symmetry group is an algebraic group.
pub fn group_algebraicity(g: &GroupDescriptor) -> Algebraicity {
    match (&g.presentation, g.countability) {
        (_, Countability::Finite(_))
            if !matches!(
                g.presentation,
                Presentation::JonquieresLine | Presentation::FenceFamily { .. }
            ) =>
        {
            Algebraicity::new(true, "finite group")
        }
        (Presentation::JonquieresLine, _) | (Presentation::FenceFamily { .. }, _) => {
            Algebraicity::new(false, "unbounded degree")
        }
        (_, Countability::CountablyInfinite) => Algebraicity::new(false, "countably infinite"),
        _ => Algebraicity::new(true, "torus, possibly extended by an involution"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse::parse_poly;

    fn classify(field: &Field, s: &str) -> CurveDescriptor {
        classify_canonical(&parse_poly(field, s).unwrap())
    }

    #[test]
    fn recognizes_templates() {
        let q = Field::rationals();
        let d = classify(&q, "x^2 + y^2 - 1");
        assert_eq!(
            d.curve_type,
            CurveType::T4 {
                lambda: q.one(),
                nu: q.one()
            }
        );
        assert_eq!(classify(&q, "x*y - 1").curve_type, CurveType::T3 { lambda: q.one() });
        let f2 = Field::prime(2).unwrap();
        assert_eq!(
            classify(&f2, "x^2 + x*y + y^2 - 1").curve_type,
            CurveType::T5 { mu: f2.one() }
        );
        assert_eq!(
            classify(&q, "x^3 - y^2").curve_type,
            CurveType::T1 {
                a: 2,
                b: 3,
                lambda: q.one()
            }
        );
        assert_eq!(
            classify(&q, "x^2*y - 3").curve_type,
            CurveType::T2 {
                a: 1,
                b: 2,
                lambda: q.int(3)
            }
        );
        assert_eq!(classify(&q, "x").curve_type, CurveType::T6);
        assert_eq!(classify(&q, "x - 1").curve_type.name(), "fence");
        assert_eq!(classify(&q, "x^2 - y^2 - 1").curve_type, CurveType::Other);
        assert_eq!(classify(&q, "x^2*y^2 - 1").curve_type, CurveType::Other);
        assert_eq!(
            classify(&Field::finite(4).unwrap(), "x^2 + x*y + y^2 + 1").curve_type,
            CurveType::Other
        );
    }

    #[test]
    fn scaled_conic() {
        let q = Field::rationals();
        // 2x² + 3y² − 1 is monic-normalized to x² + 3/2 y² − 1/2
        let d = classify(&q, "2*x^2 + 3*y^2 - 1");
        assert_eq!(
            d.curve_type,
            CurveType::T4 {
                lambda: q.int(2),
                nu: q.int(3)
            }
        );
    }

    #[test]
    fn family_elements() {
        let q = Field::rationals();
        let circle = classify(&q, "x^2 + y^2 - 1");
        let r = make_family_element(&circle, &FamilyParams::Pair(q.rat(3, 5), q.rat(4, 5)), false).unwrap();
        assert_eq!(
            r.as_linear().unwrap(),
            [[q.rat(3, 5), q.rat(-4, 5)], [q.rat(4, 5), q.rat(3, 5)]]
        );
        assert!(make_family_element(&circle, &FamilyParams::Pair(q.one(), q.one()), false).is_err());
        let hyp = classify(&q, "x*y - 1");
        let s = make_family_element(&hyp, &FamilyParams::Scalar(q.one()), true).unwrap();
        assert!(s.same_map(&crate::autmap::swap(&q)));
        let f2 = Field::prime(2).unwrap();
        let c5 = classify(&f2, "x^2 + x*y + y^2 + 1");
        let m = make_family_element(&c5, &FamilyParams::Pair(f2.zero(), f2.one()), false).unwrap();
        assert_eq!(m.as_linear().unwrap(), [[f2.zero(), f2.one()], [f2.one(), f2.one()]]);
    }

    #[test]
    fn group_sizes() {
        let f5 = Field::prime(5).unwrap();
        let g = symmetry_group(&classify(&f5, "x*y - 1")).unwrap();
        assert_eq!(g.countability, Countability::Finite(8));
        assert!(g.is_algebraic);
        let q = Field::rationals();
        let g = symmetry_group(&classify(&q, "x^2 + y^2 - 1")).unwrap();
        assert_eq!(g.countability, Countability::Parametrized);
        assert!(g.is_algebraic);
        let g = symmetry_group(&classify(&q, "x")).unwrap();
        assert!(!g.is_algebraic);
        assert_eq!(group_algebraicity(&g).reason, "unbounded degree");
    }
}

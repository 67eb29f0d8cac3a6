//! Plane automorphisms stored as words in affine, elementary and swap
//! generators.
//!
//! A word `[g1, ..., gn]` denotes the composite `g1 ∘ ... ∘ gn`, so the last
//! generator acts first on a point. Inverses are formed generator by
//! generator, which keeps inversion exact and cheap; the expanded polynomial
//! pair is computed lazily and memoized.

use std::fmt;
use std::sync::OnceLock;

use serde_json::{json, Value};

use crate::algebra::parse::{elem_from_json, elem_to_json, unipoly_from_json, unipoly_to_json};
use crate::algebra::{BivarPoly, Field, FieldElem, UniPoly};
use crate::error::{Error, Result};

/// A point of the plane over some field (possibly an extension of the field
/// the automorphisms are defined over).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    pub x: FieldElem,
    pub y: FieldElem,
}

impl Point {
    pub fn new(x: FieldElem, y: FieldElem) -> Point {
        assert!(x.field() == y.field(), "point coordinates in different fields");
        Point { x, y }
    }

    pub fn field(&self) -> &Field {
        self.x.field()
    }

    pub fn bit_size(&self) -> u64 {
        self.x.bit_size().max(self.y.bit_size())
    }

    /// Coordinatewise Galois conjugate.
    pub fn conjugate(&self) -> Point {
        Point::new(self.x.conjugate(), self.y.conjugate())
    }

    pub fn embed_into(&self, field: &Field) -> Point {
        Point::new(field.embed(&self.x), field.embed(&self.y))
    }

    pub fn to_json(&self) -> Value {
        json!([elem_to_json(&self.x), elem_to_json(&self.y)])
    }

    pub fn from_json(field: &Field, v: &Value) -> Result<Point> {
        let arr = v
            .as_array()
            .filter(|a| a.len() == 2)
            .ok_or_else(|| Error::parse(v.to_string(), "a point is a pair [x, y]"))?;
        Ok(Point::new(
            elem_from_json(field, &arr[0])?,
            elem_from_json(field, &arr[1])?,
        ))
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Brings a coefficient into the field of the point it acts on.
fn lift(c: &FieldElem, target: &Field) -> FieldElem {
    if c.field() == target {
        c.clone()
    } else {
        target.embed(c)
    }
}

#[allow(clippy::large_enum_variant)]
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Generator {
    /// (x, y) ↦ M·(x, y) + v with M invertible.
    Affine { m: [[FieldElem; 2]; 2], v: [FieldElem; 2] },
    /// (x, y) ↦ (a·x, b·y + P(x)) with a, b ≠ 0.
    Elementary { a: FieldElem, b: FieldElem, p: UniPoly },
    /// (x, y) ↦ (y, x).
    Swap,
}

impl Generator {
    pub fn inverse(&self) -> Generator {
        match self {
            Generator::Affine { m, v } => {
                let det = &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0];
                let di = det.inv().expect("invertible matrix");
                let inv = [[&m[1][1] * &di, -(&m[0][1] * &di)], [-(&m[1][0] * &di), &m[0][0] * &di]];
                let w = [
                    -(&inv[0][0] * &v[0] + &inv[0][1] * &v[1]),
                    -(&inv[1][0] * &v[0] + &inv[1][1] * &v[1]),
                ];
                Generator::Affine { m: inv, v: w }
            }
            Generator::Elementary { a, b, p } => {
                let ai = a.inv().expect("a != 0");
                let bi = b.inv().expect("b != 0");
                let q = p.rescale_arg(&ai).scale(&-&bi);
                Generator::Elementary { a: ai, b: bi, p: q }
            }
            Generator::Swap => Generator::Swap,
        }
    }

    pub fn apply_point(&self, pt: &Point) -> Point {
        let k = pt.field();
        match self {
            Generator::Affine { m, v } => Point::new(
                lift(&m[0][0], k) * &pt.x + lift(&m[0][1], k) * &pt.y + lift(&v[0], k),
                lift(&m[1][0], k) * &pt.x + lift(&m[1][1], k) * &pt.y + lift(&v[1], k),
            ),
            Generator::Elementary { a, b, p } => Point::new(lift(a, k) * &pt.x, lift(b, k) * &pt.y + p.eval(&pt.x)),
            Generator::Swap => Point::new(pt.y.clone(), pt.x.clone()),
        }
    }

    /// The generator applied to a pair of polynomials (the composite
    /// `self ∘ (f, g)`).
    fn apply_pair(&self, f: &BivarPoly, g: &BivarPoly) -> (BivarPoly, BivarPoly) {
        match self {
            Generator::Affine { m, v } => {
                let c = |e: &FieldElem| BivarPoly::constant(e.clone());
                (
                    &(&f.scale(&m[0][0]) + &g.scale(&m[0][1])) + &c(&v[0]),
                    &(&f.scale(&m[1][0]) + &g.scale(&m[1][1])) + &c(&v[1]),
                )
            }
            Generator::Elementary { a, b, p } => {
                // P(f) by Horner
                let mut pf = BivarPoly::zero(f.field());
                for c in p.coeffs().iter().rev() {
                    pf = &(&pf * f) + &BivarPoly::constant(c.clone());
                }
                (f.scale(a), &g.scale(b) + &pf)
            }
            Generator::Swap => (g.clone(), f.clone()),
        }
    }

    fn embed_into(&self, field: &Field) -> Generator {
        match self {
            Generator::Affine { m, v } => Generator::Affine {
                m: [
                    [field.embed(&m[0][0]), field.embed(&m[0][1])],
                    [field.embed(&m[1][0]), field.embed(&m[1][1])],
                ],
                v: [field.embed(&v[0]), field.embed(&v[1])],
            },
            Generator::Elementary { a, b, p } => Generator::Elementary {
                a: field.embed(a),
                b: field.embed(b),
                p: UniPoly::new(field, p.coeffs().iter().map(|c| field.embed(c)).collect()),
            },
            Generator::Swap => Generator::Swap,
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Generator::Affine { m, v } => json!({
                "kind": "affine",
                "m": [[elem_to_json(&m[0][0]), elem_to_json(&m[0][1])],
                      [elem_to_json(&m[1][0]), elem_to_json(&m[1][1])]],
                "v": [elem_to_json(&v[0]), elem_to_json(&v[1])],
            }),
            Generator::Elementary { a, b, p } => json!({
                "kind": "elementary",
                "a": elem_to_json(a),
                "b": elem_to_json(b),
                "P": unipoly_to_json(p),
            }),
            Generator::Swap => json!({"kind": "swap"}),
        }
    }

    /// Parses one generator record. Raw polynomial pairs are rejected: every
    /// automorphism must come with a generator word.
    pub fn from_json(field: &Field, v: &Value) -> Result<Generator> {
        let ctx = v.to_string();
        let kind = v
            .get("kind")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::parse(&ctx, "generator record needs a \"kind\""))?;
        let get = |key: &str| {
            v.get(key)
                .ok_or_else(|| Error::parse(&ctx, format!("missing \"{key}\"")))
        };
        match kind {
            "swap" => Ok(Generator::Swap),
            "elementary" => {
                let a = elem_from_json(field, get("a")?)?;
                let b = elem_from_json(field, get("b")?)?;
                let p = match v.get("P") {
                    Some(pv) => unipoly_from_json(field, pv)?,
                    None => UniPoly::zero(field),
                };
                elementary(a, b, p).map(|g| g.word[0].clone())
            }
            "affine" => {
                let mv = get("m")?;
                let rows = mv
                    .as_array()
                    .filter(|r| r.len() == 2)
                    .ok_or_else(|| Error::parse(&ctx, "\"m\" must be a 2x2 matrix"))?;
                let mut m: Vec<[FieldElem; 2]> = Vec::new();
                for r in rows {
                    let r = r
                        .as_array()
                        .filter(|r| r.len() == 2)
                        .ok_or_else(|| Error::parse(&ctx, "\"m\" must be a 2x2 matrix"))?;
                    m.push([elem_from_json(field, &r[0])?, elem_from_json(field, &r[1])?]);
                }
                let vv = match v.get("v") {
                    Some(vv) => {
                        let a = vv
                            .as_array()
                            .filter(|a| a.len() == 2)
                            .ok_or_else(|| Error::parse(&ctx, "\"v\" must be a pair"))?;
                        [elem_from_json(field, &a[0])?, elem_from_json(field, &a[1])?]
                    }
                    None => [field.zero(), field.zero()],
                };
                affine([m[0].clone(), m[1].clone()], vv).map(|g| g.word[0].clone())
            }
            "pair" | "map" => Err(Error::parse(
                &ctx,
                "raw polynomial pairs are not accepted; give a generator word",
            )),
            other => Err(Error::parse(&ctx, format!("unknown generator kind \"{other}\""))),
        }
    }
}

impl fmt::Debug for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_json())
    }
}

/// An automorphism of the affine plane given by a generator word.
#[derive(Clone)]
pub struct PlaneAut {
    field: Field,
    word: Vec<Generator>,
    expansion: OnceLock<(BivarPoly, BivarPoly)>,
}

impl PlaneAut {
    pub fn from_word(field: &Field, word: Vec<Generator>) -> PlaneAut {
        PlaneAut {
            field: field.clone(),
            word,
            expansion: OnceLock::new(),
        }
    }

    pub fn identity(field: &Field) -> PlaneAut {
        PlaneAut::from_word(field, Vec::new())
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn word(&self) -> &[Generator] {
        &self.word
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &PlaneAut) -> PlaneAut {
        assert!(self.field == other.field, "composing maps over different fields");
        let mut word = self.word.clone();
        word.extend(other.word.iter().cloned());
        PlaneAut::from_word(&self.field, word)
    }

    pub fn inverse(&self) -> PlaneAut {
        PlaneAut::from_word(&self.field, self.word.iter().rev().map(Generator::inverse).collect())
    }

    /// Integer power; negative exponents use the inverse word.
    pub fn pow(&self, n: i64) -> PlaneAut {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut word = Vec::with_capacity(base.word.len() * n.unsigned_abs() as usize);
        for _ in 0..n.unsigned_abs() {
            word.extend(base.word.iter().cloned());
        }
        PlaneAut::from_word(&self.field, word)
    }

    /// Evaluates generator by generator, last generator first.
    pub fn apply_point(&self, p: &Point) -> Point {
        let mut q = p.clone();
        for g in self.word.iter().rev() {
            q = g.apply_point(&q);
        }
        q
    }

    /// The polynomial pair (f, g) with `self(x, y) = (f(x, y), g(x, y))`.
    pub fn expand(&self) -> &(BivarPoly, BivarPoly) {
        self.expansion.get_or_init(|| {
            let mut f = BivarPoly::x(&self.field);
            let mut g = BivarPoly::y(&self.field);
            for gen in self.word.iter().rev() {
                (f, g) = gen.apply_pair(&f, &g);
            }
            (f, g)
        })
    }

    pub fn degree(&self) -> u32 {
        let (f, g) = self.expand();
        f.degree().max(g.degree())
    }

    /// F(f, g) where (f, g) is the expansion.
    pub fn pullback(&self, poly: &BivarPoly) -> BivarPoly {
        let (f, g) = self.expand();
        if poly.field() != &self.field {
            let k = poly.field();
            return poly.substitute(&f.embed_into(k), &g.embed_into(k));
        }
        poly.substitute(f, g)
    }

    /// Whether the pullback of `poly` is a unit multiple of it.
    pub fn stabilizes(&self, poly: &BivarPoly) -> bool {
        self.pullback(poly).is_associate(poly)
    }

    pub fn is_identity(&self) -> bool {
        let (f, g) = self.expand();
        *f == BivarPoly::x(&self.field) && *g == BivarPoly::y(&self.field)
    }

    /// Equality as maps (equality of expansions).
    pub fn same_map(&self, other: &PlaneAut) -> bool {
        self.expand() == other.expand()
    }

    pub fn is_involution(&self) -> bool {
        self.compose(self).is_identity()
    }

    /// The linear part when the map is linear: `M` with `self(v) = M v`.
    pub fn as_linear(&self) -> Option<[[FieldElem; 2]; 2]> {
        let (f, g) = self.expand();
        if f.degree() > 1 || g.degree() > 1 || !f.coeff(0, 0).is_zero() || !g.coeff(0, 0).is_zero() {
            return None;
        }
        Some([[f.coeff(1, 0), f.coeff(0, 1)], [g.coeff(1, 0), g.coeff(0, 1)]])
    }

    /// The same word read over an extension field.
    pub fn embed_into(&self, field: &Field) -> PlaneAut {
        if *field == self.field {
            return self.clone();
        }
        PlaneAut::from_word(field, self.word.iter().map(|g| g.embed_into(field)).collect())
    }

    pub fn word_to_json(&self) -> Value {
        Value::Array(self.word.iter().map(Generator::to_json).collect())
    }

    pub fn from_json(field: &Field, v: &Value) -> Result<PlaneAut> {
        let items = v
            .as_array()
            .ok_or_else(|| Error::parse(v.to_string(), "an automorphism is a list of generator records"))?;
        let word = items
            .iter()
            .map(|g| Generator::from_json(field, g))
            .collect::<Result<Vec<_>>>()?;
        Ok(PlaneAut::from_word(field, word))
    }

    /// Expanded pair as strings, e.g. `["2*x", "1/2*y"]`.
    pub fn expansion_json(&self) -> Value {
        let (f, g) = self.expand();
        json!([f.to_string(), g.to_string()])
    }
}

impl fmt::Display for PlaneAut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b) = self.expand();
        write!(f, "({a}, {b})")
    }
}

impl fmt::Debug for PlaneAut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

pub fn swap(field: &Field) -> PlaneAut {
    PlaneAut::from_word(field, vec![Generator::Swap])
}

pub fn affine(m: [[FieldElem; 2]; 2], v: [FieldElem; 2]) -> Result<PlaneAut> {
    let field = m[0][0].field().clone();
    let det = &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0];
    if det.is_zero() {
        return Err(Error::NotInvertible("affine matrix is singular".into()));
    }
    Ok(PlaneAut::from_word(&field, vec![Generator::Affine { m, v }]))
}

pub fn linear(m: [[FieldElem; 2]; 2]) -> Result<PlaneAut> {
    let z = m[0][0].field().zero();
    affine(m, [z.clone(), z])
}

/// (x, y) ↦ (a·x, b·y + P(x)).
pub fn elementary(a: FieldElem, b: FieldElem, p: UniPoly) -> Result<PlaneAut> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::NotInvertible("elementary map needs a, b != 0".into()));
    }
    let field = a.field().clone();
    Ok(PlaneAut::from_word(&field, vec![Generator::Elementary { a, b, p }]))
}

/// (x, y) ↦ (a·x, b·y).
pub fn diagonal(a: FieldElem, b: FieldElem) -> Result<PlaneAut> {
    let field = a.field().clone();
    elementary(a, b, UniPoly::zero(&field))
}

/// The Hénon map (x, y) ↦ (y, −δ·x + P(y)).
pub fn henon(delta: FieldElem, p: UniPoly) -> Result<PlaneAut> {
    let field = delta.field().clone();
    let e = elementary(field.one(), -delta, p)?;
    Ok(e.compose(&swap(&field)))
}

/// Expansion of `compose(φ, ψ)` applied to a polynomial, as a free function.
pub fn poly_pullback(poly: &BivarPoly, phi: &PlaneAut) -> BivarPoly {
    phi.pullback(poly)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse::{parse_poly, parse_univariate};

    fn q() -> Field {
        Field::rationals()
    }

    fn eje1_map(k: &Field) -> PlaneAut {
        elementary(k.int(-1), k.one(), parse_univariate(k, "x^2 - 2").unwrap()).unwrap()
    }

    #[test]
    fn composition_examples() {
        let k = q();
        assert!(swap(&k).compose(&swap(&k)).is_identity());
        let t = diagonal(k.int(2), k.rat(1, 2)).unwrap();
        assert_eq!(t.compose(&t).to_string(), "(4*x, 1/4*y)");
        let phi = eje1_map(&k);
        assert_eq!(phi.compose(&phi).to_string(), "(x, 2*x^2 + y - 4)");
    }

    #[test]
    fn inverse_examples() {
        let k = q();
        let p = parse_univariate(&k, "x^3 + 1").unwrap();
        let e = elementary(k.one(), k.int(3), p).unwrap();
        assert!(e.compose(&e.inverse()).is_identity());
        assert_eq!(e.inverse().to_string(), "(x, -1/3*x^3 + 1/3*y - 1/3)");
        let a = affine([[k.int(1), k.int(2)], [k.int(3), k.int(4)]], [k.int(5), k.int(-1)]).unwrap();
        assert!(a.inverse().compose(&a).is_identity());
    }

    #[test]
    fn point_evaluation() {
        let k = Field::quadratic(2).unwrap();
        let phi = eje1_map(&Field::rationals());
        let s = k.sqrt_generator().unwrap();
        let p = Point::new(s.clone(), k.zero());
        assert_eq!(phi.apply_point(&p), Point::new(-s, k.zero()));
        let k = q();
        let d = diagonal(k.int(4), k.int(8)).unwrap();
        assert_eq!(
            d.apply_point(&Point::new(k.one(), k.one())),
            Point::new(k.int(4), k.int(8))
        );
    }

    #[test]
    fn pullback_examples() {
        let k = q();
        let f = parse_poly(&k, "x^2 - 2").unwrap();
        assert_eq!(eje1_map(&k).pullback(&f), f);
        let h = henon(k.one(), parse_univariate(&k, "x^2").unwrap()).unwrap();
        assert_eq!(h.to_string(), "(y, y^2 - x)");
    }

    #[test]
    fn json_round_trip() {
        let k = q();
        let v = serde_json::json!([
            {"kind": "elementary", "a": "1", "b": "2", "P": [["0", "-2"], ["2", "1"]]},
            {"kind": "swap"},
            {"kind": "affine", "m": [["1", "1"], ["0", "1"]], "v": ["0", "3/2"]}
        ]);
        let phi = PlaneAut::from_json(&k, &v).unwrap();
        let back = PlaneAut::from_json(&k, &phi.word_to_json()).unwrap();
        assert!(phi.same_map(&back));
        assert!(PlaneAut::from_json(&k, &serde_json::json!([{"kind": "pair"}])).is_err());
        assert!(PlaneAut::from_json(&k, &serde_json::json!([{"kind": "elementary", "a": "0", "b": "1"}])).is_err());
    }
}

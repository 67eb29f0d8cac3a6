//! Sparse bivariate polynomials in x, y with graded-lexicographic order, x > y.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::field::{Field, FieldElem, FieldSpec};
use super::univariate::UniPoly;

/// The monomial x^i y^j.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub i: u32,
    pub j: u32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { i: 0, j: 0 };

    pub fn new(i: u32, j: u32) -> Monomial {
        Monomial { i, j }
    }

    pub fn degree(&self) -> u32 {
        self.i + self.j
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.i <= other.i && self.j <= other.j
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial::new(self.i + other.i, self.j + other.j)
    }

    /// All monomials of total degree at most `d`, in increasing grlex order.
    pub fn up_to_degree(d: u32) -> Vec<Monomial> {
        let mut out = Vec::new();
        for total in 0..=d {
            for i in 0..=total {
                out.push(Monomial::new(i, total - i));
            }
        }
        out
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.i.cmp(&other.i))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let part = |v: &str, e: u32| match e {
            0 => None,
            1 => Some(v.to_string()),
            e => Some(format!("{v}^{e}")),
        };
        let parts: Vec<String> = [part("x", self.i), part("y", self.j)].into_iter().flatten().collect();
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BivarPoly {
    field: Field,
    terms: BTreeMap<Monomial, FieldElem>,
}

impl BivarPoly {
    pub fn zero(field: &Field) -> BivarPoly {
        BivarPoly {
            field: field.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: FieldElem) -> BivarPoly {
        BivarPoly::term(c, 0, 0)
    }

    pub fn term(c: FieldElem, i: u32, j: u32) -> BivarPoly {
        let mut p = BivarPoly::zero(c.field());
        if !c.is_zero() {
            p.terms.insert(Monomial::new(i, j), c);
        }
        p
    }

    pub fn x(field: &Field) -> BivarPoly {
        BivarPoly::term(field.one(), 1, 0)
    }

    pub fn y(field: &Field) -> BivarPoly {
        BivarPoly::term(field.one(), 0, 1)
    }

    /// Builds a polynomial from (i, j, coefficient) triples; repeated
    /// monomials are summed.
    pub fn from_terms(field: &Field, terms: impl IntoIterator<Item = (u32, u32, FieldElem)>) -> BivarPoly {
        let mut p = BivarPoly::zero(field);
        for (i, j, c) in terms {
            p.add_term(Monomial::new(i, j), c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: FieldElem) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                let s = &*existing + &c;
                if s.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *existing = s;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; 0 for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn degree_in_x(&self) -> u32 {
        self.terms.keys().map(|m| m.i).max().unwrap_or(0)
    }

    pub fn degree_in_y(&self) -> u32 {
        self.terms.keys().map(|m| m.j).max().unwrap_or(0)
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &FieldElem)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, i: u32, j: u32) -> FieldElem {
        self.terms
            .get(&Monomial::new(i, j))
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn support(&self) -> Vec<Monomial> {
        self.terms.keys().copied().collect()
    }

    pub fn leading(&self) -> Option<(Monomial, &FieldElem)> {
        self.terms.iter().next_back().map(|(m, c)| (*m, c))
    }

    pub fn leading_monomial(&self) -> Option<Monomial> {
        self.leading().map(|(m, _)| m)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| *m == Monomial::ONE)
    }

    /// True when no monomial involves y.
    pub fn is_in_kx(&self) -> bool {
        self.terms.keys().all(|m| m.j == 0)
    }

    /// The polynomial as an element of k[x], if it is one.
    pub fn to_univariate_x(&self) -> Option<UniPoly> {
        if !self.is_in_kx() {
            return None;
        }
        let n = self.degree_in_x() as usize;
        let mut coeffs = vec![self.field.zero(); n + 1];
        for (m, c) in &self.terms {
            coeffs[m.i as usize] = c.clone();
        }
        Some(UniPoly::new(&self.field, coeffs))
    }

    pub fn scale(&self, c: &FieldElem) -> BivarPoly {
        if c.is_zero() {
            return BivarPoly::zero(&self.field);
        }
        BivarPoly {
            field: self.field.clone(),
            terms: self.terms.iter().map(|(m, a)| (*m, a * c)).collect(),
        }
    }

    /// Normalizes to leading coefficient 1; the zero polynomial is unchanged.
    pub fn monic(&self) -> BivarPoly {
        match self.leading() {
            None => self.clone(),
            Some((_, c)) if c.is_one() => self.clone(),
            Some((_, c)) => self.scale(&c.inv().expect("nonzero leading coefficient")),
        }
    }

    /// Whether `other = c * self` for a nonzero scalar c.
    pub fn is_associate(&self, other: &BivarPoly) -> bool {
        if self.is_zero() || other.is_zero() {
            return self.is_zero() && other.is_zero();
        }
        if self.terms.len() != other.terms.len() {
            return false;
        }
        self.monic() == other.monic()
    }

    pub fn pow(&self, e: u32) -> BivarPoly {
        let mut acc = BivarPoly::constant(self.field.one());
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Value at a point; coefficients are embedded when the point lives in
    /// an extension of the polynomial's field.
    pub fn eval(&self, x: &FieldElem, y: &FieldElem) -> FieldElem {
        let target = x.field().clone();
        let embed = target != self.field;
        let maxi = self.degree_in_x() as usize;
        let maxj = self.degree_in_y() as usize;
        let mut xp = Vec::with_capacity(maxi + 1);
        xp.push(target.one());
        for k in 0..maxi {
            xp.push(&xp[k] * x);
        }
        let mut yp = Vec::with_capacity(maxj + 1);
        yp.push(target.one());
        for k in 0..maxj {
            yp.push(&yp[k] * y);
        }
        let mut acc = target.zero();
        for (m, c) in &self.terms {
            let c = if embed { target.embed(c) } else { c.clone() };
            acc = acc + c * &xp[m.i as usize] * &yp[m.j as usize];
        }
        acc
    }

    /// F(f, g): substitutes `f` for x and `g` for y.
    pub fn substitute(&self, f: &BivarPoly, g: &BivarPoly) -> BivarPoly {
        let maxi = self.degree_in_x() as usize;
        let maxj = self.degree_in_y() as usize;
        let mut fp = vec![BivarPoly::constant(self.field.one())];
        for k in 0..maxi {
            fp.push(&fp[k] * f);
        }
        let mut gp = vec![BivarPoly::constant(self.field.one())];
        for k in 0..maxj {
            gp.push(&gp[k] * g);
        }
        let mut acc = BivarPoly::zero(&self.field);
        for (m, c) in &self.terms {
            let t = &fp[m.i as usize] * &gp[m.j as usize];
            for (tm, tc) in t.terms {
                acc.add_term(tm, &tc * c);
            }
        }
        acc
    }

    /// Exact quotient `self / divisor` when `divisor` divides `self`.
    ///
    /// Single-divisor division with grlex leading-term elimination: if the
    /// divisor divides exactly, every intermediate remainder is a multiple of
    /// it, so failure to cancel a leading term proves non-divisibility.
    pub fn div_exact(&self, divisor: &BivarPoly) -> Option<BivarPoly> {
        let (lm, lc) = divisor.leading()?;
        let lc_inv = lc.inv().expect("nonzero leading coefficient");
        let mut rem = self.clone();
        let mut quot = BivarPoly::zero(&self.field);
        while let Some((m, c)) = rem.leading() {
            if !lm.divides(&m) {
                return None;
            }
            let qm = Monomial::new(m.i - lm.i, m.j - lm.j);
            let qc = c * &lc_inv;
            let t = BivarPoly::term(qc, qm.i, qm.j);
            rem = &rem - &(&t * divisor);
            quot = &quot + &t;
        }
        Some(quot)
    }

    /// Applies a coefficient map into `target` (e.g. embedding into an
    /// extension or Galois conjugation).
    pub fn map_coeffs(&self, target: &Field, f: impl Fn(&FieldElem) -> FieldElem) -> BivarPoly {
        let mut p = BivarPoly::zero(target);
        for (m, c) in &self.terms {
            p.add_term(*m, f(c));
        }
        p
    }

    /// The same polynomial viewed over an extension of its field.
    pub fn embed_into(&self, target: &Field) -> BivarPoly {
        self.map_coeffs(target, |c| target.embed(c))
    }

    /// Coefficientwise Galois conjugate.
    pub fn conjugate(&self) -> BivarPoly {
        self.map_coeffs(&self.field, FieldElem::conjugate)
    }

    /// True when every coefficient lies in the base field.
    pub fn is_defined_over_base(&self) -> bool {
        self.terms.values().all(FieldElem::in_base)
    }

    /// Descends a polynomial with base-field coefficients to the base field.
    pub fn restrict_to_base(&self) -> Option<BivarPoly> {
        if !self.is_defined_over_base() {
            return None;
        }
        let base = self.field.base();
        Some(self.map_coeffs(&base, |c| c.base_coords()[0].clone()))
    }

    pub fn bit_size(&self) -> u64 {
        self.terms.values().map(FieldElem::bit_size).sum()
    }

    pub fn max_coeff_bits(&self) -> u64 {
        self.terms.values().map(FieldElem::bit_size).max().unwrap_or(0)
    }

    fn add_ref(&self, o: &BivarPoly) -> BivarPoly {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(*m, c.clone());
        }
        out
    }

    fn neg_ref(&self) -> BivarPoly {
        BivarPoly {
            field: self.field.clone(),
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }

    fn sub_ref(&self, o: &BivarPoly) -> BivarPoly {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(*m, -c);
        }
        out
    }

    /// Integer numerators over a common denominator, for ℚ coefficients.
    fn integer_form(&self) -> Option<(Vec<(Monomial, BigInt)>, BigInt)> {
        let rats: Vec<(Monomial, BigRational)> = self
            .terms
            .iter()
            .map(|(m, c)| c.to_rational().map(|r| (*m, r)))
            .collect::<Option<_>>()?;
        let den = rats.iter().fold(BigInt::one(), |l, (_, r)| l.lcm(r.denom()));
        let ints = rats
            .into_iter()
            .map(|(m, r)| (m, r.numer() * (&den / r.denom())))
            .collect();
        Some((ints, den))
    }

    fn mul_rational(&self, o: &BivarPoly) -> Option<BivarPoly> {
        if !matches!(self.field.spec(), FieldSpec::Rationals) {
            return None;
        }
        let (a, da) = self.integer_form()?;
        let (b, db) = o.integer_form()?;
        let mut acc: HashMap<Monomial, BigInt> = HashMap::with_capacity(a.len() * b.len());
        for (ma, ca) in &a {
            for (mb, cb) in &b {
                *acc.entry(ma.mul(mb)).or_insert_with(BigInt::zero) += ca * cb;
            }
        }
        let den = da * db;
        Some(BivarPoly {
            field: self.field.clone(),
            terms: acc
                .into_iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|(m, c)| {
                    (
                        m,
                        self.field
                            .from_rational(&BigRational::new(c, den.clone()))
                            .expect("rational field"),
                    )
                })
                .collect(),
        })
    }

    fn mul_ref(&self, o: &BivarPoly) -> BivarPoly {
        assert!(self.field == o.field, "field mismatch in polynomial product");
        if let Some(p) = self.mul_rational(o) {
            return p;
        }
        // Accumulate into a hash map first: much cheaper than BTreeMap updates
        // for the large products that iterated maps produce.
        let mut acc: HashMap<Monomial, FieldElem> = HashMap::with_capacity(self.terms.len() * o.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                let m = ma.mul(mb);
                let prod = ca * cb;
                match acc.get_mut(&m) {
                    Some(e) => *e = &*e + &prod,
                    None => {
                        acc.insert(m, prod);
                    }
                }
            }
        }
        BivarPoly {
            field: self.field.clone(),
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }
}

impl fmt::Debug for BivarPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Renders highest terms first, e.g. `x^2*y - 2*x + 1/2`. Coefficients that
/// are not plain numbers are parenthesized.
impl fmt::Display for BivarPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            let s = c.to_string();
            let simple = !s[1..].contains(['+', '-']) && !s.starts_with('[');
            let (neg, body) = if simple && s.starts_with('-') {
                (true, s[1..].to_string())
            } else {
                (false, s)
            };
            let coeff = if simple { body } else { format!("({body})") };
            let term = if *m == Monomial::ONE {
                coeff
            } else if coeff == "1" {
                m.to_string()
            } else {
                format!("{coeff}*{m}")
            };
            match (first, neg) {
                (true, false) => write!(f, "{term}")?,
                (true, true) => write!(f, "-{term}")?,
                (false, false) => write!(f, " + {term}")?,
                (false, true) => write!(f, " - {term}")?,
            }
            first = false;
        }
        Ok(())
    }
}

macro_rules! forward_poly_binop {
    ($tr:ident, $m:ident, $inner:ident) => {
        impl $tr<&BivarPoly> for &BivarPoly {
            type Output = BivarPoly;
            fn $m(self, rhs: &BivarPoly) -> BivarPoly {
                self.$inner(rhs)
            }
        }
        impl $tr<BivarPoly> for BivarPoly {
            type Output = BivarPoly;
            fn $m(self, rhs: BivarPoly) -> BivarPoly {
                (&self).$inner(&rhs)
            }
        }
    };
}

forward_poly_binop!(Add, add, add_ref);
forward_poly_binop!(Sub, sub, sub_ref);
forward_poly_binop!(Mul, mul, mul_ref);

impl Neg for &BivarPoly {
    type Output = BivarPoly;
    fn neg(self) -> BivarPoly {
        self.neg_ref()
    }
}

impl Neg for BivarPoly {
    type Output = BivarPoly;
    fn neg(self) -> BivarPoly {
        self.neg_ref()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::rationals()
    }

    #[test]
    fn grlex_order() {
        let mut ms = Monomial::up_to_degree(2);
        ms.reverse();
        let names: Vec<String> = ms.iter().map(|m| m.to_string()).collect();
        assert_eq!(names, ["x^2", "x*y", "y^2", "x", "y", "1"]);
    }

    #[test]
    fn display_and_leading() {
        let k = q();
        let p = BivarPoly::from_terms(&k, [(2, 1, k.int(1)), (1, 0, k.int(-2)), (0, 0, k.rat(1, 2))]);
        assert_eq!(p.to_string(), "x^2*y - 2*x + 1/2");
        assert_eq!(p.leading_monomial(), Some(Monomial::new(2, 1)));
    }

    #[test]
    fn exact_division() {
        let k = q();
        let x = BivarPoly::x(&k);
        let y = BivarPoly::y(&k);
        let one = BivarPoly::constant(k.one());
        let a = &x - &one;
        let b = &(&x * &x) - &one;
        assert_eq!(b.div_exact(&a).unwrap(), &x + &one);
        let xy1 = &(&x * &y) - &one;
        assert_eq!(xy1.div_exact(&xy1).unwrap(), one);
        assert!(x.div_exact(&y).is_none());
    }

    #[test]
    fn substitution() {
        let k = q();
        let x = BivarPoly::x(&k);
        let y = BivarPoly::y(&k);
        let f = &(&x * &y) - &BivarPoly::constant(k.one());
        let g = f.substitute(&x.scale(&k.int(2)), &y.scale(&k.rat(1, 2)));
        assert_eq!(g, f);
    }

    #[test]
    fn associates() {
        let k = q();
        let x = BivarPoly::x(&k);
        let y = BivarPoly::y(&k);
        let f = &x - &y;
        assert!(f.is_associate(&f.scale(&k.int(-3))));
        assert!(!f.is_associate(&(&x + &y)));
    }
}

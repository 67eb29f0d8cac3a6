//! Exact scalars: ℚ, one quadratic extension ℚ(√d), prime fields 𝔽_p and
//! one simple extension 𝔽_p[t]/(m(t)).
//!
//! Every element carries a handle to its field so arithmetic can be written
//! with ordinary operators. Mixing elements of different fields is a logic
//! error and panics.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Upper bound on the order of finite fields, so that brute-force
/// enumeration of elements stays cheap.
pub const MAX_FINITE_ORDER: u64 = 1 << 20;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FieldSpec {
    Rationals,
    /// ℚ(√d) with `d` squarefree, `d ∉ {0, 1}`.
    QuadExt {
        d: i64,
    },
    PrimeField {
        p: u64,
    },
    /// 𝔽_p[t]/(modulus); the modulus is monic, irreducible, stored low to high.
    FiniteExt {
        p: u64,
        modulus: Vec<u64>,
    },
}

/// Shared handle to a validated [`FieldSpec`].
#[derive(Clone)]
pub struct Field(Arc<FieldSpec>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || *self.0 == *other.0
    }
}

impl Eq for Field {}

impl Hash for Field {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.hash(state)
    }
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &*self.0 {
            FieldSpec::Rationals => write!(f, "Q"),
            FieldSpec::QuadExt { d } => write!(f, "Q(sqrt({d}))"),
            FieldSpec::PrimeField { p } => write!(f, "F_{p}"),
            FieldSpec::FiniteExt { p, modulus } => {
                write!(f, "F_{p}[t]/(")?;
                let m = modulus
                    .iter()
                    .enumerate()
                    .rev()
                    .filter(|(_, c)| **c != 0)
                    .map(|(i, c)| match (i, *c) {
                        (0, c) => c.to_string(),
                        (1, 1) => "t".to_string(),
                        (1, c) => format!("{c}*t"),
                        (i, 1) => format!("t^{i}"),
                        (i, c) => format!("{c}*t^{i}"),
                    })
                    .collect::<Vec<_>>()
                    .join("+");
                write!(f, "{m})")
            }
        }
    }
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut i = 2u64;
    while i * i <= n {
        if n.is_multiple_of(i) {
            return false;
        }
        i += 1;
    }
    true
}

fn is_squarefree(n: u64) -> bool {
    let mut i = 2u64;
    while i * i <= n {
        if n.is_multiple_of(i * i) {
            return false;
        }
        i += 1;
    }
    true
}

// Dense polynomials over F_p (low to high) used for the extension modulus.
fn fp_trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn fp_rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    fp_trim(&mut r);
    let dm = m.len() - 1;
    let lead_inv = fp_pow(m[dm], p - 2, p);
    while r.len() > dm {
        let shift = r.len() - 1 - dm;
        let c = r[r.len() - 1] * lead_inv % p;
        for (i, mc) in m.iter().enumerate() {
            let idx = shift + i;
            r[idx] = (r[idx] + p - c * mc % p) % p;
        }
        fp_trim(&mut r);
    }
    r
}

fn fp_pow(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

/// Irreducibility of a monic polynomial over F_p by trial division with every
/// monic polynomial of degree at most half.
fn fp_is_irreducible(m: &[u64], p: u64) -> bool {
    let k = m.len() - 1;
    for d in 1..=k / 2 {
        let count = p.pow(d as u32);
        for idx in 0..count {
            let mut cand = Vec::with_capacity(d + 1);
            let mut n = idx;
            for _ in 0..d {
                cand.push(n % p);
                n /= p;
            }
            cand.push(1);
            if fp_rem(m, &cand, p).is_empty() {
                return false;
            }
        }
    }
    true
}

impl Field {
    pub fn rationals() -> Field {
        Field(Arc::new(FieldSpec::Rationals))
    }

    pub fn quadratic(d: i64) -> Result<Field> {
        if d == 0 || d == 1 || !is_squarefree(d.unsigned_abs()) {
            return Err(Error::InvalidField(format!(
                "sqrt({d}): d must be squarefree and not 0 or 1"
            )));
        }
        Ok(Field(Arc::new(FieldSpec::QuadExt { d })))
    }

    pub fn prime(p: u64) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        if p >= 1 << 31 {
            return Err(Error::InvalidField(format!("prime {p} too large")));
        }
        Ok(Field(Arc::new(FieldSpec::PrimeField { p })))
    }

    /// 𝔽_p[t]/(modulus) with `modulus` given low to high.
    pub fn extension(p: u64, modulus: Vec<u64>) -> Result<Field> {
        if !is_prime(p) || p >= 1 << 31 {
            return Err(Error::InvalidField(format!("{p} is not a usable prime")));
        }
        let mut m = modulus;
        fp_trim(&mut m);
        if m.len() < 3 {
            return Err(Error::InvalidField("modulus must have degree >= 2".into()));
        }
        if m.iter().any(|c| *c >= p) {
            return Err(Error::InvalidField("modulus coefficients must lie in [0, p)".into()));
        }
        if *m.last().unwrap() != 1 {
            return Err(Error::InvalidField("modulus must be monic".into()));
        }
        let k = (m.len() - 1) as u32;
        match p.checked_pow(k) {
            Some(q) if q <= MAX_FINITE_ORDER => {}
            _ => return Err(Error::InvalidField(format!("field of order {p}^{k} too large"))),
        }
        if !fp_is_irreducible(&m, p) {
            return Err(Error::InvalidField("modulus is reducible".into()));
        }
        Ok(Field(Arc::new(FieldSpec::FiniteExt { p, modulus: m })))
    }

    /// The finite field of order `q`; for prime powers the modulus is the
    /// first monic irreducible polynomial in counting order.
    pub fn finite(q: u64) -> Result<Field> {
        if is_prime(q) {
            return Field::prime(q);
        }
        let p = (2..=q)
            .find(|d| q.is_multiple_of(*d))
            .ok_or_else(|| Error::InvalidField(format!("{q} is not a prime power")))?;
        let mut k = 0u32;
        let mut r = q;
        while r.is_multiple_of(p) {
            r /= p;
            k += 1;
        }
        if r != 1 {
            return Err(Error::InvalidField(format!("{q} is not a prime power")));
        }
        let k = k as usize;
        for idx in 0..p.pow(k as u32) {
            let mut m = Vec::with_capacity(k + 1);
            let mut n = idx;
            for _ in 0..k {
                m.push(n % p);
                n /= p;
            }
            m.push(1);
            if fp_is_irreducible(&m, p) {
                return Field::extension(p, m);
            }
        }
        Err(Error::InvalidField(format!("no irreducible of degree {k} over F_{p}")))
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.0
    }

    pub fn characteristic(&self) -> u64 {
        match &*self.0 {
            FieldSpec::Rationals | FieldSpec::QuadExt { .. } => 0,
            FieldSpec::PrimeField { p } | FieldSpec::FiniteExt { p, .. } => *p,
        }
    }

    /// Number of elements for finite fields.
    pub fn order(&self) -> Option<u64> {
        match &*self.0 {
            FieldSpec::PrimeField { p } => Some(*p),
            FieldSpec::FiniteExt { p, modulus } => Some(p.pow((modulus.len() - 1) as u32)),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.order().is_some()
    }

    /// The prime field (or ℚ) underneath this field.
    pub fn base(&self) -> Field {
        match &*self.0 {
            FieldSpec::Rationals | FieldSpec::PrimeField { .. } => self.clone(),
            FieldSpec::QuadExt { .. } => Field::rationals(),
            FieldSpec::FiniteExt { p, .. } => Field(Arc::new(FieldSpec::PrimeField { p: *p })),
        }
    }

    /// Degree over [`Field::base`].
    pub fn base_degree(&self) -> usize {
        match &*self.0 {
            FieldSpec::Rationals | FieldSpec::PrimeField { .. } => 1,
            FieldSpec::QuadExt { .. } => 2,
            FieldSpec::FiniteExt { modulus, .. } => modulus.len() - 1,
        }
    }

    pub fn is_extension(&self) -> bool {
        self.base_degree() > 1
    }

    fn elem(&self, repr: Repr) -> FieldElem {
        FieldElem {
            field: self.clone(),
            repr,
        }
    }

    pub fn zero(&self) -> FieldElem {
        self.int(0)
    }

    pub fn one(&self) -> FieldElem {
        self.int(1)
    }

    pub fn int(&self, n: i64) -> FieldElem {
        self.from_bigint(&BigInt::from(n))
    }

    pub fn from_bigint(&self, n: &BigInt) -> FieldElem {
        match &*self.0 {
            FieldSpec::Rationals => self.elem(Repr::Rat(BigRational::from_integer(n.clone()))),
            FieldSpec::QuadExt { .. } => {
                self.elem(Repr::Quad(BigRational::from_integer(n.clone()), BigRational::zero()))
            }
            FieldSpec::PrimeField { p } => self.elem(Repr::Prime(reduce_bigint(n, *p))),
            FieldSpec::FiniteExt { p, modulus } => {
                let mut v = vec![0; modulus.len() - 1];
                v[0] = reduce_bigint(n, *p);
                self.elem(Repr::Ext(v))
            }
        }
    }

    /// Image of a rational number; fails in characteristic `p` when `p`
    /// divides the denominator.
    pub fn from_rational(&self, r: &BigRational) -> Result<FieldElem> {
        let n = self.from_bigint(r.numer());
        let d = self.from_bigint(r.denom());
        n.checked_div(&d)
    }

    pub fn rat(&self, n: i64, d: i64) -> FieldElem {
        self.from_rational(&BigRational::new(BigInt::from(n), BigInt::from(d)))
            .expect("denominator invertible in field")
    }

    /// √d for quadratic fields.
    pub fn sqrt_generator(&self) -> Option<FieldElem> {
        match &*self.0 {
            FieldSpec::QuadExt { .. } => Some(self.elem(Repr::Quad(BigRational::zero(), BigRational::one()))),
            _ => None,
        }
    }

    /// The class of `t` for extension fields of 𝔽_p.
    pub fn ext_generator(&self) -> Option<FieldElem> {
        match &*self.0 {
            FieldSpec::FiniteExt { modulus, .. } => {
                let mut v = vec![0; modulus.len() - 1];
                v[1] = 1;
                Some(self.elem(Repr::Ext(v)))
            }
            _ => None,
        }
    }

    /// Element with the given coordinates over [`Field::base`] (in the basis
    /// 1, √d or 1, t, t², ...).
    pub fn from_base_coords(&self, coords: &[FieldElem]) -> Result<FieldElem> {
        if coords.len() != self.base_degree() {
            return Err(Error::InvalidArgument(format!(
                "expected {} base coordinates, got {}",
                self.base_degree(),
                coords.len()
            )));
        }
        let base = self.base();
        if coords.iter().any(|c| c.field != base) {
            return Err(Error::FieldMismatch("coordinates must lie in the base field".into()));
        }
        Ok(match &*self.0 {
            FieldSpec::Rationals | FieldSpec::PrimeField { .. } => coords[0].clone(),
            FieldSpec::QuadExt { .. } => self.elem(Repr::Quad(coords[0].as_rational(), coords[1].as_rational())),
            FieldSpec::FiniteExt { .. } => self.elem(Repr::Ext(coords.iter().map(|c| c.as_residue()).collect())),
        })
    }

    /// Embeds an element of the base field.
    pub fn embed(&self, x: &FieldElem) -> FieldElem {
        if x.field == *self {
            return x.clone();
        }
        assert!(x.field == self.base(), "embed: {} is not the base of {}", x.field, self);
        let mut coords = vec![x.clone()];
        coords.resize(self.base_degree(), x.field.zero());
        self.from_base_coords(&coords).expect("base embedding")
    }

    /// All elements of a finite field, in counting order.
    pub fn elements(&self) -> Vec<FieldElem> {
        match &*self.0 {
            FieldSpec::PrimeField { p } => (0..*p).map(|r| self.elem(Repr::Prime(r))).collect(),
            FieldSpec::FiniteExt { p, modulus } => {
                let k = modulus.len() - 1;
                let q = p.pow(k as u32);
                (0..q)
                    .map(|mut n| {
                        let v = (0..k)
                            .map(|_| {
                                let c = n % p;
                                n /= p;
                                c
                            })
                            .collect();
                        self.elem(Repr::Ext(v))
                    })
                    .collect()
            }
            _ => panic!("elements() called on infinite field {self}"),
        }
    }

    pub fn nonzero_elements(&self) -> Vec<FieldElem> {
        self.elements().into_iter().filter(|e| !e.is_zero()).collect()
    }
}

fn reduce_bigint(n: &BigInt, p: u64) -> u64 {
    let r = n.mod_floor(&BigInt::from(p));
    r.to_u64().expect("residue fits")
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Repr {
    Rat(BigRational),
    /// a + b√d
    Quad(BigRational, BigRational),
    Prime(u64),
    /// coefficients of 1, t, ..., t^{k-1}
    Ext(Vec<u64>),
}

/// An exact element of one of the supported fields.
#[derive(Clone)]
pub struct FieldElem {
    field: Field,
    repr: Repr,
}

impl PartialEq for FieldElem {
    fn eq(&self, other: &Self) -> bool {
        self.repr == other.repr && self.field == other.field
    }
}

impl Eq for FieldElem {}

impl Hash for FieldElem {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.repr.hash(state)
    }
}

impl PartialOrd for FieldElem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A deterministic total order (numeric on ℚ, lexicographic on coordinates
/// elsewhere). It is not compatible with the field operations.
impl Ord for FieldElem {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.repr, &other.repr) {
            (Repr::Rat(a), Repr::Rat(b)) => a.cmp(b),
            (Repr::Quad(a, b), Repr::Quad(c, d)) => a.cmp(c).then_with(|| b.cmp(d)),
            (Repr::Prime(a), Repr::Prime(b)) => a.cmp(b),
            (Repr::Ext(a), Repr::Ext(b)) => a.iter().rev().cmp(b.iter().rev()),
            _ => panic!("comparing elements of different fields"),
        }
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

fn fmt_rat(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Rat(r) => write!(f, "{}", fmt_rat(r)),
            Repr::Quad(a, b) => {
                if b.is_zero() {
                    return write!(f, "{}", fmt_rat(a));
                }
                let bpart = if b.is_one() {
                    "s".to_string()
                } else if (-b).is_one() {
                    "-s".to_string()
                } else {
                    format!("{}*s", fmt_rat(b))
                };
                if a.is_zero() {
                    write!(f, "{bpart}")
                } else if bpart.starts_with('-') {
                    write!(f, "{}{}", fmt_rat(a), bpart)
                } else {
                    write!(f, "{}+{}", fmt_rat(a), bpart)
                }
            }
            Repr::Prime(r) => write!(f, "{r}"),
            Repr::Ext(v) => {
                let parts: Vec<String> = v.iter().map(|c| c.to_string()).collect();
                write!(f, "[{}]", parts.join(","))
            }
        }
    }
}

impl FieldElem {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        match &self.repr {
            Repr::Rat(r) => r.is_zero(),
            Repr::Quad(a, b) => a.is_zero() && b.is_zero(),
            Repr::Prime(r) => *r == 0,
            Repr::Ext(v) => v.iter().all(|c| *c == 0),
        }
    }

    pub fn is_one(&self) -> bool {
        *self == self.field.one()
    }

    /// Coordinates over the base field.
    pub fn base_coords(&self) -> Vec<FieldElem> {
        let base = self.field.base();
        match &self.repr {
            Repr::Rat(_) | Repr::Prime(_) => vec![self.clone()],
            Repr::Quad(a, b) => vec![base.elem(Repr::Rat(a.clone())), base.elem(Repr::Rat(b.clone()))],
            Repr::Ext(v) => v.iter().map(|c| base.elem(Repr::Prime(*c))).collect(),
        }
    }

    /// True when the element lies in the base field.
    pub fn in_base(&self) -> bool {
        self.base_coords().iter().skip(1).all(|c| c.is_zero())
    }

    /// The underlying rational for ℚ elements and quadratic elements with no
    /// √d part.
    pub fn to_rational(&self) -> Option<BigRational> {
        match &self.repr {
            Repr::Rat(r) => Some(r.clone()),
            Repr::Quad(a, b) if b.is_zero() => Some(a.clone()),
            _ => None,
        }
    }

    fn as_rational(&self) -> BigRational {
        self.to_rational().expect("rational element")
    }

    /// The residue in [0, p) for prime field elements.
    pub fn to_residue(&self) -> Option<u64> {
        match &self.repr {
            Repr::Prime(r) => Some(*r),
            Repr::Ext(v) if v.iter().skip(1).all(|c| *c == 0) => Some(v[0]),
            _ => None,
        }
    }

    fn as_residue(&self) -> u64 {
        self.to_residue().expect("prime field element")
    }

    /// Size of the exact representation in bits; used for growth caps.
    pub fn bit_size(&self) -> u64 {
        fn rbits(r: &BigRational) -> u64 {
            r.numer().bits() + r.denom().bits()
        }
        match &self.repr {
            Repr::Rat(r) => rbits(r),
            Repr::Quad(a, b) => rbits(a) + rbits(b),
            Repr::Prime(p) => 64 - p.leading_zeros() as u64,
            Repr::Ext(v) => v.iter().map(|c| 64 - c.leading_zeros() as u64).sum(),
        }
    }

    fn check_same(&self, other: &FieldElem) {
        assert!(
            self.field == other.field,
            "field mismatch: {} vs {}",
            self.field,
            other.field
        );
    }

    fn add_ref(&self, o: &FieldElem) -> FieldElem {
        self.check_same(o);
        let repr = match (&self.repr, &o.repr) {
            (Repr::Rat(a), Repr::Rat(b)) => Repr::Rat(a + b),
            (Repr::Quad(a, b), Repr::Quad(c, d)) => Repr::Quad(a + c, b + d),
            (Repr::Prime(a), Repr::Prime(b)) => {
                let p = self.field.characteristic();
                Repr::Prime((a + b) % p)
            }
            (Repr::Ext(a), Repr::Ext(b)) => {
                let p = self.field.characteristic();
                Repr::Ext(a.iter().zip(b).map(|(x, y)| (x + y) % p).collect())
            }
            _ => unreachable!(),
        };
        self.field.elem(repr)
    }

    fn neg_ref(&self) -> FieldElem {
        let repr = match &self.repr {
            Repr::Rat(a) => Repr::Rat(-a),
            Repr::Quad(a, b) => Repr::Quad(-a, -b),
            Repr::Prime(a) => {
                let p = self.field.characteristic();
                Repr::Prime((p - a) % p)
            }
            Repr::Ext(v) => {
                let p = self.field.characteristic();
                Repr::Ext(v.iter().map(|c| (p - c) % p).collect())
            }
        };
        self.field.elem(repr)
    }

    fn sub_ref(&self, o: &FieldElem) -> FieldElem {
        self.add_ref(&o.neg_ref())
    }

    fn mul_ref(&self, o: &FieldElem) -> FieldElem {
        self.check_same(o);
        let repr = match (&self.repr, &o.repr) {
            (Repr::Rat(a), Repr::Rat(b)) => Repr::Rat(a * b),
            (Repr::Quad(a, b), Repr::Quad(c, e)) => {
                let d = match &*self.field.0 {
                    FieldSpec::QuadExt { d } => BigRational::from_integer(BigInt::from(*d)),
                    _ => unreachable!(),
                };
                Repr::Quad(a * c + b * e * d, a * e + b * c)
            }
            (Repr::Prime(a), Repr::Prime(b)) => {
                let p = self.field.characteristic();
                Repr::Prime(a * b % p)
            }
            (Repr::Ext(a), Repr::Ext(b)) => {
                let (p, m) = match &*self.field.0 {
                    FieldSpec::FiniteExt { p, modulus } => (*p, modulus),
                    _ => unreachable!(),
                };
                let k = a.len();
                let mut prod = vec![0u64; 2 * k - 1];
                for (i, x) in a.iter().enumerate() {
                    if *x == 0 {
                        continue;
                    }
                    for (j, y) in b.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                let mut r = fp_rem(&prod, m, p);
                r.resize(k, 0);
                Repr::Ext(r)
            }
            _ => unreachable!(),
        };
        self.field.elem(repr)
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<FieldElem> {
        if self.is_zero() {
            return None;
        }
        let repr = match &self.repr {
            Repr::Rat(a) => Repr::Rat(a.recip()),
            Repr::Quad(a, b) => {
                let d = match &*self.field.0 {
                    FieldSpec::QuadExt { d } => BigRational::from_integer(BigInt::from(*d)),
                    _ => unreachable!(),
                };
                let norm = a * a - b * b * d;
                Repr::Quad(a / &norm, -(b / &norm))
            }
            Repr::Prime(a) => {
                let p = self.field.characteristic();
                Repr::Prime(fp_pow(*a, p - 2, p))
            }
            Repr::Ext(_) => {
                let q = self.field.order().unwrap();
                return Some(self.pow(q - 2));
            }
        };
        Some(self.field.elem(repr))
    }

    pub fn checked_div(&self, o: &FieldElem) -> Result<FieldElem> {
        self.check_same(o);
        let inv = o.inv().ok_or(Error::DivisionByZero)?;
        Ok(self.mul_ref(&inv))
    }

    pub fn pow(&self, mut e: u64) -> FieldElem {
        let mut base = self.clone();
        let mut acc = self.field.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_ref(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_ref(&base);
            }
        }
        acc
    }

    /// Integer power; negative exponents invert (panics on zero).
    pub fn powi(&self, e: i64) -> FieldElem {
        if e >= 0 {
            self.pow(e as u64)
        } else {
            self.inv().expect("negative power of zero").pow(e.unsigned_abs())
        }
    }

    /// The generator of Gal(K/base): a + b√d ↦ a − b√d, or Frobenius x ↦ x^p.
    pub fn conjugate(&self) -> FieldElem {
        match &self.repr {
            Repr::Quad(a, b) => self.field.elem(Repr::Quad(a.clone(), -b)),
            Repr::Ext(_) => self.pow(self.field.characteristic()),
            _ => self.clone(),
        }
    }

    /// Orbit of the element under the Galois group of its field over the base.
    pub fn galois_conjugates(&self) -> Vec<FieldElem> {
        let mut out = vec![self.clone()];
        let mut cur = self.conjugate();
        while cur != *self {
            out.push(cur.clone());
            cur = cur.conjugate();
        }
        out
    }

    /// Norm down to the base field (product of conjugates, with multiplicity
    /// over the full Galois group).
    pub fn norm(&self) -> FieldElem {
        let mut acc = self.clone();
        let mut cur = self.conjugate();
        for _ in 1..self.field.base_degree() {
            acc = acc.mul_ref(&cur);
            cur = cur.conjugate();
        }
        acc
    }

    pub fn trace(&self) -> FieldElem {
        let mut acc = self.clone();
        let mut cur = self.conjugate();
        for _ in 1..self.field.base_degree() {
            acc = acc.add_ref(&cur);
            cur = cur.conjugate();
        }
        acc
    }
}

fn rational_is_square(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    if &(&n * &n) == r.numer() && &(&d * &d) == r.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

/// Whether `x` is a square in its own field.
pub fn is_square(x: &FieldElem) -> bool {
    match &x.repr {
        Repr::Rat(r) => rational_is_square(r).is_some(),
        Repr::Quad(a, b) => {
            let d = match x.field.spec() {
                FieldSpec::QuadExt { d } => BigRational::from_integer(BigInt::from(*d)),
                _ => unreachable!(),
            };
            if b.is_zero() {
                // a = u² or a = d·v²
                return rational_is_square(a).is_some() || rational_is_square(&(a / &d)).is_some();
            }
            // (u + v√d)² = a + b√d forces u² = (a ± n)/2 with n² = a² − d b²
            let Some(n) = rational_is_square(&(a * a - b * b * &d)) else {
                return false;
            };
            let two = BigRational::from_integer(BigInt::from(2));
            for cand in [(a + &n) / &two, (a - &n) / &two] {
                if let Some(u) = rational_is_square(&cand) {
                    if u.is_zero() {
                        continue;
                    }
                    let v = b / (&two * &u);
                    if &u * &u + &v * &v * &d == *a {
                        return true;
                    }
                }
            }
            false
        }
        Repr::Prime(_) | Repr::Ext(_) => {
            if x.is_zero() || x.field.characteristic() == 2 {
                return true;
            }
            let q = x.field.order().unwrap();
            x.pow((q - 1) / 2).is_one()
        }
    }
}

/// Whether T² + μT + 1 has a root in the field of μ.
pub fn quadratic_has_root(mu: &FieldElem) -> bool {
    let field = mu.field();
    if field.is_finite() {
        let one = field.one();
        return field.elements().iter().any(|t| (t * t + mu * t + &one).is_zero());
    }
    let disc = mu * mu - field.int(4);
    is_square(&disc)
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident, $inner:ident) => {
        impl $tr<&FieldElem> for &FieldElem {
            type Output = FieldElem;
            fn $m(self, rhs: &FieldElem) -> FieldElem {
                self.$inner(rhs)
            }
        }
        impl $tr<FieldElem> for FieldElem {
            type Output = FieldElem;
            fn $m(self, rhs: FieldElem) -> FieldElem {
                (&self).$inner(&rhs)
            }
        }
        impl $tr<&FieldElem> for FieldElem {
            type Output = FieldElem;
            fn $m(self, rhs: &FieldElem) -> FieldElem {
                (&self).$inner(rhs)
            }
        }
        impl $tr<FieldElem> for &FieldElem {
            type Output = FieldElem;
            fn $m(self, rhs: FieldElem) -> FieldElem {
                self.$inner(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, add_ref);
forward_binop!(Sub, sub, sub_ref);
forward_binop!(Mul, mul, mul_ref);

impl FieldElem {
    fn div_ref(&self, o: &FieldElem) -> FieldElem {
        self.checked_div(o).expect("division by zero")
    }
}

forward_binop!(Div, div, div_ref);

impl Neg for FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        self.neg_ref()
    }
}

impl Neg for &FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        self.neg_ref()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_arithmetic() {
        let k = Field::quadratic(2).unwrap();
        let s = k.sqrt_generator().unwrap();
        assert_eq!(&s * &s, k.int(2));
        let x = k.int(1) + &s;
        let y = x.inv().unwrap();
        assert_eq!(&x * &y, k.one());
        assert_eq!(y.to_string(), "-1+s");
    }

    #[test]
    fn f4_arithmetic() {
        let k = Field::finite(4).unwrap();
        assert_eq!(k.to_string(), "F_2[t]/(t^2+t+1)");
        let t = k.ext_generator().unwrap();
        // t² = t + 1
        assert_eq!(&t * &t, &t + k.one());
        assert_eq!(t.inv().unwrap(), &t + k.one());
        assert_eq!(k.elements().len(), 4);
    }

    #[test]
    fn rejects_bad_fields() {
        assert!(Field::quadratic(4).is_err());
        assert!(Field::quadratic(1).is_err());
        assert!(Field::prime(9).is_err());
        assert!(Field::extension(2, vec![1, 0, 1]).is_err());
        assert!(Field::finite(12).is_err());
    }

    #[test]
    fn galois_orbits() {
        let k = Field::quadratic(2).unwrap();
        let s = k.sqrt_generator().unwrap();
        assert_eq!(s.galois_conjugates(), vec![s.clone(), -&s]);
        assert_eq!(Field::rationals().int(5).galois_conjugates().len(), 1);
        let f4 = Field::finite(4).unwrap();
        let t = f4.ext_generator().unwrap();
        assert_eq!(t.galois_conjugates(), vec![t.clone(), &t + f4.one()]);
        let f8 = Field::finite(8).unwrap();
        assert_eq!(f8.ext_generator().unwrap().galois_conjugates().len(), 3);
    }

    #[test]
    fn squares() {
        let q = Field::rationals();
        assert!(!is_square(&q.int(-1)));
        assert!(is_square(&q.rat(4, 9)));
        assert!(!is_square(&q.int(2)));
        let f5 = Field::prime(5).unwrap();
        assert!(!is_square(&f5.int(2)));
        assert!(is_square(&f5.int(4)));
        let k = Field::quadratic(2).unwrap();
        assert!(is_square(&k.int(2)));
        // 3 + 2√2 = (1 + √2)²
        let s = k.sqrt_generator().unwrap();
        assert!(is_square(&(k.int(3) + k.int(2) * &s)));
        assert!(!is_square(&(k.int(1) + &s)));
    }

    #[test]
    fn rootless_quadratics() {
        assert!(!quadratic_has_root(&Field::prime(2).unwrap().one()));
        assert!(quadratic_has_root(&Field::finite(4).unwrap().one()));
        assert!(quadratic_has_root(&Field::rationals().int(2)));
        assert!(!quadratic_has_root(&Field::rationals().int(1)));
    }

    #[test]
    fn division_by_p_fails_in_char_p() {
        let f3 = Field::prime(3).unwrap();
        assert!(f3.from_rational(&BigRational::new(1.into(), 3.into())).is_err());
        assert_eq!(f3.rat(1, 2), f3.int(2));
    }
}

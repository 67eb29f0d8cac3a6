//! Dense univariate polynomials in x, used for the P(x) part of elementary
//! automorphisms and for fences.

use std::fmt;

use super::field::{Field, FieldElem};
use super::poly::BivarPoly;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct UniPoly {
    field: Field,
    /// Coefficients from degree 0 upward, without trailing zeros.
    coeffs: Vec<FieldElem>,
}

impl UniPoly {
    pub fn new(field: &Field, mut coeffs: Vec<FieldElem>) -> UniPoly {
        while coeffs.last().is_some_and(FieldElem::is_zero) {
            coeffs.pop();
        }
        UniPoly {
            field: field.clone(),
            coeffs,
        }
    }

    pub fn zero(field: &Field) -> UniPoly {
        UniPoly::new(field, Vec::new())
    }

    pub fn constant(c: FieldElem) -> UniPoly {
        let field = c.field().clone();
        UniPoly::new(&field, vec![c])
    }

    /// Builds c_e x^e + ... from (exponent, coefficient) pairs.
    pub fn from_pairs(field: &Field, pairs: impl IntoIterator<Item = (usize, FieldElem)>) -> UniPoly {
        let mut coeffs: Vec<FieldElem> = Vec::new();
        for (e, c) in pairs {
            if coeffs.len() <= e {
                coeffs.resize(e + 1, field.zero());
            }
            coeffs[e] = &coeffs[e] + &c;
        }
        UniPoly::new(field, coeffs)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, e: usize) -> FieldElem {
        self.coeffs.get(e).cloned().unwrap_or_else(|| self.field.zero())
    }

    /// Nonzero (exponent, coefficient) pairs in increasing exponent order.
    pub fn pairs(&self) -> Vec<(usize, FieldElem)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(e, c)| (e, c.clone()))
            .collect()
    }

    /// Horner evaluation; the argument may live in an extension field.
    pub fn eval(&self, x: &FieldElem) -> FieldElem {
        let target = x.field().clone();
        let embed = target != self.field;
        let mut acc = target.zero();
        for c in self.coeffs.iter().rev() {
            let c = if embed { target.embed(c) } else { c.clone() };
            acc = acc * x + c;
        }
        acc
    }

    pub fn scale(&self, c: &FieldElem) -> UniPoly {
        UniPoly::new(&self.field, self.coeffs.iter().map(|a| a * c).collect())
    }

    /// P(a x).
    pub fn rescale_arg(&self, a: &FieldElem) -> UniPoly {
        let mut pw = self.field.one();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            out.push(c * &pw);
            pw = &pw * a;
        }
        UniPoly::new(&self.field, out)
    }

    /// P(a x + b).
    pub fn compose_affine(&self, a: &FieldElem, b: &FieldElem) -> UniPoly {
        let lin = UniPoly::new(&self.field, vec![b.clone(), a.clone()]);
        let mut acc = UniPoly::zero(&self.field);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(&lin).add(&UniPoly::constant(c.clone()));
        }
        acc
    }

    pub fn add(&self, o: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        UniPoly::new(&self.field, (0..n).map(|e| self.coeff(e) + o.coeff(e)).collect())
    }

    pub fn neg(&self) -> UniPoly {
        UniPoly::new(&self.field, self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn sub(&self, o: &UniPoly) -> UniPoly {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &UniPoly) -> UniPoly {
        if self.is_zero() || o.is_zero() {
            return UniPoly::zero(&self.field);
        }
        let mut out = vec![self.field.zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        UniPoly::new(&self.field, out)
    }

    /// `Some(c)` when `self = c * other` with c a nonzero scalar.
    pub fn ratio_if_associate(&self, other: &UniPoly) -> Option<FieldElem> {
        if self.coeffs.len() != other.coeffs.len() || self.is_zero() {
            return None;
        }
        let c = self.coeffs.last()? / other.coeffs.last()?;
        (other.scale(&c) == *self).then_some(c)
    }

    pub fn to_bivar(&self) -> BivarPoly {
        BivarPoly::from_terms(
            &self.field,
            self.coeffs.iter().enumerate().map(|(e, c)| (e as u32, 0, c.clone())),
        )
    }
}

impl fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_bivar())
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_bivar())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn affine_composition() {
        let k = Field::rationals();
        // P = x^2 - 1, P(2x + 1) = 4x^2 + 4x
        let p = UniPoly::new(&k, vec![k.int(-1), k.zero(), k.one()]);
        let q = p.compose_affine(&k.int(2), &k.one());
        assert_eq!(q, UniPoly::new(&k, vec![k.zero(), k.int(4), k.int(4)]));
        assert_eq!(p.rescale_arg(&k.int(-1)), p);
        assert_eq!(p.eval(&k.int(3)), k.int(8));
    }
}

//! Membership in finitely generated abelian groups of torus parameters.
//!
//! Exact over finite fields (closure) and for rational parameters (exponent
//! lattices over a coprime basis, with the sign as a ℤ/2 coordinate);
//! otherwise a bounded word search that can only answer "yes" or
//! "undecided".

use std::collections::HashSet;
use std::hash::Hash;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::algebra::FieldElem;
use crate::torus::{Torus, TorusElem};

/// Largest number of words tried by the bounded search.
const SEARCH_BUDGET: usize = 40_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Decision {
    Yes,
    No,
    /// Not found among words with exponents in [−bound, bound].
    Undecided {
        bound: usize,
    },
}

impl Decision {
    pub fn is_yes(&self) -> bool {
        matches!(self, Decision::Yes)
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self, Decision::Undecided { .. })
    }

    pub fn to_json(&self) -> Value {
        match self {
            Decision::Yes => json!(true),
            Decision::No => json!(false),
            Decision::Undecided { bound } => json!({"undecided_beyond_bound": bound}),
        }
    }
}

/// A commutative group given by its law, used for torus parameters and for
/// diagonal maps.
pub struct AbelianGroup<'a, T> {
    pub identity: T,
    pub mul: &'a dyn Fn(&T, &T) -> T,
    pub inv: &'a dyn Fn(&T) -> T,
    /// All coordinates, when they are rational; enables the lattice test.
    pub rational_coords: &'a dyn Fn(&T) -> Option<Vec<BigRational>>,
    pub finite: bool,
}

impl<T: Clone + Eq + Hash> AbelianGroup<'_, T> {
    /// Every element of ⟨gens⟩; only for finite groups.
    pub fn closure(&self, gens: &[T]) -> Vec<T> {
        assert!(self.finite, "closure of an infinite group");
        let mut seen: HashSet<T> = HashSet::new();
        let mut out = vec![self.identity.clone()];
        seen.insert(self.identity.clone());
        let mut i = 0;
        while i < out.len() {
            for g in gens {
                let h = (self.mul)(&out[i], g);
                if seen.insert(h.clone()) {
                    out.push(h);
                }
            }
            i += 1;
        }
        out
    }

    pub fn contains(&self, gens: &[T], target: &T, bound: usize) -> Decision {
        if *target == self.identity {
            return Decision::Yes;
        }
        if self.finite {
            return if self.closure(gens).contains(target) {
                Decision::Yes
            } else {
                Decision::No
            };
        }
        let coords: Option<Vec<Vec<BigRational>>> = gens.iter().map(|g| (self.rational_coords)(g)).collect();
        if let (Some(gc), Some(tc)) = (coords, (self.rational_coords)(target)) {
            return if rational_group_contains(&gc, &tc) {
                Decision::Yes
            } else {
                Decision::No
            };
        }
        self.bounded_search(gens, target, bound)
    }

    fn bounded_search(&self, gens: &[T], target: &T, bound: usize) -> Decision {
        if gens.is_empty() {
            return Decision::Undecided { bound: 0 };
        }
        let m = gens.len() as f64;
        let per = (((SEARCH_BUDGET as f64).powf(1.0 / m) - 1.0) / 2.0).floor() as usize;
        let b = per.min(bound).max(1);
        // powers[i][e + b] = gens[i]^e
        let powers: Vec<Vec<T>> = gens
            .iter()
            .map(|g| {
                let gi = (self.inv)(g);
                let mut neg = vec![self.identity.clone()];
                let mut pos = vec![self.identity.clone()];
                for _ in 0..b {
                    neg.push((self.mul)(neg.last().unwrap(), &gi));
                    pos.push((self.mul)(pos.last().unwrap(), g));
                }
                neg.into_iter().skip(1).rev().chain(pos).collect()
            })
            .collect();
        let mut partial = vec![self.identity.clone()];
        for row in &powers {
            let mut next = Vec::with_capacity(partial.len() * row.len());
            for a in &partial {
                for p in row {
                    next.push((self.mul)(a, p));
                }
            }
            partial = next;
        }
        if partial.contains(target) {
            Decision::Yes
        } else {
            Decision::Undecided { bound: b }
        }
    }
}

/// The law of a one-parameter torus.
pub fn torus_contains(torus: &Torus, gens: &[TorusElem], target: &TorusElem, bound: usize) -> Decision {
    let k = target.field().clone();
    let mul = |a: &TorusElem, b: &TorusElem| torus.mul(a, b);
    let inv = |a: &TorusElem| torus.inv(a);
    let coords = |a: &TorusElem| match a {
        TorusElem::Scalar(t) => t.to_rational().map(|r| vec![r]),
        TorusElem::Pair(..) => None,
    };
    AbelianGroup {
        identity: torus.identity(&k),
        mul: &mul,
        inv: &inv,
        rational_coords: &coords,
        finite: k.is_finite(),
    }
    .contains(gens, target, bound)
}

/// Every element of ⟨gens⟩ inside a torus over a finite field.
pub fn torus_closure(torus: &Torus, gens: &[TorusElem], identity: TorusElem) -> Vec<TorusElem> {
    let mul = |a: &TorusElem, b: &TorusElem| torus.mul(a, b);
    let inv = |a: &TorusElem| torus.inv(a);
    let coords = |_: &TorusElem| None;
    AbelianGroup {
        identity,
        mul: &mul,
        inv: &inv,
        rational_coords: &coords,
        finite: true,
    }
    .closure(gens)
}

/// Membership in a group of diagonal maps (α, β), given by their scalings.
pub fn diagonal_contains(gens: &[(FieldElem, FieldElem)], target: &(FieldElem, FieldElem), bound: usize) -> Decision {
    let k = target.0.field().clone();
    let mul = |a: &(FieldElem, FieldElem), b: &(FieldElem, FieldElem)| (&a.0 * &b.0, &a.1 * &b.1);
    let inv = |a: &(FieldElem, FieldElem)| (a.0.inv().expect("nonzero"), a.1.inv().expect("nonzero"));
    let coords = |a: &(FieldElem, FieldElem)| Some(vec![a.0.to_rational()?, a.1.to_rational()?]);
    AbelianGroup {
        identity: (k.one(), k.one()),
        mul: &mul,
        inv: &inv,
        rational_coords: &coords,
        finite: k.is_finite(),
    }
    .contains(gens, target, bound)
}

/// Refines a list of integers > 1 into pairwise coprime factors such that
/// every input is a product of powers of them.
fn coprime_basis(inputs: impl IntoIterator<Item = BigUint>) -> Vec<BigUint> {
    let one = BigUint::one();
    let mut basis: Vec<BigUint> = Vec::new();
    let mut work: Vec<BigUint> = inputs.into_iter().filter(|n| *n > one).collect();
    while let Some(a) = work.pop() {
        match basis.iter().position(|b| a.gcd(b) > one) {
            Some(i) => {
                let b = basis.swap_remove(i);
                let g = a.gcd(&b);
                for n in [&a / &g, &b / &g, g] {
                    if n > one {
                        work.push(n);
                    }
                }
            }
            None => basis.push(a),
        }
    }
    basis.sort();
    basis
}

fn valuation_vector(n: &BigUint, basis: &[BigUint]) -> Vec<i64> {
    let mut n = n.clone();
    let v = basis
        .iter()
        .map(|b| {
            let mut e = 0;
            while (&n % b).is_zero() {
                n /= b;
                e += 1;
            }
            e
        })
        .collect();
    debug_assert!(n.is_one());
    v
}

/// Whether `target` lies in the multiplicative group generated by `gens`,
/// all being vectors of nonzero rationals multiplied coordinatewise.
pub fn rational_group_contains(gens: &[Vec<BigRational>], target: &[BigRational]) -> bool {
    let all = gens
        .iter()
        .chain(std::iter::once(&target.to_vec()))
        .flatten()
        .cloned()
        .collect::<Vec<_>>();
    let basis = coprime_basis(
        all.iter()
            .flat_map(|r| [r.numer().abs().to_biguint().unwrap(), r.denom().to_biguint().unwrap()]),
    );
    let coords = target.len();
    let encode = |v: &[BigRational]| -> Vec<BigInt> {
        let mut out = Vec::new();
        for r in v {
            let num = valuation_vector(&r.numer().abs().to_biguint().unwrap(), &basis);
            let den = valuation_vector(&r.denom().to_biguint().unwrap(), &basis);
            out.extend(num.iter().zip(&den).map(|(a, b)| BigInt::from(a - b)));
        }
        for r in v {
            out.push(BigInt::from(i64::from(r.is_negative())));
        }
        out
    };
    let dim = basis.len() * coords + coords;
    let mut rows: Vec<Vec<BigInt>> = gens.iter().map(|g| encode(g)).collect();
    // signs live in ℤ/2
    for c in 0..coords {
        let mut r = vec![BigInt::zero(); dim];
        r[basis.len() * coords + c] = BigInt::from(2);
        rows.push(r);
    }
    lattice_contains(rows, encode(target))
}

/// Integer lattice membership via row echelon form over ℤ.
fn lattice_contains(mut rows: Vec<Vec<BigInt>>, mut target: Vec<BigInt>) -> bool {
    let dim = target.len();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut r = 0;
    for c in 0..dim {
        loop {
            let nonzero: Vec<usize> = (r..rows.len()).filter(|&i| !rows[i][c].is_zero()).collect();
            if nonzero.len() <= 1 {
                if let Some(&i) = nonzero.first() {
                    rows.swap(r, i);
                    pivots.push((r, c));
                    r += 1;
                }
                break;
            }
            let &min = nonzero.iter().min_by_key(|&&i| rows[i][c].abs()).unwrap();
            rows.swap(r, min);
            for i in r + 1..rows.len() {
                if rows[i][c].is_zero() {
                    continue;
                }
                let q = rows[i][c].div_floor(&rows[r][c]);
                let (top, bottom) = rows.split_at_mut(i);
                for (x, y) in bottom[0][c..dim].iter_mut().zip(&top[r][c..dim]) {
                    *x -= &q * y;
                }
            }
        }
    }
    let mut pi = 0;
    for c in 0..dim {
        if pi < pivots.len() && pivots[pi].1 == c {
            let row = &rows[pivots[pi].0];
            let (q, rem) = target[c].div_rem(&row[c]);
            if !rem.is_zero() {
                return false;
            }
            for j in c..dim {
                target[j] -= &q * &row[j];
            }
            pi += 1;
        } else if !target[c].is_zero() {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Field;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn rational_lattice() {
        let g = vec![vec![r(4, 1)]];
        assert!(!rational_group_contains(&g, &[r(2, 1)]));
        assert!(rational_group_contains(&g, &[r(1, 16)]));
        assert!(rational_group_contains(&[vec![r(6, 1)], vec![r(3, 2)]], &[r(4, 1)]));
        assert!(!rational_group_contains(&[vec![r(6, 1)], vec![r(3, 2)]], &[r(2, 1)]));
        // sign handled modulo 2
        assert!(rational_group_contains(&[vec![r(-2, 1)]], &[r(4, 1)]));
        assert!(!rational_group_contains(&[vec![r(-2, 1)]], &[r(-4, 1)]));
        assert!(rational_group_contains(&[vec![r(-2, 1)]], &[r(-1, 8)]));
        // coordinatewise, weights (4, 8)
        assert!(rational_group_contains(
            &[vec![r(4, 1), r(8, 1)]],
            &[r(1, 16), r(1, 64)]
        ));
        assert!(!rational_group_contains(&[vec![r(4, 1), r(8, 1)]], &[r(2, 1), r(2, 1)]));
    }

    #[test]
    fn torus_membership() {
        let q = Field::rationals();
        let four = TorusElem::Scalar(q.int(4));
        let two = TorusElem::Scalar(q.int(2));
        assert_eq!(
            torus_contains(&Torus::Scalar, std::slice::from_ref(&four), &two, 10),
            Decision::No
        );
        assert_eq!(
            torus_contains(&Torus::Scalar, &[four], &TorusElem::Scalar(q.int(16)), 10),
            Decision::Yes
        );
        let f13 = Field::prime(13).unwrap();
        let three = TorusElem::Scalar(f13.int(3));
        assert_eq!(
            torus_closure(&Torus::Scalar, &[three], Torus::Scalar.identity(&f13)).len(),
            3
        );
        // a Pythagorean rotation over ℚ: only the bounded search applies
        let tor = Torus::Norm {
            lambda: q.one(),
            nu: q.one(),
        };
        let t = TorusElem::Pair(q.rat(3, 5), q.rat(4, 5));
        let t2 = tor.mul(&t, &t);
        assert_eq!(torus_contains(&tor, std::slice::from_ref(&t), &t2, 100), Decision::Yes);
        assert!(matches!(
            torus_contains(&tor, &[t2], &t, 100),
            Decision::Undecided { .. }
        ));
    }
}

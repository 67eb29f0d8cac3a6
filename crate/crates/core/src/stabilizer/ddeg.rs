//! Degree growth of iterates.

use serde_json::{json, Value};

use crate::autmap::{Generator, PlaneAut};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct DynamicalDegree {
    /// deg φ^m for m = 1..M.
    pub degrees: Vec<u32>,
    /// (deg φ^M)^(1/M).
    pub estimate: f64,
    /// deg P when φ is the Hénon word (y, −δx + P(y)).
    pub exact_hint: Option<u32>,
}

impl DynamicalDegree {
    pub fn to_json(&self) -> Value {
        json!({
            "degrees": self.degrees,
            "estimate": self.estimate,
            "exact_hint": self.exact_hint,
        })
    }
}

fn henon_degree(phi: &PlaneAut) -> Option<u32> {
    match phi.word() {
        [Generator::Elementary { a, p, .. }, Generator::Swap] if a.is_one() => {
            let d = p.degree()?;
            (d >= 2).then_some(d as u32)
        }
        _ => None,
    }
}

/// Exact degrees of φ, φ², ..., φ^M, computing φ^m = φ∘φ^(m−1) by
/// substituting the previous iterate into φ.
pub fn dynamical_degree(phi: &PlaneAut, m: usize, bit_cap: u64) -> Result<DynamicalDegree> {
    if m == 0 {
        return Err(Error::InvalidArgument("M must be positive".into()));
    }
    let (f, g) = phi.expand().clone();
    let mut cur = (f.clone(), g.clone());
    let mut degrees = vec![cur.0.degree().max(cur.1.degree())];
    for _ in 1..m {
        cur = (f.substitute(&cur.0, &cur.1), g.substitute(&cur.0, &cur.1));
        let bits = cur.0.bit_size() + cur.1.bit_size();
        if bits > bit_cap {
            return Err(Error::SizeLimit {
                what: format!("iterate {} of {phi}", degrees.len() + 1),
                bits,
                cap: bit_cap,
            });
        }
        degrees.push(cur.0.degree().max(cur.1.degree()));
    }
    let last = *degrees.last().unwrap() as f64;
    Ok(DynamicalDegree {
        estimate: last.powf(1.0 / m as f64),
        degrees,
        exact_hint: henon_degree(phi),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Field, UniPoly};
    use crate::autmap::{diagonal, henon};

    #[test]
    fn henon_and_torus() {
        let q = Field::rationals();
        let phi = henon(q.one(), UniPoly::new(&q, vec![q.zero(), q.zero(), q.one()])).unwrap();
        assert_eq!(phi.to_string(), "(y, y^2 - x)");
        let d = dynamical_degree(&phi, 6, u64::MAX).unwrap();
        assert_eq!(d.degrees, vec![2, 4, 8, 16, 32, 64]);
        assert_eq!(d.exact_hint, Some(2));
        assert!((d.estimate - 2.0).abs() < 1e-12);
        let t = dynamical_degree(&diagonal(q.int(2), q.rat(1, 2)).unwrap(), 5, u64::MAX).unwrap();
        assert_eq!(t.degrees, vec![1; 5]);
        assert_eq!(t.exact_hint, None);
    }
}

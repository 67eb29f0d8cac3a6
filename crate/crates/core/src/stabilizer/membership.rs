//! Setwise membership ψ(Δ) = Δ for orbits, exact where possible and
//! otherwise verified on a window.

use std::collections::HashSet;

use serde_json::{json, Value};

use crate::algebra::{poly_divides, BivarPoly};
use crate::autmap::{PlaneAut, Point};
use crate::orbit::{cyclic_orbit, index_points, Label, OrbitSample};

use super::group::{diagonal_contains, torus_contains, Decision};
use super::{diagonal_entries, Shape, StabilizerDescriptor};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MembershipVerdict {
    In,
    Out,
    VerifiedUpToBound,
}

impl MembershipVerdict {
    pub fn name(&self) -> &'static str {
        match self {
            MembershipVerdict::In => "in",
            MembershipVerdict::Out => "out",
            MembershipVerdict::VerifiedUpToBound => "verified_up_to_bound",
        }
    }
}

#[derive(Clone, Debug)]
pub struct MembershipReport {
    pub verdict: MembershipVerdict,
    pub reason: String,
    pub flags: Vec<String>,
    /// A point of Δ and its image outside Δ (or outside the window).
    pub witness: Option<(Point, Point)>,
    /// Whether ψ⁻¹ also maps the interior into the window; `None` if not checked.
    pub inverse_checked: Option<bool>,
    pub window: usize,
    pub interior: usize,
}

impl MembershipReport {
    fn new(verdict: MembershipVerdict, reason: &str) -> MembershipReport {
        MembershipReport {
            verdict,
            reason: reason.to_string(),
            flags: vec![],
            witness: None,
            inverse_checked: None,
            window: 0,
            interior: 0,
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "verdict": self.verdict.name(),
            "reason": self.reason,
            "flags": self.flags,
            "witness": self.witness.as_ref().map(|(a, b)| json!({"point": a.to_json(), "image": b.to_json()})),
            "inverse_checked": self.inverse_checked,
            "window": self.window,
            "interior": self.interior,
        })
    }
}

/// Exact test ψ(S) = S for a finite set.
pub fn membership_set(psi: &PlaneAut, points: &[Point]) -> MembershipReport {
    let set: HashSet<Point> = points.iter().cloned().collect();
    for q in points {
        let img = psi.apply_point(q);
        if !set.contains(&img) {
            let mut r = MembershipReport::new(MembershipVerdict::Out, "the image of a point leaves the finite set");
            r.witness = Some((q.clone(), img));
            return r;
        }
    }
    // injective and maps S into S, so onto
    MembershipReport::new(MembershipVerdict::In, "the finite set is mapped onto itself")
}

/// ψ fixes every point of V(F): both coordinates of ψ − Id lie in (F).
fn fixes_pointwise(psi: &PlaneAut, f: &BivarPoly) -> bool {
    let k = f.field();
    let psi = psi.embed_into(k);
    let (a, b) = psi.expand();
    let dx = a - &BivarPoly::x(k);
    let dy = b - &BivarPoly::y(k);
    let divides = |g: &BivarPoly| g.is_zero() || poly_divides(f, g).is_some();
    divides(&dx) && divides(&dy)
}

/// Whether ψ = φ^j or ψ = φ^j∘τ_p, with j read off from ψ(p) = φ^j(p).
fn power_of(phi: &PlaneAut, tau: Option<&PlaneAut>, psi: &PlaneAut, p: &Point, bound: usize, cap: u64) -> Decision {
    let Ok(window) = cyclic_orbit(phi, p, bound, cap) else {
        return Decision::Undecided { bound: 0 };
    };
    let index = index_points(&window);
    let Some(Label::Power(j)) = index.get(&psi.apply_point(p)) else {
        return Decision::Undecided { bound };
    };
    let pj = phi.pow(*j);
    if psi.same_map(&pj) || tau.is_some_and(|t| psi.same_map(&pj.compose(t))) {
        Decision::Yes
    } else {
        Decision::No
    }
}

fn descriptor_contains(psi: &PlaneAut, s: &StabilizerDescriptor, orbit: &OrbitSample) -> Decision {
    let bound = s.normal_form.as_ref().map_or(2 * orbit.bound, |h| h.search_bound);
    match &s.shape {
        Shape::Diagonal(gens) => match diagonal_entries(psi) {
            Some(t) => diagonal_contains(gens, &t, bound),
            None => Decision::No,
        },
        Shape::Torus { torus, a0, coset } => match torus.decompose(psi) {
            None => Decision::No,
            Some((t, false)) => torus_contains(torus, a0, &t, bound),
            Some((t, true)) => match coset {
                Some(c) => torus_contains(torus, a0, &torus.mul(&t, &torus.inv(c)), bound),
                None => Decision::No,
            },
        },
        Shape::Cyclic { phi, tau_p } => power_of(phi, tau_p.as_ref(), psi, &s.point, 2 * orbit.bound, orbit.bit_cap),
        Shape::Kernel => Decision::Undecided { bound: 0 },
    }
}

/// Semidecision of ψ ∈ Aut(𝔸², O) for an orbit sampled by `orbit`.
///
/// Exact for finite orbits, for maps fixing the orbit closure pointwise,
/// for powers of the driving map, and against complete descriptors;
/// otherwise ψ and ψ⁻¹ are checked on the middle half of the window.
pub fn membership(psi: &PlaneAut, orbit: &OrbitSample, stab: Option<&StabilizerDescriptor>) -> MembershipReport {
    let k = orbit.base_point.field().clone();
    let psi = psi.embed_into(&k);
    if orbit.exhausted || orbit.periodic.is_some() {
        return membership_set(&psi, &orbit.point_list());
    }
    let finish = |mut r: MembershipReport, interior| {
        r.window = orbit.bound;
        r.interior = interior;
        r
    };
    if let Some(s) = stab {
        if fixes_pointwise(&psi, &s.curve) {
            return finish(
                MembershipReport::new(
                    MembershipVerdict::In,
                    "fixes the orbit closure pointwise (kernel of the restriction)",
                ),
                0,
            );
        }
    }
    let interior = orbit.bound / 2;
    let window = orbit.point_set();
    let inner = orbit.sub_window(interior);
    for q in &inner {
        let img = psi.apply_point(q);
        if !window.contains(&img) {
            let mut r = MembershipReport::new(
                MembershipVerdict::Out,
                "an interior orbit point is mapped outside the window",
            );
            r.witness = Some((q.clone(), img));
            return finish(r, interior);
        }
    }
    if let Some(phi) = orbit.driver() {
        if power_of(phi, None, &psi, &orbit.base_point, 2 * orbit.bound, orbit.bit_cap) == Decision::Yes {
            return finish(
                MembershipReport::new(MembershipVerdict::In, "a power of the driving map"),
                interior,
            );
        }
    }
    if let Some(s) = stab {
        match descriptor_contains(&psi, s, orbit) {
            Decision::Yes => {
                return finish(
                    MembershipReport::new(MembershipVerdict::In, "an element of the stabilizer descriptor"),
                    interior,
                )
            }
            Decision::No if s.complete => {
                return finish(
                    MembershipReport::new(
                        MembershipVerdict::Out,
                        "not an element of the completely described stabilizer",
                    ),
                    interior,
                )
            }
            _ => {}
        }
    }
    let inv = psi.inverse();
    let miss = inner.iter().find_map(|q| {
        let img = inv.apply_point(q);
        (!window.contains(&img)).then(|| (q.clone(), img))
    });
    let mut r = MembershipReport::new(
        MembershipVerdict::VerifiedUpToBound,
        "the map sends the middle half of the window into the window",
    );
    r.inverse_checked = Some(miss.is_none());
    if let Some(w) = miss {
        r.flags.push("image is proper subset of window".into());
        r.flags
            .push("setwise equality fails inside the window: the inverse leaves it".into());
        r.witness = Some(w);
    }
    finish(r, interior)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Field, UniPoly};
    use crate::autmap::{diagonal, elementary, swap};
    use crate::closure::CycleBounds;
    use crate::orbit::galois_saturate;
    use crate::stabilizer::cyclic_orbit_stabilizer;

    #[test]
    fn finite_sets() {
        let k = Field::quadratic(2).unwrap();
        let s = k.sqrt_generator().unwrap();
        let delta = vec![Point::new(s, k.zero())];
        let phi = elementary(-k.one(), k.one(), UniPoly::new(&k, vec![k.int(-2), k.zero(), k.one()])).unwrap();
        assert_eq!(phi.to_string(), "(-x, x^2 + y - 2)");
        assert_eq!(membership_set(&phi, &delta).verdict, MembershipVerdict::Out);
        assert_eq!(
            membership_set(&phi, &galois_saturate(&delta)).verdict,
            MembershipVerdict::In
        );
    }

    #[test]
    fn orbit_windows() {
        let q = Field::rationals();
        let phi = diagonal(q.int(2), q.rat(1, 2)).unwrap();
        let p = Point::new(q.one(), q.one());
        let orbit = cyclic_orbit(&phi, &p, 10, u64::MAX).unwrap();
        let stab = cyclic_orbit_stabilizer(&phi, &p, CycleBounds::default(), 20).unwrap();
        assert_eq!(
            membership(&swap(&q), &orbit, Some(&stab)).verdict,
            MembershipVerdict::In
        );
        assert_eq!(
            membership(&swap(&q), &orbit, None).verdict,
            MembershipVerdict::VerifiedUpToBound
        );
        let three = diagonal(q.int(3), q.int(3)).unwrap();
        assert_eq!(membership(&three, &orbit, Some(&stab)).verdict, MembershipVerdict::Out);

        // the line x = 0 swept by (x, y + 1)
        let shift = elementary(q.one(), q.one(), UniPoly::constant(q.one())).unwrap();
        let o = Point::new(q.zero(), q.zero());
        let orbit = cyclic_orbit(&shift, &o, 10, u64::MAX).unwrap();
        let stab = cyclic_orbit_stabilizer(&shift, &o, CycleBounds::default(), 20).unwrap();
        assert_eq!(
            membership(&diagonal(q.int(3), q.one()).unwrap(), &orbit, Some(&stab)).verdict,
            MembershipVerdict::In
        );
        let r = membership(&diagonal(q.one(), q.int(2)).unwrap(), &orbit, Some(&stab));
        assert_eq!(r.verdict, MembershipVerdict::VerifiedUpToBound);
        assert!(r.flags.contains(&"image is proper subset of window".to_string()));
    }
}

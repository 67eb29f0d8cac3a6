//! Stabilizers of orbits: point isotropy, orbit stabilizers for subgroups of
//! the canonical symmetry groups, the cyclic case, membership and the
//! dynamical degree.

mod ddeg;
mod group;
mod isotropy;
mod membership;

pub use ddeg::{dynamical_degree, DynamicalDegree};
pub use group::{diagonal_contains, rational_group_contains, torus_closure, torus_contains, Decision};
pub use isotropy::{isotropy, isotropy_param, IsoElement, IsotropyReport};
pub use membership::{membership, membership_set, MembershipReport, MembershipVerdict};

use std::collections::{BTreeMap, HashSet};

use serde_json::{json, Value};

use crate::algebra::{BivarPoly, FieldElem};
use crate::autmap::{PlaneAut, Point};
use crate::classify::{classify_canonical, CurveDescriptor, CurveType};
use crate::closure::{component_cycle, trichotomy, CycleBounds, DEFAULT_D};
use crate::error::{Error, Result};
use crate::orbit::{
    cyclic_orbit, group_orbit, index_points, Label, OrbitSample, DEFAULT_BIT_CAP, DEFAULT_L, DEFAULT_N,
};
use crate::torus::{Torus, TorusElem};

/// Default bound I = 2N for relation and word searches.
pub const DEFAULT_SEARCH_BOUND: usize = 2 * DEFAULT_N;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CaseTag {
    AEqualsH,
    H0ExtendedByGp,
    HUnchanged,
    A0Index2Extension,
    Type6LowerBound,
    CyclicA,
    CyclicBI,
    CyclicBII,
    CyclicC,
}

impl CaseTag {
    pub fn name(&self) -> &'static str {
        match self {
            CaseTag::AEqualsH => "A_equals_H",
            CaseTag::H0ExtendedByGp => "H0_extended_by_Gp",
            CaseTag::HUnchanged => "H_unchanged",
            CaseTag::A0Index2Extension => "A0_index2_extension",
            CaseTag::Type6LowerBound => "Type6_lower_bound",
            CaseTag::CyclicA => "Cyclic_a",
            CaseTag::CyclicBI => "Cyclic_b_i",
            CaseTag::CyclicBII => "Cyclic_b_ii",
            CaseTag::CyclicC => "Cyclic_c",
        }
    }
}

/// A subgroup H of T ⋊ ⟨involution⟩ in the form H = H₀ or H = H₀ ∪ H₀γ.
#[derive(Clone, Debug)]
pub struct HDescriptor {
    pub torus: Torus,
    /// Generators of H₀ = H ∩ T, identity entries dropped.
    pub h0: Vec<TorusElem>,
    /// Parameter s of the first coset generator γ = s·involution.
    pub gamma: Option<TorusElem>,
    /// t₀ with γ = t₀·τ_p.
    pub t0: Option<TorusElem>,
    pub t_p: TorusElem,
    pub tau_p: PlaneAut,
    pub t0_is_identity: bool,
    pub t0_in_h0: Option<Decision>,
    pub t0_sq_in_h0: Option<Decision>,
    pub search_bound: usize,
}

impl HDescriptor {
    pub fn to_json(&self) -> Value {
        json!({
            "torus": self.torus.describe(),
            "H0": self.h0.iter().map(TorusElem::to_json).collect::<Vec<_>>(),
            "gamma_param": self.gamma.as_ref().map(TorusElem::to_json),
            "t0": self.t0.as_ref().map(TorusElem::to_json),
            "tau_p_param": self.t_p.to_json(),
            "tau_p": self.tau_p.to_string(),
            "t0_is_identity": self.t0_is_identity,
            "t0_in_H0": self.t0_in_h0.map(|d| d.to_json()),
            "t0_squared_in_H0": self.t0_sq_in_h0.map(|d| d.to_json()),
            "search_bound": self.search_bound,
        })
    }
}

/// Splits generators of a subgroup of the symmetry group of a type 3–5
/// curve into torus part and involution coset, relative to τ_p.
pub fn subgroup_normal_form(gens: &[PlaneAut], desc: &CurveDescriptor, p: &Point, bound: usize) -> Result<HDescriptor> {
    let torus = Torus::from_type(&desc.curve_type)
        .ok_or_else(|| Error::InvalidArgument("normal forms exist for curve types 3-5 only".into()))?;
    let iso = isotropy(desc, p)?;
    let t_p = iso.t_p().expect("torus type").clone();
    let tau_p = iso.tau_p().expect("torus type").clone();
    let k = desc.field();
    let mut h0: Vec<TorusElem> = Vec::new();
    let mut cosets: Vec<TorusElem> = Vec::new();
    for g in gens {
        let g = g.embed_into(k);
        match torus.decompose(&g) {
            Some((t, false)) => h0.push(t),
            Some((t, true)) => cosets.push(t),
            None => {
                return Err(Error::NotInFamily(format!(
                    "{g} is not in the symmetry group {} x| <involution>",
                    torus.describe()
                )))
            }
        }
    }
    // γ₁γⱼ = s₁·s_j⁻¹ for γᵢ = sᵢ·involution
    if let Some((first, rest)) = cosets.split_first() {
        for s in rest {
            h0.push(torus.mul(first, &torus.inv(s)));
        }
    }
    let mut seen = HashSet::new();
    h0.retain(|t| !torus.is_identity(t) && seen.insert(t.clone()));
    let gamma = cosets.first().cloned();
    let t0 = gamma.as_ref().map(|s| torus.mul(s, &torus.inv(&t_p)));
    let t0_is_identity = t0.as_ref().is_some_and(|t| torus.is_identity(t));
    let t0_in_h0 = t0.as_ref().map(|t| torus_contains(&torus, &h0, t, bound));
    let t0_sq_in_h0 = t0
        .as_ref()
        .map(|t| torus_contains(&torus, &h0, &torus.mul(t, t), bound));
    Ok(HDescriptor {
        torus,
        h0,
        gamma,
        t0,
        t_p,
        tau_p,
        t0_is_identity,
        t0_in_h0,
        t0_sq_in_h0,
        search_bound: bound,
    })
}

/// How membership in the described group is decided.
#[allow(clippy::large_enum_variant)]
#[derive(Clone, Debug)]
pub(crate) enum Shape {
    /// A = H inside the diagonal torus of types 1 and 2.
    Diagonal(Vec<(FieldElem, FieldElem)>),
    /// A = A₀ ∪ A₀·(s·involution).
    Torus {
        torus: Torus,
        a0: Vec<TorusElem>,
        coset: Option<TorusElem>,
    },
    /// A = ⟨φ⟩, optionally ∪ ⟨φ⟩τ_p.
    Cyclic { phi: PlaneAut, tau_p: Option<PlaneAut> },
    /// Only a lower bound is known.
    Kernel,
}

#[derive(Clone, Debug, Default)]
pub struct Verification {
    /// N or L of the window.
    pub window: usize,
    /// Label radius of the interior mapped into the window.
    pub interior: usize,
    pub maps_checked: usize,
    pub point_checks: usize,
    pub identities: Vec<(String, bool)>,
    pub failures: Vec<String>,
}

impl Verification {
    pub fn all_passed(&self) -> bool {
        self.failures.is_empty() && self.identities.iter().all(|(_, ok)| *ok)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "window": self.window,
            "interior": self.interior,
            "maps_checked": self.maps_checked,
            "point_checks": self.point_checks,
            "identities": self.identities.iter().map(|(k, v)| json!({"check": k, "ok": v})).collect::<Vec<_>>(),
            "failures": self.failures,
            "all_passed": self.all_passed(),
        })
    }
}

/// Checks that every map and its inverse stabilize `curve` and send the
/// interior of the window into the window.
pub fn verify_window(maps: &[PlaneAut], sample: &OrbitSample, curve: &BivarPoly, interior: usize) -> Verification {
    let window = sample.point_set();
    let inner = sample.sub_window(interior);
    let mut v = Verification {
        window: sample.bound,
        interior,
        ..Verification::default()
    };
    for g in maps {
        v.maps_checked += 1;
        if !g.stabilizes(curve) {
            v.failures.push(format!("{g} does not stabilize {curve}"));
        }
        for (name, h) in [("map", g.clone()), ("inverse", g.inverse())] {
            for q in &inner {
                v.point_checks += 1;
                let img = h.apply_point(q);
                if !window.contains(&img) {
                    v.failures
                        .push(format!("{name} of {g} sends {q} to {img}, outside the window"));
                    break;
                }
            }
        }
    }
    v
}

#[derive(Clone, Debug)]
pub struct StabilizerDescriptor {
    pub case_tag: CaseTag,
    pub curve_type: CurveType,
    /// Closure of the orbit (product of the components in the cyclic case).
    pub curve: BivarPoly,
    pub point: Point,
    pub torus: Option<Torus>,
    /// Generators of A₀ = A ∩ T.
    pub torus_part: Vec<TorusElem>,
    /// s with A = A₀ ∪ A₀·(s·involution).
    pub coset: Option<TorusElem>,
    /// Generators of A (a lower bound when incomplete).
    pub generators: Vec<PlaneAut>,
    /// i with τ_p∘φ = φ^i∘τ_p.
    pub relation_exponent: Option<i64>,
    pub kernel_part: Option<Value>,
    pub complete: bool,
    pub is_algebraic: bool,
    pub algebraicity_reason: String,
    pub normal_form: Option<HDescriptor>,
    pub flags: BTreeMap<String, Value>,
    pub verification: Option<Verification>,
    pub notes: Vec<String>,
    pub(crate) shape: Shape,
}

impl StabilizerDescriptor {
    pub fn to_json(&self) -> Value {
        json!({
            "case_tag": self.case_tag.name(),
            "curve_type": self.curve_type.name(),
            "curve_params": self.curve_type.params_json(),
            "curve": self.curve.to_string(),
            "point": self.point.to_json(),
            "torus": self.torus.as_ref().map(Torus::describe),
            "torus_part": self.torus_part.iter().map(TorusElem::to_json).collect::<Vec<_>>(),
            "coset": self.coset.as_ref().map(TorusElem::to_json),
            "generators": self.generators.iter().map(|g| json!({"word": g.word_to_json(), "map": g.to_string()})).collect::<Vec<_>>(),
            "relation_exponent": self.relation_exponent,
            "kernel_part": self.kernel_part,
            "complete": self.complete,
            "is_algebraic": self.is_algebraic,
            "algebraicity_reason": self.algebraicity_reason,
            "normal_form": self.normal_form.as_ref().map(HDescriptor::to_json),
            "flags": self.flags,
            "verification": self.verification.as_ref().map(Verification::to_json),
            "notes": self.notes,
        })
    }

    /// The automorphisms t and t·involution for every t in the listed data;
    /// only for finite fields.
    pub fn enumerate(&self) -> Option<Vec<PlaneAut>> {
        let Shape::Torus { torus, a0, coset } = &self.shape else {
            return None;
        };
        let k = self.point.field();
        if !k.is_finite() {
            return None;
        }
        let elems = torus_closure(torus, a0, torus.identity(k));
        let mut out: Vec<PlaneAut> = elems.iter().map(|t| torus.element(t)).collect();
        if let Some(s) = coset {
            out.extend(elems.iter().map(|t| torus.coset_element(&torus.mul(t, s))));
        }
        Some(out)
    }
}

fn algebraicity(finite_field: bool, kernel: bool) -> (bool, String) {
    if kernel {
        (false, "unbounded degree".into())
    } else if finite_field {
        (true, "finite group".into())
    } else {
        (false, "countably infinite".into())
    }
}

fn diagonal_entries(g: &PlaneAut) -> Option<(FieldElem, FieldElem)> {
    let [[a, b], [c, d]] = g.as_linear()?;
    (b.is_zero() && c.is_zero()).then_some((a, d))
}

/// The stabilizer of O_H(p) predicted by the case analysis, without checking
/// that the orbit closure is the curve.
pub fn stabilizer_formula(
    desc: &CurveDescriptor,
    p: &Point,
    gens: &[PlaneAut],
    bound: usize,
) -> Result<StabilizerDescriptor> {
    let k = desc.field().clone();
    let p = p.embed_into(&k);
    if !desc.defining_poly.eval(&p.x, &p.y).is_zero() {
        return Err(Error::InvalidArgument(format!(
            "{p} is not on the curve {}",
            desc.defining_poly
        )));
    }
    let gens: Vec<PlaneAut> = gens.iter().map(|g| g.embed_into(&k)).collect();
    for g in &gens {
        if !g.stabilizes(&desc.defining_poly) {
            return Err(Error::NotInFamily(format!(
                "{g} does not stabilize {}",
                desc.defining_poly
            )));
        }
    }
    let mut flags = BTreeMap::new();
    let mut notes = Vec::new();
    let (alg, reason) = algebraicity(k.is_finite(), matches!(desc.curve_type, CurveType::T6));
    let base = |tag: CaseTag, shape: Shape, generators: Vec<PlaneAut>| StabilizerDescriptor {
        case_tag: tag,
        curve_type: desc.curve_type.clone(),
        curve: desc.defining_poly.clone(),
        point: p.clone(),
        torus: None,
        torus_part: vec![],
        coset: None,
        generators,
        relation_exponent: None,
        kernel_part: None,
        complete: true,
        is_algebraic: alg,
        algebraicity_reason: reason.clone(),
        normal_form: None,
        flags: BTreeMap::new(),
        verification: None,
        notes: vec![],
        shape,
    };
    match &desc.curve_type {
        CurveType::T1 { .. } | CurveType::T2 { .. } => {
            let diag = gens
                .iter()
                .map(|g| diagonal_entries(g).ok_or_else(|| Error::NotInFamily(format!("{g} is not diagonal"))))
                .collect::<Result<Vec<_>>>()?;
            Ok(base(CaseTag::AEqualsH, Shape::Diagonal(diag), gens))
        }
        ct if ct.is_torus_type() => {
            let h = subgroup_normal_form(&gens, desc, &p, bound)?;
            let torus = h.torus.clone();
            let decided = |d: Option<Decision>| d.map(|d| d.is_yes()).unwrap_or(false);
            let exact = h.t0_in_h0.is_none_or(|d| d.is_exact()) && h.t0_sq_in_h0.is_none_or(|d| d.is_exact());
            let (tag, a0, coset) = match &h.t0 {
                None => (CaseTag::H0ExtendedByGp, h.h0.clone(), h.t_p.clone()),
                Some(_) if decided(h.t0_in_h0) => (CaseTag::HUnchanged, h.h0.clone(), h.gamma.clone().unwrap()),
                Some(t0) if decided(h.t0_sq_in_h0) => {
                    let mut a0 = h.h0.clone();
                    a0.push(t0.clone());
                    flags.insert("index_A0_over_H0".into(), json!(2));
                    (CaseTag::A0Index2Extension, a0, h.gamma.clone().unwrap())
                }
                Some(_) => (CaseTag::AEqualsH, h.h0.clone(), h.gamma.clone().unwrap()),
            };
            if !exact {
                notes.push(format!(
                    "torus membership undecided beyond exponent bound {}; undecided flags were treated as false",
                    h.search_bound
                ));
            }
            flags.insert("t0_is_identity".into(), json!(h.t0_is_identity));
            let mut generators: Vec<PlaneAut> = a0.iter().map(|t| torus.element(t)).collect();
            generators.push(torus.coset_element(&coset));
            let mut d = base(
                tag,
                Shape::Torus {
                    torus: torus.clone(),
                    a0: a0.clone(),
                    coset: Some(coset.clone()),
                },
                generators,
            );
            d.torus = Some(torus);
            d.torus_part = a0;
            d.coset = Some(coset);
            d.complete = exact;
            d.normal_form = Some(h);
            d.flags = flags;
            d.notes = notes;
            Ok(d)
        }
        CurveType::T6 => {
            let iso = isotropy(desc, &p)?;
            let mut d = base(CaseTag::Type6LowerBound, Shape::Kernel, gens);
            d.complete = false;
            d.kernel_part = Some(json!({
                "lower_bound": "H*Ker(R)",
                "kernel": "Ker(R) = {(a*x, y + P(x)) : P(0) = 0}, the maps restricting to the identity on x = 0",
                "membership_formula": "A = H*(G_p intersect A)",
                "G_p": iso.family,
            }));
            Ok(d)
        }
        ct => Err(Error::InvalidArgument(format!(
            "orbit stabilizers are described for canonical types 1-6, not {}",
            ct.name()
        ))),
    }
}

#[derive(Clone, Copy, Debug)]
pub struct StabOptions {
    pub l: usize,
    pub d: u32,
    pub bit_cap: u64,
    pub bound: usize,
}

impl Default for StabOptions {
    fn default() -> Self {
        StabOptions {
            l: DEFAULT_L,
            d: DEFAULT_D,
            bit_cap: DEFAULT_BIT_CAP,
            bound: DEFAULT_SEARCH_BOUND,
        }
    }
}

/// The stabilizer A of O_H(p), H = ⟨gens⟩, for a point on a canonical curve
/// that is the closure of the orbit.
pub fn orbit_stabilizer(
    desc: &CurveDescriptor,
    p: &Point,
    gens: &[PlaneAut],
    opts: StabOptions,
) -> Result<StabilizerDescriptor> {
    let k = desc.field().clone();
    let p = p.embed_into(&k);
    let gens: Vec<PlaneAut> = gens.iter().map(|g| g.embed_into(&k)).collect();
    let sample = group_orbit(&gens, &p, opts.l, opts.bit_cap)?;
    if sample.exhausted {
        return Err(Error::HypothesisNotMet(format!(
            "theorem hypothesis not met: the orbit is finite ({} points)",
            sample.len()
        )));
    }
    let rep = trichotomy(&sample, opts.d);
    match rep.curve() {
        Some(c) if c.is_associate(&desc.defining_poly) => {}
        Some(c) => {
            return Err(Error::HypothesisNotMet(format!(
                "theorem hypothesis not met: the orbit closure is {c}, not {}",
                desc.defining_poly
            )))
        }
        None => {
            return Err(Error::HypothesisNotMet(format!(
                "theorem hypothesis not met: no curve of degree <= {} through the orbit",
                opts.d
            )))
        }
    }
    let mut d = stabilizer_formula(desc, &p, &gens, opts.bound)?;
    let mut v = verify_window(&d.generators, &sample, &desc.defining_poly, opts.l / 2);
    if let (CaseTag::H0ExtendedByGp, Some(h)) = (d.case_tag, &d.normal_form) {
        // τ_p(h·p) = h⁻¹·p
        for t in &h.h0 {
            let g = h.torus.element(t);
            let ok = h.tau_p.compose(&g).apply_point(&p) == g.inverse().apply_point(&p);
            v.identities.push((format!("tau_p(h p) = h^-1 p for h = {t}"), ok));
        }
    }
    if let (CaseTag::A0Index2Extension, Some(h)) = (d.case_tag, &d.normal_form) {
        let ok = h.t0_in_h0 == Some(Decision::No) && h.t0_sq_in_h0 == Some(Decision::Yes);
        v.identities.push(("[A0 : H0] = 2".into(), ok));
    }
    d.verification = Some(v);
    Ok(d)
}

/// The stabilizer of the φ-orbit of p.
pub fn cyclic_orbit_stabilizer(
    phi: &PlaneAut,
    p: &Point,
    bounds: CycleBounds,
    relation_bound: usize,
) -> Result<StabilizerDescriptor> {
    let cc = component_cycle(phi, p, bounds)?;
    let c1 = cc.components[0].clone();
    let desc = classify_canonical(&c1);
    let k = c1.field().clone();
    let p = p.embed_into(&k);
    let phi = phi.embed_into(&k);
    let curve = cc.components.iter().skip(1).fold(c1.clone(), |acc, c| &acc * c);
    let window = cyclic_orbit(&phi, &p, bounds.n, bounds.bit_cap)?;
    let mut flags = BTreeMap::new();
    flags.insert("ell".into(), json!(cc.ell));
    flags.insert(
        "components".into(),
        json!(cc.components.iter().map(|c| c.to_string()).collect::<Vec<_>>()),
    );
    let mut notes = Vec::new();
    let mut relation_exponent = None;
    let mut tau = None;
    let mut identities = Vec::new();
    let (tag, complete, kernel_part) = match &desc.curve_type {
        CurveType::T1 { .. } | CurveType::T2 { .. } => {
            if p.x.is_zero() && p.y.is_zero() {
                return Err(Error::HypothesisNotMet("theorem hypothesis not met: p = (0, 0)".into()));
            }
            (CaseTag::CyclicA, true, None)
        }
        ct if ct.is_torus_type() => {
            let iso = isotropy(&desc, &p)?;
            let tau_p = iso.tau_p().expect("torus type").clone();
            let rel = cyclic_orbit(&phi, &p, relation_bound, bounds.bit_cap)?;
            let index = index_points(&rel);
            let target = tau_p.apply_point(&phi.apply_point(&p));
            let lhs = tau_p.compose(&phi);
            if let Some(Label::Power(i)) = index.get(&target) {
                if lhs.same_map(&phi.pow(*i).compose(&tau_p)) {
                    relation_exponent = Some(*i);
                }
            }
            flags.insert("relation_search_bound".into(), json!(relation_bound));
            if cc.ell > 1 {
                notes.push("closure has several components; tau_p is attached to C_1 only, so the result is a bounded verification".into());
            }
            match relation_exponent {
                Some(i) => {
                    for n in 1..=5i64 {
                        let ok = tau_p.compose(&phi.pow(n)).same_map(&phi.pow(i * n).compose(&tau_p));
                        identities.push((format!("tau_p phi^{n} = phi^{} tau_p", i * n), ok));
                    }
                    tau = Some(tau_p);
                    (CaseTag::CyclicBI, cc.ell == 1, None)
                }
                None => {
                    notes.push(format!(
                        "no relation tau_p phi = phi^i tau_p with |i| <= {relation_bound}"
                    ));
                    (CaseTag::CyclicBII, false, None)
                }
            }
        }
        CurveType::T6 | CurveType::Fence { .. } => {
            let gp = match &desc.curve_type {
                CurveType::T6 => isotropy(&desc, &p)?.family,
                _ => Some(format!(
                    "{{(alpha*x + beta, gamma*y + Q(x)) in Aut(A^2, C_1) : alpha*x_p + beta = x_p, gamma*y_p + Q(x_p) = y_p}} at p = {p}"
                )),
            };
            if matches!(desc.curve_type, CurveType::Fence { .. }) {
                notes.push(
                    "C_1 is a fence; over the closure each line is carried to x = 0 by an affine change of coordinates"
                        .into(),
                );
            }
            let kernel = json!({
                "ell": cc.ell,
                "C_1": c1.to_string(),
                "G_p": gp,
                "formula": "A = intersection over 0 <= i < ell of <phi>*(Aut(A^2, O_{phi^ell}(p))*phi^-i)",
                "lower_bound": "intersection over 0 <= i < ell of <phi>*(Ker(R)*phi^-i)",
                "kernel": "Ker(R): automorphisms restricting to the identity on C_1",
                "membership": "semidecision: exact 'in' for powers of phi and for maps fixing the closure pointwise; bounded window check otherwise",
            });
            (CaseTag::CyclicC, false, Some(kernel))
        }
        _ => {
            return Err(Error::HypothesisNotMet(format!(
                "theorem hypothesis not met: C_1 = {c1} is not a canonical curve; conjugate the map first"
            )))
        }
    };
    let mut generators = vec![phi.clone()];
    generators.extend(tau.iter().cloned());
    let r = (bounds.n / 2) / relation_exponent.map_or(1, |i| i.unsigned_abs().max(1) as usize);
    let mut v = verify_window(&generators, &window, &curve, r);
    v.identities = identities;
    let kernel = kernel_part.is_some();
    let (is_algebraic, reason) = algebraicity(k.is_finite(), kernel);
    Ok(StabilizerDescriptor {
        case_tag: tag,
        curve_type: desc.curve_type.clone(),
        curve,
        point: p,
        torus: None,
        torus_part: vec![],
        coset: None,
        generators,
        relation_exponent,
        kernel_part,
        complete,
        is_algebraic,
        algebraicity_reason: reason,
        normal_form: None,
        flags,
        verification: Some(v),
        notes,
        shape: if kernel {
            Shape::Kernel
        } else {
            Shape::Cyclic { phi, tau_p: tau }
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse::parse_poly;
    use crate::algebra::Field;
    use crate::autmap::{diagonal, swap};

    fn q() -> Field {
        Field::rationals()
    }

    fn t3() -> CurveDescriptor {
        classify_canonical(&parse_poly(&q(), "x*y - 1").unwrap())
    }

    fn pt(x: i64, y: i64) -> Point {
        Point::new(q().int(x), q().int(y))
    }

    #[test]
    fn normal_form_examples() {
        let k = q();
        let four = diagonal(k.int(4), k.rat(1, 4)).unwrap();
        let two_sigma = diagonal(k.int(2), k.rat(1, 2)).unwrap().compose(&swap(&k));
        let h = subgroup_normal_form(std::slice::from_ref(&four), &t3(), &pt(1, 1), 10).unwrap();
        assert_eq!(h.h0, vec![TorusElem::Scalar(k.int(4))]);
        assert!(h.t0.is_none());
        let h = subgroup_normal_form(&[four, two_sigma], &t3(), &pt(1, 1), 10).unwrap();
        assert_eq!(h.t0, Some(TorusElem::Scalar(k.int(2))));
        assert_eq!(h.t0_in_h0, Some(Decision::No));
        assert_eq!(h.t0_sq_in_h0, Some(Decision::Yes));
        let h = subgroup_normal_form(&[swap(&k)], &t3(), &pt(1, 1), 10).unwrap();
        assert!(h.t0_is_identity && h.h0.is_empty());
    }

    #[test]
    fn theorem_cases_over_q() {
        let k = q();
        let four = diagonal(k.int(4), k.rat(1, 4)).unwrap();
        let d = orbit_stabilizer(&t3(), &pt(1, 1), std::slice::from_ref(&four), StabOptions::default()).unwrap();
        assert_eq!(d.case_tag, CaseTag::H0ExtendedByGp);
        assert_eq!(d.torus_part, vec![TorusElem::Scalar(k.int(4))]);
        assert!(d.verification.as_ref().unwrap().all_passed());
        assert!(!d.is_algebraic);

        let two_sigma = diagonal(k.int(2), k.rat(1, 2)).unwrap().compose(&swap(&k));
        let d = orbit_stabilizer(&t3(), &pt(1, 1), &[four, two_sigma], StabOptions::default()).unwrap();
        assert_eq!(d.case_tag, CaseTag::A0Index2Extension);
        assert!(d.torus_part.contains(&TorusElem::Scalar(k.int(2))));
        assert_eq!(d.coset, Some(TorusElem::Scalar(k.int(2))));
        assert!(d.verification.as_ref().unwrap().all_passed());

        let t1 = classify_canonical(&parse_poly(&k, "x^3 - y^2").unwrap());
        let g = diagonal(k.int(4), k.int(8)).unwrap();
        let d = orbit_stabilizer(&t1, &pt(1, 1), &[g], StabOptions::default()).unwrap();
        assert_eq!(d.case_tag, CaseTag::AEqualsH);
        assert!(d.complete);
    }

    #[test]
    fn hypothesis_failures() {
        let k = q();
        let neg = diagonal(-k.one(), -k.one()).unwrap();
        assert!(matches!(
            orbit_stabilizer(&t3(), &pt(1, 1), &[neg], StabOptions::default()),
            Err(Error::HypothesisNotMet(_))
        ));
        let conic = classify_canonical(&parse_poly(&k, "x^2 + y^2 - 1").unwrap());
        assert!(matches!(
            stabilizer_formula(&conic, &pt(1, 0), &[diagonal(k.int(2), k.rat(1, 2)).unwrap()], 10),
            Err(Error::NotInFamily(_))
        ));
    }

    #[test]
    fn cyclic_cases() {
        let k = q();
        let b = CycleBounds::default();
        let d = cyclic_orbit_stabilizer(&diagonal(k.int(4), k.int(8)).unwrap(), &pt(1, 1), b, 20).unwrap();
        assert_eq!(d.case_tag, CaseTag::CyclicA);
        assert_eq!(d.curve.to_string(), "x^3 - y^2");

        let d = cyclic_orbit_stabilizer(&diagonal(k.int(2), k.rat(1, 2)).unwrap(), &pt(1, 1), b, 20).unwrap();
        assert_eq!(d.case_tag, CaseTag::CyclicBI);
        assert_eq!(d.relation_exponent, Some(-1));
        assert!(d.generators[1].same_map(&swap(&k)));
        assert!(d.verification.as_ref().unwrap().all_passed());
    }
}

//! Point stabilizers inside the symmetry group of a canonical curve.

use serde_json::{json, Value};

use crate::algebra::{BivarPoly, Field, FieldElem, UniPoly};
use crate::autmap::{elementary, PlaneAut, Point};
use crate::classify::{CurveDescriptor, CurveType};
use crate::error::{Error, Result};
use crate::torus::{Torus, TorusElem};

#[derive(Clone, Debug)]
pub struct IsoElement {
    pub map: PlaneAut,
    /// For the involution of types 3–5: the parameter t with element t·involution.
    pub torus_param: Option<TorusElem>,
    pub label: String,
}

#[derive(Clone, Debug)]
pub struct IsotropyReport {
    pub curve_type: CurveType,
    pub point: Point,
    pub elements: Vec<IsoElement>,
    /// Type 6: the whole isotropy group as a parametrized family.
    pub family: Option<String>,
}

impl IsotropyReport {
    /// τ_p, the nontrivial element for types 3–5.
    pub fn tau_p(&self) -> Option<&PlaneAut> {
        self.elements.iter().find(|e| e.torus_param.is_some()).map(|e| &e.map)
    }

    pub fn t_p(&self) -> Option<&TorusElem> {
        self.elements.iter().find_map(|e| e.torus_param.as_ref())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "curve_type": self.curve_type.name(),
            "params": self.curve_type.params_json(),
            "point": self.point.to_json(),
            "elements": self.elements.iter().map(|e| json!({
                "label": e.label,
                "word": e.map.word_to_json(),
                "map": e.map.to_string(),
                "torus_param": e.torus_param.as_ref().map(TorusElem::to_json),
            })).collect::<Vec<_>>(),
            "family": self.family,
            "verified": "every listed element fixes the point and stabilizes the curve",
        })
    }
}

/// The parameter t with τ_p = t·involution, for a point on a type 3–5 curve.
pub fn isotropy_param(ct: &CurveType, p: &Point) -> Result<TorusElem> {
    let (x, y) = (&p.x, &p.y);
    match ct {
        CurveType::T3 { .. } => {
            let c = x.checked_div(y)?;
            Ok(TorusElem::Scalar(c))
        }
        CurveType::T4 { lambda, .. } => {
            let k = x.field();
            let two = k.int(2);
            Ok(TorusElem::Pair(&two * lambda * x * x - k.one(), &two * x * y))
        }
        CurveType::T5 { mu } => Ok(TorusElem::Pair(x * x + y * y, mu * y * y)),
        _ => Err(Error::InvalidArgument(format!(
            "no torus involution for curve type {}",
            ct.name()
        ))),
    }
}

fn on_curve(f: &BivarPoly, p: &Point) -> bool {
    f.eval(&p.x, &p.y).is_zero()
}

/// A sample member of the type-6 isotropy family at (0, y_p):
/// (a·x, b·y + P(x)) with P(0) = (1 − b)·y_p.
fn type6_sample(k: &Field, yp: &FieldElem) -> Result<PlaneAut> {
    let a = if k.int(2).is_zero() { k.one() } else { k.int(2) };
    let b = -k.one();
    let p = UniPoly::new(k, vec![(k.one() - &b) * yp, k.one()]);
    elementary(a, b, p)
}

pub fn isotropy(desc: &CurveDescriptor, p: &Point) -> Result<IsotropyReport> {
    let f = &desc.defining_poly;
    let k = desc.field().clone();
    let p = p.embed_into(&k);
    if !on_curve(f, &p) {
        return Err(Error::InvalidArgument(format!("{p} is not on the curve {f}")));
    }
    let identity = IsoElement {
        map: PlaneAut::identity(&k),
        torus_param: None,
        label: "Id".into(),
    };
    let mut family = None;
    let elements = match &desc.curve_type {
        CurveType::T1 { .. } if p.x.is_zero() && p.y.is_zero() => {
            return Err(Error::HypothesisNotMet(
                "the whole torus fixes the singular point (0, 0)".into(),
            ));
        }
        CurveType::T1 { .. } | CurveType::T2 { .. } => vec![identity],
        ct @ (CurveType::T3 { .. } | CurveType::T4 { .. } | CurveType::T5 { .. }) => {
            let torus = Torus::from_type(ct).expect("torus type");
            let t = isotropy_param(ct, &p)?;
            if !torus.is_member(&t) {
                return Err(Error::InvalidArgument(format!(
                    "isotropy parameter {t} is off the torus"
                )));
            }
            let label = match ct {
                CurveType::T3 { .. } => "(x_p/y_p)*sigma",
                CurveType::T4 { .. } => "t_(2*lambda*x_p^2 - 1, 2*x_p*y_p)*tau",
                _ => "t_(x_p^2 + y_p^2, mu*y_p^2)*sigma_mu",
            };
            vec![
                identity,
                IsoElement {
                    map: torus.coset_element(&t),
                    torus_param: Some(t),
                    label: label.into(),
                },
            ]
        }
        CurveType::T6 => {
            family = Some(format!("{{(a*x, b*y + P(x)) : a, b != 0, P(0) = (1 - b)*({})}}", p.y));
            vec![
                identity,
                IsoElement {
                    map: type6_sample(&k, &p.y)?,
                    torus_param: None,
                    label: "sample (a*x, b*y + P(x)) with P(0) = (1 - b)*y_p".into(),
                },
            ]
        }
        ct => {
            return Err(Error::InvalidArgument(format!(
                "isotropy is described for canonical types 1-6, not {}",
                ct.name()
            )));
        }
    };
    for e in &elements {
        if e.map.apply_point(&p) != p || !e.map.stabilizes(f) {
            return Err(Error::InvalidArgument(format!(
                "isotropy element {} failed verification",
                e.map
            )));
        }
    }
    Ok(IsotropyReport {
        curve_type: desc.curve_type.clone(),
        point: p,
        elements,
        family,
    })
}

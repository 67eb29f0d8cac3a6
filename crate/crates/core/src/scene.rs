//! Scene files: one JSON document declaring a field, named automorphisms,
//! points, point sets, curves and default bounds.
//!
//! ```json
//! {
//!   "name": "eje1",
//!   "field": {"kind": "quadratic", "d": 2},
//!   "automorphisms": {"phi": [{"kind": "elementary", "a": "-1", "b": "1", "P": [["0", "-2"], ["2", "1"]]}]},
//!   "points": {"p": ["s", "0"]},
//!   "point_sets": {"delta": [["s", "0"]]},
//!   "curves": {"C": "x*y - 1"},
//!   "options": {"N": 50, "L": 8, "D": 4, "lmax": 6, "bit_cap": 1000000}
//! }
//! ```

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::path::Path;

use serde::de::{self, Deserializer, MapAccess, Visitor};
use serde::Deserialize;
use serde_json::Value;

use crate::algebra::parse::{field_from_json, parse_poly, poly_from_json};
use crate::algebra::{BivarPoly, Field};
use crate::autmap::{PlaneAut, Point};
use crate::closure::{DEFAULT_D, DEFAULT_LMAX};
use crate::error::{Error, Result};
use crate::orbit::{DEFAULT_BIT_CAP, DEFAULT_L, DEFAULT_N};

pub const DEFAULT_M: usize = 6;

/// Bounds a scene may set; command line flags take precedence.
#[derive(Clone, Copy, Debug, Default, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct SceneOptions {
    #[serde(rename = "N")]
    pub n: Option<usize>,
    #[serde(rename = "L")]
    pub l: Option<usize>,
    #[serde(rename = "D")]
    pub d: Option<u32>,
    pub lmax: Option<usize>,
    #[serde(rename = "M")]
    pub m: Option<usize>,
    pub bit_cap: Option<u64>,
}

/// Fully resolved bounds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Bounds {
    pub n: usize,
    pub l: usize,
    pub d: u32,
    pub lmax: usize,
    pub m: usize,
    pub bit_cap: u64,
}

impl SceneOptions {
    /// `self` overrides `base`.
    pub fn over(&self, base: &SceneOptions) -> SceneOptions {
        SceneOptions {
            n: self.n.or(base.n),
            l: self.l.or(base.l),
            d: self.d.or(base.d),
            lmax: self.lmax.or(base.lmax),
            m: self.m.or(base.m),
            bit_cap: self.bit_cap.or(base.bit_cap),
        }
    }

    pub fn resolve(&self) -> Bounds {
        Bounds {
            n: self.n.unwrap_or(DEFAULT_N),
            l: self.l.unwrap_or(DEFAULT_L),
            d: self.d.unwrap_or(DEFAULT_D),
            lmax: self.lmax.unwrap_or(DEFAULT_LMAX),
            m: self.m.unwrap_or(DEFAULT_M),
            bit_cap: self.bit_cap.unwrap_or(DEFAULT_BIT_CAP),
        }
    }
}

/// A JSON object whose keys are checked for duplicates (serde_json would
/// silently keep the last one).
struct UniqueObject(Vec<(String, Value)>);

impl<'de> Deserialize<'de> for UniqueObject {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = UniqueObject;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an object of named entries")
            }
            fn visit_map<A: MapAccess<'de>>(self, mut m: A) -> std::result::Result<UniqueObject, A::Error> {
                let mut seen = HashSet::new();
                let mut out = Vec::new();
                while let Some((k, v)) = m.next_entry::<String, Value>()? {
                    if !seen.insert(k.clone()) {
                        return Err(de::Error::custom(format!("duplicate name \"{k}\"")));
                    }
                    out.push((k, v));
                }
                Ok(UniqueObject(out))
            }
        }
        d.deserialize_map(V)
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScene {
    name: Option<String>,
    description: Option<String>,
    field: Value,
    #[serde(default)]
    automorphisms: Option<UniqueObject>,
    #[serde(default)]
    points: Option<UniqueObject>,
    #[serde(default)]
    point_sets: Option<UniqueObject>,
    #[serde(default)]
    curves: Option<UniqueObject>,
    #[serde(default)]
    options: SceneOptions,
}

#[derive(Clone, Debug)]
pub struct Scene {
    pub name: Option<String>,
    pub description: Option<String>,
    pub field: Field,
    pub automorphisms: BTreeMap<String, PlaneAut>,
    pub points: BTreeMap<String, Point>,
    pub point_sets: BTreeMap<String, Vec<Point>>,
    pub curves: BTreeMap<String, BivarPoly>,
    pub options: SceneOptions,
}

fn entries(o: Option<UniqueObject>) -> Vec<(String, Value)> {
    o.map(|u| u.0).unwrap_or_default()
}

fn with_context<T>(ctx: &str, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Parse { context, message } => Error::parse(format!("{ctx}: {context}"), message),
        other => Error::parse(ctx, other.to_string()),
    })
}

impl Scene {
    pub fn parse(src: &str) -> Result<Scene> {
        let raw: RawScene = serde_json::from_str(src)
            .map_err(|e| Error::parse(format!("line {} column {}", e.line(), e.column()), e.to_string()))?;
        let field = with_context("field", field_from_json(&raw.field))?;
        let mut names = HashSet::new();
        let mut unique = |section: &str, name: &str| {
            if names.insert(name.to_string()) {
                Ok(())
            } else {
                Err(Error::parse(
                    format!("{section}.{name}"),
                    "name already used in another section",
                ))
            }
        };
        let mut automorphisms = BTreeMap::new();
        for (k, v) in entries(raw.automorphisms) {
            unique("automorphisms", &k)?;
            let g = with_context(&format!("automorphisms.{k}"), PlaneAut::from_json(&field, &v))?;
            automorphisms.insert(k, g);
        }
        let mut points = BTreeMap::new();
        for (k, v) in entries(raw.points) {
            unique("points", &k)?;
            let p = with_context(&format!("points.{k}"), Point::from_json(&field, &v))?;
            points.insert(k, p);
        }
        let mut point_sets = BTreeMap::new();
        for (k, v) in entries(raw.point_sets) {
            unique("point_sets", &k)?;
            let ctx = format!("point_sets.{k}");
            let arr = v
                .as_array()
                .filter(|a| !a.is_empty())
                .ok_or_else(|| Error::parse(&ctx, "a point set is a nonempty list of points"))?;
            let pts = arr
                .iter()
                .enumerate()
                .map(|(i, p)| with_context(&format!("{ctx}[{i}]"), Point::from_json(&field, p)))
                .collect::<Result<Vec<_>>>()?;
            point_sets.insert(k, pts);
        }
        let mut curves = BTreeMap::new();
        for (k, v) in entries(raw.curves) {
            unique("curves", &k)?;
            let ctx = format!("curves.{k}");
            let f = match &v {
                Value::String(s) => parse_poly(&field, s),
                other => poly_from_json(&field, other),
            };
            let f = with_context(&ctx, f)?;
            if f.is_constant() {
                return Err(Error::parse(ctx, "a curve needs a nonconstant polynomial"));
            }
            curves.insert(k, f);
        }
        Ok(Scene {
            name: raw.name,
            description: raw.description,
            field,
            automorphisms,
            points,
            point_sets,
            curves,
            options: raw.options,
        })
    }

    pub fn load(path: &Path) -> Result<Scene> {
        let src = std::fs::read_to_string(path).map_err(|e| Error::parse(path.display().to_string(), e.to_string()))?;
        Scene::parse(&src).map_err(|e| match e {
            Error::Parse { context, message } => Error::parse(format!("{}: {context}", path.display()), message),
            other => other,
        })
    }

    fn lookup<'a, T>(map: &'a BTreeMap<String, T>, section: &str, name: &str) -> Result<&'a T> {
        map.get(name).ok_or_else(|| {
            let known: Vec<&str> = map.keys().map(String::as_str).collect();
            Error::InvalidArgument(format!("no {section} named \"{name}\" (known: {})", known.join(", ")))
        })
    }

    pub fn automorphism(&self, name: &str) -> Result<&PlaneAut> {
        Self::lookup(&self.automorphisms, "automorphism", name)
    }

    pub fn point(&self, name: &str) -> Result<&Point> {
        Self::lookup(&self.points, "point", name)
    }

    pub fn point_set(&self, name: &str) -> Result<&Vec<Point>> {
        Self::lookup(&self.point_sets, "point set", name)
    }

    pub fn curve(&self, name: &str) -> Result<&BivarPoly> {
        Self::lookup(&self.curves, "curve", name)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SCENE: &str = r#"{
        "field": {"kind": "quadratic", "d": 2},
        "automorphisms": {"phi": [{"kind": "elementary", "a": "-1", "b": "1", "P": [["0", "-2"], ["2", "1"]]}]},
        "points": {"p": ["s", "0"]},
        "curves": {"C": "x^2 - 2"},
        "options": {"N": 7}
    }"#;

    #[test]
    fn parses_scene() {
        let s = Scene::parse(SCENE).unwrap();
        assert_eq!(s.automorphism("phi").unwrap().to_string(), "(-x, x^2 + y - 2)");
        assert_eq!(s.point("p").unwrap().x, s.field.sqrt_generator().unwrap());
        assert_eq!(s.options.resolve().n, 7);
        assert_eq!(s.options.resolve().l, DEFAULT_L);
        assert!(s.point("q").is_err());
    }

    #[test]
    fn diagnostics() {
        let dup = r#"{"field": {"kind": "rationals"}, "points": {"p": ["1", "1"], "p": ["2", "2"]}}"#;
        assert!(Scene::parse(dup).unwrap_err().to_string().contains("duplicate name"));
        let cross = r#"{"field": {"kind": "rationals"}, "points": {"p": ["1", "1"]}, "curves": {"p": "x"}}"#;
        assert!(Scene::parse(cross).is_err());
        let bad = "{\"field\": {\"kind\": \"rationals\"},\n \"points\": {\"p\": [\"1\", \"sqrt(2)\"]}}";
        let e = Scene::parse(bad).unwrap_err().to_string();
        assert!(e.contains("points.p"), "{e}");
        let syntax = "{\"field\": {\"kind\": \"rationals\"},\n \"points\": }";
        assert!(Scene::parse(syntax).unwrap_err().to_string().contains("line 2"));
    }
}

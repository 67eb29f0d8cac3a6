//! Finite windows of orbits under a cyclic group ⟨φ⟩ or a finitely generated
//! group, and Galois saturation of point sets.

use std::collections::{HashMap, HashSet};

use serde_json::{json, Value};

use crate::autmap::{PlaneAut, Point};
use crate::error::{Error, Result};

pub const DEFAULT_N: usize = 50;
pub const DEFAULT_L: usize = 8;
pub const DEFAULT_BIT_CAP: u64 = 1_000_000;

/// How a sample point was reached from the base point.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Label {
    /// φⁿ(p) for a cyclic orbit.
    Power(i64),
    /// A word in the generators, outermost letter first: `k > 0` is generator
    /// `k - 1`, `k < 0` its inverse.
    Word(Vec<i32>),
}

impl Label {
    pub fn to_json(&self) -> Value {
        match self {
            Label::Power(n) => json!(n),
            Label::Word(w) => json!(w),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrbitKind {
    Cyclic,
    Group,
}

#[derive(Clone, Debug)]
pub struct OrbitSample {
    pub kind: OrbitKind,
    pub generators: Vec<PlaneAut>,
    pub base_point: Point,
    pub points: Vec<(Label, Point)>,
    /// N for cyclic windows, L for BFS.
    pub bound: usize,
    pub periodic: Option<usize>,
    pub exhausted: bool,
    pub truncated_forward: bool,
    pub truncated_backward: bool,
    pub bit_cap: u64,
}

impl OrbitSample {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point_list(&self) -> Vec<Point> {
        self.points.iter().map(|(_, p)| p.clone()).collect()
    }

    pub fn point_set(&self) -> HashSet<Point> {
        self.points.iter().map(|(_, p)| p.clone()).collect()
    }

    /// The driving map of a cyclic sample.
    pub fn driver(&self) -> Option<&PlaneAut> {
        match self.kind {
            OrbitKind::Cyclic => self.generators.first(),
            OrbitKind::Group => None,
        }
    }

    /// Points whose label has "size" at most `r`: |n| ≤ r for cyclic
    /// samples, word length ≤ r for BFS samples.
    pub fn sub_window(&self, r: usize) -> Vec<Point> {
        self.points
            .iter()
            .filter(|(l, _)| match l {
                Label::Power(n) => n.unsigned_abs() as usize <= r,
                Label::Word(w) => w.len() <= r,
            })
            .map(|(_, p)| p.clone())
            .collect()
    }

    /// Recomputes a labelled point from the base point.
    pub fn evaluate_label(&self, label: &Label) -> Point {
        match label {
            Label::Power(n) => self.generators[0].pow(*n).apply_point(&self.base_point),
            Label::Word(w) => {
                let mut q = self.base_point.clone();
                for &k in w.iter().rev() {
                    let g = &self.generators[(k.unsigned_abs() - 1) as usize];
                    q = if k > 0 {
                        g.apply_point(&q)
                    } else {
                        g.inverse().apply_point(&q)
                    };
                }
                q
            }
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "kind": match self.kind { OrbitKind::Cyclic => "cyclic", OrbitKind::Group => "group" },
            "generators": self.generators.iter().map(PlaneAut::word_to_json).collect::<Vec<_>>(),
            "base_point": self.base_point.to_json(),
            "points": self.points.iter().map(|(l, p)| json!({"label": l.to_json(), "point": p.to_json()})).collect::<Vec<_>>(),
            "bound": self.bound,
            "periodic": self.periodic,
            "exhausted": self.exhausted,
            "truncated_forward": self.truncated_forward,
            "truncated_backward": self.truncated_backward,
        })
    }
}

fn size_error(what: &str, bits: u64, cap: u64) -> Error {
    Error::SizeLimit {
        what: what.to_string(),
        bits,
        cap,
    }
}

/// The window {φⁿ(p) : −N ≤ n ≤ N}, built by interleaving forward and
/// backward iteration. A direction whose coordinates exceed `bit_cap` is
/// truncated and flagged; if both directions blow up the call fails.
pub fn cyclic_orbit(phi: &PlaneAut, p: &Point, n_max: usize, bit_cap: u64) -> Result<OrbitSample> {
    if n_max == 0 {
        return Err(Error::InvalidArgument("N must be at least 1".into()));
    }
    let inv = phi.inverse();
    let mut sample = OrbitSample {
        kind: OrbitKind::Cyclic,
        generators: vec![phi.clone()],
        base_point: p.clone(),
        points: vec![(Label::Power(0), p.clone())],
        bound: n_max,
        periodic: None,
        exhausted: false,
        truncated_forward: false,
        truncated_backward: false,
        bit_cap,
    };
    let mut seen: HashSet<Point> = HashSet::from([p.clone()]);
    let mut fwd = p.clone();
    let mut bwd = p.clone();
    for n in 1..=n_max as i64 {
        for forward in [true, false] {
            let truncated = if forward {
                sample.truncated_forward
            } else {
                sample.truncated_backward
            };
            if truncated {
                continue;
            }
            let cur = if forward { &mut fwd } else { &mut bwd };
            *cur = if forward {
                phi.apply_point(cur)
            } else {
                inv.apply_point(cur)
            };
            if seen.contains(cur) {
                // φ is a bijection, so any repeat means the orbit is periodic.
                return Ok(periodic_sample(sample, phi, p, seen.len() + 1));
            }
            if cur.bit_size() > bit_cap {
                if forward {
                    sample.truncated_forward = true;
                } else {
                    sample.truncated_backward = true;
                }
                if sample.truncated_forward && sample.truncated_backward {
                    return Err(size_error("orbit point", cur.bit_size(), bit_cap));
                }
                continue;
            }
            seen.insert(cur.clone());
            sample
                .points
                .push((Label::Power(if forward { n } else { -n }), cur.clone()));
        }
    }
    Ok(sample)
}

fn periodic_sample(mut sample: OrbitSample, phi: &PlaneAut, p: &Point, limit: usize) -> OrbitSample {
    let mut points = vec![(Label::Power(0), p.clone())];
    let mut q = phi.apply_point(p);
    let mut n = 1;
    while q != *p {
        assert!(n <= limit, "periodic orbit did not close");
        points.push((Label::Power(n as i64), q.clone()));
        q = phi.apply_point(&q);
        n += 1;
    }
    sample.points = points;
    sample.periodic = Some(n);
    sample.exhausted = true;
    sample.truncated_forward = false;
    sample.truncated_backward = false;
    sample
}

/// Breadth-first search over words of length ≤ L in the generators and their
/// inverses (letters tried in the order g1, g1⁻¹, g2, g2⁻¹, ...).
pub fn group_orbit(gens: &[PlaneAut], p: &Point, l_max: usize, bit_cap: u64) -> Result<OrbitSample> {
    if gens.is_empty() {
        return Err(Error::InvalidArgument("at least one generator is required".into()));
    }
    if l_max == 0 {
        return Err(Error::InvalidArgument("L must be at least 1".into()));
    }
    let mut letters: Vec<(i32, PlaneAut)> = Vec::with_capacity(2 * gens.len());
    for (i, g) in gens.iter().enumerate() {
        letters.push((i as i32 + 1, g.clone()));
        letters.push((-(i as i32 + 1), g.inverse()));
    }
    let mut seen: HashSet<Point> = HashSet::from([p.clone()]);
    let mut points = vec![(Label::Word(Vec::new()), p.clone())];
    let mut frontier: Vec<(Vec<i32>, Point)> = vec![(Vec::new(), p.clone())];
    let mut exhausted = false;
    for _depth in 1..=l_max {
        let mut next = Vec::new();
        for (w, q) in &frontier {
            for (k, g) in &letters {
                let r = g.apply_point(q);
                if seen.contains(&r) {
                    continue;
                }
                if r.bit_size() > bit_cap {
                    return Err(size_error("orbit point", r.bit_size(), bit_cap));
                }
                let mut word = Vec::with_capacity(w.len() + 1);
                word.push(*k);
                word.extend_from_slice(w);
                seen.insert(r.clone());
                points.push((Label::Word(word.clone()), r.clone()));
                next.push((word, r));
            }
        }
        frontier = next;
        if frontier.is_empty() {
            exhausted = true;
            break;
        }
    }
    if !exhausted {
        // One probe layer: if the last frontier has no new neighbours the
        // listed set is closed under every letter and the orbit is complete.
        exhausted = frontier
            .iter()
            .all(|(_, q)| letters.iter().all(|(_, g)| seen.contains(&g.apply_point(q))));
    }
    Ok(OrbitSample {
        kind: OrbitKind::Group,
        generators: gens.to_vec(),
        base_point: p.clone(),
        points,
        bound: l_max,
        periodic: None,
        exhausted,
        truncated_forward: false,
        truncated_backward: false,
        bit_cap,
    })
}

/// Closes a point set under the Galois action (applied to both coordinates
/// at once). Order: each input point followed by its new conjugates.
pub fn galois_saturate(points: &[Point]) -> Vec<Point> {
    let mut seen: HashSet<Point> = HashSet::new();
    let mut out = Vec::new();
    for p in points {
        let mut q = p.clone();
        loop {
            if seen.insert(q.clone()) {
                out.push(q.clone());
            }
            q = q.conjugate();
            if q == *p {
                break;
            }
        }
    }
    out
}

/// Index of each point in a sample, for fast membership queries.
pub fn index_points(sample: &OrbitSample) -> HashMap<Point, Label> {
    sample.points.iter().map(|(l, p)| (p.clone(), l.clone())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse::parse_univariate;
    use crate::algebra::Field;
    use crate::autmap::{diagonal, elementary, swap};

    #[test]
    fn masejem2_window() {
        let q = Field::rationals();
        let k = Field::quadratic(2).unwrap();
        let phi = elementary(q.one(), q.int(2), parse_univariate(&q, "x^2 - 2").unwrap()).unwrap();
        let p = Point::new(k.sqrt_generator().unwrap(), k.one());
        let s = cyclic_orbit(&phi, &p, 3, DEFAULT_BIT_CAP).unwrap();
        assert_eq!(s.len(), 7);
        for (l, pt) in &s.points {
            let Label::Power(n) = l else { panic!() };
            assert_eq!(pt.x, k.sqrt_generator().unwrap());
            assert_eq!(pt.y, k.int(2).powi(*n));
        }
    }

    #[test]
    fn identity_is_periodic() {
        let q = Field::rationals();
        let p = Point::new(q.int(3), q.int(4));
        let s = cyclic_orbit(&crate::autmap::PlaneAut::identity(&q), &p, 10, DEFAULT_BIT_CAP).unwrap();
        assert_eq!(s.periodic, Some(1));
        assert!(s.exhausted);
        assert_eq!(s.point_list(), vec![p]);
    }

    #[test]
    fn masejem_b_window() {
        let q = Field::rationals();
        let phi = elementary(q.int(-1), q.int(2), parse_univariate(&q, "x^2 - 1").unwrap()).unwrap();
        let s = cyclic_orbit(&phi, &Point::new(q.one(), q.one()), 2, DEFAULT_BIT_CAP).unwrap();
        let expect: HashSet<Point> = [(1, 1, 1), (-1, 2, 1), (1, 4, 1), (-1, 1, 2), (1, 1, 4)]
            .iter()
            .map(|&(x, n, d)| Point::new(q.int(x), q.rat(n, d)))
            .collect();
        assert_eq!(s.point_set(), expect);
    }

    #[test]
    fn periodic_detected_through_backward_hit() {
        let f5 = Field::prime(5).unwrap();
        let phi = diagonal(f5.int(2), f5.int(3)).unwrap();
        let s = cyclic_orbit(&phi, &Point::new(f5.one(), f5.one()), 10, DEFAULT_BIT_CAP).unwrap();
        assert_eq!(s.periodic, Some(4));
        assert_eq!(s.len(), 4);
    }

    #[test]
    fn bfs_examples() {
        let f5 = Field::prime(5).unwrap();
        let g = diagonal(f5.int(2), f5.int(3)).unwrap();
        let s = group_orbit(&[g], &Point::new(f5.one(), f5.one()), 10, DEFAULT_BIT_CAP).unwrap();
        assert!(s.exhausted);
        assert_eq!(s.len(), 4);

        let q = Field::rationals();
        let s = group_orbit(&[swap(&q)], &Point::new(q.one(), q.int(2)), 5, DEFAULT_BIT_CAP).unwrap();
        assert!(s.exhausted);
        assert_eq!(s.len(), 2);

        let t = diagonal(q.int(2), q.rat(1, 2)).unwrap();
        let s = group_orbit(&[t, swap(&q)], &Point::new(q.int(2), q.rat(1, 2)), 2, DEFAULT_BIT_CAP).unwrap();
        assert!(!s.exhausted);
        assert_eq!(s.len(), 6);
        for (l, pt) in &s.points {
            assert_eq!(&s.evaluate_label(l), pt);
        }
    }

    #[test]
    fn saturation() {
        let k = Field::quadratic(2).unwrap();
        let p = Point::new(k.sqrt_generator().unwrap(), k.zero());
        let sat = galois_saturate(std::slice::from_ref(&p));
        assert_eq!(sat, vec![p.clone(), p.conjugate()]);
        assert_eq!(galois_saturate(&sat), sat);
        let f4 = Field::finite(4).unwrap();
        let t = f4.ext_generator().unwrap();
        let sat = galois_saturate(&[Point::new(t.clone(), f4.zero())]);
        assert_eq!(sat.len(), 2);
        assert_eq!(sat[1].x, &t + f4.one());
    }
}

//! Configurations of infinitely near points, proximity, and the pairing on
//! vectors indexed by a configuration.

use crate::blowup::Branch;
use crate::exactalg::{Fe, Rational};
use crate::vfield::Chart;
use num_traits::{One, Zero};
use serde::Serialize;
use std::collections::{BTreeSet, HashMap};
use std::fmt::{self, Write};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InfNearError {
    #[error("point {0} does not exist")]
    UnknownPoint(usize),
    #[error("point {id}: {reason}")]
    Malformed { id: usize, reason: String },
    #[error("vectors indexed by configurations of sizes {0} and {1}")]
    IndexMismatch(usize, usize),
    #[error("not a parent-closed subset of the configuration")]
    NotSubconfiguration,
}

/// Where a point sits: a point of the plane given in a chart, or a point of
/// the exceptional divisor of its parent.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Location {
    Plane { chart: Chart, coords: [Fe; 2] },
    Divisor { branch: Branch, coordinate: Fe },
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Location::Plane { chart: Chart::X, coords } => write!(f, "(1 : {} : {})", coords[0], coords[1]),
            Location::Plane { chart: Chart::Y, coords } => write!(f, "({} : 1 : {})", coords[0], coords[1]),
            Location::Plane { chart: Chart::Z, coords } => write!(f, "({} : {} : 1)", coords[0], coords[1]),
            Location::Divisor { branch, coordinate } => write!(f, "{} at {}", branch, coordinate),
        }
    }
}

#[derive(Clone, Debug)]
pub struct InfNearPoint {
    pub id: usize,
    pub parent: Option<usize>,
    pub location: Location,
    /// Number of blow-ups above the plane.
    pub level: usize,
    /// Sorted ids of the points this one is proximate to.
    pub proximate_to: Vec<usize>,
    /// Size of the Galois orbit of this point over the field of its parent.
    pub orbit_size: usize,
    /// For a conjugate copy, the id of the representative it was copied
    /// from; `location` then repeats the representative's.
    pub conjugate_of: Option<usize>,
    pub copy: usize,
    pub label: String,
}

impl InfNearPoint {
    pub fn is_free(&self) -> bool {
        self.proximate_to.len() <= 1
    }

    pub fn is_representative(&self) -> bool {
        self.conjugate_of.is_none()
    }
}

/// A parent-closed set of infinitely near points. Ids are indices and every
/// parent precedes its children.
#[derive(Clone, Debug, Default)]
pub struct Configuration {
    points: Vec<InfNearPoint>,
}

impl Configuration {
    pub fn new() -> Configuration {
        Configuration::default()
    }

    pub fn from_points(points: Vec<InfNearPoint>) -> Result<Configuration, InfNearError> {
        let mut c = Configuration::new();
        for p in points {
            c.push(p)?;
        }
        Ok(c)
    }

    /// Appends a point, checking ids, parent-closedness and proximity.
    pub fn push(&mut self, mut p: InfNearPoint) -> Result<usize, InfNearError> {
        let id = self.points.len();
        let bad = |reason: &str| Err(InfNearError::Malformed { id, reason: reason.to_string() });
        if p.id != id {
            return bad("ids must be consecutive");
        }
        p.proximate_to.sort_unstable();
        p.proximate_to.dedup();
        match p.parent {
            None => {
                if !p.proximate_to.is_empty() || p.level != 0 || !matches!(p.location, Location::Plane { .. }) {
                    return bad("a point of the plane has no proximity and level 0");
                }
            }
            Some(q) => {
                if q >= id {
                    return bad("parent must precede the point");
                }
                if p.level != self.points[q].level + 1 || !matches!(p.location, Location::Divisor { .. }) {
                    return bad("level or location inconsistent with the parent");
                }
                if !p.proximate_to.contains(&q) || p.proximate_to.len() > 2 {
                    return bad("a point is proximate to its parent and to at most one other point");
                }
                if p.proximate_to.iter().any(|r| !self.is_infinitely_near(q, *r)) {
                    return bad("proximity only to ancestors");
                }
            }
        }
        if let Some(r) = p.conjugate_of {
            if r >= id {
                return bad("representative must precede its copies");
            }
        }
        self.points.push(p);
        Ok(id)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[InfNearPoint] {
        &self.points
    }

    pub fn point(&self, id: usize) -> &InfNearPoint {
        &self.points[id]
    }

    pub fn set_label(&mut self, id: usize, label: String) {
        self.points[id].label = label;
    }

    pub fn children(&self, id: usize) -> Vec<usize> {
        self.points.iter().filter(|p| p.parent == Some(id)).map(|p| p.id).collect()
    }

    pub fn roots(&self) -> Vec<usize> {
        self.points.iter().filter(|p| p.parent.is_none()).map(|p| p.id).collect()
    }

    /// True when `q` is infinitely near to `p` (a point is infinitely near
    /// to itself).
    pub fn is_infinitely_near(&self, q: usize, p: usize) -> bool {
        let mut cur = Some(q);
        while let Some(c) = cur {
            if c == p {
                return true;
            }
            cur = self.points[c].parent;
        }
        false
    }

    /// The points `p` is infinitely near to, `p` included, in id order.
    pub fn ancestors(&self, p: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut cur = Some(p);
        while let Some(c) = cur {
            out.push(c);
            cur = self.points[c].parent;
        }
        out.reverse();
        out
    }

    pub fn is_maximal(&self, p: usize) -> bool {
        !self.points.iter().any(|q| q.parent == Some(p))
    }

    pub fn maximal_points(&self) -> Vec<usize> {
        (0..self.len()).filter(|&p| self.is_maximal(p)).collect()
    }

    pub fn free_points(&self) -> Vec<usize> {
        self.points.iter().filter(|p| p.is_free()).map(|p| p.id).collect()
    }

    /// Maximal elements of the set of free points.
    pub fn maximal_free_points(&self) -> Vec<usize> {
        let free = self.free_points();
        free.iter().copied().filter(|&p| !free.iter().any(|&q| q != p && self.is_infinitely_near(q, p))).collect()
    }

    /// Points proximate to `p`.
    pub fn proximate_points(&self, p: usize) -> Vec<usize> {
        self.points.iter().filter(|q| q.proximate_to.contains(&p)).map(|q| q.id).collect()
    }

    pub fn is_parent_closed(&self, ids: &BTreeSet<usize>) -> bool {
        ids.iter().all(|&i| i < self.len() && self.points[i].parent.is_none_or(|q| ids.contains(&q)))
    }

    /// The sub-configuration on a parent-closed set of ids, renumbered in
    /// id order; also returns the original id of each new point.
    pub fn restrict(&self, ids: &BTreeSet<usize>) -> Result<(Configuration, Vec<usize>), InfNearError> {
        if !self.is_parent_closed(ids) {
            return Err(InfNearError::NotSubconfiguration);
        }
        let old: Vec<usize> = ids.iter().copied().collect();
        let new_id = |o: usize| old.binary_search(&o).unwrap();
        let mut c = Configuration::new();
        for (k, &o) in old.iter().enumerate() {
            let p = &self.points[o];
            c.push(InfNearPoint {
                id: k,
                parent: p.parent.map(new_id),
                proximate_to: p.proximate_to.iter().map(|&r| new_id(r)).collect(),
                conjugate_of: p.conjugate_of.and_then(|r| old.binary_search(&r).ok()),
                ..p.clone()
            })?;
        }
        Ok((c, old))
    }

    /// Hasse-diagram edges `(parent, child)`.
    pub fn solid_edges(&self) -> Vec<(usize, usize)> {
        self.points.iter().filter_map(|p| p.parent.map(|q| (q, p.id))).collect()
    }

    /// Proximity edges `(p, q)`, `q` proximate to `p` but not in its first
    /// neighbourhood.
    pub fn dotted_edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for q in &self.points {
            for &p in &q.proximate_to {
                if Some(p) != q.parent {
                    out.push((p, q.id));
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Same points, parents, locations, proximities and orbit data.
    pub fn structurally_equal(&self, o: &Configuration) -> bool {
        self.len() == o.len()
            && self.points.iter().zip(&o.points).all(|(a, b)| {
                a.parent == b.parent
                    && a.location == b.location
                    && a.proximate_to == b.proximate_to
                    && a.orbit_size == b.orbit_size
                    && a.conjugate_of == b.conjugate_of
                    && a.copy == b.copy
            })
    }

    /// Graphviz rendering: solid edges for first neighbourhoods, dashed for
    /// the remaining proximities. `dicritical` marks points drawn boxed.
    pub fn to_dot(&self, dicritical: Option<&[bool]>) -> String {
        let mut s = String::from("digraph proximity {\n  rankdir=BT;\n");
        for p in &self.points {
            let shape = if dicritical.is_some_and(|d| d[p.id]) { "box" } else { "circle" };
            let _ = writeln!(s, "  n{} [label=\"{}\", shape={}];", p.id, p.label, shape);
        }
        for (a, b) in self.solid_edges() {
            let _ = writeln!(s, "  n{} -> n{};", a, b);
        }
        for (a, b) in self.dotted_edges() {
            let _ = writeln!(s, "  n{} -> n{} [style=dashed, arrowhead=none];", a, b);
        }
        s.push_str("}\n");
        s
    }

    pub fn to_json(&self, dicritical: Option<&[bool]>) -> serde_json::Value {
        #[derive(Serialize)]
        struct Pt<'a> {
            id: usize,
            label: &'a str,
            parent: Option<usize>,
            branch: Option<String>,
            coordinate: String,
            level: usize,
            proximate_to: &'a [usize],
            free: bool,
            dicritical: bool,
            conjugate_of: Option<usize>,
        }
        let pts: Vec<Pt> = self
            .points
            .iter()
            .map(|p| {
                let (branch, coordinate) = match &p.location {
                    Location::Plane { .. } => (None, p.location.to_string()),
                    Location::Divisor { branch, coordinate } => (Some(branch.to_string()), coordinate.to_string()),
                };
                Pt {
                    id: p.id,
                    label: &p.label,
                    parent: p.parent,
                    branch,
                    coordinate,
                    level: p.level,
                    proximate_to: &p.proximate_to,
                    free: p.is_free(),
                    dicritical: dicritical.is_some_and(|d| d[p.id]),
                    conjugate_of: p.conjugate_of,
                }
            })
            .collect();
        serde_json::json!({
            "points": pts,
            "solid_edges": self.solid_edges(),
            "dotted_edges": self.dotted_edges(),
        })
    }
}

/// A point given up to conjugation: `orbit_size` conjugates over the field
/// of the parent, all sharing this description. Parents and proximities
/// refer to indices in the same list.
#[derive(Clone, Debug)]
pub struct OrbitPoint {
    pub parent: Option<usize>,
    pub location: Location,
    pub level: usize,
    pub proximate_to: Vec<usize>,
    pub orbit_size: usize,
}

/// Writes out every conjugate of a list of orbit representatives (listed
/// parents first). Each representative is followed by its subtree, then by
/// its conjugate copies, each with a copy of the subtree. Returns the
/// configuration and, for each point, the index of its representative.
pub fn expand_orbits(reps: &[OrbitPoint]) -> Result<(Configuration, Vec<usize>), InfNearError> {
    let mut children = vec![Vec::new(); reps.len()];
    let mut roots = Vec::new();
    for (i, n) in reps.iter().enumerate() {
        match n.parent {
            Some(p) => children[p].push(i),
            None => roots.push(i),
        }
    }
    struct Out<'a> {
        reps: &'a [OrbitPoint],
        children: &'a [Vec<usize>],
        points: Vec<InfNearPoint>,
        rep_of: Vec<usize>,
        first: Vec<Option<usize>>,
    }
    impl Out<'_> {
        fn emit(&mut self, r: usize, parent: Option<usize>, copy: usize, map: &mut HashMap<usize, usize>) {
            let id = self.points.len();
            map.insert(r, id);
            let n = &self.reps[r];
            let conjugate_of = self.first[r];
            if conjugate_of.is_none() {
                self.first[r] = Some(id);
            }
            self.points.push(InfNearPoint {
                id,
                parent,
                location: n.location.clone(),
                level: n.level,
                proximate_to: n.proximate_to.iter().map(|q| map[q]).collect(),
                orbit_size: n.orbit_size,
                conjugate_of,
                copy,
                label: format!("P{}", id),
            });
            self.rep_of.push(r);
            let children = self.children;
            for &c in &children[r] {
                for j in 0..self.reps[c].orbit_size {
                    self.emit(c, Some(id), j, map);
                }
            }
        }
    }
    let mut out = Out { reps, children: &children, points: Vec::new(), rep_of: Vec::new(), first: vec![None; reps.len()] };
    let mut map = HashMap::new();
    for &r in &roots {
        for j in 0..reps[r].orbit_size {
            out.emit(r, None, j, &mut map);
        }
    }
    let rep_of = out.rep_of;
    Ok((Configuration::from_points(out.points)?, rep_of))
}

/// `(v0; (v_P))` indexed by the points of a configuration.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PairingVector {
    pub v0: Rational,
    pub comps: Vec<Rational>,
}

impl PairingVector {
    pub fn zero(n: usize) -> PairingVector {
        PairingVector { v0: Rational::zero(), comps: vec![Rational::zero(); n] }
    }

    pub fn from_ints(v0: i64, comps: &[i64]) -> PairingVector {
        PairingVector { v0: Rational::from_integer(v0.into()), comps: comps.iter().map(|&c| Rational::from_integer(c.into())).collect() }
    }

    pub fn len(&self) -> usize {
        self.comps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.comps.is_empty()
    }

    /// `v0` followed by the components.
    pub fn flat(&self) -> Vec<Rational> {
        std::iter::once(self.v0.clone()).chain(self.comps.iter().cloned()).collect()
    }

    pub fn from_flat(v: &[Rational]) -> PairingVector {
        PairingVector { v0: v[0].clone(), comps: v[1..].to_vec() }
    }

    pub fn add(&self, o: &PairingVector) -> PairingVector {
        PairingVector { v0: &self.v0 + &o.v0, comps: self.comps.iter().zip(&o.comps).map(|(a, b)| a + b).collect() }
    }

    pub fn scale(&self, s: &Rational) -> PairingVector {
        PairingVector { v0: &self.v0 * s, comps: self.comps.iter().map(|a| a * s).collect() }
    }
}

impl fmt::Display for PairingVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c: Vec<String> = self.comps.iter().map(crate::exactalg::field::fmt_rational).collect();
        write!(f, "({}; {})", crate::exactalg::field::fmt_rational(&self.v0), c.join(","))
    }
}

/// `⟨a, b⟩ = a0 b0 − Σ a_P b_P`.
pub fn pairing(a: &PairingVector, b: &PairingVector) -> Result<Rational, InfNearError> {
    if a.len() != b.len() {
        return Err(InfNearError::IndexMismatch(a.len(), b.len()));
    }
    let mut s = &a.v0 * &b.v0;
    for (x, y) in a.comps.iter().zip(&b.comps) {
        s -= x * y;
    }
    Ok(s)
}

/// `e_P`: −1 at `P`, +1 at the points proximate to `P`, 0 elsewhere.
pub fn e_vector(conf: &Configuration, p: usize) -> PairingVector {
    let mut v = PairingVector::zero(conf.len());
    v.comps[p] = -Rational::one();
    for q in conf.proximate_points(p) {
        v.comps[q] = Rational::one();
    }
    v
}

/// The system `m(sub, full)`: 1 at maximal points of `sub`, 0 outside
/// `sub`, and elsewhere the sum over the points of `sub` proximate to the
/// point.
pub fn multiplicity_system(sub: &BTreeSet<usize>, full: &Configuration) -> Result<Vec<u64>, InfNearError> {
    if !full.is_parent_closed(sub) {
        return Err(InfNearError::NotSubconfiguration);
    }
    let n = full.len();
    let mut m = vec![0u64; n];
    for q in (0..n).rev() {
        if !sub.contains(&q) {
            continue;
        }
        let has_child = full.points().iter().any(|p| p.parent == Some(q) && sub.contains(&p.id));
        m[q] = if has_child {
            full.proximate_points(q).iter().filter(|p| sub.contains(p)).map(|&p| m[p]).sum()
        } else {
            1
        };
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn chain(n: usize, satellites: &[(usize, usize)]) -> Configuration {
        let mut c = Configuration::new();
        for i in 0..n {
            let mut prox = if i == 0 { vec![] } else { vec![i - 1] };
            for &(q, p) in satellites {
                if q == i {
                    prox.push(p);
                }
            }
            c.push(InfNearPoint {
                id: i,
                parent: i.checked_sub(1),
                location: if i == 0 {
                    Location::Plane { chart: Chart::Z, coords: [Fe::zero(), Fe::zero()] }
                } else {
                    Location::Divisor { branch: Branch::V1, coordinate: Fe::zero() }
                },
                level: i,
                proximate_to: prox,
                orbit_size: 1,
                conjugate_of: None,
                copy: 0,
                label: format!("P{}", i),
            })
            .unwrap();
        }
        c
    }

    #[test]
    fn pairings() {
        let a = PairingVector::from_ints(1, &[0, 0]);
        assert_eq!(pairing(&a, &a).unwrap(), Rational::one());
        let c = chain(3, &[]);
        assert_eq!(e_vector(&c, 1), PairingVector::from_ints(0, &[0, -1, 1]));
        assert!(pairing(&a, &PairingVector::zero(3)).is_err());
    }

    #[test]
    fn multiplicity_systems() {
        let c = chain(1, &[]);
        assert_eq!(multiplicity_system(&[0].into(), &c).unwrap(), vec![1]);
        // P2 proximate to P0 and P1: the cusp cluster (2, 1, 1).
        let c = chain(3, &[(2, 0)]);
        assert_eq!(multiplicity_system(&[0, 1, 2].into(), &c).unwrap(), vec![2, 1, 1]);
        assert_eq!(multiplicity_system(&[0, 1].into(), &c).unwrap(), vec![1, 1, 0]);
        assert!(multiplicity_system(&[1].into(), &c).is_err());
        assert_eq!(c.dotted_edges(), vec![(0, 2)]);
        assert_eq!(c.maximal_free_points(), vec![1]);
    }
}

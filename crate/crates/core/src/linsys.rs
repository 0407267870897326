//! Linear systems of plane curves through clusters, base points of pencils
//! and the 1-form of a pencil.

use crate::blowup::{next_vars, strict_transform, virtual_transform, Branch, TrackedCurve};
use crate::exactalg::field::{try_join_levels, Fnv};
use crate::exactalg::{nullspace, Fe, Level, MultiPoly, DEFAULT_MAX_TOWER_DEGREE};
use crate::infnear::{expand_orbits, Configuration, Location, OrbitPoint};
use crate::reduction::{plane_common_zeros, ReductionError, RootFinder};
use crate::vfield::{Chart, ProjectiveOneForm, PROJECTIVE_VARS};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use std::hash::Hasher;
use std::sync::Arc;
use thiserror::Error;

const GENERIC_DRAWS: usize = 8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinsysError {
    #[error("only the zero polynomial passes through the cluster")]
    EmptySystem,
    #[error("the cluster gives different multiplicities to conjugate points")]
    NotGaloisStable,
    #[error("the generators have the common component {0}")]
    CommonComponent(String),
    #[error("pencil generators must be homogeneous of one common positive degree")]
    DegreeMismatch,
    #[error("the cluster and its multiplicity vector have different sizes")]
    SizeMismatch,
    #[error("no generic member found after {0} draws")]
    NoGenericMember(usize),
    #[error(transparent)]
    Reduction(#[from] ReductionError),
}

/// A configuration with a multiplicity at each point.
#[derive(Clone, Debug)]
pub struct Cluster {
    pub configuration: Configuration,
    pub multiplicities: Vec<u64>,
}

impl Cluster {
    pub fn new(configuration: Configuration, multiplicities: Vec<u64>) -> Result<Cluster, LinsysError> {
        if configuration.len() != multiplicities.len() {
            return Err(LinsysError::SizeMismatch);
        }
        Ok(Cluster { configuration, multiplicities })
    }
}

#[derive(Clone, Debug)]
pub struct LinearSystemBasis {
    pub degree: u32,
    pub basis: Vec<MultiPoly>,
}

/// Exponent vectors of the degree-`m` monomials in `X, Y, Z`, in
/// decreasing lexicographic order.
pub fn monomials(m: u32) -> Vec<[u32; 3]> {
    let mut out = Vec::new();
    for i in (0..=m).rev() {
        for j in (0..=m - i).rev() {
            out.push([i, j, m - i - j]);
        }
    }
    out
}

fn monomial_poly(e: [u32; 3], c: Fe) -> MultiPoly {
    MultiPoly::monomial(&PROJECTIVE_VARS, [e[0], e[1], e[2], 0, 0, 0], c)
}

/// A local polynomial whose coefficients are linear forms in the unknown
/// coefficients of a curve.
#[derive(Clone, Debug)]
struct SymPoly {
    n: usize,
    terms: BTreeMap<(u32, u32), Vec<Fe>>,
}

const LOCAL: [&str; 2] = ["u", "v"];

impl SymPoly {
    /// The generic curve of degree `m` in the chart's coordinates.
    fn generic(m: u32, chart: Chart) -> SymPoly {
        let mons = monomials(m);
        let n = mons.len();
        let [i, j] = chart.free();
        let mut terms = BTreeMap::new();
        for (k, e) in mons.iter().enumerate() {
            let mut lf = vec![Fe::zero(); n];
            lf[k] = Fe::one();
            terms.insert((e[i], e[j]), lf);
        }
        SymPoly { n, terms }
    }

    /// Substitutes `u ↦ images[0]`, `v ↦ images[1]`.
    fn compose(&self, images: &[MultiPoly; 2]) -> SymPoly {
        let maxi = self.terms.keys().map(|k| k.0).max().unwrap_or(0);
        let maxj = self.terms.keys().map(|k| k.1).max().unwrap_or(0);
        let powers = |p: &MultiPoly, k: u32| {
            let mut v = vec![p.one_like()];
            for _ in 0..k {
                let next = v.last().unwrap() * p;
                v.push(next);
            }
            v
        };
        let up = powers(&images[0], maxi);
        let vp = powers(&images[1], maxj);
        let mut out: BTreeMap<(u32, u32), Vec<Fe>> = BTreeMap::new();
        for ((i, j), lf) in &self.terms {
            let prod = &up[*i as usize] * &vp[*j as usize];
            for (e, c) in prod.terms() {
                let slot = out.entry((e[0], e[1])).or_insert_with(|| vec![Fe::zero(); self.n]);
                for (s, l) in slot.iter_mut().zip(lf) {
                    if !l.is_zero() {
                        *s = &*s + &(c * l);
                    }
                }
            }
        }
        out.retain(|_, lf| lf.iter().any(|x| !x.is_zero()));
        SymPoly { n: self.n, terms: out }
    }

    fn translate(&self, u0: &Fe, v0: &Fe) -> SymPoly {
        if u0.is_zero() && v0.is_zero() {
            return self.clone();
        }
        let u = MultiPoly::var(&LOCAL, 0);
        let v = MultiPoly::var(&LOCAL, 1);
        self.compose(&[&u + &MultiPoly::constant(&LOCAL, u0.clone()), &v + &MultiPoly::constant(&LOCAL, v0.clone())])
    }

    fn pullback(&self, branch: Branch, lam: &Fe) -> SymPoly {
        let u = MultiPoly::var(&LOCAL, 0);
        let v = MultiPoly::var(&LOCAL, 1);
        let l = MultiPoly::constant(&LOCAL, lam.clone());
        let images = match branch {
            Branch::V1 => [u.clone(), &u * &(&v + &l)],
            Branch::V2 => [&v * &(&u + &l), v.clone()],
        };
        self.compose(&images)
    }

    /// Linear forms of the terms of degree below `mu`.
    fn low_degree_rows(&self, mu: u64) -> Vec<Vec<Fe>> {
        self.terms.iter().filter(|((i, j), _)| ((i + j) as u64) < mu).map(|(_, lf)| lf.clone()).collect()
    }

    /// Formal division by the `var`-th variable to the power `mu`: terms of
    /// lower exponent become vanishing conditions.
    fn divide(&self, var: usize, mu: u64) -> (SymPoly, Vec<Vec<Fe>>) {
        let mut rows = Vec::new();
        let mut terms = BTreeMap::new();
        for ((i, j), lf) in &self.terms {
            let e = if var == 0 { *i } else { *j } as u64;
            if e < mu {
                rows.push(lf.clone());
            } else {
                let k = if var == 0 { (i - mu as u32, *j) } else { (*i, j - mu as u32) };
                terms.insert(k, lf.clone());
            }
        }
        (SymPoly { n: self.n, terms }, rows)
    }
}

/// Points to visit: those with positive multiplicity somewhere at or above
/// them, conjugate copies excluded.
fn active_points(cluster: &Cluster) -> Vec<bool> {
    let conf = &cluster.configuration;
    let mut active: Vec<bool> = cluster.multiplicities.iter().map(|m| *m > 0).collect();
    for q in (0..conf.len()).rev() {
        if active[q] {
            if let Some(p) = conf.point(q).parent {
                active[p] = true;
            }
        }
    }
    for (q, a) in active.iter_mut().enumerate() {
        if conf.point(q).conjugate_of.is_some() {
            *a = false;
        }
    }
    active
}

/// Vanishing conditions of virtual passage, one row per condition, from
/// the representative points of the cluster.
fn constraint_rows(m: u32, cluster: &Cluster) -> Vec<Vec<Fe>> {
    let conf = &cluster.configuration;
    let mult = &cluster.multiplicities;
    let active = active_points(cluster);
    let mut local: Vec<Option<SymPoly>> = vec![None; conf.len()];
    let mut rows = Vec::new();
    for q in 0..conf.len() {
        if !active[q] {
            continue;
        }
        let pt = conf.point(q);
        let sym = match (&pt.location, pt.parent) {
            (Location::Plane { chart, coords }, None) => SymPoly::generic(m, *chart).translate(&coords[0], &coords[1]),
            (Location::Divisor { branch, coordinate }, Some(p)) => {
                let pulled = local[p].as_ref().expect("parent visited first").pullback(*branch, coordinate);
                let (s, r) = pulled.divide(branch.divisor_var(), mult[p]);
                rows.extend(r);
                s
            }
            _ => unreachable!("configuration invariant"),
        };
        rows.extend(sym.low_degree_rows(mult[q]));
        local[q] = Some(sym);
    }
    rows
}

fn row_level(row: &[Fe]) -> Option<Arc<Level>> {
    let mut l: Option<Arc<Level>> = None;
    for x in row {
        l = try_join_levels(l.as_ref(), x.level()).expect("one tower per cluster");
    }
    l
}

/// `L_m(K)`: a basis of the degree-`m` curves passing virtually through
/// the cluster. For a cluster with conjugate points of positive
/// multiplicity the cluster must be Galois-stable, and the basis then has
/// rational coefficients.
pub fn linear_system(m: u32, cluster: &Cluster) -> Result<LinearSystemBasis, LinsysError> {
    let conf = &cluster.configuration;
    let mult = &cluster.multiplicities;
    let mut conjugates_used = false;
    for p in conf.points() {
        if let Some(r) = p.conjugate_of {
            if mult[p.id] > 0 {
                conjugates_used = true;
            }
            if mult[p.id] != mult[r] && mult[p.id] > 0 {
                return Err(LinsysError::NotGaloisStable);
            }
        }
    }
    if conjugates_used {
        for p in conf.points() {
            if p.orbit_size > 1 && p.conjugate_of.is_none() && mult[p.id] > 0 {
                let copies = conf.points().iter().filter(|q| q.conjugate_of == Some(p.id) && q.parent == p.parent).count();
                if copies + 1 != p.orbit_size || conf.points().iter().any(|q| q.conjugate_of == Some(p.id) && mult[q.id] != mult[p.id]) {
                    return Err(LinsysError::NotGaloisStable);
                }
            }
        }
    }
    let mons = monomials(m);
    let n = mons.len();
    let mut rows = constraint_rows(m, cluster);
    if conjugates_used {
        rows = rows
            .iter()
            .flat_map(|row| {
                let l = row_level(row);
                let comps: Vec<Vec<_>> = row.iter().map(|x| x.rational_components(l.as_ref())).collect();
                let k = comps[0].len();
                (0..k).map(move |c| comps.iter().map(|v| Fe::Rat(v[c].clone())).collect::<Vec<Fe>>()).collect::<Vec<_>>()
            })
            .collect();
    }
    rows.retain(|r| r.iter().any(|x| !x.is_zero()));
    let basis: Vec<MultiPoly> = nullspace(&rows, n)
        .into_iter()
        .map(|v| {
            let mut f = MultiPoly::zero(&PROJECTIVE_VARS);
            for (k, c) in v.into_iter().enumerate() {
                if !c.is_zero() {
                    f = &f + &monomial_poly(mons[k], c);
                }
            }
            f
        })
        .collect();
    if basis.is_empty() {
        return Err(LinsysError::EmptySystem);
    }
    Ok(LinearSystemBasis { degree: m, basis })
}

/// Local equation of `f` at a plane point.
fn local_at_plane(f: &MultiPoly, chart: Chart, coords: &[Fe; 2]) -> MultiPoly {
    let g = chart.dehomogenize(f);
    if coords.iter().all(|c| c.is_zero()) {
        return g;
    }
    let u = g.var_like(0);
    let v = g.var_like(1);
    g.compose(&[&u + &g.constant_like(coords[0].clone()), &v + &g.constant_like(coords[1].clone())])
}

/// Direct check that `f` passes virtually through the cluster, by
/// explicit virtual transforms at the representative points.
pub fn passes_virtually(f: &MultiPoly, cluster: &Cluster) -> bool {
    let conf = &cluster.configuration;
    let mult = &cluster.multiplicities;
    let active = active_points(cluster);
    let mut local: Vec<Option<MultiPoly>> = vec![None; conf.len()];
    for q in 0..conf.len() {
        if !active[q] {
            continue;
        }
        let pt = conf.point(q);
        let g = match (&pt.location, pt.parent) {
            (Location::Plane { chart, coords }, None) => local_at_plane(f, *chart, coords),
            (Location::Divisor { branch, coordinate }, Some(p)) => {
                match virtual_transform(local[p].as_ref().unwrap(), coordinate, *branch, mult[p] as u32) {
                    Some(g) => g,
                    None => return false,
                }
            }
            _ => unreachable!(),
        };
        if !g.is_zero() && (g.order().unwrap() as u64) < mult[q] {
            return false;
        }
        local[q] = Some(g);
    }
    true
}

/// Cluster of base points of a pencil.
#[derive(Clone, Debug)]
pub struct PencilBasePoints {
    pub cluster: Cluster,
    /// Dicritical with respect to the pencil (`r > 0`).
    pub dicritical: Vec<bool>,
    /// Virtual transforms of the two generators at each point.
    pub local: Vec<(MultiPoly, MultiPoly)>,
    pub fields: Vec<Option<Arc<Level>>>,
    /// The member used to confirm the generic multiplicities, and its
    /// coefficients on the generators.
    pub generic_member: MultiPoly,
    pub generic_coefficients: (i64, i64),
}

struct BaseNode {
    orbit: OrbitPoint,
    mult: u64,
    dicritical: bool,
    local: (MultiPoly, MultiPoly),
    field: Option<Arc<Level>>,
}

fn binary_gcd(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    a.gcd(b)
}

struct BaseDriver {
    roots: RootFinder,
    nodes: Vec<BaseNode>,
}

impl BaseDriver {
    fn visit(
        &mut self,
        parent: Option<usize>,
        location: Location,
        level: usize,
        orbit_size: usize,
        f: (MultiPoly, MultiPoly),
        field: Option<Arc<Level>>,
        divisors: Vec<(usize, TrackedCurve)>,
    ) -> Result<(), LinsysError> {
        let o1 = f.0.order();
        let o2 = f.1.order();
        let m = match (o1, o2) {
            (Some(a), Some(b)) => a.min(b),
            (Some(a), None) | (None, Some(a)) => a,
            (None, None) => unreachable!("generators are coprime"),
        };
        debug_assert!(m > 0);
        let d = binary_gcd(&f.0.homogeneous_part(m), &f.1.homogeneous_part(m));
        let deg_d = d.total_degree().unwrap_or(0);
        let id = self.nodes.len();
        self.nodes.push(BaseNode {
            orbit: OrbitPoint { parent, location, level, proximate_to: divisors.iter().map(|(p, _)| *p).collect(), orbit_size },
            mult: m as u64,
            dicritical: m > deg_d,
            local: f.clone(),
            field: field.clone(),
        });
        if deg_d == 0 {
            return Ok(());
        }
        let zero = Fe::zero();
        let vars = next_vars(&f.0.var_names());
        let new_vars = [vars[0].as_str(), vars[1].as_str()];
        let child = |branch: Branch, lam: &Fe| -> ((MultiPoly, MultiPoly), Vec<(usize, TrackedCurve)>) {
            let t = |g: &MultiPoly| virtual_transform(g, lam, branch, m).expect("order at least m");
            let mut curves = vec![(id, TrackedCurve::divisor("E", &new_vars, branch))];
            for (p, c) in &divisors {
                let s = TrackedCurve::new(&c.id, strict_transform(&c.equation, lam, branch));
                if s.passes_through_origin() {
                    curves.push((*p, s));
                }
            }
            ((t(&f.0), t(&f.1)), curves)
        };
        let d1 = d.eval_var(0, &Fe::one()).to_upoly(1);
        if (d1.deg() as u32) < deg_d {
            let (fs, cs) = child(Branch::V2, &zero);
            self.visit(Some(id), Location::Divisor { branch: Branch::V2, coordinate: zero.clone() }, level + 1, 1, fs, field.clone(), cs)?;
        }
        for (lam, size) in self.roots.orbits(&d1, field.as_ref()).map_err(ReductionError::from)? {
            let child_field = crate::exactalg::field::join_levels(field.as_ref(), lam.level());
            let (fs, cs) = child(Branch::V1, &lam);
            self.visit(Some(id), Location::Divisor { branch: Branch::V1, coordinate: lam }, level + 1, size, fs, child_field, cs)?;
        }
        Ok(())
    }
}

fn check_pencil(f1: &MultiPoly, f2: &MultiPoly) -> Result<(MultiPoly, MultiPoly), LinsysError> {
    let f1 = f1.with_vars(&PROJECTIVE_VARS);
    let f2 = f2.with_vars(&PROJECTIVE_VARS);
    let (Some(d1), Some(d2)) = (f1.total_degree(), f2.total_degree()) else { return Err(LinsysError::DegreeMismatch) };
    if d1 != d2 || d1 == 0 || !f1.is_homogeneous() || !f2.is_homogeneous() {
        return Err(LinsysError::DegreeMismatch);
    }
    let g = f1.gcd(&f2);
    if !g.is_constant() {
        return Err(LinsysError::CommonComponent(g.to_string()));
    }
    Ok((f1, f2))
}

/// Seed for the draws of generic members: FNV of the generators, mixed
/// with the caller's seed.
fn pencil_seed(f1: &MultiPoly, f2: &MultiPoly, seed: u64) -> u64 {
    let mut h = Fnv(0xcbf2_9ce4_8422_2325);
    h.write(f1.to_string().as_bytes());
    h.write(b";");
    h.write(f2.to_string().as_bytes());
    h.finish() ^ seed
}

/// Cluster of base points of the pencil spanned by `F1`, `F2`.
pub fn pencil_base_points(f1: &MultiPoly, f2: &MultiPoly, seed: u64) -> Result<PencilBasePoints, LinsysError> {
    pencil_base_points_with(f1, f2, seed, DEFAULT_MAX_TOWER_DEGREE)
}

pub fn pencil_base_points_with(f1: &MultiPoly, f2: &MultiPoly, seed: u64, max_tower_degree: usize) -> Result<PencilBasePoints, LinsysError> {
    let (f1, f2) = check_pencil(f1, f2)?;
    let mut driver = BaseDriver { roots: RootFinder::new(max_tower_degree), nodes: Vec::new() };
    let charts = [Chart::X, Chart::Y, Chart::Z].map(|c| (c.dehomogenize(&f1), c.dehomogenize(&f2)));
    let pairs = [0, 1, 2].map(|i| (&charts[i].0, &charts[i].1));
    for (chart, coords, size) in plane_common_zeros(&mut driver.roots, pairs)? {
        let local = (local_at_plane(&f1, chart, &coords), local_at_plane(&f2, chart, &coords));
        let field = coords.iter().filter_map(|c| c.level()).max_by_key(|l| l.depth()).cloned();
        driver.visit(None, Location::Plane { chart, coords }, 0, size, local, field, Vec::new())?;
    }
    let reps: Vec<OrbitPoint> = driver.nodes.iter().map(|n| n.orbit.clone()).collect();
    let (configuration, rep_of) = expand_orbits(&reps).map_err(ReductionError::from)?;
    let nodes = &driver.nodes;
    let multiplicities: Vec<u64> = rep_of.iter().map(|&r| nodes[r].mult).collect();
    let cluster = Cluster { configuration, multiplicities };

    let mut rng = ChaCha8Rng::seed_from_u64(pencil_seed(&f1, &f2, seed));
    for _ in 0..GENERIC_DRAWS {
        let a: i64 = rng.gen_range(1..=1000);
        let b: i64 = rng.gen_range(1..=1000);
        let g = &f1.scale(&Fe::int(a)) + &f2.scale(&Fe::int(b));
        if generic_multiplicities_hold(&g, &cluster) {
            return Ok(PencilBasePoints {
                dicritical: rep_of.iter().map(|&r| nodes[r].dicritical).collect(),
                local: rep_of.iter().map(|&r| nodes[r].local.clone()).collect(),
                fields: rep_of.iter().map(|&r| nodes[r].field.clone()).collect(),
                cluster,
                generic_member: g,
                generic_coefficients: (a, b),
            });
        }
    }
    Err(LinsysError::NoGenericMember(GENERIC_DRAWS))
}

/// Whether the strict transforms of `g` have exactly the cluster's
/// multiplicities at its representative points.
fn generic_multiplicities_hold(g: &MultiPoly, cluster: &Cluster) -> bool {
    let conf = &cluster.configuration;
    let mult = &cluster.multiplicities;
    let mut local: Vec<Option<MultiPoly>> = vec![None; conf.len()];
    for q in 0..conf.len() {
        let pt = conf.point(q);
        if pt.conjugate_of.is_some() {
            continue;
        }
        let h = match (&pt.location, pt.parent) {
            (Location::Plane { chart, coords }, None) => local_at_plane(g, *chart, coords),
            (Location::Divisor { branch, coordinate }, Some(p)) => {
                let Some(h) = virtual_transform(local[p].as_ref().unwrap(), coordinate, *branch, mult[p] as u32) else {
                    return false;
                };
                h
            }
            _ => unreachable!(),
        };
        if h.order().map(|o| o as u64) != Some(mult[q]) {
            return false;
        }
        local[q] = Some(h);
    }
    true
}

/// The 1-form whose leaves are the members of the pencil `⟨F1, F2⟩`.
pub fn pencil_vector_field(f1: &MultiPoly, f2: &MultiPoly) -> Result<ProjectiveOneForm, LinsysError> {
    let (f1, f2) = check_pencil(f1, f2)?;
    let comp = |i: usize| &(&f2 * &f1.derivative(i)) - &(&f1 * &f2.derivative(i));
    let raw = ProjectiveOneForm { a: comp(0), b: comp(1), c: comp(2) };
    Ok(raw.reduced())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::parse_poly_in;
    use crate::infnear::InfNearPoint;
    use crate::reduction::{reduce, ReduceOptions};

    fn pp(s: &str) -> MultiPoly {
        parse_poly_in(s, &PROJECTIVE_VARS).unwrap()
    }

    fn point(id: usize, parent: Option<usize>, location: Location, level: usize, prox: &[usize]) -> InfNearPoint {
        InfNearPoint {
            id,
            parent,
            location,
            level,
            proximate_to: prox.to_vec(),
            orbit_size: 1,
            conjugate_of: None,
            copy: 0,
            label: format!("P{}", id),
        }
    }

    pub(crate) fn four_point_cluster() -> Cluster {
        let plane = |x: i64| Location::Plane { chart: Chart::Z, coords: [Fe::int(x), Fe::zero()] };
        let conf = Configuration::from_points(vec![
            point(0, None, plane(1), 0, &[]),
            point(1, None, plane(0), 0, &[]),
            point(2, Some(1), Location::Divisor { branch: Branch::V1, coordinate: Fe::int(3) }, 1, &[1]),
            point(3, Some(2), Location::Divisor { branch: Branch::V2, coordinate: Fe::zero() }, 2, &[1, 2]),
        ])
        .unwrap();
        Cluster::new(conf, vec![2, 2, 1, 1]).unwrap()
    }

    #[test]
    fn cubic_through_cluster() {
        let k = four_point_cluster();
        let l = linear_system(3, &k).unwrap();
        assert_eq!(l.basis.len(), 2);
        let want = [pp("X*Y^2"), pp("Y^3")];
        for f in &l.basis {
            assert!(passes_virtually(f, &k));
        }
        let mut got: Vec<String> = l.basis.iter().map(|f| f.to_string()).collect();
        got.sort();
        assert_eq!(got, want.iter().map(|f| f.to_string()).collect::<Vec<_>>());
    }

    #[test]
    fn lines_through_a_point() {
        let conf = Configuration::from_points(vec![point(0, None, Location::Plane { chart: Chart::Z, coords: [Fe::zero(), Fe::zero()] }, 0, &[])]).unwrap();
        let l = linear_system(1, &Cluster::new(conf, vec![1]).unwrap()).unwrap();
        assert_eq!(l.basis.len(), 2);
    }

    #[test]
    fn pencil_forms() {
        let w = pencil_vector_field(&pp("X"), &pp("Y")).unwrap();
        assert!(w.proportional(&ProjectiveOneForm::parse("Y", "-X", "0").unwrap()));
        let w = pencil_vector_field(&pp("X^2*Z^3 + Y^5"), &pp("Z^5")).unwrap();
        assert!(w.proportional(&ProjectiveOneForm::parse("2*X*Z^4", "5*Y^4*Z", "-(5*Y^5 + 2*X^2*Z^3)").unwrap()));
        assert!(matches!(pencil_vector_field(&pp("X*Y"), &pp("X*Z")), Err(LinsysError::CommonComponent(_))));
    }

    #[test]
    fn cusp_pencil_base_points() {
        let f1 = pp("X^2*Z^3 + Y^5");
        let f2 = pp("Z^5");
        let bp = pencil_base_points(&f1, &f2, 0).unwrap();
        let mut want = vec![3, 2];
        want.extend([1; 12]);
        assert_eq!(bp.cluster.multiplicities, want);
        assert_eq!(bp.dicritical.iter().filter(|d| **d).count(), 1);
        assert!(bp.dicritical[13]);
        let red = reduce(&pencil_vector_field(&f1, &f2).unwrap(), ReduceOptions::default()).unwrap();
        assert!(bp.cluster.configuration.structurally_equal(&red.dicritical_configuration));
        let n2: u64 = bp.cluster.multiplicities.iter().map(|m| m * m).sum();
        assert_eq!(n2, 25);
    }

    #[test]
    fn cusp_pencil_local_transforms() {
        let bp = pencil_base_points(&pp("X^2*Z^3 + Y^5"), &pp("Z^5"), 0).unwrap();
        let rows: Vec<(String, String)> = vec![
            ("z^3 + y^5".into(), "z^5".into()),
            ("y1^2 + z1^3".into(), "y1^2*z1^5".into()),
            ("z2 + y2^2".into(), "y2^2*z2^5".into()),
            ("y3 + z3".into(), "y3^6*z3^5".into()),
            ("z4".into(), "y4^10*(z4 - 1)^5".into()),
        ];
        let general = (5..=13).map(|i| (format!("z{i}"), format!("y{i}^{}*(z{i}*y{i}^{} - 1)^5", 14 - i, i - 4)));
        for (i, (g1, g2)) in rows.into_iter().chain(general).enumerate() {
            let (y, z) = if i == 0 { ("y".to_string(), "z".to_string()) } else { (format!("y{i}"), format!("z{i}")) };
            let vars = [y.as_str(), z.as_str()];
            let (f1, f2) = &bp.local[i];
            assert_eq!(f1.var_names(), vars.iter().map(|s| s.to_string()).collect::<Vec<_>>(), "point {i}");
            assert_eq!(*f1, parse_poly_in(&g1, &vars).unwrap(), "point {i}");
            assert_eq!(*f2, parse_poly_in(&g2, &vars).unwrap(), "point {i}");
        }
    }

    #[test]
    fn line_pencil() {
        let bp = pencil_base_points(&pp("X"), &pp("Y"), 0).unwrap();
        assert_eq!(bp.cluster.multiplicities, vec![1]);
        assert_eq!(bp.dicritical, vec![true]);
    }
}

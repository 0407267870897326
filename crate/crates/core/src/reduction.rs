//! Reduction of singularities of a projective 1-form: plane singular
//! points, recursive blow-ups of ordinary singularities, and the singular
//! and dicritical configurations.

use crate::blowup::{blow_up_form, classify, BlowupError, Branch, LocalOneForm, PointClass, TrackedCurve};
use crate::exactalg::field::join_levels;
use crate::exactalg::linalg::determinant;
use crate::exactalg::upoly::interpolate;
use crate::exactalg::{root_orbits, AlgError, Fe, Level, MultiPoly, UPoly, DEFAULT_MAX_TOWER_DEGREE};
use crate::infnear::{expand_orbits, Configuration, InfNearError, Location, OrbitPoint};
use crate::vfield::{restrict_to_chart, Chart, ProjectiveOneForm};
use serde::Serialize;
use std::collections::BTreeSet;
use std::sync::Arc;
use thiserror::Error;

pub const DEFAULT_MAX_DEPTH: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReductionError {
    #[error("reduction did not finish within {0} successive blow-ups")]
    DepthExceeded(usize),
    #[error("the 1-form has a curve of singular points (common factor {0})")]
    NonIsolatedSingularities(String),
    #[error(transparent)]
    Alg(#[from] AlgError),
    #[error(transparent)]
    Blowup(#[from] BlowupError),
    #[error(transparent)]
    InfNear(#[from] InfNearError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StructureMismatch {
    #[error("{free} maximal free points for {dicritical} maximal dicritical points")]
    Count { free: usize, dicritical: usize },
    #[error("maximal dicritical point {0} lies above no maximal free point, or shares one")]
    Unpaired(usize),
}

#[derive(Clone, Copy, Debug)]
pub struct ReduceOptions {
    pub max_depth: usize,
    pub max_tower_degree: usize,
}

impl Default for ReduceOptions {
    fn default() -> Self {
        ReduceOptions { max_depth: DEFAULT_MAX_DEPTH, max_tower_degree: DEFAULT_MAX_TOWER_DEGREE }
    }
}

/// A singular point of the plane, simple ones included.
#[derive(Clone, Debug)]
pub struct PlaneSingularity {
    pub location: Location,
    pub class: PointClass,
    pub orbit_size: usize,
}

#[derive(Clone, Debug)]
pub struct ReductionResult {
    pub omega: ProjectiveOneForm,
    pub plane_singularities: Vec<PlaneSingularity>,
    /// S(X), conjugate points written out.
    pub singular_configuration: Configuration,
    pub classification: Vec<PointClass>,
    /// Points of S(X) on the strict transforms of `Z = 0`.
    pub infinity_points: BTreeSet<usize>,
    /// Strict transform at each point in its local chart (a conjugate copy
    /// carries the form of its representative).
    pub local_forms: Vec<LocalOneForm>,
    pub fields: Vec<Option<Arc<Level>>>,
    /// D(X), renumbered.
    pub dicritical_configuration: Configuration,
    /// Id in S(X) of each point of D(X).
    pub dicritical_in_singular: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum CurveTag {
    Infinity,
    Divisor(usize),
}

struct RepNode {
    parent: Option<usize>,
    location: Location,
    level: usize,
    proximate_to: Vec<usize>,
    orbit_size: usize,
    class: PointClass,
    form: LocalOneForm,
    field: Option<Arc<Level>>,
    on_infinity: bool,
}

/// Root orbits of univariate polynomials, naming each new extension
/// generator in order of creation.
pub(crate) struct RootFinder {
    pub max_tower_degree: usize,
    names: usize,
}

impl RootFinder {
    pub(crate) fn new(max_tower_degree: usize) -> RootFinder {
        RootFinder { max_tower_degree, names: 0 }
    }

    /// Representatives sorted by value, with orbit sizes.
    pub(crate) fn orbits(&mut self, f: &UPoly, level: Option<&Arc<Level>>) -> Result<Vec<(Fe, usize)>, AlgError> {
        let names = &mut self.names;
        let mut namer = move || {
            *names += 1;
            format!("a{}", names)
        };
        let mut r = root_orbits(f, level, self.max_tower_degree, &mut namer)?;
        r.sort_by(|a, b| a.0.cmp(&b.0));
        Ok(r)
    }
}

struct Driver {
    opts: ReduceOptions,
    nodes: Vec<RepNode>,
    roots: RootFinder,
}

impl Driver {
    /// Records an ordinary point and blows it up; simple points stop here.
    #[allow(clippy::too_many_arguments)]
    fn visit(
        &mut self,
        parent: Option<usize>,
        location: Location,
        level: usize,
        orbit_size: usize,
        form: LocalOneForm,
        field: Option<Arc<Level>>,
        curves: Vec<(CurveTag, TrackedCurve)>,
    ) -> Result<(), ReductionError> {
        let class = classify(&form);
        if !class.is_ordinary() {
            return Ok(());
        }
        if level > self.opts.max_depth {
            return Err(ReductionError::DepthExceeded(self.opts.max_depth));
        }
        let id = self.nodes.len();
        let mut proximate_to: Vec<usize> =
            curves.iter().filter_map(|(t, _)| if let CurveTag::Divisor(p) = t { Some(*p) } else { None }).collect();
        proximate_to.sort_unstable();
        let on_infinity = curves.iter().any(|(t, _)| *t == CurveTag::Infinity);
        self.nodes.push(RepNode {
            parent,
            location,
            level,
            proximate_to,
            orbit_size,
            class,
            form: form.clone(),
            field: field.clone(),
            on_infinity,
        });

        let zero = Fe::zero();
        let vars = crate::blowup::next_vars(&form.vars());
        let new_vars = [vars[0].as_str(), vars[1].as_str()];
        let children_curves = |branch: Branch, lam: &Fe| -> Vec<(CurveTag, TrackedCurve)> {
            let mut out = vec![(CurveTag::Divisor(id), TrackedCurve::divisor(&format!("E{}", id), &new_vars, branch))];
            for (t, c) in &curves {
                let mut s = c.blow_up(&zero, branch);
                if !lam.is_zero() {
                    s = s.translate(&zero, lam);
                }
                if s.passes_through_origin() {
                    out.push((*t, s));
                }
            }
            out
        };

        let v2 = blow_up_form(&form, &zero, Branch::V2)?;
        let cs = children_curves(Branch::V2, &zero);
        self.visit(
            Some(id),
            Location::Divisor { branch: Branch::V2, coordinate: zero.clone() },
            level + 1,
            1,
            v2.form,
            field.clone(),
            cs,
        )?;

        let v1 = blow_up_form(&form, &zero, Branch::V1)?;
        let on_e = |p: &MultiPoly| p.eval_var(0, &zero).to_upoly(1);
        let g = on_e(&v1.form.a).gcd(&on_e(&v1.form.b));
        if g.is_zero() {
            return Err(ReductionError::NonIsolatedSingularities(format!("exceptional divisor of point {}", id)));
        }
        for (lam, size) in self.roots.orbits(&g, field.as_ref())? {
            let child_field = join_levels(field.as_ref(), lam.level());
            let child_form = if lam.is_zero() { v1.form.clone() } else { v1.form.translate(&zero, &lam) };
            let cs = children_curves(Branch::V1, &lam);
            self.visit(
                Some(id),
                Location::Divisor { branch: Branch::V1, coordinate: lam },
                level + 1,
                size,
                child_form,
                child_field,
                cs,
            )?;
        }
        Ok(())
    }
}

/// `Res_y(a, b)` of two bivariate polynomials, as a polynomial in the first
/// variable; computed from Sylvester determinants at enough sample points.
fn resultant_in_second(a: &MultiPoly, b: &MultiPoly) -> UPoly {
    let n = a.degree_in(1) as usize;
    let m = b.degree_in(1) as usize;
    if n + m == 0 {
        return UPoly::one();
    }
    let bound = m * a.total_degree().unwrap_or(0) as usize + n * b.total_degree().unwrap_or(0) as usize;
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for k in 0..=bound {
        let x = Fe::int(k as i64);
        let coeffs = |p: &MultiPoly, d: usize| -> Vec<Fe> {
            let u = p.eval_var(0, &x).to_upoly(1);
            (0..=d).map(|i| u.coeff(i)).collect()
        };
        let ca = coeffs(a, n);
        let cb = coeffs(b, m);
        let size = n + m;
        let mut mat = vec![vec![Fe::zero(); size]; size];
        for r in 0..m {
            for (i, c) in ca.iter().enumerate() {
                mat[r][r + n - i] = c.clone();
            }
        }
        for r in 0..n {
            for (i, c) in cb.iter().enumerate() {
                mat[m + r][r + m - i] = c.clone();
            }
        }
        xs.push(x);
        ys.push(determinant(&mat));
    }
    interpolate(&xs, &ys)
}

/// Common zeros of pairs of polynomials given in the three charts: in the
/// chart `X != 0` only those on `z = 0`, in `Y != 0` only the origin, and
/// in `Z != 0` all of them. Each entry is a representative point and the
/// size of its orbit over ℚ.
pub(crate) fn plane_common_zeros(
    roots: &mut RootFinder,
    charts: [(&MultiPoly, &MultiPoly); 3],
) -> Result<Vec<(Chart, [Fe; 2], usize)>, ReductionError> {
    let mut out = Vec::new();
    let zero = Fe::zero();
    let (xa, xb) = charts[0];
    let on_line = |p: &MultiPoly| p.eval_var(1, &zero).to_upoly(0);
    let g = on_line(xa).gcd(&on_line(xb));
    if g.is_zero() {
        return Err(ReductionError::NonIsolatedSingularities("Z".to_string()));
    }
    for (y0, size) in roots.orbits(&g, None)? {
        out.push((Chart::X, [y0, zero.clone()], size));
    }
    let (ya, yb) = charts[1];
    if ya.constant_term().is_zero() && yb.constant_term().is_zero() {
        out.push((Chart::Y, [zero.clone(), zero.clone()], 1));
    }
    let (za, zb) = charts[2];
    if za.is_zero() || zb.is_zero() {
        let other = if za.is_zero() { zb } else { za };
        if !other.is_constant() {
            return Err(ReductionError::NonIsolatedSingularities(other.to_string()));
        }
        return Ok(out);
    }
    let res = resultant_in_second(za, zb);
    if res.is_zero() {
        return Err(ReductionError::NonIsolatedSingularities(za.gcd(zb).to_string()));
    }
    for (x0, s1) in roots.orbits(&res, None)? {
        let fibre = |p: &MultiPoly| p.eval_var(0, &x0).to_upoly(1);
        let h = fibre(za).gcd(&fibre(zb));
        if h.is_zero() {
            return Err(ReductionError::NonIsolatedSingularities(format!("x - ({})", x0)));
        }
        for (y0, s2) in roots.orbits(&h, x0.level())? {
            out.push((Chart::Z, [x0.clone(), y0], s1 * s2));
        }
    }
    Ok(out)
}

/// Runs the reduction of singularities of `omega`.
pub fn reduce(omega: &ProjectiveOneForm, opts: ReduceOptions) -> Result<ReductionResult, ReductionError> {
    let content = omega.content();
    if !content.is_constant() {
        return Err(ReductionError::NonIsolatedSingularities(content.to_string()));
    }
    let mut driver = Driver { opts, nodes: Vec::new(), roots: RootFinder::new(opts.max_tower_degree) };
    let mut plane_singularities = Vec::new();
    let charts = [Chart::X, Chart::Y, Chart::Z].map(|c| restrict_to_chart(omega, c));
    let pairs = [0, 1, 2].map(|i| (&charts[i].a, &charts[i].b));
    for (chart, coords, size) in plane_common_zeros(&mut driver.roots, pairs)? {
        let form = restrict_to_chart(omega, chart);
        let form = if coords.iter().all(|c| c.is_zero()) { form } else { form.translate(&coords[0], &coords[1]) };
        let field = coords.iter().filter_map(|c| c.level()).max_by_key(|l| l.depth()).cloned();
        let location = Location::Plane { chart, coords };
        plane_singularities.push(PlaneSingularity { location: location.clone(), class: classify(&form), orbit_size: size });
        let mut curves = Vec::new();
        if chart != Chart::Z {
            let vars = form.vars();
            curves.push((CurveTag::Infinity, TrackedCurve::new("infinity-line", MultiPoly::var(&vars, 1))));
        }
        driver.visit(None, location, 0, size, form, field, curves)?;
    }
    assemble(omega.clone(), plane_singularities, driver.nodes)
}

fn assemble(omega: ProjectiveOneForm, plane_singularities: Vec<PlaneSingularity>, nodes: Vec<RepNode>) -> Result<ReductionResult, ReductionError> {
    let reps: Vec<OrbitPoint> = nodes
        .iter()
        .map(|n| OrbitPoint {
            parent: n.parent,
            location: n.location.clone(),
            level: n.level,
            proximate_to: n.proximate_to.clone(),
            orbit_size: n.orbit_size,
        })
        .collect();
    let (singular_configuration, rep_of) = expand_orbits(&reps)?;
    let classification: Vec<PointClass> = rep_of.iter().map(|&r| nodes[r].class).collect();
    let infinity_points = (0..rep_of.len()).filter(|&i| nodes[rep_of[i]].on_infinity).collect();
    let local_forms = rep_of.iter().map(|&r| nodes[r].form.clone()).collect();
    let fields = rep_of.iter().map(|&r| nodes[r].field.clone()).collect();

    let mut dset = BTreeSet::new();
    for (i, c) in classification.iter().enumerate() {
        if *c == PointClass::Dicritical {
            dset.extend(singular_configuration.ancestors(i));
        }
    }
    let (dicritical_configuration, dicritical_in_singular) = singular_configuration.restrict(&dset)?;
    Ok(ReductionResult {
        omega,
        plane_singularities,
        singular_configuration,
        classification,
        infinity_points,
        local_forms,
        fields,
        dicritical_configuration,
        dicritical_in_singular,
    })
}

impl ReductionResult {
    /// Classification of each point of D(X).
    pub fn dicritical_classes(&self) -> Vec<PointClass> {
        self.dicritical_in_singular.iter().map(|&s| self.classification[s]).collect()
    }

    /// Points of D(X) on the strict transforms of the line at infinity.
    pub fn dicritical_infinity_points(&self) -> BTreeSet<usize> {
        self.dicritical_in_singular.iter().enumerate().filter(|(_, s)| self.infinity_points.contains(s)).map(|(d, _)| d).collect()
    }

    pub fn dicritical_forms(&self) -> Vec<LocalOneForm> {
        self.dicritical_in_singular.iter().map(|&s| self.local_forms[s].clone()).collect()
    }

    /// Points of S(X) that are dicritical singularities.
    pub fn dicritical_singularities(&self) -> Vec<usize> {
        (0..self.classification.len()).filter(|&i| self.classification[i] == PointClass::Dicritical).collect()
    }

    /// JSON report of the reduction.
    pub fn to_json(&self) -> serde_json::Value {
        let s = &self.singular_configuration;
        let dic: Vec<bool> = self.classification.iter().map(|c| *c == PointClass::Dicritical).collect();
        #[derive(Serialize)]
        struct Sp {
            id: usize,
            label: String,
            class: PointClass,
            location: String,
            level: usize,
            field: Option<String>,
            form: String,
        }
        let singular_points: Vec<Sp> = s
            .points()
            .iter()
            .map(|p| Sp {
                id: p.id,
                label: p.label.clone(),
                class: self.classification[p.id],
                location: p.location.to_string(),
                level: p.level,
                field: self.fields[p.id].as_ref().map(|l| l.describe()),
                form: self.local_forms[p.id].to_string(),
            })
            .collect();
        let classifications: serde_json::Map<String, serde_json::Value> =
            s.points().iter().map(|p| (p.label.clone(), serde_json::Value::String(self.classification[p.id].to_string()))).collect();
        let plane: Vec<serde_json::Value> = self
            .plane_singularities
            .iter()
            .map(|p| serde_json::json!({"location": p.location.to_string(), "class": p.class, "orbit_size": p.orbit_size}))
            .collect();
        serde_json::json!({
            "form": self.omega.to_string(),
            "plane_singularities": plane,
            "singular_points": singular_points,
            "dicritical": self.dicritical_in_singular,
            "dicritical_singularities": self.dicritical_singularities(),
            "infinity_points": self.infinity_points,
            "proximity_graph": s.to_json(Some(&dic)),
            "classifications": classifications,
        })
    }
}

/// Maximal points of D(X), in id order (ids of D(X)).
pub fn dicritical_points(res: &ReductionResult) -> Vec<usize> {
    res.dicritical_configuration.maximal_points()
}

/// Maximal free points of D(X), listed so that the i-th lies below the i-th
/// maximal dicritical point.
pub fn max_free_points(res: &ReductionResult) -> Result<Vec<usize>, StructureMismatch> {
    pair_maximal_free(&res.dicritical_configuration)
}

/// For each maximal point of `d` (in id order), a distinct maximal free
/// point below it.
pub fn pair_maximal_free(d: &Configuration) -> Result<Vec<usize>, StructureMismatch> {
    let rs = d.maximal_points();
    let ms = d.maximal_free_points();
    if ms.len() != rs.len() {
        return Err(StructureMismatch::Count { free: ms.len(), dicritical: rs.len() });
    }
    let mut used = vec![false; ms.len()];
    let mut out = Vec::new();
    for &r in &rs {
        let Some(k) = (0..ms.len()).find(|&k| !used[k] && d.is_infinitely_near(r, ms[k])) else {
            return Err(StructureMismatch::Unpaired(r));
        };
        used[k] = true;
        out.push(ms[k]);
    }
    Ok(out)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::exactalg::parse_poly_in;
    use crate::vfield::{projectivize, AffineVectorField};

    #[test]
    fn resultant_small() {
        let a = parse_poly_in("y^2 - x", &["x", "y"]).unwrap();
        let b = parse_poly_in("y - x", &["x", "y"]).unwrap();
        // Res_y = x^2 - x
        assert_eq!(resultant_in_second(&a, &b), UPoly::from_ints(&[0, -1, 1]));
    }

    #[test]
    fn radial_field() {
        let v = AffineVectorField::parse("x", "y").unwrap();
        let res = reduce(&projectivize(&v), ReduceOptions::default()).unwrap();
        assert_eq!(res.singular_configuration.len(), 1);
        assert_eq!(res.classification, vec![PointClass::Dicritical]);
        assert!(res.infinity_points.is_empty());
    }

    #[test]
    fn centre_has_conjugate_points_at_infinity() {
        let v = AffineVectorField::parse("-y", "x").unwrap();
        let res = reduce(&projectivize(&v), ReduceOptions::default()).unwrap();
        let d = &res.dicritical_configuration;
        assert_eq!(d.len(), 4);
        assert_eq!(dicritical_points(&res).len(), 2);
        assert_eq!(res.dicritical_infinity_points().len(), 2);
        assert_eq!(max_free_points(&res).unwrap().len(), 2);
        assert!(d.point(2).conjugate_of == Some(0));
    }

    fn cusp_form() -> ProjectiveOneForm {
        ProjectiveOneForm::parse("2*X*Z^4", "5*Y^4*Z", "-(5*Y^5 + 2*X^2*Z^3)").unwrap()
    }

    #[test]
    fn cusp_form_configuration() {
        let res = reduce(&cusp_form(), ReduceOptions::default()).unwrap();
        let s = &res.singular_configuration;
        assert_eq!(s.len(), 18);
        assert_eq!(res.dicritical_singularities(), vec![13]);
        assert_eq!(s.dotted_edges(), vec![(0, 2), (1, 3), (15, 17)]);
        assert_eq!(res.dicritical_configuration.len(), 14);
        assert_eq!(res.infinity_points, [0, 1].into());
    }

    pub(crate) fn three_curve_field() -> AffineVectorField {
        AffineVectorField::parse(
            "2*x^6 - x^4 + 6*x^3*y - x^2*y + 4*y^2",
            "-(10*x^7 - 9*x^6 + 6*x^5*y + 9*x^4*y - 6*x^3*y + 6*x^2*y^2 + 2*x*y^2)",
        )
        .unwrap()
    }

    #[test]
    fn three_curve_configuration() {
        let omega = projectivize(&three_curve_field());
        let a = parse_poly_in("10*X^7*Z - 9*X^6*Z^2 + 6*X^5*Y*Z^2 + 9*X^4*Y*Z^3 - 6*X^3*Y*Z^4 + 6*X^2*Y^2*Z^4 + 2*X*Y^2*Z^5", &["X", "Y", "Z"]).unwrap();
        assert_eq!(omega.a, a);
        let res = reduce(&omega, ReduceOptions::default()).unwrap();
        assert_eq!(res.singular_configuration.len(), 31);
        assert_eq!(res.dicritical_singularities(), vec![13, 23, 28]);
        assert_eq!(res.dicritical_in_singular, (0..29).collect::<Vec<_>>());
        assert_eq!(res.infinity_points, [0, 1].into());
        assert_eq!(max_free_points(&res).unwrap(), vec![13, 23, 28]);
    }

    #[test]
    fn non_isolated() {
        let v = AffineVectorField::parse("x*(x+y)", "y*(x+y)").unwrap();
        assert!(matches!(reduce(&projectivize(&v), ReduceOptions::default()), Err(ReductionError::NonIsolatedSingularities(_))));
    }
}

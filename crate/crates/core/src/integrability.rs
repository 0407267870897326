//! Deciding whether a planar polynomial vector field has a polynomial first
//! integral that is a product of curves with one place at infinity, and
//! computing a minimal one from the dicritical configuration.

use crate::exactalg::field::Level;
use crate::exactalg::linalg::primitive_vector;
use crate::exactalg::{nullspace, norm_to_rationals, rank, solve_unique, Fe, MultiPoly, Rational};
use crate::infnear::{e_vector, multiplicity_system, pairing, Configuration, Location, PairingVector};
use crate::linsys::{linear_system, monomials, Cluster, LinsysError};
use crate::reduction::{pair_maximal_free, reduce, ReduceOptions, ReductionError, ReductionResult};
use crate::vfield::{cofactor, dehomogenize, projectivize, verify_first_integral, AffineVectorField, Chart, PROJECTIVE_VARS};
use crate::blowup::PointClass;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;
use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

/// Placements tried by [`poincare_bound`] before giving up.
pub const MAX_PLACEMENTS: usize = 100_000;

/// Why no integral of the sought type exists.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum ReasonCode {
    #[serde(rename = "line-not-invariant")]
    LineNotInvariant,
    #[serde(rename = "no-dicritical-points")]
    NoDicriticalPoints,
    #[serde(rename = "dicritical-not-maximal")]
    DicriticalNotMaximal,
    #[serde(rename = "wrong-free-maximal-count")]
    WrongFreeMaximalCount,
    #[serde(rename = "S-dependent")]
    SDependent,
    #[serde(rename = "R-not-rank-one")]
    RNotRankOne,
    #[serde(rename = "R-non-integral")]
    RNonIntegral,
    #[serde(rename = "degree-checks-failed")]
    DegreeChecksFailed,
    #[serde(rename = "curve-not-unique")]
    CurveNotUnique,
    #[serde(rename = "curve-not-invariant")]
    CurveNotInvariant,
    #[serde(rename = "exponents-invalid")]
    ExponentsInvalid,
    #[serde(rename = "verification-failed")]
    VerificationFailed,
}

impl ReasonCode {
    pub fn as_str(self) -> &'static str {
        match self {
            ReasonCode::LineNotInvariant => "line-not-invariant",
            ReasonCode::NoDicriticalPoints => "no-dicritical-points",
            ReasonCode::DicriticalNotMaximal => "dicritical-not-maximal",
            ReasonCode::WrongFreeMaximalCount => "wrong-free-maximal-count",
            ReasonCode::SDependent => "S-dependent",
            ReasonCode::RNotRankOne => "R-not-rank-one",
            ReasonCode::RNonIntegral => "R-non-integral",
            ReasonCode::DegreeChecksFailed => "degree-checks-failed",
            ReasonCode::CurveNotUnique => "curve-not-unique",
            ReasonCode::CurveNotInvariant => "curve-not-invariant",
            ReasonCode::ExponentsInvalid => "exponents-invalid",
            ReasonCode::VerificationFailed => "verification-failed",
        }
    }
}

impl fmt::Display for ReasonCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NoIntegral {
    pub reason: ReasonCode,
    pub detail: String,
}

fn no(reason: ReasonCode, detail: impl Into<String>) -> Halt {
    Halt::NoIntegral(NoIntegral { reason, detail: detail.into() })
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IntegrabilityError {
    #[error(transparent)]
    Reduction(#[from] ReductionError),
    #[error(transparent)]
    Linsys(#[from] LinsysError),
    #[error("no placement of the line at infinity gives a valid degree")]
    NoAdmissiblePlacement,
    #[error("more than {0} placements of the line at infinity")]
    TooManyPlacements(usize),
}

/// Either a clean negative answer or a failure of the computation itself.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Halt {
    NoIntegral(NoIntegral),
    Error(IntegrabilityError),
}

impl<E: Into<IntegrabilityError>> From<E> for Halt {
    fn from(e: E) -> Halt {
        Halt::Error(e.into())
    }
}

impl fmt::Display for Halt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Halt::NoIntegral(n) => write!(f, "no integral ({}): {}", n.reason, n.detail),
            Halt::Error(e) => write!(f, "{e}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    Pairing,
    Darboux,
}

/// The vectors `c_i` and `e_Q` spanning the space orthogonal to `R`.
#[derive(Clone, Debug)]
pub struct SVectors {
    /// Maximal points of D(X), in id order.
    pub maximal: Vec<usize>,
    /// `M_i`, the maximal free point below the i-th maximal point.
    pub maximal_free: Vec<usize>,
    /// `h^i`, the multiplicity system of the points below `M_i`.
    pub h: Vec<Vec<u64>>,
    pub c: Vec<PairingVector>,
    pub non_maximal: Vec<usize>,
    pub e: Vec<PairingVector>,
    pub infinity: BTreeSet<usize>,
}

impl SVectors {
    pub fn r(&self) -> usize {
        self.c.len()
    }

    pub fn degrees(&self) -> Vec<u64> {
        self.c.iter().map(|c| c.v0.to_integer().to_u64().unwrap()).collect()
    }

    /// The `c_i` followed by the `e_Q`.
    pub fn rows(&self) -> Vec<PairingVector> {
        self.c.iter().chain(&self.e).cloned().collect()
    }

    /// Integer matrix with one row per vector, first column the degree.
    pub fn matrix(&self) -> Vec<Vec<i64>> {
        self.rows().iter().map(|v| v.flat().iter().map(|x| x.to_integer().to_i64().unwrap()).collect()).collect()
    }
}

/// Assembles `S` from the proximity structure of D(X) and the points of
/// D(X) on the strict transforms of the line at infinity.
pub fn assemble_s(d: &Configuration, infinity: &BTreeSet<usize>) -> Result<SVectors, Halt> {
    if d.is_empty() {
        return Err(no(ReasonCode::NoDicriticalPoints, "the dicritical configuration is empty"));
    }
    let maximal = d.maximal_points();
    let maximal_free = pair_maximal_free(d).map_err(|e| no(ReasonCode::WrongFreeMaximalCount, e.to_string()))?;
    let mut h = Vec::new();
    let mut c = Vec::new();
    for &m in &maximal_free {
        let sub: BTreeSet<usize> = d.ancestors(m).into_iter().collect();
        let hi = multiplicity_system(&sub, d).map_err(|e| Halt::Error(ReductionError::from(e).into()))?;
        let di: u64 = infinity.iter().map(|&q| hi[q]).sum();
        c.push(PairingVector {
            v0: Rational::from_integer(di.into()),
            comps: hi.iter().map(|&x| Rational::from_integer(x.into())).collect(),
        });
        h.push(hi);
    }
    let non_maximal: Vec<usize> = (0..d.len()).filter(|&p| !d.is_maximal(p)).collect();
    let e = non_maximal.iter().map(|&p| e_vector(d, p)).collect();
    Ok(SVectors { maximal, maximal_free, h, c, non_maximal, e, infinity: infinity.clone() })
}

fn to_fe(v: &[Rational]) -> Vec<Fe> {
    v.iter().map(|x| Fe::Rat(x.clone())).collect()
}

fn from_fe(v: &[Fe]) -> Vec<Rational> {
    v.iter().map(|x| x.as_rational().expect("rational linear algebra").clone()).collect()
}

/// The primitive generator of the orthogonal complement of `S`, checked
/// against the degree identities.
pub fn compute_r(s: &SVectors) -> Result<PairingVector, Halt> {
    let rows: Vec<Vec<Fe>> = s.rows().iter().map(|v| to_fe(&v.flat())).collect();
    let n = s.c.first().map(|c| c.len()).unwrap_or(0);
    if rank(&rows, n + 1) != rows.len() {
        return Err(no(ReasonCode::SDependent, "the vectors c_i, e_Q are linearly dependent"));
    }
    let orth: Vec<Vec<Fe>> = rows.iter().map(|r| r.iter().enumerate().map(|(k, x)| if k == 0 { x.clone() } else { -x }).collect()).collect();
    let ns = nullspace(&orth, n + 1);
    if ns.len() != 1 {
        return Err(no(ReasonCode::RNotRankOne, format!("orthogonal complement of dimension {}", ns.len())));
    }
    let mut v = from_fe(&primitive_vector(&ns[0]));
    if v[0].is_negative() {
        v.iter_mut().for_each(|x| *x = -x.clone());
    }
    let r = PairingVector::from_flat(&v);
    if !r.v0.is_positive() || r.comps.iter().any(|x| !x.is_positive()) {
        return Err(no(ReasonCode::RNonIntegral, format!("R = {r} has a non-positive component")));
    }
    let at_infinity: Rational = s.infinity.iter().map(|&p| r.comps[p].clone()).sum();
    if at_infinity != r.v0 {
        return Err(no(ReasonCode::DegreeChecksFailed, format!("n = {} but the points at infinity give {}", r.v0, at_infinity)));
    }
    if !pairing(&r, &r).unwrap().is_zero() {
        return Err(no(ReasonCode::DegreeChecksFailed, format!("n^2 differs from the sum of squares for R = {r}")));
    }
    Ok(r)
}

/// `R = Σ n_i c_i + Σ b_Q e_Q`: returns `(n_i)` and `(b_Q)`.
pub fn exponents_pairing(r: &PairingVector, s: &SVectors) -> Result<(Vec<u64>, Vec<u64>), Halt> {
    let cols = s.rows();
    let len = r.len() + 1;
    let a: Vec<Vec<Fe>> = (0..len).map(|i| cols.iter().map(|v| Fe::Rat(v.flat()[i].clone())).collect()).collect();
    let Some(sol) = solve_unique(&a, &to_fe(&r.flat()), cols.len()) else {
        return Err(no(ReasonCode::ExponentsInvalid, "R is not in the span of S"));
    };
    let sol = from_fe(&sol);
    let as_u64 = |x: &Rational, positive: bool| -> Option<u64> {
        if !x.is_integer() || x.is_negative() || (positive && x.is_zero()) {
            return None;
        }
        x.to_integer().to_u64()
    };
    let ni: Option<Vec<u64>> = sol[..s.r()].iter().map(|x| as_u64(x, true)).collect();
    let bq: Option<Vec<u64>> = sol[s.r()..].iter().map(|x| as_u64(x, false)).collect();
    match (ni, bq) {
        (Some(ni), Some(bq)) => {
            if ni.iter().fold(0u64, |g, x| g.gcd(x)) != 1 {
                return Err(no(ReasonCode::ExponentsInvalid, format!("exponents {ni:?} are not coprime")));
            }
            Ok((ni, bq))
        }
        _ => Err(no(ReasonCode::ExponentsInvalid, format!("coefficients {} are not non-negative integers", fmt_rats(&sol)))),
    }
}

fn fmt_rats(v: &[Rational]) -> String {
    let s: Vec<String> = v.iter().map(crate::exactalg::field::fmt_rational).collect();
    format!("({})", s.join(", "))
}

/// An invariant-curve candidate and its Galois conjugates.
#[derive(Clone, Debug)]
pub struct CandidateCurve {
    /// Indices `i` of the `c_i` whose curves are conjugate to this one,
    /// representative first.
    pub indices: Vec<usize>,
    /// Projective equation through the representative point, possibly over
    /// an extension field.
    pub equation: MultiPoly,
    pub field: Option<Arc<Level>>,
    /// Product of all conjugates: a rational projective polynomial.
    pub rational: MultiPoly,
}

/// Curves `C_i`: the unique member of the linear system of each `c_i`, or,
/// when `r = 1`, the member of the pencil `L(R)` independent of `Z^n`.
pub fn extract_curves(d: &Configuration, s: &SVectors, r: Option<&PairingVector>) -> Result<Vec<CandidateCurve>, Halt> {
    let mut out = Vec::new();
    if s.r() == 1 {
        let r = match r {
            Some(r) => r.clone(),
            None => compute_r(s)?,
        };
        let n = r.v0.to_integer().to_u32().unwrap();
        let mult: Vec<u64> = r.comps.iter().map(|x| x.to_integer().to_u64().unwrap()).collect();
        let cluster = Cluster::new(d.clone(), mult)?;
        let sys = match linear_system(n, &cluster) {
            Ok(l) => l,
            Err(LinsysError::EmptySystem) => return Err(no(ReasonCode::CurveNotUnique, "L(R) is empty")),
            Err(e) => return Err(e.into()),
        };
        let zn = MultiPoly::monomial(&PROJECTIVE_VARS, [0, 0, n, 0, 0, 0], Fe::one());
        let mut with_z: Vec<Vec<Fe>> = sys.basis.iter().map(|b| coeff_vector(b, n)).collect();
        with_z.push(coeff_vector(&zn, n));
        if sys.basis.len() != 2 || rank(&with_z, monomials(n).len()) != 2 {
            return Err(no(ReasonCode::CurveNotUnique, format!("L(R) has dimension {} and must be a pencil containing Z^{n}", sys.basis.len())));
        }
        let e = [0, 0, n, 0, 0, 0];
        let (b1, b2) = (&sys.basis[0], &sys.basis[1]);
        let member = (&b1.scale(&b2.coeff(&e)) - &b2.scale(&b1.coeff(&e))).normalized();
        out.push(CandidateCurve { indices: vec![0], rational: member.clone(), equation: member, field: None });
        return Ok(out);
    }
    for i in 0..s.r() {
        let m = s.maximal_free[i];
        if d.point(m).conjugate_of.is_some() {
            continue;
        }
        let indices: Vec<usize> = std::iter::once(i).chain((0..s.r()).filter(|&j| d.point(s.maximal_free[j]).conjugate_of == Some(m))).collect();
        let cluster = Cluster::new(d.clone(), s.h[i].clone())?;
        let degree = s.degrees()[i] as u32;
        let sys = match linear_system(degree, &cluster) {
            Ok(l) => l,
            Err(LinsysError::EmptySystem) => return Err(no(ReasonCode::CurveNotUnique, format!("no curve of degree {degree} for c_{}", i + 1))),
            Err(e) => return Err(e.into()),
        };
        if sys.basis.len() != 1 {
            return Err(no(ReasonCode::CurveNotUnique, format!("degree {degree} system for c_{} has dimension {}", i + 1, sys.basis.len())));
        }
        let equation = sys.basis[0].normalized();
        let field = equation.terms().filter_map(|(_, c)| c.level()).max_by_key(|l| l.depth()).cloned();
        let rational = norm_to_rationals(&equation).normalized();
        let expected = equation.total_degree().unwrap_or(0) as usize * indices.len();
        if rational.total_degree().unwrap_or(0) as usize != expected {
            return Err(no(ReasonCode::VerificationFailed, format!("conjugates of {} do not match the {} conjugate points", equation, indices.len())));
        }
        out.push(CandidateCurve { indices, equation, field, rational });
    }
    Ok(out)
}

fn coeff_vector(f: &MultiPoly, n: u32) -> Vec<Fe> {
    monomials(n).iter().map(|e| f.coeff(&[e[0], e[1], e[2], 0, 0, 0])).collect()
}

/// Cofactors of the given affine curves, or the first one that is not
/// invariant.
pub fn cofactors(v: &AffineVectorField, curves: &[MultiPoly]) -> Result<Vec<MultiPoly>, Halt> {
    curves
        .iter()
        .map(|f| cofactor(v, f).map_err(|e| no(ReasonCode::CurveNotInvariant, e.to_string())))
        .collect()
}

/// Coprime positive integers `λ_i` with `Σ λ_i k_i = 0`.
pub fn exponents_darboux(v: &AffineVectorField, curves: &[MultiPoly]) -> Result<Vec<u64>, Halt> {
    let ks = cofactors(v, curves)?;
    let mut exps: BTreeSet<[u32; 6]> = BTreeSet::new();
    for k in &ks {
        exps.extend(k.terms().map(|(e, _)| *e));
    }
    let rows: Vec<Vec<Fe>> = exps.iter().map(|e| ks.iter().map(|k| k.coeff(e)).collect()).collect();
    let ns = nullspace(&rows, ks.len());
    if ns.len() != 1 {
        return Err(no(ReasonCode::ExponentsInvalid, format!("cofactor relations form a space of dimension {}", ns.len())));
    }
    let w = primitive_vector(&ns[0]);
    let signs: BTreeSet<bool> = w.iter().map(|x| x.as_rational().map(|r| r.is_positive()).unwrap_or(false)).collect();
    if w.iter().any(|x| x.is_zero() || !x.is_rational()) || signs.len() != 1 {
        return Err(no(ReasonCode::ExponentsInvalid, "the cofactor relation is not of one sign"));
    }
    Ok(w.iter().map(|x| x.as_rational().unwrap().abs().to_integer().to_u64().unwrap()).collect())
}

#[derive(Clone, Debug, Serialize)]
pub struct CertificateFactor {
    /// Affine equation with rational coefficients.
    #[serde(serialize_with = "crate::ser_display")]
    pub poly: MultiPoly,
    pub exponent: u64,
    /// Conjugate factors over an extension: the representative and the
    /// number of conjugates; empty for rational curves.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub conjugates: Option<ConjugateFactors>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConjugateFactors {
    #[serde(serialize_with = "crate::ser_display")]
    pub representative: MultiPoly,
    pub count: usize,
    pub field: String,
}

/// A verified first integral `K = Π f_i^{n_i}`.
#[derive(Clone, Debug)]
pub struct IntegralCertificate {
    pub route: Route,
    pub degree: u64,
    pub factors: Vec<CertificateFactor>,
    /// Exponent attached to each `c_i`.
    pub exponents: Vec<u64>,
    pub r: Option<PairingVector>,
    pub k: MultiPoly,
    /// `p K_x + q K_y`.
    pub residual: MultiPoly,
    /// `Σ n_i k_i` over the factors.
    pub cofactor_sum: MultiPoly,
}

impl IntegralCertificate {
    pub fn to_json(&self) -> serde_json::Value {
        let r: Option<Vec<String>> = self.r.as_ref().map(|r| r.flat().iter().map(crate::exactalg::field::fmt_rational).collect());
        serde_json::json!({
            "degree": self.degree,
            "factors": self.factors,
            "exponents": self.exponents,
            "R": r,
            "route": self.route,
            "integral": self.k.to_string(),
            "residual": self.residual.to_string(),
            "cofactor_sum": self.cofactor_sum.to_string(),
            "reason": serde_json::Value::Null,
        })
    }

    /// Factor equations and exponents, sorted, for comparisons.
    pub fn factor_multiset(&self) -> Vec<(String, u64)> {
        let mut v: Vec<(String, u64)> = self.factors.iter().map(|f| (f.poly.to_string(), f.exponent)).collect();
        v.sort();
        v
    }
}

/// Output of the shared steps: reduction, structural checks and curves.
#[derive(Clone, Debug)]
pub struct Candidates {
    pub reduction: ReductionResult,
    pub s: SVectors,
    pub curves: Vec<CandidateCurve>,
}

/// Line at infinity invariant, plane points of D(X) on it, and the
/// maximal points exactly the dicritical ones.
fn structural_checks(res: &ReductionResult) -> Result<(), Halt> {
    let d = &res.dicritical_configuration;
    if d.is_empty() {
        return Err(no(ReasonCode::NoDicriticalPoints, "no dicritical singularity"));
    }
    if !res.omega.infinity_line_invariant() {
        return Err(no(ReasonCode::LineNotInvariant, "the line Z = 0 is not invariant"));
    }
    for &p in &d.roots() {
        if let Location::Plane { chart: Chart::Z, .. } = d.point(p).location {
            return Err(no(ReasonCode::LineNotInvariant, format!("{} of D(X) is an affine point", d.point(p).label)));
        }
    }
    let classes = res.dicritical_classes();
    for p in 0..d.len() {
        if classes[p] == PointClass::Dicritical && !d.is_maximal(p) {
            return Err(no(ReasonCode::DicriticalNotMaximal, format!("{} is dicritical and not maximal", d.point(p).label)));
        }
    }
    Ok(())
}

/// Steps shared by both algorithms.
pub fn candidates(v: &AffineVectorField, opts: ReduceOptions) -> Result<Candidates, Halt> {
    let reduction = reduce(&projectivize(v), opts)?;
    candidates_from(reduction)
}

pub fn candidates_from(reduction: ReductionResult) -> Result<Candidates, Halt> {
    structural_checks(&reduction)?;
    let d = &reduction.dicritical_configuration;
    let s = assemble_s(d, &reduction.dicritical_infinity_points())?;
    let rows: Vec<Vec<Fe>> = s.rows().iter().map(|v| to_fe(&v.flat())).collect();
    if rank(&rows, d.len() + 1) != rows.len() {
        return Err(no(ReasonCode::SDependent, "the vectors c_i, e_Q are linearly dependent"));
    }
    let curves = extract_curves(d, &s, None)?;
    Ok(Candidates { reduction, s, curves })
}

fn affine(f: &MultiPoly) -> MultiPoly {
    dehomogenize(f)
}

/// Builds and verifies the certificate from per-orbit exponents.
fn certify(v: &AffineVectorField, cand: &Candidates, orbit_exps: &[u64], route: Route, r: Option<PairingVector>) -> Result<IntegralCertificate, Halt> {
    let mut exponents = vec![0; cand.s.r()];
    let mut factors = Vec::new();
    let mut k = MultiPoly::constant(&crate::vfield::AFFINE_VARS, Fe::one());
    let mut kproj_degree = 0u64;
    for (curve, &n) in cand.curves.iter().zip(orbit_exps) {
        for &i in &curve.indices {
            exponents[i] = n;
        }
        let f = affine(&curve.rational).normalized();
        k = &k * &f.pow(n as u32);
        kproj_degree += n * curve.rational.total_degree().unwrap() as u64;
        let conjugates = curve.field.as_ref().map(|l| ConjugateFactors {
            representative: affine(&curve.equation),
            count: curve.indices.len(),
            field: l.describe(),
        });
        factors.push(CertificateFactor { poly: f, exponent: n, conjugates });
    }
    let polys: Vec<MultiPoly> = factors.iter().map(|f| f.poly.clone()).collect();
    let ks = cofactors(v, &polys)?;
    let mut cofactor_sum = MultiPoly::zero(&crate::vfield::AFFINE_VARS);
    for (kf, f) in ks.iter().zip(&factors) {
        cofactor_sum = &cofactor_sum + &kf.scale(&Fe::int(f.exponent as i64));
    }
    let (ok, residual) = verify_first_integral(v, &k);
    if !ok || !cofactor_sum.is_zero() {
        return Err(no(ReasonCode::VerificationFailed, format!("p K_x + q K_y = {residual}")));
    }
    if let Some(r) = &r {
        if Rational::from_integer(kproj_degree.into()) != r.v0 {
            return Err(no(ReasonCode::VerificationFailed, format!("K has degree {kproj_degree}, R predicts {}", r.v0)));
        }
    }
    if orbit_exps.iter().fold(0u64, |g, x| g.gcd(x)) != 1 {
        return Err(no(ReasonCode::ExponentsInvalid, "exponents are not coprime"));
    }
    Ok(IntegralCertificate { route, degree: kproj_degree, factors, exponents, r, k, residual, cofactor_sum })
}

/// Step 4 through the pairing: `R`, the exponents `n_i`, and `K`.
pub fn finish_pairing(v: &AffineVectorField, cand: &Candidates) -> Result<IntegralCertificate, Halt> {
    let r = compute_r(&cand.s)?;
    let (ni, _) = exponents_pairing(&r, &cand.s)?;
    let mut orbit_exps = Vec::new();
    for c in &cand.curves {
        let n = ni[c.indices[0]];
        if c.indices.iter().any(|&i| ni[i] != n) {
            return Err(no(ReasonCode::ExponentsInvalid, "conjugate curves get different exponents"));
        }
        orbit_exps.push(n);
    }
    certify(v, cand, &orbit_exps, Route::Pairing, Some(r))
}

/// Steps 4 and 5 through cofactors of the candidate curves.
pub fn finish_darboux(v: &AffineVectorField, cand: &Candidates) -> Result<IntegralCertificate, Halt> {
    let polys: Vec<MultiPoly> = cand.curves.iter().map(|c| affine(&c.rational).normalized()).collect();
    let exps = if polys.len() == 1 {
        cofactors(v, &polys)?;
        vec![1]
    } else {
        exponents_darboux(v, &polys)?
    };
    let r = compute_r(&cand.s).ok();
    certify(v, cand, &exps, Route::Darboux, r)
}

/// Decides through the pairing route.
pub fn algorithm1(v: &AffineVectorField, opts: ReduceOptions) -> Result<IntegralCertificate, Halt> {
    finish_pairing(v, &candidates(v, opts)?)
}

/// Decides through cofactors.
pub fn algorithm2(v: &AffineVectorField, opts: ReduceOptions) -> Result<IntegralCertificate, Halt> {
    finish_darboux(v, &candidates(v, opts)?)
}

/// Degree and exponents from the proximity structure of D(X) and its points
/// on the line at infinity alone.
pub fn poincare_degree(d: &Configuration, infinity: &BTreeSet<usize>) -> Result<(u64, Vec<u64>), Halt> {
    let s = assemble_s(d, infinity)?;
    let r = compute_r(&s)?;
    let (ni, _) = exponents_pairing(&r, &s)?;
    Ok((r.v0.to_integer().to_u64().unwrap(), ni))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PoincareBound {
    pub bound: u64,
    /// A placement of the line at infinity attaining the bound.
    pub placement: BTreeSet<usize>,
    pub exponents: Vec<u64>,
    pub placements_tried: usize,
    pub placements_valid: usize,
}

/// Chains of consecutive free points from `root` downward, each prefix
/// counted once.
fn free_chains(d: &Configuration, root: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut stack = vec![vec![root]];
    while let Some(chain) = stack.pop() {
        let last = *chain.last().unwrap();
        for c in d.children(last) {
            if d.point(c).is_free() {
                let mut next = chain.clone();
                next.push(c);
                stack.push(next);
            }
        }
        out.push(chain);
    }
    out.sort();
    out
}

/// Largest degree over all placements of the line at infinity along
/// chains of free points starting at every root of D(X).
pub fn poincare_bound(d: &Configuration) -> Result<PoincareBound, IntegrabilityError> {
    let per_root: Vec<Vec<Vec<usize>>> = d.roots().iter().map(|&r| free_chains(d, r)).collect();
    let total = per_root.iter().try_fold(1usize, |acc, c| acc.checked_mul(c.len()).filter(|&t| t <= MAX_PLACEMENTS));
    let Some(total) = total else { return Err(IntegrabilityError::TooManyPlacements(MAX_PLACEMENTS)) };
    let mut best: Option<PoincareBound> = None;
    let mut valid = 0;
    for k in 0..total {
        let mut rest = k;
        let mut placement = BTreeSet::new();
        for chains in &per_root {
            placement.extend(chains[rest % chains.len()].iter().copied());
            rest /= chains.len();
        }
        let Ok((n, exps)) = poincare_degree(d, &placement) else { continue };
        valid += 1;
        if best.as_ref().is_none_or(|b| n > b.bound) {
            best = Some(PoincareBound { bound: n, placement, exponents: exps, placements_tried: 0, placements_valid: 0 });
        }
    }
    let mut b = best.ok_or(IntegrabilityError::NoAdmissiblePlacement)?;
    b.placements_tried = total;
    b.placements_valid = valid;
    Ok(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::parse_poly_in;
    use crate::reduction::tests::three_curve_field;
    use crate::vfield::AFFINE_VARS;

    fn ap(s: &str) -> MultiPoly {
        parse_poly_in(s, &AFFINE_VARS).unwrap()
    }

    #[test]
    fn single_point_degree_one() {
        let mut d = Configuration::new();
        d.push(crate::infnear::InfNearPoint {
            id: 0,
            parent: None,
            location: Location::Plane { chart: Chart::Y, coords: [Fe::zero(), Fe::zero()] },
            level: 0,
            proximate_to: vec![],
            orbit_size: 1,
            conjugate_of: None,
            copy: 0,
            label: "P0".into(),
        })
        .unwrap();
        let inf = BTreeSet::from([0]);
        let s = assemble_s(&d, &inf).unwrap();
        assert_eq!(s.matrix(), vec![vec![1, 1]]);
        assert_eq!(compute_r(&s).unwrap(), PairingVector::from_ints(1, &[1]));
        assert_eq!(poincare_degree(&d, &inf).unwrap(), (1, vec![1]));
        assert_eq!(poincare_bound(&d).unwrap().bound, 1);
    }

    #[test]
    fn darboux_exponents_of_saddle() {
        let v = AffineVectorField::parse("x", "-y").unwrap();
        assert_eq!(cofactors(&v, &[ap("x"), ap("y")]).unwrap(), vec![ap("1"), ap("-1")]);
        assert_eq!(exponents_darboux(&v, &[ap("x"), ap("y")]).unwrap(), vec![1, 1]);
        let err = exponents_darboux(&v, &[ap("x + 1")]).unwrap_err();
        assert!(matches!(err, Halt::NoIntegral(NoIntegral { reason: ReasonCode::CurveNotInvariant, .. })));
    }

    #[test]
    fn radial_field_has_none() {
        let v = AffineVectorField::parse("x", "y").unwrap();
        match algorithm1(&v, ReduceOptions::default()) {
            Err(Halt::NoIntegral(n)) => assert_eq!(n.reason, ReasonCode::LineNotInvariant),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn centre_recombines_conjugates() {
        let v = AffineVectorField::parse("-y", "x").unwrap();
        let cand = candidates(&v, ReduceOptions::default()).unwrap();
        assert_eq!(cand.s.matrix(), vec![vec![1, 1, 1, 0, 0], vec![1, 0, 0, 1, 1], vec![0, -1, 1, 0, 0], vec![0, 0, 0, -1, 1]]);
        let r = compute_r(&cand.s).unwrap();
        assert_eq!(r, PairingVector::from_ints(2, &[1, 1, 1, 1]));
        assert_eq!(exponents_pairing(&r, &cand.s).unwrap().0, vec![1, 1]);
        for cert in [finish_pairing(&v, &cand).unwrap(), finish_darboux(&v, &cand).unwrap()] {
            assert_eq!(cert.degree, 2);
            assert_eq!(cert.k, ap("x^2 + y^2"));
            assert_eq!(cert.exponents, vec![1, 1]);
            assert!(cert.factors[0].conjugates.is_some());
        }
    }

    #[test]
    fn three_curve_field_both_routes() {
        let v = three_curve_field();
        let cand = candidates(&v, ReduceOptions::default()).unwrap();
        let r = compute_r(&cand.s).unwrap();
        let mut want = vec![6, 4, 2, 2];
        want.extend([1; 20]);
        want.extend([2; 5]);
        assert_eq!(r, PairingVector::from_ints(10, &want));
        let a = finish_pairing(&v, &cand).unwrap();
        let b = finish_darboux(&v, &cand).unwrap();
        assert_eq!(a.exponents, vec![1, 1, 2]);
        assert_eq!(a.factor_multiset(), b.factor_multiset());
        assert_eq!(a.k, ap("(y - x^2 + x^3)*(y + x^3)*(x^2 + y)^2"));
    }
}

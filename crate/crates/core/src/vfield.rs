//! Planar polynomial vector fields, their projective 1-forms, chart
//! restrictions and invariant-curve tests.

use crate::blowup::LocalOneForm;
use crate::exactalg::{parse_poly_in, Fe, MultiPoly, ParseError};
use serde::Serialize;
use std::fmt;
use thiserror::Error;

pub const AFFINE_VARS: [&str; 2] = ["x", "y"];
pub const PROJECTIVE_VARS: [&str; 3] = ["X", "Y", "Z"];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VfieldError {
    #[error("the vector field is identically zero")]
    ZeroField,
    #[error("{0} is constant; a curve needs a nonconstant equation")]
    ConstantCurve(String),
    #[error("{curve} is not invariant: it does not divide p*f_x + q*f_y")]
    NotInvariant { curve: String },
    #[error("components are not homogeneous of one common degree")]
    NotHomogeneous,
    #[error("X*A + Y*B + Z*C does not vanish")]
    NotProjective,
    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// `ẋ = p(x, y)`, `ẏ = q(x, y)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineVectorField {
    pub p: MultiPoly,
    pub q: MultiPoly,
    degree: u32,
}

impl AffineVectorField {
    pub fn new(p: &MultiPoly, q: &MultiPoly) -> Result<Self, VfieldError> {
        let p = p.with_vars(&AFFINE_VARS);
        let q = q.with_vars(&AFFINE_VARS);
        if p.is_zero() && q.is_zero() {
            return Err(VfieldError::ZeroField);
        }
        let degree = p.total_degree().unwrap_or(0).max(q.total_degree().unwrap_or(0));
        Ok(AffineVectorField { p, q, degree })
    }

    pub fn parse(p: &str, q: &str) -> Result<Self, VfieldError> {
        Self::new(&parse_poly_in(p, &AFFINE_VARS)?, &parse_poly_in(q, &AFFINE_VARS)?)
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// `p*f_x + q*f_y`.
    pub fn derivation(&self, f: &MultiPoly) -> MultiPoly {
        let f = f.with_vars(&AFFINE_VARS);
        &(&self.p * &f.derivative(0)) + &(&self.q * &f.derivative(1))
    }
}

/// `A dX + B dY + C dZ` with `X*A + Y*B + Z*C = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProjectiveOneForm {
    #[serde(serialize_with = "crate::ser_display")]
    pub a: MultiPoly,
    #[serde(serialize_with = "crate::ser_display")]
    pub b: MultiPoly,
    #[serde(serialize_with = "crate::ser_display")]
    pub c: MultiPoly,
}

impl ProjectiveOneForm {
    pub fn new(a: &MultiPoly, b: &MultiPoly, c: &MultiPoly) -> Result<Self, VfieldError> {
        let a = a.with_vars(&PROJECTIVE_VARS);
        let b = b.with_vars(&PROJECTIVE_VARS);
        let c = c.with_vars(&PROJECTIVE_VARS);
        let degs: Vec<u32> = [&a, &b, &c].iter().filter_map(|p| p.total_degree()).collect();
        if degs.is_empty() {
            return Err(VfieldError::ZeroField);
        }
        if degs.iter().any(|d| *d != degs[0]) || ![&a, &b, &c].iter().all(|p| p.is_homogeneous()) {
            return Err(VfieldError::NotHomogeneous);
        }
        let form = ProjectiveOneForm { a, b, c };
        if !form.euler_residual().is_zero() {
            return Err(VfieldError::NotProjective);
        }
        Ok(form)
    }

    pub fn parse(a: &str, b: &str, c: &str) -> Result<Self, VfieldError> {
        Self::new(&parse_poly_in(a, &PROJECTIVE_VARS)?, &parse_poly_in(b, &PROJECTIVE_VARS)?, &parse_poly_in(c, &PROJECTIVE_VARS)?)
    }

    /// `X*A + Y*B + Z*C`.
    pub fn euler_residual(&self) -> MultiPoly {
        let x = self.a.var_like(0);
        let y = self.a.var_like(1);
        let z = self.a.var_like(2);
        &(&(&x * &self.a) + &(&y * &self.b)) + &(&z * &self.c)
    }

    /// Common degree of the components.
    pub fn degree(&self) -> u32 {
        [&self.a, &self.b, &self.c].iter().filter_map(|p| p.total_degree()).max().unwrap_or(0)
    }

    pub fn content(&self) -> MultiPoly {
        self.a.gcd(&self.b).gcd(&self.c)
    }

    /// The form divided by the gcd of its components.
    pub fn reduced(&self) -> ProjectiveOneForm {
        let g = self.content();
        if g.is_constant() {
            return self.clone();
        }
        ProjectiveOneForm { a: self.a.div_exact(&g).unwrap(), b: self.b.div_exact(&g).unwrap(), c: self.c.div_exact(&g).unwrap() }
    }

    /// True when the line `Z = 0` is invariant, i.e. `Z` divides `A` and `B`.
    pub fn infinity_line_invariant(&self) -> bool {
        self.a.terms().all(|(e, _)| e[2] > 0) && self.b.terms().all(|(e, _)| e[2] > 0)
    }

    /// Proportional up to a nonzero scalar.
    pub fn proportional(&self, o: &ProjectiveOneForm) -> bool {
        let pairs = [(&self.a, &o.a), (&self.b, &o.b), (&self.c, &o.c)];
        let Some((s, t)) = pairs.iter().find(|(s, _)| !s.is_zero()) else { return false };
        let Some((_, cs)) = s.leading() else { return false };
        let ct = t.coeff(s.leading().unwrap().0);
        if ct.is_zero() {
            return false;
        }
        let ratio = &ct / cs;
        pairs.iter().all(|(s, t)| s.scale(&ratio) == **t)
    }
}

impl fmt::Display for ProjectiveOneForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) dX + ({}) dY + ({}) dZ", self.a, self.b, self.c)
    }
}

/// The three standard affine charts of the projective plane.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Chart {
    X,
    Y,
    Z,
}

impl Chart {
    /// Local variable names, in form order.
    pub fn local_vars(self) -> [&'static str; 2] {
        match self {
            Chart::X => ["y", "z"],
            Chart::Y => ["x", "z"],
            Chart::Z => ["x", "y"],
        }
    }

    /// Index of the fixed projective coordinate.
    pub fn fixed(self) -> usize {
        self as usize
    }

    /// Projective indices of the two local variables.
    pub fn free(self) -> [usize; 2] {
        match self {
            Chart::X => [1, 2],
            Chart::Y => [0, 2],
            Chart::Z => [0, 1],
        }
    }

    /// Dehomogenizes `F(X, Y, Z)` into the chart variables.
    pub fn dehomogenize(self, f: &MultiPoly) -> MultiPoly {
        let vars = self.local_vars();
        let f = f.with_vars(&PROJECTIVE_VARS);
        let [i, j] = self.free();
        let mut images = vec![MultiPoly::constant(&vars, Fe::one()); 3];
        images[i] = MultiPoly::var(&vars, 0);
        images[j] = MultiPoly::var(&vars, 1);
        f.compose(&images)
    }
}

impl fmt::Display for Chart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Chart::X => "X",
            Chart::Y => "Y",
            Chart::Z => "Z",
        };
        write!(f, "{}!=0", s)
    }
}

/// `Z^deg f(X/Z, Y/Z)`.
pub fn homogenize(f: &MultiPoly, deg: u32) -> MultiPoly {
    let f = f.with_vars(&AFFINE_VARS);
    let mut out = MultiPoly::zero(&PROJECTIVE_VARS);
    for (e, c) in f.terms() {
        let t = e[0] + e[1];
        assert!(t <= deg, "homogenization degree below the polynomial degree");
        out.add_term([e[0], e[1], deg - t, 0, 0, 0], c.clone());
    }
    out
}

/// `F(x, y, 1)`.
pub fn dehomogenize(f: &MultiPoly) -> MultiPoly {
    Chart::Z.dehomogenize(f)
}

/// The 1-form `P(Y dZ - Z dY) + Q(Z dX - X dZ)` up to sign, written as
/// `A = -Z Q`, `B = Z P`, `C = X Q - Y P` and divided by the largest power
/// of `Z` common to the three components.
pub fn projectivize(v: &AffineVectorField) -> ProjectiveOneForm {
    let d = v.degree();
    let p = homogenize(&v.p, d);
    let q = homogenize(&v.q, d);
    let x = p.var_like(0);
    let y = p.var_like(1);
    let z = p.var_like(2);
    let a = -(&z * &q);
    let b = &z * &p;
    let c = &(&x * &q) - &(&y * &p);
    let k = [&a, &b, &c].iter().filter(|f| !f.is_zero()).map(|f| f.valuation_in(2)).min().unwrap_or(0);
    let mut m = [0; 6];
    m[2] = k;
    ProjectiveOneForm { a: a.div_monomial(&m), b: b.div_monomial(&m), c: c.div_monomial(&m) }
}

/// The local 1-form of `Ω` in one chart, written `a d(first) + b d(second)`
/// in the chart's variables and divided by `gcd(a, b)`.
pub fn restrict_to_chart(omega: &ProjectiveOneForm, chart: Chart) -> LocalOneForm {
    let comps = [&omega.a, &omega.b, &omega.c];
    let [i, j] = chart.free();
    let a = chart.dehomogenize(comps[i]);
    let b = chart.dehomogenize(comps[j]);
    LocalOneForm::new(a, b).reduced()
}

/// The cofactor `k = (p f_x + q f_y) / f`.
pub fn cofactor(v: &AffineVectorField, f: &MultiPoly) -> Result<MultiPoly, VfieldError> {
    let f = f.with_vars(&AFFINE_VARS);
    if f.is_constant() {
        return Err(VfieldError::ConstantCurve(f.to_string()));
    }
    v.derivation(&f).div_exact(&f).ok_or_else(|| VfieldError::NotInvariant { curve: f.to_string() })
}

/// Whether `H` is a first integral, with the residual `p H_x + q H_y`.
pub fn verify_first_integral(v: &AffineVectorField, h: &MultiPoly) -> (bool, MultiPoly) {
    let r = v.derivation(h);
    (r.is_zero() && !h.with_vars(&AFFINE_VARS).is_constant(), r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::parse_poly_in;

    fn pp(s: &str) -> MultiPoly {
        parse_poly_in(s, &PROJECTIVE_VARS).unwrap()
    }

    fn ap(s: &str) -> MultiPoly {
        parse_poly_in(s, &AFFINE_VARS).unwrap()
    }

    #[test]
    fn example_projectivization() {
        let v = AffineVectorField::parse(
            "2*x^6 - x^4 + 6*x^3*y - x^2*y + 4*y^2",
            "-(10*x^7 - 9*x^6 + 6*x^5*y + 9*x^4*y - 6*x^3*y + 6*x^2*y^2 + 2*x*y^2)",
        )
        .unwrap();
        let w = projectivize(&v);
        assert_eq!(w.a, pp("10*X^7*Z - 9*X^6*Z^2 + 6*X^5*Y*Z^2 + 9*X^4*Y*Z^3 - 6*X^3*Y*Z^4 + 6*X^2*Y^2*Z^4 + 2*X*Y^2*Z^5"));
        assert_eq!(w.b, pp("2*X^6*Z^2 - X^4*Z^4 + 6*X^3*Y*Z^4 - X^2*Y*Z^5 + 4*Y^2*Z^6"));
        assert_eq!(
            w.c,
            pp("-10*X^8 + 9*X^7*Z - 8*X^6*Y*Z - 9*X^5*Y*Z^2 + 7*X^4*Y*Z^3 - 12*X^3*Y^2*Z^3 - X^2*Y^2*Z^4 - 4*Y^3*Z^5")
        );
        assert!(w.euler_residual().is_zero());
        assert!(w.infinity_line_invariant());
    }

    #[test]
    fn constant_and_radial_fields() {
        let w = projectivize(&AffineVectorField::parse("1", "0").unwrap());
        let expected = ProjectiveOneForm::parse("0", "-Z", "Y").unwrap();
        assert!(w.proportional(&expected));
        let w = projectivize(&AffineVectorField::parse("x", "y").unwrap());
        assert_eq!((w.a.clone(), w.b.clone(), w.c.clone()), (pp("-Y"), pp("X"), pp("0")));
        assert!(!w.infinity_line_invariant());
    }

    #[test]
    fn chart_restrictions() {
        let w = ProjectiveOneForm::parse("2*X*Z^4", "5*Y^4*Z", "-(5*Y^5 + 2*X^2*Z^3)").unwrap();
        let l = restrict_to_chart(&w, Chart::X);
        assert_eq!(l.a, parse_poly_in("5*y^4*z", &["y", "z"]).unwrap());
        assert_eq!(l.b, parse_poly_in("-5*y^5 - 2*z^3", &["y", "z"]).unwrap());
        let l = restrict_to_chart(&w, Chart::Z);
        assert_eq!((l.a.to_string(), l.b.to_string()), ("2*x".to_string(), "5*y^4".to_string()));
        let w = ProjectiveOneForm::parse("0", "-Z", "Y").unwrap();
        let l = restrict_to_chart(&w, Chart::Z);
        assert!(l.a.is_zero() && l.b.is_constant() && !l.b.is_zero());
    }

    #[test]
    fn cofactors() {
        let v = AffineVectorField::parse(
            "2*x^6 - x^4 + 6*x^3*y - x^2*y + 4*y^2",
            "-(10*x^7 - 9*x^6 + 6*x^5*y + 9*x^4*y - 6*x^3*y + 6*x^2*y^2 + 2*x*y^2)",
        )
        .unwrap();
        assert_eq!(cofactor(&v, &ap("x^2 + y")).unwrap(), ap("x*(-2*x^2 + 9*x^3 - 6*x^4 + 6*y - 6*x*y)"));
        assert_eq!(cofactor(&v, &ap("y - x^2 + x^3")).unwrap(), ap("2*x*(-x^2 - 4*x^3 + 3*x^4 - 5*y + 3*x*y)"));
        let h = ap("(y - x^2 + x^3)*(y + x^3)*(x^2 + y)^2");
        let (ok, r) = verify_first_integral(&v, &h);
        assert!(ok && r.is_zero());
        let radial = AffineVectorField::parse("x", "y").unwrap();
        assert!(matches!(cofactor(&radial, &ap("x + 1")), Err(VfieldError::NotInvariant { .. })));
        let (ok, r) = verify_first_integral(&radial, &ap("x + y"));
        assert!(!ok);
        assert_eq!(r, ap("x + y"));
        let centre = AffineVectorField::parse("-y", "x").unwrap();
        assert!(verify_first_integral(&centre, &ap("x^2 + y^2")).0);
    }
}

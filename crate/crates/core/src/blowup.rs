//! Local blow-ups of 1-forms and curves at the origin of a chart.
//!
//! A blow-up centred at the origin of local coordinates `(u, v)` is seen in
//! one of two charts. In `V1` the new coordinates are `(u1, t)` with
//! `u = u1`, `v = u1 (t + λ)` and the exceptional divisor is `u1 = 0`; in
//! `V2` they are `(s, v1)` with `u = v1 (s + λ)`, `v = v1` and the divisor
//! is `v1 = 0`. The constant `λ` re-centres the new chart at the point of
//! the divisor with that coordinate.

use crate::exactalg::{Fe, MultiPoly, MAXV};
use serde::Serialize;
use std::fmt;
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Branch {
    V1,
    V2,
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Branch::V1 => write!(f, "V1"),
            Branch::V2 => write!(f, "V2"),
        }
    }
}

impl Branch {
    /// Index of the local variable defining the new exceptional divisor.
    pub fn divisor_var(self) -> usize {
        match self {
            Branch::V1 => 0,
            Branch::V2 => 1,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BlowupError {
    #[error("strict transform divided by u^{e}, expected a power in {{{m}, {}}}", m + 1)]
    DivisibilityViolation { e: u32, m: u32 },
    #[error("the 1-form is zero")]
    ZeroForm,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PointClass {
    Nonsingular,
    Simple,
    #[serde(rename = "ordinary-nondicritical")]
    Ordinary,
    Dicritical,
}

impl PointClass {
    /// Ordinary in the broad sense (dicritical points included).
    pub fn is_ordinary(self) -> bool {
        matches!(self, PointClass::Ordinary | PointClass::Dicritical)
    }
}

impl fmt::Display for PointClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            PointClass::Nonsingular => "nonsingular",
            PointClass::Simple => "simple",
            PointClass::Ordinary => "ordinary-nondicritical",
            PointClass::Dicritical => "dicritical",
        };
        write!(f, "{}", s)
    }
}

/// `a d(u) + b d(v)` in two local variables `(u, v)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalOneForm {
    pub a: MultiPoly,
    pub b: MultiPoly,
}

impl LocalOneForm {
    pub fn new(a: MultiPoly, b: MultiPoly) -> LocalOneForm {
        assert!(a.same_vars(&b) && a.nvars() == 2, "a local 1-form needs two common variables");
        LocalOneForm { a, b }
    }

    pub fn vars(&self) -> Vec<&str> {
        self.a.var_names()
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// Divided by the gcd of the components.
    pub fn reduced(&self) -> LocalOneForm {
        let g = self.a.gcd(&self.b);
        if g.is_zero() || g.is_constant() {
            return self.clone();
        }
        LocalOneForm { a: self.a.div_exact(&g).unwrap(), b: self.b.div_exact(&g).unwrap() }
    }

    /// Same form up to a nonzero constant factor.
    pub fn proportional(&self, o: &LocalOneForm) -> bool {
        let (s, t) = if self.a.is_zero() { (&self.b, &o.b) } else { (&self.a, &o.a) };
        let Some((e, c)) = s.leading() else { return o.is_zero() };
        let ct = t.coeff(e);
        if ct.is_zero() {
            return false;
        }
        let r = &ct / c;
        self.a.scale(&r) == o.a && self.b.scale(&r) == o.b
    }

    /// The same form in coordinates centred at `(u0, v0)`.
    pub fn translate(&self, u0: &Fe, v0: &Fe) -> LocalOneForm {
        let images = shift_images(&self.a, u0, v0);
        LocalOneForm { a: self.a.compose(&images), b: self.b.compose(&images) }
    }

    pub fn with_vars(&self, vars: &[&str]) -> LocalOneForm {
        LocalOneForm { a: self.a.with_vars(vars), b: self.b.with_vars(vars) }
    }

    /// The vector field `(p, q) = (b, -a)` of `p dv - q du`.
    pub fn vector_field(&self) -> (MultiPoly, MultiPoly) {
        (self.b.clone(), -&self.a)
    }
}

impl fmt::Display for LocalOneForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = self.vars();
        write!(f, "({}) d{} + ({}) d{}", self.a, v[0], self.b, v[1])
    }
}

fn shift_images(p: &MultiPoly, u0: &Fe, v0: &Fe) -> Vec<MultiPoly> {
    vec![&p.var_like(0) + &p.constant_like(u0.clone()), &p.var_like(1) + &p.constant_like(v0.clone())]
}

/// Order at the origin of a nonzero form.
pub fn multiplicity(w: &LocalOneForm) -> u32 {
    match (w.a.order(), w.b.order()) {
        (Some(x), Some(y)) => x.min(y),
        (Some(x), None) | (None, Some(x)) => x,
        (None, None) => panic!("multiplicity of the zero form"),
    }
}

/// `α = u a_m + v b_m`, with `a_m`, `b_m` the degree-`m` jets.
pub fn char_poly(w: &LocalOneForm) -> MultiPoly {
    let m = multiplicity(w);
    let u = w.a.var_like(0);
    let v = w.a.var_like(1);
    &(&u * &w.a.homogeneous_part(m)) + &(&v * &w.b.homogeneous_part(m))
}

/// Trace and determinant of the linear part of `(p, q) = (b, -a)`.
pub fn linear_part(w: &LocalOneForm) -> (Fe, Fe) {
    let c = |p: &MultiPoly, i: usize| {
        let mut e = [0; MAXV];
        e[i] = 1;
        p.coeff(&e)
    };
    let (j11, j12) = (c(&w.b, 0), c(&w.b, 1));
    let (j21, j22) = (-&c(&w.a, 0), -&c(&w.a, 1));
    (&j11 + &j22, &(&j11 * &j22) - &(&j12 * &j21))
}

fn is_rational_square(r: &crate::exactalg::Rational) -> bool {
    use num_traits::Signed;
    if r.is_negative() {
        return false;
    }
    let sq = |n: &num_bigint::BigInt| {
        let s = n.sqrt();
        &s * &s == *n
    };
    sq(r.numer()) && sq(r.denom())
}

/// Exact singularity type of the form at the origin.
pub fn classify(w: &LocalOneForm) -> PointClass {
    if w.is_zero() {
        return PointClass::Dicritical;
    }
    let m = multiplicity(w);
    if m == 0 {
        return PointClass::Nonsingular;
    }
    if char_poly(w).is_zero() {
        return PointClass::Dicritical;
    }
    if m >= 2 {
        return PointClass::Ordinary;
    }
    let (t, d) = linear_part(w);
    if d.is_zero() {
        return if t.is_zero() { PointClass::Ordinary } else { PointClass::Simple };
    }
    let s = &(&(&t * &t) / &d) - &Fe::int(2);
    let positive_rational_ratio = match s.as_rational() {
        Some(s) => *s >= crate::exactalg::field::rat_int(2) && is_rational_square(&(s * s - crate::exactalg::field::rat_int(4))),
        None => false,
    };
    if positive_rational_ratio {
        PointClass::Ordinary
    } else {
        PointClass::Simple
    }
}

/// Variable names one blow-up further: `y` → `y1`, `y1` → `y2`.
pub fn next_var_name(name: &str) -> String {
    let base = name.trim_end_matches(|c: char| c.is_ascii_digit());
    let k: u32 = name[base.len()..].parse().unwrap_or(0);
    format!("{}{}", base, k + 1)
}

pub fn next_vars(vars: &[&str]) -> [String; 2] {
    [next_var_name(vars[0]), next_var_name(vars[1])]
}

/// Images of `u` and `v` under the blow-up map, over the new variables.
fn blowup_images(p: &MultiPoly, center: &Fe, branch: Branch) -> (Vec<MultiPoly>, [String; 2]) {
    let nv = next_vars(&p.var_names());
    let names = [nv[0].as_str(), nv[1].as_str()];
    let x0 = MultiPoly::var(&names, 0);
    let x1 = MultiPoly::var(&names, 1);
    let lam = MultiPoly::constant(&names, center.clone());
    let images = match branch {
        Branch::V1 => vec![x0.clone(), &x0 * &(&x1 + &lam)],
        Branch::V2 => vec![&x1 * &(&x0 + &lam), x1.clone()],
    };
    (images, nv)
}

/// Total transform `f ∘ π` of a function.
pub fn pullback(f: &MultiPoly, center: &Fe, branch: Branch) -> MultiPoly {
    let (images, _) = blowup_images(f, center, branch);
    f.compose(&images)
}

/// Largest `e` with `x_i^e | f`.
fn divisor_power(f: &MultiPoly, i: usize) -> u32 {
    if f.is_zero() {
        u32::MAX
    } else {
        f.valuation_in(i)
    }
}

fn divide_var(f: &MultiPoly, i: usize, e: u32) -> MultiPoly {
    let mut m = [0; MAXV];
    m[i] = e;
    f.div_monomial(&m)
}

/// `x^{-m} (f ∘ π)`, or `None` when the pull-back is not divisible.
pub fn virtual_transform(f: &MultiPoly, center: &Fe, branch: Branch, m: u32) -> Option<MultiPoly> {
    let g = pullback(f, center, branch);
    let i = branch.divisor_var();
    (divisor_power(&g, i) >= m).then(|| divide_var(&g, i, m))
}

/// Strict transform of a curve: the pull-back divided by the largest
/// possible power of the exceptional divisor.
pub fn strict_transform(f: &MultiPoly, center: &Fe, branch: Branch) -> MultiPoly {
    let g = pullback(f, center, branch);
    let i = branch.divisor_var();
    if g.is_zero() {
        return g;
    }
    divide_var(&g, i, g.valuation_in(i))
}

/// Result of blowing up a form.
#[derive(Clone, Debug)]
pub struct BlownUpForm {
    pub form: LocalOneForm,
    pub total: LocalOneForm,
    /// Power of the exceptional divisor divided out.
    pub e: u32,
}

/// Pull-back of a 1-form in a blow-up chart (the total transform).
pub fn total_transform(w: &LocalOneForm, center: &Fe, branch: Branch) -> LocalOneForm {
    let (images, _) = blowup_images(&w.a, center, branch);
    let a = w.a.compose(&images);
    let b = w.b.compose(&images);
    let x0 = images[0].var_like(0);
    let x1 = images[0].var_like(1);
    let lam = images[0].constant_like(center.clone());
    match branch {
        // du = du1, dv = (t + λ) du1 + u1 dt
        Branch::V1 => LocalOneForm { a: &a + &(&(&x1 + &lam) * &b), b: &x0 * &b },
        // du = v1 ds + (s + λ) dv1, dv = dv1
        Branch::V2 => LocalOneForm { a: &x1 * &a, b: &(&(&x0 + &lam) * &a) + &b },
    }
}

/// Strict transform of a form singular at the origin: the total transform
/// divided by the largest power of the divisor, which must be `m` or
/// `m + 1` (the latter exactly when the origin is dicritical).
pub fn blow_up_form(w: &LocalOneForm, center: &Fe, branch: Branch) -> Result<BlownUpForm, BlowupError> {
    if w.is_zero() {
        return Err(BlowupError::ZeroForm);
    }
    let m = multiplicity(w);
    let total = total_transform(w, center, branch);
    let i = branch.divisor_var();
    let e = divisor_power(&total.a, i).min(divisor_power(&total.b, i));
    let expected = if char_poly(w).is_zero() { m + 1 } else { m };
    if e != expected {
        return Err(BlowupError::DivisibilityViolation { e, m });
    }
    let form = LocalOneForm { a: divide_var(&total.a, i, e), b: divide_var(&total.b, i, e) };
    Ok(BlownUpForm { form, total, e })
}

/// Whether the new exceptional divisor is invariant by the strict
/// transform: the component along the divisor direction vanishes on it.
pub fn divisor_invariant(w: &LocalOneForm, branch: Branch) -> bool {
    let i = branch.divisor_var();
    let tangent = match branch {
        Branch::V1 => &w.b,
        Branch::V2 => &w.a,
    };
    tangent.is_zero() || tangent.valuation_in(i) >= 1
}

/// A curve followed through successive blow-ups by strict transforms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrackedCurve {
    pub id: String,
    pub equation: MultiPoly,
}

impl TrackedCurve {
    pub fn new(id: &str, equation: MultiPoly) -> TrackedCurve {
        TrackedCurve { id: id.to_string(), equation }
    }

    /// The exceptional divisor just created, in the new chart.
    pub fn divisor(id: &str, vars: &[&str], branch: Branch) -> TrackedCurve {
        TrackedCurve::new(id, MultiPoly::var(vars, branch.divisor_var()))
    }

    pub fn passes_through_origin(&self) -> bool {
        self.equation.constant_term().is_zero()
    }

    pub fn multiplicity_at_origin(&self) -> u32 {
        self.equation.order().unwrap_or(0)
    }

    pub fn blow_up(&self, center: &Fe, branch: Branch) -> TrackedCurve {
        TrackedCurve { id: self.id.clone(), equation: strict_transform(&self.equation, center, branch) }
    }

    pub fn translate(&self, u0: &Fe, v0: &Fe) -> TrackedCurve {
        let images = shift_images(&self.equation, u0, v0);
        TrackedCurve { id: self.id.clone(), equation: self.equation.compose(&images) }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::parse_poly_in;

    fn form(a: &str, b: &str, vars: &[&str]) -> LocalOneForm {
        LocalOneForm::new(parse_poly_in(a, vars).unwrap(), parse_poly_in(b, vars).unwrap())
    }

    #[test]
    fn multiplicities_and_char_polys() {
        let w1 = form("5*y^4*z", "-(5*y^5 + 2*z^3)", &["y", "z"]);
        assert_eq!(multiplicity(&w1), 3);
        assert_eq!(multiplicity(&form("1", "0", &["x", "y"])), 0);
        let w2 = form("2*x", "5*y^4", &["x", "y"]);
        assert_eq!(multiplicity(&w2), 1);
        assert_eq!(char_poly(&w2), parse_poly_in("2*x^2", &["x", "y"]).unwrap());
        let w = form("-z - 4*y^10*z", "y - 42*y^9*z^2", &["y", "z"]);
        assert!(char_poly(&w).is_zero());
    }

    #[test]
    fn strict_transforms() {
        let w1 = form("5*y^4*z", "-(5*y^5 + 2*z^3)", &["y", "z"]);
        let t = blow_up_form(&w1, &Fe::zero(), Branch::V1).unwrap();
        assert!(t.form.proportional(&form("-2*z1^4", "-(5*y1^3 + 2*y1*z1^3)", &["y1", "z1"])));
        let w2 = form("2*x", "5*y^4", &["x", "y"]);
        let t = blow_up_form(&w2, &Fe::zero(), Branch::V2).unwrap();
        assert!(t.form.proportional(&form("2*x1*y1", "2*x1^2 + 5*y1^3", &["x1", "y1"])));
        let radial = form("-y", "x", &["x", "y"]);
        let t = blow_up_form(&radial, &Fe::zero(), Branch::V1).unwrap();
        assert_eq!(t.e, 2);
        assert!(t.form.a.is_zero() && t.form.b.is_constant());
        assert!(!divisor_invariant(&t.form, Branch::V1));
    }

    #[test]
    fn classification() {
        let w = form("6*x3*y3 + 5*y3^2", "4*x3^2 + 5*x3*y3", &["x3", "y3"]);
        assert_eq!(classify(&w), PointClass::Ordinary);
        let p4 = form("10*z - 10*z^2", "-y - 4*y*z", &["y", "z"]);
        assert_eq!(classify(&p4), PointClass::Ordinary);
        let w = form("-2*y", "x", &["x", "y"]);
        assert_eq!(classify(&w), PointClass::Ordinary);
        let centre = form("-x", "-y", &["x", "y"]);
        assert_eq!(classify(&centre), PointClass::Simple);
        let saddle_node = form("-y^2", "x", &["x", "y"]);
        assert_eq!(classify(&saddle_node), PointClass::Simple);
        assert_eq!(classify(&form("-y", "x", &["x", "y"])), PointClass::Dicritical);
        assert_eq!(classify(&form("1", "x", &["x", "y"])), PointClass::Nonsingular);
    }

    #[test]
    fn curve_tracking() {
        let f = parse_poly_in("z^3 + y^5", &["y", "z"]).unwrap();
        assert_eq!(strict_transform(&f, &Fe::zero(), Branch::V1), parse_poly_in("z1^3 + y1^2", &["y1", "z1"]).unwrap());
        assert!(virtual_transform(&f, &Fe::zero(), Branch::V1, 4).is_none());
        let e = TrackedCurve::divisor("E", &["y1", "z1"], Branch::V1);
        let e2 = e.blow_up(&Fe::zero(), Branch::V2);
        assert_eq!(e2.equation, parse_poly_in("y2", &["y2", "z2"]).unwrap());
        assert!(e2.passes_through_origin());
        assert!(!e.blow_up(&Fe::zero(), Branch::V1).passes_through_origin());
    }
}

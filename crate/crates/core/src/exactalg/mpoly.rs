//! Sparse multivariate polynomials over [`Fe`].

use super::field::{Fe, Rational};
use super::upoly::UPoly;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

/// Maximum number of variables of one polynomial.
pub const MAXV: usize = 6;
pub type Exps = [u32; MAXV];

pub fn total(e: &Exps) -> u32 {
    e.iter().sum()
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MultiPoly {
    vars: Arc<Vec<String>>,
    terms: BTreeMap<Exps, Fe>,
}

impl MultiPoly {
    pub fn zero(vars: &[&str]) -> MultiPoly {
        assert!(vars.len() <= MAXV, "too many variables");
        MultiPoly { vars: Arc::new(vars.iter().map(|s| s.to_string()).collect()), terms: BTreeMap::new() }
    }

    /// Zero polynomial over the same variables as `self`.
    pub fn zero_like(&self) -> MultiPoly {
        MultiPoly { vars: self.vars.clone(), terms: BTreeMap::new() }
    }

    pub fn constant_like(&self, c: Fe) -> MultiPoly {
        let mut p = self.zero_like();
        p.add_term([0; MAXV], c);
        p
    }

    pub fn one_like(&self) -> MultiPoly {
        self.constant_like(Fe::one())
    }

    pub fn constant(vars: &[&str], c: Fe) -> MultiPoly {
        MultiPoly::zero(vars).constant_like(c)
    }

    pub fn var(vars: &[&str], i: usize) -> MultiPoly {
        let mut e = [0; MAXV];
        e[i] = 1;
        MultiPoly::monomial(vars, e, Fe::one())
    }

    /// The variable with index `i` of `self`'s variable list.
    pub fn var_like(&self, i: usize) -> MultiPoly {
        let mut e = [0; MAXV];
        e[i] = 1;
        let mut p = self.zero_like();
        p.add_term(e, Fe::one());
        p
    }

    pub fn monomial(vars: &[&str], e: Exps, c: Fe) -> MultiPoly {
        let mut p = MultiPoly::zero(vars);
        p.add_term(e, c);
        p
    }

    pub fn monomial_like(&self, e: Exps, c: Fe) -> MultiPoly {
        let mut p = self.zero_like();
        p.add_term(e, c);
        p
    }

    /// Builds from `(exponents, coefficient)` pairs over `vars`; exponent
    /// slices shorter than [`MAXV`] are padded with zeros.
    pub fn from_terms(vars: &[&str], terms: &[(&[u32], Fe)]) -> MultiPoly {
        let mut p = MultiPoly::zero(vars);
        for (e, c) in terms {
            let mut x = [0; MAXV];
            x[..e.len()].copy_from_slice(e);
            p.add_term(x, c.clone());
        }
        p
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn var_names(&self) -> Vec<&str> {
        self.vars.iter().map(|s| s.as_str()).collect()
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn same_vars(&self, o: &MultiPoly) -> bool {
        Arc::ptr_eq(&self.vars, &o.vars) || self.vars == o.vars
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Exps, &Fe)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn add_term(&mut self, e: Exps, c: Fe) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn coeff(&self, e: &Exps) -> Fe {
        self.terms.get(e).cloned().unwrap_or_else(Fe::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| total(e) == 0)
    }

    pub fn constant_term(&self) -> Fe {
        self.coeff(&[0; MAXV])
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(total).max()
    }

    /// Lowest total degree of a term (order at the origin).
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(total).min()
    }

    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|e| e[i]).max().unwrap_or(0)
    }

    /// Lowest exponent of variable `i` over all terms.
    pub fn valuation_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|e| e[i]).min().unwrap_or(0)
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut it = self.terms.keys().map(total);
        match it.next() {
            None => true,
            Some(d) => it.all(|x| x == d),
        }
    }

    pub fn homogeneous_part(&self, k: u32) -> MultiPoly {
        let mut p = self.zero_like();
        for (e, c) in &self.terms {
            if total(e) == k {
                p.terms.insert(*e, c.clone());
            }
        }
        p
    }

    /// Terms of total degree below `k`.
    pub fn truncate_below(&self, k: u32) -> MultiPoly {
        let mut p = self.zero_like();
        for (e, c) in &self.terms {
            if total(e) < k {
                p.terms.insert(*e, c.clone());
            }
        }
        p
    }

    pub fn is_rational(&self) -> bool {
        self.terms.values().all(|c| c.is_rational())
    }

    pub fn scale(&self, c: &Fe) -> MultiPoly {
        if c.is_zero() {
            return self.zero_like();
        }
        let mut p = self.zero_like();
        for (e, x) in &self.terms {
            p.terms.insert(*e, x * c);
        }
        p
    }

    pub fn mul_monomial(&self, m: &Exps) -> MultiPoly {
        let mut p = self.zero_like();
        for (e, c) in &self.terms {
            let mut f = *e;
            for i in 0..MAXV {
                f[i] += m[i];
            }
            p.terms.insert(f, c.clone());
        }
        p
    }

    /// Divides every term by `m`; panics if some term is not divisible.
    pub fn div_monomial(&self, m: &Exps) -> MultiPoly {
        let mut p = self.zero_like();
        for (e, c) in &self.terms {
            let mut f = *e;
            for i in 0..MAXV {
                f[i] = f[i].checked_sub(m[i]).expect("monomial does not divide polynomial");
            }
            p.terms.insert(f, c.clone());
        }
        p
    }

    pub fn pow(&self, n: u32) -> MultiPoly {
        let mut acc = self.one_like();
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn derivative(&self, i: usize) -> MultiPoly {
        let mut p = self.zero_like();
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut f = *e;
                f[i] -= 1;
                p.add_term(f, c * &Fe::int(e[i] as i64));
            }
        }
        p
    }

    /// Substitutes the constant `v` for variable `i` (the variable stays in
    /// the list but no longer occurs).
    pub fn eval_var(&self, i: usize, v: &Fe) -> MultiPoly {
        let mut p = self.zero_like();
        let mut powers: Vec<Fe> = vec![Fe::one()];
        for (e, c) in &self.terms {
            while powers.len() <= e[i] as usize {
                let next = powers.last().unwrap() * v;
                powers.push(next);
            }
            let mut f = *e;
            f[i] = 0;
            p.add_term(f, c * &powers[e[i] as usize]);
        }
        p
    }

    pub fn eval(&self, vals: &[Fe]) -> Fe {
        let mut acc = Fe::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (i, v) in vals.iter().enumerate() {
                if e[i] > 0 {
                    t = &t * &v.pow(e[i]);
                }
            }
            acc = &acc + &t;
        }
        acc
    }

    /// Substitutes polynomials (over a common variable list) for every
    /// variable of `self`.
    pub fn compose(&self, images: &[MultiPoly]) -> MultiPoly {
        assert_eq!(images.len(), self.nvars());
        let mut out = images[0].zero_like();
        let mut cache: Vec<Vec<MultiPoly>> = images.iter().map(|p| vec![p.one_like()]).collect();
        for (e, c) in &self.terms {
            let mut t = out.constant_like(c.clone());
            for i in 0..self.nvars() {
                let k = e[i] as usize;
                while cache[i].len() <= k {
                    let next = cache[i].last().unwrap() * &images[i];
                    cache[i].push(next);
                }
                if k > 0 {
                    t = &t * &cache[i][k];
                }
            }
            out = &out + &t;
        }
        out
    }

    /// Re-expresses the polynomial over another variable list, matching
    /// variables by name. Panics if a used variable is missing.
    pub fn with_vars(&self, vars: &[&str]) -> MultiPoly {
        let mut p = MultiPoly::zero(vars);
        let map: Vec<Option<usize>> = self.vars.iter().map(|v| vars.iter().position(|w| w == v)).collect();
        for (e, c) in &self.terms {
            let mut f = [0; MAXV];
            for (i, m) in map.iter().enumerate() {
                if e[i] > 0 {
                    f[m.unwrap_or_else(|| panic!("variable {} missing", self.vars[i]))] += e[i];
                }
            }
            p.add_term(f, c.clone());
        }
        p
    }

    /// Lex-largest term (variable 0 most significant).
    pub fn leading(&self) -> Option<(&Exps, &Fe)> {
        self.terms.iter().next_back()
    }

    /// Divides by the coefficient of the lex-largest term.
    pub fn monic(&self) -> MultiPoly {
        match self.leading() {
            None => self.clone(),
            Some((_, c)) => {
                let inv = c.inv();
                self.scale(&inv)
            }
        }
    }

    /// Canonical representative up to scalars: for rational polynomials the
    /// primitive integral multiple with positive leading coefficient, the
    /// monic multiple otherwise.
    pub fn normalized(&self) -> MultiPoly {
        if self.is_zero() {
            return self.clone();
        }
        if !self.is_rational() {
            return self.monic();
        }
        let den = self.terms.values().fold(BigInt::one(), |a, c| a.lcm(c.as_rational().unwrap().denom()));
        let num = self
            .terms
            .values()
            .fold(BigInt::zero(), |a, c| a.gcd(&(c.as_rational().unwrap() * Rational::from_integer(den.clone())).to_integer()));
        let mut s = Rational::new(den, num);
        if self.leading().unwrap().1.as_rational().unwrap().is_negative() {
            s = -s;
        }
        self.scale(&Fe::Rat(s))
    }

    pub fn is_normalized(&self) -> bool {
        *self == self.normalized()
    }

    /// Exact quotient; `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &MultiPoly) -> Option<MultiPoly> {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let (le, lc) = d.leading().map(|(e, c)| (*e, c.clone())).unwrap();
        let inv = lc.inv();
        let mut r = self.clone();
        let mut q = self.zero_like();
        while let Some((e, c)) = r.leading().map(|(e, c)| (*e, c.clone())) {
            let mut m = [0; MAXV];
            for i in 0..MAXV {
                if e[i] < le[i] {
                    return None;
                }
                m[i] = e[i] - le[i];
            }
            let f = &c * &inv;
            let t = d.mul_monomial(&m).scale(&f);
            r = &r - &t;
            q.add_term(m, f);
        }
        Some(q)
    }

    /// Coefficients with respect to variable `v`: exponent ↦ coefficient
    /// (a polynomial in which `v` does not occur).
    pub fn coeffs_in(&self, v: usize) -> BTreeMap<u32, MultiPoly> {
        let mut out: BTreeMap<u32, MultiPoly> = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut f = *e;
            f[v] = 0;
            out.entry(e[v]).or_insert_with(|| self.zero_like()).terms.insert(f, c.clone());
        }
        out
    }

    fn content_in(&self, v: usize) -> MultiPoly {
        let mut g = self.zero_like();
        for c in self.coeffs_in(v).values() {
            g = g.gcd(c);
            if g.is_constant() && !g.is_zero() {
                return g.one_like();
            }
        }
        g
    }

    fn prem(a: &MultiPoly, b: &MultiPoly, v: usize) -> MultiPoly {
        let db = b.degree_in(v);
        let lcb = b.coeffs_in(v).remove(&db).unwrap();
        let mut r = a.clone();
        loop {
            if r.is_zero() {
                return r;
            }
            let dr = r.degree_in(v);
            if dr < db {
                return r;
            }
            let lcr = r.coeffs_in(v).remove(&dr).unwrap();
            let mut m = [0; MAXV];
            m[v] = dr - db;
            r = &(&r * &lcb) - &(&lcr * &b.mul_monomial(&m));
        }
    }

    /// Greatest common divisor, normalized with [`MultiPoly::normalized`]
    /// (the zero polynomial only when both inputs vanish).
    pub fn gcd(&self, o: &MultiPoly) -> MultiPoly {
        assert!(self.same_vars(o), "gcd of polynomials over different variables");
        if self.is_zero() {
            return o.normalized();
        }
        if o.is_zero() {
            return self.normalized();
        }
        if self.is_constant() || o.is_constant() {
            return self.one_like();
        }
        let v = (0..self.nvars()).find(|&i| self.degree_in(i) > 0 || o.degree_in(i) > 0).unwrap();
        if self.degree_in(v) == 0 {
            return self.gcd(&o.content_in(v));
        }
        if o.degree_in(v) == 0 {
            return self.content_in(v).gcd(o);
        }
        let ca = self.content_in(v);
        let cb = o.content_in(v);
        let c = ca.gcd(&cb);
        let mut pa = self.div_exact(&ca).unwrap().normalized();
        let mut pb = o.div_exact(&cb).unwrap().normalized();
        if pa.degree_in(v) < pb.degree_in(v) {
            std::mem::swap(&mut pa, &mut pb);
        }
        while !pb.is_zero() {
            let r = MultiPoly::prem(&pa, &pb, v);
            pa = pb;
            pb = if r.is_zero() { r } else { r.div_exact(&r.content_in(v)).unwrap().normalized() };
        }
        let g = if pa.degree_in(v) == 0 { pa.one_like() } else { pa.div_exact(&pa.content_in(v)).unwrap() };
        (&c * &g).normalized()
    }

    /// The polynomial as univariate in variable `i`; panics if another
    /// variable occurs.
    pub fn to_upoly(&self, i: usize) -> UPoly {
        let mut v = vec![Fe::zero(); self.degree_in(i) as usize + 1];
        for (e, c) in &self.terms {
            assert!((0..MAXV).all(|j| j == i || e[j] == 0), "not univariate");
            v[e[i] as usize] = c.clone();
        }
        UPoly::new(v)
    }

    pub fn from_upoly(vars: &[&str], i: usize, u: &UPoly) -> MultiPoly {
        let mut p = MultiPoly::zero(vars);
        for (k, c) in u.0.iter().enumerate() {
            let mut e = [0; MAXV];
            e[i] = k as u32;
            p.add_term(e, c.clone());
        }
        p
    }

    /// Terms sorted for printing: descending total degree, then descending
    /// lexicographic order.
    pub fn sorted_terms(&self) -> Vec<(&Exps, &Fe)> {
        let mut v: Vec<(&Exps, &Fe)> = self.terms.iter().collect();
        v.sort_by(|a, b| total(b.0).cmp(&total(a.0)).then_with(|| b.0.cmp(a.0)));
        v
    }

    fn fmt_monomial(&self, e: &Exps) -> String {
        let mut parts = Vec::new();
        for (i, v) in self.vars.iter().enumerate() {
            match e[i] {
                0 => {}
                1 => parts.push(v.clone()),
                k => parts.push(format!("{}^{}", v, k)),
            }
        }
        parts.join("*")
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut s = String::new();
        for (e, c) in self.sorted_terms() {
            let neg = c.is_rational() && c.leading_sign() == Ordering::Less;
            let mag = if neg { -c } else { c.clone() };
            if s.is_empty() {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let m = self.fmt_monomial(e);
            if m.is_empty() {
                s.push_str(&mag.paren_string());
            } else if mag.is_one() {
                s.push_str(&m);
            } else {
                s.push_str(&mag.paren_string());
                s.push('*');
                s.push_str(&m);
            }
        }
        write!(f, "{}", s)
    }
}

impl<'a> Add<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn add(self, o: &MultiPoly) -> MultiPoly {
        assert!(self.same_vars(o), "adding polynomials over different variables");
        let (big, small) = if self.terms.len() >= o.terms.len() { (self, o) } else { (o, self) };
        let mut p = big.clone();
        for (e, c) in &small.terms {
            p.add_term(*e, c.clone());
        }
        p
    }
}

impl<'a> Sub<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn sub(self, o: &MultiPoly) -> MultiPoly {
        assert!(self.same_vars(o), "subtracting polynomials over different variables");
        let mut p = self.clone();
        for (e, c) in &o.terms {
            p.add_term(*e, -c);
        }
        p
    }
}

impl<'a> Mul<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn mul(self, o: &MultiPoly) -> MultiPoly {
        assert!(self.same_vars(o), "multiplying polynomials over different variables");
        let mut p = self.zero_like();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let mut e = *e1;
                for i in 0..MAXV {
                    e[i] += e2[i];
                }
                p.add_term(e, c1 * c2);
            }
        }
        p
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        let mut p = self.zero_like();
        for (e, c) in &self.terms {
            p.terms.insert(*e, -c);
        }
        p
    }
}

macro_rules! owned_poly_ops {
    ($tr:ident, $m:ident) => {
        impl $tr<MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $m(self, o: MultiPoly) -> MultiPoly {
                (&self).$m(&o)
            }
        }
        impl<'a> $tr<&'a MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $m(self, o: &MultiPoly) -> MultiPoly {
                (&self).$m(o)
            }
        }
    };
}
owned_poly_ops!(Add, add);
owned_poly_ops!(Sub, sub);
owned_poly_ops!(Mul, mul);

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xy() -> (MultiPoly, MultiPoly) {
        (MultiPoly::var(&["x", "y"], 0), MultiPoly::var(&["x", "y"], 1))
    }

    #[test]
    fn prints_graded_lex() {
        let (x, y) = xy();
        let c = |n: i64| x.constant_like(Fe::int(n));
        let p = &(&(&(&(&c(2) * &x.pow(6)) - &x.pow(4)) + &(&c(6) * &(&x.pow(3) * &y))) - &(&x.pow(2) * &y)) + &(&c(4) * &y.pow(2));
        assert_eq!(p.to_string(), "2*x^6 - x^4 + 6*x^3*y - x^2*y + 4*y^2");
    }

    #[test]
    fn gcd_and_division() {
        let (x, y) = xy();
        let one = x.one_like();
        let a = &(&x + &y) * &(&x - &one);
        let b = &(&x + &y) * &(&y + &one);
        assert_eq!(a.gcd(&b), (&x + &y).normalized());
        assert_eq!(a.div_exact(&(&x + &y)).unwrap(), &x - &one);
        assert!(a.div_exact(&(&y + &one)).is_none());
    }
}

//! Dense univariate polynomials over [`Fe`].

use super::field::{fmt_upoly, Fe};
use std::fmt;

/// Coefficients low-to-high with no trailing zeros; the zero polynomial is
/// the empty vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UPoly(pub Vec<Fe>);

pub(crate) fn trim(v: &mut Vec<Fe>) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

impl UPoly {
    pub fn new(mut c: Vec<Fe>) -> UPoly {
        trim(&mut c);
        UPoly(c)
    }

    pub fn from_ints(c: &[i64]) -> UPoly {
        UPoly::new(c.iter().map(|&x| Fe::int(x)).collect())
    }

    pub fn zero() -> UPoly {
        UPoly(Vec::new())
    }

    pub fn one() -> UPoly {
        UPoly(vec![Fe::one()])
    }

    pub fn constant(c: Fe) -> UPoly {
        UPoly::new(vec![c])
    }

    /// `t - c`
    pub fn linear(c: &Fe) -> UPoly {
        UPoly(vec![-c, Fe::one()])
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn deg(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn lc(&self) -> Fe {
        self.0.last().cloned().unwrap_or_else(Fe::zero)
    }

    pub fn coeff(&self, i: usize) -> Fe {
        self.0.get(i).cloned().unwrap_or_else(Fe::zero)
    }

    pub fn add(&self, o: &UPoly) -> UPoly {
        let n = self.0.len().max(o.0.len());
        UPoly::new((0..n).map(|i| &self.coeff(i) + &o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &UPoly) -> UPoly {
        let n = self.0.len().max(o.0.len());
        UPoly::new((0..n).map(|i| &self.coeff(i) - &o.coeff(i)).collect())
    }

    pub fn mul(&self, o: &UPoly) -> UPoly {
        if self.is_zero() || o.is_zero() {
            return UPoly::zero();
        }
        let mut r = vec![Fe::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.0.iter().enumerate() {
                if !b.is_zero() {
                    r[i + j] = &r[i + j] + &(a * b);
                }
            }
        }
        UPoly::new(r)
    }

    pub fn scale(&self, c: &Fe) -> UPoly {
        UPoly::new(self.0.iter().map(|x| x * c).collect())
    }

    pub fn neg(&self) -> UPoly {
        UPoly(self.0.iter().map(|x| -x).collect())
    }

    pub fn pow(&self, e: u32) -> UPoly {
        let mut acc = UPoly::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn monic(&self) -> UPoly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = self.lc().inv();
        self.scale(&inv)
    }

    pub fn divrem(&self, d: &UPoly) -> (UPoly, UPoly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let mut r = self.0.clone();
        let dd = d.deg();
        if r.len() < d.0.len() {
            return (UPoly::zero(), self.clone());
        }
        let inv = d.lc().inv();
        let mut q = vec![Fe::zero(); r.len() - dd];
        for k in (dd..r.len()).rev() {
            let c = std::mem::replace(&mut r[k], Fe::zero());
            if c.is_zero() {
                continue;
            }
            let f = &c * &inv;
            for j in 0..dd {
                if !d.0[j].is_zero() {
                    r[k - dd + j] = &r[k - dd + j] - &(&f * &d.0[j]);
                }
            }
            q[k - dd] = f;
        }
        r.truncate(dd);
        (UPoly::new(q), UPoly::new(r))
    }

    pub fn rem(&self, d: &UPoly) -> UPoly {
        self.divrem(d).1
    }

    /// Exact quotient, `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &UPoly) -> Option<UPoly> {
        let (q, r) = self.divrem(d);
        r.is_zero().then_some(q)
    }

    /// Monic gcd (zero only when both inputs are zero).
    pub fn gcd(&self, o: &UPoly) -> UPoly {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> UPoly {
        UPoly::new(self.0.iter().enumerate().skip(1).map(|(i, c)| c * &Fe::int(i as i64)).collect())
    }

    pub fn eval(&self, x: &Fe) -> Fe {
        let mut acc = Fe::zero();
        for c in self.0.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    /// `p(t + c)`
    pub fn shift(&self, c: &Fe) -> UPoly {
        let mut acc = UPoly::zero();
        let lin = UPoly::new(vec![c.clone(), Fe::one()]);
        for a in self.0.iter().rev() {
            acc = acc.mul(&lin).add(&UPoly::constant(a.clone()));
        }
        acc
    }

    /// Square-free decomposition (Yun): monic `(g_i, i)` with
    /// `self = lc · Π g_i^i`, the `g_i` pairwise coprime and square-free.
    pub fn squarefree(&self) -> Vec<(UPoly, usize)> {
        let mut out = Vec::new();
        if self.deg() == 0 {
            return out;
        }
        let f = self.monic();
        let df = f.derivative();
        let a0 = f.gcd(&df);
        let mut b = f.div_exact(&a0).unwrap();
        let mut c = df.div_exact(&a0).unwrap();
        let mut d = c.sub(&b.derivative());
        let mut i = 1;
        while b.deg() > 0 {
            let a = b.gcd(&d);
            if a.deg() > 0 {
                out.push((a.clone(), i));
            }
            b = b.div_exact(&a).unwrap();
            c = d.div_exact(&a).unwrap();
            d = c.sub(&b.derivative());
            i += 1;
        }
        out
    }

    pub fn is_squarefree(&self) -> bool {
        self.gcd(&self.derivative()).deg() == 0
    }

    pub fn display(&self, var: &str) -> String {
        fmt_upoly(&self.0, var)
    }
}

impl fmt::Display for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", fmt_upoly(&self.0, "t"))
    }
}

/// Returns `(g, s)` with `s·a ≡ g (mod m)`, `g = gcd(a, m)` not normalized.
pub(crate) fn ext_gcd_left(a: &[Fe], m: &[Fe]) -> (Vec<Fe>, Vec<Fe>) {
    let mut r0 = UPoly::new(m.to_vec());
    let mut r1 = UPoly::new(a.to_vec()).rem(&r0);
    let mut s0 = UPoly::zero();
    let mut s1 = UPoly::one();
    while !r1.is_zero() {
        let (q, r) = r0.divrem(&r1);
        let s = s0.sub(&q.mul(&s1));
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s;
    }
    (r0.0, s0.0)
}

/// Resultant of two polynomials over a field, via the Euclidean scheme
/// `Res(a,b) = lc(a)^(deg b − deg r) Res(a, r)` for `r = b mod a`.
pub fn resultant(a: &UPoly, b: &UPoly) -> Fe {
    if a.is_zero() || b.is_zero() {
        return Fe::zero();
    }
    let mut a = a.clone();
    let mut b = b.clone();
    let mut acc = Fe::one();
    loop {
        let da = a.deg();
        let db = b.deg();
        if da == 0 {
            return &acc * &a.lc().pow(db as u32);
        }
        if db == 0 {
            return &acc * &b.lc().pow(da as u32);
        }
        let r = b.rem(&a);
        if r.is_zero() {
            return Fe::zero();
        }
        let dr = r.deg();
        acc = &acc * &a.lc().pow((db - dr) as u32);
        if (da * dr) % 2 == 1 {
            acc = -&acc;
        }
        b = a;
        a = r;
    }
}

/// Newton interpolation through `(xs[i], ys[i])`.
pub fn interpolate(xs: &[Fe], ys: &[Fe]) -> UPoly {
    let n = xs.len();
    let mut coef: Vec<Fe> = ys.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            let num = &coef[i] - &coef[i - 1];
            let den = &xs[i] - &xs[i - j];
            coef[i] = &num / &den;
        }
    }
    let mut acc = UPoly::zero();
    for i in (0..n).rev() {
        acc = acc.mul(&UPoly::linear(&xs[i])).add(&UPoly::constant(coef[i].clone()));
    }
    acc
}

//! Exact scalars: rationals and towers of simple algebraic extensions.
//!
//! A [`Level`] is one simple extension `K(θ) = K[t]/(m)` over its parent
//! (or over ℚ when it has no parent). Levels form a tree; an element only
//! ever meets elements from its own chain of ancestors.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn fmt_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// FNV-1a; stable across platforms and toolchains.
pub(crate) struct Fnv(pub u64);

impl Hasher for Fnv {
    fn finish(&self) -> u64 {
        self.0
    }
    fn write(&mut self, bytes: &[u8]) {
        for b in bytes {
            self.0 ^= *b as u64;
            self.0 = self.0.wrapping_mul(0x0100_0000_01b3);
        }
    }
}

#[derive(Debug)]
pub struct Level {
    parent: Option<Arc<Level>>,
    name: String,
    minpoly: Vec<Fe>,
    depth: usize,
    degree: usize,
    fingerprint: u64,
}

impl Level {
    /// Builds a level without checking irreducibility. `minpoly` is given
    /// low-to-high, coefficients in the parent field; it is made monic here.
    pub(crate) fn new_unchecked(parent: Option<Arc<Level>>, name: &str, minpoly: &[Fe]) -> Arc<Level> {
        let lc = minpoly.last().expect("empty minimal polynomial").clone();
        let inv = lc.inv();
        let monic: Vec<Fe> = minpoly.iter().map(|c| c * &inv).collect();
        let deg = monic.len() - 1;
        assert!(deg >= 2, "extension of degree < 2");
        let (depth, base_degree, pfp) = match &parent {
            Some(p) => (p.depth + 1, p.degree, p.fingerprint),
            None => (1, 1, 0xcbf2_9ce4_8422_2325),
        };
        let mut hasher = Fnv(pfp);
        for c in &monic {
            c.hash(&mut hasher);
        }
        let h = hasher.finish();
        Arc::new(Level {
            parent,
            name: name.to_string(),
            minpoly: monic,
            depth,
            degree: base_degree * deg,
            fingerprint: h,
        })
    }

    pub fn parent(&self) -> Option<&Arc<Level>> {
        self.parent.as_ref()
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Monic minimal polynomial over the parent, low-to-high.
    pub fn minpoly(&self) -> &[Fe] {
        &self.minpoly
    }

    /// Degree of this level over its parent.
    pub fn local_degree(&self) -> usize {
        self.minpoly.len() - 1
    }

    /// Degree of the whole tower over ℚ.
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn generator(self: &Arc<Self>) -> Fe {
        Fe::Alg(self.clone(), Arc::new(vec![Fe::zero(), Fe::one()]))
    }

    /// True when `self` is `other` or one of its ancestors.
    pub fn is_ancestor_of(&self, other: &Level) -> bool {
        let mut cur = Some(other);
        while let Some(l) = cur {
            if l.depth < self.depth {
                return false;
            }
            if l == self {
                return true;
            }
            cur = l.parent.as_deref();
        }
        false
    }

    /// Human readable description such as `a1^2 + 1 = 0 over a0^2 - 2 = 0`.
    pub fn describe(&self) -> String {
        let mut s = String::new();
        let mut cur = Some(self);
        while let Some(l) = cur {
            if !s.is_empty() {
                s.push_str(" over ");
            }
            s.push_str(&format!("{} = 0", fmt_upoly(&l.minpoly, &l.name)));
            cur = l.parent.as_deref();
        }
        s
    }
}

impl PartialEq for Level {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self, other)
            || (self.fingerprint == other.fingerprint
                && self.depth == other.depth
                && self.minpoly == other.minpoly
                && self.parent == other.parent)
    }
}
impl Eq for Level {}

/// Coarsest field containing both levels. Panics when the two levels sit on
/// different branches of the tower.
pub fn join_levels(a: Option<&Arc<Level>>, b: Option<&Arc<Level>>) -> Option<Arc<Level>> {
    match (a, b) {
        (None, None) => None,
        (Some(x), None) | (None, Some(x)) => Some(x.clone()),
        (Some(x), Some(y)) => {
            if x.depth >= y.depth {
                assert!(y.is_ancestor_of(x), "elements from incompatible extension fields");
                Some(x.clone())
            } else {
                assert!(x.is_ancestor_of(y), "elements from incompatible extension fields");
                Some(y.clone())
            }
        }
    }
}

/// Checked variant of [`join_levels`].
pub fn try_join_levels(a: Option<&Arc<Level>>, b: Option<&Arc<Level>>) -> Option<Option<Arc<Level>>> {
    match (a, b) {
        (Some(x), Some(y)) => {
            if x.depth >= y.depth {
                y.is_ancestor_of(x).then(|| Some(x.clone()))
            } else {
                x.is_ancestor_of(y).then(|| Some(y.clone()))
            }
        }
        _ => Some(join_levels(a, b)),
    }
}

/// Field element. `Alg(level, c)` stands for `Σ c[i] θ^i` with `θ` the
/// generator of `level` and `c[i]` in the parent field. The representation
/// is canonical: an `Alg` value always has a nonzero coefficient at some
/// `i ≥ 1`, and no trailing zeros.
#[derive(Clone, Debug)]
pub enum Fe {
    Rat(Rational),
    Alg(Arc<Level>, Arc<Vec<Fe>>),
}

impl Fe {
    pub fn zero() -> Fe {
        Fe::Rat(Rational::zero())
    }

    pub fn one() -> Fe {
        Fe::Rat(Rational::one())
    }

    pub fn int(n: i64) -> Fe {
        Fe::Rat(rat_int(n))
    }

    pub fn frac(n: i64, d: i64) -> Fe {
        Fe::Rat(rat(n, d))
    }

    pub fn from_bigint(n: BigInt) -> Fe {
        Fe::Rat(Rational::from_integer(n))
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Fe::Rat(r) if r.is_zero())
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Fe::Rat(r) if r.is_one())
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            Fe::Rat(r) => Some(r),
            Fe::Alg(..) => None,
        }
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, Fe::Rat(_))
    }

    pub fn level(&self) -> Option<&Arc<Level>> {
        match self {
            Fe::Rat(_) => None,
            Fe::Alg(l, _) => Some(l),
        }
    }

    fn make(level: &Arc<Level>, mut c: Vec<Fe>) -> Fe {
        while c.len() > 1 && c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        if c.len() <= 1 {
            c.pop().unwrap_or_else(Fe::zero)
        } else {
            Fe::Alg(level.clone(), Arc::new(c))
        }
    }

    /// Coefficients of `self` over `level` (which must contain it).
    pub fn coeffs_at(&self, level: &Arc<Level>) -> Vec<Fe> {
        match self {
            Fe::Alg(l, c) if **l == **level => c.as_ref().clone(),
            _ => vec![self.clone()],
        }
    }

    /// Coordinates over ℚ in the power basis of the tower ending at `level`.
    pub fn rational_components(&self, level: Option<&Arc<Level>>) -> Vec<Rational> {
        match level {
            None => vec![self.as_rational().expect("element outside the base field").clone()],
            Some(l) => {
                let mut c = self.coeffs_at(l);
                c.resize(l.local_degree(), Fe::zero());
                let mut out = Vec::with_capacity(l.degree());
                for x in &c {
                    out.extend(x.rational_components(l.parent()));
                }
                out
            }
        }
    }

    fn level_add(l: &Arc<Level>, a: &Fe, b: &Fe, sub: bool) -> Fe {
        let ca = a.coeffs_at(l);
        let cb = b.coeffs_at(l);
        let n = ca.len().max(cb.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let x = ca.get(i).cloned().unwrap_or_else(Fe::zero);
            let y = cb.get(i).cloned().unwrap_or_else(Fe::zero);
            out.push(if sub { &x - &y } else { &x + &y });
        }
        Fe::make(l, out)
    }

    fn level_mul(l: &Arc<Level>, a: &Fe, b: &Fe) -> Fe {
        let ca = a.coeffs_at(l);
        let cb = b.coeffs_at(l);
        let mut prod = vec![Fe::zero(); ca.len() + cb.len() - 1];
        for (i, x) in ca.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in cb.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                prod[i + j] = &prod[i + j] + &(x * y);
            }
        }
        let m = &l.minpoly;
        let d = m.len() - 1;
        for k in (d..prod.len()).rev() {
            let c = std::mem::replace(&mut prod[k], Fe::zero());
            if c.is_zero() {
                continue;
            }
            for j in 0..d {
                if !m[j].is_zero() {
                    prod[k - d + j] = &prod[k - d + j] - &(&c * &m[j]);
                }
            }
        }
        prod.truncate(d.min(prod.len()));
        Fe::make(l, prod)
    }

    /// Multiplicative inverse; panics on zero. Levels are only ever built
    /// from irreducible polynomials, so every nonzero element is invertible.
    pub fn inv(&self) -> Fe {
        match self {
            Fe::Rat(r) => {
                assert!(!r.is_zero(), "division by zero");
                Fe::Rat(r.recip())
            }
            Fe::Alg(l, c) => {
                let (g, s) = super::upoly::ext_gcd_left(c.as_ref(), &l.minpoly);
                assert!(g.len() == 1, "zero divisor in extension {}", l.describe());
                let ginv = g[0].inv();
                let s: Vec<Fe> = s.iter().map(|x| x * &ginv).collect();
                Fe::make(l, s)
            }
        }
    }

    pub fn pow(&self, mut e: u32) -> Fe {
        let mut base = self.clone();
        let mut acc = Fe::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Galois-agnostic "sign" used for normalization: sign of the first
    /// nonzero rational component.
    pub fn leading_sign(&self) -> Ordering {
        match self {
            Fe::Rat(r) => {
                if r.is_positive() {
                    Ordering::Greater
                } else if r.is_negative() {
                    Ordering::Less
                } else {
                    Ordering::Equal
                }
            }
            Fe::Alg(_, c) => c.iter().rev().map(|x| x.leading_sign()).find(|o| *o != Ordering::Equal).unwrap_or(Ordering::Equal),
        }
    }

    fn is_atomic(&self) -> bool {
        match self {
            Fe::Rat(r) => !r.is_negative(),
            Fe::Alg(_, c) => c.iter().filter(|x| !x.is_zero()).count() == 1 && c.last().is_some_and(|x| x.is_one()),
        }
    }

    /// Text suitable as a multiplicative coefficient: wrapped in
    /// parentheses unless it is a nonnegative rational or a bare power.
    pub fn paren_string(&self) -> String {
        if self.is_atomic() {
            self.to_string()
        } else {
            format!("({})", self)
        }
    }
}

impl PartialEq for Fe {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Fe::Rat(a), Fe::Rat(b)) => a == b,
            (Fe::Alg(la, ca), Fe::Alg(lb, cb)) => ca == cb && la == lb,
            _ => false,
        }
    }
}
impl Eq for Fe {}

impl Hash for Fe {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match self {
            Fe::Rat(r) => {
                0u8.hash(state);
                r.hash(state);
            }
            Fe::Alg(l, c) => {
                1u8.hash(state);
                l.fingerprint.hash(state);
                for x in c.iter() {
                    x.hash(state);
                }
            }
        }
    }
}

impl Ord for Fe {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Fe::Rat(a), Fe::Rat(b)) => a.cmp(b),
            (Fe::Rat(_), Fe::Alg(..)) => Ordering::Less,
            (Fe::Alg(..), Fe::Rat(_)) => Ordering::Greater,
            (Fe::Alg(la, ca), Fe::Alg(lb, cb)) => la
                .depth
                .cmp(&lb.depth)
                .then(la.fingerprint.cmp(&lb.fingerprint))
                .then_with(|| ca.len().cmp(&cb.len()))
                .then_with(|| ca.iter().rev().cmp(cb.iter().rev())),
        }
    }
}
impl PartialOrd for Fe {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<'a> Add<&'a Fe> for &'a Fe {
    type Output = Fe;
    fn add(self, o: &Fe) -> Fe {
        match (self, o) {
            (Fe::Rat(a), Fe::Rat(b)) => Fe::Rat(a + b),
            _ => {
                let l = join_levels(self.level(), o.level()).unwrap();
                Fe::level_add(&l, self, o, false)
            }
        }
    }
}

impl<'a> Sub<&'a Fe> for &'a Fe {
    type Output = Fe;
    fn sub(self, o: &Fe) -> Fe {
        match (self, o) {
            (Fe::Rat(a), Fe::Rat(b)) => Fe::Rat(a - b),
            _ => {
                let l = join_levels(self.level(), o.level()).unwrap();
                Fe::level_add(&l, self, o, true)
            }
        }
    }
}

impl<'a> Mul<&'a Fe> for &'a Fe {
    type Output = Fe;
    fn mul(self, o: &Fe) -> Fe {
        match (self, o) {
            (Fe::Rat(a), Fe::Rat(b)) => Fe::Rat(a * b),
            (Fe::Rat(a), Fe::Alg(l, c)) | (Fe::Alg(l, c), Fe::Rat(a)) => {
                if a.is_zero() {
                    return Fe::zero();
                }
                let s = Fe::Rat(a.clone());
                Fe::make(l, c.iter().map(|x| &s * x).collect())
            }
            _ => {
                let l = join_levels(self.level(), o.level()).unwrap();
                Fe::level_mul(&l, self, o)
            }
        }
    }
}

impl<'a> Div<&'a Fe> for &'a Fe {
    type Output = Fe;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: &Fe) -> Fe {
        self * &o.inv()
    }
}

impl Neg for &Fe {
    type Output = Fe;
    fn neg(self) -> Fe {
        match self {
            Fe::Rat(a) => Fe::Rat(-a),
            Fe::Alg(l, c) => Fe::Alg(l.clone(), Arc::new(c.iter().map(|x| -x).collect())),
        }
    }
}

macro_rules! owned_ops {
    ($tr:ident, $m:ident) => {
        impl $tr<Fe> for Fe {
            type Output = Fe;
            fn $m(self, o: Fe) -> Fe {
                (&self).$m(&o)
            }
        }
        impl<'a> $tr<&'a Fe> for Fe {
            type Output = Fe;
            fn $m(self, o: &Fe) -> Fe {
                (&self).$m(o)
            }
        }
    };
}
owned_ops!(Add, add);
owned_ops!(Sub, sub);
owned_ops!(Mul, mul);
owned_ops!(Div, div);

impl Neg for Fe {
    type Output = Fe;
    fn neg(self) -> Fe {
        -&self
    }
}

impl From<Rational> for Fe {
    fn from(r: Rational) -> Fe {
        Fe::Rat(r)
    }
}

impl From<i64> for Fe {
    fn from(n: i64) -> Fe {
        Fe::int(n)
    }
}

/// Prints a dense low-to-high polynomial in one named variable.
pub(crate) fn fmt_upoly(c: &[Fe], var: &str) -> String {
    let mut s = String::new();
    for (i, x) in c.iter().enumerate().rev() {
        if x.is_zero() {
            continue;
        }
        let neg = x.leading_sign() == Ordering::Less && x.is_rational();
        let mag = if neg { -x } else { x.clone() };
        if s.is_empty() {
            if neg {
                s.push('-');
            }
        } else {
            s.push_str(if neg { " - " } else { " + " });
        }
        let mono = match i {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{}^{}", var, i),
        };
        if mono.is_empty() {
            s.push_str(&mag.paren_string());
        } else if mag.is_one() {
            s.push_str(&mono);
        } else {
            s.push_str(&format!("{}*{}", mag.paren_string(), mono));
        }
    }
    if s.is_empty() {
        s.push('0');
    }
    s
}

impl fmt::Display for Fe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Fe::Rat(r) => write!(f, "{}", fmt_rational(r)),
            Fe::Alg(l, c) => write!(f, "{}", fmt_upoly(c, &l.name)),
        }
    }
}

//! Univariate factorization over ℚ and over extension towers, and root
//! adjunction.

use super::field::{Fe, Level, Rational};
use super::upoly::{interpolate, resultant, UPoly};
use super::zassenhaus::factor_squarefree;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::sync::Arc;
use thiserror::Error;

pub const DEFAULT_MAX_TOWER_DEGREE: usize = 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgError {
    #[error("cannot adjoin a root of {poly}: a polynomial of degree below 2 has its roots in the field already")]
    DegreeTooSmall { poly: String },
    #[error("{poly} is reducible over the current field: {}", factors.join(" * "))]
    SplitRequired { poly: String, factors: Vec<String> },
    #[error("adjoining a root of {poly} would raise the tower degree to {degree}, above the cap {cap}")]
    TowerDegreeExceeded { poly: String, degree: usize, cap: usize },
}

/// `f = unit · Π factors[i].0 ^ factors[i].1` with primitive integral
/// factors of positive leading coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalFactorization {
    pub unit: Rational,
    pub factors: Vec<(UPoly, usize)>,
}

fn to_integral(f: &UPoly) -> Vec<BigInt> {
    let den = f.0.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.as_rational().expect("rational polynomial expected").denom()));
    let v: Vec<BigInt> = f.0.iter().map(|c| (c.as_rational().unwrap() * Rational::from_integer(den.clone())).to_integer()).collect();
    let g = v.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
    let mut v: Vec<BigInt> = v.iter().map(|c| c / &g).collect();
    if v.last().is_some_and(|c| c.is_negative()) {
        v.iter_mut().for_each(|c| *c = -&*c);
    }
    v
}

fn from_integral(v: &[BigInt]) -> UPoly {
    UPoly::new(v.iter().map(|c| Fe::from_bigint(c.clone())).collect())
}

/// Factorization over ℚ of a nonzero polynomial with rational coefficients.
pub fn univ_factor(f: &UPoly) -> RationalFactorization {
    assert!(!f.is_zero(), "factorization of the zero polynomial");
    let mut factors = Vec::new();
    for (g, e) in f.squarefree() {
        let mut z = to_integral(&g);
        if z[0].is_zero() {
            factors.push((UPoly::from_ints(&[0, 1]), e));
            z.remove(0);
        }
        if z.len() > 1 {
            for h in factor_squarefree(&z) {
                factors.push((from_integral(&h), e));
            }
        }
    }
    factors.sort_by(|a, b| a.0.deg().cmp(&b.0.deg()).then_with(|| a.0.cmp(&b.0)));
    let prod = factors.iter().fold(UPoly::one(), |acc, (g, e)| acc.mul(&g.pow(*e as u32)));
    let unit = (&f.lc() / &prod.lc()).as_rational().unwrap().clone();
    RationalFactorization { unit, factors }
}

/// Norm of `e ∈ level` down to the parent field.
pub fn norm_element(e: &Fe, level: &Arc<Level>) -> Fe {
    resultant(&UPoly::new(level.minpoly().to_vec()), &UPoly::new(e.coeffs_at(level)))
}

/// Norm of a polynomial over `level` down to the parent field.
pub fn norm_upoly(g: &UPoly, level: &Arc<Level>) -> UPoly {
    let n = g.deg() * level.local_degree();
    let xs: Vec<Fe> = (0..=n as i64).map(Fe::int).collect();
    let ys: Vec<Fe> = xs.iter().map(|x| norm_element(&g.eval(x), level)).collect();
    interpolate(&xs, &ys)
}

fn shift_parameter(k: i64) -> i64 {
    // 0, 1, -1, 2, -2, ...
    if k % 2 == 1 {
        (k + 1) / 2
    } else {
        -(k / 2)
    }
}

fn trager(g: &UPoly, level: &Arc<Level>) -> Vec<UPoly> {
    if g.deg() <= 1 {
        return vec![g.monic()];
    }
    let theta = level.generator();
    for k in 0.. {
        let s = Fe::int(shift_parameter(k));
        let st = &s * &theta;
        let gs = g.shift(&-&st);
        let n = norm_upoly(&gs, level);
        if !n.is_squarefree() {
            continue;
        }
        let facs = factor_over(&n, level.parent());
        if facs.len() == 1 {
            return vec![g.monic()];
        }
        let mut out: Vec<UPoly> = facs.iter().map(|(h, _)| gs.gcd(h).shift(&st)).filter(|h| h.deg() > 0).collect();
        out.sort();
        return out;
    }
    unreachable!()
}

/// Monic irreducible factors with multiplicity over the field `level`
/// (ℚ when `None`).
pub fn factor_over(f: &UPoly, level: Option<&Arc<Level>>) -> Vec<(UPoly, usize)> {
    let mut out = Vec::new();
    match level {
        None => {
            for (g, e) in univ_factor(f).factors {
                out.push((g.monic(), e));
            }
        }
        Some(l) => {
            for (g, e) in f.squarefree() {
                for h in trager(&g, l) {
                    out.push((h, e));
                }
            }
        }
    }
    out.sort_by(|a, b| a.0.deg().cmp(&b.0.deg()).then_with(|| a.0.cmp(&b.0)));
    out
}

/// Adjoins a root of `f` to `parent` (ℚ when `None`). `f` must be
/// irreducible over `parent` and of degree at least 2.
pub fn adjoin_root(parent: Option<&Arc<Level>>, f: &UPoly, name: &str, max_degree: usize) -> Result<Arc<Level>, AlgError> {
    let poly = f.display("t");
    if f.deg() < 2 {
        return Err(AlgError::DegreeTooSmall { poly });
    }
    let degree = parent.map_or(1, |p| p.degree()) * f.deg();
    if degree > max_degree {
        return Err(AlgError::TowerDegreeExceeded { poly, degree, cap: max_degree });
    }
    let facs = factor_over(f, parent);
    if facs.len() > 1 || facs[0].1 > 1 {
        let factors = facs.iter().map(|(g, e)| if *e > 1 { format!("({})^{}", g.display("t"), e) } else { format!("({})", g.display("t")) }).collect();
        return Err(AlgError::SplitRequired { poly, factors });
    }
    Ok(Level::new_unchecked(parent.cloned(), name, &f.monic().0))
}

/// One root per Galois orbit of the roots of `f` over `level`: each entry is
/// a representative root and the size of its orbit (degree of the
/// irreducible factor it comes from). Repeated factors are reported once.
pub fn root_orbits(
    f: &UPoly,
    level: Option<&Arc<Level>>,
    max_degree: usize,
    namer: &mut dyn FnMut() -> String,
) -> Result<Vec<(Fe, usize)>, AlgError> {
    let mut out = Vec::new();
    if f.deg() == 0 {
        return Ok(out);
    }
    for (g, _) in factor_over(f, level) {
        if g.deg() == 1 {
            out.push((-&g.0[0], 1));
        } else {
            let poly = g.display("t");
            let degree = level.map_or(1, |p| p.degree()) * g.deg();
            if degree > max_degree {
                return Err(AlgError::TowerDegreeExceeded { poly, degree, cap: max_degree });
            }
            let l = Level::new_unchecked(level.cloned(), &namer(), &g.0);
            out.push((l.generator(), g.deg()));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_examples() {
        let f = UPoly::from_ints(&[-1, 0, 1]);
        let r = univ_factor(&f);
        assert_eq!(r.factors, vec![(UPoly::from_ints(&[-1, 1]), 1), (UPoly::from_ints(&[1, 1]), 1)]);
        let f = UPoly::from_ints(&[0, 0, 0, 2, 0, 5]);
        let r = univ_factor(&f);
        assert_eq!(r.factors, vec![(UPoly::from_ints(&[0, 1]), 3), (UPoly::from_ints(&[2, 0, 5]), 1)]);
        assert_eq!(r.unit, Rational::one());
    }

    #[test]
    fn splits_over_gaussian_rationals() {
        let i = adjoin_root(None, &UPoly::from_ints(&[1, 0, 1]), "i", 16).unwrap();
        let f = UPoly::from_ints(&[1, 0, 1]);
        let facs = factor_over(&f, Some(&i));
        assert_eq!(facs.len(), 2);
        // t^2 + 4 also splits, t^2 - 2 does not.
        assert_eq!(factor_over(&UPoly::from_ints(&[4, 0, 1]), Some(&i)).len(), 2);
        assert_eq!(factor_over(&UPoly::from_ints(&[-2, 0, 1]), Some(&i)).len(), 1);
        // t^4 + 1 splits into two quadratics over Q(i).
        let q = factor_over(&UPoly::from_ints(&[1, 0, 0, 0, 1]), Some(&i));
        assert_eq!(q.iter().map(|(g, _)| g.deg()).collect::<Vec<_>>(), vec![2, 2]);
    }

    #[test]
    fn adjoin_rejects() {
        assert!(matches!(adjoin_root(None, &UPoly::from_ints(&[-3, 1]), "a", 16), Err(AlgError::DegreeTooSmall { .. })));
        assert!(matches!(adjoin_root(None, &UPoly::from_ints(&[-1, 0, 1]), "a", 16), Err(AlgError::SplitRequired { .. })));
        let a = adjoin_root(None, &UPoly::from_ints(&[-2, 0, 0, 0, 0, 1]), "a", 16).unwrap();
        let g = adjoin_root(Some(&a), &UPoly::from_ints(&[-3, 0, 0, 0, 0, 1]), "b", 16);
        assert!(matches!(g, Err(AlgError::TowerDegreeExceeded { degree: 25, .. })));
    }
}

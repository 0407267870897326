//! Norms of polynomials with coefficients in a tower down to ℚ.

use super::field::Level;
use super::MultiPoly;
use std::sync::Arc;

/// Fraction-free determinant of a square matrix of polynomials.
pub fn poly_determinant(m: &[Vec<MultiPoly>]) -> MultiPoly {
    let n = m.len();
    if n == 0 {
        panic!("determinant of an empty matrix");
    }
    let mut a = m.to_vec();
    let mut sign = false;
    let mut prev = a[0][0].one_like();
    for k in 0..n - 1 {
        let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else { return a[0][0].zero_like() };
        if p != k {
            a.swap(p, k);
            sign = !sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&a[i][j] * &a[k][k]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = num.div_exact(&prev).expect("Bareiss division is exact");
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if sign {
        -&d
    } else {
        d
    }
}

/// Norm of `f` from `level` down to its parent field: the determinant of
/// multiplication by `f` on the power basis of the generator.
pub fn norm_down(f: &MultiPoly, level: &Arc<Level>) -> MultiPoly {
    let d = level.local_degree();
    let mut v: Vec<MultiPoly> = vec![f.zero_like(); d];
    for (e, c) in f.terms() {
        for (k, ck) in c.coeffs_at(level).into_iter().enumerate() {
            if !ck.is_zero() {
                v[k].add_term(*e, ck);
            }
        }
    }
    let minpoly = level.minpoly();
    let mut cols = Vec::with_capacity(d);
    for _ in 0..d {
        cols.push(v.clone());
        let top = v[d - 1].clone();
        let mut next = vec![f.zero_like()];
        next.extend(v[..d - 1].iter().cloned());
        for (j, m) in minpoly[..d].iter().enumerate() {
            if !m.is_zero() {
                next[j] = &next[j] - &top.scale(m);
            }
        }
        v = next;
    }
    let rows: Vec<Vec<MultiPoly>> = (0..d).map(|i| (0..d).map(|j| cols[j][i].clone()).collect()).collect();
    poly_determinant(&rows)
}

fn top_level(f: &MultiPoly) -> Option<Arc<Level>> {
    f.terms().filter_map(|(_, c)| c.level()).max_by_key(|l| l.depth()).cloned()
}

/// Norm of `f` down to ℚ, taken over the smallest level of the tower
/// containing its coefficients.
pub fn norm_to_rationals(f: &MultiPoly) -> MultiPoly {
    let mut g = f.clone();
    while let Some(l) = top_level(&g) {
        g = norm_down(&g, &l);
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{adjoin_root, parse_poly_in, Fe, UPoly};

    #[test]
    fn gaussian_and_nested_norms() {
        let i = adjoin_root(None, &UPoly::from_ints(&[1, 0, 1]), "a1", 8).unwrap();
        let vars = ["x", "y"];
        let x = MultiPoly::var(&vars, 0);
        let y = MultiPoly::var(&vars, 1);
        let f = &x + &y.scale(&i.generator());
        assert_eq!(norm_to_rationals(&f), parse_poly_in("x^2 + y^2", &vars).unwrap());
        let s2 = adjoin_root(Some(&i), &UPoly::new(vec![Fe::int(-2), Fe::zero(), Fe::one()]), "a2", 8).unwrap();
        let g = &x - &MultiPoly::constant(&vars, s2.generator());
        assert_eq!(norm_to_rationals(&g), parse_poly_in("x^2 - 2", &vars).unwrap());
        assert_eq!(norm_to_rationals(&y), y);
    }
}

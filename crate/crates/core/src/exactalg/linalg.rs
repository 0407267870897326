//! Exact linear algebra over [`Fe`]: fraction-free forward elimination
//! followed by back substitution.

use super::field::{Fe, Rational};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

pub type Matrix = Vec<Vec<Fe>>;

fn clear_row_denominators(row: &mut [Fe]) {
    if !row.iter().all(|x| x.is_rational()) {
        return;
    }
    let den = row.iter().fold(BigInt::one(), |a, x| a.lcm(x.as_rational().unwrap().denom()));
    if den.is_one() {
        return;
    }
    let s = Fe::Rat(Rational::from_integer(den));
    for x in row.iter_mut() {
        *x = &*x * &s;
    }
}

/// Row echelon form by Bareiss elimination (rational rows are first scaled
/// to integers, so every intermediate entry stays integral). Returns the
/// echelon matrix and its pivot columns.
pub fn echelon(m: &[Vec<Fe>], ncols: usize) -> (Matrix, Vec<usize>) {
    let mut a: Matrix = m.to_vec();
    for row in a.iter_mut() {
        assert_eq!(row.len(), ncols, "ragged matrix");
        clear_row_denominators(row);
    }
    let nrows = a.len();
    let mut prev = Fe::one();
    let mut r = 0;
    let mut pivots = Vec::new();
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        let piv = a[r][c].clone();
        for i in r + 1..nrows {
            let f = a[i][c].clone();
            for j in c + 1..ncols {
                let v = &(&piv * &a[i][j]) - &(&f * &a[r][j]);
                a[i][j] = &v / &prev;
            }
            a[i][c] = Fe::zero();
        }
        prev = piv;
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

/// Reduced row echelon form (pivots equal to one); zero rows dropped.
pub fn rref(m: &[Vec<Fe>], ncols: usize) -> (Matrix, Vec<usize>) {
    let (mut a, pivots) = echelon(m, ncols);
    a.truncate(pivots.len());
    for (i, &c) in pivots.iter().enumerate().rev() {
        let inv = a[i][c].inv();
        for x in a[i].iter_mut() {
            *x = &*x * &inv;
        }
        for k in 0..i {
            let f = a[k][c].clone();
            if f.is_zero() {
                continue;
            }
            for j in c..ncols {
                let v = &a[k][j] - &(&f * &a[i][j]);
                a[k][j] = v;
            }
        }
    }
    (a, pivots)
}

pub fn rank(m: &[Vec<Fe>], ncols: usize) -> usize {
    echelon(m, ncols).1.len()
}

/// Basis of the right nullspace `{v : M v = 0}`, one vector per free
/// column. Rational vectors are scaled to primitive integral ones.
pub fn nullspace(m: &[Vec<Fe>], ncols: usize) -> Vec<Vec<Fe>> {
    let (a, pivots) = rref(m, ncols);
    let mut basis = Vec::new();
    for f in 0..ncols {
        if pivots.contains(&f) {
            continue;
        }
        let mut v = vec![Fe::zero(); ncols];
        v[f] = Fe::one();
        for (i, &c) in pivots.iter().enumerate() {
            v[c] = -&a[i][f];
        }
        basis.push(primitive_vector(&v));
    }
    basis
}

/// Scales a rational vector to a primitive integral one whose first nonzero
/// entry is positive; other vectors are returned unchanged.
pub fn primitive_vector(v: &[Fe]) -> Vec<Fe> {
    if !v.iter().all(|x| x.is_rational()) {
        return v.to_vec();
    }
    let den = v.iter().fold(BigInt::one(), |a, x| a.lcm(x.as_rational().unwrap().denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x.as_rational().unwrap() * Rational::from_integer(den.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |a, x| a.gcd(x));
    if g.is_zero() {
        return v.to_vec();
    }
    let sign = ints.iter().find(|x| !x.is_zero()).map(|x| if *x < BigInt::zero() { -1 } else { 1 }).unwrap_or(1);
    ints.iter().map(|x| Fe::from_bigint(x * sign / &g)).collect()
}

/// Unique solution of `A x = b`, or `None` when the system is inconsistent
/// or underdetermined.
pub fn solve_unique(a: &[Vec<Fe>], b: &[Fe], ncols: usize) -> Option<Vec<Fe>> {
    let aug: Matrix = a
        .iter()
        .zip(b)
        .map(|(row, x)| {
            let mut r = row.clone();
            r.push(x.clone());
            r
        })
        .collect();
    let (r, pivots) = rref(&aug, ncols + 1);
    if pivots.contains(&ncols) || pivots.len() != ncols {
        return None;
    }
    Some((0..ncols).map(|i| r[i][ncols].clone()).collect())
}

pub fn determinant(m: &[Vec<Fe>]) -> Fe {
    let n = m.len();
    let mut a = m.to_vec();
    let mut det = Fe::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else { return Fe::zero() };
        if p != c {
            a.swap(p, c);
            det = -&det;
        }
        let piv = a[c][c].clone();
        det = &det * &piv;
        let inv = piv.inv();
        for i in c + 1..n {
            let f = &a[i][c] * &inv;
            if f.is_zero() {
                continue;
            }
            for j in c..n {
                let v = &a[i][j] - &(&f * &a[c][j]);
                a[i][j] = v;
            }
        }
    }
    det
}

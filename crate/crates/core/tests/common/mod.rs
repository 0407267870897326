#![allow(dead_code)]

use rand::Rng;
use wai_core::blowup::LocalOneForm;
use wai_core::exactalg::{Fe, MultiPoly};
use wai_core::vfield::{homogenize, AffineVectorField, AFFINE_VARS};

pub fn ap(s: &str) -> MultiPoly {
    wai_core::exactalg::parse_poly_in(s, &AFFINE_VARS).unwrap()
}

pub fn pp(s: &str) -> MultiPoly {
    wai_core::exactalg::parse_poly_in(s, &["X", "Y", "Z"]).unwrap()
}

fn nonzero<R: Rng>(rng: &mut R, k: i64) -> i64 {
    loop {
        let c = rng.gen_range(-k..=k);
        if c != 0 {
            return c;
        }
    }
}

/// `y + c x^k + lower terms in x`: a curve with one place at infinity.
pub fn graph_curve<R: Rng>(rng: &mut R, max_deg: u32) -> MultiPoly {
    let k = rng.gen_range(1..=max_deg);
    let x = MultiPoly::var(&AFFINE_VARS, 0);
    let mut f = MultiPoly::var(&AFFINE_VARS, 1);
    f = &f + &x.pow(k).scale(&Fe::int(nonzero(rng, 2)));
    for j in 0..k {
        if rng.gen_bool(0.5) {
            f = &f + &x.pow(j).scale(&Fe::int(rng.gen_range(-2..=2)));
        }
    }
    f
}

/// A field `(-H_y, H_x)/gcd` with `H = Π f_i^{n_i}` a minimal product of
/// graph curves.
pub struct WaiCase {
    pub field: AffineVectorField,
    pub h: MultiPoly,
    pub curves: Vec<MultiPoly>,
    pub exponents: Vec<u64>,
}

pub fn wai_case<R: Rng>(rng: &mut R, max_curves: usize, max_deg: u32) -> WaiCase {
    loop {
        let r = rng.gen_range(1..=max_curves);
        let curves: Vec<MultiPoly> = (0..r).map(|_| graph_curve(rng, max_deg)).collect();
        let distinct = (0..r).all(|i| (0..i).all(|j| !(&curves[i] - &curves[j]).is_constant()));
        if !distinct {
            continue;
        }
        let exponents: Vec<u64> = if r == 1 { vec![1] } else { (0..r).map(|_| rng.gen_range(1..=2)).collect() };
        if exponents.iter().all(|&e| e == 2) {
            continue;
        }
        let mut h = MultiPoly::constant(&AFFINE_VARS, Fe::one());
        for (f, &n) in curves.iter().zip(&exponents) {
            h = &h * &f.pow(n as u32);
        }
        let hx = h.derivative(0);
        let hy = h.derivative(1);
        let g = hx.gcd(&hy);
        let p = (-&hy).div_exact(&g).unwrap();
        let q = hx.div_exact(&g).unwrap();
        return WaiCase { field: AffineVectorField::new(&p, &q).unwrap(), h, curves, exponents };
    }
}

/// The pencil `<F, Z^n>` spanned by the homogenization of a graph curve.
pub fn graph_pencil<R: Rng>(rng: &mut R, max_deg: u32) -> (MultiPoly, MultiPoly, u32) {
    loop {
        let f = graph_curve(rng, max_deg);
        let n = f.total_degree().unwrap();
        if n < 2 {
            continue;
        }
        let big_f = homogenize(&f, n);
        let zn = MultiPoly::monomial(&["X", "Y", "Z"], [0, 0, n, 0, 0, 0], Fe::one());
        return (big_f, zn, n);
    }
}

/// A random local 1-form with a singularity at the origin.
pub fn local_form<R: Rng>(rng: &mut R) -> LocalOneForm {
    let vars = ["x", "y"];
    let mut comps = Vec::new();
    for _ in 0..2 {
        let mut f = MultiPoly::zero(&vars);
        for _ in 0..rng.gen_range(1..=4) {
            let i = rng.gen_range(0..=3);
            let j = rng.gen_range(0..=3);
            if i + j == 0 {
                continue;
            }
            f = &f + &MultiPoly::monomial(&vars, [i, j, 0, 0, 0, 0], Fe::int(nonzero(rng, 3)));
        }
        comps.push(f);
    }
    if comps[0].is_zero() && comps[1].is_zero() {
        comps[0] = MultiPoly::var(&vars, 1);
    }
    let b = comps.pop().unwrap();
    let a = comps.pop().unwrap();
    LocalOneForm::new(a, b)
}

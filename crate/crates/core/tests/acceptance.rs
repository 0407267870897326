//! End-to-end acceptance checks. Prints one line per criterion with its
//! running time and exits non-zero if any fails.

mod common;

use common::{ap, pp};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use num_traits::Zero;
use std::collections::BTreeSet;
use std::time::{Duration, Instant};
use wai_core::blowup::{blow_up_form, multiplicity, Branch, LocalOneForm, PointClass};
use wai_core::exactalg::{parse_poly_in, Fe, MultiPoly};
use wai_core::infnear::{pairing, Configuration, Location, PairingVector};
use wai_core::integrability::{
    candidates, compute_r, cofactors, exponents_darboux, exponents_pairing, finish_darboux, finish_pairing, Halt,
    IntegralCertificate, ReasonCode,
};
use wai_core::linsys::{linear_system, passes_virtually, pencil_base_points, pencil_vector_field, Cluster};
use wai_core::reduction::{reduce, ReduceOptions};
use wai_core::vfield::{AffineVectorField, Chart, ProjectiveOneForm};

type Check = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn opts() -> ReduceOptions {
    ReduceOptions::default()
}

fn cusp_form() -> ProjectiveOneForm {
    ProjectiveOneForm::parse("2*X*Z^4", "5*Y^4*Z", "-(5*Y^5 + 2*X^2*Z^3)").unwrap()
}

fn three_curve_field() -> AffineVectorField {
    AffineVectorField::parse(
        "2*x^6 - x^4 + 6*x^3*y - x^2*y + 4*y^2",
        "-(10*x^7 - 9*x^6 + 6*x^5*y + 9*x^4*y - 6*x^3*y + 6*x^2*y^2 + 2*x*y^2)",
    )
    .unwrap()
}

fn lf(a: &str, b: &str, vars: [&str; 2]) -> LocalOneForm {
    LocalOneForm::new(parse_poly_in(a, &vars).unwrap(), parse_poly_in(b, &vars).unwrap())
}

fn criterion1() -> Check {
    let res = reduce(&cusp_form(), opts()).map_err(|e| e.to_string())?;
    let s = &res.singular_configuration;
    ensure!(s.len() == 18, "S(X) has {} points instead of 18", s.len());
    let p_chain = (1..14).all(|i| s.point(i).parent == Some(i - 1));
    let q_chain = s.point(14).parent.is_none() && (15..18).all(|i| s.point(i).parent == Some(i - 1));
    ensure!(p_chain && q_chain, "Hasse diagram is not the two chains P..P13, Q..Q3");
    ensure!(s.dotted_edges() == vec![(0, 2), (1, 3), (15, 17)], "dotted edges {:?}", s.dotted_edges());
    let d = &res.dicritical_configuration;
    ensure!(d.len() == 14 && (1..14).all(|i| d.point(i).parent == Some(i - 1)), "D(X) is not a 14-point chain");
    ensure!(res.dicritical_singularities() == vec![13], "dicritical points {:?}", res.dicritical_singularities());
    let table = [
        lf("2*x", "5*y^4", ["x", "y"]),
        lf("2*x1*y1", "2*x1^2 + 5*y1^3", ["x1", "y1"]),
        lf("2*x2*y2", "4*x2^2 + 5*y2", ["x2", "y2"]),
        lf("6*x3*y3 + 5*y3^2", "4*x3^2 + 5*x3*y3", ["x3", "y3"]),
    ];
    for (k, want) in table.iter().enumerate() {
        let got = &res.local_forms[14 + k];
        ensure!(got.proportional(want), "form at Q{k}: {got} instead of {want}");
    }
    Ok("S(X) = P..P13 + Q..Q3, dotted P-P2, P1-P3, Q1-Q3; D(X) 14-chain; P13 dicritical; local forms at Q..Q3".into())
}

pub fn four_point_cluster() -> Cluster {
    use wai_core::infnear::InfNearPoint;
    let point = |id, parent, location, level, prox: &[usize]| InfNearPoint {
        id,
        parent,
        location,
        level,
        proximate_to: prox.to_vec(),
        orbit_size: 1,
        conjugate_of: None,
        copy: 0,
        label: format!("P{id}"),
    };
    let plane = |x: i64| Location::Plane { chart: Chart::Z, coords: [Fe::int(x), Fe::zero()] };
    let conf = Configuration::from_points(vec![
        point(0, None, plane(1), 0, &[]),
        point(1, None, plane(0), 0, &[]),
        point(2, Some(1), Location::Divisor { branch: Branch::V1, coordinate: Fe::int(3) }, 1, &[1]),
        point(3, Some(2), Location::Divisor { branch: Branch::V2, coordinate: Fe::zero() }, 2, &[1, 2]),
    ])
    .unwrap();
    Cluster::new(conf, vec![2, 2, 1, 1]).unwrap()
}

fn criterion2() -> Check {
    let k = four_point_cluster();
    let l = linear_system(3, &k).map_err(|e| e.to_string())?;
    let mut got: Vec<String> = l.basis.iter().map(|f| f.normalized().to_string()).collect();
    got.sort();
    let mut want = vec![pp("X*Y^2").to_string(), pp("Y^3").to_string()];
    want.sort();
    ensure!(got == want, "basis {:?}", got);
    ensure!(l.basis.iter().all(|f| passes_virtually(f, &k)), "basis element fails the direct virtual-passage check");
    Ok("L3 = <X*Y^2, Y^3>".into())
}

fn criterion3() -> Check {
    let f1 = pp("X^2*Z^3 + Y^5");
    let f2 = pp("Z^5");
    let bp = pencil_base_points(&f1, &f2, 0).map_err(|e| e.to_string())?;
    let mut want = vec![3, 2];
    want.extend([1; 12]);
    ensure!(bp.cluster.multiplicities == want, "multiplicities {:?}", bp.cluster.multiplicities);
    let omega = pencil_vector_field(&f1, &f2).map_err(|e| e.to_string())?;
    ensure!(omega.proportional(&cusp_form()), "pencil form {omega}");
    let res = reduce(&omega, opts()).map_err(|e| e.to_string())?;
    let d = &res.dicritical_configuration;
    ensure!(bp.cluster.configuration.structurally_equal(d), "BP(L) and D(X_L) differ");
    let flags: Vec<bool> = res.dicritical_classes().iter().map(|c| *c == PointClass::Dicritical).collect();
    ensure!(flags == bp.dicritical, "dicritical flags differ");
    let n2: u64 = bp.cluster.multiplicities.iter().map(|m| m * m).sum();
    ensure!(n2 == 25, "Noether sum {n2}");
    Ok("BP = (D(X), (3,2,1x12)), pencil form = example form, flags agree".into())
}

fn read_matrix() -> Vec<Vec<i64>> {
    include_str!("fixtures/three_curve_s_matrix.txt")
        .lines()
        .map(|l| l.split_whitespace().map(|x| x.parse().unwrap()).collect())
        .collect()
}

fn criterion4() -> Check {
    let v = three_curve_field();
    let cand = candidates(&v, opts()).map_err(|e| e.to_string())?;
    let res = &cand.reduction;
    ensure!(res.dicritical_in_singular == (0..29).collect::<Vec<_>>(), "D(X) = {:?}", res.dicritical_in_singular);
    ensure!(res.dicritical_singularities() == vec![13, 23, 28], "dicriticals {:?}", res.dicritical_singularities());
    ensure!(res.dicritical_infinity_points() == BTreeSet::from([0, 1]), "infinity points {:?}", res.dicritical_infinity_points());
    ensure!(cand.s.matrix() == read_matrix(), "S matrix differs from the fixture");
    let r = compute_r(&cand.s).map_err(|e| e.to_string())?;
    let mut want = vec![6, 4, 2, 2];
    want.extend([1; 20]);
    want.extend([2; 5]);
    ensure!(r == PairingVector::from_ints(10, &want), "R = {r}");
    let curves: Vec<MultiPoly> = cand.curves.iter().map(|c| c.equation.clone()).collect();
    let want_curves = [pp("X^3 - X^2*Z + Y*Z^2"), pp("X^3 + Y*Z^2"), pp("X^2 + Y*Z")];
    ensure!(curves == want_curves, "curves {:?}", curves.iter().map(|c| c.to_string()).collect::<Vec<_>>());
    let (ni, _) = exponents_pairing(&r, &cand.s).map_err(|e| e.to_string())?;
    ensure!(ni == vec![1, 1, 2], "exponents {ni:?}");
    let cert = finish_pairing(&v, &cand).map_err(|e| e.to_string())?;
    ensure!(cert.k == ap("(y - x^2 + x^3)*(y + x^3)*(x^2 + y)^2"), "K = {}", cert.k);
    ensure!(cert.residual.is_zero(), "residual {}", cert.residual);
    Ok(format!("R = {r}, K = {}", cert.k))
}

fn criterion5() -> Check {
    let v = three_curve_field();
    let fs = [ap("y - x^2 + x^3"), ap("y + x^3"), ap("x^2 + y")];
    let ks = cofactors(&v, &fs).map_err(|e| e.to_string())?;
    let want = [ap("2*x*(-x^2 - 4*x^3 + 3*x^4 - 5*y + 3*x*y)"), ap("2*x*(3*x^2 - 5*x^3 + 3*x^4 - y + 3*x*y)"), ap("x*(-2*x^2 + 9*x^3 - 6*x^4 + 6*y - 6*x*y)")];
    ensure!(ks == want, "cofactors {:?}", ks.iter().map(|k| k.to_string()).collect::<Vec<_>>());
    let exps = exponents_darboux(&v, &fs).map_err(|e| e.to_string())?;
    ensure!(exps == vec![1, 1, 2], "lambda = {exps:?}");
    let cand = candidates(&v, opts()).map_err(|e| e.to_string())?;
    let a = finish_pairing(&v, &cand).map_err(|e| e.to_string())?;
    let b = finish_darboux(&v, &cand).map_err(|e| e.to_string())?;
    ensure!(a.factor_multiset() == b.factor_multiset() && a.k == b.k, "routes disagree");
    Ok("cofactors match, lambda = (1,1,2), routes agree".into())
}

/// Checks every identity a certificate and its `R` must satisfy.
fn certificate_invariants(cert: &IntegralCertificate, cand: &wai_core::integrability::Candidates) -> Result<(), String> {
    let r = cert.r.as_ref().ok_or("certificate without R")?;
    ensure!(pairing(r, r).unwrap().is_zero(), "<R,R> != 0");
    for (i, c) in cand.s.c.iter().enumerate() {
        ensure!(pairing(r, c).unwrap().is_zero(), "<R,c_{}> != 0", i + 1);
    }
    for e in &cand.s.e {
        ensure!(pairing(r, e).unwrap().is_zero(), "<R,e_Q> != 0");
    }
    let at_inf: num_rational::BigRational = cand.s.infinity.iter().map(|&p| r.comps[p].clone()).sum();
    ensure!(at_inf == r.v0, "n differs from the sum at infinity");
    let g = r.flat().iter().fold(num_bigint::BigInt::from(0), |g, x| num_integer::Integer::gcd(&g, &x.to_integer()));
    ensure!(g == 1.into(), "gcd(R) = {g}");
    ensure!(cert.residual.is_zero() && cert.cofactor_sum.is_zero(), "dual verification failed");
    ensure!(num_rational::BigRational::from_integer(cert.degree.into()) == r.v0, "degree {} vs n = {}", cert.degree, r.v0);
    Ok(())
}

fn criterion6() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(20_240_601);
    let cases = 100;
    for k in 0..cases {
        let case = common::wai_case(&mut rng, 2, 3);
        let cand = candidates(&case.field, opts()).map_err(|e| format!("case {k} ({}): {e}", case.h))?;
        let cert = finish_pairing(&case.field, &cand).map_err(|e| format!("case {k} ({}): {e}", case.h))?;
        certificate_invariants(&cert, &cand).map_err(|e| format!("case {k}: {e}"))?;
        let other = finish_darboux(&case.field, &cand).map_err(|e| format!("case {k} darboux: {e}"))?;
        ensure!(other.factor_multiset() == cert.factor_multiset(), "case {k}: routes disagree");
    }
    for k in 0..cases {
        let (f1, f2, n) = common::graph_pencil(&mut rng, 5);
        let bp = pencil_base_points(&f1, &f2, k).map_err(|e| e.to_string())?;
        let m = &bp.cluster.multiplicities;
        let sq: u64 = m.iter().map(|x| x * x).sum();
        ensure!(sq == (n * n) as u64, "pencil {f1}: sum of squares {sq} vs {}", n * n);
        let conf = &bp.cluster.configuration;
        for p in 0..conf.len() {
            let s: u64 = conf.proximate_points(p).iter().map(|&q| m[q]).sum();
            ensure!(m[p] >= s, "proximity inequality fails at {p} for {f1}");
        }
    }
    for _ in 0..cases {
        let w = common::local_form(&mut rng);
        let m = multiplicity(&w);
        for branch in [Branch::V1, Branch::V2] {
            let b = blow_up_form(&w, &Fe::zero(), branch).map_err(|e| e.to_string())?;
            ensure!(b.e == m || b.e == m + 1, "e = {} for m = {m}", b.e);
        }
    }
    Ok(format!("{cases} integrable fields, {cases} pencils, {cases} blow-ups"))
}

/// The centre `(-y, x)` with every coefficient of degree at most two
/// perturbed by a seeded draw from `{-3..3} \ {0}`.
fn perturbed_quadratic(seed: u64) -> AffineVectorField {
    use rand::Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut comps = [ap("-y"), ap("x")];
    for c in comps.iter_mut() {
        for (i, j) in [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)] {
            let k = [-3, -2, -1, 1, 2, 3][rng.gen_range(0..6)];
            *c = &*c + &MultiPoly::monomial(&["x", "y"], [i, j, 0, 0, 0, 0], Fe::int(k));
        }
    }
    AffineVectorField::new(&comps[0], &comps[1]).unwrap()
}

fn criterion7() -> Check {
    let v = AffineVectorField::parse("x", "y").unwrap();
    match wai_core::integrability::algorithm1(&v, opts()) {
        Err(Halt::NoIntegral(n)) => ensure!(n.reason == ReasonCode::LineNotInvariant, "radial field reason {}", n.reason),
        other => return Err(format!("radial field gave {other:?}")),
    }
    let perturbed = perturbed_quadratic(7);
    let pert = match wai_core::integrability::algorithm1(&perturbed, opts()) {
        Err(Halt::NoIntegral(n)) => n.reason,
        other => return Err(format!("perturbed field gave {other:?}")),
    };
    let centre = AffineVectorField::parse("-y", "x").unwrap();
    let cand = candidates(&centre, opts()).map_err(|e| e.to_string())?;
    let cert = finish_pairing(&centre, &cand).map_err(|e| e.to_string())?;
    ensure!(cert.degree == 2 && cert.k == ap("x^2 + y^2"), "centre K = {}", cert.k);
    ensure!(cert.factors.len() == 1 && cert.factors[0].conjugates.is_some(), "centre factor not recombined");
    Ok(format!("radial: line-not-invariant; perturbed ({}, {}): {pert}; centre: K = x^2 + y^2", perturbed.p, perturbed.q))
}

fn main() {
    let criteria: [(&str, fn() -> Check, Duration); 7] = [
        ("reduction of the cusp-pencil field", criterion1, Duration::from_secs(10)),
        ("cubics through a cluster", criterion2, Duration::from_secs(1)),
        ("base points of the cusp pencil", criterion3, Duration::from_secs(10)),
        ("pairing route on the three-curve example", criterion4, Duration::from_secs(60)),
        ("cofactor route on the three-curve example", criterion5, Duration::from_secs(10)),
        ("property suites", criterion6, Duration::from_secs(600)),
        ("negative and extension-field controls", criterion7, Duration::from_secs(60)),
    ];
    let mut failed = 0;
    for (k, (name, f, limit)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let out = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let dt = t.elapsed();
        let out = match out {
            Ok(msg) if dt > *limit => Err(format!("{msg}; took longer than {:?}", limit)),
            o => o,
        };
        match out {
            Ok(msg) => println!("criterion {}: PASS [{:>8.3} s] {name}: {msg}", k + 1, dt.as_secs_f64()),
            Err(msg) => {
                failed += 1;
                println!("criterion {}: FAIL [{:>8.3} s] {name}: {msg}", k + 1, dt.as_secs_f64());
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}

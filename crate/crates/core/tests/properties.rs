mod common;

use num_traits::Zero;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use wai_core::blowup::{blow_up_form, char_poly, multiplicity, Branch};
use wai_core::exactalg::{parse_poly_in, Fe, MultiPoly, Rational};
use wai_core::infnear::{pairing, PairingVector};
use wai_core::integrability::{candidates, finish_darboux, finish_pairing};
use wai_core::linsys::{linear_system, passes_virtually, pencil_base_points, Cluster};
use wai_core::reduction::ReduceOptions;
use wai_core::vfield::verify_first_integral;

fn poly_from_terms(terms: &[(u32, u32, i64, i64)]) -> MultiPoly {
    let vars = ["x", "y"];
    let mut f = MultiPoly::zero(&vars);
    for &(i, j, n, d) in terms {
        f = &f + &MultiPoly::monomial(&vars, [i, j, 0, 0, 0, 0], Fe::frac(n, d));
    }
    f
}

fn pv(v0: i64, comps: &[i64]) -> PairingVector {
    PairingVector::from_ints(v0, comps)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn printed_polynomials_parse_back(terms in prop::collection::vec((0u32..6, 0u32..6, -20i64..20, 1i64..7), 0..8)) {
        let f = poly_from_terms(&terms);
        let g = parse_poly_in(&f.to_string(), &["x", "y"]).unwrap();
        prop_assert_eq!(f, g);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn pairing_is_symmetric_and_bilinear(
        a in prop::collection::vec(-9i64..9, 6),
        b in prop::collection::vec(-9i64..9, 6),
        k in -5i64..5,
    ) {
        let x = pv(a[0], &a[1..]);
        let y = pv(b[0], &b[1..]);
        let xy = pairing(&x, &y).unwrap();
        prop_assert_eq!(&xy, &pairing(&y, &x).unwrap());
        let expect: i64 = a[0] * b[0] - a[1..].iter().zip(&b[1..]).map(|(p, q)| p * q).sum::<i64>();
        prop_assert_eq!(&xy, &Rational::from_integer(expect.into()));
        let kx: Vec<i64> = a.iter().map(|t| t * k).collect();
        prop_assert_eq!(pairing(&pv(kx[0], &kx[1..]), &y).unwrap(), xy * Rational::from_integer(k.into()));
    }

    #[test]
    fn blow_up_divides_by_m_or_m_plus_one(seed in any::<u64>(), lam in -3i64..3, v2 in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w = common::local_form(&mut rng);
        let branch = if v2 { Branch::V2 } else { Branch::V1 };
        let center = if v2 { Fe::zero() } else { Fe::int(lam) };
        let m = multiplicity(&w);
        let b = blow_up_form(&w, &center, branch).unwrap();
        let expected = if char_poly(&w).is_zero() { m + 1 } else { m };
        prop_assert_eq!(b.e, expected);
        let vars = b.form.vars();
        let u = MultiPoly::var(&vars, branch.divisor_var()).pow(b.e);
        prop_assert_eq!(&(&b.form.a * &u), &b.total.a);
        prop_assert_eq!(&(&b.form.b * &u), &b.total.b);
        let d = branch.divisor_var();
        let both = b.form.a.valuation_in(d).min(b.form.b.valuation_in(d));
        prop_assert_eq!(both, 0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn linear_system_members_pass_virtually(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (f1, f2, n) = common::graph_pencil(&mut rng, 4);
        let bp = pencil_base_points(&f1, &f2, seed).unwrap();
        let cluster = Cluster::new(bp.cluster.configuration.clone(), bp.cluster.multiplicities.clone()).unwrap();
        let l = linear_system(n, &cluster).unwrap();
        prop_assert!(l.basis.len() >= 2);
        for f in &l.basis {
            prop_assert!(passes_virtually(f, &cluster), "{} fails", f);
        }
        prop_assert!(passes_virtually(&f1, &cluster));
        prop_assert!(passes_virtually(&f2, &cluster));
    }

    #[test]
    fn pencils_satisfy_noether_and_proximity(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (f1, f2, n) = common::graph_pencil(&mut rng, 5);
        let bp = pencil_base_points(&f1, &f2, seed).unwrap();
        let m = &bp.cluster.multiplicities;
        prop_assert_eq!(m.iter().map(|x| x * x).sum::<u64>(), (n * n) as u64);
        let conf = &bp.cluster.configuration;
        for p in 0..conf.len() {
            let s: u64 = conf.proximate_points(p).iter().map(|&q| m[q]).sum();
            prop_assert!(m[p] >= s);
        }
        prop_assert!(bp.dicritical.iter().any(|&d| d));
    }

    #[test]
    fn integrable_fields_are_recognised(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let case = common::wai_case(&mut rng, 3, 3);
        let cand = candidates(&case.field, ReduceOptions::default()).unwrap();
        let a = finish_pairing(&case.field, &cand).unwrap();
        let b = finish_darboux(&case.field, &cand).unwrap();
        prop_assert_eq!(a.factor_multiset(), b.factor_multiset());
        prop_assert_eq!(&a.k, &b.k);
        let r = a.r.as_ref().unwrap();
        prop_assert!(pairing(r, r).unwrap().is_zero());
        prop_assert!(verify_first_integral(&case.field, &a.k).0);
        prop_assert!(a.residual.is_zero() && a.cofactor_sum.is_zero());
        // The generator's H is the integral up to affine change.
        let strip = |f: &MultiPoly| { let m = f.monic(); &m - &m.constant_like(m.constant_term()) };
        prop_assert_eq!(strip(&a.k), strip(&case.h));
        prop_assert!(a.degree >= 1);
    }
}

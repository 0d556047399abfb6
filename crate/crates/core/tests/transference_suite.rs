use ffdioph_core::algebra::{parse_laurent, random_laurent, Field, Laurent, LaurentMat, LaurentVec, Poly};
use ffdioph_core::diophantine::Exponent;
use ffdioph_core::goodmaps::{good_constants, BallSpec, PolyMap};
use ffdioph_core::qpow::{rat, QPow};
use ffdioph_core::transference::{
    check_bz, check_dyson, verify_contraction, verify_intersection, AlphaIndex, CheckStatus, SetFamily, SetFamilyConfig,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn family(n: usize, t: u32, res: u32, theta: &str) -> SetFamily {
    let f = Field::prime(2).unwrap();
    let d = 1;
    SetFamily::new(SetFamilyConfig {
        f: PolyMap::veronese(&f, n),
        v: BallSpec { center: vec![vec![0]; d], radius_exp: -1 },
        theta: parse_laurent(theta, &f).unwrap(),
        omega: rat(2, 1),
        t,
        res,
        good_c: QPow::rational(2, rat(1, 1)),
        kappa: rat(1, 1),
    })
    .unwrap()
}

#[test]
fn intersection_property_on_small_configurations() {
    for theta in ["0", "T^-1 + T^-5", "T^-2"] {
        for (n, t, res) in [(1, 1, 8), (1, 2, 8), (2, 1, 6)] {
            let r = verify_intersection(&family(n, t, res, theta)).unwrap();
            assert!(r.passed(), "{theta} {n} {t}: {:?}", r.violations);
            assert!(r.nontrivial_pairs > 0);
        }
    }
}

#[test]
fn ultrametric_exclusion_of_large_p() {
    // |x| <= e^{-1} on V, so with q = 1 every p != 0 gives |x + p| = |p| >= 1
    let fam = family(1, 0, 6, "0");
    let alphas = fam.enum_alphas().unwrap();
    assert_eq!(alphas.len(), 1);
    assert!(alphas[0].p.is_zero());
    let f = Field::prime(2).unwrap();
    for k in 0..4u64 {
        let a = AlphaIndex { p: Poly::from_index(&f, 1 + k), q: vec![Poly::one(&f)] };
        let s = fam.build_i_set(&a, &rat(1, 2).max(rat(3, 2)));
        assert!(s.certain.is_empty() && s.ambiguous.is_empty());
    }
}

#[test]
fn constructed_membership() {
    // theta = -(x0 q + p) puts the cell of x0 in I
    let f = Field::prime(3).unwrap();
    let x0 = parse_laurent("T^-2 + 2*T^-4", &f).unwrap();
    let theta = x0.neg().add(&Laurent::one(&f).neg());
    let fam = SetFamily::new(SetFamilyConfig {
        f: PolyMap::veronese(&f, 1),
        v: BallSpec { center: vec![vec![0]], radius_exp: -1 },
        theta,
        omega: rat(3, 2),
        t: 1,
        res: 6,
        good_c: QPow::rational(3, rat(1, 1)),
        kappa: rat(1, 1),
    })
    .unwrap();
    let a = AlphaIndex { p: Poly::one(&f), q: vec![Poly::one(&f)] };
    let s = fam.build_i_set(&a, &rat(3, 2));
    let cell = fam.cells.grid.from_digits(&[vec![0, 0, 1, 0, 2, 0]]);
    assert!(s.certain.contains(cell));
}

#[test]
fn contraction_for_the_identity_map() {
    let f = Field::prime(2).unwrap();
    let x = PolyMap::veronese(&f, 1);
    let g = good_constants(&x, &[Laurent::zero(&f), Laurent::one(&f)], &BallSpec::unit(1), 12, &rat(1, 1)).unwrap();
    assert_eq!(g.c_min, QPow::rational(2, rat(1, 1)));
    for t in [2, 3, 4] {
        for theta in ["0", "T^-1 + T^-5"] {
            let r = verify_contraction(&family(1, t, 3 * t + 1, theta)).unwrap();
            assert!(r.passed(), "t={t}: {:?}", r.violations);
            assert!(r.subset_ok);
            assert!(r.summable);
            assert!(r.measured_c <= r.good_c);
            assert_eq!(r.ambiguous_cells, 0);
            assert!(r.alphas.iter().all(|a| a.balls.iter().all(|b| b.margin.as_ref().is_none_or(|m| *m >= QPow::rational(2, rat(1, 1))))));
        }
    }
}

#[test]
fn empty_sets_give_empty_collections() {
    let r = verify_contraction(&family(1, 2, 7, "0")).unwrap();
    assert!(r.alphas.iter().all(|a| !a.balls.is_empty()));
    let fam = family(1, 2, 7, "0");
    let f = Field::prime(2).unwrap();
    let a = AlphaIndex { p: Poly::one(&f), q: vec![Poly::one(&f)] };
    assert!(fam.build_i_set(&a, &rat(2, 1)).certain.is_empty());
}

#[test]
fn bz_inequalities_on_random_instances() {
    let f = Field::prime(2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let tau = 20;
    for i in 0..30 {
        let (m, n) = if i % 2 == 0 { (1, 2) } else { (2, 1) };
        let floor = -(3 * tau as i64 + 8);
        let rows = (0..m).map(|_| (0..n).map(|_| random_laurent(&f, -1, floor, false, &mut rng)).collect()).collect();
        let x = LaurentMat::from_rows(rows).unwrap();
        let theta = LaurentVec((0..m).map(|_| random_laurent(&f, -1, floor, false, &mut rng)).collect());
        let r = check_bz(&x, &theta, tau, &rat(0, 1)).unwrap();
        assert!(!r.violated(), "{r:?}");
    }
}

#[test]
fn trivial_inequality_on_random_pairs() {
    let f = Field::prime(3).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..100 {
        let y = random_laurent(&f, -1, -40, false, &mut rng);
        let th = random_laurent(&f, -1, -40, false, &mut rng);
        let x = LaurentMat::from_rows(vec![vec![y]]).unwrap();
        let r = check_bz(&x, &LaurentVec(vec![th]), 8, &rat(0, 1)).unwrap();
        for c in &r.checks[2..] {
            assert_ne!(c.status, CheckStatus::Violated);
        }
    }
}

#[test]
fn dyson_on_a_quadratic_pair_is_degenerate() {
    // eta = [0; T, T, ...] satisfies eta^2 + T eta - 1 = 0, so 1, eta, eta^2 are
    // dependent: the linear form vanishes and both sides exceed 1
    let f = Field::prime(2).unwrap();
    let floor = -140;
    let t = Laurent::from_poly(&Poly::t(&f));
    let mut eta = Laurent::zero(&f).with_floor(floor);
    for _ in 0..140 {
        eta = t.add(&eta).inv_to(floor).unwrap();
    }
    let y = LaurentVec(vec![eta.clone(), eta.mul(&eta)]);
    let r = check_dyson(&y, 30).unwrap();
    assert_eq!(r.status, CheckStatus::Holds);
    assert!(!r.row.is_one && !r.column.is_one);
    let single = check_dyson(&LaurentVec(vec![eta]), 30).unwrap();
    assert!(single.row.is_one && single.column.is_one);
    assert_eq!(single.column.at_tau_max, Exponent::from_ratio(1, 1));
}

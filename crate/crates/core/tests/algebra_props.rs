use ffdioph_core::algebra::{Degree, Field, Fq, Laurent, Poly, RatFn};
use proptest::prelude::*;

const CASES: u32 = 10_000;
const QS: [u32; 7] = [2, 3, 4, 5, 7, 8, 9];

fn field() -> impl Strategy<Value = Field> {
    prop::sample::select(QS.to_vec()).prop_map(|q| Field::builtin(q).unwrap())
}

fn to_elems(f: &Field, v: Vec<u32>) -> Vec<Fq> {
    v.into_iter().map(|i| f.elem(i).unwrap()).collect()
}

fn elems(f: &Field, k: usize) -> impl Strategy<Value = Vec<Fq>> {
    let g = f.clone();
    prop::collection::vec(0..f.q(), k).prop_map(move |v| to_elems(&g, v))
}

fn poly(f: Field, max_len: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec(0..f.q(), 0..=max_len).prop_map(move |c| Poly::from_coeffs(&f, to_elems(&f, c)))
}

fn nonzero_poly(f: Field, max_len: usize) -> impl Strategy<Value = Poly> {
    (prop::collection::vec(0..f.q(), 0..max_len), 1..f.q()).prop_map(move |(mut c, lead)| {
        c.push(lead);
        Poly::from_coeffs(&f, to_elems(&f, c))
    })
}

/// Exact finite Laurent series with top degree in [-6, 6].
fn laurent(f: Field) -> impl Strategy<Value = Laurent> {
    (-6i64..=6, prop::collection::vec(0..f.q(), 0..10))
        .prop_map(move |(top, c)| Laurent::from_dense(&f, top, to_elems(&f, c), None))
}

/// As `laurent`, with a nonzero leading digit.
fn nonzero_laurent(f: Field) -> impl Strategy<Value = Laurent> {
    (-6i64..=6, 1..f.q(), prop::collection::vec(0..f.q(), 0..9)).prop_map(move |(top, lead, mut c)| {
        c.insert(0, lead);
        Laurent::from_dense(&f, top, to_elems(&f, c), None)
    })
}

fn with_field<S: Strategy, F: Fn(Field) -> S>(g: F) -> impl Strategy<Value = (Field, S::Value)> {
    field().prop_flat_map(move |f| (Just(f.clone()), g(f)))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: CASES, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn field_axioms((f, v) in field().prop_flat_map(|f| (Just(f.clone()), elems(&f, 3)))) {
        let (a, b, c) = (v[0], v[1], v[2]);
        prop_assert_eq!(f.add(a, b), f.add(b, a));
        prop_assert_eq!(f.mul(a, b), f.mul(b, a));
        prop_assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.add(a, f.neg(a)), Fq::ZERO);
        prop_assert_eq!(f.mul(a, f.from_int(1)), a);
        if !a.is_zero() {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), f.from_int(1));
        } else {
            prop_assert!(f.inv(a).is_err());
        }
        // Frobenius is additive
        let p = f.p();
        let frob = |x: Fq| (1..p).fold(x, |acc, _| f.mul(acc, x));
        prop_assert_eq!(frob(f.add(a, b)), f.add(frob(a), frob(b)));
    }

    #[test]
    fn ultrametric((f, (a, b)) in with_field(|f| (laurent(f.clone()), laurent(f)))) {
        let (da, db) = (a.degree().unwrap(), b.degree().unwrap());
        let ds = a.add(&b).degree().unwrap();
        prop_assert!(ds <= da.max(db));
        if da != db {
            prop_assert_eq!(ds, da.max(db));
        }
        prop_assert_eq!(a.sub(&b).add(&b), a.clone());
        let _ = f;
    }

    #[test]
    fn multiplicativity((_f, (a, b)) in with_field(|f| (laurent(f.clone()), laurent(f)))) {
        let prod = a.mul(&b);
        prop_assert_eq!(prod.degree().unwrap(), a.degree().unwrap() + b.degree().unwrap());
        prop_assert_eq!(prod.clone(), b.mul(&a));
    }

    #[test]
    fn polynomial_ring((f, (a, b, c)) in with_field(|f| (poly(f.clone(), 6), poly(f.clone(), 6), poly(f, 4)))) {
        prop_assert_eq!((&a * &b).deg(), a.deg() + b.deg());
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        if !b.is_zero() {
            let (quo, rem) = a.divmod(&b).unwrap();
            prop_assert_eq!(&(&quo * &b) + &rem, a.clone());
            prop_assert!(rem.deg() < b.deg());
        }
        let g = a.gcd(&b);
        if !g.is_zero() {
            prop_assert!(a.rem(&g).unwrap().is_zero());
            prop_assert!(b.rem(&g).unwrap().is_zero());
        }
        let (g2, s, t) = a.xgcd(&b);
        prop_assert_eq!(&(&s * &a) + &(&t * &b), g2);
        let _ = f;
    }

    #[test]
    fn inverse_to_precision((f, a) in with_field(nonzero_laurent)) {
        let inv = a.inv_to(-30).unwrap();
        let one = a.mul(&inv);
        // agrees with 1 down to the product's floor
        let diff = one.sub(&Laurent::one(&f));
        prop_assert!(diff.degree().is_err() || diff.degree().unwrap() == Degree::NegInf);
        if let Some(fl) = one.floor() {
            prop_assert!(fl <= -30 + a.degree().unwrap().finite().unwrap() + 1);
        }
    }

    #[test]
    fn rational_expansion((f, (n, d)) in with_field(|f| (poly(f.clone(), 5), nonzero_poly(f, 5)))) {
        let r = RatFn::new(n.clone(), d.clone()).unwrap();
        let x = Laurent::from_rational(&r, -25).unwrap();
        // d * x - n vanishes to the floor
        let back = x.mul_poly(&d).sub(&Laurent::from_poly(&n));
        prop_assert!(back.degree().is_err() || back.degree().unwrap() == Degree::NegInf);
        if !n.is_zero() {
            prop_assert_eq!(x.degree().unwrap(), n.deg() + (-d.deg().finite().unwrap()));
            let prod = r.mul(&r.inv().unwrap());
            prop_assert_eq!(prod, RatFn::from_poly(Poly::one(&f)));
        }
    }

    #[test]
    fn precision_is_sound((f, (a, b, k)) in with_field(|f| (laurent(f.clone()), laurent(f), -12i64..0))) {
        // truncating the inputs never contradicts the exact result
        let (ta, tb) = (a.with_floor(k), b.with_floor(k));
        for (exact, approx) in [(a.add(&b), ta.add(&tb)), (a.mul(&b), ta.mul(&tb))] {
            let floor = approx.floor().unwrap();
            for d in floor..=8 {
                prop_assert_eq!(exact.coeff(d).unwrap(), approx.coeff(d).unwrap());
            }
            prop_assert!(exact.degree().unwrap() <= approx.degree_bound());
        }
        let _ = f;
    }
}

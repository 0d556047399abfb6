use ffdioph_core::algebra::{Degree, Field, Laurent, LaurentVec, Poly};
use ffdioph_core::error::Error;
use ffdioph_core::polylattice::{closest_vector, shifted_distance, shortest_vector, successive_minima, weak_popov, PolyMat, Shift};
use proptest::prelude::*;

const CASES: u32 = 10_000;

fn field() -> impl Strategy<Value = Field> {
    prop::sample::select(vec![2u32, 3]).prop_map(|q| Field::prime(q).unwrap())
}

fn poly(f: Field, max_deg: usize) -> impl Strategy<Value = Poly> {
    let q = f.q() as u64;
    (0..q.pow(max_deg as u32 + 1)).prop_map(move |i| Poly::from_index(&f, i))
}

/// Field, a k x k matrix with entries of degree <= 3 and a shift in [-2, 2]^k.
fn instance() -> impl Strategy<Value = (Field, PolyMat, Shift)> {
    (field(), 1usize..=3).prop_flat_map(|(f, k)| {
        let g = f.clone();
        (
            Just(f.clone()),
            prop::collection::vec(prop::collection::vec(poly(f, 3), k), k),
            prop::collection::vec(-2i64..=2, k),
        )
            .prop_map(move |(f, rows, s)| (f, PolyMat::new(&g, rows).unwrap(), Shift(s)))
    })
}

fn sdeg(row: &[Poly], s: &[i64]) -> Degree {
    row.iter().zip(s).map(|(p, &w)| p.deg() + w).max().unwrap_or(Degree::NegInf)
}

fn combine(f: &Field, coeffs: &[Poly], rows: &[Vec<Poly>]) -> Vec<Poly> {
    let k = rows[0].len();
    let mut out = vec![Poly::zero(f); k];
    for (c, r) in coeffs.iter().zip(rows) {
        for j in 0..k {
            out[j] = &out[j] + &(c * &r[j]);
        }
    }
    out
}

/// Every coefficient vector with entry degrees bounded by `bounds` (negative: zero only).
fn all_coeffs(f: &Field, bounds: &[i64]) -> Vec<Vec<Poly>> {
    let mut acc = vec![Vec::new()];
    for &b in bounds {
        let count = if b < 0 { 1 } else { (f.q() as u64).pow(b as u32 + 1) };
        acc = acc
            .into_iter()
            .flat_map(|v| {
                (0..count).map(move |i| {
                    let mut w = v.clone();
                    w.push(Poly::from_index(f, i));
                    w
                })
            })
            .collect();
    }
    acc
}

proptest! {
    #![proptest_config(ProptestConfig { cases: CASES, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn reduction_invariants((f, m, s) in instance()) {
        let det = m.det().unwrap();
        let r = match weak_popov(&m, &s) {
            Ok(r) => r,
            Err(Error::RankDeficient) => {
                prop_assert!(det.is_zero());
                return Ok(());
            }
            Err(e) => return Err(TestCaseError::fail(e.to_string())),
        };
        prop_assert!(!det.is_zero());
        let um = r.transform.mul(&m).unwrap();
        prop_assert_eq!(um.rows(), r.reduced.rows());
        prop_assert_eq!(r.transform.det().unwrap().deg(), Degree::from(0));

        let mut cols: Vec<usize> = r.pivots.iter().map(|p| p.0).collect();
        cols.sort_unstable();
        cols.dedup();
        prop_assert_eq!(cols.len(), r.pivots.len());
        for (row, &(j, d)) in r.reduced.rows().iter().zip(&r.pivots) {
            prop_assert_eq!(sdeg(row, &s.0), Degree::from(d));
            // pivot is the rightmost column attaining the degree
            prop_assert_eq!(row[j].deg() + s.0[j], Degree::from(d));
            for jj in j + 1..row.len() {
                prop_assert!(row[jj].deg() + s.0[jj] < Degree::from(d));
            }
        }
        let sum: i64 = r.row_degrees().iter().sum::<i64>();
        prop_assert_eq!(Degree::from(sum), det.deg() + s.0.iter().sum::<i64>());
        let _ = f;
    }

    #[test]
    fn predictable_degree(((f, m, s), seeds) in (instance(), prop::collection::vec(0u64..27, 3))) {
        let Ok(r) = weak_popov(&m, &s) else { return Ok(()) };
        let k = m.nrows();
        let c: Vec<Poly> = seeds[..k].iter().map(|&i| Poly::from_index(&f, i)).collect();
        let v = combine(&f, &c, r.reduced.rows());
        let expect = c.iter().zip(r.row_degrees()).map(|(ci, d)| ci.deg() + d).max().unwrap();
        prop_assert_eq!(sdeg(&v, &s.0), expect);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 2_000, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn shortest_vector_by_enumeration((f, m, s) in instance()) {
        let Ok(r) = weak_popov(&m, &s) else { return Ok(()) };
        let (v, d) = shortest_vector(&r);
        prop_assert_eq!(sdeg(&v, &s.0), Degree::from(d));
        prop_assert_eq!(successive_minima(&r)[0], d);
        // combinations of the input rows: none beats d
        let k = m.nrows();
        let bound = if k == 3 { 1 } else { 2 };
        for c in all_coeffs(&f, &vec![bound; k]) {
            if c.iter().all(|p| p.is_zero()) {
                continue;
            }
            let w = combine(&f, &c, m.rows());
            prop_assert!(sdeg(&w, &s.0) >= Degree::from(d));
        }
    }

    #[test]
    fn closest_vector_by_enumeration(
        ((f, m, s), ws) in (instance(), prop::collection::vec((0u64..256, 0u64..16), 3))
    ) {
        let Ok(r) = weak_popov(&m, &s) else { return Ok(()) };
        let k = m.nrows();
        // target: a polynomial part of degree <= 7 plus fractional digits
        let w = LaurentVec(
            ws[..k]
                .iter()
                .map(|&(a, b)| {
                    let int = Laurent::from_poly(&Poly::from_index(&f, a % (f.q() as u64).pow(4)));
                    let frac = Laurent::from_poly(&Poly::from_index(&f, b)).shift(-4);
                    int.add(&frac)
                })
                .collect(),
        );
        let (_, dist) = closest_vector(&r, &w).unwrap();
        let zeros = vec![0; k];
        // a closer vector has sdeg(v) <= sdeg(w), hence deg c_i + d_i <= sdeg(w)
        let top = w.0.iter().zip(&s.0).map(|(x, &sj)| x.degree().unwrap() + sj).max().unwrap();
        let top = top.finite().unwrap_or(0).max(0);
        let bounds: Vec<i64> = r.row_degrees().iter().map(|d| top - d).collect();
        if (f.q() as f64).powi(bounds.iter().map(|&b| b.max(-1) + 1).sum::<i64>() as i32) > 4096.0 {
            return Ok(());
        }
        for c in all_coeffs(&f, &bounds) {
            let v = combine(&f, &c, r.reduced.rows());
            let d = shifted_distance(&w, &v, &zeros, &s.0).unwrap();
            prop_assert!(d >= dist);
        }
    }
}

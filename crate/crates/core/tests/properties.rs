use kleinrec::catalog::{catalog_get, sl2, sl3};
use kleinrec::cohomology::ce_differential;
use kleinrec::exact::{Mat, Poly, Scalar};
use kleinrec::lie::{check_jacobi, IsotropyData, LieAlgebra, StructureConstants};
use kleinrec::reconstruction::{constraint_residuals, gauge_shift, BracketCandidate, Context};
use proptest::prelude::*;

fn scalar() -> impl Strategy<Value = Scalar> {
    (-20i64..=20, 1i64..=9).prop_map(|(n, d)| Scalar::new(n, d))
}

fn nonzero() -> impl Strategy<Value = Scalar> {
    scalar().prop_filter("nonzero", |s| !s.is_zero())
}

fn vector(n: usize) -> impl Strategy<Value = Vec<Scalar>> {
    prop::collection::vec(scalar(), n)
}

const ENTRIES: [&str; 5] = [
    "sl2-borel",
    "sl3-borel",
    "sl3-cartan",
    "sl2-standard",
    "sol2-almost-complex-4d",
];

fn data(i: usize) -> IsotropyData {
    catalog_get(ENTRIES[i]).unwrap().isotropy().unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms(a in scalar(), b in scalar(), c in scalar()) {
        prop_assert_eq!(&(&a + &b) - &b, a.clone());
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        if !b.is_zero() {
            prop_assert_eq!(&(&a / &b) * &b, a.clone());
        }
    }

    #[test]
    fn scalar_text_round_trip(a in scalar()) {
        prop_assert_eq!(a.to_string().parse::<Scalar>().unwrap(), a);
    }

    #[test]
    fn poly_product_evaluates_pointwise(a in vector(3), b in vector(3), x in vector(2)) {
        // p, q affine in two variables, so p*q stays within the degree cap
        let affine = |c: &[Scalar]| {
            Poly::constant(c[0].clone()).add(&Poly::linear(0, c[1].clone())).add(&Poly::linear(1, c[2].clone()))
        };
        let (p, q) = (affine(&a), affine(&b));
        let pq = p.checked_mul(&q).unwrap();
        prop_assert!(pq.degree() <= 2);
        prop_assert_eq!(pq.eval(&x), &p.eval(&x) * &q.eval(&x));
    }

    #[test]
    fn rank_plus_nullity(rows in prop::collection::vec(vector(5), 1..5)) {
        let m = Mat::from_rows(rows).unwrap();
        let (rank, kernel) = kleinrec::exact::rank_kernel(&m);
        prop_assert_eq!(rank + kernel.len(), 5);
        for v in &kernel {
            prop_assert!(m.apply(v).iter().all(Scalar::is_zero));
        }
    }

    #[test]
    fn structure_constants_stay_antisymmetric(entries in prop::collection::vec((0usize..4, 0usize..4, 0usize..4, nonzero()), 0..10)) {
        let mut sc = StructureConstants::<Scalar>::zero(4);
        for (i, j, k, v) in entries {
            if i != j {
                sc.set(i, j, k, v);
            }
        }
        for i in 0..4 {
            for j in 0..4 {
                for k in 0..4 {
                    prop_assert_eq!(sc.get(i, j, k), &-sc.get(j, i, k));
                }
            }
        }
    }

    #[test]
    fn differential_squares_to_zero(entry in 0usize..ENTRIES.len(), module in 0usize..3, seed in vector(64)) {
        let d = data(entry);
        let v = [d.hom_m_h(), d.wedge_m_to_m(), d.wedge_m_to_h()][module].clone();
        prop_assume!(d.h_dim() >= 2);
        let d0 = ce_differential(d.h(), &v, 0).unwrap();
        let d1 = ce_differential(d.h(), &v, 1).unwrap();
        let c: Vec<Scalar> = seed.iter().cycle().take(d0.cols()).cloned().collect();
        prop_assert!(d1.apply(&d0.apply(&c)).iter().all(Scalar::is_zero));
    }

    #[test]
    fn gauge_shift_preserves_the_algebra(sigma in vector(6 * 5), pick in 0usize..3) {
        // (algebra, h indices)
        let (g, h): (LieAlgebra, Vec<usize>) = match pick {
            0 => (sl2(), vec![0]),
            1 => (sl2(), vec![0, 1]),
            _ => (sl3(), vec![0, 1, 2, 3, 4]),
        };
        let c = BracketCandidate::from_algebra(&g, &h).unwrap();
        let (a, b) = (h.len(), g.dim() - h.len());
        let shifted = gauge_shift(&c, &sigma[..a * b]).unwrap();
        prop_assert!(check_jacobi(&shifted.assemble()).is_ok());
        let ctx = Context::new(c.data.clone());
        prop_assert!(constraint_residuals(&ctx, &shifted).unwrap().all_zero());
    }
}

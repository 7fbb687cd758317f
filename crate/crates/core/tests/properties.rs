use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use secant_core::curve::catalog::Catalog;
use secant_core::curve::riemann_roch::{h1, rr_dim};
use secant_core::curve::sampling::random_class;
use secant_core::curve::{Divisor, PlaneCurve};
use secant_core::field::{Elem, Field};
use secant_core::koszul::wedge::{colex_rank, colex_unrank, wedge_basis};
use secant_core::koszul::{KoszulComplex, Limits};
use secant_core::linalg::Matrix;
use secant_core::predict::{binomial, multiset, sym_product_dims};

fn quartic() -> PlaneCurve {
    Catalog::shipped().curve("fermat-quartic-101").unwrap()
}

fn gf49() -> Field {
    Field::extension(7, 2).unwrap()
}

proptest! {
    #[test]
    fn field_axioms(a in 0u64..49, b in 0u64..49, c in 0u64..49) {
        let f = gf49();
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.add(a, f.neg(a)), 0);
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        if a != 0 {
            prop_assert_eq!(f.mul(a, f.inv(a)), f.one());
        }
        prop_assert_eq!(f.pow(a, 49), a);
    }

    #[test]
    fn colex_round_trip(n in 1usize..12, seed in any::<u64>()) {
        let p = (seed as usize) % (n + 1);
        let basis = wedge_basis(n, p);
        prop_assert_eq!(basis.len() as u128, binomial(n as i64, p as i64));
        for (i, w) in basis.iter().enumerate() {
            prop_assert_eq!(colex_rank(w.indices()), i);
            prop_assert_eq!(colex_unrank(i, p).indices().to_vec(), w.indices().to_vec());
        }
    }

    #[test]
    fn rank_nullity(rows in 1usize..9, cols in 1usize..9, data in prop::collection::vec(0u64..13, 81)) {
        let f = Field::prime(13).unwrap();
        let entries: Vec<Vec<Elem>> = (0..rows).map(|r| data[r * 9..r * 9 + cols].to_vec()).collect();
        let m = Matrix::from_rows(&f, cols, entries).unwrap();
        let kernel = m.kernel_basis();
        prop_assert_eq!(m.rank() + kernel.len(), cols);
        prop_assert_eq!(m.rank(), m.transpose().rank());
        for v in &kernel {
            prop_assert!(m.mul_vec(v).iter().all(|&x| x == 0));
        }
    }

    #[test]
    fn pascal_and_symmetric_powers(n in 0i64..30, k in 0i64..30) {
        prop_assert_eq!(binomial(n + 1, k + 1), binomial(n, k) + binomial(n, k + 1));
        prop_assert_eq!(multiset(n + 1, k), binomial(n + k, k));
        prop_assert_eq!(sym_product_dims(k, 0, n, 0), (binomial(n, k), multiset(n, k)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn divisor_display_round_trips(seed in any::<u64>(), deg in -4i64..12) {
        let curve = quartic();
        let d = random_class(&curve, deg, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        let back = Divisor::parse(&curve, &d.to_string()).unwrap();
        prop_assert_eq!(back.degree(4), deg);
        prop_assert_eq!(back, d);
    }

    #[test]
    fn riemann_roch_identity(seed in any::<u64>(), deg in -3i64..11) {
        let curve = quartic();
        let d = random_class(&curve, deg, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        let (h0, h1) = (rr_dim(&curve, &d).unwrap() as i64, h1(&curve, &d).unwrap() as i64);
        prop_assert_eq!(h0 - h1, deg - 3 + 1);
        if deg < 0 {
            prop_assert_eq!(h0, 0);
        }
        if deg > 4 {
            prop_assert_eq!(h1, 0);
        }
    }

    #[test]
    fn koszul_differential_squares_to_zero(seed in any::<u64>(), dl in 3i64..8, db in -2i64..4, p in 1usize..4, q in 0i64..3) {
        let curve = quartic();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let l = random_class(&curve, dl, &mut rng).unwrap();
        let b = random_class(&curve, db, &mut rng).unwrap();
        let k = KoszulComplex::new(&curve, &b, &l, Limits::default()).unwrap();
        let (outer, inner) = (k.matrix(p, q).unwrap(), k.matrix(p + 1, q - 1).unwrap());
        prop_assert!(outer.mul(&inner).unwrap().is_zero());
    }

    /// Duality `K_{p,1}(L, L) = K_{g-1,1}(K - L, L)` for nonspecial L.
    #[test]
    fn duality_on_quartic(seed in any::<u64>(), p in 0usize..3) {
        let curve = quartic();
        let l = random_class(&curve, 6 + p as i64, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        prop_assume!(h1(&curve, &l).unwrap() == 0);
        let lhs = KoszulComplex::new(&curve, &l, &l, Limits::default()).unwrap().cohomology_dim(p, 1).unwrap();
        let dual = Divisor::canonical(&curve).sub(&l);
        let rhs = KoszulComplex::new(&curve, &dual, &l, Limits::default()).unwrap().cohomology_dim(2, 1).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}

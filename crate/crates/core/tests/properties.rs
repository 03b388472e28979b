//! Property tests for the exact kernels and the product algebra.

use std::sync::{Arc, OnceLock};

use poring_lab::etale::{Ambient, Element, NumberField, ProductAlgebra};
use poring_lab::exact::rational::{frac, int, Rational};
use poring_lab::exact::{real_roots, sign_at, Poly, Sign};
use poring_lab::lp::{grid_search, Relation, SignSystem};
use proptest::prelude::*;

fn field(ints: &[i64]) -> NumberField {
    NumberField::new("K", Poly::from_ints(ints)).unwrap()
}

fn fields() -> &'static [NumberField] {
    static FIELDS: OnceLock<Vec<NumberField>> = OnceLock::new();
    FIELDS.get_or_init(|| {
        vec![
            field(&[-2, 0, 1]),
            field(&[-2, 0, 0, 1]),
            field(&[1, -3, 0, 1]),
            field(&[1, 0, -10, 0, 1]),
            field(&[-2, 0, 0, 0, 1]),
        ]
    })
}

fn poly(max_len: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec((-9i64..=9, 1i64..=4), 0..=max_len)
        .prop_map(|c| Poly::new(c.into_iter().map(|(n, d)| frac(n, d)).collect()))
}

fn nonzero_poly(max_len: usize) -> impl Strategy<Value = Poly> {
    poly(max_len).prop_filter("nonzero", |p| !p.is_zero())
}

fn ambient() -> Ambient {
    static AMBIENT: OnceLock<Ambient> = OnceLock::new();
    AMBIENT
        .get_or_init(|| {
            let f = fields();
            Arc::new(
                ProductAlgebra::new(vec![f[0].clone(), NumberField::rationals(), f[3].clone()])
                    .unwrap(),
            )
        })
        .clone()
}

fn element() -> impl Strategy<Value = Element> {
    (poly(2), poly(1), poly(4)).prop_map(|(a, b, c)| ambient().element(vec![a, b, c]).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn division_with_remainder(a in poly(7), b in nonzero_poly(4)) {
        let (q, r) = a.div_rem(&b);
        prop_assert_eq!(&(&q * &b) + &r, a);
        prop_assert!(r.degree().is_none_or(|d| d < b.degree().unwrap()));
    }

    #[test]
    fn gcd_divides_both(a in nonzero_poly(5), b in nonzero_poly(5), c in nonzero_poly(3)) {
        let (x, y) = (&a * &c, &b * &c);
        let g = Poly::gcd(&x, &y);
        prop_assert!(x.rem(&g).is_zero() && y.rem(&g).is_zero());
        prop_assert!(g.rem(&c.monic()).is_zero());
    }

    #[test]
    fn distinct_rational_roots_are_counted(
        roots in prop::collection::btree_set((-12i64..=12, 1i64..=3), 1..=6)
    ) {
        let mut values: Vec<Rational> = roots.iter().map(|&(n, d)| frac(n, d)).collect();
        values.sort();
        values.dedup();
        let f = values
            .iter()
            .fold(Poly::one(), |acc, r| &acc * &Poly::new(vec![-r.clone(), int(1)]));
        let found = real_roots(&f).unwrap();
        prop_assert_eq!(found.len(), values.len());
        for (root, v) in found.iter().zip(&values) {
            prop_assert!(root.lo() <= v && v <= root.hi());
        }
    }

    #[test]
    fn field_signs_match_exact_signs(k in 0usize..5, a in poly(4)) {
        let f = &fields()[k];
        let a = f.reduce(&a);
        for (e, root) in f.real_roots().iter().enumerate() {
            prop_assert_eq!(f.sign(&a, e), sign_at(&a, root));
            let (lo, hi) = f.enclosure(&a, e);
            prop_assert!(Sign::of(&lo) <= sign_at(&a, root) && sign_at(&a, root) <= Sign::of(&hi));
        }
    }

    #[test]
    fn field_inverses(k in 0usize..5, a in nonzero_poly(4)) {
        let f = &fields()[k];
        let a = f.reduce(&a);
        prop_assume!(!a.is_zero());
        let inv = f.inverse(&a).unwrap();
        prop_assert_eq!(f.mul(&a, &inv), Poly::one());
    }

    #[test]
    fn product_algebra_is_a_commutative_ring(x in element(), y in element(), z in element()) {
        let amb = ambient();
        prop_assert_eq!(amb.mul(&x, &y), amb.mul(&y, &x));
        prop_assert_eq!(amb.mul(&amb.mul(&x, &y), &z), amb.mul(&x, &amb.mul(&y, &z)));
        prop_assert_eq!(amb.mul(&x, &amb.add(&y, &z)), amb.add(&amb.mul(&x, &y), &amb.mul(&x, &z)));
        prop_assert_eq!(amb.mul(&x, &amb.one()), x.clone());
        prop_assert!(amb.add(&x, &amb.neg(&x)).is_zero());
    }

    #[test]
    fn quasi_inverse_is_von_neumann(x in element()) {
        let amb = ambient();
        let q = amb.quasi_inverse(&x);
        prop_assert_eq!(amb.mul(&amb.mul(&x, &q), &x), x.clone());
        prop_assert_eq!(amb.mul(&amb.mul(&q, &x), &q), q);
    }

    #[test]
    fn lp_witnesses_satisfy_their_systems(
        rows in prop::collection::vec((prop::collection::vec(-3i64..=3, 3), 0u8..3), 1..=4),
        strict in 0usize..4,
    ) {
        let rows: Vec<(Vec<i64>, Relation)> = rows
            .into_iter()
            .map(|(c, r)| (c, [Relation::Geq, Relation::Leq, Relation::Eq][r as usize]))
            .collect();
        let strict = vec![strict % rows.len()];
        let s = SignSystem::rational(3, &rows, strict).unwrap();
        let result = s.feasible().unwrap();
        match &result.witness {
            Some(x) => prop_assert!(result.feasible && s.satisfied_by(x)),
            None => prop_assert!(!result.feasible && grid_search(&s, 6).is_none()),
        }
    }
}

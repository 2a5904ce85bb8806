use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::Rng;

use toric_nk::algebra::{parse_poly, Mat3};
use toric_nk::potential::{c_vv, epsilon_squared, star_operator, star_residual};
use toric_nk::sampling;
use toric_nk::{phi0, Monomial, Poly3, Scalar};

fn scalar() -> impl Strategy<Value = Scalar> {
    (-20i64..=20, 1i64..=12, -20i64..=20, 1i64..=12).prop_map(|(an, ad, bn, bd)| Scalar::from_parts(an, ad, bn, bd))
}

fn monomial(max_deg: u32) -> impl Strategy<Value = Monomial> {
    (0..=max_deg, 0..=max_deg, 0..=max_deg)
        .prop_filter("degree bound", move |(a, b, c)| a + b + c <= max_deg)
        .prop_map(|(a, b, c)| Monomial([a, b, c]))
}

fn poly(max_deg: u32, max_terms: usize) -> impl Strategy<Value = Poly3> {
    prop::collection::vec((monomial(max_deg), scalar()), 0..=max_terms).prop_map(Poly3::from_terms)
}

fn homogeneous(k: u32) -> impl Strategy<Value = Poly3> {
    let mons = Monomial::of_degree(k);
    prop::collection::vec(scalar(), mons.len()).prop_map(move |cs| Poly3::from_terms(mons.clone().into_iter().zip(cs)))
}

fn point() -> impl Strategy<Value = [f64; 3]> {
    [-1.5f64..1.5, -1.5f64..1.5, -1.5f64..1.5]
}

fn exact_point() -> impl Strategy<Value = [Scalar; 3]> {
    [scalar(), scalar(), scalar()]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn scalar_field_laws(x in scalar(), y in scalar(), z in scalar()) {
        prop_assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        prop_assert_eq!(&x * &y, &y * &x);
        match x.inverse() {
            Some(inv) => prop_assert_eq!(&x * &inv, Scalar::one()),
            None => prop_assert!(x.is_zero()),
        }
    }

    #[test]
    fn scalar_order_matches_float(x in scalar(), y in scalar()) {
        let (fx, fy) = (x.to_f64(), y.to_f64());
        if (fx - fy).abs() > 1e-9 {
            prop_assert_eq!(x < y, fx < fy);
        }
    }

    #[test]
    fn poly_ring_laws(p in poly(5, 6), q in poly(5, 6), r in poly(3, 4)) {
        prop_assert_eq!(p.add(&q), q.add(&p));
        prop_assert_eq!(p.mul(&q), q.mul(&p));
        prop_assert_eq!(p.mul(&q.add(&r)), p.mul(&q).add(&p.mul(&r)));
        prop_assert_eq!(p.mul(&q).mul(&r), p.mul(&q.mul(&r)));
        prop_assert!(p.sub(&p).is_zero());
    }

    #[test]
    fn product_evaluates_pointwise(p in poly(5, 6), q in poly(5, 6), x in point(), e in exact_point()) {
        let pq = p.mul(&q);
        let (a, b) = (pq.eval(x), p.eval(x) * q.eval(x));
        prop_assert!((a - b).abs() <= 1e-9 * (1.0 + b.abs()));
        prop_assert_eq!(pq.eval_exact(&e), &p.eval_exact(&e) * &q.eval_exact(&e));
    }

    #[test]
    fn euler_identity((k, p) in (0u32..=6).prop_flat_map(|k| (Just(k), homogeneous(k)))) {
        prop_assert_eq!(p.euler(), p.scale(&Scalar::int(k as i64)));
    }

    #[test]
    fn print_parse_round_trip(p in poly(5, 8)) {
        prop_assert_eq!(parse_poly(&p.to_string()).unwrap(), p);
    }

    #[test]
    fn adjugate_identity(entries in prop::collection::vec(poly(2, 3), 9)) {
        let m = Mat3::from_fn(|i, j| entries[3 * i + j].clone());
        let det_i = Mat3::identity().scale(&m.det());
        prop_assert_eq!(m.mul(&m.adj()), det_i.clone());
        prop_assert_eq!(m.adj().mul(&m), det_i);
    }

    #[test]
    fn polarized_det_is_first_order_term(n in prop::collection::vec(poly(2, 3), 9), m in prop::collection::vec(poly(2, 3), 9)) {
        let n = Mat3::from_fn(|i, j| n[3 * i + j].clone());
        let m = Mat3::from_fn(|i, j| m[3 * i + j].clone());
        // det(N + tM) is a cubic in t; recover its t-coefficient from t = -1, 0, 1, 2
        let at = |t: i64| n.add(&m.scale(&Poly3::constant(Scalar::int(t)))).det();
        let d1 = at(-1).scale(&Scalar::int(-2))
            .sub(&at(0).scale(&Scalar::int(3)))
            .add(&at(1).scale(&Scalar::int(6)))
            .sub(&at(2))
            .scale(&Scalar::ratio(1, 6));
        prop_assert_eq!(n.polarized_det(&m), d1);
    }

    #[test]
    fn operator_identity(p in poly(5, 8)) {
        prop_assert_eq!(epsilon_squared(&p).add(&c_vv(&p)), star_operator(&p));
    }

    #[test]
    fn radial_monotonicity_identity(p in poly(5, 8)) {
        prop_assert_eq!(epsilon_squared(&p).euler(), c_vv(&p).scale(&Scalar::ratio(-8, 3)));
    }

    #[test]
    fn unimodular_substitution_preserves_solution(
        perm in Just([0usize, 1, 2]).prop_shuffle(),
        signs in [any::<bool>(), any::<bool>(), any::<bool>()],
        shear in (-3i64..=3, 1i64..=4, 0usize..3, 0usize..3),
    ) {
        // signed permutation with det +-1, then a rational shear with det 1
        let mut t: [[Scalar; 3]; 3] = Default::default();
        for i in 0..3 {
            t[i][perm[i]] = if signs[i] { Scalar::int(-1) } else { Scalar::int(1) };
        }
        let (n, d, r, c) = shear;
        let mut s: [[Scalar; 3]; 3] = std::array::from_fn(|i| std::array::from_fn(|j| if i == j { Scalar::one() } else { Scalar::zero() }));
        if r != c {
            s[r][c] = Scalar::ratio(n, d);
        }
        let ts: [[Scalar; 3]; 3] = std::array::from_fn(|i| std::array::from_fn(|j| {
            (0..3).fold(Scalar::zero(), |acc, k| &acc + &(&t[i][k] * &s[k][j]))
        }));
        prop_assert!(star_residual(&phi0().compose_linear(&ts)).is_zero());
    }
}

#[test]
fn scalar_field_laws_bulk() {
    let mut rng = sampling::rng(2024);
    let mut draw = || {
        Scalar::from_parts(
            rng.random_range(-50..=50),
            rng.random_range(1..=30),
            rng.random_range(-50..=50),
            rng.random_range(1..=30),
        )
    };
    for _ in 0..10_000 {
        let (x, y, z) = (draw(), draw(), draw());
        assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        if let Some(inv) = x.inverse() {
            assert_eq!(&x * &inv, Scalar::one());
        } else {
            assert!(x.is_zero());
        }
    }
}

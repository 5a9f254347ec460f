//! Property tests for the algebraic invariants of the engine.

use std::sync::Arc;

use num_rational::BigRational;
use proptest::prelude::*;
use qdilog::exactalg::{binomial, gauss_binomial, is_palindromic_unimodal, LaurentPoly, QCoeff};
use qdilog::motivic::{phi_power, DilogSpec};
use qdilog::quiver::{admissible_order, check_slope_symmetry, kronecker_quiver, DimVector, Quiver};
use qdilog::skewseries::{SeriesContext, SkewSeries};
use qdilog::wallcross::extract_dt;

fn laurent() -> impl Strategy<Value = LaurentPoly> {
    (-3i64..=3, prop::collection::vec(-4i64..=4, 0..4)).prop_map(|(lo, c)| LaurentPoly::from_ints(lo, &c))
}

fn nonzero_laurent() -> impl Strategy<Value = LaurentPoly> {
    laurent().prop_filter("nonzero", |p| !p.is_zero())
}

fn qcoeff() -> impl Strategy<Value = QCoeff> {
    (laurent(), nonzero_laurent()).prop_map(|(n, d)| QCoeff::from_parts(&n, &d).unwrap())
}

fn nonzero_qcoeff() -> impl Strategy<Value = QCoeff> {
    qcoeff().prop_filter("nonzero", |c| !c.is_zero())
}

fn kronecker_ctx(m: i64, n: u32) -> Arc<SeriesContext> {
    let (q, st) = kronecker_quiver(m).unwrap();
    SeriesContext::new(q, st, n).unwrap()
}

/// Random series on `K_m` truncated at weight 4, constant term `c0`.
fn series(m: i64, c0: QCoeff) -> impl Strategy<Value = SkewSeries> {
    let ctx = kronecker_ctx(m, 4);
    let vs = ctx.vectors();
    prop::collection::vec(prop::option::weighted(0.4, (-2i64..=2, -2i64..=2)), vs.len()).prop_map(move |cs| {
        let terms = vs.iter().zip(cs).filter_map(|(d, c)| c.map(|(k, e)| (d.clone(), QCoeff::s_pow(e).mul_integer(k))));
        let zero = DimVector::zero(2);
        SkewSeries::from_terms(&ctx, terms.chain([(zero, c0.clone())]))
    })
}

fn dim_vector(n: usize) -> impl Strategy<Value = DimVector> {
    prop::collection::vec(0u32..4, n).prop_map(DimVector::new)
}

/// Acyclic quiver on `n` vertices with relabelled vertices.
fn acyclic_quiver() -> impl Strategy<Value = Quiver> {
    (1usize..6).prop_flat_map(|n| {
        let perm = Just((0..n).collect::<Vec<_>>()).prop_shuffle();
        let arrows = prop::collection::vec((0..n, 0..n), 0..8);
        (Just(n), perm, arrows).prop_map(|(n, perm, arrows)| {
            let arrows = arrows
                .into_iter()
                .filter(|(a, b)| a != b)
                .map(|(a, b)| (perm[a.max(b)], perm[a.min(b)]))
                .collect();
            Quiver::new(n, arrows).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_laws(a in qcoeff(), b in qcoeff(), c in qcoeff()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn inverses_are_canonical(a in nonzero_qcoeff(), b in nonzero_qcoeff()) {
        prop_assert!((&a * &a.inv().unwrap()).is_one());
        prop_assert!((&(&a / &b) * &(&b / &a)).is_one());
        let rebuilt = QCoeff::from_parts(&a.numerator(), &a.denominator()).unwrap();
        prop_assert_eq!(&rebuilt, &a);
        prop_assert_eq!(rebuilt.to_string(), a.to_string());
    }

    #[test]
    fn adams_is_a_ring_map(a in qcoeff(), b in qcoeff(), m in 1u32..4, n in 1u32..4) {
        prop_assert_eq!(a.adams(1), a.clone());
        prop_assert_eq!((&a + &b).adams(n), &a.adams(n) + &b.adams(n));
        prop_assert_eq!((&a * &b).adams(n), &a.adams(n) * &b.adams(n));
        prop_assert_eq!(a.adams(m).adams(n), a.adams(m * n));
    }

    #[test]
    fn gauss_binomial_shape(m in 0u64..12, k in 0u64..12) {
        prop_assume!(k <= m);
        let g = gauss_binomial(m, k).unwrap();
        prop_assert_eq!(g.degree(), Some((m * k - k * k) as usize));
        prop_assert_eq!(g.eval_one(), BigRational::from_integer(binomial(m, k)));
        prop_assert_eq!(&g, &gauss_binomial(m, m - k).unwrap());
        prop_assert_eq!(is_palindromic_unimodal(&g).unwrap(), (true, true));
    }

    #[test]
    fn euler_form_is_bilinear((q, d, e, f) in acyclic_quiver().prop_flat_map(|q| {
        let n = q.vertex_count();
        (Just(q), dim_vector(n), dim_vector(n), dim_vector(n))
    })) {
        let de = d.add(&e);
        prop_assert_eq!(q.euler_form(&de, &f).unwrap(), q.euler_form(&d, &f).unwrap() + q.euler_form(&e, &f).unwrap());
        prop_assert_eq!(q.euler_form(&f, &de).unwrap(), q.euler_form(&f, &d).unwrap() + q.euler_form(&f, &e).unwrap());
        prop_assert_eq!(q.antisym(&d, &e).unwrap(), -q.antisym(&e, &d).unwrap());
        prop_assert_eq!(q.antisym(&d, &d).unwrap(), 0);
    }

    #[test]
    fn admissible_order_points_arrows_backwards(q in acyclic_quiver()) {
        let order = admissible_order(q.vertex_count(), q.arrows()).unwrap();
        let mut pos = vec![usize::MAX; q.vertex_count()];
        for (k, &v) in order.iter().enumerate() {
            pos[v] = k;
        }
        prop_assert!(pos.iter().all(|&p| p != usize::MAX));
        for &(s, t) in q.arrows() {
            prop_assert!(pos[t] < pos[s], "arrow {s}->{t} in order {order:?}");
        }
    }

    #[test]
    fn kronecker_antisym_is_half_the_linear_criterion(m in 1i64..5, d in dim_vector(2), e in dim_vector(2)) {
        let (q, st) = kronecker_quiver(m).unwrap();
        let lin = st.kappa_of(&d) * st.theta_of(&e) - st.kappa_of(&e) * st.theta_of(&d);
        prop_assert_eq!(2 * q.antisym(&d, &e).unwrap(), lin);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn skew_product_is_associative(a in series(2, QCoeff::one()), b in series(2, QCoeff::zero()), c in series(2, QCoeff::one())) {
        let left = a.mul(&b).unwrap().mul(&c).unwrap();
        let right = a.mul(&b.mul(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn twist_ratio(m in 1i64..4, d in dim_vector(2), e in dim_vector(2)) {
        let ctx = kronecker_ctx(m, 12);
        let td = SkewSeries::monomial(&ctx, d.clone(), QCoeff::one());
        let te = SkewSeries::monomial(&ctx, e.clone(), QCoeff::one());
        let de = td.mul(&te).unwrap().coefficient(&d.add(&e)).unwrap();
        let ed = te.mul(&td).unwrap().coefficient(&d.add(&e)).unwrap();
        let a = ctx.quiver().antisym(&d, &e).unwrap();
        prop_assert_eq!(de, &ed * &QCoeff::neg_s_pow(2 * a));
    }

    #[test]
    fn inverse_is_two_sided(a in series(3, QCoeff::one())) {
        let inv = a.inverse().unwrap();
        prop_assert!(a.mul(&inv).unwrap().is_one());
        prop_assert!(inv.mul(&a).unwrap().is_one());
    }

    #[test]
    fn exp_inverts_log_on_a_ray(m in 1i64..4, coeffs in prop::collection::vec((-2i64..=2, -2i64..=2), 3)) {
        let ctx = kronecker_ctx(m, 6);
        let (q, st) = kronecker_quiver(m).unwrap();
        let report = check_slope_symmetry(&q, &st, 6);
        let ray = DimVector::new(vec![1, 1]);
        let slope = ctx.slope(&ray).unwrap();
        let terms = coeffs.iter().enumerate().map(|(k, &(c, e))| (ray.scale(k as u32 + 1), QCoeff::s_pow(e).mul_integer(c)));
        let one = (DimVector::zero(2), QCoeff::one());
        let a = SkewSeries::from_terms(&ctx, terms.chain([one]));
        let log = a.log_slope(&slope, &report).unwrap();
        prop_assert_eq!(log.exp_slope(&slope, &report).unwrap(), a);
    }

    #[test]
    fn extraction_recovers_the_exponent(lo in -3i64..=3, c in prop::collection::vec(0i64..=3, 1..4)) {
        let exponent = LaurentPoly::from_ints(lo, &c);
        prop_assume!(!exponent.is_zero());
        let ctx = kronecker_ctx(2, 6);
        let (q, st) = kronecker_quiver(2).unwrap();
        let report = check_slope_symmetry(&q, &st, 6);
        let ray = DimVector::new(vec![1, 1]);
        let spec = DilogSpec { base: ray.clone(), exponent_poly: exponent.clone() };
        let series = phi_power(&ctx, &spec).unwrap();
        let records = extract_dt(&series, &ctx.slope(&ray).unwrap(), &report).unwrap();
        for r in &records {
            if r.d == ray {
                prop_assert_eq!(&r.dt, &exponent);
            } else {
                prop_assert!(r.dt.is_zero(), "DT at {} is {}", r.d, r.dt);
            }
        }
        prop_assert_eq!(records.len(), 3);
    }
}

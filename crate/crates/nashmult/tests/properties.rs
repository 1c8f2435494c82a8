//! Randomized algebraic invariants, cross-checking independent code paths.

use proptest::prelude::*;

use nashmult::arc::{monomial_arc, Arc};
use nashmult::field::{Coeff, Field};
use nashmult::order::{ArcOrder, OrderValue, ReesOrder};
use nashmult::poly::{Polynomial, Ring};
use nashmult::rees::ReesAlgebra;
use nashmult::series::TruncatedSeries;

fn arb_char() -> impl Strategy<Value = u32> {
    prop_oneof![Just(0u32), Just(2), Just(3), Just(5)]
}

type TermData = Vec<((u32, u32), i64)>;

fn arb_terms() -> impl Strategy<Value = TermData> {
    prop::collection::vec(((0u32..5, 0u32..5), -4i64..=4), 1..5)
}

fn build_poly(r: &Ring, terms: &TermData) -> Polynomial {
    let field = *r.field();
    let mut f = Polynomial::zero(r);
    for ((ex, ey), c) in terms {
        let mono = Polynomial::constant(r, field.from_i64(*c))
            .mul(&Polynomial::variable(r, 0).pow(*ex))
            .mul(&Polynomial::variable(r, 1).pow(*ey));
        f = f.add(&mono);
    }
    f
}

fn ring2(ch: u32) -> Ring {
    Ring::new(vec!["x".into(), "y".into()], Field::new(ch).unwrap()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    // order of a product of series is the sum of orders (below precision)
    #[test]
    fn series_order_multiplicative(
        k1 in 0u32..6, k2 in 0u32..6, u1 in 1i64..5, u2 in 1i64..5, ch in arb_char()
    ) {
        let field = Field::new(ch).unwrap();
        prop_assume!(!field.is_zero(&field.from_i64(u1)) && !field.is_zero(&field.from_i64(u2)));
        let n = 24;
        let unit = |u: i64, k: u32| {
            TruncatedSeries::monomial(field, field.from_i64(u), k, n)
                .add(&TruncatedSeries::monomial(field, field.one(), k + 1, n))
        };
        let s = unit(u1, k1);
        let t = unit(u2, k2);
        prop_assert_eq!(s.order(), OrderValue::Finite(k1));
        prop_assert_eq!(s.mul(&t).order(), OrderValue::Finite(k1 + k2));
        // ultrametric inequality for sums
        match s.add(&t).order() {
            OrderValue::Finite(k) => prop_assert!(k >= k1.min(k2)),
            OrderValue::Infinity => prop_assert!(false, "sum of units cannot vanish identically"),
            OrderValue::Inconclusive(_) => {}
        }
    }

    // composition law for divided-power derivatives, any characteristic
    #[test]
    fn hasse_composition(
        terms in arb_terms(), a in 0u32..4, b in 0u32..4, var in 0usize..2, ch in arb_char()
    ) {
        let r = ring2(ch);
        let f = build_poly(&r, &terms);
        let lhs = f.hasse_derivative(var, b).hasse_derivative(var, a);
        let rhs = f
            .hasse_derivative(var, a + b)
            .scale(&r.field().binomial(a + b, a));
        prop_assert_eq!(lhs, rhs);
        // derivatives in distinct variables commute
        let xy = f.hasse_derivative(0, a).hasse_derivative(1, b);
        let yx = f.hasse_derivative(1, b).hasse_derivative(0, a);
        prop_assert_eq!(xy, yx);
    }

    // translation is substitution: (f after shift by p)(q) = f(q + p)
    #[test]
    fn translate_eval_commute(
        terms in arb_terms(),
        p in prop::array::uniform2(-3i64..=3),
        q in prop::array::uniform2(-3i64..=3),
        ch in arb_char()
    ) {
        let r = ring2(ch);
        let field = *r.field();
        let f = build_poly(&r, &terms);
        let pv: Vec<Coeff> = p.iter().map(|&c| field.from_i64(c)).collect();
        let sum: Vec<Coeff> = p.iter().zip(q.iter()).map(|(&a, &b)| field.from_i64(a + b)).collect();
        let qv: Vec<Coeff> = q.iter().map(|&c| field.from_i64(c)).collect();
        prop_assert_eq!(
            f.translate(&pv).unwrap().eval(&qv).unwrap(),
            f.eval(&sum).unwrap()
        );
        // order_at must agree with order of the translated polynomial at 0
        prop_assert_eq!(f.order_at(&pv).unwrap(), f.translate(&pv).unwrap().order_at_origin());
    }

    // reparametrization t -> t^n scales series orders exactly
    #[test]
    fn reparametrize_scales_order(k in 0u32..8, n in 1u32..6, ch in arb_char()) {
        let field = Field::new(ch).unwrap();
        let s = TruncatedSeries::monomial(field, field.one(), k, 16)
            .add(&TruncatedSeries::monomial(field, field.one(), k + 2, 16));
        let scaled = s.reparametrize(n).unwrap();
        prop_assert_eq!(scaled.order(), OrderValue::Finite(k * n));
    }

    // membership in Sing is exactly "order at the point >= 1"
    #[test]
    fn singular_membership_is_order_one(
        terms in arb_terms(),
        weight in 1u32..4,
        px in 0i64..5, py in 0i64..5,
        p in prop_oneof![Just(2u32), Just(3), Just(5)]
    ) {
        let r = ring2(p);
        let f = build_poly(&r, &terms);
        prop_assume!(!f.is_zero());
        let g = ReesAlgebra::new(r.clone(), vec![(f, weight)]).unwrap();
        let field = *r.field();
        let point = vec![field.from_i64(px), field.from_i64(py)];
        let member = g.in_singular_locus(&point).unwrap();
        let by_order = match g.order_at_point(&point).unwrap() {
            ReesOrder::Infinity => true,
            ReesOrder::Finite(o) => o >= num::rational::Ratio::new(1, 1),
        };
        prop_assert_eq!(member, by_order);
    }

    // a product generator with summed weight never changes the arc order
    #[test]
    fn product_generator_preserves_arc_order(
        t1 in arb_terms(), t2 in arb_terms(),
        n1 in 1u32..3, n2 in 1u32..3,
        a in 1u32..4, b in 1u32..4,
        ch in arb_char()
    ) {
        let r = ring2(ch);
        let f1 = build_poly(&r, &t1);
        let f2 = build_poly(&r, &t2);
        prop_assume!(!f1.is_zero() && !f2.is_zero());
        let g = ReesAlgebra::new(r.clone(), vec![(f1.clone(), n1), (f2.clone(), n2)]).unwrap();
        let g2 = ReesAlgebra::new(
            r.clone(),
            vec![(f1.clone(), n1), (f2.clone(), n2), (f1.mul(&f2), n1 + n2)],
        )
        .unwrap();
        let phi = monomial_arc(&r, &[a, b], 32);
        let o1 = phi.ord_rees(&g).unwrap();
        let o2 = phi.ord_rees(&g2).unwrap();
        if let (ArcOrder::Finite(x), ArcOrder::Finite(y)) = (o1, o2) {
            prop_assert_eq!(x, y);
        }
    }

    // coordinate projection commutes with reparametrization
    #[test]
    fn pushforward_reparametrize_commute(
        a in 0u32..4, b in 0u32..4, c in 0u32..4, n in 1u32..5, ch in arb_char()
    ) {
        let big = Ring::new(
            vec!["x".into(), "y".into(), "z".into()],
            Field::new(ch).unwrap(),
        )
        .unwrap();
        let small = Ring::new(vec!["x".into(), "y".into()], Field::new(ch).unwrap()).unwrap();
        let phi = monomial_arc(&big, &[a, b, c], 12);
        let left = phi.reparametrize(n).unwrap().project(&small).unwrap();
        let right = phi.project(&small).unwrap().reparametrize(n).unwrap();
        prop_assert_eq!(left, right);
    }

    // arc order along a reparametrized arc scales exactly by n
    #[test]
    fn arc_order_homogeneous(
        terms in arb_terms(), w in 1u32..4, a in 1u32..4, b in 1u32..4, n in 1u32..5,
        ch in arb_char()
    ) {
        let r = ring2(ch);
        let f = build_poly(&r, &terms);
        prop_assume!(!f.is_zero());
        let g = ReesAlgebra::new(r.clone(), vec![(f, w)]).unwrap();
        let phi = monomial_arc(&r, &[a, b], 24);
        let base = phi.ord_rees(&g).unwrap();
        let scaled = phi.reparametrize(n).unwrap().ord_rees(&g).unwrap();
        if let (ArcOrder::Finite(x), ArcOrder::Finite(y)) = (base, scaled) {
            prop_assert_eq!(x * num::rational::Ratio::new(n as i64, 1), y);
        }
    }
}

/// Arcs built from non-monomial series still satisfy the homogeneity law.
#[test]
fn mixed_series_arc_order_scales() {
    let r = ring2(0);
    let field = *r.field();
    let g = ReesAlgebra::new(
        r.clone(),
        vec![(Polynomial::parse(&r, "x^2 - y^3").unwrap(), 2)],
    )
    .unwrap()
    .diff_saturate();
    // x = t^3 + t^4, y = t^2 + t^5
    let x = TruncatedSeries::monomial(field, field.one(), 3, 24)
        .add(&TruncatedSeries::monomial(field, field.one(), 4, 24));
    let y = TruncatedSeries::monomial(field, field.one(), 2, 24)
        .add(&TruncatedSeries::monomial(field, field.one(), 5, 24));
    let phi = Arc::new(r, vec![x, y]).unwrap();
    let base = match phi.ord_rees(&g).unwrap() {
        ArcOrder::Finite(v) => v,
        other => panic!("expected finite order, got {other:?}"),
    };
    for n in 2..=4u32 {
        let scaled = phi.reparametrize(n).unwrap().ord_rees(&g).unwrap();
        assert_eq!(
            scaled,
            ArcOrder::Finite(base * num::rational::Ratio::new(n as i64, 1))
        );
    }
}

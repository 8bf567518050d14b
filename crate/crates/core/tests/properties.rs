use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;

use glcover::asympt::l_of_q;
use glcover::census::{b_coefficient, b_value};
use glcover::exactalg::{rf_arith, rf_eval, ArithOp, IntPolynomial, RationalFunction};
use glcover::oracle::{Fq, FqMatrix};
use glcover::qseries::{ps_exp, ps_mul, PowerSeries, RatFuncRing, UCoeff, USeriesRing};

fn poly(max_len: usize) -> impl Strategy<Value = IntPolynomial> {
    prop::collection::vec(-5i64..=5, 1..=max_len).prop_map(|c| IntPolynomial::from_i64s(&c))
}

fn ratfunc() -> impl Strategy<Value = RationalFunction> {
    (poly(4), poly(3))
        .prop_filter("nonzero denominator", |(_, d)| !d.is_zero())
        .prop_map(|(n, d)| RationalFunction::new(n, d).unwrap())
}

fn rational_point() -> impl Strategy<Value = BigRational> {
    (-30i64..=30, 1i64..=7).prop_map(|(n, d)| BigRational::new(n.into(), d.into()))
}

fn op() -> impl Strategy<Value = ArithOp> {
    prop_oneof![Just(ArithOp::Add), Just(ArithOp::Sub), Just(ArithOp::Mul), Just(ArithOp::Div)]
}

fn apply(a: &BigRational, b: &BigRational, op: ArithOp) -> BigRational {
    match op {
        ArithOp::Add => a + b,
        ArithOp::Sub => a - b,
        ArithOp::Mul => a * b,
        ArithOp::Div => a / b,
    }
}

fn useries(order: usize, u_order: usize) -> impl Strategy<Value = PowerSeries<USeriesRing>> {
    prop::collection::vec(prop::collection::vec((-4i64..=4, 1i64..=3), u_order + 1), order).prop_map(move |rows| {
        let mut coeffs = vec![UCoeff::zero(u_order)];
        coeffs.extend(rows.into_iter().map(|r| {
            UCoeff::from_coeffs(u_order, r.into_iter().map(|(n, d)| BigRational::new(n.into(), d.into())).collect())
        }));
        PowerSeries::new(USeriesRing::new(u_order), order, coeffs).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn evaluation_commutes_with_arithmetic(a in ratfunc(), b in ratfunc(), op in op(), x in rational_point()) {
        let (Ok(ea), Ok(eb)) = (rf_eval(&a, &x), rf_eval(&b, &x)) else { return Ok(()) };
        prop_assume!(!matches!(op, ArithOp::Div) || !eb.is_zero());
        let Ok(c) = rf_arith(&a, &b, op) else {
            prop_assert!(matches!(op, ArithOp::Div) && b.is_zero());
            return Ok(());
        };
        // The reduced result can only lose poles, never gain them.
        prop_assert_eq!(rf_eval(&c, &x).unwrap(), apply(&ea, &eb, op));
    }

    #[test]
    fn exp_turns_sums_into_products(a in useries(5, 6), b in useries(5, 6)) {
        let lhs = ps_exp(&a.add(&b).unwrap()).unwrap();
        let rhs = ps_mul(&ps_exp(&a).unwrap(), &ps_exp(&b).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn exp_of_ratfunc_series_is_additive(c1 in ratfunc(), c2 in ratfunc(), d1 in ratfunc(), d2 in ratfunc()) {
        let series = |x: &RationalFunction, y: &RationalFunction| {
            PowerSeries::new(RatFuncRing, 3, vec![RationalFunction::zero(), x.clone(), y.clone()]).unwrap()
        };
        let (a, b) = (series(&c1, &c2), series(&d1, &d2));
        let lhs = ps_exp(&a.add(&b).unwrap()).unwrap();
        let rhs = ps_mul(&ps_exp(&a).unwrap(), &ps_exp(&b).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn class_sum_matches_symbolic_b(n in 1usize..=7, num in 3i64..=60, den in 1i64..=5) {
        let q = BigRational::new(num.into(), den.into());
        prop_assume!(q > BigRational::from_integer(BigInt::from(1)));
        prop_assert_eq!(b_coefficient(n).eval(&q).unwrap(), b_value(n, &q));
    }

    #[test]
    fn matrix_codes_round_trip(q in prop::sample::select(vec![2u64, 3, 4, 5]), n in 1usize..=3, seed in any::<u64>()) {
        let total = q.pow((n * n) as u32);
        let code = seed % total;
        let m = FqMatrix::decode(code, n, q as usize);
        prop_assert_eq!(m.encode(q as usize), code);
    }

    #[test]
    fn min_poly_divides_char_poly(q in prop::sample::select(vec![2u64, 3, 4, 5]), n in 1usize..=4, seed in any::<u64>()) {
        let f = Fq::new(q).unwrap();
        let m = FqMatrix::decode(seed % q.pow((n * n) as u32), n, q as usize);
        let (min, ch) = (m.min_poly(&f), m.char_poly(&f));
        prop_assert!(min.is_monic() && ch.is_monic());
        prop_assert_eq!(ch.degree(), Some(n));
        prop_assert!(ch.div_rem(&min, &f).1.is_zero());
        prop_assert!(m.eval_poly(&min, &f) == FqMatrix::zero(n));
        prop_assert_eq!(m.is_cyclic(&f), min == ch);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 16, ..ProptestConfig::default() })]

    #[test]
    fn limit_intervals_nest(num in 4i64..=30, den in 1i64..=2, k in 8usize..=14, extra in 1usize..=6) {
        // q >= 2 and K >= 8 keep the tail bound below 1
        let q = BigRational::new(num.into(), den.into());
        let coarse = l_of_q(&q, k).unwrap();
        let fine = l_of_q(&q, k + extra).unwrap();
        prop_assert!(coarse.contains_interval(&fine));
        prop_assert!(fine.width() <= coarse.width());
    }
}

//! Acceptance criteria, one line each. Every criterion is exact; its time
//! limit is part of the pass condition.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;

use glcover::asympt::{check_estimates, convergence_report, l_of_q, Verdict, DEFAULT_TERMS};
use glcover::census::{a_polynomial, b_coefficient, b_value, gl_order};
use glcover::clique::{build_graph, clique_omega, max_clique, seed_clique, verify_clique, SearchBudget};
use glcover::exactalg::IntPolynomial;
use glcover::oracle::{
    block_orders, count_cyclic_centralizers, cyclic_proportion, enumerate_gl, irreducible_polys, jm_block,
    acyclic_centralizer_check, Budget, Fq, FqPoly,
};
use glcover::qseries::{build_f1, build_f2, build_fbar, Form, Target};
use glcover::verify::Goldens;

type Outcome = Result<String, String>;
type Criterion = (&'static str, u64, fn() -> Outcome);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn int(q: u64) -> BigRational {
    BigRational::from_integer(q.into())
}

fn frac(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn budget() -> Budget {
    Budget::default()
}

/// Cover sizes for `n <= 6`, highest degree first.
fn table_one(n: usize) -> IntPolynomial {
    let desc: &[i64] = match n {
        1 => &[1],
        2 => &[1, 1, 1],
        3 => &[1, 1, 3, 3, 1, -1, -1],
        4 => &[1, 1, 4, 7, 9, 5, 2, -3, -2, -1, 1, 1, 0],
        5 => &[1, 1, 4, 9, 18, 22, 22, 15, 6, -4, -7, -6, -2, 1, 2, 1, -1, -1, 0, 0, 0],
        6 => &[
            1, 1, 4, 10, 23, 40, 60, 65, 68, 53, 33, 5, -8, -19, -16, -7, 1, 6, 6, 5, 0, -1, -1, 1, 1, 0, 0, 0, 0, 0,
            0,
        ],
        _ => unreachable!(),
    };
    let asc: Vec<i64> = desc.iter().rev().copied().collect();
    IntPolynomial::from_i64s(&asc)
}

fn table_reproduction() -> Outcome {
    for n in 1..=6 {
        let a = a_polynomial(n).map_err(|e| e.to_string())?;
        ensure(a == table_one(n), || format!("n = {n}: got {a}"))?;
    }
    Ok("n = 1..6 coefficient for coefficient".into())
}

fn generating_functions() -> Outcome {
    let fbar = build_fbar(12).map_err(|e| e.to_string())?;
    for n in 0..=12 {
        ensure(fbar.coeff(n) == &b_coefficient(n), || format!("t^{n} of Fbar differs from b_n"))?;
    }
    let u = Target::Useries { u_order: 40 };
    let f1_exp = build_f1(12, Form::Exp, Target::Ratfunc).map_err(|e| e.to_string())?;
    let f1_sum = build_f1(12, Form::Sum, Target::Ratfunc).map_err(|e| e.to_string())?;
    ensure(f1_exp == f1_sum, || "F1 exp and sum differ".into())?;
    let f1_exp_u = build_f1(12, Form::Exp, u).map_err(|e| e.to_string())?;
    let f1_prod = build_f1(12, Form::Product, u).map_err(|e| e.to_string())?;
    ensure(f1_exp_u == f1_prod, || "F1 exp and product differ to u^40".into())?;
    let f2_exp = build_f2(12, Form::Exp, u).map_err(|e| e.to_string())?;
    let f2_prod = build_f2(12, Form::Product, u).map_err(|e| e.to_string())?;
    ensure(f2_exp == f2_prod, || "F2 exp and product differ to u^40".into())?;
    Ok("Fbar = b_n for n <= 12; F1 exp = sum = product, F2 exp = product to u^40".into())
}

fn monotonicity() -> Outcome {
    for q in 2..=5u64 {
        let qr = int(q);
        let s: Vec<BigRational> = (1..=13).map(|n| num_traits::pow(qr.clone(), n) * b_value(n, &qr)).collect();
        for n in 1..=12 {
            ensure(s[n - 1] < s[n], || format!("q = {q}, n = {n}"))?;
        }
    }
    Ok("q^n b_n < q^(n+1) b_(n+1) for n <= 12, q = 2..5".into())
}

fn limit_certification() -> Outcome {
    let l2 = l_of_q(&int(2), DEFAULT_TERMS).map_err(|e| e.to_string())?;
    ensure(l2.above(&frac(27898, 100)) && l2.below(&frac(3950005, 10000)), || {
        format!("l(2) enclosure [{}, {}]", l2.lo, l2.hi)
    })?;
    for q in [3u64, 4, 5, 7] {
        let r = check_estimates(&int(q), DEFAULT_TERMS).map_err(|e| e.to_string())?;
        ensure(r.lower_poly == Verdict::Holds, || format!("q = {q} lower polynomial: {:?}", r.lower_poly))?;
        ensure(r.upper_poly == Some(Verdict::Holds), || format!("q = {q} upper polynomial: {:?}", r.upper_poly))?;
    }
    Ok("l(2) in (278.98, 395.0005); polynomial bounds hold for q = 3, 4, 5, 7".into())
}

fn convergence() -> Outcome {
    for q in [2u64, 3] {
        let l = l_of_q(&int(q), DEFAULT_TERMS).map_err(|e| e.to_string())?;
        let rows = convergence_report(q, 12).map_err(|e| e.to_string())?;
        for r in &rows {
            ensure(r.scaled_b_exact < l.hi, || format!("q = {q}, n = {}: q^n b_n not below l", r.n))?;
        }
        for w in rows.windows(2) {
            ensure(w[1].gap.hi < w[0].gap.hi, || format!("q = {q}, n = {}: gap bound not decreasing", w[1].n))?;
        }
    }
    Ok("q^n b_n below l(q) with strictly shrinking gap bounds, q = 2, 3".into())
}

const PAIRS: [(usize, u64); 6] = [(2, 2), (2, 3), (2, 4), (2, 5), (3, 2), (3, 3)];

fn wall_bound() -> Outcome {
    let mut parts = Vec::new();
    for (n, q) in PAIRS {
        let g = enumerate_gl(n, q, &budget()).map_err(|e| e.to_string())?;
        let c = cyclic_proportion(&g);
        let one = int(1);
        let qi = |k: usize| int(q).pow(k as i32).recip();
        let limit = (&one - qi(5)) / (&one + qi(3));
        let lower = &limit - qi(n) / int(q - 1);
        let expanded = &one - qi(3) - qi(5) + qi(6) - qi(n);
        ensure(c.exact >= lower && c.exact > expanded, || format!("({n}, {q}): {}", c.exact))?;
        parts.push(format!("({n},{q}) {}", c.exact));
    }
    Ok(parts.join(", "))
}

fn census_equality() -> Outcome {
    let mut parts = Vec::new();
    for (n, q) in PAIRS {
        let g = enumerate_gl(n, q, &budget()).map_err(|e| e.to_string())?;
        let c = count_cyclic_centralizers(&g, &budget()).map_err(|e| e.to_string())?;
        let cover = a_polynomial(n).map_err(|e| e.to_string())?.eval_int(&BigInt::from(q));
        let count = BigInt::from(c.count);
        if (q as usize) > n && q > 2 {
            ensure(count == cover, || format!("({n}, {q}): {count} != {cover}"))?;
        } else {
            ensure(count < cover, || format!("({n}, {q}): {count} not below {cover}"))?;
        }
        parts.push(format!("({n},{q}) {count}/{cover}"));
    }
    Ok(parts.join(", "))
}

fn cubic_three() -> Outcome {
    let g = enumerate_gl(3, 3, &budget()).map_err(|e| e.to_string())?;
    let c = count_cyclic_centralizers(&g, &budget()).map_err(|e| e.to_string())?;
    let three = BigInt::from(3);
    let order = gl_order(3).eval_int(&three);
    ensure(order == BigInt::from(11232), || format!("|GL_3(3)| = {order}"))?;
    let formula = a_polynomial(3).map_err(|e| e.to_string())?.eval_int(&three) - &order / 48;
    ensure(c.count == 1067 && formula == BigInt::from(1067), || format!("count {}, formula {formula}", c.count))?;
    let seed = seed_clique(&g, &c).map_err(|e| e.to_string())?;
    ensure(seed.len() == 1067 && verify_clique(&g, &seed), || "seed is not a clique of size 1067".into())?;
    Ok("1067 = 1301 - 11232/48; seed of 1067 pairwise non-commuting".into())
}

fn clique_numbers() -> Outcome {
    let search = SearchBudget::default();
    for (q, expected) in [(3u64, 13usize), (4, 21), (5, 31)] {
        let g = enumerate_gl(2, q, &budget()).map_err(|e| e.to_string())?;
        let r = clique_omega(&g, &budget(), search).map_err(|e| e.to_string())?;
        ensure(r.omega == expected && r.optimal && r.seed_size == expected, || {
            format!("GL_2({q}): omega {} optimal {}", r.omega, r.optimal)
        })?;
        ensure(r.upper_bound == Some(expected as u64) && r.steps == 0, || format!("GL_2({q}) needed a search"))?;
        ensure(verify_clique(&g, &r.witness), || format!("GL_2({q}) witness"))?;
    }
    let g22 = enumerate_gl(2, 2, &budget()).map_err(|e| e.to_string())?;
    let r22 = max_clique(&build_graph(&g22), &g22, &[], None, search).map_err(|e| e.to_string())?;
    ensure(r22.size == 4 && r22.optimal && verify_clique(&g22, &r22.witness), || {
        format!("GL_2(2): {}", r22.size)
    })?;
    let golden = Goldens::embedded()
        .omega
        .iter()
        .find(|o| (o.n, o.q) == (3, 2))
        .map(|o| o.omega as usize)
        .ok_or("no golden for GL_3(2)")?;
    let g32 = enumerate_gl(3, 2, &budget()).map_err(|e| e.to_string())?;
    let graph = build_graph(&g32);
    let start = Instant::now();
    let r32 = max_clique(&graph, &g32, &[], None, search).map_err(|e| e.to_string())?;
    let took = start.elapsed();
    ensure(r32.optimal && took < Duration::from_secs(60), || format!("GL_3(2) search not certified in {took:?}"))?;
    ensure(r32.size == golden && verify_clique(&g32, &r32.witness), || {
        format!("GL_3(2): {} against golden {golden}", r32.size)
    })?;
    Ok(format!("13, 21, 31 by seed and cover; GL_2(2) = 4; GL_3(2) = {golden} certified in {took:.2?}"))
}

fn structural_orders() -> Outcome {
    for (n, q) in [(2usize, 2u64), (2, 3), (3, 2), (3, 3)] {
        let g = enumerate_gl(n, q, &budget()).map_err(|e| e.to_string())?;
        let b = block_orders(&g, &FqPoly::linear(g.field(), 1));
        let c_expected = (q - 1) * q.pow(n as u32 - 1);
        let n_expected = (q - 1) * (q - 1) * q.pow(2 * n as u32 - 3);
        ensure(
            b.abelian && b.centralizer as u64 == c_expected && b.normalizer as u64 == n_expected,
            || format!("({n}, {q}): centralizer {} normalizer {}", b.centralizer, b.normalizer),
        )?;
    }
    let mut blocks = 0;
    for q in [2u64, 3] {
        let f = Fq::new(q).map_err(|e| e.to_string())?;
        for d in 1..=3 {
            for p in irreducible_polys(&f, d) {
                for m in 1..=3 {
                    ensure(jm_block(&p, m, &f).min_poly(&f) == p.pow(m, &f), || {
                        format!("q = {q}, f = {:?}, m = {m}", p.coeffs())
                    })?;
                    blocks += 1;
                }
            }
        }
    }
    let r = acyclic_centralizer_check(&budget()).map_err(|e| e.to_string())?;
    ensure(r.centralizer_order == 16 && r.cyclic_members == 0, || {
        format!("acyclic centralizer: order {}, cyclic {}", r.centralizer_order, r.cyclic_members)
    })?;
    Ok(format!("unipotent orders match; {blocks} blocks have min poly f^m; acyclic centralizer of order 16 with no cyclic member"))
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 10] = [
        ("table reproduction", 5, table_reproduction),
        ("generating-function consistency", 60, generating_functions),
        ("monotonicity", 10, monotonicity),
        ("limit certification", 10, limit_certification),
        ("convergence envelope", 10, convergence),
        ("cyclic proportion lower bound", 300, wall_bound),
        ("census against group", 600, census_equality),
        ("q = n = 3 count and seed", 600, cubic_three),
        ("clique numbers", 300, clique_numbers),
        ("structural orders", 120, structural_orders),
    ];
    let mut failed = Vec::new();
    for (i, (name, limit, run)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        let outcome = match outcome {
            Ok(d) if took > Duration::from_secs(limit) => Err(format!("{d}; took {took:.2?}, limit {limit} s")),
            other => other,
        };
        match &outcome {
            Ok(d) => println!("PASS {:>2} {name} ({took:.2?}): {d}", i + 1),
            Err(d) => {
                println!("FAIL {:>2} {name} ({took:.2?}): {d}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}

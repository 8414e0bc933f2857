//! Randomized law checks for the function algebra and the operator calculus.
//! Seeds are fixed so failures replay exactly.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use superdop_core::{random, Chart, ChartRef, OperatorExpr, Parity, SuperDiffOp};

fn charts() -> Vec<ChartRef> {
    vec![
        Chart::standard(1, 1),
        Chart::standard(2, 2),
        Chart::standard(0, 3),
    ]
}

#[test]
fn function_algebra_laws() {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    for chart in charts() {
        for _ in 0..50 {
            let f = random::superfunction(&mut rng, &chart);
            let g = random::superfunction(&mut rng, &chart);
            let h = random::superfunction(&mut rng, &chart);
            assert_eq!(f.add(&g), g.add(&f));
            assert_eq!(f.mul(&g).mul(&h), f.mul(&g.mul(&h)));
            assert_eq!(f.mul(&g.add(&h)), f.mul(&g).add(&f.mul(&h)));
        }
        // Supercommutativity with the Koszul sign on homogeneous parts.
        for _ in 0..50 {
            for (pf, pg, negate) in [
                (Parity::Even, Parity::Even, false),
                (Parity::Even, Parity::Odd, false),
                (Parity::Odd, Parity::Even, false),
                (Parity::Odd, Parity::Odd, true),
            ] {
                let f = random::homogeneous(&mut rng, &chart, pf);
                let g = random::homogeneous(&mut rng, &chart, pg);
                let fg = f.mul(&g);
                let gf = g.mul(&f);
                if negate {
                    assert_eq!(fg, gf.neg());
                } else {
                    assert_eq!(fg, gf);
                }
            }
        }
    }
}

#[test]
fn partials_satisfy_the_signed_leibniz_rule() {
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    for chart in charts() {
        for _ in 0..50 {
            let g = random::homogeneous(&mut rng, &chart, Parity::Odd);
            let h = random::superfunction(&mut rng, &chart);
            for k in 0..chart.dim() {
                let lhs = g.mul(&h).partial(k);
                let sign = if chart.parity(k).is_odd() { -1 } else { 1 };
                let rhs = g
                    .partial(k)
                    .mul(&h)
                    .add(&g.mul(&h.partial(k)).scale(&superdop_core::int(sign)));
                assert_eq!(lhs, rhs);
            }
            let e = random::homogeneous(&mut rng, &chart, Parity::Even);
            for k in 0..chart.dim() {
                let lhs = e.mul(&h).partial(k);
                let rhs = e.partial(k).mul(&h).add(&e.mul(&h.partial(k)));
                assert_eq!(lhs, rhs);
            }
        }
    }
}

#[test]
fn odd_partials_anticommute_and_square_to_zero() {
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    for chart in charts() {
        for _ in 0..40 {
            let f = random::superfunction(&mut rng, &chart);
            for a in chart.p()..chart.dim() {
                assert!(f.partial(a).partial(a).is_zero());
                for b in chart.p()..chart.dim() {
                    if a != b {
                        assert_eq!(f.partial(a).partial(b), f.partial(b).partial(a).neg());
                    }
                }
            }
        }
    }
}

#[test]
fn the_two_normalizers_agree_and_preserve_action() {
    let mut rng = ChaCha8Rng::seed_from_u64(104);
    for chart in charts() {
        for _ in 0..40 {
            let expr = random::expr(&mut rng, &chart, 4);
            let rewritten = expr.normal_form();
            let extracted = expr.normal_form_extraction();
            assert_eq!(rewritten, extracted);
            for _ in 0..3 {
                let f = random::superfunction(&mut rng, &chart);
                assert_eq!(expr.apply(&f), rewritten.apply(&f));
            }
        }
    }
}

#[test]
fn syntactic_order_matches_commutator_order() {
    let mut rng = ChaCha8Rng::seed_from_u64(105);
    for chart in [Chart::standard(2, 2), Chart::standard(1, 2)] {
        for _ in 0..40 {
            let d = random::diffop(&mut rng, &chart, 3);
            assert_eq!(d.order(), d.order_by_commutators());
        }
    }
}

#[test]
fn scommutator_is_a_super_lie_bracket() {
    let mut rng = ChaCha8Rng::seed_from_u64(106);
    for chart in charts() {
        for _ in 0..30 {
            let parities = [Parity::Even, Parity::Odd];
            let pa = parities[(rng.next_u32() % 2) as usize];
            let pb = parities[(rng.next_u32() % 2) as usize];
            let pc = parities[(rng.next_u32() % 2) as usize];
            let a = random::homogeneous_diffop(&mut rng, &chart, pa, 2);
            let b = random::homogeneous_diffop(&mut rng, &chart, pb, 2);
            let c = random::homogeneous_diffop(&mut rng, &chart, pc, 2);

            // Graded antisymmetry.
            let sign_ab = if pa.koszul_is_negative(pb) { 1 } else { -1 };
            assert_eq!(
                a.scommutator(&b),
                b.scommutator(&a).scale(&superdop_core::int(sign_ab))
            );

            // Graded Jacobi, cyclic form.
            let s_ca = if pc.koszul_is_negative(pa) { -1 } else { 1 };
            let s_ab = if pa.koszul_is_negative(pb) { -1 } else { 1 };
            let s_bc = if pb.koszul_is_negative(pc) { -1 } else { 1 };
            let total = a
                .scommutator(&b.scommutator(&c))
                .scale(&superdop_core::int(s_ca))
                .add(
                    &b.scommutator(&c.scommutator(&a))
                        .scale(&superdop_core::int(s_ab)),
                )
                .add(
                    &c.scommutator(&a.scommutator(&b))
                        .scale(&superdop_core::int(s_bc)),
                );
            assert!(total.is_zero());
        }
    }
}

#[test]
fn bracket_lowers_the_order_filtration() {
    let mut rng = ChaCha8Rng::seed_from_u64(107);
    for chart in [Chart::standard(1, 1), Chart::standard(1, 2)] {
        for _ in 0..60 {
            let d = random::diffop(&mut rng, &chart, 2);
            let e = random::diffop(&mut rng, &chart, 2);
            let bracket = d.scommutator(&e);
            if d.is_zero() || e.is_zero() || bracket.is_zero() {
                continue;
            }
            assert!(bracket.order() <= d.order() + e.order() - 1);
        }
    }
}

#[test]
fn first_order_operators_are_exactly_the_leibniz_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(108);
    for chart in charts() {
        for _ in 0..40 {
            let d = random::first_order(&mut rng, &chart);
            let f = random::superfunction(&mut rng, &chart);
            let g = random::superfunction(&mut rng, &chart);
            assert!(superdop_core::operators::check_first_order_leibniz(
                &d, &f, &g
            ));
            let e = random::diffop(&mut rng, &chart, 2);
            if e.order() >= 2 {
                // Order-two operators break the first-order law on some pair;
                // the checker must be able to notice.
                let mut found = false;
                for _ in 0..30 {
                    let f = random::superfunction(&mut rng, &chart);
                    let g = random::superfunction(&mut rng, &chart);
                    if !superdop_core::operators::check_first_order_leibniz(&e, &f, &g) {
                        found = true;
                        break;
                    }
                }
                assert!(found, "no Leibniz violation found for {e}");
            }
        }
    }
}

#[test]
fn operator_expression_trees_evaluate_like_their_normal_forms() {
    let chart = Chart::standard(1, 2);
    let x = superdop_core::Superfunction::coordinate(&chart, 0).unwrap();
    let expr = OperatorExpr::compose(
        OperatorExpr::partial(&chart, 0).unwrap(),
        OperatorExpr::mul(x.clone()),
    );
    let nf = expr.normal_form();
    // d_x m_x = m_x d_x + 1.
    let expected = SuperDiffOp::partial(&chart, 0)
        .unwrap()
        .left_mul(&x)
        .add(&SuperDiffOp::identity(&chart));
    assert_eq!(nf, expected);
}

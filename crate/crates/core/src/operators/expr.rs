use num_bigint::BigInt;

use crate::chart::{same_chart, ChartRef};
use crate::error::Result;
use crate::koszul::OddSet;
use crate::operators::diffop::{DerivWord, SuperDiffOp};
use crate::superfunction::{Monomial, Superfunction};
use crate::Rational;

/// A formal word in multiplication operators, coordinate partials, sums,
/// scalings and compositions, before normalization.
#[derive(Clone, Debug)]
pub enum OperatorExpr {
    Mul(Superfunction),
    Partial(ChartRef, usize),
    Scale(Rational, Box<OperatorExpr>),
    Sum(Box<OperatorExpr>, Box<OperatorExpr>),
    Compose(Box<OperatorExpr>, Box<OperatorExpr>),
}

impl OperatorExpr {
    pub fn mul(f: Superfunction) -> OperatorExpr {
        OperatorExpr::Mul(f)
    }

    pub fn partial(chart: &ChartRef, k: usize) -> Result<OperatorExpr> {
        chart.check_coord(k)?;
        Ok(OperatorExpr::Partial(chart.clone(), k))
    }

    pub fn scale(r: Rational, e: OperatorExpr) -> OperatorExpr {
        OperatorExpr::Scale(r, Box::new(e))
    }

    pub fn sum(a: OperatorExpr, b: OperatorExpr) -> OperatorExpr {
        assert!(same_chart(a.chart(), b.chart()), "chart mismatch in sum");
        OperatorExpr::Sum(Box::new(a), Box::new(b))
    }

    pub fn compose(a: OperatorExpr, b: OperatorExpr) -> OperatorExpr {
        assert!(
            same_chart(a.chart(), b.chart()),
            "chart mismatch in composition"
        );
        OperatorExpr::Compose(Box::new(a), Box::new(b))
    }

    pub fn chart(&self) -> &ChartRef {
        match self {
            OperatorExpr::Mul(f) => f.chart(),
            OperatorExpr::Partial(c, _) => c,
            OperatorExpr::Scale(_, e) => e.chart(),
            OperatorExpr::Sum(a, _) | OperatorExpr::Compose(a, _) => a.chart(),
        }
    }

    /// Evaluates the expression on a function without normalizing first.
    pub fn apply(&self, f: &Superfunction) -> Superfunction {
        match self {
            OperatorExpr::Mul(g) => g.mul(f),
            OperatorExpr::Partial(_, k) => f.partial(*k),
            OperatorExpr::Scale(r, e) => e.apply(f).scale(r),
            OperatorExpr::Sum(a, b) => a.apply(f).add(&b.apply(f)),
            OperatorExpr::Compose(a, b) => a.apply(&b.apply(f)),
        }
    }

    /// An order bound read off the syntax tree; the true order can be lower.
    pub fn order_bound(&self) -> usize {
        match self {
            OperatorExpr::Mul(_) => 0,
            OperatorExpr::Partial(_, _) => 1,
            OperatorExpr::Scale(_, e) => e.order_bound(),
            OperatorExpr::Sum(a, b) => a.order_bound().max(b.order_bound()),
            OperatorExpr::Compose(a, b) => a.order_bound() + b.order_bound(),
        }
    }

    /// Normal form by structural rewriting: normalize the children, then
    /// combine with the exact operator arithmetic.
    pub fn normal_form(&self) -> SuperDiffOp {
        match self {
            OperatorExpr::Mul(f) => SuperDiffOp::mul_operator(f),
            OperatorExpr::Partial(c, k) => {
                SuperDiffOp::partial(c, *k).expect("index validated at construction")
            }
            OperatorExpr::Scale(r, e) => e.normal_form().scale(r),
            OperatorExpr::Sum(a, b) => a.normal_form().add(&b.normal_form()),
            OperatorExpr::Compose(a, b) => a.normal_form().compose(&b.normal_form()),
        }
    }

    /// Normal form by black-box coefficient extraction from the action on
    /// test monomials.  Independent of `normal_form`; the two must agree
    /// bit-exactly, which makes each the oracle for the other.
    pub fn normal_form_extraction(&self) -> SuperDiffOp {
        extract_diffop(|f| self.apply(f), self.chart(), self.order_bound())
    }
}

fn factorial(n: u32) -> BigInt {
    (1..=n).map(BigInt::from).product()
}

/// The test monomial x^alpha xi^beta / alpha! associated with a derivative
/// word; the word applied to its own monomial gives exactly 1.
fn test_monomial(chart: &ChartRef, w: &DerivWord) -> Superfunction {
    let denom: BigInt = w.alpha.iter().map(|&e| factorial(e)).product();
    Superfunction::monomial(
        chart,
        Monomial {
            alpha: w.alpha.clone(),
            beta: w.beta,
        },
        Rational::new(1.into(), denom),
    )
}

fn words_of_order(chart: &ChartRef, total: usize) -> Vec<DerivWord> {
    let p = chart.p();
    let q = chart.q();
    let mut out = Vec::new();
    let mut subsets: Vec<OddSet> = vec![OddSet::EMPTY];
    for mask in 1u32..(1u32 << q) {
        subsets.push(OddSet(mask));
    }
    for beta in subsets {
        let j = beta.len();
        if j > total {
            continue;
        }
        for alpha in compositions(total - j, p) {
            out.push(DerivWord { alpha, beta });
        }
    }
    out
}

/// All ways to write `total` as an ordered sum of `parts` nonnegatives.
fn compositions(total: usize, parts: usize) -> Vec<Vec<u32>> {
    if parts == 0 {
        return if total == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in compositions(total - first, parts - 1) {
            let mut v = vec![first as u32];
            v.append(&mut rest);
            out.push(v);
        }
    }
    out
}

/// Recovers the normal form of an order-bounded black box from its values on
/// test monomials, degree by degree: at each word the residual action not
/// yet explained by lower terms is exactly the coefficient.
pub fn extract_diffop<F>(apply: F, chart: &ChartRef, max_order: usize) -> SuperDiffOp
where
    F: Fn(&Superfunction) -> Superfunction,
{
    let mut acc = SuperDiffOp::zero(chart);
    for ord in 0..=max_order {
        for w in words_of_order(chart, ord) {
            let m = test_monomial(chart, &w);
            let c = apply(&m).sub(&acc.apply(&m));
            acc.add_term(w, c);
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chart::Chart;
    use crate::rat;

    fn coord(chart: &ChartRef, k: usize) -> Superfunction {
        Superfunction::coordinate(chart, k).unwrap()
    }

    #[test]
    fn both_normalizers_agree_on_fixed_expressions() {
        let c = Chart::standard(1, 2);
        let x = coord(&c, 0);
        let xi1 = coord(&c, 1);
        let xi2 = coord(&c, 2);
        let d_x = || OperatorExpr::partial(&c, 0).unwrap();
        let d_xi1 = || OperatorExpr::partial(&c, 1).unwrap();
        let d_xi2 = || OperatorExpr::partial(&c, 2).unwrap();
        let exprs = vec![
            OperatorExpr::mul(x.clone()),
            d_x(),
            OperatorExpr::compose(d_xi1(), OperatorExpr::mul(xi1.mul(&xi2))),
            OperatorExpr::sum(
                OperatorExpr::compose(OperatorExpr::mul(xi1.clone()), d_x()),
                OperatorExpr::scale(rat(-2, 3), OperatorExpr::compose(d_xi2(), d_xi1())),
            ),
            OperatorExpr::compose(
                OperatorExpr::compose(d_x(), OperatorExpr::mul(x.pow(2).mul(&xi2))),
                OperatorExpr::sum(d_xi2(), OperatorExpr::mul(xi1.clone())),
            ),
        ];
        for e in exprs {
            assert_eq!(e.normal_form(), e.normal_form_extraction());
        }
    }

    #[test]
    fn projector_identity_in_one_odd_variable() {
        // (xi d_xi)^2 = xi d_xi.
        let c = Chart::standard(0, 1);
        let e = OperatorExpr::compose(
            OperatorExpr::mul(coord(&c, 0)),
            OperatorExpr::partial(&c, 0).unwrap(),
        );
        let square = OperatorExpr::compose(e.clone(), e.clone());
        assert_eq!(square.normal_form(), e.normal_form());
        assert_eq!(square.normal_form(), square.normal_form_extraction());
    }

    #[test]
    fn normal_form_application_matches_expression_action() {
        let c = Chart::standard(2, 2);
        let x2 = coord(&c, 1);
        let xi1 = coord(&c, 2);
        let e = OperatorExpr::compose(
            OperatorExpr::sum(
                OperatorExpr::partial(&c, 0).unwrap(),
                OperatorExpr::mul(xi1.clone()),
            ),
            OperatorExpr::compose(
                OperatorExpr::partial(&c, 3).unwrap(),
                OperatorExpr::mul(x2.mul(&xi1)),
            ),
        );
        let nf = e.normal_form();
        for f in [
            coord(&c, 0).mul(&coord(&c, 3)),
            x2.pow(3),
            xi1.mul(&coord(&c, 3)).add(&coord(&c, 0)),
        ] {
            assert_eq!(nf.apply(&f), e.apply(&f));
        }
    }

    #[test]
    fn extraction_bound_is_safe_when_order_drops() {
        // d_xi o d_xi has syntactic bound 2 but is zero.
        let c = Chart::standard(0, 1);
        let e = OperatorExpr::compose(
            OperatorExpr::partial(&c, 0).unwrap(),
            OperatorExpr::partial(&c, 0).unwrap(),
        );
        assert!(e.normal_form().is_zero());
        assert!(e.normal_form_extraction().is_zero());
    }
}

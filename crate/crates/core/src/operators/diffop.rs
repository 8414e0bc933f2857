use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use crate::chart::{same_chart, ChartRef, Parity};
use crate::error::Result;
use crate::koszul::OddSet;
use crate::superfunction::Superfunction;
use crate::Rational;

/// A derivative word d_x^alpha d_xi^beta.  The odd block is composed in
/// decreasing index order, so applying the word hits the lowest odd index
/// first.  Basis words with the coefficient on the left span all operators.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct DerivWord {
    pub alpha: Vec<u32>,
    pub beta: OddSet,
}

impl DerivWord {
    pub fn empty(p: usize) -> DerivWord {
        DerivWord {
            alpha: vec![0; p],
            beta: OddSet::EMPTY,
        }
    }

    pub fn even_partial(p: usize, i: usize) -> DerivWord {
        let mut w = DerivWord::empty(p);
        w.alpha[i] = 1;
        w
    }

    pub fn odd_partial(p: usize, a: usize) -> DerivWord {
        DerivWord {
            alpha: vec![0; p],
            beta: OddSet::singleton(a),
        }
    }

    pub fn order(&self) -> usize {
        self.alpha.iter().sum::<u32>() as usize + self.beta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order() == 0
    }

    /// Parity of the word as an operator.
    pub fn parity(&self) -> Parity {
        Parity::from_odd_degree(self.beta.len())
    }
}

/// Words sort by order, then x-partials before xi-partials (higher exponents
/// on earlier coordinates first), fixing the canonical display order.
impl Ord for DerivWord {
    fn cmp(&self, other: &Self) -> Ordering {
        self.order()
            .cmp(&other.order())
            .then_with(|| other.alpha.cmp(&self.alpha))
            .then_with(|| self.beta.cmp(&other.beta))
    }
}

impl PartialOrd for DerivWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A superdifferential operator in normal form: a finite sum of terms
/// coefficient * derivative-word, the coefficient standing to the left.
/// Normal forms are unique, so structural equality is operator equality.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SuperDiffOp {
    chart: ChartRef,
    terms: BTreeMap<DerivWord, Superfunction>,
}

impl SuperDiffOp {
    pub fn zero(chart: &ChartRef) -> SuperDiffOp {
        SuperDiffOp {
            chart: chart.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn identity(chart: &ChartRef) -> SuperDiffOp {
        SuperDiffOp::mul_operator(&Superfunction::one(chart))
    }

    /// The multiplication operator m_f.
    pub fn mul_operator(f: &Superfunction) -> SuperDiffOp {
        let mut op = SuperDiffOp::zero(f.chart());
        op.add_term(DerivWord::empty(f.chart().p()), f.clone());
        op
    }

    /// The coordinate partial as an operator.
    pub fn partial(chart: &ChartRef, k: usize) -> Result<SuperDiffOp> {
        chart.check_coord(k)?;
        let p = chart.p();
        let w = if k < p {
            DerivWord::even_partial(p, k)
        } else {
            DerivWord::odd_partial(p, chart.odd_index(k))
        };
        let mut op = SuperDiffOp::zero(chart);
        op.add_term(w, Superfunction::one(chart));
        Ok(op)
    }

    pub fn from_terms<I>(chart: &ChartRef, terms: I) -> SuperDiffOp
    where
        I: IntoIterator<Item = (DerivWord, Superfunction)>,
    {
        let mut op = SuperDiffOp::zero(chart);
        for (w, c) in terms {
            op.add_term(w, c);
        }
        op
    }

    pub fn chart(&self) -> &ChartRef {
        &self.chart
    }

    pub fn terms(&self) -> impl Iterator<Item = (&DerivWord, &Superfunction)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, w: &DerivWord) -> Superfunction {
        self.terms
            .get(w)
            .cloned()
            .unwrap_or_else(|| Superfunction::zero(&self.chart))
    }

    pub(crate) fn add_term(&mut self, w: DerivWord, c: Superfunction) {
        if c.is_zero() {
            return;
        }
        debug_assert!(same_chart(c.chart(), &self.chart));
        debug_assert_eq!(w.alpha.len(), self.chart.p());
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get().add(&c);
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &SuperDiffOp) -> SuperDiffOp {
        assert!(
            same_chart(&self.chart, &other.chart),
            "chart mismatch in operator sum"
        );
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &SuperDiffOp) -> SuperDiffOp {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> SuperDiffOp {
        self.map_coeffs(|c| c.neg())
    }

    pub fn scale(&self, r: &Rational) -> SuperDiffOp {
        self.map_coeffs(|c| c.scale(r))
    }

    fn map_coeffs(&self, f: impl Fn(&Superfunction) -> Superfunction) -> SuperDiffOp {
        let mut out = SuperDiffOp::zero(&self.chart);
        for (w, c) in &self.terms {
            out.add_term(w.clone(), f(c));
        }
        out
    }

    /// Left multiplication by a function: m_f o D.
    pub fn left_mul(&self, f: &Superfunction) -> SuperDiffOp {
        self.map_coeffs(|c| f.mul(c))
    }

    /// Applies the operator: for each term, the odd partials act in
    /// increasing index order (the rightmost factor first), then the even
    /// partials, then the coefficient multiplies from the left.
    pub fn apply(&self, f: &Superfunction) -> Superfunction {
        assert!(
            same_chart(f.chart(), &self.chart),
            "chart mismatch in operator application"
        );
        let mut out = Superfunction::zero(&self.chart);
        for (w, c) in &self.terms {
            let mut g = f.clone();
            for a in w.beta.iter() {
                g = g.partial(self.chart.odd_coord(a));
                if g.is_zero() {
                    break;
                }
            }
            for (i, &e) in w.alpha.iter().enumerate() {
                for _ in 0..e {
                    g = g.partial(i);
                }
                if g.is_zero() {
                    break;
                }
            }
            out = out.add(&c.mul(&g));
        }
        out
    }

    /// Composition, renormalized: commute every derivative word of `self`
    /// through the coefficients of `other` by the graded Leibniz rule, then
    /// merge derivative words.
    pub fn compose(&self, other: &SuperDiffOp) -> SuperDiffOp {
        assert!(
            same_chart(&self.chart, &other.chart),
            "chart mismatch in composition"
        );
        let mut out = SuperDiffOp::zero(&self.chart);
        for (w1, c1) in &self.terms {
            for (w2, c2) in &other.terms {
                let (c2_even, c2_odd) = c2.parity_parts();
                for g in [c2_even, c2_odd] {
                    if g.is_zero() {
                        continue;
                    }
                    let pushed = word_times_function(&self.chart, w1, &g);
                    for (v, h) in &pushed.terms {
                        if let Some((beta, negate)) = v.beta.mul_words(w2.beta) {
                            let alpha: Vec<u32> = v
                                .alpha
                                .iter()
                                .zip(&w2.alpha)
                                .map(|(a, b)| a + b)
                                .collect();
                            let mut coeff = c1.mul(h);
                            if negate {
                                coeff = coeff.neg();
                            }
                            out.add_term(DerivWord { alpha, beta }, coeff);
                        }
                    }
                }
            }
        }
        out
    }

    /// Even and odd parts as an operator; a term's parity is the coefficient
    /// parity plus the number of odd partials.
    pub fn parity_parts(&self) -> (SuperDiffOp, SuperDiffOp) {
        let mut even = SuperDiffOp::zero(&self.chart);
        let mut odd = SuperDiffOp::zero(&self.chart);
        for (w, c) in &self.terms {
            let (c_even, c_odd) = c.parity_parts();
            let (goes_even, goes_odd) = if w.parity().is_odd() {
                (c_odd, c_even)
            } else {
                (c_even, c_odd)
            };
            even.add_term(w.clone(), goes_even);
            odd.add_term(w.clone(), goes_odd);
        }
        (even, odd)
    }

    pub fn part(&self, parity: Parity) -> SuperDiffOp {
        let (even, odd) = self.parity_parts();
        match parity {
            Parity::Even => even,
            Parity::Odd => odd,
        }
    }

    pub fn homogeneous_parity(&self) -> Option<Parity> {
        let (even, odd) = self.parity_parts();
        match (even.is_zero(), odd.is_zero()) {
            (_, true) => Some(Parity::Even),
            (true, false) => Some(Parity::Odd),
            _ => None,
        }
    }

    /// Supercommutator [D, E] = DE - (-1)^{|D||E|} ED, extended bilinearly
    /// over the parity decompositions of both arguments.
    pub fn scommutator(&self, other: &SuperDiffOp) -> SuperDiffOp {
        let mut out = SuperDiffOp::zero(&self.chart);
        let (d0, d1) = self.parity_parts();
        let (e0, e1) = other.parity_parts();
        for (dp, d) in [(Parity::Even, d0), (Parity::Odd, d1)] {
            if d.is_zero() {
                continue;
            }
            for (ep, e) in [(Parity::Even, &e0), (Parity::Odd, &e1)] {
                if e.is_zero() {
                    continue;
                }
                let de = d.compose(e);
                let ed = e.compose(&d);
                out = out.add(&if dp.koszul_is_negative(ep) {
                    de.add(&ed)
                } else {
                    de.sub(&ed)
                });
            }
        }
        out
    }

    /// Normal-form order: the longest derivative word; -1 for the zero
    /// operator, so that every filtration degree is inhabited.
    pub fn order(&self) -> i64 {
        self.terms
            .keys()
            .map(|w| w.order() as i64)
            .max()
            .unwrap_or(-1)
    }

    /// Order read off algebraically: the least k such that all k+1-fold
    /// commutators with coordinate multiplication operators vanish.  This
    /// never consults the stored words beyond detecting zero, so it serves
    /// as an independent oracle for `order`.
    pub fn order_by_commutators(&self) -> i64 {
        if self.is_zero() {
            return -1;
        }
        let cap = self.order() + 1;
        for k in 0..=cap {
            if self.commutators_vanish(k + 1) {
                return k;
            }
        }
        cap + 1
    }

    fn commutators_vanish(&self, depth: i64) -> bool {
        if depth == 0 {
            return self.is_zero();
        }
        (0..self.chart.dim()).all(|k| {
            let u = Superfunction::coordinate(&self.chart, k).expect("valid coordinate");
            self.scommutator(&SuperDiffOp::mul_operator(&u))
                .commutators_vanish(depth - 1)
        })
    }
}

/// word o m_g for homogeneous g, as a normal-form operator.  Peels the
/// rightmost factor of the word and applies the graded commutation rule
/// d o m_g = m_{dg} +/- m_g o d; leftover factors reattach in canonical
/// order because only the rightmost factor is ever removed.
fn word_times_function(chart: &ChartRef, word: &DerivWord, g: &Superfunction) -> SuperDiffOp {
    debug_assert!(g.homogeneous_parity().is_some());
    if g.is_zero() {
        return SuperDiffOp::zero(chart);
    }
    if let Some(a) = word.beta.iter().next() {
        // Rightmost factor is the lowest odd partial.
        let rest = DerivWord {
            alpha: word.alpha.clone(),
            beta: word.beta.remove(a),
        };
        let dg = g.partial(chart.odd_coord(a));
        let mut out = word_times_function(chart, &rest, &dg);
        let swapped = if g.homogeneous_parity() == Some(Parity::Odd) {
            g.neg()
        } else {
            g.clone()
        };
        let tail = word_times_function(chart, &rest, &swapped);
        for (v, h) in &tail.terms {
            debug_assert!(v.beta.iter().all(|b| b > a));
            let w = DerivWord {
                alpha: v.alpha.clone(),
                beta: v.beta.union(OddSet::singleton(a)),
            };
            out.add_term(w, h.clone());
        }
        out
    } else if let Some(i) = (0..word.alpha.len()).rev().find(|&i| word.alpha[i] > 0) {
        let mut rest = word.clone();
        rest.alpha[i] -= 1;
        let mut out = word_times_function(chart, &rest, &g.partial(i));
        let tail = word_times_function(chart, &rest, g);
        for (v, h) in &tail.terms {
            debug_assert!(v.beta.is_empty());
            let mut w = v.clone();
            w.alpha[i] += 1;
            out.add_term(w, h.clone());
        }
        out
    } else {
        SuperDiffOp::mul_operator(g)
    }
}

/// First-order characterization identity, checked componentwise over the
/// parity decompositions of D and f:
///   D(fg) = (Df)g + (-1)^{|D||f|} f (Dg) - (D1) f g.
/// Returns true exactly when every component identity holds; operators of
/// order <= 1 always pass, and some order-2 operator fails on some pair.
pub fn check_first_order_leibniz(
    d: &SuperDiffOp,
    f: &Superfunction,
    g: &Superfunction,
) -> bool {
    let one = Superfunction::one(d.chart());
    let (d0, d1) = d.parity_parts();
    let (f0, f1) = f.parity_parts();
    for (dp, dpart) in [(Parity::Even, d0), (Parity::Odd, d1)] {
        if dpart.is_zero() {
            continue;
        }
        let d_one = dpart.apply(&one);
        for (fp, fpart) in [(Parity::Even, &f0), (Parity::Odd, &f1)] {
            if fpart.is_zero() {
                continue;
            }
            let lhs = dpart.apply(&fpart.mul(g));
            let mut middle = fpart.mul(&dpart.apply(g));
            if dp.koszul_is_negative(fp) {
                middle = middle.neg();
            }
            let rhs = dpart
                .apply(fpart)
                .mul(g)
                .add(&middle)
                .sub(&d_one.mul(fpart).mul(g));
            if lhs != rhs {
                return false;
            }
        }
    }
    true
}

/// Whether [m_f, [m_g, D]] vanishes; true for every pair iff order(D) <= 1.
pub fn check_ad_nilpotent_functions(
    f: &Superfunction,
    g: &Superfunction,
    d: &SuperDiffOp,
) -> bool {
    let inner = SuperDiffOp::mul_operator(g).scommutator(d);
    SuperDiffOp::mul_operator(f).scommutator(&inner).is_zero()
}

impl fmt::Display for SuperDiffOp {
    /// Canonical text: `m(coeff)*d_x1^2*d_xi2*d_xi1`, identity coefficients
    /// omitted, terms in word order joined by ` + `.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (w, c)) in self.terms.iter().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            let is_one = c.is_one();
            let mut lead = true;
            if !is_one || w.is_empty() {
                write!(f, "m({c})")?;
                lead = false;
            }
            for (i, &e) in w.alpha.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if !lead {
                    write!(f, "*")?;
                }
                lead = false;
                write!(f, "d_{}", self.chart.name(i))?;
                if e > 1 {
                    write!(f, "^{e}")?;
                }
            }
            for a in w.beta.iter_desc() {
                if !lead {
                    write!(f, "*")?;
                }
                lead = false;
                write!(f, "d_{}", self.chart.name(self.chart.odd_coord(a)))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chart::Chart;
    use crate::{int, rat};

    fn coord(chart: &ChartRef, k: usize) -> Superfunction {
        Superfunction::coordinate(chart, k).unwrap()
    }

    fn partial(chart: &ChartRef, k: usize) -> SuperDiffOp {
        SuperDiffOp::partial(chart, k).unwrap()
    }

    #[test]
    fn apply_decreasing_odd_block() {
        // d_xi2 d_xi1 applied to xi1 xi2 gives 1: the low partial acts first.
        let c = Chart::standard(0, 2);
        let w = DerivWord {
            alpha: vec![],
            beta: OddSet(0b11),
        };
        let d = SuperDiffOp::from_terms(&c, [(w, Superfunction::one(&c))]);
        let f = coord(&c, 0).mul(&coord(&c, 1));
        assert_eq!(d.apply(&f), Superfunction::one(&c));
        // Same value along the composition route: d_xi1 acts, then d_xi2.
        let via = partial(&c, 1).apply(&partial(&c, 0).apply(&f));
        assert_eq!(via, Superfunction::one(&c));
        assert_eq!(d.to_string(), "d_xi2*d_xi1");
    }

    #[test]
    fn compose_agrees_with_nested_application() {
        let c = Chart::standard(1, 2);
        let x = coord(&c, 0);
        let xi1 = coord(&c, 1);
        let xi2 = coord(&c, 2);
        let d = SuperDiffOp::mul_operator(&xi1)
            .compose(&partial(&c, 0))
            .add(&partial(&c, 2));
        let e = partial(&c, 1).compose(&SuperDiffOp::mul_operator(&x.mul(&xi1).add(&xi2)));
        let de = d.compose(&e);
        for f in [
            x.pow(2),
            xi1.mul(&xi2),
            x.mul(&xi1).add(&xi2.scale(&int(3))),
            Superfunction::one(&c),
        ] {
            assert_eq!(de.apply(&f), d.apply(&e.apply(&f)));
        }
    }

    #[test]
    fn clifford_relations_from_composition() {
        let c = Chart::standard(1, 1);
        let x = coord(&c, 0);
        let xi = coord(&c, 1);
        // [d_x, m_x] = 1 and [d_xi, m_xi] = 1 (the latter an anticommutator).
        assert_eq!(
            partial(&c, 0).scommutator(&SuperDiffOp::mul_operator(&x)),
            SuperDiffOp::identity(&c)
        );
        assert_eq!(
            partial(&c, 1).scommutator(&SuperDiffOp::mul_operator(&xi)),
            SuperDiffOp::identity(&c)
        );
        // d_xi o d_xi = 0.
        assert!(partial(&c, 1).compose(&partial(&c, 1)).is_zero());
    }

    #[test]
    fn order_and_commutator_oracle_agree_on_samples() {
        let c = Chart::standard(1, 1);
        let x = coord(&c, 0);
        let samples = [
            SuperDiffOp::zero(&c),
            SuperDiffOp::mul_operator(&x),
            partial(&c, 0),
            partial(&c, 0).compose(&partial(&c, 0)),
            partial(&c, 1).compose(&partial(&c, 0)).add(&partial(&c, 1)),
            SuperDiffOp::mul_operator(&x).compose(&partial(&c, 1)),
        ];
        let expected = [-1, 0, 1, 2, 2, 1];
        for (d, want) in samples.iter().zip(expected) {
            assert_eq!(d.order(), want);
            assert_eq!(d.order_by_commutators(), want);
        }
    }

    #[test]
    fn second_order_breaks_ad_nilpotency() {
        let c = Chart::standard(1, 0);
        let x = coord(&c, 0);
        let dd = partial(&c, 0).compose(&partial(&c, 0));
        assert!(!check_ad_nilpotent_functions(&x, &x, &dd));
        let inner = SuperDiffOp::mul_operator(&x).scommutator(&dd);
        let twice = SuperDiffOp::mul_operator(&x).scommutator(&inner);
        assert_eq!(twice, SuperDiffOp::identity(&c).scale(&int(2)));
        assert!(check_ad_nilpotent_functions(&x, &x, &partial(&c, 0)));
    }

    #[test]
    fn leibniz_characterizes_first_order() {
        let c = Chart::standard(1, 1);
        let x = coord(&c, 0);
        let xi = coord(&c, 1);
        let first = SuperDiffOp::mul_operator(&xi)
            .compose(&partial(&c, 0))
            .add(&SuperDiffOp::mul_operator(&x));
        assert!(check_first_order_leibniz(&first, &x.mul(&xi), &x.pow(2)));
        assert!(check_first_order_leibniz(&partial(&c, 1), &xi, &xi));
        let dd = partial(&c, 0).compose(&partial(&c, 0));
        assert!(!check_first_order_leibniz(&dd, &x, &x));
    }

    #[test]
    fn parity_split_is_a_decomposition() {
        let c = Chart::standard(1, 2);
        let xi1 = coord(&c, 1);
        let d = SuperDiffOp::mul_operator(&xi1)
            .compose(&partial(&c, 0))
            .add(&partial(&c, 2))
            .add(&SuperDiffOp::mul_operator(&coord(&c, 0)));
        let (even, odd) = d.parity_parts();
        assert_eq!(even.add(&odd), d);
        assert_eq!(even.homogeneous_parity(), Some(Parity::Even));
        assert_eq!(odd.homogeneous_parity(), Some(Parity::Odd));
        assert!(!even.is_zero() && !odd.is_zero());
        assert_eq!(d.homogeneous_parity(), None);
    }

    #[test]
    fn display_normal_form() {
        let c = Chart::standard(2, 2);
        let d = SuperDiffOp::mul_operator(&coord(&c, 2))
            .compose(&partial(&c, 0))
            .compose(&partial(&c, 0))
            .compose(&partial(&c, 3))
            .compose(&partial(&c, 2))
            .scale(&rat(-1, 2));
        assert_eq!(d.to_string(), "m(-1/2*xi1)*d_x1^2*d_xi2*d_xi1");
    }
}

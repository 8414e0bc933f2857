//! Seedable generators for property tests.  Coefficients come from the box
//! -3..=3 and total degrees stay at or below 3 so products remain small.

use rand::Rng;

use crate::chart::{ChartRef, Parity};
use crate::forms::{de_rham, SuperOneForm};
use crate::koszul::OddSet;
use crate::morphisms::ChartMorphism;
use crate::operators::{D1Element, DerivWord, OperatorExpr, SuperDiffOp, SuperVectorField};
use crate::superfunction::{Monomial, Superfunction};
use crate::{int, rat, Rational};

const MAX_WEIGHT: usize = 3;

fn coefficient<R: Rng>(rng: &mut R) -> Rational {
    loop {
        let n = rng.gen_range(-3i64..=3);
        if n != 0 {
            return int(n);
        }
    }
}

fn monomial<R: Rng>(rng: &mut R, chart: &ChartRef) -> Monomial {
    let mut alpha = vec![0u32; chart.p()];
    let mut beta = OddSet::EMPTY;
    let weight = rng.gen_range(0..=MAX_WEIGHT);
    for _ in 0..weight {
        let k = rng.gen_range(0..chart.dim());
        if k < chart.p() {
            alpha[k] += 1;
        } else {
            beta = beta.union(OddSet::singleton(chart.odd_index(k)));
        }
    }
    Monomial { alpha, beta }
}

pub fn superfunction<R: Rng>(rng: &mut R, chart: &ChartRef) -> Superfunction {
    let mut f = Superfunction::zero(chart);
    for _ in 0..rng.gen_range(1..=4) {
        let m = monomial(rng, chart);
        f = f.add(&Superfunction::monomial(chart, m, coefficient(rng)));
    }
    f
}

/// A nonzero part of the requested parity when one exists; zero otherwise
/// (a 0|q chart has no odd part of weight 0, a p|0 chart none at all).
pub fn homogeneous<R: Rng>(rng: &mut R, chart: &ChartRef, parity: Parity) -> Superfunction {
    for _ in 0..64 {
        let f = superfunction(rng, chart).part(parity);
        if !f.is_zero() {
            return f;
        }
    }
    Superfunction::zero(chart)
}

pub fn even<R: Rng>(rng: &mut R, chart: &ChartRef) -> Superfunction {
    homogeneous(rng, chart, Parity::Even)
}

pub fn field<R: Rng>(rng: &mut R, chart: &ChartRef) -> SuperVectorField {
    let coeffs = (0..chart.dim()).map(|_| superfunction(rng, chart)).collect();
    SuperVectorField::new(chart, coeffs).expect("full coefficient list")
}

pub fn homogeneous_field<R: Rng>(
    rng: &mut R,
    chart: &ChartRef,
    parity: Parity,
) -> SuperVectorField {
    for _ in 0..64 {
        let x = field(rng, chart).part(parity);
        if !x.is_zero() {
            return x;
        }
    }
    SuperVectorField::zero(chart)
}

fn deriv_word<R: Rng>(rng: &mut R, chart: &ChartRef, max_order: usize) -> DerivWord {
    let mut w = DerivWord::empty(chart.p());
    let order = rng.gen_range(0..=max_order);
    for _ in 0..order {
        let k = rng.gen_range(0..chart.dim());
        if k < chart.p() {
            w.alpha[k] += 1;
        } else {
            w.beta = w.beta.union(OddSet::singleton(chart.odd_index(k)));
        }
    }
    w
}

pub fn diffop<R: Rng>(rng: &mut R, chart: &ChartRef, max_order: usize) -> SuperDiffOp {
    let mut d = SuperDiffOp::zero(chart);
    for _ in 0..rng.gen_range(1..=3) {
        let w = deriv_word(rng, chart, max_order);
        let c = superfunction(rng, chart);
        d = d.add(&SuperDiffOp::from_terms(chart, [(w, c)]));
    }
    d
}

pub fn homogeneous_diffop<R: Rng>(
    rng: &mut R,
    chart: &ChartRef,
    parity: Parity,
    max_order: usize,
) -> SuperDiffOp {
    for _ in 0..64 {
        let d = diffop(rng, chart, max_order).part(parity);
        if !d.is_zero() {
            return d;
        }
    }
    SuperDiffOp::zero(chart)
}

pub fn first_order<R: Rng>(rng: &mut R, chart: &ChartRef) -> SuperDiffOp {
    D1Element::new(superfunction(rng, chart), field(rng, chart)).to_op()
}

pub fn d1<R: Rng>(rng: &mut R, chart: &ChartRef) -> D1Element {
    D1Element::new(superfunction(rng, chart), field(rng, chart))
}

pub fn homogeneous_d1<R: Rng>(rng: &mut R, chart: &ChartRef, parity: Parity) -> D1Element {
    let scalar = homogeneous(rng, chart, parity);
    let x = homogeneous_field(rng, chart, parity);
    D1Element::new(scalar, x)
}

pub fn expr<R: Rng>(rng: &mut R, chart: &ChartRef, depth: usize) -> OperatorExpr {
    if depth == 0 {
        return if rng.gen_bool(0.5) {
            OperatorExpr::mul(superfunction(rng, chart))
        } else {
            OperatorExpr::partial(chart, rng.gen_range(0..chart.dim())).expect("in range")
        };
    }
    match rng.gen_range(0..8) {
        0 | 1 => OperatorExpr::sum(expr(rng, chart, depth - 1), expr(rng, chart, depth - 1)),
        2..=4 => OperatorExpr::compose(expr(rng, chart, depth - 1), expr(rng, chart, depth - 1)),
        5 => OperatorExpr::scale(
            rat(rng.gen_range(-3..=3), rng.gen_range(1..=3)),
            expr(rng, chart, depth - 1),
        ),
        _ => expr(rng, chart, 0),
    }
}

/// Spanned by differentials of even functions, hence closed and even.
pub fn closed_even_form<R: Rng>(rng: &mut R, chart: &ChartRef) -> SuperOneForm {
    let mut w = de_rham(&even(rng, chart));
    for _ in 0..2 {
        w = w.add(&de_rham(&even(rng, chart)).scale(&coefficient(rng)));
    }
    w
}

/// An invertible chart endomorphism assembled from elementary moves with
/// written-down inverses: shears by expressions free of the sheared
/// coordinate, nonzero rescalings, and coordinate swaps.
pub fn invertible_morphism<R: Rng>(rng: &mut R, chart: &ChartRef, moves: usize) -> ChartMorphism {
    let mut phi = ChartMorphism::identity(chart);
    for _ in 0..moves {
        let next = elementary_move(rng, chart);
        phi = phi.compose(&next).expect("same chart");
    }
    phi
}

fn elementary_move<R: Rng>(rng: &mut R, chart: &ChartRef) -> ChartMorphism {
    let coords: Vec<Superfunction> = (0..chart.dim())
        .map(|k| Superfunction::coordinate(chart, k).expect("in range"))
        .collect();
    let mut images = coords.clone();
    let mut inverse = coords.clone();
    let p = chart.p();
    let q = chart.q();
    match rng.gen_range(0..6) {
        0 if p > 0 => {
            // Shear an even coordinate by an even expression avoiding it.
            let i = rng.gen_range(0..p);
            let shear = drop_coordinate(&even(rng, chart), i);
            images[i] = coords[i].add(&shear);
            inverse[i] = coords[i].sub(&shear);
        }
        1 if p > 0 => {
            let i = rng.gen_range(0..p);
            let c = coefficient(rng);
            images[i] = coords[i].scale(&c);
            inverse[i] = coords[i].scale(&c.recip());
        }
        2 if q > 0 => {
            let a = rng.gen_range(0..q);
            let k = chart.odd_coord(a);
            let shear = drop_coordinate(&homogeneous(rng, chart, Parity::Odd), k);
            images[k] = coords[k].add(&shear);
            inverse[k] = coords[k].sub(&shear);
        }
        3 if q > 0 => {
            let k = chart.odd_coord(rng.gen_range(0..q));
            let c = coefficient(rng);
            images[k] = coords[k].scale(&c);
            inverse[k] = coords[k].scale(&c.recip());
        }
        4 if p > 1 => {
            let i = rng.gen_range(0..p);
            let j = (i + 1 + rng.gen_range(0..p - 1)) % p;
            images.swap(i, j);
            inverse.swap(i, j);
        }
        5 if q > 1 => {
            let a = chart.odd_coord(rng.gen_range(0..q));
            let b = chart.odd_coord(rng.gen_range(0..q));
            if a != b {
                images.swap(a, b);
                inverse.swap(a, b);
            }
        }
        _ => {}
    }
    ChartMorphism::new(chart, chart, images, inverse).expect("elementary move inverts")
}

/// Projects away every monomial containing the coordinate k.
fn drop_coordinate(f: &Superfunction, k: usize) -> Superfunction {
    let chart = f.chart().clone();
    let mut out = Superfunction::zero(&chart);
    for (m, c) in f.terms() {
        let uses = if k < chart.p() {
            m.alpha[k] > 0
        } else {
            m.beta.contains(chart.odd_index(k))
        };
        if !uses {
            out = out.add(&Superfunction::monomial(&chart, m.clone(), c.clone()));
        }
    }
    out
}

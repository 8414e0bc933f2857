//! Automorphisms of the order-one algebra built from a coordinate change, a
//! nonzero scalar, and a generalized divergence.
//!
//! The map sends f + X to subst(kappa*f + gamma(X)) + (X pushed forward).
//! Bracket preservation is exactly the cocycle identity for gamma and does not
//! involve kappa at all; kappa = 0 still preserves brackets but kills
//! bijectivity, which is why the checker builds an explicit inverse.

use std::fmt;

use num_traits::Zero;
use rand::Rng;

use crate::chart::{same_chart, ChartRef};
use crate::divergence::{classify_cocycle, GeneralizedDivergence};
use crate::error::{Error, Result};
use crate::morphisms::ChartMorphism;
use crate::operators::{D1Element, SuperVectorField};
use crate::superfunction::Superfunction;
use crate::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct D1Automorphism {
    phi: ChartMorphism,
    kappa: Rational,
    gamma: GeneralizedDivergence,
}

impl D1Automorphism {
    /// Validated constructor: phi must map the chart to itself, kappa must be
    /// nonzero, and gamma must be a genuine generalized divergence.
    pub fn new(
        phi: ChartMorphism,
        kappa: Rational,
        gamma: GeneralizedDivergence,
    ) -> Result<D1Automorphism> {
        if !same_chart(phi.source(), phi.target())
            || !same_chart(phi.source(), gamma.chart())
        {
            return Err(Error::ChartMismatch);
        }
        if kappa.is_zero() {
            return Err(Error::KappaZero);
        }
        let gamma = GeneralizedDivergence::new(gamma.a().clone(), gamma.omega().clone())?;
        Ok(D1Automorphism { phi, kappa, gamma })
    }

    /// Admits degenerate data (kappa = 0, invalid gamma) so the checker can
    /// demonstrate failures.
    pub fn new_unchecked(
        phi: ChartMorphism,
        kappa: Rational,
        gamma: GeneralizedDivergence,
    ) -> D1Automorphism {
        D1Automorphism { phi, kappa, gamma }
    }

    pub fn identity(chart: &ChartRef) -> D1Automorphism {
        D1Automorphism {
            phi: ChartMorphism::identity(chart),
            kappa: Rational::from_integer(1.into()),
            gamma: GeneralizedDivergence::new_unchecked(
                Rational::zero(),
                crate::forms::SuperOneForm::zero(chart),
            ),
        }
    }

    pub fn chart(&self) -> &ChartRef {
        self.gamma.chart()
    }

    pub fn phi(&self) -> &ChartMorphism {
        &self.phi
    }

    pub fn kappa(&self) -> &Rational {
        &self.kappa
    }

    pub fn gamma(&self) -> &GeneralizedDivergence {
        &self.gamma
    }

    pub fn apply(&self, e: &D1Element) -> Result<D1Element> {
        if !same_chart(e.chart(), self.chart()) {
            return Err(Error::ChartMismatch);
        }
        let scalar = e.scalar.scale(&self.kappa).add(&self.gamma.apply(&e.field));
        Ok(D1Element::new(
            self.phi.pullback(&scalar)?,
            self.phi.pushforward_field(&e.field)?,
        ))
    }

    /// Builds the inverse triple (phi^-1, 1/kappa, gamma') where gamma' is
    /// recovered by classification from the functional equation
    /// gamma'(Y) = -(1/kappa) * subst(gamma(Y pulled back)).
    pub fn inverse<R: Rng>(&self, rng: &mut R, trials: usize) -> Result<D1Automorphism> {
        if self.kappa.is_zero() {
            return Err(Error::KappaZero);
        }
        let psi = self.phi.inverse();
        let kappa_inv = self.kappa.recip();
        let neg_inv = -kappa_inv.clone();
        let gamma_prime = classify_cocycle(
            self.chart(),
            |y: &SuperVectorField| {
                let back = psi
                    .pushforward_field(y)
                    .expect("inverse morphism acts on the same chart");
                self.phi
                    .pullback(&self.gamma.apply(&back))
                    .expect("pullback stays on the chart")
                    .scale(&neg_inv)
            },
            rng,
            trials,
        )?;
        Ok(D1Automorphism {
            phi: psi,
            kappa: kappa_inv,
            gamma: gamma_prime,
        })
    }
}

impl fmt::Display for D1Automorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.phi.is_identity() {
            write!(f, "auto(id, {}, {}, {})", self.kappa, self.gamma.a(), self.gamma.omega())
        } else {
            write!(
                f,
                "auto({}, {}, {}, {})",
                self.phi,
                self.kappa,
                self.gamma.a(),
                self.gamma.omega()
            )
        }
    }
}

/// Why a candidate failed the automorphism check, with a concrete witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AutoCheckFailure {
    /// A deterministic or random pair whose bracket is not preserved.
    BracketPair(D1Element, D1Element),
    /// No inverse could be built; kappa = 0 lands here even though such maps
    /// preserve brackets.
    InverseConstruction(Error),
    /// The constructed inverse fails to undo the map on this probe.
    InverseRoundTrip(D1Element),
}

impl fmt::Display for AutoCheckFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AutoCheckFailure::BracketPair(d, e) => write!(
                f,
                "bracket not preserved on the pair ({}, {})",
                d.to_op(),
                e.to_op()
            ),
            AutoCheckFailure::InverseConstruction(err) => {
                write!(f, "no inverse: {err}")
            }
            AutoCheckFailure::InverseRoundTrip(e) => {
                write!(f, "inverse fails to undo the map on {}", e.to_op())
            }
        }
    }
}

fn probe_elements(chart: &ChartRef) -> Vec<D1Element> {
    let zero_field = SuperVectorField::zero(chart);
    let zero_fn = Superfunction::zero(chart);
    let mut probes = vec![D1Element::new(Superfunction::one(chart), zero_field.clone())];
    for k in 0..chart.dim() {
        let u = Superfunction::coordinate(chart, k).expect("coordinate in range");
        let d = SuperVectorField::coordinate_field(chart, k).expect("coordinate in range");
        probes.push(D1Element::new(u.clone(), zero_field.clone()));
        probes.push(D1Element::new(zero_fn.clone(), d.right_mul(&u)));
        probes.push(D1Element::new(zero_fn.clone(), d));
    }
    probes
}

fn brackets_preserved(auto: &D1Automorphism, d: &D1Element, e: &D1Element) -> bool {
    let lhs = auto.apply(&d.bracket(e)).expect("probe on the chart");
    let rhs = auto
        .apply(d)
        .expect("probe on the chart")
        .bracket(&auto.apply(e).expect("probe on the chart"));
    lhs == rhs
}

/// Full certification: a deterministic bracket sweep, inverse construction,
/// round trips through the inverse, then random bracket pairs.
pub fn check_d1_automorphism<R: Rng>(
    auto: &D1Automorphism,
    rng: &mut R,
    trials: usize,
) -> std::result::Result<(), AutoCheckFailure> {
    let chart = auto.chart().clone();
    let probes = probe_elements(&chart);
    for d in &probes {
        for e in &probes {
            if !brackets_preserved(auto, d, e) {
                return Err(AutoCheckFailure::BracketPair(d.clone(), e.clone()));
            }
        }
    }

    let inverse = auto
        .inverse(rng, 4)
        .map_err(AutoCheckFailure::InverseConstruction)?;
    for e in &probes {
        let there = auto.apply(e).expect("probe on the chart");
        let back = inverse.apply(&there).expect("probe on the chart");
        if back != *e {
            return Err(AutoCheckFailure::InverseRoundTrip(e.clone()));
        }
        let pre = inverse.apply(e).expect("probe on the chart");
        let again = auto.apply(&pre).expect("probe on the chart");
        if again != *e {
            return Err(AutoCheckFailure::InverseRoundTrip(e.clone()));
        }
    }

    for _ in 0..trials {
        let d = crate::random::d1(rng, &chart);
        let e = crate::random::d1(rng, &chart);
        if !brackets_preserved(auto, &d, &e) {
            return Err(AutoCheckFailure::BracketPair(d, e));
        }
    }
    Ok(())
}

pub fn verify_d1_automorphism<R: Rng>(
    auto: &D1Automorphism,
    rng: &mut R,
    trials: usize,
) -> bool {
    check_d1_automorphism(auto, rng, trials).is_ok()
}

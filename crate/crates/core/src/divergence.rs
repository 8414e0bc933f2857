//! Divergence-type functionals on vector fields.
//!
//! The canonical divergence of a field written with right coefficients
//! X = sum_k d_k g^k is candiv(X) = sum_k d_k(g^k).  A generalized divergence
//! is a pair (a, omega) acting as X |-> a*candiv(X) + <omega, X> with omega an
//! even closed one-form; these are exactly the maps satisfying the cocycle
//! identity gamma([X, Y]) = X(gamma(Y)) - (-1)^{|X||Y|} Y(gamma(X)).
//! Berezinian sections supply the geometric source of such maps.

use std::fmt;

use num_traits::{One, Zero};
use rand::Rng;

use crate::chart::{same_chart, ChartRef, Parity};
use crate::error::{Error, Result};
use crate::forms::{de_rham, poincare_primitive, SuperOneForm};
use crate::morphisms::ChartMorphism;
use crate::operators::SuperVectorField;
use crate::superfunction::Superfunction;
use crate::Rational;

/// Canonical divergence in the chart's coordinates.
pub fn candiv(x: &SuperVectorField) -> Superfunction {
    let chart = x.chart().clone();
    let mut out = Superfunction::zero(&chart);
    for (k, g) in x.right_coefficients().iter().enumerate() {
        out = out.add(&g.partial(k));
    }
    out
}

/// The pair (a, omega) acting by a*candiv + <omega, .>.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneralizedDivergence {
    a: Rational,
    omega: SuperOneForm,
}

impl GeneralizedDivergence {
    /// Validated constructor: omega must be even and closed.
    pub fn new(a: Rational, omega: SuperOneForm) -> Result<GeneralizedDivergence> {
        if !omega.is_even() {
            return Err(Error::NotEven);
        }
        if !omega.is_closed() {
            return Err(Error::NotClosed);
        }
        Ok(GeneralizedDivergence { a, omega })
    }

    /// Skips validation; the result need not satisfy the cocycle identity.
    pub fn new_unchecked(a: Rational, omega: SuperOneForm) -> GeneralizedDivergence {
        GeneralizedDivergence { a, omega }
    }

    pub fn canonical(chart: &ChartRef) -> GeneralizedDivergence {
        GeneralizedDivergence {
            a: Rational::one(),
            omega: SuperOneForm::zero(chart),
        }
    }

    pub fn chart(&self) -> &ChartRef {
        self.omega.chart()
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn omega(&self) -> &SuperOneForm {
        &self.omega
    }

    pub fn apply(&self, x: &SuperVectorField) -> Superfunction {
        assert!(same_chart(self.chart(), x.chart()), "chart mismatch");
        candiv(x).scale(&self.a).add(&self.omega.pair(x))
    }
}

impl fmt::Display for GeneralizedDivergence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "gdiv({}, {})", self.a, self.omega)
    }
}

/// Checks the cocycle identity for gamma on one pair of fields.  Inhomogeneous
/// fields are handled by bilinearity: every pair of parity parts must satisfy
/// the signed identity on its own.
pub fn verify_cocycle<F>(gamma: F, x: &SuperVectorField, y: &SuperVectorField) -> bool
where
    F: Fn(&SuperVectorField) -> Superfunction,
{
    let (xe, xo) = x.parity_parts();
    let (ye, yo) = y.parity_parts();
    for (px, xp) in [(Parity::Even, &xe), (Parity::Odd, &xo)] {
        for (py, yp) in [(Parity::Even, &ye), (Parity::Odd, &yo)] {
            if xp.is_zero() || yp.is_zero() {
                continue;
            }
            let lhs = gamma(&xp.bracket(yp));
            let cross = yp.apply(&gamma(xp));
            let rhs = if px.koszul_is_negative(py) {
                xp.apply(&gamma(yp)).add(&cross)
            } else {
                xp.apply(&gamma(yp)).sub(&cross)
            };
            if lhs != rhs {
                return false;
            }
        }
    }
    true
}

/// Checks gamma(X.f) = gamma(X)*f + a*X(f) for one field and one function.
pub fn verify_gdiv_law(gd: &GeneralizedDivergence, x: &SuperVectorField, f: &Superfunction) -> bool {
    let lhs = gd.apply(&x.right_mul(f));
    let rhs = gd.apply(x).mul(f).add(&x.apply(f).scale(&gd.a));
    lhs == rhs
}

fn constant_value(f: &Superfunction) -> Option<Rational> {
    let c = f.constant_term();
    if *f == Superfunction::constant(f.chart(), c.clone()) {
        Some(c)
    } else {
        None
    }
}

/// Recovers the pair (a, omega) from a black-box cocycle.  Probes are the
/// coordinate fields d_k and their right multiples d_k u^k: the first read off
/// omega, the second isolate a.  The candidate is validated structurally, then
/// replayed against the black box on random fields.
pub fn classify_cocycle<F, R>(
    chart: &ChartRef,
    gamma: F,
    rng: &mut R,
    trials: usize,
) -> Result<GeneralizedDivergence>
where
    F: Fn(&SuperVectorField) -> Superfunction,
    R: Rng,
{
    let dim = chart.dim();
    if dim == 0 {
        return Err(Error::UnsupportedChart(0, 0));
    }
    let basis: Vec<SuperVectorField> = (0..dim)
        .map(|k| SuperVectorField::coordinate_field(chart, k).expect("coordinate in range"))
        .collect();
    let scaled: Vec<SuperVectorField> = (0..dim)
        .map(|k| {
            let u = Superfunction::coordinate(chart, k).expect("coordinate in range");
            basis[k].right_mul(&u)
        })
        .collect();
    let probes: Vec<&SuperVectorField> = basis.iter().chain(scaled.iter()).collect();
    for x in &probes {
        for y in &probes {
            if !verify_cocycle(&gamma, x, y) {
                return Err(Error::NotACocycle);
            }
        }
    }

    let components: Vec<Superfunction> = basis.iter().map(&gamma).collect();
    let mut a: Option<Rational> = None;
    for k in 0..dim {
        let u = Superfunction::coordinate(chart, k).expect("coordinate in range");
        let residue = gamma(&scaled[k]).sub(&components[k].mul(&u));
        let c = constant_value(&residue).ok_or(Error::ProbesInconsistent)?;
        match &a {
            None => a = Some(c),
            Some(prev) if *prev == c => {}
            Some(_) => return Err(Error::ProbesInconsistent),
        }
    }
    let a = a.expect("chart has at least one coordinate");
    let omega = SuperOneForm::new(chart, components)?;
    let gd = GeneralizedDivergence::new(a, omega)?;

    for _ in 0..trials {
        let x = crate::random::field(rng, chart);
        if gd.apply(&x) != gamma(&x) {
            return Err(Error::ClassifyMismatch);
        }
    }
    Ok(gd)
}

/// A generalized divergence is a coboundary X |-> X(f) exactly when a = 0 and
/// omega is exact; returns the primitive in that case, None when a != 0.
pub fn is_coboundary(gd: &GeneralizedDivergence) -> Result<Option<Superfunction>> {
    if !gd.a.is_zero() {
        return Ok(None);
    }
    poincare_primitive(&gd.omega).map(Some)
}

/// Shifts a unit-coefficient divergence by an even function g, landing on
/// (1, omega + dg).  This is the divergence of the rescaled section.
pub fn rescale_divergence(
    gd: &GeneralizedDivergence,
    g: &Superfunction,
) -> Result<GeneralizedDivergence> {
    if !gd.a.is_one() {
        return Err(Error::NotADivergence);
    }
    if !g.is_even() {
        return Err(Error::NotEven);
    }
    assert!(same_chart(gd.chart(), g.chart()), "chart mismatch");
    GeneralizedDivergence::new(Rational::one(), gd.omega.add(&de_rham(g)))
}

/// A coefficient function against the coordinate Berezin volume.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BerezinianSection {
    chart: ChartRef,
    rho: Superfunction,
}

impl BerezinianSection {
    pub fn new(rho: Superfunction) -> BerezinianSection {
        let chart = rho.chart().clone();
        BerezinianSection { chart, rho }
    }

    pub fn coordinate_volume(chart: &ChartRef) -> BerezinianSection {
        BerezinianSection::new(Superfunction::one(chart))
    }

    pub fn chart(&self) -> &ChartRef {
        &self.chart
    }

    pub fn rho(&self) -> &Superfunction {
        &self.rho
    }

    /// Volumes are the sections with even invertible coefficient.
    pub fn is_volume(&self) -> bool {
        self.rho.is_even() && self.rho.invert().is_some()
    }
}

impl fmt::Display for BerezinianSection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ber({})", self.rho)
    }
}

/// Divergence of X against the volume rho: rho^-1 times the signed sum of
/// derivatives of rho * (left coefficient).  Odd slots pick up the sign of
/// the coefficient's parity, split by parts when inhomogeneous.
pub fn div_from_berezinian(s: &BerezinianSection, x: &SuperVectorField) -> Result<Superfunction> {
    if !same_chart(s.chart(), x.chart()) {
        return Err(Error::ChartMismatch);
    }
    let inv = match s.rho.invert() {
        Some(inv) if s.rho.is_even() => inv,
        _ => return Err(Error::NotAVolume),
    };
    let chart = s.chart();
    let mut acc = Superfunction::zero(chart);
    for k in 0..chart.dim() {
        let rf = s.rho.mul(x.coeff(k));
        if chart.parity(k).is_odd() {
            let (even, odd) = rf.parity_parts();
            acc = acc.add(&even.partial(k)).sub(&odd.partial(k));
        } else {
            acc = acc.add(&rf.partial(k));
        }
    }
    Ok(inv.mul(&acc))
}

/// Cofactor expansion along the first row; entries must commute, which holds
/// for the even entries produced by bundle-type morphisms.
fn determinant(m: &[Vec<Superfunction>], chart: &ChartRef) -> Superfunction {
    let n = m.len();
    if n == 0 {
        return Superfunction::one(chart);
    }
    if n == 1 {
        return m[0][0].clone();
    }
    let mut det = Superfunction::zero(chart);
    for j in 0..n {
        if m[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<Superfunction>> = (1..n)
            .map(|i| {
                (0..n)
                    .filter(|&c| c != j)
                    .map(|c| m[i][c].clone())
                    .collect()
            })
            .collect();
        let cof = m[0][j].mul(&determinant(&minor, chart));
        det = if j % 2 == 0 { det.add(&cof) } else { det.sub(&cof) };
    }
    det
}

/// Transports a section along a bundle-type morphism: even images free of odd
/// generators, odd images linear in them.  The new coefficient is
/// det(J) * det(A)^-1 * (rho after the coordinate change), expressed on the
/// target chart.
pub fn berezinian_transform(
    s: &BerezinianSection,
    phi: &ChartMorphism,
) -> Result<BerezinianSection> {
    if !same_chart(s.chart(), phi.source()) {
        return Err(Error::ChartMismatch);
    }
    let src = phi.source();
    let tgt = phi.target();
    if src.p() != tgt.p() || src.q() != tgt.q() {
        return Err(Error::NotBundleType);
    }
    let p = src.p();
    let q = src.q();
    for i in 0..p {
        if phi.images()[i].terms().any(|(m, _)| !m.beta.is_empty()) {
            return Err(Error::NotBundleType);
        }
    }
    for a in 0..q {
        if phi.images()[p + a].terms().any(|(m, _)| m.beta.len() != 1) {
            return Err(Error::NotBundleType);
        }
    }

    let jac: Vec<Vec<Superfunction>> = (0..p)
        .map(|i| (0..p).map(|j| phi.images()[i].partial(j)).collect())
        .collect();
    let odd_block: Vec<Vec<Superfunction>> = (0..q)
        .map(|a| {
            (0..q)
                .map(|b| phi.images()[p + a].partial(tgt.odd_coord(b)))
                .collect()
        })
        .collect();
    let det_j = determinant(&jac, tgt);
    let det_a = determinant(&odd_block, tgt);
    if det_j.invert().is_none() {
        return Err(Error::NonInvertibleDeterminant);
    }
    let det_a_inv = det_a.invert().ok_or(Error::NonInvertibleDeterminant)?;

    let rho_t = phi.pullback(&s.rho)?;
    Ok(BerezinianSection::new(det_j.mul(&det_a_inv).mul(&rho_t)))
}

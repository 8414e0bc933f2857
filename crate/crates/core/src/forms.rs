//! Differential 1-forms with superfunction coefficients: the de Rham
//! differential, closedness, the pairing with vector fields, and an exact
//! primitive for closed even forms.

use std::fmt;

use crate::chart::{same_chart, ChartRef};
use crate::error::{Error, Result};
use crate::operators::SuperVectorField;
use crate::superfunction::Superfunction;
use crate::Rational;

/// A 1-form sum_k du^k w_k; the coefficient w_k sits to the right of the
/// basis symbol du^k.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SuperOneForm {
    chart: ChartRef,
    components: Vec<Superfunction>,
}

impl SuperOneForm {
    pub fn new(chart: &ChartRef, components: Vec<Superfunction>) -> Result<SuperOneForm> {
        if components.len() != chart.dim() {
            return Err(Error::WrongImageCount {
                expected: chart.dim(),
                got: components.len(),
            });
        }
        if !components.iter().all(|c| same_chart(c.chart(), chart)) {
            return Err(Error::ChartMismatch);
        }
        Ok(SuperOneForm {
            chart: chart.clone(),
            components,
        })
    }

    pub fn zero(chart: &ChartRef) -> SuperOneForm {
        SuperOneForm {
            chart: chart.clone(),
            components: vec![Superfunction::zero(chart); chart.dim()],
        }
    }

    /// du^k f as a single component.
    pub fn from_component(chart: &ChartRef, k: usize, f: Superfunction) -> Result<SuperOneForm> {
        chart.check_coord(k)?;
        if !same_chart(f.chart(), chart) {
            return Err(Error::ChartMismatch);
        }
        let mut w = SuperOneForm::zero(chart);
        w.components[k] = f;
        Ok(w)
    }

    pub fn chart(&self) -> &ChartRef {
        &self.chart
    }

    pub fn component(&self, k: usize) -> &Superfunction {
        &self.components[k]
    }

    pub fn components(&self) -> &[Superfunction] {
        &self.components
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Superfunction::is_zero)
    }

    pub fn add(&self, other: &SuperOneForm) -> SuperOneForm {
        assert!(same_chart(&self.chart, &other.chart), "chart mismatch");
        let components = self
            .components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| a.add(b))
            .collect();
        SuperOneForm {
            chart: self.chart.clone(),
            components,
        }
    }

    pub fn sub(&self, other: &SuperOneForm) -> SuperOneForm {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> SuperOneForm {
        SuperOneForm {
            chart: self.chart.clone(),
            components: self.components.iter().map(Superfunction::neg).collect(),
        }
    }

    pub fn scale(&self, r: &Rational) -> SuperOneForm {
        SuperOneForm {
            chart: self.chart.clone(),
            components: self.components.iter().map(|c| c.scale(r)).collect(),
        }
    }

    /// An even form carries du^k coefficients of the parity of u^k.
    pub fn is_even(&self) -> bool {
        self.components
            .iter()
            .enumerate()
            .all(|(k, c)| c.part(self.chart.parity(k).flip()).is_zero())
    }

    /// Evaluation on a field via its right coefficients: for
    /// X = sum_k d_k . g^k this is sum_k w_k g^k.  Right A-linear in X.
    pub fn pair(&self, x: &SuperVectorField) -> Superfunction {
        assert!(same_chart(&self.chart, x.chart()), "chart mismatch");
        let gs = x.right_coefficients();
        let mut out = Superfunction::zero(&self.chart);
        for (w, g) in self.components.iter().zip(&gs) {
            out = out.add(&w.mul(g));
        }
        out
    }

    /// Componentwise closedness: d_i w_j = (-1)^{|u^i||u^j|} d_j w_i for
    /// all pairs, which on an odd diagonal forces d_i w_i = 0.
    pub fn is_closed(&self) -> bool {
        for i in 0..self.chart.dim() {
            for j in i..self.chart.dim() {
                let lhs = self.components[j].partial(i);
                let rhs = self.components[i].partial(j);
                let flip = self.chart.parity(i).koszul_is_negative(self.chart.parity(j));
                let rhs = if flip { rhs.neg() } else { rhs };
                if lhs != rhs {
                    return false;
                }
            }
        }
        true
    }
}

impl fmt::Display for SuperOneForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.components.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "du_{}*({})", self.chart.name(k), c)?;
        }
        Ok(())
    }
}

/// df, with components the left partials of f.  Pinned by the pairing
/// identity pair(df, X) = X(f) on coordinate fields; that identity then
/// extends to every X exactly when f is even (for odd f and an odd right
/// coefficient the two sides differ by a sign, so no component convention
/// can close the gap).
pub fn de_rham(f: &Superfunction) -> SuperOneForm {
    let chart = f.chart().clone();
    let components = (0..chart.dim()).map(|k| f.partial(k)).collect();
    SuperOneForm { chart, components }
}

/// The full coordinate Euler field sum_k u^k d_k.
fn full_euler(chart: &ChartRef) -> SuperVectorField {
    let coeffs = (0..chart.dim())
        .map(|k| Superfunction::coordinate(chart, k).expect("coordinate index in range"))
        .collect();
    SuperVectorField::new(chart, coeffs).expect("full coordinate list")
}

/// Primitive of a closed even form with zero constant term, by the Euler
/// homotopy: the weight-w part of pair(w, sum_k u^k d_k) divided by w.
/// The contraction has no weight-0 part.  d(result) = w is re-checked.
pub fn poincare_primitive(omega: &SuperOneForm) -> Result<Superfunction> {
    if !omega.is_even() {
        return Err(Error::NotEven);
    }
    if !omega.is_closed() {
        return Err(Error::NotClosed);
    }
    let chart = omega.chart().clone();
    let h = omega.pair(&full_euler(&chart));
    let mut f = Superfunction::zero(&chart);
    for (w, part) in h.weight_decompose() {
        if w == 0 {
            if !part.is_zero() {
                return Err(Error::PrimitiveFailed);
            }
            continue;
        }
        f = f.add(&part.scale(&Rational::new(1.into(), w.into())));
    }
    if de_rham(&f) != *omega {
        return Err(Error::PrimitiveFailed);
    }
    Ok(f)
}

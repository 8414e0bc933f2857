use std::fmt;

use crate::chart::{same_chart, ChartRef, Parity};
use crate::error::{Error, Result};
use crate::operators::diffop::{DerivWord, SuperDiffOp};
use crate::superfunction::Superfunction;
use crate::Rational;

/// A super vector field sum_k f_k d_k with the coefficients on the left.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SuperVectorField {
    chart: ChartRef,
    coeffs: Vec<Superfunction>,
}

impl SuperVectorField {
    pub fn new(chart: &ChartRef, coeffs: Vec<Superfunction>) -> Result<SuperVectorField> {
        if coeffs.len() != chart.dim() {
            return Err(Error::WrongImageCount {
                expected: chart.dim(),
                got: coeffs.len(),
            });
        }
        if !coeffs.iter().all(|c| same_chart(c.chart(), chart)) {
            return Err(Error::ChartMismatch);
        }
        Ok(SuperVectorField {
            chart: chart.clone(),
            coeffs,
        })
    }

    pub fn zero(chart: &ChartRef) -> SuperVectorField {
        SuperVectorField {
            chart: chart.clone(),
            coeffs: vec![Superfunction::zero(chart); chart.dim()],
        }
    }

    /// The coordinate field d_k.
    pub fn coordinate_field(chart: &ChartRef, k: usize) -> Result<SuperVectorField> {
        chart.check_coord(k)?;
        let mut x = SuperVectorField::zero(chart);
        x.coeffs[k] = Superfunction::one(chart);
        Ok(x)
    }

    /// f d_k for a single coordinate.
    pub fn single(chart: &ChartRef, k: usize, f: Superfunction) -> Result<SuperVectorField> {
        chart.check_coord(k)?;
        if !same_chart(f.chart(), chart) {
            return Err(Error::ChartMismatch);
        }
        let mut x = SuperVectorField::zero(chart);
        x.coeffs[k] = f;
        Ok(x)
    }

    pub fn chart(&self) -> &ChartRef {
        &self.chart
    }

    /// Left coefficient of d_k.
    pub fn coeff(&self, k: usize) -> &Superfunction {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[Superfunction] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Superfunction::is_zero)
    }

    pub fn apply(&self, f: &Superfunction) -> Superfunction {
        let mut out = Superfunction::zero(&self.chart);
        for (k, c) in self.coeffs.iter().enumerate() {
            out = out.add(&c.mul(&f.partial(k)));
        }
        out
    }

    pub fn add(&self, other: &SuperVectorField) -> SuperVectorField {
        assert!(same_chart(&self.chart, &other.chart), "chart mismatch");
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.add(b))
            .collect();
        SuperVectorField {
            chart: self.chart.clone(),
            coeffs,
        }
    }

    pub fn sub(&self, other: &SuperVectorField) -> SuperVectorField {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> SuperVectorField {
        SuperVectorField {
            chart: self.chart.clone(),
            coeffs: self.coeffs.iter().map(Superfunction::neg).collect(),
        }
    }

    pub fn scale(&self, r: &Rational) -> SuperVectorField {
        SuperVectorField {
            chart: self.chart.clone(),
            coeffs: self.coeffs.iter().map(|c| c.scale(r)).collect(),
        }
    }

    pub fn to_op(&self) -> SuperDiffOp {
        let p = self.chart.p();
        SuperDiffOp::from_terms(
            &self.chart,
            self.coeffs.iter().enumerate().filter_map(|(k, c)| {
                if c.is_zero() {
                    return None;
                }
                let w = if k < p {
                    DerivWord::even_partial(p, k)
                } else {
                    DerivWord::odd_partial(p, self.chart.odd_index(k))
                };
                Some((w, c.clone()))
            }),
        )
    }

    /// Reads a vector field off a normal form; fails when the operator has
    /// order above one or acts on constants.
    pub fn try_from_op(op: &SuperDiffOp) -> Result<SuperVectorField> {
        let chart = op.chart().clone();
        let mut x = SuperVectorField::zero(&chart);
        for (w, c) in op.terms() {
            match w.order() {
                1 => {
                    let k = if let Some(a) = w.beta.iter().next() {
                        chart.odd_coord(a)
                    } else {
                        w.alpha.iter().position(|&e| e == 1).expect("order-one word")
                    };
                    x.coeffs[k] = c.clone();
                }
                _ => return Err(Error::NotAField),
            }
        }
        Ok(x)
    }

    /// Supercommutator of vector fields, computed on operators and read
    /// back, keeping a single implementation of the bracket.
    pub fn bracket(&self, other: &SuperVectorField) -> SuperVectorField {
        let op = self.to_op().scommutator(&other.to_op());
        SuperVectorField::try_from_op(&op).expect("bracket of fields is a field")
    }

    /// Parts of fixed operator parity: the d_k coefficient of the parity-pi
    /// part keeps the summands of coefficient parity pi + |u^k|.
    pub fn parity_parts(&self) -> (SuperVectorField, SuperVectorField) {
        let mut even = SuperVectorField::zero(&self.chart);
        let mut odd = SuperVectorField::zero(&self.chart);
        for (k, c) in self.coeffs.iter().enumerate() {
            let (c_even, c_odd) = c.parity_parts();
            if self.chart.parity(k).is_odd() {
                even.coeffs[k] = c_odd;
                odd.coeffs[k] = c_even;
            } else {
                even.coeffs[k] = c_even;
                odd.coeffs[k] = c_odd;
            }
        }
        (even, odd)
    }

    pub fn part(&self, parity: Parity) -> SuperVectorField {
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

    /// Right coefficients g^k with X = sum_k d_k . g^k; on odd coordinates
    /// the odd summands of the left coefficient flip sign.
    pub fn right_coefficients(&self) -> Vec<Superfunction> {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| {
                if self.chart.parity(k).is_odd() {
                    let (even, odd) = c.parity_parts();
                    even.sub(&odd)
                } else {
                    c.clone()
                }
            })
            .collect()
    }

    /// Inverse of `right_coefficients`; the transform is an involution.
    pub fn from_right_coefficients(
        chart: &ChartRef,
        gs: Vec<Superfunction>,
    ) -> Result<SuperVectorField> {
        let x = SuperVectorField::new(chart, gs)?;
        let coeffs = x.right_coefficients();
        SuperVectorField::new(chart, coeffs)
    }

    /// Right module action X . f = (-1)^{|X||f|} m_f o X, extended
    /// bilinearly over parity parts.
    pub fn right_mul(&self, f: &Superfunction) -> SuperVectorField {
        let mut out = SuperVectorField::zero(&self.chart);
        let (x0, x1) = self.parity_parts();
        let (f0, f1) = f.parity_parts();
        for (xp, xpart) in [(Parity::Even, x0), (Parity::Odd, x1)] {
            if xpart.is_zero() {
                continue;
            }
            for (fp, fpart) in [(Parity::Even, &f0), (Parity::Odd, &f1)] {
                if fpart.is_zero() {
                    continue;
                }
                for k in 0..self.chart.dim() {
                    let mut c = fpart.mul(&xpart.coeffs[k]);
                    if xp.koszul_is_negative(fp) {
                        c = c.neg();
                    }
                    out.coeffs[k] = out.coeffs[k].add(&c);
                }
            }
        }
        out
    }
}

impl fmt::Display for SuperVectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.to_op().fmt(f)
    }
}

/// The Euler field sum_a xi^a d_{xi^a}; needs at least one odd coordinate.
pub fn euler_field(chart: &ChartRef) -> Result<SuperVectorField> {
    if chart.q() == 0 {
        return Err(Error::NoOddCoordinates);
    }
    let mut e = SuperVectorField::zero(chart);
    for a in 0..chart.q() {
        let k = chart.odd_coord(a);
        e.coeffs[k] = Superfunction::coordinate(chart, k)?;
    }
    Ok(e)
}

/// Decomposition into eigenparts of ad(Euler): the component at k collects
/// terms whose coefficient xi-degree minus the target parity weight is k.
/// Degrees run in [-1, q].
pub fn z_grading_decompose(x: &SuperVectorField) -> Result<Vec<(i64, SuperVectorField)>> {
    let chart = x.chart().clone();
    if chart.q() == 0 {
        return Err(Error::NoOddCoordinates);
    }
    let mut buckets: std::collections::BTreeMap<i64, SuperVectorField> =
        std::collections::BTreeMap::new();
    for k in 0..chart.dim() {
        let drop = if chart.parity(k).is_odd() { 1 } else { 0 };
        for (m, c) in x.coeff(k).terms() {
            let weight = m.n_degree() as i64 - drop;
            let entry = buckets
                .entry(weight)
                .or_insert_with(|| SuperVectorField::zero(&chart));
            entry.coeffs[k] = entry.coeffs[k].add(&Superfunction::monomial(
                &chart,
                m.clone(),
                c.clone(),
            ));
        }
    }
    Ok(buckets.into_iter().collect())
}

/// An element f + X of the order-one algebra, split into its multiplication
/// part and its vector field part.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct D1Element {
    pub scalar: Superfunction,
    pub field: SuperVectorField,
}

impl D1Element {
    pub fn new(scalar: Superfunction, field: SuperVectorField) -> D1Element {
        assert!(
            same_chart(scalar.chart(), field.chart()),
            "chart mismatch in order-one element"
        );
        D1Element { scalar, field }
    }

    pub fn chart(&self) -> &ChartRef {
        self.scalar.chart()
    }

    pub fn to_op(&self) -> SuperDiffOp {
        SuperDiffOp::mul_operator(&self.scalar).add(&self.field.to_op())
    }

    /// Canonical splitting of an order-one operator: the scalar part is the
    /// action on 1, the remainder is a derivation.
    pub fn split(op: &SuperDiffOp) -> Result<D1Element> {
        let ord = op.order();
        if ord > 1 {
            return Err(Error::OrderTooHigh(ord, 1));
        }
        let scalar = op.apply(&Superfunction::one(op.chart()));
        let field =
            SuperVectorField::try_from_op(&op.sub(&SuperDiffOp::mul_operator(&scalar)))?;
        Ok(D1Element { scalar, field })
    }

    pub fn bracket(&self, other: &D1Element) -> D1Element {
        D1Element::split(&self.to_op().scommutator(&other.to_op()))
            .expect("order-one algebra is closed under the bracket")
    }

    pub fn add(&self, other: &D1Element) -> D1Element {
        D1Element {
            scalar: self.scalar.add(&other.scalar),
            field: self.field.add(&other.field),
        }
    }

    pub fn sub(&self, other: &D1Element) -> D1Element {
        D1Element {
            scalar: self.scalar.sub(&other.scalar),
            field: self.field.sub(&other.field),
        }
    }

    pub fn neg(&self) -> D1Element {
        D1Element {
            scalar: self.scalar.neg(),
            field: self.field.neg(),
        }
    }

    pub fn scale(&self, r: &Rational) -> D1Element {
        D1Element {
            scalar: self.scalar.scale(r),
            field: self.field.scale(r),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.scalar.is_zero() && self.field.is_zero()
    }

    pub fn parity_parts(&self) -> (D1Element, D1Element) {
        let (s0, s1) = self.scalar.parity_parts();
        let (f0, f1) = self.field.parity_parts();
        (D1Element::new(s0, f0), D1Element::new(s1, f1))
    }
}

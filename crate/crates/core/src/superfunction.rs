use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::chart::{same_chart, ChartRef, Parity};
use crate::error::{Error, Result};
use crate::koszul::OddSet;
use crate::Rational;

/// x^alpha * xi^beta with the odd factors in increasing index order.
/// The derived order (alpha lexicographic, then beta) fixes the canonical
/// term order used for storage and printing.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Monomial {
    pub alpha: Vec<u32>,
    pub beta: OddSet,
}

impl Monomial {
    pub fn unit(p: usize) -> Monomial {
        Monomial {
            alpha: vec![0; p],
            beta: OddSet::EMPTY,
        }
    }

    pub fn parity(&self) -> Parity {
        Parity::from_odd_degree(self.beta.len())
    }

    /// N-degree: the number of odd factors.
    pub fn n_degree(&self) -> usize {
        self.beta.len()
    }

    /// Total polynomial weight, even exponents included.
    pub fn weight(&self) -> usize {
        self.alpha.iter().sum::<u32>() as usize + self.beta.len()
    }

    pub fn is_unit(&self) -> bool {
        self.beta.is_empty() && self.alpha.iter().all(|&e| e == 0)
    }
}

/// Element of Q[x^1..x^p] (x) Lambda(xi^1..xi^q) on a fixed chart.
/// Zero coefficients are never stored, so structural equality is equality.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Superfunction {
    chart: ChartRef,
    terms: BTreeMap<Monomial, Rational>,
}

impl Superfunction {
    pub fn zero(chart: &ChartRef) -> Superfunction {
        Superfunction {
            chart: chart.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(chart: &ChartRef, c: Rational) -> Superfunction {
        let mut f = Superfunction::zero(chart);
        if !c.is_zero() {
            f.terms.insert(Monomial::unit(chart.p()), c);
        }
        f
    }

    pub fn one(chart: &ChartRef) -> Superfunction {
        Superfunction::constant(chart, Rational::one())
    }

    pub fn coordinate(chart: &ChartRef, k: usize) -> Result<Superfunction> {
        chart.check_coord(k)?;
        let mut m = Monomial::unit(chart.p());
        if k < chart.p() {
            m.alpha[k] = 1;
        } else {
            m.beta = OddSet::singleton(chart.odd_index(k));
        }
        let mut f = Superfunction::zero(chart);
        f.terms.insert(m, Rational::one());
        Ok(f)
    }

    pub fn monomial(chart: &ChartRef, m: Monomial, c: Rational) -> Superfunction {
        let mut f = Superfunction::zero(chart);
        f.add_term(m, c);
        f
    }

    pub fn chart(&self) -> &ChartRef {
        &self.chart
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.constant_term().is_one()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coeff(&Monomial::unit(self.chart.p()))
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        debug_assert_eq!(m.alpha.len(), self.chart.p());
        let entry = self.terms.entry(m);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get() + &c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> Superfunction {
        if c.is_zero() {
            return Superfunction::zero(&self.chart);
        }
        Superfunction {
            chart: self.chart.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, v)| (m.clone(), v * c))
                .collect(),
        }
    }

    /// Supercommutative product; the Koszul sign comes from reordering the
    /// odd factor words.
    pub fn mul(&self, other: &Superfunction) -> Superfunction {
        assert!(
            same_chart(&self.chart, &other.chart),
            "chart mismatch in product"
        );
        let mut out = Superfunction::zero(&self.chart);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                if let Some((beta, negate)) = m1.beta.mul_monomials(m2.beta) {
                    let alpha = m1
                        .alpha
                        .iter()
                        .zip(&m2.alpha)
                        .map(|(a, b)| a + b)
                        .collect();
                    let mut c = c1 * c2;
                    if negate {
                        c = -c;
                    }
                    out.add_term(Monomial { alpha, beta }, c);
                }
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> Superfunction {
        let mut out = Superfunction::one(&self.chart);
        for _ in 0..n {
            out = out.mul(self);
        }
        out
    }

    /// Left partial derivative with respect to coordinate `k`.
    pub fn partial(&self, k: usize) -> Superfunction {
        self.chart.check_coord(k).expect("coordinate in range");
        let mut out = Superfunction::zero(&self.chart);
        if k < self.chart.p() {
            for (m, c) in &self.terms {
                let e = m.alpha[k];
                if e > 0 {
                    let mut alpha = m.alpha.clone();
                    alpha[k] = e - 1;
                    out.add_term(
                        Monomial {
                            alpha,
                            beta: m.beta,
                        },
                        c * Rational::from_integer(e.into()),
                    );
                }
            }
        } else {
            let a = self.chart.odd_index(k);
            for (m, c) in &self.terms {
                if let Some((beta, negate)) = m.beta.strip_front(a) {
                    let c = if negate { -c.clone() } else { c.clone() };
                    out.add_term(
                        Monomial {
                            alpha: m.alpha.clone(),
                            beta,
                        },
                        c,
                    );
                }
            }
        }
        out
    }

    /// Antiderivative in the even coordinate `k`; exact on polynomials.
    pub fn antiderivative(&self, k: usize) -> Superfunction {
        assert!(k < self.chart.p(), "antiderivative needs an even coordinate");
        let mut out = Superfunction::zero(&self.chart);
        for (m, c) in &self.terms {
            let mut alpha = m.alpha.clone();
            alpha[k] += 1;
            let denom = Rational::from_integer(alpha[k].into());
            out.add_term(
                Monomial {
                    alpha,
                    beta: m.beta,
                },
                c / denom,
            );
        }
        out
    }

    /// Substitutes every coordinate by the given image, all images on one
    /// target chart.  Images must be homogeneous of the coordinate's parity
    /// (zero passes), which makes the substitution an algebra homomorphism.
    pub fn substitute(&self, images: &[Superfunction]) -> Result<Superfunction> {
        let dim = self.chart.dim();
        if images.len() != dim {
            return Err(Error::WrongImageCount {
                expected: dim,
                got: images.len(),
            });
        }
        let target = match images.first() {
            Some(f) => f.chart().clone(),
            None => self.chart.clone(),
        };
        for (k, img) in images.iter().enumerate() {
            if !same_chart(img.chart(), &target) {
                return Err(Error::ImageChartMismatch);
            }
            match img.homogeneous_parity() {
                Some(par) if par == self.chart.parity(k) || img.is_zero() => {}
                _ => return Err(Error::ImageParity(k)),
            }
        }
        let mut out = Superfunction::zero(&target);
        for (m, c) in &self.terms {
            let mut prod = Superfunction::constant(&target, c.clone());
            for (i, &e) in m.alpha.iter().enumerate() {
                if e > 0 {
                    prod = prod.mul(&images[i].pow(e));
                }
                if prod.is_zero() {
                    break;
                }
            }
            for a in m.beta.iter() {
                prod = prod.mul(&images[self.chart.odd_coord(a)]);
                if prod.is_zero() {
                    break;
                }
            }
            out = out.add(&prod);
        }
        Ok(out)
    }

    pub fn add(&self, other: &Superfunction) -> Superfunction {
        assert!(
            same_chart(&self.chart, &other.chart),
            "chart mismatch in sum"
        );
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Superfunction) -> Superfunction {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Superfunction {
        Superfunction {
            chart: self.chart.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }

    /// Even and odd parts, in that order.
    pub fn parity_parts(&self) -> (Superfunction, Superfunction) {
        let mut even = Superfunction::zero(&self.chart);
        let mut odd = Superfunction::zero(&self.chart);
        for (m, c) in &self.terms {
            let dst = if m.parity().is_odd() {
                &mut odd
            } else {
                &mut even
            };
            dst.terms.insert(m.clone(), c.clone());
        }
        (even, odd)
    }

    pub fn part(&self, parity: Parity) -> Superfunction {
        let (even, odd) = self.parity_parts();
        match parity {
            Parity::Even => even,
            Parity::Odd => odd,
        }
    }

    /// The parity when all terms agree; zero counts as even.
    pub fn homogeneous_parity(&self) -> Option<Parity> {
        let mut it = self.terms.keys();
        let first = match it.next() {
            None => return Some(Parity::Even),
            Some(m) => m.parity(),
        };
        if it.all(|m| m.parity() == first) {
            Some(first)
        } else {
            None
        }
    }

    pub fn is_even(&self) -> bool {
        self.homogeneous_parity() == Some(Parity::Even)
    }

    pub fn is_odd_homogeneous(&self) -> bool {
        self.is_zero() || self.homogeneous_parity() == Some(Parity::Odd)
    }

    /// Splits into components of fixed N-degree (number of odd factors),
    /// ascending, omitting zero components.
    pub fn n_degree_decompose(&self) -> Vec<(usize, Superfunction)> {
        let mut parts: BTreeMap<usize, Superfunction> = BTreeMap::new();
        for (m, c) in &self.terms {
            parts
                .entry(m.n_degree())
                .or_insert_with(|| Superfunction::zero(&self.chart))
                .terms
                .insert(m.clone(), c.clone());
        }
        parts.into_iter().collect()
    }

    /// Splits by total polynomial weight |alpha| + |beta|.
    pub fn weight_decompose(&self) -> Vec<(usize, Superfunction)> {
        let mut parts: BTreeMap<usize, Superfunction> = BTreeMap::new();
        for (m, c) in &self.terms {
            parts
                .entry(m.weight())
                .or_insert_with(|| Superfunction::zero(&self.chart))
                .terms
                .insert(m.clone(), c.clone());
        }
        parts.into_iter().collect()
    }

    /// The xi-free part, a classical polynomial in the even coordinates.
    pub fn body(&self) -> Superfunction {
        let mut out = Superfunction::zero(&self.chart);
        for (m, c) in &self.terms {
            if m.beta.is_empty() {
                out.terms.insert(m.clone(), c.clone());
            }
        }
        out
    }

    /// Inverse in the chart algebra.  Exists exactly when the xi-free part
    /// is a nonzero constant; the nilpotent remainder is handled by a
    /// truncated geometric series.
    pub fn invert(&self) -> Option<Superfunction> {
        let c = self.constant_term();
        if c.is_zero() {
            return None;
        }
        let constant = Superfunction::constant(&self.chart, c.clone());
        if self.body() != constant {
            return None;
        }
        let n = self.sub(&constant).scale(&(-c.clone().recip()));
        // self = c (1 - n), so 1/self = (1/c) sum n^k; n^(q+1) = 0.
        let mut sum = Superfunction::one(&self.chart);
        let mut power = Superfunction::one(&self.chart);
        for _ in 0..self.chart.q() {
            power = power.mul(&n);
            if power.is_zero() {
                break;
            }
            sum = sum.add(&power);
        }
        Some(sum.scale(&c.recip()))
    }
}

impl Add for &Superfunction {
    type Output = Superfunction;
    fn add(self, other: &Superfunction) -> Superfunction {
        Superfunction::add(self, other)
    }
}

impl Sub for &Superfunction {
    type Output = Superfunction;
    fn sub(self, other: &Superfunction) -> Superfunction {
        Superfunction::sub(self, other)
    }
}

impl Mul for &Superfunction {
    type Output = Superfunction;
    fn mul(self, other: &Superfunction) -> Superfunction {
        Superfunction::mul(self, other)
    }
}

impl Neg for &Superfunction {
    type Output = Superfunction;
    fn neg(self) -> Superfunction {
        Superfunction::neg(self)
    }
}

impl fmt::Display for Superfunction {
    /// Canonical rendering: terms in storage order, odd factors ascending,
    /// signs explicit.  Parses back to the same element.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let negative = c.is_negative();
            if i == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else if negative {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let abs = c.abs();
            if m.is_unit() {
                write!(f, "{abs}")?;
                continue;
            }
            let mut lead = true;
            if !abs.is_one() {
                write!(f, "{abs}")?;
                lead = false;
            }
            for (k, &e) in m.alpha.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if !lead {
                    write!(f, "*")?;
                }
                lead = false;
                write!(f, "{}", self.chart.name(k))?;
                if e > 1 {
                    write!(f, "^{e}")?;
                }
            }
            for a in m.beta.iter() {
                if !lead {
                    write!(f, "*")?;
                }
                lead = false;
                write!(f, "{}", self.chart.name(self.chart.odd_coord(a)))?;
            }
        }
        Ok(())
    }
}

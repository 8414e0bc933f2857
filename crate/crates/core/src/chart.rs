use std::fmt;
use std::ops::Add;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Z/2 degree.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn from_odd_degree(n: usize) -> Parity {
        if n % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }

    pub fn flip(self) -> Parity {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }

    /// Koszul sign (-1)^{|a||b|} is negative exactly when both are odd.
    pub fn koszul_is_negative(self, other: Parity) -> bool {
        self.is_odd() && other.is_odd()
    }
}

impl Add for Parity {
    type Output = Parity;
    fn add(self, other: Parity) -> Parity {
        if self == other {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Parity::Even => write!(f, "even"),
            Parity::Odd => write!(f, "odd"),
        }
    }
}

/// A coordinate chart of dimension p|q.  Coordinates are indexed 0..p+q,
/// the first p even, the rest odd.  Charts compare by value, so two
/// independently built charts with the same names are interchangeable.
#[derive(PartialEq, Eq, Hash, Debug)]
pub struct Chart {
    p: usize,
    q: usize,
    names: Vec<String>,
}

pub type ChartRef = Arc<Chart>;

impl Chart {
    pub fn new<S: Into<String>>(even: Vec<S>, odd: Vec<S>) -> Result<ChartRef> {
        let p = even.len();
        let q = odd.len();
        if q > 32 {
            return Err(Error::TooManyOddCoordinates(q));
        }
        let names: Vec<String> = even
            .into_iter()
            .map(Into::into)
            .chain(odd.into_iter().map(Into::into))
            .collect();
        for (i, n) in names.iter().enumerate() {
            if n.is_empty() || names[..i].contains(n) {
                return Err(Error::BadChartNames);
            }
        }
        Ok(Arc::new(Chart { p, q, names }))
    }

    /// Chart with coordinates x1..xp, xi1..xiq.
    pub fn standard(p: usize, q: usize) -> ChartRef {
        let even: Vec<String> = (1..=p).map(|i| format!("x{i}")).collect();
        let odd: Vec<String> = (1..=q).map(|a| format!("xi{a}")).collect();
        Chart::new(even, odd).expect("standard names are distinct")
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn dim(&self) -> usize {
        self.p + self.q
    }

    pub fn parity(&self, k: usize) -> Parity {
        debug_assert!(k < self.dim());
        if k < self.p {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn name(&self, k: usize) -> &str {
        &self.names[k]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// 0-based position of odd coordinate `k` within the odd block.
    pub fn odd_index(&self, k: usize) -> usize {
        debug_assert!(k >= self.p && k < self.dim());
        k - self.p
    }

    /// Coordinate index of the a-th odd coordinate.
    pub fn odd_coord(&self, a: usize) -> usize {
        debug_assert!(a < self.q);
        self.p + a
    }

    pub fn check_coord(&self, k: usize) -> Result<usize> {
        if k < self.dim() {
            Ok(k)
        } else {
            Err(Error::CoordinateOutOfRange(k, self.p, self.q))
        }
    }
}

impl fmt::Display for Chart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for i in 0..self.p {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", self.names[i])?;
        }
        write!(f, " | ")?;
        for a in 0..self.q {
            if a > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", self.names[self.p + a])?;
        }
        write!(f, ")")
    }
}

/// Charts must agree for mixed arithmetic; value equality is enough.
pub fn same_chart(a: &ChartRef, b: &ChartRef) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

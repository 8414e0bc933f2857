//! Purely odd charts: the finite-dimensional module spanned by the odd
//! monomials, matrix realizations of operators on it, and the swap symmetry
//! exchanging multiplications with derivatives.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::chart::ChartRef;
use crate::error::{Error, Result};
use crate::koszul::OddSet;
use crate::operators::{DerivWord, OperatorExpr, SuperDiffOp};
use crate::superfunction::{Monomial, Superfunction};
use crate::Rational;

const MAX_FOCK_Q: usize = 10;

fn check_fock_chart(chart: &ChartRef) -> Result<usize> {
    if chart.p() != 0 {
        return Err(Error::UnsupportedChart(chart.p(), chart.q()));
    }
    if chart.q() > MAX_FOCK_Q {
        return Err(Error::QTooLarge(MAX_FOCK_Q, chart.q()));
    }
    Ok(chart.q())
}

/// An exact matrix acting on the odd monomial basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FockMatrix {
    q: usize,
    entries: Vec<Vec<Rational>>,
}

impl FockMatrix {
    pub fn zero(q: usize) -> FockMatrix {
        let n = 1 << q;
        FockMatrix {
            q,
            entries: vec![vec![Rational::zero(); n]; n],
        }
    }

    pub fn identity(q: usize) -> FockMatrix {
        let mut m = FockMatrix::zero(q);
        for i in 0..m.dim() {
            m.entries[i][i] = Rational::from_integer(1.into());
        }
        m
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn dim(&self) -> usize {
        1 << self.q
    }

    pub fn entry(&self, i: usize, j: usize) -> &Rational {
        &self.entries[i][j]
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(Rational::is_zero)
    }

    pub fn add(&self, other: &FockMatrix) -> FockMatrix {
        assert_eq!(self.q, other.q, "size mismatch");
        let mut out = FockMatrix::zero(self.q);
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                out.entries[i][j] = self.entries[i][j].clone() + other.entries[i][j].clone();
            }
        }
        out
    }

    pub fn sub(&self, other: &FockMatrix) -> FockMatrix {
        assert_eq!(self.q, other.q, "size mismatch");
        let mut out = FockMatrix::zero(self.q);
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                out.entries[i][j] = self.entries[i][j].clone() - other.entries[i][j].clone();
            }
        }
        out
    }

    pub fn scale(&self, r: &Rational) -> FockMatrix {
        let mut out = FockMatrix::zero(self.q);
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                out.entries[i][j] = self.entries[i][j].clone() * r.clone();
            }
        }
        out
    }

    pub fn mul(&self, other: &FockMatrix) -> FockMatrix {
        assert_eq!(self.q, other.q, "size mismatch");
        let n = self.dim();
        let mut out = FockMatrix::zero(self.q);
        for i in 0..n {
            for j in 0..n {
                let mut acc = Rational::zero();
                for k in 0..n {
                    if !self.entries[i][k].is_zero() && !other.entries[k][j].is_zero() {
                        acc += self.entries[i][k].clone() * other.entries[k][j].clone();
                    }
                }
                out.entries[i][j] = acc;
            }
        }
        out
    }
}

impl fmt::Display for FockMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.entries.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "[")?;
            for (j, e) in row.iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{e}")?;
            }
            write!(f, "]")?;
        }
        Ok(())
    }
}

fn subsets_in_order(q: usize) -> Vec<OddSet> {
    let mut subsets: Vec<Vec<usize>> = (0..1u32 << q)
        .map(|bits| OddSet(bits).iter().collect())
        .collect();
    subsets.sort();
    subsets.sort_by_key(|s| s.len());
    subsets
        .into_iter()
        .map(|s| {
            s.into_iter()
                .fold(OddSet::EMPTY, |acc, a| acc.union(OddSet::singleton(a)))
        })
        .collect()
}

/// Monomial basis of the module, ordered by degree and then by the sorted
/// index lists of the factors.
pub fn fock_basis(chart: &ChartRef) -> Result<Vec<Superfunction>> {
    let q = check_fock_chart(chart)?;
    Ok(subsets_in_order(q)
        .into_iter()
        .map(|beta| {
            Superfunction::monomial(
                chart,
                Monomial {
                    alpha: Vec::new(),
                    beta,
                },
                Rational::from_integer(1.into()),
            )
        })
        .collect())
}

/// Matrix of an operator on the monomial basis; columns are images.
pub fn rep(d: &SuperDiffOp) -> Result<FockMatrix> {
    let chart = d.chart().clone();
    let q = check_fock_chart(&chart)?;
    let basis = fock_basis(&chart)?;
    let index: BTreeMap<Monomial, usize> = basis
        .iter()
        .enumerate()
        .map(|(i, b)| {
            let (m, _) = b.terms().next().expect("basis elements are monomials");
            (m.clone(), i)
        })
        .collect();
    let mut out = FockMatrix::zero(q);
    for (j, b) in basis.iter().enumerate() {
        let image = d.apply(b);
        for (m, c) in image.terms() {
            let i = index[m];
            out.entries[i][j] = c.clone();
        }
    }
    Ok(out)
}

fn row_rank(mut rows: Vec<Vec<Rational>>) -> usize {
    let width = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    let mut pivot_col = 0;
    while pivot_col < width && rank < rows.len() {
        if let Some(r) = (rank..rows.len()).find(|&r| !rows[r][pivot_col].is_zero()) {
            rows.swap(rank, r);
            let inv = rows[rank][pivot_col].clone().recip();
            for c in pivot_col..width {
                let v = rows[rank][c].clone() * inv.clone();
                rows[rank][c] = v;
            }
            for r in 0..rows.len() {
                if r != rank && !rows[r][pivot_col].is_zero() {
                    let factor = rows[r][pivot_col].clone();
                    for c in pivot_col..width {
                        let v = rows[r][c].clone() - factor.clone() * rows[rank][c].clone();
                        rows[r][c] = v;
                    }
                }
            }
            rank += 1;
        }
        pivot_col += 1;
    }
    rank
}

/// Whether the monomial-times-derivative words span every matrix on the
/// module; exact rank computation over the rationals.
pub fn spans_full_endomorphisms(chart: &ChartRef) -> Result<bool> {
    let q = check_fock_chart(chart)?;
    let n = 1usize << q;
    let mut rows = Vec::with_capacity(n * n);
    for s_bits in 0..1u32 << q {
        for t_bits in 0..1u32 << q {
            let coeff = Superfunction::monomial(
                chart,
                Monomial {
                    alpha: Vec::new(),
                    beta: OddSet(s_bits),
                },
                Rational::from_integer(1.into()),
            );
            let word = DerivWord {
                alpha: Vec::new(),
                beta: OddSet(t_bits),
            };
            let op = SuperDiffOp::from_terms(chart, [(word, coeff)]);
            let matrix = rep(&op)?;
            let mut row = Vec::with_capacity(n * n);
            for i in 0..n {
                for j in 0..n {
                    row.push(matrix.entries[i][j].clone());
                }
            }
            rows.push(row);
        }
    }
    Ok(row_rank(rows) == n * n)
}

/// The factor-order-preserving exchange of each multiplication by an odd
/// coordinate with the matching derivative.  Well defined because the
/// defining anticommutation relations are symmetric under the exchange;
/// an involution that preserves brackets but not the order filtration.
pub fn swap_automorphism(d: &SuperDiffOp) -> Result<SuperDiffOp> {
    let chart = d.chart().clone();
    if chart.p() != 0 {
        return Err(Error::UnsupportedChart(chart.p(), chart.q()));
    }
    let mut total: Option<OperatorExpr> = None;
    for (word, coeff) in d.terms() {
        for (m, c) in coeff.terms() {
            let mut acc = OperatorExpr::mul(Superfunction::one(&chart));
            for s in m.beta.iter() {
                acc = OperatorExpr::compose(
                    acc,
                    OperatorExpr::partial(&chart, s).expect("coordinate in range"),
                );
            }
            for t in word.beta.iter_desc() {
                let xi = Superfunction::coordinate(&chart, t).expect("coordinate in range");
                acc = OperatorExpr::compose(acc, OperatorExpr::mul(xi));
            }
            let term = OperatorExpr::scale(c.clone(), acc);
            total = Some(match total {
                None => term,
                Some(sum) => OperatorExpr::sum(sum, term),
            });
        }
    }
    Ok(match total {
        None => SuperDiffOp::zero(&chart),
        Some(expr) => expr.normal_form(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chart::Chart;
    use crate::int;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn mul_op(chart: &ChartRef, k: usize) -> SuperDiffOp {
        let xi = Superfunction::coordinate(chart, k).unwrap();
        SuperDiffOp::from_terms(chart, [(DerivWord::empty(chart.p()), xi)])
    }

    #[test]
    fn q1_frozen_matrices() {
        let chart = Chart::standard(0, 1);
        let m = rep(&mul_op(&chart, 0)).unwrap();
        assert_eq!(m.entry(0, 0), &int(0));
        assert_eq!(m.entry(0, 1), &int(0));
        assert_eq!(m.entry(1, 0), &int(1));
        assert_eq!(m.entry(1, 1), &int(0));
        let d = rep(&SuperDiffOp::partial(&chart, 0).unwrap()).unwrap();
        assert_eq!(d.entry(0, 0), &int(0));
        assert_eq!(d.entry(0, 1), &int(1));
        assert_eq!(d.entry(1, 0), &int(0));
        assert_eq!(d.entry(1, 1), &int(0));
        assert_eq!(format!("{m}"), "[0, 0]\n[1, 0]");
    }

    #[test]
    fn basis_is_ordered_by_degree_then_lexicographically() {
        let chart = Chart::standard(0, 3);
        let basis = fock_basis(&chart).unwrap();
        let shown: Vec<String> = basis.iter().map(|b| format!("{b}")).collect();
        assert_eq!(
            shown,
            vec![
                "1",
                "xi1",
                "xi2",
                "xi3",
                "xi1*xi2",
                "xi1*xi3",
                "xi2*xi3",
                "xi1*xi2*xi3"
            ]
        );
    }

    #[test]
    fn defining_relations_hold_in_the_matrix_picture() {
        let chart = Chart::standard(0, 2);
        let q = chart.q();
        for a in 0..q {
            for b in 0..q {
                let xa = rep(&mul_op(&chart, a)).unwrap();
                let xb = rep(&mul_op(&chart, b)).unwrap();
                let da = rep(&SuperDiffOp::partial(&chart, a).unwrap()).unwrap();
                let db = rep(&SuperDiffOp::partial(&chart, b).unwrap()).unwrap();
                assert!(xa.mul(&xb).add(&xb.mul(&xa)).is_zero());
                assert!(da.mul(&db).add(&db.mul(&da)).is_zero());
                let anti = da.mul(&xb).add(&xb.mul(&da));
                if a == b {
                    assert_eq!(anti, FockMatrix::identity(q));
                } else {
                    assert!(anti.is_zero());
                }
            }
        }
    }

    #[test]
    fn rep_is_an_algebra_map_and_faithful() {
        let chart = Chart::standard(0, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(51);
        for _ in 0..20 {
            let d = crate::random::diffop(&mut rng, &chart, 2);
            let e = crate::random::diffop(&mut rng, &chart, 2);
            assert_eq!(
                rep(&d.compose(&e)).unwrap(),
                rep(&d).unwrap().mul(&rep(&e).unwrap())
            );
            assert_eq!(rep(&d).unwrap().is_zero(), d.is_zero());
        }
    }

    #[test]
    fn rep_rejects_wrong_charts() {
        let chart = Chart::standard(1, 1);
        let d = SuperDiffOp::identity(&chart);
        assert_eq!(rep(&d), Err(Error::UnsupportedChart(1, 1)));
        let big = Chart::standard(0, 12);
        let e = SuperDiffOp::identity(&big);
        assert_eq!(rep(&e), Err(Error::QTooLarge(10, 12)));
    }

    #[test]
    fn spanning_holds_for_small_q() {
        for q in 1..=2 {
            let chart = Chart::standard(0, q);
            assert!(spans_full_endomorphisms(&chart).unwrap());
        }
    }

    #[test]
    fn swap_frozen_images() {
        let chart = Chart::standard(0, 2);
        let d0 = SuperDiffOp::partial(&chart, 0).unwrap();
        assert_eq!(swap_automorphism(&mul_op(&chart, 0)).unwrap(), d0);
        assert_eq!(swap_automorphism(&d0).unwrap(), mul_op(&chart, 0));
        // Multiplications have order zero, derivatives order one.
        assert_eq!(mul_op(&chart, 0).order(), 0);
        assert_eq!(swap_automorphism(&mul_op(&chart, 0)).unwrap().order(), 1);

        // xi1 d_2 becomes d_1 xi2 = -xi2 d_1 in normal form.
        let xi1 = Superfunction::coordinate(&chart, 0).unwrap();
        let xi2 = Superfunction::coordinate(&chart, 1).unwrap();
        let e12 = SuperDiffOp::from_terms(
            &chart,
            [(
                DerivWord {
                    alpha: Vec::new(),
                    beta: OddSet::singleton(1),
                },
                xi1,
            )],
        );
        let expect = SuperDiffOp::from_terms(
            &chart,
            [(
                DerivWord {
                    alpha: Vec::new(),
                    beta: OddSet::singleton(0),
                },
                xi2.neg(),
            )],
        );
        assert_eq!(swap_automorphism(&e12).unwrap(), expect);

        // On 0|1 the Euler field goes to 1 - xi d_xi.
        let c1 = Chart::standard(0, 1);
        let xi = Superfunction::coordinate(&c1, 0).unwrap();
        let euler = SuperDiffOp::from_terms(
            &c1,
            [(
                DerivWord {
                    alpha: Vec::new(),
                    beta: OddSet::singleton(0),
                },
                xi.clone(),
            )],
        );
        let swapped = swap_automorphism(&euler).unwrap();
        let expect = SuperDiffOp::from_terms(
            &c1,
            [
                (DerivWord::empty(0), Superfunction::one(&c1)),
                (
                    DerivWord {
                        alpha: Vec::new(),
                        beta: OddSet::singleton(0),
                    },
                    xi.neg(),
                ),
            ],
        );
        assert_eq!(swapped, expect);
    }

    #[test]
    fn swap_is_an_involution_preserving_brackets() {
        let chart = Chart::standard(0, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(52);
        for _ in 0..25 {
            let d = crate::random::diffop(&mut rng, &chart, 2);
            let e = crate::random::diffop(&mut rng, &chart, 2);
            let sd = swap_automorphism(&d).unwrap();
            let se = swap_automorphism(&e).unwrap();
            assert_eq!(swap_automorphism(&sd).unwrap(), d);
            assert_eq!(
                swap_automorphism(&d.scommutator(&e)).unwrap(),
                sd.scommutator(&se)
            );
            // The matrix picture certifies the same identity.
            assert_eq!(
                rep(&swap_automorphism(&d.scommutator(&e)).unwrap()).unwrap(),
                rep(&sd.scommutator(&se)).unwrap()
            );
        }
    }

    #[test]
    fn swap_rejects_mixed_charts() {
        let chart = Chart::standard(1, 1);
        let d = SuperDiffOp::identity(&chart);
        assert_eq!(swap_automorphism(&d), Err(Error::UnsupportedChart(1, 1)));
    }
}

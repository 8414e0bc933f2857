use crate::chart::ChartRef;
use crate::error::{Error, Result};
use crate::operators::field::{euler_field, z_grading_decompose, SuperVectorField};
use crate::superfunction::Superfunction;
use crate::rat;

/// Writes a vector field as a sum of commutators, sum_i [A_i, B_i] = X.
///
/// Works on any chart except 0|0 and 0|1; on 0|1 the one-parameter family
/// xi d_xi lies outside the span of brackets, so those charts are refused.
pub fn commutator_decompose(
    x: &SuperVectorField,
) -> Result<Vec<(SuperVectorField, SuperVectorField)>> {
    let chart = x.chart().clone();
    if chart.p() == 0 && chart.q() <= 1 {
        return Err(Error::UnsupportedChart(chart.p(), chart.q()));
    }
    if x.is_zero() {
        return Ok(Vec::new());
    }
    let mut pairs = Vec::new();
    if chart.q() == 0 {
        pairs.push(antiderivative_pair(x));
        return Ok(pairs);
    }
    let eps = euler_field(&chart)?;
    for (k, comp) in z_grading_decompose(x)? {
        if k != 0 {
            pairs.push((eps.clone(), comp.scale(&rat(1, k))));
        } else if chart.p() >= 1 {
            pairs.push(antiderivative_pair(&comp));
        } else {
            gl_pairs(&chart, &comp, &mut pairs);
        }
    }
    Ok(pairs)
}

/// [d_{x^1}, sum_j (int f_j dx^1) d_j] = sum_j f_j d_j; valid since
/// d_{x^1} commutes with every coordinate partial.
fn antiderivative_pair(x: &SuperVectorField) -> (SuperVectorField, SuperVectorField) {
    let chart = x.chart();
    let a = SuperVectorField::coordinate_field(chart, 0).expect("p >= 1");
    let coeffs = x.coeffs().iter().map(|c| c.antiderivative(0)).collect();
    let b = SuperVectorField::new(chart, coeffs).expect("same shape");
    (a, b)
}

/// The degree-zero part on a purely odd chart is a constant matrix
/// sum c_{ab} xi^a d_{xi^b}.  Diagonal entries come from the
/// anticommutator [d_{xi^r}, xi^r xi^b d_{xi^b}] = xi^b d_{xi^b} with any
/// r distinct from b; off-diagonal entries from
/// [xi^a d_{xi^a}, xi^a d_{xi^b}] = xi^a d_{xi^b}.
fn gl_pairs(
    chart: &ChartRef,
    x: &SuperVectorField,
    pairs: &mut Vec<(SuperVectorField, SuperVectorField)>,
) {
    for b in 0..chart.q() {
        let target = chart.odd_coord(b);
        for (m, c) in x.coeff(target).terms() {
            let a = m.beta.iter().next().expect("degree-zero coefficient is linear");
            let xi = |i: usize| {
                Superfunction::coordinate(chart, chart.odd_coord(i)).expect("odd coordinate")
            };
            if a == b {
                let r = if b == 0 { 1 } else { 0 };
                let lhs = SuperVectorField::coordinate_field(chart, chart.odd_coord(r))
                    .expect("odd coordinate");
                let coeff = xi(r).mul(&xi(b)).scale(c);
                pairs.push((
                    lhs,
                    SuperVectorField::single(chart, target, coeff).expect("valid target"),
                ));
            } else {
                let lhs = SuperVectorField::single(chart, chart.odd_coord(a), xi(a))
                    .expect("valid target");
                pairs.push((
                    lhs,
                    SuperVectorField::single(chart, target, xi(a).scale(c))
                        .expect("valid target"),
                ));
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chart::Chart;
    use crate::int;

    fn coord(chart: &ChartRef, k: usize) -> Superfunction {
        Superfunction::coordinate(chart, k).unwrap()
    }

    fn resum(pairs: &[(SuperVectorField, SuperVectorField)], chart: &ChartRef) -> SuperVectorField {
        pairs.iter().fold(SuperVectorField::zero(chart), |acc, (a, b)| {
            acc.add(&a.bracket(b))
        })
    }

    #[test]
    fn even_euler_frozen() {
        // x d_x = [d_x, (x^2/2) d_x].
        let c = Chart::standard(1, 1);
        let x = coord(&c, 0);
        let field = SuperVectorField::single(&c, 0, x.clone()).unwrap();
        let pairs = commutator_decompose(&field).unwrap();
        assert_eq!(pairs.len(), 1);
        assert_eq!(pairs[0].0, SuperVectorField::coordinate_field(&c, 0).unwrap());
        assert_eq!(
            pairs[0].1,
            SuperVectorField::single(&c, 0, x.pow(2).scale(&rat(1, 2))).unwrap()
        );
        assert_eq!(resum(&pairs, &c), field);
    }

    #[test]
    fn odd_weight_frozen() {
        // xi d_x has degree one, so it is bracketed out of the Euler field.
        let c = Chart::standard(1, 1);
        let field = SuperVectorField::single(&c, 0, coord(&c, 1)).unwrap();
        let pairs = commutator_decompose(&field).unwrap();
        assert_eq!(pairs.len(), 1);
        assert_eq!(pairs[0].0, euler_field(&c).unwrap());
        assert_eq!(pairs[0].1, field);
        assert_eq!(resum(&pairs, &c), field);
    }

    #[test]
    fn diagonal_gl_frozen() {
        // xi1 d_xi1 on 0|2 = [d_xi2, xi2 xi1 d_xi1].
        let c = Chart::standard(0, 2);
        let field = SuperVectorField::single(&c, 0, coord(&c, 0)).unwrap();
        let pairs = commutator_decompose(&field).unwrap();
        assert_eq!(pairs.len(), 1);
        assert_eq!(pairs[0].0, SuperVectorField::coordinate_field(&c, 1).unwrap());
        assert_eq!(
            pairs[0].1,
            SuperVectorField::single(&c, 0, coord(&c, 1).mul(&coord(&c, 0))).unwrap()
        );
        assert_eq!(resum(&pairs, &c), field);
    }

    #[test]
    fn mixed_field_resums() {
        let c = Chart::standard(2, 2);
        let x1 = coord(&c, 0);
        let x2 = coord(&c, 1);
        let xi1 = coord(&c, 2);
        let xi2 = coord(&c, 3);
        let field = SuperVectorField::new(
            &c,
            vec![
                x1.mul(&x2).add(&xi1.mul(&xi2)),
                xi2.scale(&int(3)),
                x2.pow(2).mul(&xi1),
                Superfunction::one(&c).add(&x1.mul(&xi1).mul(&xi2)),
            ],
        )
        .unwrap();
        let pairs = commutator_decompose(&field).unwrap();
        assert_eq!(resum(&pairs, &c), field);
    }

    #[test]
    fn purely_odd_resums() {
        let c = Chart::standard(0, 3);
        let xi1 = coord(&c, 0);
        let xi2 = coord(&c, 1);
        let xi3 = coord(&c, 2);
        let field = SuperVectorField::new(
            &c,
            vec![
                xi1.scale(&int(2)).add(&xi2).add(&xi1.mul(&xi2).mul(&xi3)),
                Superfunction::one(&c).sub(&xi3.scale(&int(5))),
                xi1.mul(&xi2).add(&xi3),
            ],
        )
        .unwrap();
        let pairs = commutator_decompose(&field).unwrap();
        assert_eq!(resum(&pairs, &c), field);
    }

    #[test]
    fn zero_and_unsupported() {
        let c = Chart::standard(1, 1);
        assert!(commutator_decompose(&SuperVectorField::zero(&c))
            .unwrap()
            .is_empty());
        let line = Chart::standard(0, 1);
        let center = SuperVectorField::single(&line, 0, coord(&line, 0)).unwrap();
        assert_eq!(
            commutator_decompose(&center).unwrap_err(),
            Error::UnsupportedChart(0, 1)
        );
    }
}

//! Bracket-preserving maps that exist only in low odd dimension and do not
//! arise from coordinate changes or divergence twists.  Each is an involution
//! defined by a coefficient shuffle; each rejects every other chart shape.

use crate::error::{Error, Result};
use crate::operators::{D1Element, SuperVectorField};
use crate::superfunction::Superfunction;

/// On a 0|1 chart, swaps the xi part of the function slot with the constant
/// part of the field slot: (c0 + c1 xi) + (d0 + d1 xi) d_xi goes to
/// (c0 + d0 xi) + (c1 - d1 xi) d_xi.  Moves functions off the function slot,
/// so it extends no inner symmetry of the order-one algebra.
pub fn exceptional_0_1(e: &D1Element) -> Result<D1Element> {
    let chart = e.chart().clone();
    if chart.p() != 0 || chart.q() != 1 {
        return Err(Error::UnsupportedChart(chart.p(), chart.q()));
    }
    let xi = Superfunction::coordinate(&chart, 0).expect("coordinate in range");
    let c1 = e.scalar.partial(0);
    let c0 = e.scalar.sub(&xi.mul(&c1));
    let g = e.field.coeff(0);
    let d1 = g.partial(0);
    let d0 = g.sub(&xi.mul(&d1));
    let scalar = c0.add(&xi.mul(&d0));
    let coeff = c1.sub(&xi.mul(&d1));
    Ok(D1Element::new(
        scalar,
        SuperVectorField::single(&chart, 0, coeff)?,
    ))
}

/// On a 1|1 chart with coordinates (t, xi), sends
/// (a0 + a1 xi) d_t + (b0 + b1 xi) d_xi to
/// (a0 + b0 xi) d_t + (a1 + (a0' - b1) xi) d_xi, a0' the t-derivative.
/// An involution on vector fields that negates xi d_xi and therefore cannot
/// come from a polynomial coordinate change.
pub fn exceptional_1_1(x: &SuperVectorField) -> Result<SuperVectorField> {
    let chart = x.chart().clone();
    if chart.p() != 1 || chart.q() != 1 {
        return Err(Error::UnsupportedChart(chart.p(), chart.q()));
    }
    let xi = Superfunction::coordinate(&chart, 1).expect("coordinate in range");
    let a = x.coeff(0);
    let b = x.coeff(1);
    let a0 = a.body();
    let a1 = a.partial(1);
    let b0 = b.body();
    let b1 = b.partial(1);
    let even_new = a0.add(&b0.mul(&xi));
    let odd_new = a1.add(&a0.partial(0).sub(&b1).mul(&xi));
    SuperVectorField::new(&chart, vec![even_new, odd_new])
}

/// On a 0|2 chart, swaps the constant and top coefficients of each field
/// component and replaces the linear coefficient matrix M by M - tr(M) I.
/// Fixes the traceless linear fields, negates the Euler field, and swaps
/// the constant fields with the top-degree ones.
pub fn exceptional_0_2(x: &SuperVectorField) -> Result<SuperVectorField> {
    let chart = x.chart().clone();
    if chart.p() != 0 || chart.q() != 2 {
        return Err(Error::UnsupportedChart(chart.p(), chart.q()));
    }
    let xi1 = Superfunction::coordinate(&chart, 0).expect("coordinate in range");
    let xi2 = Superfunction::coordinate(&chart, 1).expect("coordinate in range");
    let top = xi1.mul(&xi2);

    let mut gamma0 = Vec::new();
    let mut lin = [[crate::int(0), crate::int(0)], [crate::int(0), crate::int(0)]];
    let mut gamma12 = Vec::new();
    for b in 0..2 {
        let g = x.coeff(b);
        gamma0.push(g.constant_term());
        lin[0][b] = g.partial(0).constant_term();
        lin[1][b] = g.partial(1).constant_term();
        gamma12.push(g.partial(0).partial(1).constant_term());
    }
    let trace = lin[0][0].clone() + lin[1][1].clone();

    let mut coeffs = Vec::new();
    for b in 0..2 {
        let mut linear = [lin[0][b].clone(), lin[1][b].clone()];
        linear[b] = linear[b].clone() - trace.clone();
        let g = Superfunction::constant(&chart, gamma12[b].clone())
            .add(&xi1.scale(&linear[0]))
            .add(&xi2.scale(&linear[1]))
            .add(&top.scale(&gamma0[b]));
        coeffs.push(g);
    }
    SuperVectorField::new(&chart, coeffs)
}

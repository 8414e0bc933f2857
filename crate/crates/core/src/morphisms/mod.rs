//! Invertible chart morphisms and the transport of functions, fields, and
//! operators along them.

use std::fmt;

use crate::chart::{same_chart, ChartRef};
use crate::error::{Error, Result};
use crate::operators::{extract_diffop, SuperDiffOp, SuperVectorField};
use crate::superfunction::Superfunction;

/// An invertible polynomial coordinate change.  `images[k]` is the
/// substitute for the k-th source coordinate and lives on the target
/// chart; the inverse images run the other way and the round trip is
/// checked on every coordinate at construction.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ChartMorphism {
    source: ChartRef,
    target: ChartRef,
    images: Vec<Superfunction>,
    inverse_images: Vec<Superfunction>,
}

impl ChartMorphism {
    pub fn new(
        source: &ChartRef,
        target: &ChartRef,
        images: Vec<Superfunction>,
        inverse_images: Vec<Superfunction>,
    ) -> Result<ChartMorphism> {
        check_images(source, target, &images)?;
        check_images(target, source, &inverse_images)?;
        let phi = ChartMorphism {
            source: source.clone(),
            target: target.clone(),
            images,
            inverse_images,
        };
        for k in 0..source.dim() {
            let u = Superfunction::coordinate(source, k)?;
            if phi.pullback_inverse(&phi.pullback(&u)?)? != u {
                return Err(Error::BadInverse);
            }
        }
        for k in 0..target.dim() {
            let v = Superfunction::coordinate(target, k)?;
            if phi.pullback(&phi.pullback_inverse(&v)?)? != v {
                return Err(Error::BadInverse);
            }
        }
        Ok(phi)
    }

    pub fn identity(chart: &ChartRef) -> ChartMorphism {
        let coords: Vec<Superfunction> = (0..chart.dim())
            .map(|k| Superfunction::coordinate(chart, k).expect("coordinate in range"))
            .collect();
        ChartMorphism {
            source: chart.clone(),
            target: chart.clone(),
            images: coords.clone(),
            inverse_images: coords,
        }
    }

    pub fn is_identity(&self) -> bool {
        same_chart(&self.source, &self.target)
            && self
                .images
                .iter()
                .enumerate()
                .all(|(k, im)| *im == Superfunction::coordinate(&self.target, k).unwrap())
    }

    pub fn source(&self) -> &ChartRef {
        &self.source
    }

    pub fn target(&self) -> &ChartRef {
        &self.target
    }

    pub fn images(&self) -> &[Superfunction] {
        &self.images
    }

    pub fn inverse_images(&self) -> &[Superfunction] {
        &self.inverse_images
    }

    pub fn inverse(&self) -> ChartMorphism {
        ChartMorphism {
            source: self.target.clone(),
            target: self.source.clone(),
            images: self.inverse_images.clone(),
            inverse_images: self.images.clone(),
        }
    }

    /// Substitutes every source coordinate by its image; a parity-even
    /// algebra map from source functions to target functions.
    pub fn pullback(&self, f: &Superfunction) -> Result<Superfunction> {
        if !same_chart(f.chart(), &self.source) {
            return Err(Error::ChartMismatch);
        }
        f.substitute(&self.images)
    }

    /// The certified inverse substitution, target functions to source.
    pub fn pullback_inverse(&self, f: &Superfunction) -> Result<Superfunction> {
        if !same_chart(f.chart(), &self.target) {
            return Err(Error::ChartMismatch);
        }
        f.substitute(&self.inverse_images)
    }

    /// The morphism whose substitution action is `then`'s after this one's.
    pub fn compose(&self, then: &ChartMorphism) -> Result<ChartMorphism> {
        if !same_chart(&self.target, &then.source) {
            return Err(Error::ChartMismatch);
        }
        let images = self
            .images
            .iter()
            .map(|im| then.pullback(im))
            .collect::<Result<Vec<_>>>()?;
        let inverse_images = then
            .inverse_images
            .iter()
            .map(|im| self.pullback_inverse(im))
            .collect::<Result<Vec<_>>>()?;
        ChartMorphism::new(&self.source, &then.target, images, inverse_images)
    }

    /// Conjugates the action of an operator on source functions into an
    /// operator on target functions and re-extracts its normal form; the
    /// order is preserved.
    pub fn pushforward_op(&self, d: &SuperDiffOp) -> Result<SuperDiffOp> {
        if !same_chart(d.chart(), &self.source) {
            return Err(Error::ChartMismatch);
        }
        if d.is_zero() {
            return Ok(SuperDiffOp::zero(&self.target));
        }
        let bound = d.order().max(0) as usize;
        let out = extract_diffop(
            |h| {
                let back = self.pullback_inverse(h).expect("target function");
                self.pullback(&d.apply(&back)).expect("source function")
            },
            &self.target,
            bound,
        );
        Ok(out)
    }

    pub fn pushforward_field(&self, x: &SuperVectorField) -> Result<SuperVectorField> {
        let op = self.pushforward_op(&x.to_op())?;
        SuperVectorField::try_from_op(&op)
    }
}

fn check_images(from: &ChartRef, to: &ChartRef, images: &[Superfunction]) -> Result<()> {
    if images.len() != from.dim() {
        return Err(Error::WrongImageCount {
            expected: from.dim(),
            got: images.len(),
        });
    }
    for (k, im) in images.iter().enumerate() {
        if !same_chart(im.chart(), to) {
            return Err(Error::ImageChartMismatch);
        }
        if !im.part(from.parity(k).flip()).is_zero() {
            return Err(Error::ImageParity(k));
        }
    }
    Ok(())
}

impl fmt::Display for ChartMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "morphism(")?;
        for (k, im) in self.images.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{} -> {}", self.source.name(k), im)?;
        }
        write!(f, " ; ")?;
        for (k, im) in self.inverse_images.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{} -> {}", self.target.name(k), im)?;
        }
        write!(f, ")")
    }
}

mod d1auto;
mod exceptional;

pub use d1auto::{check_d1_automorphism, verify_d1_automorphism, AutoCheckFailure, D1Automorphism};
pub use exceptional::{exceptional_0_1, exceptional_0_2, exceptional_1_1};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chart::Chart;
    use crate::operators::D1Element;
    use crate::{int, rat};

    fn coord(chart: &ChartRef, k: usize) -> Superfunction {
        Superfunction::coordinate(chart, k).unwrap()
    }

    fn shift_morphism(c: &ChartRef) -> ChartMorphism {
        // x1 -> x1 + 1 on a 1|n chart.
        let one = Superfunction::one(c);
        let mut images: Vec<Superfunction> = (0..c.dim()).map(|k| coord(c, k)).collect();
        let mut inv = images.clone();
        images[0] = coord(c, 0).add(&one);
        inv[0] = coord(c, 0).sub(&one);
        ChartMorphism::new(c, c, images, inv).unwrap()
    }

    #[test]
    fn pullback_is_substitution() {
        let c = Chart::standard(1, 0);
        let phi = shift_morphism(&c);
        let x = coord(&c, 0);
        let f = x.pow(2);
        let expect = x.pow(2).add(&x.scale(&int(2))).add(&Superfunction::one(&c));
        assert_eq!(phi.pullback(&f).unwrap(), expect);
        assert_eq!(ChartMorphism::identity(&c).pullback(&f).unwrap(), f);
    }

    #[test]
    fn odd_swap_reorders() {
        let c = Chart::standard(0, 2);
        let images = vec![coord(&c, 1), coord(&c, 0)];
        let phi = ChartMorphism::new(&c, &c, images.clone(), images).unwrap();
        let top = coord(&c, 0).mul(&coord(&c, 1));
        assert_eq!(phi.pullback(&top).unwrap(), top.neg());
    }

    #[test]
    fn bad_inverse_is_rejected() {
        let c = Chart::standard(1, 0);
        let images = vec![coord(&c, 0).scale(&int(2))];
        let wrong = vec![coord(&c, 0)];
        assert_eq!(
            ChartMorphism::new(&c, &c, images, wrong).unwrap_err(),
            Error::BadInverse
        );
    }

    #[test]
    fn image_parity_is_checked() {
        let c = Chart::standard(1, 1);
        let images = vec![coord(&c, 1), coord(&c, 1)];
        let inv = images.clone();
        assert_eq!(
            ChartMorphism::new(&c, &c, images, inv).unwrap_err(),
            Error::ImageParity(0)
        );
    }

    #[test]
    fn chain_rule_frozen() {
        // x -> 2x sends d_x to (1/2) d_x.
        let c = Chart::standard(1, 0);
        let phi = ChartMorphism::new(
            &c,
            &c,
            vec![coord(&c, 0).scale(&int(2))],
            vec![coord(&c, 0).scale(&rat(1, 2))],
        )
        .unwrap();
        let d = SuperDiffOp::partial(&c, 0).unwrap();
        assert_eq!(phi.pushforward_op(&d).unwrap(), d.scale(&rat(1, 2)));
    }

    #[test]
    fn pushforward_preserves_composition_and_order() {
        let c = Chart::standard(1, 2);
        let mut images: Vec<Superfunction> = (0..c.dim()).map(|k| coord(&c, k)).collect();
        let mut inv = images.clone();
        // xi1 -> xi1 + x1 xi2 is unipotent.
        images[1] = coord(&c, 1).add(&coord(&c, 0).mul(&coord(&c, 2)));
        inv[1] = coord(&c, 1).sub(&coord(&c, 0).mul(&coord(&c, 2)));
        let phi = ChartMorphism::new(&c, &c, images, inv).unwrap();
        let d = SuperDiffOp::partial(&c, 1).unwrap();
        let e = SuperDiffOp::partial(&c, 2)
            .unwrap()
            .left_mul(&coord(&c, 0));
        let de = d.compose(&e);
        assert_eq!(
            phi.pushforward_op(&de).unwrap(),
            phi.pushforward_op(&d)
                .unwrap()
                .compose(&phi.pushforward_op(&e).unwrap())
        );
        assert_eq!(
            phi.pushforward_op(&d).unwrap().scommutator(&phi.pushforward_op(&e).unwrap()),
            phi.pushforward_op(&d.scommutator(&e)).unwrap()
        );
        assert_eq!(phi.pushforward_op(&de).unwrap().order(), de.order());
    }

    #[test]
    fn composition_is_functorial() {
        let c = Chart::standard(1, 1);
        let phi = shift_morphism(&c);
        let psi = ChartMorphism::new(
            &c,
            &c,
            vec![coord(&c, 0).scale(&int(3)), coord(&c, 1).neg()],
            vec![coord(&c, 0).scale(&rat(1, 3)), coord(&c, 1).neg()],
        )
        .unwrap();
        let chi = phi.compose(&psi).unwrap();
        let f = coord(&c, 0).mul(&coord(&c, 1)).add(&coord(&c, 0).pow(2));
        assert_eq!(
            chi.pullback(&f).unwrap(),
            psi.pullback(&phi.pullback(&f).unwrap()).unwrap()
        );
        let d = SuperDiffOp::partial(&c, 0)
            .unwrap()
            .compose(&SuperDiffOp::partial(&c, 1).unwrap())
            .left_mul(&coord(&c, 1));
        assert_eq!(
            chi.pushforward_op(&d).unwrap(),
            psi.pushforward_op(&phi.pushforward_op(&d).unwrap()).unwrap()
        );
        let round = phi.compose(&phi.inverse()).unwrap();
        assert!(round.is_identity());
    }

    #[test]
    fn field_pushforward_stays_a_field() {
        let c = Chart::standard(1, 1);
        let phi = shift_morphism(&c);
        let x_field = SuperVectorField::single(&c, 0, coord(&c, 1))
            .unwrap()
            .add(&SuperVectorField::single(&c, 1, coord(&c, 0).pow(2)).unwrap());
        let pushed = phi.pushforward_field(&x_field).unwrap();
        let e = D1Element::new(Superfunction::zero(&c), x_field);
        let via_op = phi.pushforward_op(&e.to_op()).unwrap();
        assert_eq!(pushed.to_op(), via_op);
    }

    #[test]
    fn display_round_shape() {
        let c = Chart::standard(1, 1);
        let phi = shift_morphism(&c);
        assert_eq!(
            phi.to_string(),
            "morphism(x1 -> 1 + x1, xi1 -> xi1 ; x1 -> -1 + x1, xi1 -> xi1)"
        );
    }
}

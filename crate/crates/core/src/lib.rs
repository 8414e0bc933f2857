//! Exact calculus for superdifferential operators on coordinate charts of
//! smooth supermanifolds with polynomial data.
//!
//! Scalars are arbitrary-precision rationals.  Functions live in
//! Q[x^1..x^p] (x) Lambda(xi^1..xi^q); operators are finite sums of
//! coefficient-times-derivative words kept in a canonical normal form.
//! Everything is exact: equality of values is decidable and used as the
//! test oracle throughout.

pub mod chart;
pub mod clifford;
pub mod divergence;
pub mod error;
pub mod forms;
pub mod koszul;
pub mod morphisms;
pub mod operators;
pub mod random;
pub mod superfunction;

pub use chart::{Chart, ChartRef, Parity};
pub use clifford::{fock_basis, rep, spans_full_endomorphisms, swap_automorphism, FockMatrix};
pub use divergence::{
    berezinian_transform, candiv, classify_cocycle, div_from_berezinian, is_coboundary,
    rescale_divergence, verify_cocycle, verify_gdiv_law, BerezinianSection, GeneralizedDivergence,
};
pub use error::Error;
pub use forms::{de_rham, poincare_primitive, SuperOneForm};
pub use koszul::OddSet;
pub use morphisms::{
    check_d1_automorphism, exceptional_0_1, exceptional_0_2, exceptional_1_1,
    verify_d1_automorphism, AutoCheckFailure, ChartMorphism, D1Automorphism,
};
pub use operators::{
    commutator_decompose, euler_field, z_grading_decompose, D1Element, DerivWord, OperatorExpr,
    SuperDiffOp, SuperVectorField,
};
pub use superfunction::{Monomial, Superfunction};

pub type Rational = num_rational::BigRational;

/// Convenience constructor for small rational constants.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(num.into(), den.into())
}

/// Convenience constructor for small integer constants.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

//! Superdifferential operators in normal form, operator expressions with two
//! independent normalizers, vector fields, and the order-one calculus.

mod decompose;
mod diffop;
mod expr;
mod field;

pub use decompose::commutator_decompose;
pub use diffop::{
    check_ad_nilpotent_functions, check_first_order_leibniz, DerivWord, SuperDiffOp,
};
pub use expr::{extract_diffop, OperatorExpr};
pub use field::{euler_field, z_grading_decompose, D1Element, SuperVectorField};

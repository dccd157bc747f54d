//! Weight conditions for unitarizing linear representations of primitive posets
//! of finite type.
//!
//! A primitive poset `(k_1, ..., k_m)` is a disjoint union of chains. Its
//! indecomposable representations are indexed by chain-monotone positive roots
//! of the star graph `T_{k_1+1,...,k_m+1}`. For each one, [`derive`] computes
//! the exact set of weights `(alpha; gamma)` for which orthogonal projections
//! onto the subspaces can satisfy `sum alpha_i P_i = gamma I`, and [`numeric`]
//! builds such projections.

pub mod coxeter;
pub mod derive;
pub mod error;
pub mod form;
pub mod json;
pub mod linalg;
pub mod linrep;
pub mod lp;
pub mod notation;
pub mod numeric;
pub mod poset;
pub mod roots;

pub use error::{Error, Result};
pub use form::{Condition, ConditionSet, LinearForm, Relation, SymbolicWeight, Var, Weight};
pub use poset::{DimVector, PrimitivePoset};

/// Exact arbitrary-precision rational.
pub type Rational = num_rational::BigRational;

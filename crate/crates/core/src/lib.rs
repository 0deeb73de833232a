//! Local commutative algebra for isolated hypersurface singularities.
//!
//! The crate computes Milnor, Tjurina, ICIS Milnor and Bruce-Roberts numbers,
//! the top polar multiplicity and the Euler obstruction of a hypersurface
//! germ `X = {φ = 0}` and a function `f`, each through several independent
//! routes, and cross-checks every colength with a jet-space oracle.

pub mod corpus;
pub mod invariants;
pub mod oracle;
pub mod parse;
pub mod poly;
pub mod report;
pub mod sbasis;
pub mod tangent;
pub mod verify;

pub use parse::{parse_polynomial, parse_vars, ParseError};
pub use poly::{
    jacobian_minor, jacobian_minors, AlgebraError, Coeff, LocalOrder, Monomial, PolyVector,
    Polynomial,
};
pub use sbasis::{Colength, IdealPresentation, SbError, SubmodulePresentation};

//! Exact algebra for deciding properties of rational maps between varieties.

pub mod checks;
pub mod cli;
pub mod error;
pub mod groebner;
pub mod linalg;
pub mod monoids;
pub mod nullcert;
pub mod polyring;
pub mod varieties;
pub mod wsystem;

pub use error::{BudgetExceeded, Error, Result};
pub use polyring::{Coeff, Field, Monomial, MonomialOrder, Polynomial, Ring, VariableSet};

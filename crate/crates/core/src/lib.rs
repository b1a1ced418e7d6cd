//! Coverages on finite inverse semigroups, their universal pseudogroups, and
//! the étale groupoids of filters built from them.

pub mod algebra;
pub mod checks;
pub mod coverage;
pub mod error;
pub mod filters;
pub mod groupoid;
pub mod io;
pub mod pseudogroup;

pub use algebra::{ElementId, ElementSet, FiniteInverseSemigroup};
pub use error::{Error, Result};

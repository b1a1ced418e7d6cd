//! Finite inverse semigroups: tables, order, compatibility, fixtures.

mod fixtures;
mod semigroup;
mod set;

pub use fixtures::{e4, i2, make_fixture, make_fixture_capped, Fixture};
pub use semigroup::{
    validate, FiniteInverseSemigroup, SemigroupMap, SemigroupTable, Subsemigroup, ValidateOptions,
    DEFAULT_SIZE_CAP,
};
pub use set::{subsets_of, ElementId, ElementSet};

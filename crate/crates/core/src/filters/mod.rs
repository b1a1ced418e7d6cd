//! Filters in finite inverse semigroups.
//!
//! A down-directed finite set has a minimum, so every filter is `↑m` for a
//! unique `m`. Filters are stored by that minimum together with the carrier.
//! Filters "in E(S)" live in the same index space as S, with carriers
//! restricted to the idempotents.

mod germ;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::{ElementId, ElementSet, FiniteInverseSemigroup};
use crate::error::{Error, Result};
use crate::pseudogroup::Pseudogroup;

pub use germ::{
    check_germ_lemma, check_nucleus_germ_lemma, filter_from_germ_data, germ, germ_set, GermReport,
};

/// Past this many elements the exhaustive completely-prime oracle refuses to run.
pub const COMPLETELY_PRIME_ORACLE_CAP: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrincipalFilter {
    pub min: ElementId,
    pub carrier: ElementSet,
}

impl PrincipalFilter {
    /// `↑m` in S.
    pub fn up(s: &FiniteInverseSemigroup, m: ElementId) -> Self {
        PrincipalFilter {
            min: m,
            carrier: s.up(m).clone(),
        }
    }

    /// `↑m ∩ universe`.
    pub fn up_in(s: &FiniteInverseSemigroup, m: ElementId, universe: &ElementSet) -> Self {
        PrincipalFilter {
            min: m,
            carrier: s.up(m).intersection(universe),
        }
    }

    /// Recovers the minimum of a filter given as a plain set.
    pub fn from_carrier(s: &FiniteInverseSemigroup, carrier: ElementSet) -> Option<Self> {
        s.minimum(&carrier)
            .map(|min| PrincipalFilter { min, carrier })
    }

    pub fn contains(&self, x: ElementId) -> bool {
        self.carrier.contains(x)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FilterKind {
    All,
    Ultra,
    Tight,
    CompletelyPrime,
}

impl fmt::Display for FilterKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FilterKind::All => "all",
            FilterKind::Ultra => "ultra",
            FilterKind::Tight => "tight",
            FilterKind::CompletelyPrime => "completely-prime",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FilterFamily {
    pub kind: FilterKind,
    pub filters: Vec<PrincipalFilter>,
}

impl FilterFamily {
    pub fn len(&self) -> usize {
        self.filters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.filters.is_empty()
    }

    pub fn minima(&self) -> Vec<ElementId> {
        self.filters.iter().map(|f| f.min).collect()
    }

    pub fn position(&self, min: ElementId) -> Option<usize> {
        self.filters.iter().position(|f| f.min == min)
    }

    pub fn contains_min(&self, min: ElementId) -> bool {
        self.position(min).is_some()
    }
}

/// True when `↑m ∩ universe` is a proper subset of `universe`.
pub fn is_proper_in(s: &FiniteInverseSemigroup, m: ElementId, universe: &ElementSet) -> bool {
    !universe.is_subset(s.up(m))
}

/// All filters of S.
pub fn enumerate_filters(s: &FiniteInverseSemigroup) -> FilterFamily {
    enumerate_filters_in(s, &s.full_set())
}

/// All filters of the subposet `universe` (for instance `E(S)`).
pub fn enumerate_filters_in(s: &FiniteInverseSemigroup, universe: &ElementSet) -> FilterFamily {
    let filters = universe
        .iter()
        .filter(|&m| is_proper_in(s, m, universe))
        .map(|m| PrincipalFilter::up_in(s, m, universe))
        .collect();
    FilterFamily {
        kind: FilterKind::All,
        filters,
    }
}

/// Filters maximal under inclusion.
pub fn ultrafilters(s: &FiniteInverseSemigroup) -> FilterFamily {
    ultrafilters_in(s, &s.full_set())
}

pub fn ultrafilters_in(s: &FiniteInverseSemigroup, universe: &ElementSet) -> FilterFamily {
    let all = enumerate_filters_in(s, universe);
    let filters = all
        .filters
        .iter()
        .filter(|f| {
            !all.filters
                .iter()
                .any(|g| g.carrier != f.carrier && f.carrier.is_subset(&g.carrier))
        })
        .cloned()
        .collect();
    FilterFamily {
        kind: FilterKind::Ultra,
        filters,
    }
}

/// `↑m` is completely prime iff `m` is not the join of the elements strictly
/// below it.
///
/// If `m = ⋁A` with `A` compatible and no member of `A` above `m`, every member
/// lies strictly below `m`, so `m = ⋁(↓m \ {m})`. Conversely, if `⋁A ∈ ↑m` then
/// `m = mm⁻¹⋁A = ⋁{mm⁻¹a}` by distributivity, and one of the `mm⁻¹a ≤ a` must
/// equal `m`.
pub fn is_completely_prime(p: &Pseudogroup, xi: &PrincipalFilter) -> bool {
    let s = p.semigroup();
    let mut below = s.down(xi.min).clone();
    below.remove(xi.min);
    s.join(&below) != Some(xi.min)
}

/// Checks the definition directly: every compatible antichain whose join lies
/// in `xi` meets `xi`. Exponential; capped at [`COMPLETELY_PRIME_ORACLE_CAP`].
pub fn is_completely_prime_exhaustive(p: &Pseudogroup, xi: &PrincipalFilter) -> Result<bool> {
    let s = p.semigroup();
    if s.len() > COMPLETELY_PRIME_ORACLE_CAP {
        return Err(Error::size(
            "completely-prime oracle",
            s.len(),
            COMPLETELY_PRIME_ORACLE_CAP,
        ));
    }
    let antichains = s.compatible_antichains(&s.full_set(), 1 << 22)?;
    for a in antichains.iter().filter(|a| !a.is_empty()) {
        let join = s.join(a).ok_or_else(|| Error::NotAPseudogroup {
            law: "compatible join".into(),
            witness: s.fmt_set(a),
        })?;
        if xi.contains(join) && !a.intersects(&xi.carrier) {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn completely_prime_filters(p: &Pseudogroup) -> FilterFamily {
    let all = enumerate_filters(p.semigroup());
    let filters = all
        .filters
        .into_iter()
        .filter(|f| is_completely_prime(p, f))
        .collect();
    FilterFamily {
        kind: FilterKind::CompletelyPrime,
        filters,
    }
}

/// The definition of a filter on an arbitrary subset, used as an oracle.
pub fn is_filter_set(s: &FiniteInverseSemigroup, xi: &ElementSet, universe: &ElementSet) -> bool {
    if xi.is_empty() || !xi.is_subset(universe) || xi == universe {
        return false;
    }
    let up_closed = xi
        .iter()
        .all(|x| s.up(x).intersection(universe).is_subset(xi));
    up_closed
        && xi.iter().all(|a| {
            xi.iter()
                .all(|b| xi.iter().any(|c| s.leq(c, a) && s.leq(c, b)))
        })
}

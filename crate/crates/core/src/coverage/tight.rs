use std::collections::BTreeSet;
use std::sync::Arc;

use super::Coverage;
use crate::algebra::{ElementId, ElementSet, FiniteInverseSemigroup};
use crate::error::{Error, Result};

/// Largest `↓a` whose subsets are enumerated when building tight coverings.
pub const TIGHT_COVER_BITS: usize = 20;

/// `Z ⊆ ↓a` is tight when every `0 ≠ t ≤ a` has some `z ∈ Z` with
/// `↓t ∩ ↓z ≠ {0}`.
pub fn is_tight_cover(s: &FiniteInverseSemigroup, a: ElementId, z: &ElementSet) -> Result<bool> {
    let zero = s.zero().ok_or(Error::NoZero)?;
    if !z.is_subset(s.down(a)) {
        return Ok(false);
    }
    Ok(s.down(a)
        .iter()
        .filter(|&t| t != zero)
        .all(|t| z.iter().any(|y| meets(s, zero, t, y))))
}

fn meets(s: &FiniteInverseSemigroup, zero: ElementId, t: ElementId, z: ElementId) -> bool {
    s.down(t).intersection(s.down(z)).iter().any(|x| x != zero)
}

/// The semilattice form: every `0 ≠ b ≤ a` has some `z ∈ Z` with `bz ≠ 0`.
pub fn is_tight_cover_semilattice(
    s: &FiniteInverseSemigroup,
    a: ElementId,
    z: &ElementSet,
) -> Result<bool> {
    let zero = s.zero().ok_or(Error::NoZero)?;
    if !s.is_idempotent(a) {
        return Err(Error::NotASemilattice(format!(
            "{} is not idempotent",
            s.name(a)
        )));
    }
    if !z.is_subset(s.down(a)) {
        return Ok(false);
    }
    Ok(s.down(a)
        .iter()
        .filter(|&b| b != zero)
        .all(|b| z.iter().any(|y| s.mul(b, y) != zero)))
}

pub fn tight_coverage(s: Arc<FiniteInverseSemigroup>) -> Result<Coverage> {
    tight_coverage_capped(s, TIGHT_COVER_BITS)
}

/// All tight coverings of every element.
pub fn tight_coverage_capped(s: Arc<FiniteInverseSemigroup>, cap_bits: usize) -> Result<Coverage> {
    let zero = s.zero().ok_or(Error::NoZero)?;
    let mut cov = Coverage::empty(s.clone());
    for a in s.elements() {
        let down: Vec<ElementId> = s.down(a).iter().collect();
        if down.len() > cap_bits.min(62) {
            return Err(Error::size(
                "tight coverings: size of a down-set",
                down.len(),
                cap_bits.min(62),
            ));
        }
        // For each nonzero t ≤ a, the local bitmask of z ≤ a meeting t.
        let needs: Vec<u64> = down
            .iter()
            .filter(|&&t| t != zero)
            .map(|&t| {
                down.iter()
                    .enumerate()
                    .filter(|&(_, &z)| meets(&s, zero, t, z))
                    .fold(0u64, |m, (i, _)| m | (1 << i))
            })
            .collect();
        let mut found = BTreeSet::new();
        for mask in 0u64..(1u64 << down.len()) {
            if needs.iter().all(|&need| need & mask != 0) {
                let z = ElementSet::from_ids(
                    s.len(),
                    (0..down.len())
                        .filter(|i| mask & (1 << i) != 0)
                        .map(|i| down[i]),
                );
                found.insert(z);
            }
        }
        cov.covers[a.index()] = found;
    }
    Ok(cov)
}

/// Coverings of `a` with no proper subset that is also a covering.
pub fn minimal_covers(cov: &Coverage, a: ElementId) -> Vec<ElementSet> {
    let all = cov.covers(a);
    all.iter()
        .filter(|x| !all.iter().any(|y| y != *x && y.is_subset(x)))
        .cloned()
        .collect()
}

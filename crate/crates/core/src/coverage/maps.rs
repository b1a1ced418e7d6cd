use std::collections::BTreeSet;

use super::{same_base, Coverage};
use crate::algebra::{ElementId, ElementSet, SemigroupMap};
use crate::error::{Error, Result};
use crate::pseudogroup::Pseudogroup;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverToJoinReport {
    pub cover_to_join: bool,
    pub idempotent_pure: bool,
    /// First covering not sent to a join, as `a: X`.
    pub witness: Option<String>,
}

/// Checks that `θ(a) = ⋁θ(X)` for every covering `X` of `a`.
pub fn is_cover_to_join(
    theta: &SemigroupMap,
    cov: &Coverage,
    target: &Pseudogroup,
) -> Result<CoverToJoinReport> {
    if !same_base(&theta.source, cov.base_arc()) || !same_base(&theta.target, target.arc()) {
        return Err(Error::BaseMismatch);
    }
    theta.check_homomorphism()?;
    let s = cov.base();
    let t = target.semigroup();
    let mut witness = None;
    'outer: for a in s.elements() {
        for x in cov.all_covers(a)? {
            let image = theta.apply_set(&x);
            if !t.compatible_set(&image) || t.join(&image) != Some(theta.apply(a)) {
                witness = Some(format!("{}: {}", s.name(a), s.fmt_set(&x)));
                break 'outer;
            }
        }
    }
    Ok(CoverToJoinReport {
        cover_to_join: witness.is_none(),
        idempotent_pure: theta.is_idempotent_pure(),
        witness,
    })
}

/// The coverage on `P` induced by `θ: S → P` and a coverage on S.
///
/// Coverings of `p` are all compatible `I` with `⋁I = p` (kept implicit) and
/// the sets `qθ(X)r` whenever `p = qθ(a)r` and `X ∈ C(a)`. Since P has an
/// identity, taking `q` or `r` to be 1 gives the one-sided and untranslated
/// forms. On a commutative P the right factor is redundant and skipped.
pub fn induced_coverage(
    theta: &SemigroupMap,
    cov: &Coverage,
    target: &Pseudogroup,
) -> Result<Coverage> {
    if !same_base(&theta.source, cov.base_arc()) || !same_base(&theta.target, target.arc()) {
        return Err(Error::BaseMismatch);
    }
    theta.check_homomorphism()?;
    if let Some(x) = theta.idempotent_purity_witness() {
        return Err(Error::NotIdempotentPure {
            element: theta.source.name(x).to_string(),
        });
    }
    let p = target.semigroup();
    let commutative = p
        .elements()
        .all(|x| p.elements().all(|y| p.mul(x, y) == p.mul(y, x)));

    let mut images: BTreeSet<(ElementId, ElementSet)> = BTreeSet::new();
    for a in cov.base().elements() {
        for x in cov.all_covers(a)? {
            images.insert((theta.apply(a), theta.apply_set(&x)));
        }
    }

    let mut out = Coverage::join_coverage(target);
    for (ta, tx) in &images {
        for q in p.elements() {
            let qa = p.mul(q, *ta);
            let qx = p.left(q, tx);
            if commutative {
                out.covers[qa.index()].insert(qx);
                continue;
            }
            for r in p.elements() {
                out.covers[p.mul(qa, r).index()].insert(p.right(&qx, r));
            }
        }
    }
    Ok(out)
}

use super::filters::{cp_filter_groupoid, FilterGroupoid};
use super::{is_continuous, FiniteTopology};
use crate::algebra::{ElementId, ElementSet};
use crate::coverage::Coverage;
use crate::error::{Error, Result};
use crate::pseudogroup::{close_ideal, Nucleus, Pseudogroup};

/// Checks on `Φ: G(P_ν) → G(P)`, `Φ(A) = ν⁻¹(A)`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EmbeddingReport {
    pub well_defined: bool,
    pub injective: bool,
    pub functorial: bool,
    pub reflects_composability: bool,
    pub preserves_inverse: bool,
    pub continuous: bool,
    pub open_onto_image: bool,
    pub range_closed: bool,
    pub failures: Vec<String>,
}

impl EmbeddingReport {
    pub fn is_ok(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Debug, Clone)]
pub struct NucleusEmbedding {
    /// `G(P_ν)`.
    pub source: FilterGroupoid,
    /// `G(P)`.
    pub target: FilterGroupoid,
    /// Arrow of the source to arrow of the target.
    pub map: Vec<usize>,
    pub report: EmbeddingReport,
}

/// A set is open in the subspace `image` when it contains, with each point,
/// that point's minimal neighbourhood cut down to the subspace.
fn open_in(t: &FiniteTopology, image: &ElementSet, u: &ElementSet) -> bool {
    u.indices()
        .all(|y| t.neighbourhood(y).intersection(image).is_subset(u))
}

pub fn nucleus_embedding(p: &Pseudogroup, nu: &Nucleus) -> Result<NucleusEmbedding> {
    if **nu.base() != *p.semigroup() {
        return Err(Error::BaseMismatch);
    }
    nu.check_axioms()?;
    let q = nu.quotient()?;
    let source = cp_filter_groupoid(&Pseudogroup::new(q.semigroup.clone())?)?;
    let target = cp_filter_groupoid(p)?;
    let s = p.semigroup();
    let mut report = EmbeddingReport::default();
    let mut map = Vec::with_capacity(source.len());
    for a in 0..source.len() {
        let pre = ElementSet::from_ids(
            s.len(),
            s.elements()
                .filter(|x| source.carrier(a).contains(q.project[x.index()])),
        );
        match target.index_of(&pre) {
            Some(i) => map.push(i),
            None => {
                report.failures.push(format!(
                    "Φ({}) is not a completely prime filter",
                    source.groupoid.label(a)
                ));
                return Ok(NucleusEmbedding {
                    source,
                    target,
                    map,
                    report,
                });
            }
        }
    }
    report.well_defined = true;
    let (g, h) = (&source.groupoid, &target.groupoid);
    let label = |a: usize| g.label(a).to_string();

    report.injective = ElementSet::from_indices(h.len(), map.iter().copied()).len() == map.len();
    if !report.injective {
        report.failures.push("Φ is not injective".into());
    }
    report.functorial = true;
    report.reflects_composability = true;
    for x in g.arrows() {
        for y in g.arrows() {
            let lhs = g.compose(x, y);
            let rhs = h.compose(map[x], map[y]);
            if lhs.is_some() != rhs.is_some() {
                report.reflects_composability = false;
                report
                    .failures
                    .push(format!("composability of ({},{})", label(x), label(y)));
            } else if lhs.map(|z| map[z]) != rhs {
                report.functorial = false;
                report
                    .failures
                    .push(format!("Φ(A*B) = Φ(A)*Φ(B) at ({},{})", label(x), label(y)));
            }
        }
    }
    report.preserves_inverse = g.arrows().all(|x| map[g.inv(x)] == h.inv(map[x]));
    if !report.preserves_inverse {
        report.failures.push("Φ(A⁻¹) = Φ(A)⁻¹".into());
    }
    report.continuous = is_continuous(&map, g.topology(), h.topology());
    if !report.continuous {
        report.failures.push("Φ is continuous".into());
    }
    let image = ElementSet::from_indices(h.len(), map.iter().copied());
    report.open_onto_image = g.arrows().all(|x| {
        let u = ElementSet::from_indices(
            h.len(),
            g.topology().neighbourhood(x).indices().map(|y| map[y]),
        );
        open_in(h.topology(), &image, &u)
    });
    if !report.open_onto_image {
        report.failures.push("Φ is open onto its image".into());
    }
    report.range_closed = h.arrows().all(|x| image.has(x) == image.has(h.r(x)));
    if !report.range_closed {
        report.failures.push("X ∈ Im Φ iff r(X) ∈ Im Φ".into());
    }
    Ok(NucleusEmbedding {
        source,
        target,
        map,
        report,
    })
}

/// The nucleus on a pseudogroup sending `a` to the largest element of the
/// least closed ideal containing `↓a`, for the coverage joined with all join
/// decompositions.
pub fn nucleus_on_pseudogroup(p: &Pseudogroup, cov: &Coverage) -> Result<Nucleus> {
    let s = p.semigroup();
    let cov = cov.clone().with_join_covers(p)?;
    let mut map = Vec::with_capacity(s.len());
    for a in s.elements() {
        let closed = close_ideal(&cov, &ElementSet::singleton(s.len(), a));
        if let Some((x, y)) = s.incompatible_pair(&closed) {
            return Err(Error::CompatibilityLost {
                ideal: s.fmt_set(s.down(a)),
                x: s.name(x).to_string(),
                y: s.name(y).to_string(),
            });
        }
        let top = p.join(&closed)?;
        if s.down(top) != &closed {
            return Err(Error::property(
                "closed ideals are principal",
                s.fmt_set(&closed),
            ));
        }
        map.push(top);
    }
    Nucleus::new(p.arc().clone(), map)
}

/// Every nucleus on a small pseudogroup, by search over `ν(a) ∈ ↑a`.
pub fn all_nuclei(p: &Pseudogroup, cap: u64) -> Result<Vec<Nucleus>> {
    let s = p.semigroup();
    let space = s
        .elements()
        .try_fold(1u64, |acc, a| acc.checked_mul(s.up(a).len() as u64));
    match space {
        Some(n) if n <= cap => {}
        _ => {
            let size = space.map_or(usize::MAX, |n| n as usize);
            return Err(Error::size("candidate nucleus maps", size, cap as usize));
        }
    }
    let mut out = Vec::new();
    let mut map: Vec<ElementId> = s.elements().collect();

    fn go(i: usize, p: &Pseudogroup, map: &mut Vec<ElementId>, out: &mut Vec<Nucleus>) {
        let s = p.semigroup();
        if i == s.len() {
            if let Ok(nu) = Nucleus::new(p.arc().clone(), map.clone()) {
                out.push(nu);
            }
            return;
        }
        let a = ElementId::new(i);
        for v in s.up(a).iter() {
            // Monotone on what is already assigned.
            if (0..i)
                .map(ElementId::new)
                .any(|b| s.leq(b, a) && !s.leq(map[b.index()], v))
            {
                continue;
            }
            map[i] = v;
            go(i + 1, p, map, out);
        }
        map[i] = a;
    }

    go(0, p, &mut map, &mut out);
    Ok(out)
}

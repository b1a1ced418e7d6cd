use std::fmt;

use super::embedding::nucleus_on_pseudogroup;
use super::OpenFrame;
use crate::algebra::ElementSet;
use crate::coverage::Coverage;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubspaceRoute {
    /// Pointwise test against every explicit covering. Needs a T1 space.
    Lemma,
    /// Points of the sublocale cut out by the nucleus of the coverage.
    Spectrum,
}

impl fmt::Display for SubspaceRoute {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SubspaceRoute::Lemma => "lemma",
            SubspaceRoute::Spectrum => "spectrum",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace {
    pub points: ElementSet,
    pub route: SubspaceRoute,
}

fn check_base(frame: &OpenFrame, cov: &Coverage) -> Result<()> {
    if cov.base() != &**frame.semigroup() {
        return Err(Error::BaseMismatch);
    }
    Ok(())
}

/// `X_C` for a coverage on the opens of a T1 space: the points that, whenever
/// they lie in a covered open `U`, lie in some member of the covering.
///
/// Join coverings are ignored; a union that equals `U` can never exclude a
/// point of `U`.
pub fn subspace_from_coverage(frame: &OpenFrame, cov: &Coverage) -> Result<ElementSet> {
    check_base(frame, cov)?;
    let t = &frame.topology;
    // Finite and T1 means discrete, which is sober.
    if !t.is_t1() {
        return Err(Error::NotT1Sober);
    }
    let mut points = t.full();
    for (u, z) in cov.explicit() {
        let covered = z.iter().fold(ElementSet::empty(t.len()), |acc, v| {
            acc.union(frame.open(v))
        });
        points.difference_with(&frame.open(u).difference(&covered));
    }
    Ok(points)
}

/// `X_C` through the nucleus `ν` generated by the coverage: `x` survives when
/// `ν` does not push the largest open missing `x` up to one containing it.
pub fn subspace_via_spectrum(frame: &OpenFrame, cov: &Coverage) -> Result<ElementSet> {
    check_base(frame, cov)?;
    let t = &frame.topology;
    let nu = nucleus_on_pseudogroup(&frame.pseudogroup, cov)?;
    let mut points = ElementSet::empty(t.len());
    for x in 0..t.len() {
        let away = t
            .full()
            .difference(&t.closure(&ElementSet::from_indices(t.len(), [x])));
        let u = frame
            .id_of(&away)
            .ok_or_else(|| Error::property("complement of a closure is open", t.label(x)))?;
        if !frame.open(nu.apply(u)).has(x) {
            points.add(x);
        }
    }
    Ok(points)
}

/// `X_C` by the pointwise lemma when the space is T1, cross-checked against
/// the nucleus route; otherwise by the nucleus route alone.
pub fn subspace(frame: &OpenFrame, cov: &Coverage) -> Result<Subspace> {
    let via_spectrum = subspace_via_spectrum(frame, cov)?;
    if !frame.topology.is_t1() {
        return Ok(Subspace {
            points: via_spectrum,
            route: SubspaceRoute::Spectrum,
        });
    }
    let points = subspace_from_coverage(frame, cov)?;
    if points != via_spectrum {
        let t = &frame.topology;
        let names = |u: &ElementSet| {
            u.indices()
                .map(|i| t.label(i).to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        return Err(Error::property(
            "pointwise and nucleus descriptions of X_C agree",
            format!("{{{}}} vs {{{}}}", names(&points), names(&via_spectrum)),
        ));
    }
    Ok(Subspace {
        points,
        route: SubspaceRoute::Lemma,
    })
}

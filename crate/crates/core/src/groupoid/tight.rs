use std::sync::Arc;

use super::bisections::{is_sober, open_frame, OpenFrame};
use super::filters::{filter_groupoid, patch_topology, FilterGroupoid, TopologyKind};
use super::subspace::{subspace, subspace_from_coverage, SubspaceRoute};
use super::{is_bijective, FiniteGroupoid, FiniteTopology, OPEN_SET_CAP};
use crate::algebra::{ElementId, ElementSet, FiniteInverseSemigroup, SemigroupMap};
use crate::coverage::{induced_coverage, is_tight_cover, tight_coverage};
use crate::error::{Error, Result};
use crate::filters::{
    enumerate_filters, enumerate_filters_in, ultrafilters_in, FilterFamily, FilterKind,
    PrincipalFilter,
};
use crate::pseudogroup::{nucleus_from_coverage, universal_pseudogroup, UniversalPseudogroup};

fn require_semilattice(s: &FiniteInverseSemigroup) -> Result<()> {
    s.zero().ok_or(Error::NoZero)?;
    if !s.is_semilattice() {
        return Err(Error::NotASemilattice(
            "some element is not idempotent".into(),
        ));
    }
    Ok(())
}

/// Meets every tight covering of each of its elements. Tight coverings of `a`
/// are closed upwards inside `↓a`, so it is enough that `↓a \ ξ` is not one.
fn is_tight_filter(s: &FiniteInverseSemigroup, xi: &PrincipalFilter) -> Result<bool> {
    for a in xi.carrier.iter() {
        if is_tight_cover(s, a, &s.down(a).difference(&xi.carrier))? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `tfilt(E(S))`, by the covering characterization.
pub fn tight_filters(s: &FiniteInverseSemigroup) -> Result<FilterFamily> {
    s.zero().ok_or(Error::NoZero)?;
    let mut filters = Vec::new();
    for f in enumerate_filters_in(s, s.idempotents()).filters {
        if is_tight_filter(s, &f)? {
            filters.push(f);
        }
    }
    Ok(FilterFamily {
        kind: FilterKind::Tight,
        filters,
    })
}

/// `tfilt(E(S))` as the patch closure of the ultrafilters in `filt(E(S))`.
pub fn tight_filters_by_closure(s: &FiniteInverseSemigroup) -> Result<FilterFamily> {
    s.zero().ok_or(Error::NoZero)?;
    let e = s.idempotents();
    let all = enumerate_filters_in(s, e);
    let carriers: Vec<ElementSet> = all.filters.iter().map(|f| f.carrier.clone()).collect();
    let labels = all
        .filters
        .iter()
        .map(|f| s.name(f.min).to_string())
        .collect();
    let t = patch_topology(s, &carriers, e, labels)?;
    let ultra = ultrafilters_in(s, e);
    let points = ElementSet::from_indices(
        all.len(),
        ultra.filters.iter().filter_map(|u| all.position(u.min)),
    );
    let closure = t.closure(&points);
    let filters = all
        .filters
        .into_iter()
        .enumerate()
        .filter(|(i, _)| closure.has(*i))
        .map(|(_, f)| f)
        .collect();
    Ok(FilterFamily {
        kind: FilterKind::Tight,
        filters,
    })
}

/// `tfilt(E(S))` with the topology `τ_E` generated by `V_e = {ξ | e ∈ ξ}`.
#[derive(Debug, Clone)]
pub struct TightSpace {
    pub filters: FilterFamily,
    pub topology: FiniteTopology,
    /// `V_e`, indexed by element; empty off the idempotents.
    pub v: Vec<ElementSet>,
}

pub fn tau_e(s: &FiniteInverseSemigroup) -> Result<TightSpace> {
    let filters = tight_filters(s)?;
    let n = filters.len();
    let v: Vec<ElementSet> = s
        .elements()
        .map(|e| {
            ElementSet::from_indices(
                n,
                (0..n).filter(|&i| s.is_idempotent(e) && filters.filters[i].contains(e)),
            )
        })
        .collect();
    let labels = filters
        .filters
        .iter()
        .map(|f| s.name(f.min).to_string())
        .collect();
    let basis = s
        .idempotents()
        .iter()
        .map(|e| v[e.index()].clone())
        .collect();
    let topology = FiniteTopology::new(labels, basis)?;
    Ok(TightSpace {
        filters,
        topology,
        v,
    })
}

/// `ν(↓e) = {g | some tight covering of g lies in ↓e}`, for each `e` of a
/// semilattice. Tight coverings of `g` are closed upwards in `↓g`, so this
/// asks whether `↓g ∩ ↓e` is one.
pub fn tight_nucleus_direct(e: &FiniteInverseSemigroup) -> Result<Vec<ElementSet>> {
    require_semilattice(e)?;
    let mut out = Vec::with_capacity(e.len());
    for x in e.elements() {
        let mut set = e.empty_set();
        for g in e.elements() {
            if is_tight_cover(e, g, &e.down(g).intersection(e.down(x)))? {
                set.insert(g);
            }
        }
        out.push(set);
    }
    Ok(out)
}

/// `ψ: F_{C_t}(E) → τ_E`, `ψ(I) = ⋃_{x ∈ I} V_x`.
#[derive(Debug, Clone)]
pub struct TightFrameIso {
    pub universal: UniversalPseudogroup,
    pub space: TightSpace,
    pub frame: OpenFrame,
    pub map: Vec<ElementId>,
}

pub fn tight_frame_iso(e: Arc<FiniteInverseSemigroup>) -> Result<TightFrameIso> {
    require_semilattice(&e)?;
    let universal = universal_pseudogroup(&tight_coverage(e.clone())?)?;
    let direct = tight_nucleus_direct(&e)?;
    for x in e.elements() {
        if universal.ideal(universal.pi.apply(x)) != &direct[x.index()] {
            return Err(Error::property(
                "direct tight nucleus agrees with the fixpoint",
                e.name(x),
            ));
        }
    }
    let space = tau_e(&e)?;
    let frame = open_frame(&space.topology, OPEN_SET_CAP)?;
    let f = universal.semigroup();
    let t = frame.semigroup();
    let mut map = Vec::with_capacity(f.len());
    for p in f.elements() {
        let u = universal
            .ideal(p)
            .iter()
            .fold(ElementSet::empty(space.topology.len()), |acc, x| {
                acc.union(&space.v[x.index()])
            });
        map.push(
            frame
                .id_of(&u)
                .ok_or_else(|| Error::property("ψ(I) is open", f.name(p)))?,
        );
    }
    let images: Vec<usize> = map.iter().map(|x| x.index()).collect();
    if !is_bijective(&images, t.len()) {
        return Err(Error::property(
            "ψ is a bijection",
            format!("{} closed ideals, {} opens", f.len(), t.len()),
        ));
    }
    let pair = |p: ElementId, q: ElementId| format!("({},{})", f.name(p), f.name(q));
    for p in f.elements() {
        for q in f.elements() {
            if map[f.mul(p, q).index()] != t.mul(map[p.index()], map[q.index()]) {
                return Err(Error::property("ψ preserves meets", pair(p, q)));
            }
            let pq = ElementSet::from_ids(f.len(), [p, q]);
            let join = universal.pseudogroup.join(&pq)?;
            let union = frame.open(map[p.index()]).union(frame.open(map[q.index()]));
            if frame.open(map[join.index()]) != &union {
                return Err(Error::property("ψ preserves joins", pair(p, q)));
            }
        }
    }
    if !frame
        .open(map[universal.pseudogroup.zero().index()])
        .is_empty()
    {
        return Err(Error::property("ψ preserves the empty join", "0"));
    }
    for x in e.elements() {
        if frame.open(map[universal.pi.apply(x).index()]) != &space.v[x.index()] {
            return Err(Error::property("ψ(π(e)) = V_e", e.name(x)));
        }
    }
    Ok(TightFrameIso {
        universal,
        space,
        frame,
        map,
    })
}

/// `filt(E)_C` for the coverage on the patch opens of `filt(E)` induced by
/// `e ↦ U_e` and the tight coverage. Expected to be `tfilt(E)`.
pub fn tight_filters_as_subspace(e: Arc<FiniteInverseSemigroup>) -> Result<FilterFamily> {
    let (all, points) = patch_subspace(e, false)?;
    let filters = all
        .filters
        .into_iter()
        .enumerate()
        .filter(|(i, _)| points.has(*i))
        .map(|(_, f)| f)
        .collect();
    Ok(FilterFamily {
        kind: FilterKind::Tight,
        filters,
    })
}

fn patch_subspace(
    e: Arc<FiniteInverseSemigroup>,
    both_routes: bool,
) -> Result<(FilterFamily, ElementSet)> {
    require_semilattice(&e)?;
    let all = enumerate_filters(&e);
    let carriers: Vec<ElementSet> = all.filters.iter().map(|f| f.carrier.clone()).collect();
    let labels = all
        .filters
        .iter()
        .map(|f| e.name(f.min).to_string())
        .collect();
    let x = patch_topology(&e, &carriers, &e.full_set(), labels)?;
    let frame = open_frame(&x, OPEN_SET_CAP)?;
    let mut images = Vec::with_capacity(e.len());
    for a in e.elements() {
        let u = ElementSet::from_indices(
            carriers.len(),
            (0..carriers.len()).filter(|&i| carriers[i].contains(a)),
        );
        images.push(
            frame
                .id_of(&u)
                .ok_or_else(|| Error::property("U_e is patch open", e.name(a)))?,
        );
    }
    let theta = SemigroupMap::new(e.clone(), frame.semigroup().clone(), images)?;
    let cov = induced_coverage(&theta, &tight_coverage(e.clone())?, &frame.pseudogroup)?;
    let points = if both_routes {
        let sub = subspace(&frame, &cov)?;
        if sub.route != SubspaceRoute::Lemma {
            return Err(Error::NotT1Sober);
        }
        sub.points
    } else {
        subspace_from_coverage(&frame, &cov)?
    };
    Ok((all, points))
}

/// The reduction of `G_u(S)` to the units whose idempotent part is tight.
#[derive(Debug, Clone)]
pub struct TightGroupoid {
    pub universal: FilterGroupoid,
    pub tight_units: ElementSet,
    /// Arrow of the reduction to arrow of `G_u(S)`.
    pub arrows: Vec<usize>,
    pub groupoid: FiniteGroupoid,
}

pub fn tight_groupoid(s: Arc<FiniteInverseSemigroup>) -> Result<TightGroupoid> {
    let tight = tight_filters(&s)?;
    let universal = filter_groupoid(s.clone(), TopologyKind::Patch, false)?;
    let e = s.idempotents();
    let tight_units = ElementSet::from_indices(
        universal.len(),
        universal.groupoid.units().indices().filter(|&u| {
            tight
                .filters
                .iter()
                .any(|f| f.carrier == universal.carrier(u).intersection(e))
        }),
    );
    let (groupoid, arrows) = universal.groupoid.reduce(&tight_units);
    Ok(TightGroupoid {
        universal,
        tight_units,
        arrows,
        groupoid,
    })
}

/// Runs every statement about tight filters on a semilattice with zero.
pub fn check_tight_lemmas(e: Arc<FiniteInverseSemigroup>) -> Result<()> {
    require_semilattice(&e)?;
    let cov = tight_coverage(e.clone())?;
    let tight = tight_filters(&e)?;
    let minima = |fam: &FilterFamily| {
        let mut m = fam.minima();
        m.sort();
        m
    };
    let fmt = |fam: &FilterFamily| {
        fam.filters
            .iter()
            .map(|f| e.name(f.min))
            .collect::<Vec<_>>()
            .join(",")
    };

    // The definition, covering by covering.
    let by_definition = enumerate_filters(&e)
        .filters
        .into_iter()
        .filter(|f| {
            f.carrier
                .iter()
                .all(|a| cov.covers(a).iter().all(|z| z.intersects(&f.carrier)))
        })
        .collect();
    let by_definition = FilterFamily {
        kind: FilterKind::Tight,
        filters: by_definition,
    };
    if minima(&by_definition) != minima(&tight) {
        return Err(Error::property(
            "tight filters meet every tight covering",
            fmt(&by_definition),
        ));
    }
    let by_closure = tight_filters_by_closure(&e)?;
    if minima(&by_closure) != minima(&tight) {
        return Err(Error::property(
            "tight filters are the patch closure of the ultrafilters",
            fmt(&by_closure),
        ));
    }
    let ultra = ultrafilters_in(&e, &e.full_set());
    if minima(&ultra) != minima(&tight) {
        return Err(Error::property(
            "finite tight filters are the ultrafilters",
            fmt(&ultra),
        ));
    }

    let space = tau_e(&e)?;
    for a in e.elements() {
        for z in cov.covers(a) {
            let union = z
                .iter()
                .fold(ElementSet::empty(space.topology.len()), |acc, x| {
                    acc.union(&space.v[x.index()])
                });
            if union != space.v[a.index()] {
                return Err(Error::property(
                    "V_e is the union of V_z over a tight covering",
                    format!("{} by {}", e.name(a), e.fmt_set(z)),
                ));
            }
        }
    }

    let cn = nucleus_from_coverage(&cov)?;
    for p in cn.nucleus.fixed_points().iter() {
        let ideal = cn.ideals.ideal(p);
        for x in e.elements().filter(|&x| !ideal.contains(x)) {
            if !tight
                .filters
                .iter()
                .any(|f| f.contains(x) && !f.carrier.intersects(ideal))
            {
                return Err(Error::property(
                    "a tight filter through e avoids a closed ideal missing e",
                    format!("{} outside {}", e.name(x), e.fmt_set(ideal)),
                ));
            }
        }
    }

    if !is_sober(&FiniteGroupoid::from_space(space.topology.clone()))? {
        return Err(Error::property("(tfilt(E), τ_E) is sober", fmt(&tight)));
    }

    tight_frame_iso(e.clone())?;

    let (all, points) = patch_subspace(e.clone(), true)?;
    let sub = FilterFamily {
        kind: FilterKind::Tight,
        filters: all
            .filters
            .into_iter()
            .enumerate()
            .filter(|(i, _)| points.has(*i))
            .map(|(_, f)| f)
            .collect(),
    };
    if minima(&sub) != minima(&tight) {
        return Err(Error::property("tfilt(E) = filt(E)_C", fmt(&sub)));
    }
    Ok(())
}

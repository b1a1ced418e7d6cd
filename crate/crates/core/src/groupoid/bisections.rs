use std::collections::HashMap;
use std::sync::Arc;

use super::filters::{cp_filter_groupoid, FilterGroupoid};
use super::{is_homeomorphism, FiniteGroupoid, FiniteTopology};
use crate::algebra::{
    validate, ElementId, ElementSet, FiniteInverseSemigroup, SemigroupTable, ValidateOptions,
};
use crate::error::{Error, Result};
use crate::filters::{completely_prime_filters, FilterFamily, PrincipalFilter};
use crate::pseudogroup::Pseudogroup;

/// Cap on the number of open bisections enumerated.
pub const BISECTION_CAP: usize = 1 << 14;

/// Sorted sets, their positions, and the semigroup they form.
type SetSemigroup = (
    Vec<ElementSet>,
    HashMap<ElementSet, usize>,
    Arc<FiniteInverseSemigroup>,
);

/// A family of subsets of a finite set closed under a setwise product,
/// packaged as an inverse semigroup. Sets are sorted by size, then contents.
fn set_semigroup(
    sets: Vec<ElementSet>,
    names: impl Fn(&ElementSet) -> String,
    product: impl Fn(&ElementSet, &ElementSet) -> ElementSet,
    identity: &ElementSet,
) -> Result<SetSemigroup> {
    let mut sets = sets;
    sets.sort_by_key(|u| (u.len(), u.clone()));
    let index: HashMap<ElementSet, usize> = sets
        .iter()
        .enumerate()
        .map(|(i, u)| (u.clone(), i))
        .collect();
    let mut mul = Vec::with_capacity(sets.len());
    for a in &sets {
        let mut row = Vec::with_capacity(sets.len());
        for b in &sets {
            let ab = product(a, b);
            let k = index
                .get(&ab)
                .ok_or_else(|| Error::property("closed under products", names(&ab)))?;
            row.push(*k);
        }
        mul.push(row);
    }
    let table = SemigroupTable {
        names: sets.iter().map(&names).collect(),
        mul,
        zero: index.get(&ElementSet::empty(identity.universe())).copied(),
        identity: index.get(identity).copied(),
    };
    let opts = ValidateOptions {
        check_associativity: sets.len() <= 64,
        size_cap: usize::MAX,
    };
    Ok((sets, index, Arc::new(validate(table, &opts)?)))
}

fn fmt_labels(labels: &[String], u: &ElementSet) -> String {
    let parts: Vec<&str> = u.indices().map(|i| labels[i].as_str()).collect();
    format!("{{{}}}", parts.join(","))
}

/// `Bis(G)`: the open bisections of an étale groupoid under setwise product.
#[derive(Debug, Clone)]
pub struct Bisections {
    sets: Vec<ElementSet>,
    index: HashMap<ElementSet, usize>,
    pub pseudogroup: Pseudogroup,
}

impl Bisections {
    pub fn semigroup(&self) -> &Arc<FiniteInverseSemigroup> {
        self.pseudogroup.arc()
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn set(&self, b: ElementId) -> &ElementSet {
        &self.sets[b.index()]
    }

    pub fn sets(&self) -> &[ElementSet] {
        &self.sets
    }

    pub fn id_of(&self, set: &ElementSet) -> Option<ElementId> {
        self.index.get(set).map(|&i| ElementId::new(i))
    }
}

/// Enumerates open bisections: an arrow is either excluded for good or
/// brought in with its whole minimal neighbourhood, so every set reached is
/// open, and `d`, `r` are kept injective along the way.
fn open_bisections(g: &FiniteGroupoid, cap: usize) -> Result<Vec<ElementSet>> {
    let n = g.len();
    let mut out = Vec::new();

    struct State {
        chosen: ElementSet,
        excluded: ElementSet,
        ds: ElementSet,
        rs: ElementSet,
    }

    fn go(
        a: usize,
        g: &FiniteGroupoid,
        st: &mut State,
        out: &mut Vec<ElementSet>,
        cap: usize,
    ) -> Result<()> {
        if a == g.len() {
            out.push(st.chosen.clone());
            if out.len() > cap {
                return Err(Error::size("open bisections", out.len(), cap));
            }
            return Ok(());
        }
        if st.chosen.has(a) {
            return go(a + 1, g, st, out, cap);
        }
        st.excluded.add(a);
        go(a + 1, g, st, out, cap)?;
        st.excluded = st
            .excluded
            .difference(&ElementSet::from_indices(g.len(), [a]));

        let extra = g.topology().neighbourhood(a).difference(&st.chosen);
        if extra.intersects(&st.excluded) {
            return Ok(());
        }
        let ds = ElementSet::from_indices(g.len(), extra.indices().map(|h| g.d(h)));
        let rs = ElementSet::from_indices(g.len(), extra.indices().map(|h| g.r(h)));
        if ds.len() != extra.len()
            || rs.len() != extra.len()
            || ds.intersects(&st.ds)
            || rs.intersects(&st.rs)
        {
            return Ok(());
        }
        let saved = (st.chosen.clone(), st.ds.clone(), st.rs.clone());
        st.chosen.union_with(&extra);
        st.ds.union_with(&ds);
        st.rs.union_with(&rs);
        go(a + 1, g, st, out, cap)?;
        (st.chosen, st.ds, st.rs) = saved;
        Ok(())
    }

    let mut st = State {
        chosen: ElementSet::empty(n),
        excluded: ElementSet::empty(n),
        ds: ElementSet::empty(n),
        rs: ElementSet::empty(n),
    };
    go(0, g, &mut st, &mut out, cap)?;
    Ok(out)
}

pub fn bisections(g: &FiniteGroupoid) -> Result<Bisections> {
    g.check_etale()?;
    let sets = open_bisections(g, BISECTION_CAP)?;
    let n = g.len();
    let product = |a: &ElementSet, b: &ElementSet| {
        ElementSet::from_indices(
            n,
            a.indices()
                .flat_map(|x| b.indices().filter_map(move |y| g.compose(x, y))),
        )
    };
    let (sets, index, semigroup) =
        set_semigroup(sets, |u| fmt_labels(g.labels(), u), product, g.units())?;
    let pseudogroup = Pseudogroup::new(semigroup)?;
    Ok(Bisections {
        sets,
        index,
        pseudogroup,
    })
}

/// `η(g) = {A ∈ Bis(G) | g ∈ A}`, a completely prime filter whose minimum is
/// the minimal neighbourhood of g.
pub fn eta(g: &FiniteGroupoid, bis: &Bisections) -> Result<Vec<PrincipalFilter>> {
    let s = bis.semigroup();
    g.arrows()
        .map(|a| {
            let carrier =
                ElementSet::from_ids(s.len(), s.elements().filter(|&b| bis.set(b).has(a)));
            PrincipalFilter::from_carrier(s, carrier)
                .ok_or_else(|| Error::property("eta(g) is a principal filter", g.label(a)))
        })
        .collect()
}

/// Whether `η: G → G(Bis(G))` is an isomorphism of topological groupoids.
pub fn is_sober(g: &FiniteGroupoid) -> Result<bool> {
    let bis = bisections(g)?;
    let points: FilterGroupoid = cp_filter_groupoid(&bis.pseudogroup)?;
    let mut map = Vec::with_capacity(g.len());
    for f in eta(g, &bis)? {
        match points.index_of(&f.carrier) {
            Some(i) => map.push(i),
            None => return Ok(false),
        }
    }
    let h = &points.groupoid;
    if !is_homeomorphism(&map, g.topology(), h.topology()) {
        return Ok(false);
    }
    let functor = g.arrows().all(|x| {
        g.arrows()
            .all(|y| g.compose(x, y).map(|z| map[z]) == h.compose(map[x], map[y]))
    });
    Ok(functor)
}

/// `Sp F`: completely prime filters of a finite frame with the opens
/// `V_a = {ξ | a ∈ ξ}`.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub points: FilterFamily,
    pub topology: FiniteTopology,
}

pub fn spectrum(frame: &Pseudogroup) -> Result<Spectrum> {
    frame.check_frame()?;
    let s = frame.semigroup();
    let points = completely_prime_filters(frame);
    let labels = points
        .filters
        .iter()
        .map(|f| s.name(f.min).to_string())
        .collect();
    let basis = s
        .elements()
        .map(|a| {
            ElementSet::from_indices(
                points.len(),
                (0..points.len()).filter(|&i| points.filters[i].contains(a)),
            )
        })
        .collect();
    let topology = FiniteTopology::new(labels, basis)?;
    Ok(Spectrum { points, topology })
}

/// The frame of open sets of a finite space, with meet as product.
#[derive(Debug, Clone)]
pub struct OpenFrame {
    pub topology: FiniteTopology,
    opens: Vec<ElementSet>,
    index: HashMap<ElementSet, usize>,
    pub pseudogroup: Pseudogroup,
}

impl OpenFrame {
    pub fn semigroup(&self) -> &Arc<FiniteInverseSemigroup> {
        self.pseudogroup.arc()
    }

    pub fn open(&self, u: ElementId) -> &ElementSet {
        &self.opens[u.index()]
    }

    pub fn opens(&self) -> &[ElementSet] {
        &self.opens
    }

    pub fn id_of(&self, u: &ElementSet) -> Option<ElementId> {
        self.index.get(u).map(|&i| ElementId::new(i))
    }
}

pub fn open_frame(topology: &FiniteTopology, cap: usize) -> Result<OpenFrame> {
    let opens = topology.opens(cap)?;
    let labels = topology.labels().to_vec();
    let (opens, index, semigroup) = set_semigroup(
        opens,
        |u| fmt_labels(&labels, u),
        |a, b| a.intersection(b),
        &topology.full(),
    )?;
    let pseudogroup = Pseudogroup::new(semigroup)?;
    Ok(OpenFrame {
        topology: topology.clone(),
        opens,
        index,
        pseudogroup,
    })
}

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use super::{FiniteGroupoid, FiniteTopology};
use crate::algebra::{subsets_of, ElementId, ElementSet, FiniteInverseSemigroup};
use crate::error::{Error, Result};
use crate::filters::{completely_prime_filters, enumerate_filters};
use crate::pseudogroup::Pseudogroup;

/// Largest number of maximal elements below a point for the patch basis.
const PATCH_BITS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TopologyKind {
    /// Generated by `U_s = {A | s ∈ A}`.
    TauS,
    /// Generated by `U_s ∩ U_{s₁}ᶜ ∩ ⋯ ∩ U_{sₙ}ᶜ` with every `sᵢ ≤ s`.
    Patch,
}

impl fmt::Display for TopologyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TopologyKind::TauS => "tau-s",
            TopologyKind::Patch => "patch",
        })
    }
}

impl FromStr for TopologyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tau-s" | "tau_s" => Ok(TopologyKind::TauS),
            "patch" => Ok(TopologyKind::Patch),
            other => Err(Error::UnknownName(other.into())),
        }
    }
}

/// A groupoid whose arrows are filters of a semigroup, with `A*B = ↑(AB)`,
/// `d(A) = ↑(A⁻¹A)` and `r(A) = ↑(AA⁻¹)`.
#[derive(Debug, Clone)]
pub struct FilterGroupoid {
    semigroup: Arc<FiniteInverseSemigroup>,
    carriers: Vec<ElementSet>,
    index: HashMap<ElementSet, usize>,
    kind: TopologyKind,
    pub groupoid: FiniteGroupoid,
}

impl FilterGroupoid {
    fn build(
        s: Arc<FiniteInverseSemigroup>,
        carriers: Vec<ElementSet>,
        kind: TopologyKind,
    ) -> Result<Self> {
        let index: HashMap<ElementSet, usize> = carriers
            .iter()
            .enumerate()
            .map(|(i, c)| (c.clone(), i))
            .collect();
        let labels: Vec<String> = carriers.iter().map(|c| filter_label(&s, c)).collect();
        let n = carriers.len();
        let find = |set: ElementSet, what: &str, i: usize| {
            index
                .get(&set)
                .copied()
                .ok_or_else(|| Error::GroupoidAxiom {
                    axiom: format!("filters closed under {what}"),
                    witness: labels[i].clone(),
                })
        };
        let mut inv = Vec::with_capacity(n);
        let mut d = Vec::with_capacity(n);
        let mut r = Vec::with_capacity(n);
        for (i, a) in carriers.iter().enumerate() {
            let ai = s.inverse_set(a);
            d.push(find(s.up_set(&s.product(&ai, a)), "d", i)?);
            r.push(find(s.up_set(&s.product(a, &ai)), "r", i)?);
            inv.push(find(ai, "inverse", i)?);
        }
        let mut mul = vec![None; n * n];
        for f in 0..n {
            for g in (0..n).filter(|&g| d[f] == r[g]) {
                mul[f * n + g] = Some(find(
                    s.up_set(&s.product(&carriers[f], &carriers[g])),
                    "product",
                    f,
                )?);
            }
        }
        let universe = s.full_set();
        let basis = match kind {
            TopologyKind::TauS => tau_basis(&carriers, &universe),
            TopologyKind::Patch => patch_basis(&s, &carriers, &universe)?,
        };
        let topology = FiniteTopology::new(labels.clone(), basis)?;
        let groupoid = FiniteGroupoid::new(labels, d, r, inv, mul, topology)?;
        Ok(FilterGroupoid {
            semigroup: s,
            carriers,
            index,
            kind,
            groupoid,
        })
    }

    pub fn semigroup(&self) -> &Arc<FiniteInverseSemigroup> {
        &self.semigroup
    }

    pub fn kind(&self) -> TopologyKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.carriers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.carriers.is_empty()
    }

    pub fn carriers(&self) -> &[ElementSet] {
        &self.carriers
    }

    pub fn carrier(&self, arrow: usize) -> &ElementSet {
        &self.carriers[arrow]
    }

    pub fn index_of(&self, carrier: &ElementSet) -> Option<usize> {
        self.index.get(carrier).copied()
    }

    pub fn minimum(&self, arrow: usize) -> Option<ElementId> {
        self.semigroup.minimum(&self.carriers[arrow])
    }

    /// Arrows containing `s`.
    pub fn u(&self, s: ElementId) -> ElementSet {
        ElementSet::from_indices(
            self.len(),
            (0..self.len()).filter(|&i| self.carriers[i].contains(s)),
        )
    }
}

fn filter_label(s: &FiniteInverseSemigroup, carrier: &ElementSet) -> String {
    match s.minimum(carrier) {
        Some(m) => s.name(m).to_string(),
        None => "S".to_string(),
    }
}

fn tau_basis(carriers: &[ElementSet], universe: &ElementSet) -> Vec<ElementSet> {
    universe
        .iter()
        .map(|x| {
            ElementSet::from_indices(
                carriers.len(),
                (0..carriers.len()).filter(|&i| carriers[i].contains(x)),
            )
        })
        .collect()
}

/// `U_s` minus any union of `U_m` for `m` maximal strictly below `s`.
fn patch_basis(
    s: &FiniteInverseSemigroup,
    carriers: &[ElementSet],
    universe: &ElementSet,
) -> Result<Vec<ElementSet>> {
    let n = carriers.len();
    let u = |x: ElementId| ElementSet::from_indices(n, (0..n).filter(|&i| carriers[i].contains(x)));
    let mut out = Vec::new();
    for x in universe.iter() {
        let mut below = s.down(x).intersection(universe);
        below.remove(x);
        let maximal = s.maximal_elements(&below);
        let picks = subsets_of(&maximal, PATCH_BITS).ok_or_else(|| {
            Error::size(
                "patch basis: maximal elements below a point",
                maximal.len(),
                PATCH_BITS,
            )
        })?;
        let ux = u(x);
        for pick in picks {
            out.push(pick.iter().fold(ux.clone(), |acc, m| acc.difference(&u(m))));
        }
    }
    Ok(out)
}

/// For each point `A`, the sets `U_s \ ⋃{U_t | t ≤ s, t ∉ A}` with `s ∈ A`.
/// These are patch-basic and include the smallest basic set around `A`, so
/// they generate the full patch topology.
fn patch_basis_full(
    carriers: &[ElementSet],
    s: &FiniteInverseSemigroup,
    universe: &ElementSet,
) -> Vec<ElementSet> {
    let n = carriers.len();
    let u = |x: ElementId| ElementSet::from_indices(n, (0..n).filter(|&i| carriers[i].contains(x)));
    let mut out = Vec::new();
    for a in carriers {
        for x in a.iter() {
            let outside = s.down(x).intersection(universe).difference(a);
            out.push(outside.iter().fold(u(x), |acc, t| acc.difference(&u(t))));
        }
    }
    out
}

/// The patch topology on a family of filters of the subposet `universe`.
pub fn patch_topology(
    s: &FiniteInverseSemigroup,
    carriers: &[ElementSet],
    universe: &ElementSet,
    labels: Vec<String>,
) -> Result<FiniteTopology> {
    FiniteTopology::new(labels, patch_basis(s, carriers, universe)?)
}

/// The reduced patch basis generates the same topology as the full one.
pub fn check_patch_adequacy(fg: &FilterGroupoid) -> Result<()> {
    let s = fg.semigroup();
    let universe = s.full_set();
    let full = FiniteTopology::new(
        fg.groupoid.labels().to_vec(),
        patch_basis_full(&fg.carriers, s, &universe),
    )?;
    let reduced = patch_topology(s, &fg.carriers, &universe, fg.groupoid.labels().to_vec())?;
    match (0..full.len()).find(|&x| full.neighbourhood(x) != reduced.neighbourhood(x)) {
        Some(x) => Err(Error::property(
            "reduced patch basis is adequate",
            full.label(x),
        )),
        None => Ok(()),
    }
}

/// `↑s * ↑t = ↑(st)` on every composable pair of principal filters.
pub fn check_principal_products(fg: &FilterGroupoid) -> Result<()> {
    let s = fg.semigroup();
    let g = &fg.groupoid;
    for (f, h) in g.composable_pairs() {
        let (Some(a), Some(b)) = (fg.minimum(f), fg.minimum(h)) else {
            continue;
        };
        let product = g.compose(f, h).expect("composable");
        if fg.carrier(product) != s.up(s.mul(a, b)) {
            return Err(Error::property(
                "principal product law",
                format!("↑{} * ↑{}", s.name(a), s.name(b)),
            ));
        }
    }
    Ok(())
}

/// `L(S)` with the requested topology; with `kind = Patch` this is `G_u(S)`.
///
/// Without a zero the improper filter S is only admitted on request.
pub fn filter_groupoid(
    s: Arc<FiniteInverseSemigroup>,
    kind: TopologyKind,
    adjoin_improper: bool,
) -> Result<FilterGroupoid> {
    if s.zero().is_none() && !adjoin_improper {
        return Err(Error::NoZero);
    }
    let mut carriers: Vec<ElementSet> = enumerate_filters(&s)
        .filters
        .into_iter()
        .map(|f| f.carrier)
        .collect();
    if adjoin_improper {
        carriers.push(s.full_set());
    }
    FilterGroupoid::build(s, carriers, kind)
}

/// `G(P)`: completely prime filters of a pseudogroup, topologised by `U_a`.
pub fn cp_filter_groupoid(p: &Pseudogroup) -> Result<FilterGroupoid> {
    let carriers = completely_prime_filters(p)
        .filters
        .into_iter()
        .map(|f| f.carrier)
        .collect();
    FilterGroupoid::build(p.arc().clone(), carriers, TopologyKind::TauS)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{e4, i2, make_fixture, Fixture};

    #[test]
    fn l_of_i2() {
        let s = Arc::new(i2());
        let fg = filter_groupoid(s.clone(), TopologyKind::Patch, false).unwrap();
        let g = &fg.groupoid;
        assert_eq!(g.len(), 6);
        let units: Vec<&str> = g.units().indices().map(|u| g.label(u)).collect();
        assert_eq!(units.len(), 3);
        for name in ["e1", "e2", "id"] {
            assert!(units.contains(&name), "{name}");
        }
        // Units are exactly the filters meeting E(S).
        for a in g.arrows() {
            assert_eq!(g.units().has(a), fg.carrier(a).intersects(s.idempotents()));
        }
        let at = |n: &str| fg.index_of(s.up(s.id(n).unwrap())).unwrap();
        // t12 sends 1 to 2: domain e1, range e2.
        assert_eq!(g.d(at("t12")), at("e1"));
        assert_eq!(g.r(at("t12")), at("e2"));
        assert_eq!(g.compose(at("t12"), at("t21")), Some(at("e2")));
        assert_eq!(g.compose(at("t21"), at("t12")), Some(at("e1")));
        g.check_etale().unwrap();
        check_principal_products(&fg).unwrap();
        check_patch_adequacy(&fg).unwrap();
    }

    #[test]
    fn e4_is_all_units_and_patch_discrete() {
        let fg = filter_groupoid(Arc::new(e4()), TopologyKind::Patch, false).unwrap();
        assert_eq!(fg.len(), 3);
        assert_eq!(fg.groupoid.units().len(), 3);
        assert_eq!(fg.groupoid.composable_pairs().count(), 3);
        assert!(fg.groupoid.topology().is_t1());
        let tau = filter_groupoid(Arc::new(e4()), TopologyKind::TauS, false).unwrap();
        assert!(!tau.groupoid.topology().is_t1());
    }

    #[test]
    fn fixtures_give_etale_groupoids() {
        for f in [
            Fixture::SymmetricInverse(2),
            Fixture::SymmetricInverse(3),
            Fixture::PowersetSemilattice(3),
            Fixture::ChainSemilattice(4),
        ] {
            let s = Arc::new(make_fixture(f).unwrap());
            for kind in [TopologyKind::TauS, TopologyKind::Patch] {
                let fg = filter_groupoid(s.clone(), kind, false).unwrap();
                fg.groupoid
                    .check_etale()
                    .unwrap_or_else(|e| panic!("{f} {kind}: {e}"));
                check_principal_products(&fg).unwrap();
            }
            check_patch_adequacy(&filter_groupoid(s, TopologyKind::Patch, false).unwrap()).unwrap();
        }
    }

    #[test]
    fn improper_filter_needs_the_flag() {
        let z2 = Arc::new(make_fixture(Fixture::CyclicGroup(2)).unwrap());
        assert_eq!(
            filter_groupoid(z2.clone(), TopologyKind::Patch, false).unwrap_err(),
            Error::NoZero
        );
        let fg = filter_groupoid(z2, TopologyKind::Patch, true).unwrap();
        assert_eq!(fg.len(), 3);
        assert_eq!(fg.groupoid.label(2), "S");
        assert!(fg.groupoid.units().has(2));
    }

    #[test]
    fn cp_groupoid_of_a_frame() {
        let s = Arc::new(e4());
        let p = Pseudogroup::new(s).unwrap();
        let fg = cp_filter_groupoid(&p).unwrap();
        assert_eq!(fg.len(), 2);
        assert!(fg.groupoid.topology().is_t1());
    }
}

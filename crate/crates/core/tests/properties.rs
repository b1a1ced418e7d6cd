use std::collections::BTreeSet;
use std::sync::Arc;

use isg_core::algebra::{make_fixture, ElementId, ElementSet, Fixture};
use isg_core::coverage::{check_axioms, close_coverage, Coverage};
use isg_core::groupoid::{
    filter_groupoid, nucleus_embedding, nucleus_on_pseudogroup, FiniteTopology, TopologyKind,
};
use isg_core::pseudogroup::{close_ideal, Pseudogroup};
use isg_core::FiniteInverseSemigroup as Fis;
use proptest::prelude::*;

const FIXTURES: [Fixture; 5] = [
    Fixture::SymmetricInverse(2),
    Fixture::PowersetSemilattice(2),
    Fixture::PowersetSemilattice(3),
    Fixture::ChainSemilattice(4),
    Fixture::ChainSemilattice(6),
];

fn fixture(i: usize) -> Arc<Fis> {
    Arc::new(make_fixture(FIXTURES[i % FIXTURES.len()]).unwrap())
}

fn pick(s: &Fis, i: usize) -> ElementId {
    ElementId::new(i % s.len())
}

/// The members of `within` selected by the bits of `mask`.
fn masked(within: &ElementSet, mask: u64) -> ElementSet {
    let mut out = ElementSet::empty(within.universe());
    for (bit, x) in within.iter().enumerate() {
        if mask >> (bit % 64) & 1 == 1 {
            out.insert(x);
        }
    }
    out
}

/// A coverage closed up from random seeds `(a, X ⊆ ↓a)`.
fn seeded(s: &Arc<Fis>, seeds: &[(usize, u64)]) -> Coverage {
    let pairs = seeds.iter().map(|&(a, mask)| {
        let a = pick(s, a);
        (a, masked(s.down(a), mask))
    });
    close_coverage(s.clone(), pairs).unwrap()
}

fn down_set(s: &Fis, mask: u64) -> ElementSet {
    s.down_set(&masked(&s.full_set(), mask))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn closed_seeds_give_coverages(f in 0usize..5, seeds in prop::collection::vec((0usize..64, any::<u64>()), 0..4)) {
        let s = fixture(f);
        let cov = seeded(&s, &seeds);
        let report = check_axioms(&cov).unwrap();
        prop_assert!(report.holds("coverage"), "{:?}", report.failures);
    }

    #[test]
    fn closure_is_a_closure_operator(
        f in 0usize..5,
        seeds in prop::collection::vec((0usize..64, any::<u64>()), 0..4),
        m1 in any::<u64>(),
        m2 in any::<u64>(),
    ) {
        let s = fixture(f);
        let cov = seeded(&s, &seeds);
        let (i, j) = (down_set(&s, m1), down_set(&s, m2));
        let ci = close_ideal(&cov, &i);
        prop_assert!(i.is_subset(&ci));
        prop_assert_eq!(close_ideal(&cov, &ci), ci.clone());
        prop_assert!(s.is_down_closed(&ci));
        prop_assert!(cov.is_closed_set(&ci));
        let ij = i.union(&j);
        prop_assert!(ci.is_subset(&close_ideal(&cov, &ij)));
    }

    #[test]
    fn coverage_nuclei_embed(f in 0usize..5, seeds in prop::collection::vec((0usize..64, any::<u64>()), 0..3)) {
        let s = fixture(f);
        let p = Pseudogroup::new(s.clone()).unwrap();
        let cov = seeded(&s, &seeds);
        // Random covers may force incompatible elements together.
        let nu = match nucleus_on_pseudogroup(&p, &cov) {
            Err(isg_core::Error::CompatibilityLost { .. }) => return Ok(()),
            other => other.unwrap(),
        };
        nu.check_axioms().unwrap();
        let emb = nucleus_embedding(&p, &nu).unwrap();
        prop_assert!(emb.report.is_ok(), "{:?}", emb.report.failures);
    }

    #[test]
    fn reductions_are_groupoids(f in 0usize..5, mask in any::<u64>(), patch in any::<bool>()) {
        let s = fixture(f);
        let kind = if patch { TopologyKind::Patch } else { TopologyKind::TauS };
        let g = filter_groupoid(s, kind, false).unwrap().groupoid;
        let units = masked(g.units(), mask);
        let (h, arrows) = g.reduce(&units);
        h.check_axioms().unwrap();
        // An arbitrary set of units need not be open under τ_S, and the
        // reduction then need not be étale. The patch topology is discrete.
        if patch {
            prop_assert!(h.is_etale());
        }
        let expected = g.arrows().filter(|&x| units.has(g.d(x)) && units.has(g.r(x))).count();
        prop_assert_eq!(h.len(), expected);
        for (y, &x) in arrows.iter().enumerate() {
            prop_assert_eq!(h.label(y), g.label(x));
        }
    }

    #[test]
    fn principal_products(a in 0usize..64, b in 0usize..64) {
        let s = Arc::new(make_fixture(Fixture::SymmetricInverse(3)).unwrap());
        let (a, b) = (pick(&s, a), pick(&s, b));
        // ↑(↑a·↑b) from the setwise product.
        let prod = s.product(s.up(a), s.up(b));
        prop_assert_eq!(s.up_set(&prod), s.up(s.mul(a, b)).clone());
    }

    #[test]
    fn element_sets_match_a_model(xs in prop::collection::btree_set(0usize..40, 0..20), ys in prop::collection::btree_set(0usize..40, 0..20)) {
        let a = ElementSet::from_indices(40, xs.iter().copied());
        let b = ElementSet::from_indices(40, ys.iter().copied());
        let set = |e: &ElementSet| e.indices().collect::<BTreeSet<_>>();
        prop_assert_eq!(set(&a.union(&b)), xs.union(&ys).copied().collect::<BTreeSet<_>>());
        prop_assert_eq!(set(&a.intersection(&b)), xs.intersection(&ys).copied().collect::<BTreeSet<_>>());
        prop_assert_eq!(set(&a.difference(&b)), xs.difference(&ys).copied().collect::<BTreeSet<_>>());
        prop_assert_eq!(a.is_subset(&b), xs.is_subset(&ys));
        prop_assert_eq!(a.len(), xs.len());
    }

    #[test]
    fn topologies_are_closed_under_union_and_meet(n in 1usize..7, basis in prop::collection::vec(any::<u64>(), 0..5)) {
        let labels: Vec<String> = (0..n).map(|i| format!("p{i}")).collect();
        let basis: Vec<ElementSet> = basis
            .iter()
            .map(|&m| masked(&ElementSet::full(n), m))
            .collect();
        let t = FiniteTopology::new(labels, basis.clone()).unwrap();
        let opens = t.opens(1 << 10).unwrap();
        for b in &basis {
            prop_assert!(t.is_open(b));
        }
        for u in &opens {
            prop_assert_eq!(&t.interior(u), u);
            let closed = t.full().difference(u);
            prop_assert_eq!(t.closure(&closed), closed);
            for v in &opens {
                prop_assert!(t.is_open(&u.union(v)));
                prop_assert!(t.is_open(&u.intersection(v)));
            }
        }
    }
}

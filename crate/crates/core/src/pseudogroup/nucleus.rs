use std::sync::Arc;

use super::{check_pseudogroup, IdealSemigroup};
use crate::algebra::{
    validate, ElementId, ElementSet, FiniteInverseSemigroup, SemigroupMap, SemigroupTable,
    ValidateOptions,
};
use crate::coverage::Coverage;
use crate::error::{Error, Result};

/// A nucleus on a finite inverse semigroup: inflationary, monotone,
/// idempotent, and `ν(a)ν(b) ≤ ν(ab)`.
#[derive(Debug, Clone)]
pub struct Nucleus {
    base: Arc<FiniteInverseSemigroup>,
    map: Vec<ElementId>,
}

impl Nucleus {
    pub fn new(base: Arc<FiniteInverseSemigroup>, map: Vec<ElementId>) -> Result<Self> {
        let nu = Self::new_unchecked(base, map)?;
        nu.check_axioms()?;
        Ok(nu)
    }

    /// Only checks that the map has the right shape.
    pub fn new_unchecked(base: Arc<FiniteInverseSemigroup>, map: Vec<ElementId>) -> Result<Self> {
        if map.len() != base.len() || map.iter().any(|x| x.index() >= base.len()) {
            return Err(Error::PreconditionFailed(
                "nucleus map does not match the semigroup".into(),
            ));
        }
        Ok(Nucleus { base, map })
    }

    pub fn identity(base: Arc<FiniteInverseSemigroup>) -> Self {
        let map = base.elements().collect();
        Nucleus { base, map }
    }

    pub fn base(&self) -> &Arc<FiniteInverseSemigroup> {
        &self.base
    }

    pub fn apply(&self, x: ElementId) -> ElementId {
        self.map[x.index()]
    }

    pub fn map(&self) -> &[ElementId] {
        &self.map
    }

    pub fn check_axioms(&self) -> Result<()> {
        let s = &self.base;
        let fails = |axiom: &str, witness: String| Error::NucleusAxiomFails {
            axiom: axiom.into(),
            witness,
        };
        for a in s.elements() {
            if !s.leq(a, self.apply(a)) {
                return Err(fails("N1", s.name(a).to_string()));
            }
            if self.apply(self.apply(a)) != self.apply(a) {
                return Err(fails("N3", s.name(a).to_string()));
            }
        }
        for a in s.elements() {
            for b in s.elements() {
                if s.leq(a, b) && !s.leq(self.apply(a), self.apply(b)) {
                    return Err(fails("N2", format!("{} <= {}", s.name(a), s.name(b))));
                }
                if !s.leq(s.mul(self.apply(a), self.apply(b)), self.apply(s.mul(a, b))) {
                    return Err(fails("N4", format!("a={}, b={}", s.name(a), s.name(b))));
                }
            }
        }
        Ok(())
    }

    pub fn fixed_points(&self) -> ElementSet {
        ElementSet::from_ids(
            self.base.len(),
            self.base.elements().filter(|&a| self.apply(a) == a),
        )
    }

    /// `ν⁻¹(A)` for a set `A` of base elements.
    pub fn preimage(&self, a: &ElementSet) -> ElementSet {
        ElementSet::from_ids(
            self.base.len(),
            self.base.elements().filter(|&x| a.contains(self.apply(x))),
        )
    }

    /// The fixed points with product `a·b = ν(ab)`.
    pub fn quotient(&self) -> Result<Quotient> {
        let s = &self.base;
        let embed: Vec<ElementId> = self.fixed_points().iter().collect();
        let mut local = vec![None; s.len()];
        for (i, &x) in embed.iter().enumerate() {
            local[x.index()] = Some(ElementId::new(i));
        }
        let project: Vec<ElementId> = s
            .elements()
            .map(|x| local[self.apply(x).index()].expect("images are fixed points"))
            .collect();
        let table = SemigroupTable {
            names: embed.iter().map(|&x| s.name(x).to_string()).collect(),
            mul: embed
                .iter()
                .map(|&a| {
                    embed
                        .iter()
                        .map(|&b| project[s.mul(a, b).index()].index())
                        .collect()
                })
                .collect(),
            zero: None,
            identity: None,
        };
        let opts = ValidateOptions {
            check_associativity: embed.len() <= 64,
            size_cap: usize::MAX,
        };
        let semigroup = Arc::new(validate(table, &opts)?);
        Ok(Quotient {
            base: s.clone(),
            semigroup,
            embed,
            project,
        })
    }
}

/// `S_ν` together with the maps relating it to S.
#[derive(Debug, Clone)]
pub struct Quotient {
    base: Arc<FiniteInverseSemigroup>,
    pub semigroup: Arc<FiniteInverseSemigroup>,
    /// Element of `S_ν` to the same element of S.
    pub embed: Vec<ElementId>,
    /// `a ↦ ν(a)`, as an element of `S_ν`.
    pub project: Vec<ElementId>,
}

impl Quotient {
    /// The semigroup the nucleus acts on.
    pub fn base(&self) -> &Arc<FiniteInverseSemigroup> {
        &self.base
    }

    pub fn projection(&self) -> SemigroupMap {
        SemigroupMap::new(
            self.base.clone(),
            self.semigroup.clone(),
            self.project.clone(),
        )
        .expect("sizes match")
    }

    pub fn embed_set(&self, a: &ElementSet) -> ElementSet {
        ElementSet::from_ids(self.base.len(), a.iter().map(|x| self.embed[x.index()]))
    }

    /// The structural facts about `S → S_ν`: a surjective, idempotent-pure
    /// homomorphism, the order of `S_ν` is that of S, and on a pseudogroup the
    /// quotient is a pseudogroup and the map preserves joins.
    pub fn check(&self) -> Result<()> {
        let q = self.projection();
        q.check_homomorphism()?;
        if !q.is_surjective() {
            return Err(Error::property(
                "quotient map surjective",
                "image misses a fixed point",
            ));
        }
        if let Some(x) = q.idempotent_purity_witness() {
            return Err(Error::property(
                "quotient map idempotent-pure",
                self.base.name(x),
            ));
        }
        let t = &self.semigroup;
        for x in t.elements() {
            for y in t.elements() {
                if t.leq(x, y) != self.base.leq(self.embed[x.index()], self.embed[y.index()]) {
                    return Err(Error::property(
                        "quotient order",
                        format!("{} vs {}", t.name(x), t.name(y)),
                    ));
                }
            }
        }
        if check_pseudogroup(&self.base).is_ok() {
            check_pseudogroup(t)?;
            let s = &self.base;
            for a in s.elements() {
                for b in s.elements() {
                    if let Some(j) = s.join2(a, b).filter(|_| s.compatible(a, b)) {
                        if t.join2(q.apply(a), q.apply(b)) != Some(q.apply(j)) {
                            return Err(Error::property(
                                "quotient map preserves joins",
                                format!("{} ∨ {}", s.name(a), s.name(b)),
                            ));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// The least down-closed set containing `set` (and the zero) that is closed
/// for the coverage. The result need not be compatible.
pub fn close_ideal(cov: &Coverage, set: &ElementSet) -> ElementSet {
    let s = cov.base();
    let mut cur = s.down_set(set);
    if let Some(z) = s.zero() {
        cur.insert(z);
    }
    loop {
        let mut added = false;
        for a in s.elements() {
            if !cur.contains(a) && cov.forces(a, &cur) {
                cur.union_with(s.down(a));
                added = true;
            }
        }
        if !added {
            return cur;
        }
    }
}

/// The nucleus on C(S) sending an ideal to the least closed compatible ideal
/// containing it.
#[derive(Debug, Clone)]
pub struct CoverageNucleus {
    pub ideals: IdealSemigroup,
    pub nucleus: Nucleus,
}

impl CoverageNucleus {
    /// `π(a) = ν(↓a)` as an element of C(S).
    pub fn pi(&self, a: ElementId) -> ElementId {
        self.nucleus.apply(self.ideals.principal(a))
    }
}

pub fn nucleus_from_coverage(cov: &Coverage) -> Result<CoverageNucleus> {
    let ideals = IdealSemigroup::build(cov.base_arc().clone())?;
    nucleus_on_ideals(cov, ideals)
}

pub(crate) fn nucleus_on_ideals(cov: &Coverage, ideals: IdealSemigroup) -> Result<CoverageNucleus> {
    let s = cov.base();
    let mut map = Vec::with_capacity(ideals.len());
    for i in ideals.semigroup().elements() {
        let closed = close_ideal(cov, ideals.ideal(i));
        match ideals.id_of(&closed) {
            Some(j) => map.push(j),
            None => {
                let (x, y) = s
                    .incompatible_pair(&closed)
                    .expect("closed sets are down-closed");
                return Err(Error::CompatibilityLost {
                    ideal: s.fmt_set(ideals.ideal(i)),
                    x: s.name(x).to_string(),
                    y: s.name(y).to_string(),
                });
            }
        }
    }
    let nucleus = Nucleus::new_unchecked(ideals.semigroup().clone(), map)?;
    Ok(CoverageNucleus { ideals, nucleus })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{e4, i2, make_fixture, Fixture};
    use crate::coverage::{close_coverage, tight_coverage};

    fn set(s: &FiniteInverseSemigroup, names: &[&str]) -> ElementSet {
        ElementSet::from_ids(s.len(), names.iter().map(|n| s.id(n).unwrap()))
    }

    #[test]
    fn e4_tight_nucleus() {
        let s = Arc::new(e4());
        let cn = nucleus_from_coverage(&tight_coverage(s.clone()).unwrap()).unwrap();
        cn.nucleus.check_axioms().unwrap();
        let c = &cn.ideals;
        let at = |names: &[&str]| c.id_of(&set(&s, names)).unwrap();
        assert_eq!(
            cn.nucleus.apply(at(&["0", "a", "b"])),
            at(&["0", "a", "b", "1"])
        );
        assert_eq!(cn.nucleus.apply(at(&["0", "a"])), at(&["0", "a"]));
        assert_eq!(cn.nucleus.fixed_points().len(), 4);
    }

    #[test]
    fn empty_coverage_gives_identity() {
        let s = Arc::new(i2());
        let cn = nucleus_from_coverage(&Coverage::empty(s)).unwrap();
        for i in cn.ideals.semigroup().elements() {
            assert_eq!(cn.nucleus.apply(i), i);
        }
    }

    #[test]
    fn compatibility_can_be_lost() {
        // {0} covering σ translates to {0} covering everything, so the closure
        // of {0} is all of I2.
        let s = Arc::new(i2());
        let cov = close_coverage(s.clone(), [(s.id("t1221").unwrap(), set(&s, &["0"]))]).unwrap();
        assert!(matches!(
            nucleus_from_coverage(&cov),
            Err(Error::CompatibilityLost { .. })
        ));
    }

    #[test]
    fn quotient_of_tight_nucleus() {
        for f in [
            Fixture::PowersetSemilattice(2),
            Fixture::SymmetricInverse(2),
            Fixture::ChainSemilattice(3),
        ] {
            let s = Arc::new(make_fixture(f).unwrap());
            let cn = nucleus_from_coverage(&tight_coverage(s).unwrap()).unwrap();
            let q = cn.nucleus.quotient().unwrap();
            q.check().unwrap();
        }
        let s = Arc::new(i2());
        let cn = nucleus_from_coverage(&tight_coverage(s).unwrap()).unwrap();
        let q = cn.nucleus.quotient().unwrap();
        assert_eq!(q.semigroup.len(), 7);
        assert_eq!(q.semigroup.idempotents().len(), 4);
    }

    #[test]
    fn identity_quotient() {
        let s = Arc::new(i2());
        let q = Nucleus::identity(s.clone()).quotient().unwrap();
        assert_eq!(*q.semigroup, *s);
    }

    #[test]
    fn bad_maps_are_rejected() {
        let s = Arc::new(e4());
        let n = |x: &str| s.id(x).unwrap();
        // Not inflationary.
        let map = vec![n("0"), n("0"), n("b"), n("1")];
        let err = Nucleus::new(s.clone(), map).unwrap_err();
        assert!(matches!(err, Error::NucleusAxiomFails { ref axiom, .. } if axiom == "N1"));
        // Sends both atoms to 1: ν(a)ν(b) = 1 but ν(ab) = ν(0) = 0.
        let map = vec![n("0"), n("1"), n("1"), n("1")];
        let err = Nucleus::new(s.clone(), map).unwrap_err();
        assert!(matches!(err, Error::NucleusAxiomFails { ref axiom, .. } if axiom == "N4"));
    }
}

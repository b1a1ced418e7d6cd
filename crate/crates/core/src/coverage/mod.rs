//! Coverages: families of coverings `C(a)`, each a set of subsets of `↓a`,
//! closed under left and right translation.

mod maps;
mod tight;

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::sync::Arc;

use crate::algebra::{subsets_of, ElementId, ElementSet, FiniteInverseSemigroup, Subsemigroup};
use crate::error::{Error, Result};
use crate::pseudogroup::Pseudogroup;

pub use maps::{induced_coverage, is_cover_to_join, CoverToJoinReport};
pub use tight::{
    is_tight_cover, is_tight_cover_semilattice, minimal_covers, tight_coverage,
    tight_coverage_capped, TIGHT_COVER_BITS,
};

/// Largest `↓a` for which implicit join covers are expanded into explicit sets.
pub const JOIN_COVER_BITS: usize = 16;

/// A coverage on a finite inverse semigroup.
///
/// Besides the explicit coverings, a coverage on a pseudogroup may carry all
/// join decompositions implicitly: with `join_covers` set, every `Z ⊆ ↓a` with
/// `⋁Z = a` is a covering of `a`.
#[derive(Debug, Clone)]
pub struct Coverage {
    base: Arc<FiniteInverseSemigroup>,
    covers: Vec<BTreeSet<ElementSet>>,
    join_covers: bool,
}

impl PartialEq for Coverage {
    fn eq(&self, other: &Self) -> bool {
        same_base(&self.base, &other.base)
            && self.covers == other.covers
            && self.join_covers == other.join_covers
    }
}

impl Eq for Coverage {}

pub(crate) fn same_base(a: &Arc<FiniteInverseSemigroup>, b: &Arc<FiniteInverseSemigroup>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl Coverage {
    pub fn empty(base: Arc<FiniteInverseSemigroup>) -> Self {
        let n = base.len();
        Coverage {
            base,
            covers: vec![BTreeSet::new(); n],
            join_covers: false,
        }
    }

    /// Takes the given coverings as they are, without translation closure.
    pub fn from_covers<I>(base: Arc<FiniteInverseSemigroup>, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (ElementId, ElementSet)>,
    {
        let mut cov = Coverage::empty(base);
        for (a, x) in pairs {
            cov.insert(a, x)?;
        }
        Ok(cov)
    }

    /// All join decompositions of a pseudogroup, and nothing else.
    pub fn join_coverage(p: &Pseudogroup) -> Self {
        let mut cov = Coverage::empty(p.arc().clone());
        cov.join_covers = true;
        cov
    }

    /// Adds the implicit join coverings. The base must be a pseudogroup.
    pub fn with_join_covers(mut self, p: &Pseudogroup) -> Result<Self> {
        if !same_base(&self.base, p.arc()) {
            return Err(Error::BaseMismatch);
        }
        self.join_covers = true;
        Ok(self)
    }

    pub fn insert(&mut self, a: ElementId, x: ElementSet) -> Result<bool> {
        if !x.is_subset(self.base.down(a)) {
            return Err(Error::NotDownSet {
                of: self.base.name(a).to_string(),
                cover: self.base.fmt_set(&x),
            });
        }
        Ok(self.covers[a.index()].insert(x))
    }

    pub fn base(&self) -> &FiniteInverseSemigroup {
        &self.base
    }

    pub fn base_arc(&self) -> &Arc<FiniteInverseSemigroup> {
        &self.base
    }

    pub fn has_join_covers(&self) -> bool {
        self.join_covers
    }

    /// Explicitly stored coverings of `a`.
    pub fn covers(&self, a: ElementId) -> &BTreeSet<ElementSet> {
        &self.covers[a.index()]
    }

    pub fn explicit(&self) -> impl Iterator<Item = (ElementId, &ElementSet)> + '_ {
        self.covers
            .iter()
            .enumerate()
            .flat_map(|(a, xs)| xs.iter().map(move |x| (ElementId::new(a), x)))
    }

    pub fn explicit_count(&self) -> usize {
        self.covers.iter().map(BTreeSet::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        !self.join_covers && self.explicit_count() == 0
    }

    pub fn is_cover(&self, a: ElementId, x: &ElementSet) -> bool {
        if self.covers[a.index()].contains(x) {
            return true;
        }
        self.join_covers && x.is_subset(self.base.down(a)) && self.base.join(x) == Some(a)
    }

    /// Explicit coverings of `a` together with the expanded join coverings.
    pub fn all_covers(&self, a: ElementId) -> Result<BTreeSet<ElementSet>> {
        let mut out = self.covers[a.index()].clone();
        if self.join_covers {
            let down = self.base.down(a);
            let subsets = subsets_of(down, JOIN_COVER_BITS).ok_or_else(|| {
                Error::size(
                    "join covers of one element (bits)",
                    down.len(),
                    JOIN_COVER_BITS,
                )
            })?;
            out.extend(subsets.filter(|z| self.base.join(z) == Some(a)));
        }
        Ok(out)
    }

    /// Every covering, explicit or implicit, as a plain coverage.
    pub fn materialize(&self) -> Result<Coverage> {
        let mut covers = Vec::with_capacity(self.base.len());
        for a in self.base.elements() {
            covers.push(self.all_covers(a)?);
        }
        Ok(Coverage {
            base: self.base.clone(),
            covers,
            join_covers: false,
        })
    }

    /// True when `X ⊆ set` and `X ∈ C(a)` imply `a ∈ set`.
    pub fn is_closed_set(&self, set: &ElementSet) -> bool {
        self.base
            .elements()
            .filter(|&a| !set.contains(a))
            .all(|a| !self.forces(a, set))
    }

    /// Whether some covering of `a` lies inside `set`.
    pub(crate) fn forces(&self, a: ElementId, set: &ElementSet) -> bool {
        if self.covers[a.index()].iter().any(|x| x.is_subset(set)) {
            return true;
        }
        if !self.join_covers {
            return false;
        }
        let inside = set.intersection(self.base.down(a));
        match self.base.join(&inside) {
            Some(j) if j == a => true,
            // Without a join of the whole set, look for a sub-family that has one.
            None => subsets_of(&inside, JOIN_COVER_BITS)
                .map(|mut it| it.any(|z| self.base.join(&z) == Some(a)))
                .unwrap_or(false),
            Some(_) => false,
        }
    }

    /// Elementwise union.
    pub fn union(&self, other: &Coverage) -> Result<Coverage> {
        if !same_base(&self.base, &other.base) {
            return Err(Error::BaseMismatch);
        }
        let covers = self
            .covers
            .iter()
            .zip(&other.covers)
            .map(|(a, b)| a.union(b).cloned().collect())
            .collect();
        Ok(Coverage {
            base: self.base.clone(),
            covers,
            join_covers: self.join_covers || other.join_covers,
        })
    }

    /// First translate that is missing, as `(axiom, witness)`.
    pub fn translation_failure(&self) -> Result<Option<(String, String)>> {
        let s = &self.base;
        for a in s.elements() {
            for x in &self.all_covers(a)? {
                for b in s.elements() {
                    let bx = s.left(b, x);
                    if !self.is_cover(s.mul(b, a), &bx) {
                        return Ok(Some(("left translation".into(), self.witness(b, a, x))));
                    }
                    let xb = s.right(x, b);
                    if !self.is_cover(s.mul(a, b), &xb) {
                        return Ok(Some(("right translation".into(), self.witness(b, a, x))));
                    }
                }
            }
        }
        Ok(None)
    }

    fn witness(&self, b: ElementId, a: ElementId, x: &ElementSet) -> String {
        let s = &self.base;
        format!("b={}, a={}, X={}", s.name(b), s.name(a), s.fmt_set(x))
    }

    pub fn is_coverage(&self) -> Result<bool> {
        Ok(self.translation_failure()?.is_none())
    }
}

/// The least coverage containing the seeds.
pub fn close_coverage<I>(base: Arc<FiniteInverseSemigroup>, seeds: I) -> Result<Coverage>
where
    I: IntoIterator<Item = (ElementId, ElementSet)>,
{
    let mut cov = Coverage::empty(base.clone());
    let mut queue = VecDeque::new();
    for (a, x) in seeds {
        if cov.insert(a, x.clone())? {
            queue.push_back((a, x));
        }
    }
    while let Some((a, x)) = queue.pop_front() {
        for b in base.elements() {
            for (c, y) in [
                (base.mul(b, a), base.left(b, &x)),
                (base.mul(a, b), base.right(&x, b)),
            ] {
                if cov.covers[c.index()].insert(y.clone()) {
                    queue.push_back((c, y));
                }
            }
        }
    }
    Ok(cov)
}

/// Outcome of [`check_axioms`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverageReport {
    pub is_coverage: bool,
    pub is_strong: bool,
    /// `(axiom, witness)` for each axiom that fails, first witness only.
    pub failures: Vec<(String, String)>,
}

impl CoverageReport {
    pub fn holds(&self, axiom: &str) -> bool {
        !self.failures.iter().any(|(a, _)| a == axiom)
    }
}

/// Checks translation closure and the strong axioms R, I, MS and T.
pub fn check_axioms(cov: &Coverage) -> Result<CoverageReport> {
    let s = cov.base();
    let full = cov.materialize()?;
    let mut failures = Vec::new();

    if let Some((_, w)) = full.translation_failure()? {
        failures.push(("coverage".to_string(), w));
    }
    if let Some(a) = s
        .elements()
        .find(|&a| !full.is_cover(a, &ElementSet::singleton(s.len(), a)))
    {
        failures.push(("R".into(), format!("a={}", s.name(a))));
    }
    'inv: for (a, x) in full.explicit() {
        if !full.is_cover(s.inv(a), &s.inverse_set(x)) {
            failures.push(("I".into(), format!("a={}, X={}", s.name(a), s.fmt_set(x))));
            break 'inv;
        }
    }
    'ms: for (a, x) in full.explicit() {
        for (b, y) in full.explicit() {
            if !full.is_cover(s.mul(a, b), &s.product(x, y)) {
                failures.push((
                    "MS".into(),
                    format!(
                        "a={}, X={}, b={}, Y={}",
                        s.name(a),
                        s.fmt_set(x),
                        s.name(b),
                        s.fmt_set(y)
                    ),
                ));
                break 'ms;
            }
        }
    }
    'trans: for (a, x) in full.explicit() {
        // Every union of a choice of coverings, one per member of X.
        let mut unions: HashSet<ElementSet> = HashSet::from([s.empty_set()]);
        for xi in x.iter() {
            let mut next = HashSet::new();
            for u in &unions {
                for y in full.covers(xi) {
                    next.insert(u.union(y));
                }
            }
            unions = next;
        }
        if let Some(bad) = unions.iter().find(|u| !full.is_cover(a, u)) {
            failures.push((
                "T".into(),
                format!(
                    "a={}, X={}, union={}",
                    s.name(a),
                    s.fmt_set(x),
                    s.fmt_set(bad)
                ),
            ));
            break 'trans;
        }
    }

    let is_coverage = failures.iter().all(|(a, _)| a != "coverage");
    Ok(CoverageReport {
        is_coverage,
        is_strong: is_coverage && failures.is_empty(),
        failures,
    })
}

/// A coverage restricted to `E(S)`, re-indexed over the semilattice.
#[derive(Debug, Clone)]
pub struct IdempotentCoverage {
    pub semilattice: Subsemigroup,
    pub coverage: Coverage,
}

pub fn restrict_to_idempotents(cov: &Coverage) -> Result<IdempotentCoverage> {
    if cov.join_covers {
        return Err(Error::PreconditionFailed(
            "restriction of implicit join covers".into(),
        ));
    }
    let semilattice = cov.base.idempotent_semilattice();
    let mut out = Coverage::empty(semilattice.semigroup.clone());
    for (a, x) in cov.explicit() {
        if let Some(local) = semilattice.lower(a) {
            out.insert(local, semilattice.lower_set(x))?;
        }
    }
    Ok(IdempotentCoverage {
        semilattice,
        coverage: out,
    })
}

/// Rebuilds a coverage on S from one on `E(S)` that is closed under conjugation.
pub fn extend_from_idempotents(
    base: Arc<FiniteInverseSemigroup>,
    semilattice: &Subsemigroup,
    cov_e: &Coverage,
) -> Result<Coverage> {
    let s = &base;
    if semilattice.embedding.iter().any(|&e| !s.is_idempotent(e))
        || semilattice.embedding.len() != s.idempotents().len()
    {
        return Err(Error::BaseMismatch);
    }
    if cov_e.join_covers {
        return Err(Error::PreconditionFailed(
            "extension of implicit join covers".into(),
        ));
    }
    let lifted: Vec<BTreeSet<ElementSet>> = (0..s.len())
        .map(|a| match semilattice.lower(ElementId::new(a)) {
            Some(local) => cov_e
                .covers(local)
                .iter()
                .map(|x| semilattice.lift_set(x))
                .collect(),
            None => BTreeSet::new(),
        })
        .collect();

    for e in s.idempotents().iter() {
        for x in &lifted[e.index()] {
            for t in s.elements() {
                let conj = s.right(&s.left(t, x), s.inv(t));
                let target = s.mul(s.mul(t, e), s.inv(t));
                if !lifted[target.index()].contains(&conj) {
                    return Err(Error::ConjugationClosureFails {
                        s: s.name(t).to_string(),
                        e: s.name(e).to_string(),
                        cover: s.fmt_set(x),
                    });
                }
            }
        }
    }

    let mut out = Coverage::empty(base.clone());
    for a in s.elements() {
        for x in &lifted[s.dom(a).index()] {
            out.insert(a, s.left(a, x))?;
        }
        for x in &lifted[s.ran(a).index()] {
            out.insert(a, s.right(x, a))?;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{e4, i2};

    fn set(s: &FiniteInverseSemigroup, names: &[&str]) -> ElementSet {
        ElementSet::from_ids(s.len(), names.iter().map(|n| s.id(n).unwrap()))
    }

    #[test]
    fn closure_in_e4() {
        let s = Arc::new(e4());
        let one = s.id("1").unwrap();
        let cov = close_coverage(s.clone(), [(one, set(&s, &["a", "b"]))]).unwrap();
        assert!(cov.is_coverage().unwrap());
        assert!(cov.is_cover(s.id("a").unwrap(), &set(&s, &["a", "0"])));
        assert!(cov.is_cover(s.id("0").unwrap(), &set(&s, &["0"])));
        let report = check_axioms(&cov).unwrap();
        assert!(report.is_coverage);
        assert!(!report.holds("R"));
    }

    #[test]
    fn closure_in_i2() {
        let s = Arc::new(i2());
        let sigma = s.id("t1221").unwrap();
        let cov = close_coverage(s.clone(), [(sigma, set(&s, &["t12", "t21"]))]).unwrap();
        // σ⁻¹{t12, t21} = {σt12, σt21} = {e1, e2} covers σσ = id.
        assert!(cov.is_cover(s.id("id").unwrap(), &set(&s, &["e1", "e2"])));
        let restricted = restrict_to_idempotents(&cov).unwrap();
        let e = &restricted.semilattice;
        let id_local = e.lower(s.id("id").unwrap()).unwrap();
        let expected = e.lower_set(&set(&s, &["e1", "e2"]));
        assert!(restricted.coverage.covers(id_local).contains(&expected));
    }

    #[test]
    fn empty_and_union() {
        let s = Arc::new(e4());
        let empty = Coverage::empty(s.clone());
        let report = check_axioms(&empty).unwrap();
        assert!(report.is_coverage && !report.is_strong && !report.holds("R"));
        let cov = close_coverage(s.clone(), [(s.id("1").unwrap(), set(&s, &["a", "b"]))]).unwrap();
        assert_eq!(cov.union(&empty).unwrap(), cov);
        assert_eq!(cov.union(&cov).unwrap(), cov);
        let other = Coverage::empty(Arc::new(i2()));
        assert_eq!(cov.union(&other).unwrap_err(), Error::BaseMismatch);
    }

    #[test]
    fn not_down_set() {
        let s = Arc::new(e4());
        let err =
            Coverage::from_covers(s.clone(), [(s.id("a").unwrap(), set(&s, &["b"]))]).unwrap_err();
        assert!(matches!(err, Error::NotDownSet { .. }));
    }

    #[test]
    fn union_of_closed_coverages_is_a_coverage() {
        let s = Arc::new(i2());
        let c1 = close_coverage(
            s.clone(),
            [(s.id("t1221").unwrap(), set(&s, &["t12", "t21"]))],
        )
        .unwrap();
        let c2 = close_coverage(s.clone(), [(s.id("e1").unwrap(), set(&s, &["0"]))]).unwrap();
        assert!(check_axioms(&c1.union(&c2).unwrap()).unwrap().is_coverage);
    }

    #[test]
    fn join_coverage_of_a_frame_is_strong() {
        let s = Arc::new(e4());
        let p = Pseudogroup::new(s.clone()).unwrap();
        let cov = Coverage::join_coverage(&p);
        let report = check_axioms(&cov).unwrap();
        assert!(report.is_strong, "{report:?}");
        assert!(cov.is_cover(s.id("1").unwrap(), &set(&s, &["a", "b"])));
        assert!(!cov.is_cover(s.id("1").unwrap(), &set(&s, &["a"])));
    }
}

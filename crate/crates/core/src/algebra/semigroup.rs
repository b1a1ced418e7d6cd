use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use super::set::{ElementId, ElementSet};
use crate::error::{Error, Result};

pub const DEFAULT_SIZE_CAP: usize = 4096;

/// Raw, unvalidated multiplication table over named elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemigroupTable {
    pub names: Vec<String>,
    /// `mul[i][j]` is the index of `names[i] * names[j]`.
    pub mul: Vec<Vec<usize>>,
    pub zero: Option<usize>,
    pub identity: Option<usize>,
}

#[derive(Debug, Clone, Copy)]
pub struct ValidateOptions {
    /// The O(n^3) associativity scan. Generated fixtures that are associative
    /// by construction may skip it.
    pub check_associativity: bool,
    pub size_cap: usize,
}

impl Default for ValidateOptions {
    fn default() -> Self {
        ValidateOptions {
            check_associativity: true,
            size_cap: DEFAULT_SIZE_CAP,
        }
    }
}

impl ValidateOptions {
    pub fn trusted() -> Self {
        ValidateOptions {
            check_associativity: false,
            ..Self::default()
        }
    }
}

/// A validated finite inverse semigroup.
///
/// Elements are dense indices with a name table. The natural partial order
/// (`x <= y` iff `x = y x^-1 x`) is precomputed as up- and down-set bitsets.
#[derive(Clone)]
pub struct FiniteInverseSemigroup {
    names: Vec<String>,
    lookup: HashMap<String, ElementId>,
    mul: Vec<ElementId>,
    inv: Vec<ElementId>,
    zero: Option<ElementId>,
    identity: Option<ElementId>,
    up: Vec<ElementSet>,
    down: Vec<ElementSet>,
    idempotents: ElementSet,
}

impl PartialEq for FiniteInverseSemigroup {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names && self.mul == other.mul
    }
}

impl Eq for FiniteInverseSemigroup {}

impl fmt::Debug for FiniteInverseSemigroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteInverseSemigroup")
            .field("elements", &self.names)
            .field("zero", &self.zero.map(|z| self.name(z)))
            .field("identity", &self.identity.map(|z| self.name(z)))
            .finish()
    }
}

/// Checks a table and builds the semigroup: inverses, zero, identity, order.
pub fn validate(table: SemigroupTable, opts: &ValidateOptions) -> Result<FiniteInverseSemigroup> {
    let n = table.names.len();
    if n == 0 {
        return Err(Error::TableShape("empty element list".into()));
    }
    if n > opts.size_cap {
        return Err(Error::size("semigroup elements", n, opts.size_cap));
    }
    let mut lookup = HashMap::with_capacity(n);
    for (i, name) in table.names.iter().enumerate() {
        if lookup.insert(name.clone(), ElementId::new(i)).is_some() {
            return Err(Error::TableShape(format!(
                "duplicate element name {name:?}"
            )));
        }
    }
    if table.mul.len() != n {
        return Err(Error::TableShape(format!(
            "expected {n} rows, found {}",
            table.mul.len()
        )));
    }
    let mut mul = Vec::with_capacity(n * n);
    for (i, row) in table.mul.iter().enumerate() {
        if row.len() != n {
            return Err(Error::TableShape(format!(
                "row {i} has {} entries, expected {n}",
                row.len()
            )));
        }
        for (j, &v) in row.iter().enumerate() {
            if v >= n {
                return Err(Error::TableShape(format!(
                    "entry [{i}][{j}] = {v} out of range"
                )));
            }
            mul.push(ElementId::new(v));
        }
    }
    for (what, idx) in [("zero", table.zero), ("identity", table.identity)] {
        if let Some(i) = idx {
            if i >= n {
                return Err(Error::TableShape(format!("{what} index {i} out of range")));
            }
        }
    }

    let m = |a: usize, b: usize| mul[a * n + b].index();

    if opts.check_associativity {
        for i in 0..n {
            for j in 0..n {
                let ij = m(i, j);
                for k in 0..n {
                    if m(ij, k) != m(i, m(j, k)) {
                        return Err(Error::NonAssociative {
                            i: table.names[i].clone(),
                            j: table.names[j].clone(),
                            k: table.names[k].clone(),
                        });
                    }
                }
            }
        }
    }

    let mut inv = Vec::with_capacity(n);
    for x in 0..n {
        let mut found = None;
        let mut count = 0;
        for y in 0..n {
            if m(m(x, y), x) == x && m(m(y, x), y) == y {
                count += 1;
                found = Some(y);
            }
        }
        match (count, found) {
            (1, Some(y)) => inv.push(ElementId::new(y)),
            _ => {
                return Err(Error::NotInverseSemigroup {
                    element: table.names[x].clone(),
                    candidates: count,
                })
            }
        }
    }

    let absorbs = |z: usize| (0..n).find(|&x| m(z, x) != z || m(x, z) != z);
    let fixes = |u: usize| (0..n).find(|&x| m(u, x) != x || m(x, u) != x);

    let zero = match table.zero {
        Some(z) => match absorbs(z) {
            None => Some(ElementId::new(z)),
            Some(w) => {
                return Err(Error::ZeroViolation {
                    zero: table.names[z].clone(),
                    witness: table.names[w].clone(),
                })
            }
        },
        None => (0..n).find(|&z| absorbs(z).is_none()).map(ElementId::new),
    };
    let identity = match table.identity {
        Some(u) => match fixes(u) {
            None => Some(ElementId::new(u)),
            Some(w) => {
                return Err(Error::IdentityViolation {
                    identity: table.names[u].clone(),
                    witness: table.names[w].clone(),
                })
            }
        },
        None => (0..n).find(|&u| fixes(u).is_none()).map(ElementId::new),
    };

    let idempotents = ElementSet::from_indices(n, (0..n).filter(|&e| m(e, e) == e));
    let via_inverses = ElementSet::from_indices(n, (0..n).map(|x| m(inv[x].index(), x)));
    if idempotents != via_inverses {
        let bad = idempotents
            .difference(&via_inverses)
            .first()
            .or(via_inverses.difference(&idempotents).first());
        return Err(Error::NotInverseSemigroup {
            element: bad
                .map(|b| table.names[b.index()].clone())
                .unwrap_or_default(),
            candidates: 1,
        });
    }

    let mut up = vec![ElementSet::empty(n); n];
    let mut down = vec![ElementSet::empty(n); n];
    for x in 0..n {
        let d = m(inv[x].index(), x);
        for (y, below) in down.iter_mut().enumerate() {
            if m(y, d) == x {
                up[x].insert(ElementId::new(y));
                below.insert(ElementId::new(x));
            }
        }
    }

    Ok(FiniteInverseSemigroup {
        names: table.names,
        lookup,
        mul,
        inv,
        zero,
        identity,
        up,
        down,
        idempotents,
    })
}

impl FiniteInverseSemigroup {
    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn elements(&self) -> impl Iterator<Item = ElementId> + Clone {
        (0..self.len()).map(ElementId::new)
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, x: ElementId) -> &str {
        &self.names[x.index()]
    }

    pub fn id(&self, name: &str) -> Option<ElementId> {
        self.lookup.get(name).copied()
    }

    /// Like [`id`](Self::id), but reports unknown names as errors.
    pub fn lookup(&self, name: &str) -> Result<ElementId> {
        self.id(name)
            .ok_or_else(|| Error::UnknownName(name.to_string()))
    }

    #[inline]
    pub fn mul(&self, a: ElementId, b: ElementId) -> ElementId {
        self.mul[a.index() * self.len() + b.index()]
    }

    #[inline]
    pub fn inv(&self, a: ElementId) -> ElementId {
        self.inv[a.index()]
    }

    /// `a^-1 a`
    pub fn dom(&self, a: ElementId) -> ElementId {
        self.mul(self.inv(a), a)
    }

    /// `a a^-1`
    pub fn ran(&self, a: ElementId) -> ElementId {
        self.mul(a, self.inv(a))
    }

    pub fn zero(&self) -> Option<ElementId> {
        self.zero
    }

    pub fn identity(&self) -> Option<ElementId> {
        self.identity
    }

    pub fn empty_set(&self) -> ElementSet {
        ElementSet::empty(self.len())
    }

    pub fn full_set(&self) -> ElementSet {
        ElementSet::full(self.len())
    }

    pub fn is_idempotent(&self, e: ElementId) -> bool {
        self.idempotents.contains(e)
    }

    /// `E(S)`.
    pub fn idempotents(&self) -> &ElementSet {
        &self.idempotents
    }

    /// True when every element is idempotent, i.e. S is a meet-semilattice
    /// under the natural order with meet given by the product.
    pub fn is_semilattice(&self) -> bool {
        self.idempotents.len() == self.len()
    }

    #[inline]
    pub fn leq(&self, x: ElementId, y: ElementId) -> bool {
        self.up[x.index()].contains(y)
    }

    /// `{y | x <= y}`
    pub fn up(&self, x: ElementId) -> &ElementSet {
        &self.up[x.index()]
    }

    /// `{y | y <= x}`
    pub fn down(&self, x: ElementId) -> &ElementSet {
        &self.down[x.index()]
    }

    pub fn down_set(&self, a: &ElementSet) -> ElementSet {
        let mut out = self.empty_set();
        for x in a.iter() {
            out.union_with(self.down(x));
        }
        out
    }

    pub fn up_set(&self, a: &ElementSet) -> ElementSet {
        let mut out = self.empty_set();
        for x in a.iter() {
            out.union_with(self.up(x));
        }
        out
    }

    pub fn is_down_closed(&self, a: &ElementSet) -> bool {
        a.iter().all(|x| self.down(x).is_subset(a))
    }

    pub fn is_up_closed(&self, a: &ElementSet) -> bool {
        a.iter().all(|x| self.up(x).is_subset(a))
    }

    pub fn compatible(&self, x: ElementId, y: ElementId) -> bool {
        self.is_idempotent(self.mul(self.inv(x), y)) && self.is_idempotent(self.mul(x, self.inv(y)))
    }

    pub fn compatible_set(&self, a: &ElementSet) -> bool {
        self.incompatible_pair(a).is_none()
    }

    pub fn incompatible_pair(&self, a: &ElementSet) -> Option<(ElementId, ElementId)> {
        let items: Vec<_> = a.iter().collect();
        for (i, &x) in items.iter().enumerate() {
            for &y in &items[i + 1..] {
                if !self.compatible(x, y) {
                    return Some((x, y));
                }
            }
        }
        None
    }

    /// Least upper bound in the natural order, if it exists. The join of the
    /// empty set is the minimum element (the zero, when there is one).
    pub fn join(&self, a: &ElementSet) -> Option<ElementId> {
        let mut bounds = self.full_set();
        for x in a.iter() {
            bounds.intersect_with(self.up(x));
        }
        self.minimum(&bounds)
    }

    pub fn join2(&self, a: ElementId, b: ElementId) -> Option<ElementId> {
        self.minimum(&self.up(a).intersection(self.up(b)))
    }

    /// Greatest lower bound in the natural order, if it exists.
    pub fn meet2(&self, a: ElementId, b: ElementId) -> Option<ElementId> {
        self.maximum(&self.down(a).intersection(self.down(b)))
    }

    /// `{ab | a in A, b in B}`
    pub fn product(&self, a: &ElementSet, b: &ElementSet) -> ElementSet {
        let mut out = self.empty_set();
        for x in a.iter() {
            for y in b.iter() {
                out.insert(self.mul(x, y));
            }
        }
        out
    }

    /// `bX`
    pub fn left(&self, b: ElementId, x: &ElementSet) -> ElementSet {
        ElementSet::from_ids(self.len(), x.iter().map(|y| self.mul(b, y)))
    }

    /// `Xb`
    pub fn right(&self, x: &ElementSet, b: ElementId) -> ElementSet {
        ElementSet::from_ids(self.len(), x.iter().map(|y| self.mul(y, b)))
    }

    /// `{a^-1 | a in A}`
    pub fn inverse_set(&self, a: &ElementSet) -> ElementSet {
        ElementSet::from_ids(self.len(), a.iter().map(|x| self.inv(x)))
    }

    /// Minimum of a set in the natural order, if it has one.
    pub fn minimum(&self, a: &ElementSet) -> Option<ElementId> {
        a.iter().find(|&m| a.is_subset(self.up(m)))
    }

    pub fn maximum(&self, a: &ElementSet) -> Option<ElementId> {
        a.iter().find(|&m| a.is_subset(self.down(m)))
    }

    pub fn maximal_elements(&self, a: &ElementSet) -> ElementSet {
        ElementSet::from_ids(
            self.len(),
            a.iter()
                .filter(|&x| a.iter().all(|y| y == x || !self.leq(x, y))),
        )
    }

    /// Formats a subset as `{a,b,c}` using element names in index order.
    pub fn fmt_set(&self, a: &ElementSet) -> String {
        let parts: Vec<&str> = a.iter().map(|x| self.name(x)).collect();
        format!("{{{}}}", parts.join(","))
    }

    /// Element names of a subset, sorted lexicographically.
    pub fn sorted_names(&self, a: &ElementSet) -> Vec<String> {
        let mut v: Vec<String> = a.iter().map(|x| self.name(x).to_string()).collect();
        v.sort();
        v
    }

    pub fn to_table(&self) -> SemigroupTable {
        let n = self.len();
        SemigroupTable {
            names: self.names.clone(),
            mul: (0..n)
                .map(|i| (0..n).map(|j| self.mul[i * n + j].index()).collect())
                .collect(),
            zero: self.zero.map(ElementId::index),
            identity: self.identity.map(ElementId::index),
        }
    }

    /// All compatible antichains contained in `within`, including the empty
    /// one. Fails once more than `cap` have been produced.
    pub fn compatible_antichains(
        &self,
        within: &ElementSet,
        cap: usize,
    ) -> Result<Vec<ElementSet>> {
        let candidates: Vec<ElementId> = within.iter().collect();
        let mut out = Vec::new();
        let mut chosen = self.empty_set();
        self.antichain_step(&candidates, 0, &mut chosen, &mut out, cap)?;
        Ok(out)
    }

    fn antichain_step(
        &self,
        candidates: &[ElementId],
        start: usize,
        chosen: &mut ElementSet,
        out: &mut Vec<ElementSet>,
        cap: usize,
    ) -> Result<()> {
        if out.len() >= cap {
            return Err(Error::size("compatible antichains", out.len() + 1, cap));
        }
        out.push(chosen.clone());
        for (offset, &x) in candidates[start..].iter().enumerate() {
            let fits = chosen
                .iter()
                .all(|y| self.compatible(x, y) && !self.leq(x, y) && !self.leq(y, x));
            if fits {
                chosen.insert(x);
                self.antichain_step(candidates, start + offset + 1, chosen, out, cap)?;
                chosen.remove(x);
            }
        }
        Ok(())
    }

    /// Restricts to a subset closed under product and inverse.
    pub fn subsemigroup(&self, members: &ElementSet) -> Result<Subsemigroup> {
        if members.is_empty() {
            return Err(Error::PreconditionFailed("empty subsemigroup".into()));
        }
        for x in members.iter() {
            if !members.contains(self.inv(x)) {
                return Err(Error::PreconditionFailed(format!(
                    "subset not closed under inverse at {}",
                    self.name(x)
                )));
            }
            for y in members.iter() {
                if !members.contains(self.mul(x, y)) {
                    return Err(Error::PreconditionFailed(format!(
                        "subset not closed under product at {}*{}",
                        self.name(x),
                        self.name(y)
                    )));
                }
            }
        }
        let embedding: Vec<ElementId> = members.iter().collect();
        let mut lower = vec![None; self.len()];
        for (i, &x) in embedding.iter().enumerate() {
            lower[x.index()] = Some(ElementId::new(i));
        }
        let local = |x: ElementId| lower[x.index()].expect("closed").index();
        let table = SemigroupTable {
            names: embedding
                .iter()
                .map(|&x| self.name(x).to_string())
                .collect(),
            mul: embedding
                .iter()
                .map(|&x| embedding.iter().map(|&y| local(self.mul(x, y))).collect())
                .collect(),
            zero: None,
            identity: None,
        };
        let semigroup = validate(
            table,
            &ValidateOptions {
                check_associativity: false,
                size_cap: usize::MAX,
            },
        )?;
        Ok(Subsemigroup {
            semigroup: Arc::new(semigroup),
            embedding,
            lower,
        })
    }

    /// `E(S)` as a semilattice in its own right.
    pub fn idempotent_semilattice(&self) -> Subsemigroup {
        self.subsemigroup(&self.idempotents)
            .expect("idempotents form a subsemigroup")
    }
}

/// A subsemigroup with its own dense indexing, plus the embedding into the parent.
#[derive(Debug, Clone)]
pub struct Subsemigroup {
    pub semigroup: Arc<FiniteInverseSemigroup>,
    pub embedding: Vec<ElementId>,
    lower: Vec<Option<ElementId>>,
}

impl Subsemigroup {
    /// Local index to parent index.
    pub fn lift(&self, x: ElementId) -> ElementId {
        self.embedding[x.index()]
    }

    /// Parent index to local index.
    pub fn lower(&self, x: ElementId) -> Option<ElementId> {
        self.lower.get(x.index()).copied().flatten()
    }

    pub fn lift_set(&self, a: &ElementSet) -> ElementSet {
        ElementSet::from_ids(self.lower.len(), a.iter().map(|x| self.lift(x)))
    }

    /// Intersects with the subsemigroup and re-indexes.
    pub fn lower_set(&self, a: &ElementSet) -> ElementSet {
        ElementSet::from_ids(self.semigroup.len(), a.iter().filter_map(|x| self.lower(x)))
    }
}

/// A map between finite inverse semigroups, given by images of elements.
#[derive(Debug, Clone)]
pub struct SemigroupMap {
    pub source: Arc<FiniteInverseSemigroup>,
    pub target: Arc<FiniteInverseSemigroup>,
    pub images: Vec<ElementId>,
}

impl SemigroupMap {
    pub fn new(
        source: Arc<FiniteInverseSemigroup>,
        target: Arc<FiniteInverseSemigroup>,
        images: Vec<ElementId>,
    ) -> Result<Self> {
        if images.len() != source.len() || images.iter().any(|y| y.index() >= target.len()) {
            return Err(Error::PreconditionFailed(
                "map does not match source/target sizes".into(),
            ));
        }
        Ok(SemigroupMap {
            source,
            target,
            images,
        })
    }

    pub fn identity(s: Arc<FiniteInverseSemigroup>) -> Self {
        let images = s.elements().collect();
        SemigroupMap {
            source: s.clone(),
            target: s,
            images,
        }
    }

    #[inline]
    pub fn apply(&self, x: ElementId) -> ElementId {
        self.images[x.index()]
    }

    pub fn apply_set(&self, a: &ElementSet) -> ElementSet {
        ElementSet::from_ids(self.target.len(), a.iter().map(|x| self.apply(x)))
    }

    pub fn check_homomorphism(&self) -> Result<()> {
        let (s, t) = (&self.source, &self.target);
        for a in s.elements() {
            for b in s.elements() {
                if self.apply(s.mul(a, b)) != t.mul(self.apply(a), self.apply(b)) {
                    return Err(Error::NotHomomorphism {
                        a: s.name(a).to_string(),
                        b: s.name(b).to_string(),
                    });
                }
            }
        }
        Ok(())
    }

    /// First element mapped to an idempotent without being one.
    pub fn idempotent_purity_witness(&self) -> Option<ElementId> {
        self.source
            .elements()
            .find(|&s| self.target.is_idempotent(self.apply(s)) && !self.source.is_idempotent(s))
    }

    pub fn is_idempotent_pure(&self) -> bool {
        self.idempotent_purity_witness().is_none()
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = self.target.empty_set();
        self.images.iter().all(|&y| seen.insert(y))
    }

    pub fn is_surjective(&self) -> bool {
        ElementSet::from_ids(self.target.len(), self.images.iter().copied()).len()
            == self.target.len()
    }
}

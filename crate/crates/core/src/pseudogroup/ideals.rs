use std::collections::HashMap;
use std::sync::Arc;

use crate::algebra::{
    validate, ElementId, ElementSet, FiniteInverseSemigroup, SemigroupTable, ValidateOptions,
};
use crate::error::{Error, Result};

/// Default cap on the number of compatible order ideals enumerated.
pub const DEFAULT_IDEAL_CAP: usize = 1 << 20;

/// The inverse semigroup C(S) of compatible order ideals under setwise
/// product followed by down-closure.
///
/// When S has a zero every ideal contains it and `{0}` is the bottom element;
/// otherwise the empty ideal is the bottom.
#[derive(Debug, Clone)]
pub struct IdealSemigroup {
    base: Arc<FiniteInverseSemigroup>,
    semigroup: Arc<FiniteInverseSemigroup>,
    ideals: Vec<ElementSet>,
    index: HashMap<ElementSet, ElementId>,
}

impl IdealSemigroup {
    pub fn build(base: Arc<FiniteInverseSemigroup>) -> Result<Self> {
        Self::build_capped(base, DEFAULT_IDEAL_CAP)
    }

    pub fn build_capped(base: Arc<FiniteInverseSemigroup>, cap: usize) -> Result<Self> {
        let s = &base;
        let mut candidates = s.full_set();
        if let Some(z) = s.zero() {
            candidates.remove(z);
        }
        let bottom = match s.zero() {
            Some(z) => ElementSet::singleton(s.len(), z),
            None => s.empty_set(),
        };
        let mut ideals: Vec<ElementSet> = s
            .compatible_antichains(&candidates, cap)?
            .into_iter()
            .map(|a| s.down_set(&a).union(&bottom))
            .collect();
        ideals.sort_by_key(|i| (i.len(), i.clone()));
        let index: HashMap<ElementSet, ElementId> = ideals
            .iter()
            .enumerate()
            .map(|(i, set)| (set.clone(), ElementId::new(i)))
            .collect();

        let mut mul = Vec::with_capacity(ideals.len());
        for i in &ideals {
            let mut row = Vec::with_capacity(ideals.len());
            for j in &ideals {
                let product = s.down_set(&s.product(i, j)).union(&bottom);
                let Some(k) = index.get(&product) else {
                    return Err(match s.incompatible_pair(&product) {
                        Some((x, y)) => Error::CompatibilityLost {
                            ideal: s.fmt_set(&product),
                            x: s.name(x).to_string(),
                            y: s.name(y).to_string(),
                        },
                        None => Error::property("ideal product closure", s.fmt_set(&product)),
                    });
                };
                row.push(k.index());
            }
            mul.push(row);
        }
        let names = ideals.iter().map(|i| s.fmt_set(i)).collect();
        let identity = index.get(s.idempotents()).map(|id| id.index());
        let table = SemigroupTable {
            names,
            mul,
            zero: Some(0),
            identity,
        };
        let opts = ValidateOptions {
            check_associativity: ideals.len() <= 64,
            size_cap: usize::MAX,
        };
        let semigroup = Arc::new(validate(table, &opts)?);
        Ok(IdealSemigroup {
            base,
            semigroup,
            ideals,
            index,
        })
    }

    pub fn base(&self) -> &Arc<FiniteInverseSemigroup> {
        &self.base
    }

    /// C(S) as a finite inverse semigroup; elements are named `{x,y,...}`.
    pub fn semigroup(&self) -> &Arc<FiniteInverseSemigroup> {
        &self.semigroup
    }

    pub fn len(&self) -> usize {
        self.ideals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ideals.is_empty()
    }

    pub fn ideal(&self, id: ElementId) -> &ElementSet {
        &self.ideals[id.index()]
    }

    pub fn ideals(&self) -> &[ElementSet] {
        &self.ideals
    }

    pub fn id_of(&self, set: &ElementSet) -> Option<ElementId> {
        self.index.get(set).copied()
    }

    /// The ideal generated by a set: its down-closure, plus the zero.
    pub fn generated(&self, set: &ElementSet) -> ElementSet {
        let mut out = self.base.down_set(set);
        if let Some(z) = self.base.zero() {
            out.insert(z);
        }
        out
    }

    /// `↓a` as an element of C(S).
    pub fn principal(&self, a: ElementId) -> ElementId {
        self.id_of(&self.generated(&ElementSet::singleton(self.base.len(), a)))
            .expect("principal ideals are compatible")
    }

    /// Ideals contained in `E(S)`; these should be exactly the idempotents of C(S).
    pub fn idempotent_ideals(&self) -> ElementSet {
        ElementSet::from_indices(
            self.len(),
            (0..self.len()).filter(|&i| self.ideals[i].is_subset(self.base.idempotents())),
        )
    }
}

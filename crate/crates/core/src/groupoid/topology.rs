use std::collections::BTreeSet;

use crate::algebra::ElementSet;
use crate::error::{Error, Result};

/// A topology on finitely many points.
///
/// Every finite topology is determined by the smallest open neighbourhood of
/// each point, so that is what is stored. The basis it was generated from is
/// kept for export and for checks phrased in terms of basic opens.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteTopology {
    labels: Vec<String>,
    basis: Vec<ElementSet>,
    nbhd: Vec<ElementSet>,
}

impl FiniteTopology {
    /// The topology generated by `basis`: all unions of finite intersections
    /// of basis sets, together with the whole space.
    pub fn new(labels: Vec<String>, basis: Vec<ElementSet>) -> Result<Self> {
        let n = labels.len();
        if let Some(b) = basis.iter().find(|b| b.universe() != n) {
            return Err(Error::PreconditionFailed(format!(
                "basis set over {} points in a space of {n}",
                b.universe()
            )));
        }
        let nbhd = (0..n)
            .map(|x| {
                basis
                    .iter()
                    .filter(|b| b.has(x))
                    .fold(ElementSet::full(n), |mut acc, b| {
                        acc.intersect_with(b);
                        acc
                    })
            })
            .collect();
        Ok(FiniteTopology {
            labels,
            basis,
            nbhd,
        })
    }

    pub fn discrete(labels: Vec<String>) -> Self {
        let n = labels.len();
        let basis: Vec<ElementSet> = (0..n).map(|i| ElementSet::from_indices(n, [i])).collect();
        FiniteTopology {
            nbhd: basis.clone(),
            labels,
            basis,
        }
    }

    pub fn indiscrete(labels: Vec<String>) -> Self {
        let n = labels.len();
        FiniteTopology {
            nbhd: vec![ElementSet::full(n); n],
            labels,
            basis: vec![ElementSet::full(n)],
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, x: usize) -> &str {
        &self.labels[x]
    }

    pub fn basis(&self) -> &[ElementSet] {
        &self.basis
    }

    pub fn full(&self) -> ElementSet {
        ElementSet::full(self.len())
    }

    /// The smallest open set containing `x`.
    pub fn neighbourhood(&self, x: usize) -> &ElementSet {
        &self.nbhd[x]
    }

    pub fn is_open(&self, u: &ElementSet) -> bool {
        u.indices().all(|x| self.nbhd[x].is_subset(u))
    }

    pub fn interior(&self, u: &ElementSet) -> ElementSet {
        ElementSet::from_indices(
            self.len(),
            u.indices().filter(|&x| self.nbhd[x].is_subset(u)),
        )
    }

    pub fn closure(&self, u: &ElementSet) -> ElementSet {
        ElementSet::from_indices(
            self.len(),
            (0..self.len()).filter(|&x| self.nbhd[x].intersects(u)),
        )
    }

    pub fn is_t0(&self) -> bool {
        (0..self.len()).all(|x| (0..x).all(|y| !(self.nbhd[x].has(y) && self.nbhd[y].has(x))))
    }

    /// On finitely many points T1 is the same as discrete.
    pub fn is_t1(&self) -> bool {
        self.nbhd.iter().all(|n| n.len() == 1)
    }

    /// Same open sets, possibly from different bases.
    pub fn same_opens(&self, other: &FiniteTopology) -> bool {
        self.nbhd == other.nbhd
    }

    /// Every open set, by closing the minimal neighbourhoods under union.
    pub fn opens(&self, cap: usize) -> Result<Vec<ElementSet>> {
        let n = self.len();
        let mut seen: BTreeSet<ElementSet> = BTreeSet::from([ElementSet::empty(n)]);
        let mut frontier = vec![ElementSet::empty(n)];
        while let Some(u) = frontier.pop() {
            for x in (0..n).filter(|&x| !u.has(x)) {
                let v = u.union(&self.nbhd[x]);
                if seen.insert(v.clone()) {
                    if seen.len() > cap {
                        return Err(Error::size("open sets", seen.len(), cap));
                    }
                    frontier.push(v);
                }
            }
        }
        let mut out: Vec<ElementSet> = seen.into_iter().collect();
        out.sort_by_key(|u| (u.len(), u.clone()));
        Ok(out)
    }

    /// The subspace on `points`, with the indices of the kept points.
    pub fn subspace(&self, points: &ElementSet) -> (FiniteTopology, Vec<usize>) {
        let keep: Vec<usize> = points.indices().collect();
        let mut local = vec![usize::MAX; self.len()];
        for (i, &x) in keep.iter().enumerate() {
            local[x] = i;
        }
        let restrict = |u: &ElementSet| {
            ElementSet::from_indices(
                keep.len(),
                u.indices().filter(|&y| points.has(y)).map(|y| local[y]),
            )
        };
        let nbhd: Vec<ElementSet> = keep.iter().map(|&x| restrict(&self.nbhd[x])).collect();
        let labels = keep.iter().map(|&x| self.labels[x].clone()).collect();
        let basis = self.basis.iter().map(restrict).collect();
        (
            FiniteTopology {
                labels,
                basis,
                nbhd,
            },
            keep,
        )
    }

    pub fn image(&self, f: &[usize], u: &ElementSet, target: &FiniteTopology) -> ElementSet {
        ElementSet::from_indices(target.len(), u.indices().map(|x| f[x]))
    }
}

/// `f(N(x)) ⊆ N(f(x))` for every x.
pub fn is_continuous(f: &[usize], dom: &FiniteTopology, cod: &FiniteTopology) -> bool {
    (0..dom.len()).all(|x| {
        dom.image(f, dom.neighbourhood(x), cod)
            .is_subset(cod.neighbourhood(f[x]))
    })
}

/// Images of the minimal neighbourhoods are open; they generate every open.
pub fn is_open_map(f: &[usize], dom: &FiniteTopology, cod: &FiniteTopology) -> bool {
    (0..dom.len()).all(|x| cod.is_open(&dom.image(f, dom.neighbourhood(x), cod)))
}

pub fn is_bijective(f: &[usize], codomain_len: usize) -> bool {
    f.len() == codomain_len
        && ElementSet::from_indices(codomain_len, f.iter().copied()).len() == codomain_len
}

pub fn is_homeomorphism(f: &[usize], dom: &FiniteTopology, cod: &FiniteTopology) -> bool {
    is_bijective(f, cod.len()) && is_continuous(f, dom, cod) && is_open_map(f, dom, cod)
}

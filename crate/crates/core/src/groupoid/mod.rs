//! Finite topological groupoids: groupoids of filters, bisections, spectra,
//! reductions and the tight groupoid.

mod bisections;
mod embedding;
mod filters;
mod subspace;
mod tight;
mod topology;

use crate::algebra::ElementSet;
use crate::error::{Error, Result};

pub use bisections::{
    bisections, eta, is_sober, open_frame, spectrum, Bisections, OpenFrame, Spectrum, BISECTION_CAP,
};
pub use embedding::{
    all_nuclei, nucleus_embedding, nucleus_on_pseudogroup, EmbeddingReport, NucleusEmbedding,
};
pub use filters::{
    check_patch_adequacy, check_principal_products, cp_filter_groupoid, filter_groupoid,
    patch_topology, FilterGroupoid, TopologyKind,
};
pub use subspace::{
    subspace, subspace_from_coverage, subspace_via_spectrum, Subspace, SubspaceRoute,
};
pub use tight::{
    check_tight_lemmas, tau_e, tight_filters, tight_filters_as_subspace, tight_filters_by_closure,
    tight_frame_iso, tight_groupoid, tight_nucleus_direct, TightFrameIso, TightGroupoid,
    TightSpace,
};
pub use topology::{is_bijective, is_continuous, is_homeomorphism, is_open_map, FiniteTopology};

/// Default cap on enumerated open sets. The frame of opens stores a full
/// multiplication table, so memory grows with the square of this.
pub const OPEN_SET_CAP: usize = 1 << 10;

/// A groupoid on finitely many arrows with a topology on the arrows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroupoid {
    labels: Vec<String>,
    units: ElementSet,
    d: Vec<usize>,
    r: Vec<usize>,
    inv: Vec<usize>,
    mul: Vec<Option<usize>>,
    topology: FiniteTopology,
}

fn axiom(name: &str, witness: String) -> Error {
    Error::GroupoidAxiom {
        axiom: name.into(),
        witness,
    }
}

impl FiniteGroupoid {
    /// Builds a groupoid from its structure maps and checks the axioms.
    /// `mul[f * n + g]` is `fg` when defined.
    pub fn new(
        labels: Vec<String>,
        d: Vec<usize>,
        r: Vec<usize>,
        inv: Vec<usize>,
        mul: Vec<Option<usize>>,
        topology: FiniteTopology,
    ) -> Result<Self> {
        let n = labels.len();
        if d.len() != n
            || r.len() != n
            || inv.len() != n
            || mul.len() != n * n
            || topology.len() != n
        {
            return Err(axiom("shape", format!("{n} arrows")));
        }
        if d.iter()
            .chain(&r)
            .chain(&inv)
            .chain(mul.iter().flatten())
            .any(|&x| x >= n)
        {
            return Err(axiom("shape", "index out of range".into()));
        }
        let units = ElementSet::from_indices(n, d.iter().copied());
        let g = FiniteGroupoid {
            labels,
            units,
            d,
            r,
            inv,
            mul,
            topology,
        };
        g.check_axioms()?;
        Ok(g)
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

    pub fn label(&self, g: usize) -> &str {
        &self.labels[g]
    }

    pub fn units(&self) -> &ElementSet {
        &self.units
    }

    pub fn d(&self, g: usize) -> usize {
        self.d[g]
    }

    pub fn r(&self, g: usize) -> usize {
        self.r[g]
    }

    pub fn inv(&self, g: usize) -> usize {
        self.inv[g]
    }

    pub fn compose(&self, f: usize, g: usize) -> Option<usize> {
        self.mul[f * self.len() + g]
    }

    pub fn topology(&self) -> &FiniteTopology {
        &self.topology
    }

    pub fn arrows(&self) -> std::ops::Range<usize> {
        0..self.len()
    }

    pub fn composable_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.arrows().flat_map(move |f| {
            self.arrows()
                .filter(move |&g| self.compose(f, g).is_some())
                .map(move |g| (f, g))
        })
    }

    pub fn check_axioms(&self) -> Result<()> {
        let name = |g: usize| self.labels[g].clone();
        for g in self.arrows() {
            if self.inv[self.inv[g]] != g {
                return Err(axiom("inverse is an involution", name(g)));
            }
            if self.compose(self.inv[g], g) != Some(self.d[g]) {
                return Err(axiom("d(g) = g⁻¹g", name(g)));
            }
            if self.compose(g, self.inv[g]) != Some(self.r[g]) {
                return Err(axiom("r(g) = gg⁻¹", name(g)));
            }
            if self.compose(self.r[g], g) != Some(g) || self.compose(g, self.d[g]) != Some(g) {
                return Err(axiom("units act trivially", name(g)));
            }
        }
        for u in self.units.indices() {
            if self.d[u] != u || self.r[u] != u {
                return Err(axiom("units are their own domain", name(u)));
            }
        }
        for f in self.arrows() {
            for g in self.arrows() {
                let composable = self.d[f] == self.r[g];
                match self.compose(f, g) {
                    Some(_) if !composable => {
                        return Err(axiom(
                            "composable iff d(f) = r(g)",
                            format!("{},{}", name(f), name(g)),
                        ))
                    }
                    None if composable => {
                        return Err(axiom(
                            "composable iff d(f) = r(g)",
                            format!("{},{}", name(f), name(g)),
                        ))
                    }
                    Some(fg) if self.r[fg] != self.r[f] || self.d[fg] != self.d[g] => {
                        return Err(axiom(
                            "d and r of a product",
                            format!("{},{}", name(f), name(g)),
                        ));
                    }
                    _ => {}
                }
            }
        }
        for (f, g) in self.composable_pairs() {
            let fg = self.compose(f, g).expect("composable");
            for h in self.arrows().filter(|&h| self.d[g] == self.r[h]) {
                let gh = self.compose(g, h).expect("composable");
                if self.compose(fg, h) != self.compose(f, gh) {
                    return Err(axiom(
                        "associativity",
                        format!("{},{},{}", name(f), name(g), name(h)),
                    ));
                }
            }
        }
        Ok(())
    }

    /// Inversion and multiplication are continuous.
    pub fn check_continuity(&self) -> Result<()> {
        let t = &self.topology;
        if !is_continuous(&self.inv, t, t) {
            return Err(axiom("inversion is continuous", String::new()));
        }
        for (f, g) in self.composable_pairs() {
            let fg = self.compose(f, g).expect("composable");
            for f2 in t.neighbourhood(f).indices() {
                for g2 in t.neighbourhood(g).indices() {
                    if let Some(h) = self.compose(f2, g2) {
                        if !t.neighbourhood(fg).has(h) {
                            return Err(axiom(
                                "multiplication is continuous",
                                format!("{},{}", self.labels[f], self.labels[g]),
                            ));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Units are open and `d` maps `N(g)` injectively onto `N(d(g))` inside
    /// the unit space, for every arrow. With continuity of `d` this makes `d`
    /// a local homeomorphism; `r = d∘inv` follows.
    pub fn check_etale(&self) -> Result<()> {
        self.check_continuity()?;
        let t = &self.topology;
        if !t.is_open(&self.units) {
            return Err(Error::NotEtale("the unit space is not open".into()));
        }
        for g in self.arrows() {
            let n = t.neighbourhood(g);
            let image = ElementSet::from_indices(self.len(), n.indices().map(|h| self.d[h]));
            if image.len() != n.len() {
                return Err(Error::NotEtale(format!(
                    "d is not injective near {}",
                    self.labels[g]
                )));
            }
            if image != t.neighbourhood(self.d[g]).intersection(&self.units) {
                return Err(Error::NotEtale(format!(
                    "d is not open near {}",
                    self.labels[g]
                )));
            }
        }
        Ok(())
    }

    pub fn is_etale(&self) -> bool {
        self.check_etale().is_ok()
    }

    /// Open, with `d` and `r` injective on it.
    pub fn is_bisection(&self, set: &ElementSet) -> bool {
        let ds = ElementSet::from_indices(self.len(), set.indices().map(|g| self.d[g]));
        let rs = ElementSet::from_indices(self.len(), set.indices().map(|g| self.r[g]));
        ds.len() == set.len() && rs.len() == set.len() && self.topology.is_open(set)
    }

    /// The arrows whose domain and range lie in `units`, with their indices
    /// in `self`.
    pub fn reduce(&self, units: &ElementSet) -> (FiniteGroupoid, Vec<usize>) {
        let keep_set = ElementSet::from_indices(
            self.len(),
            self.arrows()
                .filter(|&g| units.has(self.d[g]) && units.has(self.r[g])),
        );
        let (topology, keep) = self.topology.subspace(&keep_set);
        let mut local = vec![usize::MAX; self.len()];
        for (i, &g) in keep.iter().enumerate() {
            local[g] = i;
        }
        let m = keep.len();
        let mut mul = vec![None; m * m];
        for (i, &f) in keep.iter().enumerate() {
            for (j, &g) in keep.iter().enumerate() {
                mul[i * m + j] = self.compose(f, g).map(|h| local[h]);
            }
        }
        let pick = |v: &[usize]| keep.iter().map(|&g| local[v[g]]).collect::<Vec<_>>();
        let reduced = FiniteGroupoid {
            labels: keep.iter().map(|&g| self.labels[g].clone()).collect(),
            units: ElementSet::from_indices(
                m,
                keep.iter()
                    .enumerate()
                    .filter(|(_, &g)| self.units.has(g))
                    .map(|(i, _)| i),
            ),
            d: pick(&self.d),
            r: pick(&self.r),
            inv: pick(&self.inv),
            mul,
            topology,
        };
        (reduced, keep)
    }

    /// The unit groupoid of a space: every point is a unit.
    pub fn from_space(topology: FiniteTopology) -> Self {
        let n = topology.len();
        let ids: Vec<usize> = (0..n).collect();
        let mut mul = vec![None; n * n];
        for i in 0..n {
            mul[i * n + i] = Some(i);
        }
        FiniteGroupoid {
            labels: topology.labels().to_vec(),
            units: ElementSet::full(n),
            d: ids.clone(),
            r: ids.clone(),
            inv: ids,
            mul,
            topology,
        }
    }

    /// The pair groupoid `X × X` on n points with the discrete topology.
    /// Arrow `(i, j)` has index `i·n + j`, range `(i, i)` and domain `(j, j)`.
    pub fn pair(n: usize) -> Self {
        let m = n * n;
        let idx = |i: usize, j: usize| i * n + j;
        let labels = (0..n)
            .flat_map(|i| (0..n).map(move |j| format!("({i},{j})")))
            .collect();
        let mut mul = vec![None; m * m];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    mul[idx(i, j) * m + idx(j, k)] = Some(idx(i, k));
                }
            }
        }
        FiniteGroupoid {
            topology: FiniteTopology::discrete(labels),
            labels: (0..n)
                .flat_map(|i| (0..n).map(move |j| format!("({i},{j})")))
                .collect(),
            units: ElementSet::from_indices(m, (0..n).map(|i| idx(i, i))),
            d: (0..m).map(|a| idx(a % n, a % n)).collect(),
            r: (0..m).map(|a| idx(a / n, a / n)).collect(),
            inv: (0..m).map(|a| idx(a % n, a / n)).collect(),
            mul,
        }
    }
}

/// An isomorphism of topological groupoids `g → h` as an arrow map, found by
/// backtracking over arrows with matching local invariants.
pub fn find_isomorphism(g: &FiniteGroupoid, h: &FiniteGroupoid) -> Option<Vec<usize>> {
    if g.len() != h.len() || g.units.len() != h.units.len() {
        return None;
    }
    let signature = |x: &FiniteGroupoid, a: usize| {
        let loops = x
            .arrows()
            .filter(|&b| x.d[b] == x.d[a] && x.r[b] == x.r[a])
            .count();
        let out = x.arrows().filter(|&b| x.d[b] == x.d[a]).count();
        (
            x.units.has(a),
            x.d[a] == x.r[a],
            loops,
            out,
            x.topology.neighbourhood(a).len(),
        )
    };
    let sig_g: Vec<_> = g.arrows().map(|a| signature(g, a)).collect();
    let sig_h: Vec<_> = h.arrows().map(|a| signature(h, a)).collect();
    let mut map = vec![usize::MAX; g.len()];
    let mut used = vec![false; h.len()];

    fn consistent(g: &FiniteGroupoid, h: &FiniteGroupoid, map: &[usize], a: usize) -> bool {
        let img = |x: usize| (map[x] != usize::MAX).then_some(map[x]);
        let check = |x: usize, y: usize| img(x).map_or(true, |v| v == y);
        let fa = map[a];
        if !check(g.inv[a], h.inv[fa]) || !check(g.d[a], h.d[fa]) || !check(g.r[a], h.r[fa]) {
            return false;
        }
        g.arrows().all(|b| {
            let Some(fb) = img(b) else { return true };
            let ab = g.compose(a, b);
            let ba = g.compose(b, a);
            ab.is_some() == h.compose(fa, fb).is_some()
                && ba.is_some() == h.compose(fb, fa).is_some()
                && ab.map_or(true, |x| check(x, h.compose(fa, fb).expect("composable")))
                && ba.map_or(true, |x| check(x, h.compose(fb, fa).expect("composable")))
        })
    }

    fn go(
        a: usize,
        g: &FiniteGroupoid,
        h: &FiniteGroupoid,
        sig_g: &[(bool, bool, usize, usize, usize)],
        sig_h: &[(bool, bool, usize, usize, usize)],
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> bool {
        if a == g.len() {
            let mut all_ok = true;
            for x in g.arrows() {
                for y in g.arrows() {
                    let lhs = g.compose(x, y).map(|z| map[z]);
                    if lhs != h.compose(map[x], map[y]) {
                        all_ok = false;
                    }
                }
            }
            return all_ok && is_homeomorphism(map, &g.topology, &h.topology);
        }
        for b in h.arrows() {
            if used[b] || sig_g[a] != sig_h[b] {
                continue;
            }
            map[a] = b;
            used[b] = true;
            if consistent(g, h, map, a) && go(a + 1, g, h, sig_g, sig_h, map, used) {
                return true;
            }
            used[b] = false;
            map[a] = usize::MAX;
        }
        false
    }

    go(0, g, h, &sig_g, &sig_h, &mut map, &mut used).then_some(map)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_groupoid_is_etale() {
        for n in 1..4 {
            let g = FiniteGroupoid::pair(n);
            g.check_axioms().unwrap();
            g.check_etale().unwrap();
            assert_eq!(g.units().len(), n);
            assert_eq!(g.composable_pairs().count(), n * n * n);
        }
    }

    #[test]
    fn reductions() {
        let g = FiniteGroupoid::pair(3);
        let (all, _) = g.reduce(g.units());
        assert_eq!(all, g);
        let (none, keep) = g.reduce(&ElementSet::empty(9));
        assert!(none.is_empty() && keep.is_empty());
        let two = ElementSet::from_indices(9, [0, 4]);
        let (r, keep) = g.reduce(&two);
        assert_eq!(keep, [0, 1, 3, 4]);
        r.check_axioms().unwrap();
        assert!(find_isomorphism(&r, &FiniteGroupoid::pair(2)).is_some());
    }

    #[test]
    fn axiom_violation_detected() {
        let g = FiniteGroupoid::pair(2);
        let mut mul = g.mul.clone();
        mul[0] = None;
        let err = FiniteGroupoid::new(
            g.labels.clone(),
            g.d.clone(),
            g.r.clone(),
            g.inv.clone(),
            mul,
            g.topology.clone(),
        );
        assert!(matches!(err, Err(Error::GroupoidAxiom { .. })));
    }

    #[test]
    fn non_etale() {
        // Pair groupoid on 2 points where all arrows share one neighbourhood.
        let g = FiniteGroupoid::pair(2);
        let t = FiniteTopology::indiscrete(g.labels.clone());
        let bad = FiniteGroupoid::new(
            g.labels.clone(),
            g.d.clone(),
            g.r.clone(),
            g.inv.clone(),
            g.mul.clone(),
            t,
        )
        .unwrap();
        assert!(matches!(bad.check_etale(), Err(Error::NotEtale(_))));
    }

    #[test]
    fn isomorphism_respects_topology() {
        let labels = vec!["x".to_string(), "y".to_string()];
        let sierpinski =
            FiniteTopology::new(labels.clone(), vec![ElementSet::from_indices(2, [0])]).unwrap();
        let a = FiniteGroupoid::from_space(sierpinski);
        let b = FiniteGroupoid::from_space(FiniteTopology::discrete(labels));
        assert!(find_isomorphism(&a, &b).is_none());
        assert_eq!(find_isomorphism(&a, &a), Some(vec![0, 1]));
    }
}

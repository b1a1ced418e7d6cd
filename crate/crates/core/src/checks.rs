//! Named property suites for reports. Each check is run on the concrete
//! input and either passes or carries the first witness of failure.

use std::sync::Arc;

use serde::Serialize;

use crate::algebra::{subsets_of, ElementSet, FiniteInverseSemigroup};
use crate::coverage::{check_axioms, Coverage};
use crate::error::{Error, Result};
use crate::filters::{
    check_germ_lemma, check_nucleus_germ_lemma, enumerate_filters, is_filter_set, GermReport,
};
use crate::groupoid::{
    check_patch_adequacy, check_principal_products, check_tight_lemmas, filter_groupoid,
    tight_filters, tight_filters_by_closure, TopologyKind,
};
use crate::pseudogroup::{close_ideal, universal_pseudogroup};

/// Largest universe for the subset-scanning checks.
const SCAN_BITS: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct CheckSummary {
    pub results: Vec<CheckResult>,
}

impl CheckSummary {
    pub fn all_passed(&self) -> bool {
        self.results.iter().all(|r| r.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.results.iter().filter(|r| !r.passed)
    }

    fn push(&mut self, name: &str, outcome: Result<()>) {
        let witness = outcome.err().map(|e| e.to_string());
        self.results.push(CheckResult {
            name: name.to_string(),
            passed: witness.is_none(),
            witness,
        });
    }

    /// One line per clause, passing unless some failure names it.
    fn push_germ(&mut self, clauses: &[&str], report: &GermReport) {
        for clause in clauses {
            let witness = report
                .failures
                .iter()
                .find(|f| f.starts_with(&format!("{clause}:")))
                .cloned();
            self.results.push(CheckResult {
                name: clause.to_string(),
                passed: witness.is_none(),
                witness,
            });
        }
    }

    pub fn extend(&mut self, other: CheckSummary) {
        self.results.extend(other.results);
    }
}

const GERM_CLAUSES: [&str; 6] = [
    "germ-lemma(i)",
    "germ-lemma(ii)",
    "germ-lemma(iii)",
    "germ-lemma(iv)",
    "germ-lemma(v)",
    "germ-remark",
];
const NUCLEUS_GERM_CLAUSES: [&str; 5] = [
    "nucleus-germ(i)",
    "nucleus-germ(ii)",
    "nucleus-germ(iii)",
    "nucleus-germ(iv)",
    "nucleus-germ(v)",
];

fn filters_match_definition(s: &FiniteInverseSemigroup) -> Result<()> {
    let universe = s.full_set();
    let scan = subsets_of(&universe, SCAN_BITS)
        .ok_or_else(|| Error::size("filter scan (bits)", s.len(), SCAN_BITS))?;
    let mut oracle: Vec<ElementSet> = scan.filter(|x| is_filter_set(s, x, &universe)).collect();
    let mut fast: Vec<ElementSet> = enumerate_filters(s)
        .filters
        .into_iter()
        .map(|f| f.carrier)
        .collect();
    oracle.sort();
    fast.sort();
    if oracle != fast {
        return Err(Error::property(
            "filters are the principal up-sets",
            format!("{} vs {}", fast.len(), oracle.len()),
        ));
    }
    Ok(())
}

/// Checks that depend only on the semigroup.
pub fn semigroup_suite(s: &Arc<FiniteInverseSemigroup>) -> CheckSummary {
    let mut out = CheckSummary::default();
    if s.len() <= SCAN_BITS {
        out.push("filters-by-definition", filters_match_definition(s));
    }
    out.push_germ(&GERM_CLAUSES, &check_germ_lemma(s));
    if s.zero().is_none() {
        return out;
    }
    for kind in [TopologyKind::TauS, TopologyKind::Patch] {
        let fg = filter_groupoid(s.clone(), kind, false);
        let name = format!("filter-groupoid-etale({kind})");
        out.push(
            &name,
            fg.as_ref()
                .map_err(Clone::clone)
                .and_then(|fg| fg.groupoid.check_etale()),
        );
        if let (TopologyKind::Patch, Ok(fg)) = (kind, &fg) {
            out.push("principal-product", check_principal_products(fg));
            out.push("patch-adequacy", check_patch_adequacy(fg));
        }
    }
    out.push(
        "tight-filters-by-closure",
        tight_filters(s).and_then(|a| {
            let b = tight_filters_by_closure(s)?;
            let (mut x, mut y) = (a.minima(), b.minima());
            x.sort();
            y.sort();
            if x == y {
                Ok(())
            } else {
                Err(Error::property(
                    "tight filters are the patch closure of the ultrafilters",
                    s.fmt_set(&ElementSet::from_ids(s.len(), y)),
                ))
            }
        }),
    );
    let e = if s.is_semilattice() {
        s.clone()
    } else {
        s.idempotent_semilattice().semigroup
    };
    out.push("tight-lemmas", check_tight_lemmas(e));
    out
}

/// `close_ideal` against the intersection of every closed down-set that
/// contains the input.
fn closure_matches_intersection(cov: &Coverage) -> Result<()> {
    let s = cov.base();
    let scan = subsets_of(&s.full_set(), SCAN_BITS)
        .ok_or_else(|| Error::size("closure scan (bits)", s.len(), SCAN_BITS))?;
    let zero = s.zero();
    let closed: Vec<ElementSet> = scan
        .filter(|x| {
            s.is_down_closed(x) && zero.map_or(true, |z| x.contains(z)) && cov.is_closed_set(x)
        })
        .collect();
    for i in subsets_of(&s.full_set(), SCAN_BITS)
        .expect("checked above")
        .filter(|x| s.is_down_closed(x))
    {
        let meet = closed
            .iter()
            .filter(|c| i.is_subset(c))
            .fold(s.full_set(), |acc, c| acc.intersection(c));
        if close_ideal(cov, &i) != meet {
            return Err(Error::property(
                "closure is the least closed ideal",
                s.fmt_set(&i),
            ));
        }
    }
    Ok(())
}

/// Checks on a coverage and everything built from it.
pub fn coverage_suite(cov: &Coverage) -> CheckSummary {
    let mut out = CheckSummary::default();
    out.push(
        "coverage-axioms",
        check_axioms(cov).and_then(|r| match r.failures.iter().find(|(a, _)| a == "coverage") {
            Some((_, w)) => Err(Error::property("closed under translation", w.clone())),
            None => Ok(()),
        }),
    );
    if cov.base().len() <= SCAN_BITS {
        out.push(
            "closure-is-least-closed-ideal",
            closure_matches_intersection(cov),
        );
    }
    match universal_pseudogroup(cov) {
        Ok(up) => {
            out.push("universal-pseudogroup", Ok(()));
            out.push("nucleus-axioms", up.closure.nucleus.check_axioms());
            out.push_germ(
                &NUCLEUS_GERM_CLAUSES,
                &check_nucleus_germ_lemma(&up.quotient),
            );
        }
        Err(e) => out.push("universal-pseudogroup", Err(e)),
    }
    out
}

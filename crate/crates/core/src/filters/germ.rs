use super::{is_filter_set, PrincipalFilter};
use crate::algebra::{ElementId, ElementSet, FiniteInverseSemigroup};
use crate::error::{Error, Result};
use crate::pseudogroup::{is_pseudogroup, Quotient};

/// `{t | tt⁻¹ ∈ F and ft = fs for some f ∈ F}`, scanned straight from the
/// definition. `f` is a filter in `E(S)`.
pub fn germ_set(s: &FiniteInverseSemigroup, f: &PrincipalFilter, x: ElementId) -> ElementSet {
    ElementSet::from_ids(
        s.len(),
        s.elements()
            .filter(|&t| f.contains(s.ran(t)))
            .filter(|&t| f.carrier.iter().any(|e| s.mul(e, t) == s.mul(e, x))),
    )
}

/// The germ of `x` at `f`, as a filter of S.
pub fn germ(
    s: &FiniteInverseSemigroup,
    f: &PrincipalFilter,
    x: ElementId,
) -> Result<PrincipalFilter> {
    if !f.contains(s.ran(x)) {
        return Err(Error::DomainMismatch {
            element: s.name(x).to_string(),
            detail: format!(
                "{} is not in the filter {}",
                s.name(s.ran(x)),
                s.fmt_set(&f.carrier)
            ),
        });
    }
    let carrier = germ_set(s, f, x);
    PrincipalFilter::from_carrier(s, carrier.clone())
        .ok_or_else(|| Error::property("germ has a minimum", s.fmt_set(&carrier)))
}

/// `F_A = ν⁻¹(↑(A·A⁻¹) ∩ E(S_ν))` for a filter `A` of `S_ν`.
pub fn filter_from_germ_data(q: &Quotient, a: &PrincipalFilter) -> Result<PrincipalFilter> {
    let t = &q.semigroup;
    let base = q.base();
    let r = t.ran(a.min);
    let target = t.up(r).intersection(t.idempotents());
    let carrier = ElementSet::from_ids(
        base.len(),
        base.elements()
            .filter(|x| target.contains(q.project[x.index()])),
    );
    PrincipalFilter::from_carrier(base, carrier.clone())
        .ok_or_else(|| Error::property("F_A has a minimum", base.fmt_set(&carrier)))
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GermReport {
    /// Number of `(F, s)` or `(A, a)` pairs examined.
    pub pairs: usize,
    /// Failed clauses, e.g. `germ-lemma(iv): F=↑e1, s=t12`.
    pub failures: Vec<String>,
}

impl GermReport {
    pub fn is_ok(&self) -> bool {
        self.failures.is_empty()
    }

    fn fail(&mut self, clause: &str, detail: String) {
        self.failures.push(format!("{clause}: {detail}"));
    }
}

/// `↑m` is completely prime on the down-closed universe when `m` is not the
/// join of what lies strictly below it.
fn join_irreducible(s: &FiniteInverseSemigroup, m: ElementId) -> bool {
    let mut below = s.down(m).clone();
    below.remove(m);
    s.join(&below) != Some(m)
}

/// Every clause of the germ lemma for every filter `F` of `E(S)` and every
/// `s` with `ss⁻¹ ∈ F`, plus the converse: `germ_F a = A` when
/// `F = ↑(AA⁻¹) ∩ E(S)` and `a ∈ A`.
pub fn check_germ_lemma(s: &FiniteInverseSemigroup) -> GermReport {
    let mut report = GermReport::default();
    let e = s.idempotents();
    let pseudo = is_pseudogroup(s);
    for m in e.iter().filter(|&m| super::is_proper_in(s, m, e)) {
        let f = PrincipalFilter::up_in(s, m, e);
        let f_name = format!("F=↑{}", s.name(m));
        for x in s.elements().filter(|&x| f.contains(s.ran(x))) {
            report.pairs += 1;
            let at = format!("{f_name}, s={}", s.name(x));
            let g = germ_set(s, &f, x);
            if let Some(y) = f.carrier.iter().find(|&y| !g.contains(s.mul(y, x))) {
                report.fail("germ-lemma(i)", format!("{at}, f={}", s.name(y)));
            }
            let rans = ElementSet::from_ids(s.len(), g.iter().map(|t| s.ran(t)));
            if s.up_set(&rans).intersection(e) != f.carrier {
                report.fail("germ-lemma(ii)", at.clone());
            }
            if !is_filter_set(s, &g, &s.full_set()) {
                report.fail("germ-lemma(iii)", format!("{at}, germ={}", s.fmt_set(&g)));
                continue;
            }
            if let Some(r) = g.iter().find(|&r| germ_set(s, &f, r) != g) {
                report.fail("germ-lemma(iv)", format!("{at}, r={}", s.name(r)));
            }
            if pseudo && join_irreducible(s, m) {
                let min = s.minimum(&g).expect("finite filters are principal");
                if !join_irreducible(s, min) {
                    report.fail("germ-lemma(v)", at);
                }
            }
        }
    }
    for min in s
        .elements()
        .filter(|&m| super::is_proper_in(s, m, &s.full_set()))
    {
        let a = s.up(min);
        let f = PrincipalFilter::up_in(s, s.ran(min), e);
        for x in a.iter() {
            report.pairs += 1;
            if germ_set(s, &f, x) != *a {
                report.fail(
                    "germ-remark",
                    format!("A=↑{}, a={}", s.name(min), s.name(x)),
                );
            }
        }
    }
    report
}

/// The nucleus form of the germ lemma, for every filter `A` of `S_ν` and
/// every `a ∈ A`: `F_A` is a filter of `E(S)`, `germ_{F_A} a` is a filter
/// independent of `a`, membership of `x` matches that of `ν(x)`, the germ is
/// `ν⁻¹(A)`, and it is completely prime when A is on a pseudogroup.
pub fn check_nucleus_germ_lemma(q: &Quotient) -> GermReport {
    let mut report = GermReport::default();
    let s = q.base();
    let t = &q.semigroup;
    let e = s.idempotents();
    let pseudo = is_pseudogroup(s) && is_pseudogroup(t);
    for min in t
        .elements()
        .filter(|&m| super::is_proper_in(t, m, &t.full_set()))
    {
        let a = PrincipalFilter::up(t, min);
        let a_name = format!("A=↑{}", t.name(min));
        let f = match filter_from_germ_data(q, &a) {
            Ok(f) if is_filter_set(s, &f.carrier, e) => f,
            _ => {
                report.fail("nucleus-germ(i)", a_name);
                continue;
            }
        };
        let preimage = ElementSet::from_ids(
            s.len(),
            s.elements().filter(|x| a.contains(q.project[x.index()])),
        );
        let mut first: Option<ElementSet> = None;
        for x in a.carrier.iter().map(|x| q.embed[x.index()]) {
            report.pairs += 1;
            let at = format!("{a_name}, a={}", s.name(x));
            let g = germ_set(s, &f, x);
            if !is_filter_set(s, &g, &s.full_set()) || first.as_ref().is_some_and(|h| *h != g) {
                report.fail("nucleus-germ(ii)", at.clone());
            }
            first.get_or_insert_with(|| g.clone());
            let nu = |y: ElementId| q.embed[q.project[y.index()].index()];
            if let Some(y) = s.elements().find(|&y| g.contains(y) != g.contains(nu(y))) {
                report.fail("nucleus-germ(iii)", format!("{at}, x={}", s.name(y)));
            }
            if g != preimage {
                report.fail("nucleus-germ(iv)", at.clone());
            }
            if pseudo && join_irreducible(t, min) {
                if let Some(m) = s.minimum(&g) {
                    if !join_irreducible(s, m) {
                        report.fail("nucleus-germ(v)", at);
                    }
                }
            }
        }
    }
    report
}

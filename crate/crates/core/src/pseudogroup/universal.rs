use std::sync::Arc;

use super::nucleus::{nucleus_on_ideals, CoverageNucleus, Quotient};
use super::{IdealSemigroup, Pseudogroup};
use crate::algebra::{
    subsets_of, ElementId, ElementSet, FiniteInverseSemigroup, SemigroupMap, Subsemigroup,
};
use crate::coverage::{is_cover_to_join, Coverage, JOIN_COVER_BITS};
use crate::error::{Error, Result};

/// Exhaustive uniqueness search runs when `|T|^k` stays below this, where `k`
/// is the number of elements of `P_C(S)` outside `π(S)`.
pub const UNIQUENESS_SEARCH_CAP: u64 = 1 << 22;

/// Largest `P_C(S)` for which uniqueness is checked by search.
pub const UNIQUENESS_SEARCH_MAX_ELEMENTS: usize = 64;

/// `P_C(S)`: the C-closed compatible order ideals of S with product
/// `I·J = ν(IJ)`, together with `π: S → P_C(S)`.
#[derive(Debug, Clone)]
pub struct UniversalPseudogroup {
    pub coverage: Coverage,
    pub closure: CoverageNucleus,
    pub quotient: Quotient,
    pub pseudogroup: Pseudogroup,
    /// `a ↦ ν(↓a)`.
    pub pi: SemigroupMap,
}

impl UniversalPseudogroup {
    pub fn semigroup(&self) -> &Arc<FiniteInverseSemigroup> {
        &self.quotient.semigroup
    }

    pub fn len(&self) -> usize {
        self.semigroup().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// The ideal of S that an element of `P_C(S)` stands for.
    pub fn ideal(&self, p: ElementId) -> &ElementSet {
        self.closure.ideals.ideal(self.quotient.embed[p.index()])
    }

    pub fn id_of_ideal(&self, ideal: &ElementSet) -> Option<ElementId> {
        let c = self.closure.ideals.id_of(ideal)?;
        let q = self.quotient.project[c.index()];
        (self.quotient.embed[q.index()] == c).then_some(q)
    }

    /// Ideals as sorted name lists, in element order.
    pub fn ideal_names(&self) -> Vec<Vec<String>> {
        let base = self.coverage.base();
        self.semigroup()
            .elements()
            .map(|p| base.sorted_names(self.ideal(p)))
            .collect()
    }
}

pub fn universal_pseudogroup(cov: &Coverage) -> Result<UniversalPseudogroup> {
    let ideals = IdealSemigroup::build(cov.base_arc().clone())?;
    universal_from_ideals(cov, ideals)
}

fn universal_from_ideals(cov: &Coverage, ideals: IdealSemigroup) -> Result<UniversalPseudogroup> {
    let closure = nucleus_on_ideals(cov, ideals)?;
    let quotient = closure.nucleus.quotient()?;
    let pseudogroup = Pseudogroup::new(quotient.semigroup.clone())?;
    let s = cov.base_arc();
    let images = s
        .elements()
        .map(|a| quotient.project[closure.ideals.principal(a).index()])
        .collect();
    let pi = SemigroupMap::new(s.clone(), quotient.semigroup.clone(), images)?;
    let up = UniversalPseudogroup {
        coverage: cov.clone(),
        closure,
        quotient,
        pseudogroup,
        pi,
    };
    check_universal(&up)?;
    Ok(up)
}

/// π is a cover-to-join, idempotent-pure homomorphism, the elements of
/// `P_C(S)` are exactly the closed compatible ideals, and each is the join of
/// the π-images of its members.
fn check_universal(up: &UniversalPseudogroup) -> Result<()> {
    let report = is_cover_to_join(&up.pi, &up.coverage, &up.pseudogroup)?;
    if !report.cover_to_join {
        return Err(Error::property(
            "pi is cover-to-join",
            report.witness.unwrap_or_default(),
        ));
    }
    if !report.idempotent_pure {
        return Err(Error::property("pi is idempotent-pure", ""));
    }
    let s = up.coverage.base();
    for (i, ideal) in up.closure.ideals.ideals().iter().enumerate() {
        let fixed = up.closure.nucleus.apply(ElementId::new(i)).index() == i;
        if fixed != up.coverage.is_closed_set(ideal) {
            return Err(Error::property(
                "fixed points are the closed ideals",
                s.fmt_set(ideal),
            ));
        }
    }
    let p = up.semigroup();
    for x in p.elements() {
        let images = up.pi.apply_set(up.ideal(x));
        if p.join(&images) != Some(x) {
            return Err(Error::property("join of pi over an ideal", p.name(x)));
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Uniqueness {
    /// Every join-preserving homomorphism agreeing with θ̃ on `π(S)` was
    /// enumerated; `candidates` assignments were explored.
    Exhaustive { candidates: u64 },
    /// Follows from `⋁π(I) = I`, which holds for every element.
    Generation,
}

/// The factorization `θ = θ̃∘π`.
#[derive(Debug, Clone)]
pub struct Factorization {
    pub map: SemigroupMap,
    pub idempotent_pure: bool,
    pub uniqueness: Uniqueness,
}

/// Builds `θ̃(I) = ⋁θ(I)` and checks it is the unique idempotent-pure
/// pseudogroup homomorphism with `θ = θ̃∘π`.
pub fn verify_universal_property(
    up: &UniversalPseudogroup,
    theta: &SemigroupMap,
    target: &Pseudogroup,
) -> Result<Factorization> {
    let report = is_cover_to_join(theta, &up.coverage, target)?;
    if !report.cover_to_join {
        return Err(Error::PreconditionFailed(format!(
            "map is not cover-to-join at {}",
            report.witness.unwrap_or_default()
        )));
    }
    if !report.idempotent_pure {
        return Err(Error::PreconditionFailed(
            "map is not idempotent-pure".into(),
        ));
    }
    let p = up.semigroup();
    let t = target.semigroup();
    let mut images = Vec::with_capacity(p.len());
    for x in p.elements() {
        images.push(target.join(&theta.apply_set(up.ideal(x)))?);
    }
    let map = SemigroupMap::new(p.clone(), target.arc().clone(), images)?;
    map.check_homomorphism()?;
    preserves_joins(&map).map_err(|w| Error::property("factorization preserves joins", w))?;
    for a in up.coverage.base().elements() {
        if map.apply(up.pi.apply(a)) != theta.apply(a) {
            return Err(Error::property(
                "theta = factorization after pi",
                up.coverage.base().name(a),
            ));
        }
    }
    let idempotent_pure = map.is_idempotent_pure();
    if !idempotent_pure {
        return Err(Error::property("factorization is idempotent-pure", ""));
    }

    let fixed = up.pi.apply_set(&up.coverage.base().full_set());
    let free = p.len() - fixed.len();
    let space = (t.len() as u64).checked_pow(free as u32);
    let uniqueness = match space {
        Some(n) if n <= UNIQUENESS_SEARCH_CAP && p.len() <= UNIQUENESS_SEARCH_MAX_ELEMENTS => {
            let (count, explored) = count_extensions(&map, &fixed);
            if count != 1 {
                return Err(Error::property(
                    "factorization is unique",
                    format!("{count} candidates"),
                ));
            }
            Uniqueness::Exhaustive {
                candidates: explored,
            }
        }
        _ => Uniqueness::Generation,
    };
    Ok(Factorization {
        map,
        idempotent_pure,
        uniqueness,
    })
}

fn preserves_joins(map: &SemigroupMap) -> std::result::Result<(), String> {
    let (p, t) = (&map.source, &map.target);
    if let (Some(z), Some(tz)) = (p.zero(), t.zero()) {
        if map.apply(z) != tz {
            return Err("zero".into());
        }
    }
    for a in p.elements() {
        for b in p.elements() {
            if b < a || !p.compatible(a, b) {
                continue;
            }
            let j = p
                .join2(a, b)
                .ok_or_else(|| format!("{} ∨ {}", p.name(a), p.name(b)))?;
            if t.join2(map.apply(a), map.apply(b)) != Some(map.apply(j)) {
                return Err(format!("{} ∨ {}", p.name(a), p.name(b)));
            }
        }
    }
    Ok(())
}

/// Counts join-preserving homomorphisms agreeing with `map` on `fixed`.
fn count_extensions(map: &SemigroupMap, fixed: &ElementSet) -> (u64, u64) {
    let p = &map.source;
    let t = &map.target;
    let free: Vec<ElementId> = p.elements().filter(|x| !fixed.contains(*x)).collect();
    let mut assign: Vec<Option<ElementId>> = p
        .elements()
        .map(|x| fixed.contains(x).then(|| map.apply(x)))
        .collect();
    let mut count = 0;
    let mut explored = 0;

    fn consistent(
        p: &FiniteInverseSemigroup,
        t: &FiniteInverseSemigroup,
        assign: &[Option<ElementId>],
        x: ElementId,
    ) -> bool {
        let fx = assign[x.index()].expect("assigned");
        p.elements().all(|y| {
            let Some(fy) = assign[y.index()] else {
                return true;
            };
            let ok_xy = assign[p.mul(x, y).index()].map_or(true, |v| v == t.mul(fx, fy));
            let ok_yx = assign[p.mul(y, x).index()].map_or(true, |v| v == t.mul(fy, fx));
            ok_xy && ok_yx
        })
    }

    fn go(
        depth: usize,
        free: &[ElementId],
        p: &FiniteInverseSemigroup,
        t: &FiniteInverseSemigroup,
        assign: &mut Vec<Option<ElementId>>,
        count: &mut u64,
        explored: &mut u64,
    ) {
        *explored += 1;
        if depth == free.len() {
            let images = assign.iter().map(|v| v.expect("complete")).collect();
            let candidate = SemigroupMap {
                source: Arc::new(p.clone()),
                target: Arc::new(t.clone()),
                images,
            };
            if preserves_joins(&candidate).is_ok() {
                *count += 1;
            }
            return;
        }
        let x = free[depth];
        for v in t.elements() {
            assign[x.index()] = Some(v);
            // Products among already-assigned elements, including x itself.
            let ok = consistent(p, t, assign, x)
                && p.elements()
                    .all(|y| assign[y.index()].is_none() || consistent(p, t, assign, y));
            if ok {
                go(depth + 1, free, p, t, assign, count, explored);
            }
        }
        assign[x.index()] = None;
    }

    if p.elements()
        .filter(|x| fixed.contains(*x))
        .all(|x| consistent(p, t, &assign, x))
    {
        go(0, &free, p, t, &mut assign, &mut count, &mut explored);
    }
    (count, explored)
}

/// `C′`: for `a ∈ S`, the compatible `X ⊆ S` with `a = ⋁X` in P.
pub fn generated_coverage(p: &Pseudogroup, sub: &Subsemigroup) -> Result<Coverage> {
    let big = p.semigroup();
    if sub.embedding.iter().any(|x| x.index() >= big.len()) {
        return Err(Error::BaseMismatch);
    }
    let members = ElementSet::from_ids(big.len(), sub.embedding.iter().copied());
    for q in big.elements() {
        let below = members.intersection(big.down(q));
        if big.join(&below) != Some(q) {
            return Err(Error::NotGenerating {
                element: big.name(q).to_string(),
            });
        }
    }
    let s = &sub.semigroup;
    let mut cov = Coverage::empty(s.clone());
    for a in s.elements() {
        let down = s.down(a);
        let subsets = subsets_of(down, JOIN_COVER_BITS).ok_or_else(|| {
            Error::size(
                "generated coverage: down-set bits",
                down.len(),
                JOIN_COVER_BITS,
            )
        })?;
        for x in subsets {
            if big.join(&sub.lift_set(&x)) == Some(sub.lift(a)) {
                cov.insert(a, x)?;
            }
        }
    }
    Ok(cov)
}

/// `P_{C′}(S)` and the isomorphism `I ↦ ⋁I` onto P.
#[derive(Debug, Clone)]
pub struct Reconstruction {
    pub universal: UniversalPseudogroup,
    pub iso: SemigroupMap,
}

pub fn reconstruct_from_generators(p: &Pseudogroup, sub: &Subsemigroup) -> Result<Reconstruction> {
    let cov = generated_coverage(p, sub)?;
    let universal = universal_pseudogroup(&cov)?;
    let big = p.semigroup();
    let images = universal
        .semigroup()
        .elements()
        .map(|x| p.join(&sub.lift_set(universal.ideal(x))))
        .collect::<Result<Vec<_>>>()?;
    let iso = SemigroupMap::new(universal.semigroup().clone(), p.arc().clone(), images)?;
    iso.check_homomorphism()?;
    if !iso.is_injective() || !iso.is_surjective() {
        return Err(Error::property(
            "reconstruction is bijective",
            format!("{} vs {}", universal.len(), big.len()),
        ));
    }
    preserves_joins(&iso).map_err(|w| Error::property("reconstruction preserves joins", w))?;
    Ok(Reconstruction { universal, iso })
}

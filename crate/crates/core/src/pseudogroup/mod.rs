//! Pseudogroups, the ideal semigroup C(S), nuclei and the universal
//! pseudogroup of a coverage.

mod ideals;
mod nucleus;
mod universal;

use std::sync::Arc;

use crate::algebra::{ElementId, ElementSet, FiniteInverseSemigroup};
use crate::error::{Error, Result};

pub use ideals::{IdealSemigroup, DEFAULT_IDEAL_CAP};
pub use nucleus::{close_ideal, nucleus_from_coverage, CoverageNucleus, Nucleus, Quotient};
pub use universal::{
    generated_coverage, reconstruct_from_generators, universal_pseudogroup,
    verify_universal_property, Factorization, Reconstruction, UniversalPseudogroup,
    UNIQUENESS_SEARCH_CAP,
};

/// A finite inverse monoid with zero in which compatible joins exist and
/// multiplication distributes over them on both sides.
#[derive(Debug, Clone)]
pub struct Pseudogroup {
    s: Arc<FiniteInverseSemigroup>,
    zero: ElementId,
    identity: ElementId,
}

fn fail(law: &str, witness: String) -> Error {
    Error::NotAPseudogroup {
        law: law.into(),
        witness,
    }
}

/// Checks the pseudogroup laws using pairs only.
///
/// Binary joins of compatible pairs, compatibility of `a ∨ b` with every `c`
/// compatible with both, and binary distributivity together give joins of
/// every finite compatible set and distributivity over them, by induction on
/// the size of the set.
pub fn check_pseudogroup(s: &FiniteInverseSemigroup) -> Result<()> {
    s.zero().ok_or_else(|| fail("zero", "no zero".into()))?;
    s.identity()
        .ok_or_else(|| fail("identity", "no identity".into()))?;
    let n = s.len();
    let mut joins = vec![None; n * n];
    for a in s.elements() {
        for b in s.elements() {
            if b < a || !s.compatible(a, b) {
                continue;
            }
            let j = s.join2(a, b).ok_or_else(|| {
                fail(
                    "compatible join",
                    format!("{{{},{}}}", s.name(a), s.name(b)),
                )
            })?;
            joins[a.index() * n + b.index()] = Some(j);
            joins[b.index() * n + a.index()] = Some(j);
        }
    }
    for a in s.elements() {
        for b in s.elements() {
            let Some(j) = joins[a.index() * n + b.index()] else {
                continue;
            };
            if b <= a {
                continue;
            }
            for x in s.elements() {
                let left = s.join2(s.mul(x, a), s.mul(x, b));
                if left != Some(s.mul(x, j)) {
                    return Err(fail(
                        "left distributivity",
                        format!("{}*({}∨{})", s.name(x), s.name(a), s.name(b)),
                    ));
                }
                let right = s.join2(s.mul(a, x), s.mul(b, x));
                if right != Some(s.mul(j, x)) {
                    return Err(fail(
                        "right distributivity",
                        format!("({}∨{})*{}", s.name(a), s.name(b), s.name(x)),
                    ));
                }
                if s.compatible(x, a) && s.compatible(x, b) && !s.compatible(x, j) {
                    return Err(fail(
                        "join compatibility",
                        format!("{} vs {}∨{}", s.name(x), s.name(a), s.name(b)),
                    ));
                }
            }
        }
    }
    Ok(())
}

/// The definition checked directly over every compatible antichain.
pub fn check_pseudogroup_exhaustive(s: &FiniteInverseSemigroup, cap: usize) -> Result<()> {
    s.zero().ok_or_else(|| fail("zero", "no zero".into()))?;
    s.identity()
        .ok_or_else(|| fail("identity", "no identity".into()))?;
    for a in s.compatible_antichains(&s.full_set(), cap)? {
        let Some(j) = s.join(&a) else {
            return Err(fail("compatible join", s.fmt_set(&a)));
        };
        for x in s.elements() {
            if s.join(&s.left(x, &a)) != Some(s.mul(x, j)) {
                return Err(fail(
                    "left distributivity",
                    format!("{}*⋁{}", s.name(x), s.fmt_set(&a)),
                ));
            }
            if s.join(&s.right(&a, x)) != Some(s.mul(j, x)) {
                return Err(fail(
                    "right distributivity",
                    format!("⋁{}*{}", s.fmt_set(&a), s.name(x)),
                ));
            }
        }
    }
    Ok(())
}

pub fn is_pseudogroup(s: &FiniteInverseSemigroup) -> bool {
    check_pseudogroup(s).is_ok()
}

impl Pseudogroup {
    pub fn new(s: Arc<FiniteInverseSemigroup>) -> Result<Self> {
        check_pseudogroup(&s)?;
        let zero = s.zero().expect("checked");
        let identity = s.identity().expect("checked");
        Ok(Pseudogroup { s, zero, identity })
    }

    pub fn semigroup(&self) -> &FiniteInverseSemigroup {
        &self.s
    }

    pub fn arc(&self) -> &Arc<FiniteInverseSemigroup> {
        &self.s
    }

    pub fn zero(&self) -> ElementId {
        self.zero
    }

    pub fn identity(&self) -> ElementId {
        self.identity
    }

    /// Join of a compatible set.
    pub fn join(&self, a: &ElementSet) -> Result<ElementId> {
        if let Some((x, y)) = self.s.incompatible_pair(a) {
            return Err(Error::PreconditionFailed(format!(
                "{} and {} are not compatible",
                self.s.name(x),
                self.s.name(y)
            )));
        }
        Ok(self
            .s
            .join(a)
            .expect("compatible joins exist in a pseudogroup"))
    }

    /// True when every element is idempotent, so the pseudogroup is a frame.
    pub fn is_frame(&self) -> bool {
        self.s.is_semilattice()
    }

    pub fn check_frame(&self) -> Result<()> {
        if self.is_frame() {
            Ok(())
        } else {
            let x = self
                .s
                .elements()
                .find(|&x| !self.s.is_idempotent(x))
                .expect("non-idempotent");
            Err(Error::NotAFrame(format!(
                "{} is not idempotent",
                self.s.name(x)
            )))
        }
    }
}

//! JSON formats for semigroups, coverages, nuclei and the structures built
//! from them. Exports are canonical: fixed key order, pretty printed, one
//! trailing newline, and every name set sorted.

mod groupoid;

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::{
    validate, ElementId, FiniteInverseSemigroup, SemigroupTable, ValidateOptions,
};
use crate::coverage::{close_coverage, tight_coverage, Coverage};
use crate::error::{Error, Result};
use crate::filters::FilterFamily;
use crate::pseudogroup::{Nucleus, Pseudogroup, UniversalPseudogroup};

pub use groupoid::{groupoid_to_dot, groupoid_to_json, parse_groupoid, GroupoidJson};

fn parse_err(context: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Parse {
        context: context.into(),
        message: message.into(),
    }
}

fn from_json<'a, T: Deserialize<'a>>(what: &str, text: &'a str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| {
        parse_err(
            format!("{what} line {} column {}", e.line(), e.column()),
            e.to_string(),
        )
    })
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut out = serde_json::to_string_pretty(value).expect("plain data serializes");
    out.push('\n');
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SemigroupJson {
    pub elements: Vec<String>,
    pub mul: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub zero: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub identity: Option<String>,
}

impl SemigroupJson {
    pub fn from_semigroup(s: &FiniteInverseSemigroup) -> Self {
        SemigroupJson {
            elements: s.names().to_vec(),
            mul: s
                .elements()
                .map(|a| {
                    s.elements()
                        .map(|b| s.name(s.mul(a, b)).to_string())
                        .collect()
                })
                .collect(),
            zero: s.zero().map(|z| s.name(z).to_string()),
            identity: s.identity().map(|u| s.name(u).to_string()),
        }
    }

    /// Resolves names into a table; shape and axioms are left to `validate`.
    pub fn to_table(&self) -> Result<SemigroupTable> {
        let mut index = BTreeMap::new();
        for (i, name) in self.elements.iter().enumerate() {
            if index.insert(name.as_str(), i).is_some() {
                return Err(parse_err(
                    format!("elements[{i}]"),
                    format!("duplicate element {name:?}"),
                ));
            }
        }
        let resolve = |context: String, name: &str| {
            index
                .get(name)
                .copied()
                .ok_or_else(|| parse_err(context, format!("unknown element {name:?}")))
        };
        let mut mul = Vec::with_capacity(self.mul.len());
        for (i, row) in self.mul.iter().enumerate() {
            let mut out = Vec::with_capacity(row.len());
            for (j, cell) in row.iter().enumerate() {
                out.push(resolve(format!("mul[{i}][{j}]"), cell)?);
            }
            mul.push(out);
        }
        let zero = self
            .zero
            .as_deref()
            .map(|z| resolve("zero".into(), z))
            .transpose()?;
        let identity = self
            .identity
            .as_deref()
            .map(|u| resolve("identity".into(), u))
            .transpose()?;
        Ok(SemigroupTable {
            names: self.elements.clone(),
            mul,
            zero,
            identity,
        })
    }
}

pub fn parse_semigroup(text: &str, opts: &ValidateOptions) -> Result<FiniteInverseSemigroup> {
    let json: SemigroupJson = from_json("semigroup", text)?;
    validate(json.to_table()?, opts)
}

pub fn semigroup_to_json(s: &FiniteInverseSemigroup) -> String {
    to_json(&SemigroupJson::from_semigroup(s))
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoverJson {
    pub of: String,
    pub cover: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoverageJson {
    pub covers: Vec<CoverJson>,
    #[serde(default)]
    pub close: bool,
}

fn lookup_in(s: &FiniteInverseSemigroup, context: &str, name: &str) -> Result<ElementId> {
    s.id(name)
        .ok_or_else(|| parse_err(context, format!("unknown element {name:?}")))
}

/// Reads a coverage file. Covers that are not inside `↓a` are rejected with
/// `NotDownSet`; `"close": true` closes the seeds under translation.
pub fn parse_coverage(text: &str, s: Arc<FiniteInverseSemigroup>) -> Result<Coverage> {
    let json: CoverageJson = from_json("coverage", text)?;
    let mut seeds = Vec::with_capacity(json.covers.len());
    for (i, c) in json.covers.iter().enumerate() {
        let a = lookup_in(&s, &format!("covers[{i}].of"), &c.of)?;
        let mut x = s.empty_set();
        for (j, name) in c.cover.iter().enumerate() {
            x.insert(lookup_in(&s, &format!("covers[{i}].cover[{j}]"), name)?);
        }
        seeds.push((a, x));
    }
    if json.close {
        return close_coverage(s, seeds);
    }
    let mut cov = Coverage::empty(s);
    for (a, x) in seeds {
        cov.insert(a, x)?;
    }
    Ok(cov)
}

/// Names accepted in place of a coverage file.
pub const BUILTIN_COVERAGES: [&str; 3] = ["tight", "join", "empty"];

/// `tight`: every `Z ⊆ ↓a` such that each nonzero `b ≤ a` meets some `z ∈ Z`.
/// `join`: all join decompositions (S must be a pseudogroup).
/// `empty`: no coverings.
pub fn builtin_coverage(name: &str, s: Arc<FiniteInverseSemigroup>) -> Result<Option<Coverage>> {
    Ok(Some(match name {
        "tight" => tight_coverage(s)?,
        "join" => Coverage::join_coverage(&Pseudogroup::new(s)?),
        "empty" => Coverage::empty(s),
        _ => return Ok(None),
    }))
}

/// Explicit coverings only; join coverings are implicit and not written.
pub fn coverage_to_json(cov: &Coverage) -> String {
    let s = cov.base();
    let mut covers: Vec<CoverJson> = cov
        .explicit()
        .map(|(a, x)| CoverJson {
            of: s.name(a).to_string(),
            cover: s.sorted_names(x),
        })
        .collect();
    covers.sort();
    to_json(&CoverageJson {
        covers,
        close: false,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NucleusJson {
    pub map: BTreeMap<String, String>,
}

/// A nucleus on a pseudogroup given as a total name-to-name map.
pub fn parse_nucleus(text: &str, p: &Pseudogroup) -> Result<Nucleus> {
    let json: NucleusJson = from_json("nucleus", text)?;
    let s = p.semigroup();
    let mut map: Vec<Option<ElementId>> = vec![None; s.len()];
    for (from, to) in &json.map {
        let a = lookup_in(s, "map", from)?;
        map[a.index()] = Some(lookup_in(s, &format!("map[{from:?}]"), to)?);
    }
    let map = map
        .into_iter()
        .enumerate()
        .map(|(i, v)| {
            v.ok_or_else(|| {
                parse_err(
                    "map",
                    format!("no image for {:?}", s.name(ElementId::new(i))),
                )
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Nucleus::new(p.arc().clone(), map)
}

pub fn nucleus_to_json(nu: &Nucleus) -> String {
    let s = nu.base();
    let map = s
        .elements()
        .map(|a| (s.name(a).to_string(), s.name(nu.apply(a)).to_string()))
        .collect();
    to_json(&NucleusJson { map })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FilterJson {
    pub min: String,
    pub carrier: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FilterFamilyJson {
    pub kind: String,
    pub count: usize,
    pub filters: Vec<FilterJson>,
}

pub fn filters_to_json(s: &FiniteInverseSemigroup, fam: &FilterFamily) -> String {
    let mut filters: Vec<FilterJson> = fam
        .filters
        .iter()
        .map(|f| FilterJson {
            min: s.name(f.min).to_string(),
            carrier: s.sorted_names(&f.carrier),
        })
        .collect();
    filters.sort_by(|a, b| a.min.cmp(&b.min));
    to_json(&FilterFamilyJson {
        kind: fam.kind.to_string(),
        count: filters.len(),
        filters,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PseudogroupJson {
    /// The closed ideals, as sorted names of the base.
    pub ideals: Vec<Vec<String>>,
    /// Names of the elements, in the same order as `ideals`.
    pub elements: Vec<String>,
    pub mul: Vec<Vec<String>>,
    /// `a ↦ π(a)`, by element name.
    pub pi: BTreeMap<String, String>,
}

pub fn pseudogroup_to_json(up: &UniversalPseudogroup) -> String {
    let p = up.semigroup();
    let s = up.coverage.base();
    let table = SemigroupJson::from_semigroup(p);
    let pi = s
        .elements()
        .map(|a| (s.name(a).to_string(), p.name(up.pi.apply(a)).to_string()))
        .collect();
    to_json(&PseudogroupJson {
        ideals: up.ideal_names(),
        elements: table.elements,
        mul: table.mul,
        pi,
    })
}

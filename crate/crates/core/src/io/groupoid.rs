use std::collections::HashMap;
use std::fmt::Write;

use serde::{Deserialize, Serialize};

use super::{from_json, parse_err, to_json};
use crate::algebra::ElementSet;
use crate::error::Result;
use crate::groupoid::{FiniteGroupoid, FiniteTopology};

/// Arrows by label. `basis` holds the smallest open set around each arrow,
/// in arrow order, which determines the topology.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupoidJson {
    pub arrows: Vec<String>,
    pub units: Vec<String>,
    pub d: Vec<String>,
    pub r: Vec<String>,
    pub inv: Vec<String>,
    /// `[f, g, fg]` for every composable pair.
    pub mul: Vec<[String; 3]>,
    pub basis: Vec<Vec<String>>,
}

impl GroupoidJson {
    pub fn from_groupoid(g: &FiniteGroupoid) -> Self {
        let name = |x: usize| g.label(x).to_string();
        let set = |u: &ElementSet| u.indices().map(name).collect();
        GroupoidJson {
            arrows: g.labels().to_vec(),
            units: set(g.units()),
            d: g.arrows().map(|x| name(g.d(x))).collect(),
            r: g.arrows().map(|x| name(g.r(x))).collect(),
            inv: g.arrows().map(|x| name(g.inv(x))).collect(),
            mul: g
                .composable_pairs()
                .map(|(f, h)| [name(f), name(h), name(g.compose(f, h).expect("composable"))])
                .collect(),
            basis: g
                .arrows()
                .map(|x| set(g.topology().neighbourhood(x)))
                .collect(),
        }
    }

    pub fn to_groupoid(&self) -> Result<FiniteGroupoid> {
        let n = self.arrows.len();
        let mut index = HashMap::with_capacity(n);
        for (i, a) in self.arrows.iter().enumerate() {
            if index.insert(a.as_str(), i).is_some() {
                return Err(parse_err(
                    format!("arrows[{i}]"),
                    format!("duplicate arrow {a:?}"),
                ));
            }
        }
        let resolve = |context: String, name: &str| {
            index
                .get(name)
                .copied()
                .ok_or_else(|| parse_err(context, format!("unknown arrow {name:?}")))
        };
        let column = |field: &str, values: &[String]| -> Result<Vec<usize>> {
            if values.len() != n {
                return Err(parse_err(
                    field,
                    format!("expected {n} entries, found {}", values.len()),
                ));
            }
            values
                .iter()
                .enumerate()
                .map(|(i, v)| resolve(format!("{field}[{i}]"), v))
                .collect()
        };
        let d = column("d", &self.d)?;
        let r = column("r", &self.r)?;
        let inv = column("inv", &self.inv)?;
        let mut mul = vec![None; n * n];
        for (i, [f, g, fg]) in self.mul.iter().enumerate() {
            let (f, g) = (
                resolve(format!("mul[{i}][0]"), f)?,
                resolve(format!("mul[{i}][1]"), g)?,
            );
            let fg = resolve(format!("mul[{i}][2]"), fg)?;
            if mul[f * n + g].replace(fg).is_some() {
                return Err(parse_err(format!("mul[{i}]"), "pair listed twice"));
            }
        }
        let mut basis = Vec::with_capacity(self.basis.len());
        for (i, b) in self.basis.iter().enumerate() {
            let mut set = ElementSet::empty(n);
            for (j, a) in b.iter().enumerate() {
                set.add(resolve(format!("basis[{i}][{j}]"), a)?);
            }
            basis.push(set);
        }
        let topology = FiniteTopology::new(self.arrows.clone(), basis)?;
        let g = FiniteGroupoid::new(self.arrows.clone(), d, r, inv, mul, topology)?;
        let mut units = ElementSet::empty(n);
        for (i, u) in self.units.iter().enumerate() {
            units.add(resolve(format!("units[{i}]"), u)?);
        }
        if &units != g.units() {
            return Err(parse_err("units", "does not match the image of d"));
        }
        Ok(g)
    }
}

pub fn parse_groupoid(text: &str) -> Result<FiniteGroupoid> {
    from_json::<GroupoidJson>("groupoid", text)?.to_groupoid()
}

pub fn groupoid_to_json(g: &FiniteGroupoid) -> String {
    to_json(&GroupoidJson::from_groupoid(g))
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Units as boxes, every other arrow as an edge from its domain to its range.
pub fn groupoid_to_dot(g: &FiniteGroupoid, name: &str) -> String {
    let mut out = String::new();
    writeln!(out, "digraph {} {{", quote(name)).unwrap();
    for u in g.units().indices() {
        writeln!(out, "  {} [shape=box];", quote(g.label(u))).unwrap();
    }
    for x in g.arrows().filter(|&x| !g.units().has(x)) {
        writeln!(
            out,
            "  {} -> {} [label={}];",
            quote(g.label(g.d(x))),
            quote(g.label(g.r(x))),
            quote(g.label(x))
        )
        .unwrap();
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::algebra::i2;
    use crate::error::Error;
    use crate::groupoid::{filter_groupoid, tight_groupoid, TopologyKind};

    #[test]
    fn round_trip_is_byte_identical() {
        let s = Arc::new(i2());
        for g in [
            filter_groupoid(s.clone(), TopologyKind::Patch, false)
                .unwrap()
                .groupoid,
            filter_groupoid(s.clone(), TopologyKind::TauS, false)
                .unwrap()
                .groupoid,
            tight_groupoid(s).unwrap().groupoid,
            FiniteGroupoid::pair(3),
        ] {
            let text = groupoid_to_json(&g);
            let back = parse_groupoid(&text).unwrap();
            assert!(back.topology().same_opens(g.topology()));
            assert_eq!(back.labels(), g.labels());
            assert_eq!(groupoid_to_json(&back), text);
        }
    }

    #[test]
    fn dot_draws_non_units_as_edges() {
        let dot = groupoid_to_dot(&FiniteGroupoid::pair(2), "pair");
        assert_eq!(dot.matches("shape=box").count(), 2);
        assert_eq!(dot.matches("->").count(), 2);
    }

    #[test]
    fn bad_units_rejected() {
        let mut json = GroupoidJson::from_groupoid(&FiniteGroupoid::pair(2));
        json.units.pop();
        assert!(matches!(json.to_groupoid(), Err(Error::Parse { .. })));
    }
}

//! Generated example semigroups.
//!
//! Symmetric inverse monoids compose partial functions right to left:
//! `(fg)(x) = f(g(x))`.

use std::fmt;
use std::str::FromStr;

use super::semigroup::{
    validate, FiniteInverseSemigroup, SemigroupTable, ValidateOptions, DEFAULT_SIZE_CAP,
};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Fixture {
    /// All partial bijections of `{1..n}`.
    SymmetricInverse(usize),
    /// Subsets of an `n`-element set under intersection.
    PowersetSemilattice(usize),
    CyclicGroup(usize),
    /// `0 < c1 < ... < c(n-1)` under minimum.
    ChainSemilattice(usize),
}

impl Fixture {
    pub fn element_count(&self) -> Option<usize> {
        match *self {
            Fixture::SymmetricInverse(n) => {
                let mut total: usize = 0;
                for k in 0..=n {
                    let c = binomial(n, k)?;
                    let term = c.checked_mul(c)?.checked_mul(factorial(k)?)?;
                    total = total.checked_add(term)?;
                }
                Some(total)
            }
            Fixture::PowersetSemilattice(n) => 1usize
                .checked_shl(n as u32)
                .filter(|_| n < usize::BITS as usize),
            Fixture::CyclicGroup(n) | Fixture::ChainSemilattice(n) => Some(n),
        }
    }
}

impl fmt::Display for Fixture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Fixture::SymmetricInverse(n) => write!(f, "symmetric_inverse({n})"),
            Fixture::PowersetSemilattice(n) => write!(f, "powerset_semilattice({n})"),
            Fixture::CyclicGroup(n) => write!(f, "cyclic_group({n})"),
            Fixture::ChainSemilattice(n) => write!(f, "chain_semilattice({n})"),
        }
    }
}

impl FromStr for Fixture {
    type Err = Error;

    /// Accepts `name(n)` or `name:n`.
    fn from_str(s: &str) -> Result<Self> {
        let err = |m: &str| Error::Parse {
            context: format!("fixture {s:?}"),
            message: m.to_string(),
        };
        let s = s.trim();
        let (name, arg) = if let Some(open) = s.find('(') {
            let close = s.strip_suffix(')').ok_or_else(|| err("missing ')'"))?;
            (&s[..open], &close[open + 1..])
        } else if let Some((name, arg)) = s.split_once(':') {
            (name, arg)
        } else {
            return Err(err("expected name(n)"));
        };
        let n: usize = arg
            .trim()
            .parse()
            .map_err(|_| err("argument is not a non-negative integer"))?;
        match name.trim() {
            "symmetric_inverse" => Ok(Fixture::SymmetricInverse(n)),
            "powerset_semilattice" => Ok(Fixture::PowersetSemilattice(n)),
            "cyclic_group" if n >= 1 => Ok(Fixture::CyclicGroup(n)),
            "chain_semilattice" if n >= 1 => Ok(Fixture::ChainSemilattice(n)),
            "cyclic_group" | "chain_semilattice" => Err(err("size must be at least 1")),
            _ => Err(err("unknown fixture")),
        }
    }
}

fn binomial(n: usize, k: usize) -> Option<usize> {
    let mut r: usize = 1;
    for i in 0..k {
        r = r.checked_mul(n - i)? / (i + 1);
    }
    Some(r)
}

fn factorial(k: usize) -> Option<usize> {
    (1..=k).try_fold(1usize, |acc, i| acc.checked_mul(i))
}

pub fn make_fixture(fixture: Fixture) -> Result<FiniteInverseSemigroup> {
    make_fixture_capped(fixture, DEFAULT_SIZE_CAP)
}

pub fn make_fixture_capped(fixture: Fixture, cap: usize) -> Result<FiniteInverseSemigroup> {
    let size = fixture.element_count().unwrap_or(usize::MAX);
    if size > cap {
        return Err(Error::size(format!("{fixture} elements"), size, cap));
    }
    let table = match fixture {
        Fixture::SymmetricInverse(n) => symmetric_inverse_table(n),
        Fixture::PowersetSemilattice(n) => powerset_table(n)?,
        Fixture::CyclicGroup(n) => cyclic_table(n),
        Fixture::ChainSemilattice(n) => chain_table(n),
    };
    validate(
        table,
        &ValidateOptions {
            check_associativity: false,
            size_cap: cap,
        },
    )
}

/// Convenience constructors for the small fixtures used throughout the tests.
pub fn i2() -> FiniteInverseSemigroup {
    make_fixture(Fixture::SymmetricInverse(2)).expect("I2")
}

pub fn e4() -> FiniteInverseSemigroup {
    make_fixture(Fixture::PowersetSemilattice(2)).expect("E4")
}

type PartialMap = Vec<Option<usize>>;

fn partial_maps(n: usize) -> Vec<PartialMap> {
    // Ordered by domain size, then domain, then images.
    let mut out = Vec::new();
    for k in 0..=n {
        for mask in 0u32..(1 << n) {
            if mask.count_ones() as usize != k {
                continue;
            }
            let dom: Vec<usize> = (0..n).filter(|&i| mask & (1 << i) != 0).collect();
            let mut images = Vec::new();
            injections(
                &dom,
                0,
                n,
                &mut vec![None; n],
                &mut vec![false; n],
                &mut images,
            );
            out.extend(images);
        }
    }
    out
}

fn injections(
    dom: &[usize],
    at: usize,
    n: usize,
    current: &mut PartialMap,
    used: &mut Vec<bool>,
    out: &mut Vec<PartialMap>,
) {
    if at == dom.len() {
        out.push(current.clone());
        return;
    }
    for y in 0..n {
        if !used[y] {
            used[y] = true;
            current[dom[at]] = Some(y);
            injections(dom, at + 1, n, current, used, out);
            current[dom[at]] = None;
            used[y] = false;
        }
    }
}

fn partial_map_name(f: &PartialMap) -> String {
    let n = f.len();
    let defined: Vec<(usize, usize)> = f
        .iter()
        .enumerate()
        .filter_map(|(i, y)| y.map(|y| (i + 1, y + 1)))
        .collect();
    if defined.is_empty() {
        return "0".into();
    }
    let sep = if n > 9 { "." } else { "" };
    if defined.iter().all(|(x, y)| x == y) {
        if defined.len() == n {
            return "id".into();
        }
        let parts: Vec<String> = defined.iter().map(|(x, _)| x.to_string()).collect();
        return format!("e{}", parts.join(sep));
    }
    let parts: Vec<String> = defined
        .iter()
        .map(|(x, y)| format!("{x}{sep}{y}"))
        .collect();
    format!("t{}", parts.join(if n > 9 { "," } else { "" }))
}

fn symmetric_inverse_table(n: usize) -> SemigroupTable {
    let maps = partial_maps(n);
    let index: std::collections::HashMap<&PartialMap, usize> =
        maps.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let compose = |f: &PartialMap, g: &PartialMap| -> PartialMap {
        g.iter().map(|y| y.and_then(|y| f[y])).collect()
    };
    let mul = maps
        .iter()
        .map(|f| maps.iter().map(|g| index[&compose(f, g)]).collect())
        .collect();
    let identity = maps
        .iter()
        .position(|m| m.iter().enumerate().all(|(i, y)| *y == Some(i)));
    SemigroupTable {
        names: maps.iter().map(partial_map_name).collect(),
        mul,
        zero: Some(0),
        identity,
    }
}

fn powerset_table(n: usize) -> Result<SemigroupTable> {
    if n > 26 {
        return Err(Error::size("powerset_semilattice letters", n, 26));
    }
    let size = 1usize << n;
    let full = size - 1;
    let name = |mask: usize| -> String {
        match mask {
            0 => "0".into(),
            m if m == full => "1".into(),
            m => (0..n)
                .filter(|i| m & (1 << i) != 0)
                .map(|i| (b'a' + i as u8) as char)
                .collect(),
        }
    };
    // Sort by cardinality, then by name, so that atoms come first.
    let mut masks: Vec<usize> = (0..size).collect();
    masks.sort_by_key(|&m| {
        (
            m.count_ones(),
            if m == full { String::new() } else { name(m) },
        )
    });
    let pos: Vec<usize> = {
        let mut p = vec![0; size];
        for (i, &m) in masks.iter().enumerate() {
            p[m] = i;
        }
        p
    };
    Ok(SemigroupTable {
        names: masks.iter().map(|&m| name(m)).collect(),
        mul: masks
            .iter()
            .map(|&a| masks.iter().map(|&b| pos[a & b]).collect())
            .collect(),
        zero: Some(0),
        identity: Some(size - 1),
    })
}

fn cyclic_table(n: usize) -> SemigroupTable {
    let names = (0..n)
        .map(|k| match k {
            0 => "e".to_string(),
            1 => "g".to_string(),
            k => format!("g{k}"),
        })
        .collect();
    SemigroupTable {
        names,
        mul: (0..n)
            .map(|a| (0..n).map(|b| (a + b) % n).collect())
            .collect(),
        zero: if n == 1 { Some(0) } else { None },
        identity: Some(0),
    }
}

fn chain_table(n: usize) -> SemigroupTable {
    let names = (0..n)
        .map(|k| {
            if k == 0 {
                "0".to_string()
            } else {
                format!("c{k}")
            }
        })
        .collect();
    SemigroupTable {
        names,
        mul: (0..n).map(|a| (0..n).map(|b| a.min(b)).collect()).collect(),
        zero: Some(0),
        identity: Some(n - 1),
    }
}

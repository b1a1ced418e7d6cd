use std::fmt::Write;

use isg_core::checks::{CheckResult, CheckSummary};
use isg_core::filters::FilterFamily;
use isg_core::groupoid::{EmbeddingReport, FiniteGroupoid, FiniteTopology, NucleusEmbedding};
use isg_core::io::GroupoidJson;
use isg_core::pseudogroup::UniversalPseudogroup;
use isg_core::FiniteInverseSemigroup;
use serde::Serialize;

use crate::Command;

pub fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Validate(_) => "validate",
        Command::Fixture { .. } => "fixture",
        Command::Filters { .. } => "filters",
        Command::TightFilters(_) => "tight-filters",
        Command::Pseudogroup(_) => "pseudogroup",
        Command::UniversalGroupoid { .. } => "universal-groupoid",
        Command::TightGroupoid(_) => "tight-groupoid",
        Command::Spectrum(_) => "spectrum",
        Command::Reduce { .. } => "reduce",
        Command::Embed { .. } => "embed",
    }
}

pub fn summary(sum: &CheckSummary) -> String {
    let mut out = String::new();
    for r in &sum.results {
        match &r.witness {
            None => writeln!(out, "PASS {}", r.name).unwrap(),
            Some(w) => writeln!(out, "FAIL {}: {w}", r.name).unwrap(),
        }
    }
    out
}

fn json<T: Serialize>(value: &T) -> String {
    let mut out = serde_json::to_string_pretty(value).expect("plain data serializes");
    out.push('\n');
    out
}

fn braces(names: impl IntoIterator<Item = impl AsRef<str>>) -> String {
    let parts: Vec<String> = names.into_iter().map(|n| n.as_ref().to_string()).collect();
    format!("{{{}}}", parts.join(","))
}

pub fn semigroup(s: &FiniteInverseSemigroup) -> String {
    let mut out = String::new();
    writeln!(out, "elements: {}", s.len()).unwrap();
    writeln!(
        out,
        "idempotents: {}",
        braces(s.sorted_names(s.idempotents()))
    )
    .unwrap();
    writeln!(out, "zero: {}", s.zero().map_or("none", |z| s.name(z))).unwrap();
    writeln!(
        out,
        "identity: {}",
        s.identity().map_or("none", |u| s.name(u))
    )
    .unwrap();
    writeln!(out, "semilattice: {}", s.is_semilattice()).unwrap();
    out
}

pub fn filters(s: &FiniteInverseSemigroup, fam: &FilterFamily) -> String {
    let mut out = String::new();
    writeln!(out, "{} filters: {}", fam.kind, fam.len()).unwrap();
    for f in &fam.filters {
        writeln!(
            out,
            "  ↑{} = {}",
            s.name(f.min),
            braces(s.sorted_names(&f.carrier))
        )
        .unwrap();
    }
    out
}

pub fn pseudogroup(up: &UniversalPseudogroup) -> String {
    let p = up.semigroup();
    let s = up.coverage.base();
    let mut out = String::new();
    writeln!(out, "elements: {}", p.len()).unwrap();
    for (x, ideal) in p.elements().zip(up.ideal_names()) {
        let tag = if p.is_idempotent(x) {
            " (idempotent)"
        } else {
            ""
        };
        writeln!(out, "  {}{tag}", braces(ideal)).unwrap();
    }
    writeln!(out, "pi:").unwrap();
    for a in s.elements() {
        writeln!(out, "  {} -> {}", s.name(a), p.name(up.pi.apply(a))).unwrap();
    }
    out
}

pub fn groupoid(g: &FiniteGroupoid) -> String {
    let mut out = String::new();
    writeln!(out, "arrows: {}", g.len()).unwrap();
    writeln!(
        out,
        "units: {}",
        braces(g.units().indices().map(|u| g.label(u)))
    )
    .unwrap();
    for x in g.arrows() {
        writeln!(
            out,
            "  {}: {} -> {}, inverse {}, neighbourhood {}",
            g.label(x),
            g.label(g.d(x)),
            g.label(g.r(x)),
            g.label(g.inv(x)),
            braces(g.topology().neighbourhood(x).indices().map(|y| g.label(y)))
        )
        .unwrap();
    }
    writeln!(out, "etale: {}", g.is_etale()).unwrap();
    out
}

#[derive(Serialize)]
struct SpaceJson {
    points: Vec<String>,
    /// Smallest open set around each point.
    basis: Vec<Vec<String>>,
    t0: bool,
    t1: bool,
}

fn space(t: &FiniteTopology) -> SpaceJson {
    SpaceJson {
        points: t.labels().to_vec(),
        basis: (0..t.len())
            .map(|x| {
                t.neighbourhood(x)
                    .indices()
                    .map(|y| t.label(y).to_string())
                    .collect()
            })
            .collect(),
        t0: t.is_t0(),
        t1: t.is_t1(),
    }
}

pub fn space_json(t: &FiniteTopology) -> String {
    json(&space(t))
}

pub fn space_text(t: &FiniteTopology) -> String {
    let sp = space(t);
    let mut out = String::new();
    writeln!(out, "points: {}", sp.points.len()).unwrap();
    for (p, b) in sp.points.iter().zip(&sp.basis) {
        writeln!(out, "  ↑{p}: neighbourhood {}", braces(b)).unwrap();
    }
    writeln!(out, "T0: {}, T1: {}", sp.t0, sp.t1).unwrap();
    out
}

pub fn embedding_checks(r: &EmbeddingReport) -> CheckSummary {
    let flag = |name: &str, ok: bool| CheckResult {
        name: format!("embedding({name})"),
        passed: ok,
        witness: (!ok).then(|| r.failures.join("; ")),
    };
    CheckSummary {
        results: vec![
            flag("well-defined", r.well_defined),
            flag("injective", r.well_defined && r.injective),
            flag("functorial", r.well_defined && r.functorial),
            flag("composability", r.well_defined && r.reflects_composability),
            flag("inverse", r.well_defined && r.preserves_inverse),
            flag("continuous", r.well_defined && r.continuous),
            flag("open-onto-image", r.well_defined && r.open_onto_image),
            flag("range-closed", r.well_defined && r.range_closed),
        ],
    }
}

#[derive(Serialize)]
struct EmbeddingJson {
    source: GroupoidJson,
    target: GroupoidJson,
    map: Vec<[String; 2]>,
}

pub fn embedding_json(e: &NucleusEmbedding) -> String {
    let (g, h) = (&e.source.groupoid, &e.target.groupoid);
    json(&EmbeddingJson {
        source: GroupoidJson::from_groupoid(g),
        target: GroupoidJson::from_groupoid(h),
        map: e
            .map
            .iter()
            .enumerate()
            .map(|(x, &y)| [g.label(x).to_string(), h.label(y).to_string()])
            .collect(),
    })
}

pub fn embedding_text(e: &NucleusEmbedding) -> String {
    let (g, h) = (&e.source.groupoid, &e.target.groupoid);
    let mut out = String::new();
    writeln!(
        out,
        "source arrows: {}, target arrows: {}",
        g.len(),
        h.len()
    )
    .unwrap();
    for (x, &y) in e.map.iter().enumerate() {
        writeln!(out, "  {} -> {}", g.label(x), h.label(y)).unwrap();
    }
    out
}

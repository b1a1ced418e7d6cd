use std::path::Path;
use std::sync::Arc;

use isg_core::algebra::{make_fixture, Fixture, ValidateOptions};
use isg_core::checks::{coverage_suite, semigroup_suite, CheckResult, CheckSummary};
use isg_core::coverage::{check_axioms, Coverage};
use isg_core::filters::{completely_prime_filters, enumerate_filters, ultrafilters, FilterFamily};
use isg_core::groupoid::{
    cp_filter_groupoid, filter_groupoid, nucleus_embedding, nucleus_on_pseudogroup, spectrum,
    tight_filters, tight_groupoid, FiniteGroupoid, TopologyKind,
};
use isg_core::io::{
    builtin_coverage, filters_to_json, groupoid_to_dot, groupoid_to_json, parse_coverage,
    parse_nucleus, parse_semigroup, pseudogroup_to_json, semigroup_to_json,
};
use isg_core::pseudogroup::{universal_pseudogroup, Nucleus, Pseudogroup};
use isg_core::{Error, FiniteInverseSemigroup, Result};

use crate::render;
use crate::{CheckLevel, Command, Common, Format, Kind, Topology};

pub struct Output {
    pub stdout: String,
    pub summary: CheckSummary,
    pub format: Format,
}

/// 1 for a property that should hold and does not, 2 for anything wrong
/// with the input.
pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::PropertyFailed { .. } => 1,
        _ => 2,
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Parse {
        context: path.display().to_string(),
        message: e.to_string(),
    })
}

struct Inputs {
    s: Arc<FiniteInverseSemigroup>,
    cov: Option<Coverage>,
}

fn load(c: &Common) -> Result<Inputs> {
    let opts = ValidateOptions {
        check_associativity: true,
        size_cap: c.size_cap as usize,
    };
    let s = Arc::new(parse_semigroup(&read(&c.semigroup)?, &opts)?);
    let cov = match &c.coverage {
        None => None,
        Some(arg) if !Path::new(arg).exists() => Some(
            builtin_coverage(arg, s.clone())?.ok_or_else(|| Error::Parse {
                context: "--coverage".into(),
                message: format!("{arg:?} is neither a file nor a built-in coverage"),
            })?,
        ),
        Some(path) => Some(parse_coverage(&read(Path::new(path))?, s.clone())?),
    };
    Ok(Inputs { s, cov })
}

fn require_coverage(inputs: &Inputs) -> Result<&Coverage> {
    inputs
        .cov
        .as_ref()
        .ok_or_else(|| Error::PreconditionFailed("--coverage is required".into()))
}

fn topology_kind(t: Topology) -> TopologyKind {
    match t {
        Topology::TauS => TopologyKind::TauS,
        Topology::Patch => TopologyKind::Patch,
    }
}

fn no_dot(format: Format) -> Result<()> {
    if format == Format::Dot {
        return Err(Error::PreconditionFailed(
            "dot output is only available for groupoids".into(),
        ));
    }
    Ok(())
}

fn groupoid_out(g: &FiniteGroupoid, format: Format, name: &str) -> String {
    match format {
        Format::Json => groupoid_to_json(g),
        Format::Dot => groupoid_to_dot(g, name),
        Format::Text => render::groupoid(g),
    }
}

fn filters_out(s: &FiniteInverseSemigroup, fam: &FilterFamily, format: Format) -> Result<String> {
    no_dot(format)?;
    Ok(match format {
        Format::Text => render::filters(s, fam),
        _ => filters_to_json(s, fam),
    })
}

fn full_checks(c: &Common, inputs: &Inputs) -> CheckSummary {
    let mut summary = CheckSummary::default();
    if c.check_level == CheckLevel::Full {
        summary.extend(semigroup_suite(&inputs.s));
        if let Some(cov) = &inputs.cov {
            summary.extend(coverage_suite(cov));
        }
    }
    summary
}

pub fn run(command: &Command) -> Result<Output> {
    let (common, body) = match command {
        Command::Fixture { name } => {
            let f: Fixture = name.parse()?;
            return Ok(Output {
                stdout: semigroup_to_json(&make_fixture(f)?),
                summary: CheckSummary::default(),
                format: Format::Json,
            });
        }
        Command::Validate(c)
        | Command::TightFilters(c)
        | Command::Pseudogroup(c)
        | Command::TightGroupoid(c)
        | Command::Spectrum(c)
        | Command::Filters { common: c, .. }
        | Command::UniversalGroupoid { common: c, .. }
        | Command::Reduce { common: c, .. }
        | Command::Embed { common: c, .. } => (c, command),
    };
    let started = std::time::Instant::now();
    let inputs = load(common)?;
    let s = &inputs.s;
    let format = common.format;
    let mut summary = full_checks(common, &inputs);

    let stdout = match body {
        Command::Fixture { .. } => unreachable!(),
        Command::Validate(_) => {
            no_dot(format)?;
            if let Some(cov) = &inputs.cov {
                let report = check_axioms(cov)?;
                let witness = report
                    .failures
                    .iter()
                    .find(|(a, _)| a == "coverage")
                    .map(|(_, w)| w.clone());
                summary.results.insert(
                    0,
                    CheckResult {
                        name: "coverage-axioms".into(),
                        passed: witness.is_none(),
                        witness,
                    },
                );
            }
            match format {
                Format::Text => render::semigroup(s),
                _ => semigroup_to_json(s),
            }
        }
        Command::Filters { kind, .. } => {
            let fam = match kind {
                Kind::All => enumerate_filters(s),
                Kind::Ultra => ultrafilters(s),
                Kind::Tight => tight_filters(s)?,
                Kind::CompletelyPrime => completely_prime_filters(&Pseudogroup::new(s.clone())?),
            };
            filters_out(s, &fam, format)?
        }
        Command::TightFilters(_) => filters_out(s, &tight_filters(s)?, format)?,
        Command::Pseudogroup(_) => {
            no_dot(format)?;
            let up = universal_pseudogroup(require_coverage(&inputs)?)?;
            match format {
                Format::Text => render::pseudogroup(&up),
                _ => pseudogroup_to_json(&up),
            }
        }
        Command::UniversalGroupoid { topology, .. } => match &inputs.cov {
            None => {
                let fg =
                    filter_groupoid(s.clone(), topology_kind(*topology), common.adjoin_improper)?;
                groupoid_out(&fg.groupoid, format, "universal")
            }
            Some(cov) => {
                let up = universal_pseudogroup(cov)?;
                groupoid_out(
                    &cp_filter_groupoid(&up.pseudogroup)?.groupoid,
                    format,
                    "universal",
                )
            }
        },
        Command::TightGroupoid(_) => {
            groupoid_out(&tight_groupoid(s.clone())?.groupoid, format, "tight")
        }
        Command::Spectrum(_) => {
            no_dot(format)?;
            let sp = spectrum(&Pseudogroup::new(s.clone())?)?;
            match format {
                Format::Text => render::space_text(&sp.topology),
                _ => render::space_json(&sp.topology),
            }
        }
        Command::Reduce {
            units, topology, ..
        } => {
            let fg = filter_groupoid(s.clone(), topology_kind(*topology), common.adjoin_improper)?;
            let g = &fg.groupoid;
            let mut keep = isg_core::ElementSet::empty(g.len());
            for name in units {
                let u = g
                    .units()
                    .indices()
                    .find(|&u| g.label(u) == name)
                    .ok_or_else(|| Error::UnknownName(name.clone()))?;
                keep.add(u);
            }
            groupoid_out(&g.reduce(&keep).0, format, "reduction")
        }
        Command::Embed { nucleus, .. } => {
            no_dot(format)?;
            let p = Pseudogroup::new(s.clone())?;
            let nu = match nucleus.as_str() {
                "identity" if !Path::new(nucleus).exists() => Nucleus::identity(s.clone()),
                "coverage" if !Path::new(nucleus).exists() => {
                    nucleus_on_pseudogroup(&p, require_coverage(&inputs)?)?
                }
                path => parse_nucleus(&read(Path::new(path))?, &p)?,
            };
            let emb = nucleus_embedding(&p, &nu)?;
            summary.extend(render::embedding_checks(&emb.report));
            match format {
                Format::Text => render::embedding_text(&emb),
                _ => render::embedding_json(&emb),
            }
        }
    };
    if format == Format::Text {
        let mut text = format!("command: {}\n", render::command_name(body));
        text.push_str(&stdout);
        if !summary.results.is_empty() {
            text.push_str("checks:\n");
            text.push_str(&render::summary(&summary));
        }
        text.push_str(&format!("elapsed: {} ms\n", started.elapsed().as_millis()));
        return Ok(Output {
            stdout: text,
            summary,
            format,
        });
    }
    Ok(Output {
        stdout,
        summary,
        format,
    })
}

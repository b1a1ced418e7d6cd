//! Replays the fuzz corpus through the parsers on the stable toolchain, and
//! throws mutated seeds at them. Parsers may reject input but never panic,
//! and whatever they accept must export and parse again.

use std::fs;
use std::path::PathBuf;
use std::sync::Arc;

use isg_core::algebra::{e4, i2, make_fixture_capped, Fixture, ValidateOptions};
use isg_core::io::{
    coverage_to_json, groupoid_to_json, parse_coverage, parse_groupoid, parse_nucleus,
    parse_semigroup, semigroup_to_json,
};
use isg_core::pseudogroup::Pseudogroup;
use proptest::prelude::*;

fn corpus(target: &str) -> Vec<String> {
    let dir: PathBuf = [
        env!("CARGO_MANIFEST_DIR"),
        "..",
        "..",
        "fuzz",
        "corpus",
        target,
    ]
    .iter()
    .collect();
    let mut files: Vec<PathBuf> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| e.unwrap().path())
        .collect();
    files.sort();
    assert!(!files.is_empty(), "empty corpus {target}");
    files
        .iter()
        .map(|p| fs::read_to_string(p).unwrap())
        .collect()
}

fn semigroup(text: &str) {
    let opts = ValidateOptions {
        check_associativity: true,
        size_cap: 32,
    };
    if let Ok(s) = parse_semigroup(text, &opts) {
        let json = semigroup_to_json(&s);
        let again = parse_semigroup(&json, &opts).expect("exported semigroup parses");
        assert_eq!(semigroup_to_json(&again), json);
    }
}

fn coverage(text: &str) {
    let s = Arc::new(i2());
    if let Ok(cov) = parse_coverage(text, s.clone()) {
        parse_coverage(&coverage_to_json(&cov), s).expect("exported coverage parses");
    }
}

fn nucleus(text: &str) {
    let p = Pseudogroup::new(Arc::new(e4())).unwrap();
    if let Ok(nu) = parse_nucleus(text, &p) {
        nu.check_axioms().unwrap();
    }
}

fn groupoid(text: &str) {
    if let Ok(g) = parse_groupoid(text) {
        let json = groupoid_to_json(&g);
        let again = parse_groupoid(&json).expect("exported groupoid parses");
        assert_eq!(groupoid_to_json(&again), json);
    }
}

fn fixture(text: &str) {
    if let Ok(f) = text.parse::<Fixture>() {
        let _ = make_fixture_capped(f, 64);
    }
}

type Target = (&'static str, fn(&str));

const TARGETS: [Target; 5] = [
    ("parse_semigroup", semigroup),
    ("parse_coverage", coverage),
    ("parse_nucleus", nucleus),
    ("parse_groupoid", groupoid),
    ("parse_fixture", fixture),
];

#[test]
fn corpus_replays() {
    for (target, run) in TARGETS {
        for text in corpus(target) {
            run(&text);
        }
    }
}

#[test]
fn seeds_are_accepted_where_expected() {
    let opts = ValidateOptions::default();
    assert!(parse_semigroup(&corpus("parse_semigroup")[2], &opts).is_ok());
    assert!(parse_groupoid(&corpus("parse_groupoid")[3]).is_ok());
    assert!(parse_groupoid(&corpus("parse_groupoid")[0]).is_err());
}

/// A seed with one byte range replaced.
fn mutated(target: &'static str) -> impl Strategy<Value = String> {
    let seeds = corpus(target);
    (
        0..seeds.len(),
        any::<prop::sample::Index>(),
        0usize..8,
        "[\\[\\]{}\",:a-z0-9 ]{0,6}",
    )
        .prop_map(move |(i, at, len, insert)| {
            let seed = &seeds[i];
            let mut cut = at.index(seed.len() + 1);
            while !seed.is_char_boundary(cut) {
                cut -= 1;
            }
            let mut end = (cut + len).min(seed.len());
            while !seed.is_char_boundary(end) {
                end += 1;
            }
            format!("{}{insert}{}", &seed[..cut], &seed[end..])
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn mutated_semigroups(text in mutated("parse_semigroup")) {
        semigroup(&text);
    }

    #[test]
    fn mutated_coverages(text in mutated("parse_coverage")) {
        coverage(&text);
    }

    #[test]
    fn mutated_nuclei(text in mutated("parse_nucleus")) {
        nucleus(&text);
    }

    #[test]
    fn mutated_groupoids(text in mutated("parse_groupoid")) {
        groupoid(&text);
    }

    #[test]
    fn arbitrary_text(text in ".{0,64}") {
        for (_, run) in TARGETS {
            run(&text);
        }
    }
}

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use rand::seq::SliceRandom;
use rand::Rng;

use derivqa::depgraph::{Dependency, DependencyGraph, Label};
use derivqa::lexica::Pos;
use derivqa::pipeline::load_sentences;
use derivqa::qaengine::{load_questions, QuestionEntry};
use derivqa::rephrase::{DepTemplate, DerivationPattern, Var};
use derivqa::{Pipeline, PipelineConfig};

pub fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

pub fn config() -> PipelineConfig {
    PipelineConfig::load(&fixtures().join("config.toml")).expect("fixture config")
}

pub fn pipeline() -> Pipeline {
    Pipeline::load(&config()).expect("fixture pipeline")
}

pub fn sentences() -> Vec<(String, String)> {
    load_sentences(&fixtures().join("sentences.tsv")).expect("fixture sentences")
}

pub fn questions() -> Vec<QuestionEntry> {
    load_questions(&fixtures().join("questions.tsv")).expect("fixture questions")
}

/// Pattern-suite rows: (pattern id, original, rephrased).
pub fn pattern_suite() -> Vec<(String, String, String)> {
    std::fs::read_to_string(fixtures().join("pattern_suite.tsv"))
        .expect("pattern suite")
        .lines()
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| {
            let f: Vec<&str> = l.split('\t').collect();
            assert_eq!(f.len(), 3, "bad suite line {l}");
            (f[0].to_owned(), f[1].to_owned(), f[2].to_owned())
        })
        .collect()
}

pub const LEMMAS: [(&str, Pos); 8] = [
    ("succéder", Pos::Verb),
    ("couper", Pos::Verb),
    ("empereur", Pos::Noun),
    ("chef", Pos::Noun),
    ("Titus", Pos::Noun),
    ("courant", Pos::Noun),
    ("sombre", Pos::Adj),
    ("vite", Pos::Adv),
];

pub fn random_label<R: Rng>(rng: &mut R) -> (Label, Option<String>) {
    match rng.gen_range(0..6) {
        0 => (Label::Subject, None),
        1 => (Label::DirObj, None),
        2 => (Label::Attribute, None),
        3 => (Label::Modifier, None),
        4 => (Label::PrepPh, Some("de".to_owned())),
        _ => (Label::PrepPh, Some("à".to_owned())),
    }
}

/// Graph with 1..=max_tokens tokens over a small lemma pool and a few
/// random BASE dependencies.
pub fn random_graph<R: Rng>(rng: &mut R, id: &str, max_tokens: usize) -> DependencyGraph {
    let mut g = DependencyGraph::new(id, "");
    let n = rng.gen_range(1..=max_tokens);
    for _ in 0..n {
        let (lemma, pos) = *LEMMAS.choose(rng).unwrap();
        g.push_token(lemma, lemma, pos);
    }
    if n >= 2 {
        for _ in 0..rng.gen_range(0..=2 * n) {
            let a = rng.gen_range(0..n);
            let mut b = rng.gen_range(0..n);
            if a == b {
                b = (b + 1) % n;
            }
            let (label, prep) = random_label(rng);
            g.add_dep(Dependency {
                label,
                args: [a, b],
                prep,
                provenance: derivqa::depgraph::Provenance::Base,
            });
        }
    }
    g
}

pub fn random_pattern<R: Rng>(rng: &mut R, pivot_pos: Pos) -> DerivationPattern {
    let vars = ['P', 'X', 'Y'];
    let mut input = Vec::new();
    for _ in 0..rng.gen_range(1..=3) {
        let mut a = *vars.choose(rng).unwrap();
        let mut b = *vars.choose(rng).unwrap();
        while b == a {
            b = *vars.choose(rng).unwrap();
        }
        // the first template always mentions the pivot
        if input.is_empty() && a != 'P' && b != 'P' {
            a = 'P';
        }
        let (label, prep) = random_label(rng);
        input.push(DepTemplate {
            label,
            args: [a, b],
            prep,
        });
    }
    let first_other = input[0]
        .args
        .iter()
        .copied()
        .find(|v| *v != 'P')
        .unwrap_or('P');
    DerivationPattern {
        id: "rand".into(),
        pivot_pos,
        derivative_selector: (Pos::Noun, "eur".into()),
        input_schema: input,
        output_schema: vec![DepTemplate {
            label: Label::Attribute,
            args: [first_other, 'D'],
            prep: None,
        }],
        construction_constraint: None,
    }
}

/// Every injective assignment of the schema variables to tokens, with `P`
/// fixed, under which each template is realised by some BASE dependency.
pub fn oracle_bindings(
    g: &DependencyGraph,
    pattern: &DerivationPattern,
    pivot: usize,
) -> BTreeSet<BTreeMap<Var, usize>> {
    let vars: Vec<Var> = pattern
        .input_schema
        .iter()
        .flat_map(|t| t.args)
        .filter(|v| *v != 'P')
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let n = g.tokens.len();
    let mut out = BTreeSet::new();
    let total = n.pow(vars.len() as u32);
    for code in 0..total {
        let mut assignment = BTreeMap::from([('P', pivot)]);
        let mut c = code;
        for v in &vars {
            assignment.insert(*v, c % n);
            c /= n;
        }
        let distinct: BTreeSet<usize> = assignment.values().copied().collect();
        if distinct.len() != assignment.len() {
            continue;
        }
        let realised = pattern.input_schema.iter().all(|t| {
            g.base_deps().any(|d| {
                d.label == t.label
                    && d.prep == t.prep
                    && d.args == [assignment[&t.args[0]], assignment[&t.args[1]]]
            })
        });
        if realised {
            out.insert(assignment);
        }
    }
    out
}

/// Unfolded definition of dependency matching.
pub fn oracle_dep_match(
    q: &DependencyGraph,
    qd: &Dependency,
    t: &DependencyGraph,
    td: &Dependency,
) -> bool {
    if !qd.label.is_known() || qd.label != td.label || qd.prep != td.prep {
        return false;
    }
    for i in 0..2 {
        let want = &q.tokens[qd.args[i]].lemma;
        let tok = &t.tokens[td.args[i]];
        if &tok.lemma != want && !tok.alternates.contains(want) {
            return false;
        }
    }
    true
}

/// Largest number of question dependencies that can be paired with
/// distinct text dependencies, by exhaustive search.
pub fn oracle_coverage(q: &DependencyGraph, t: &DependencyGraph) -> usize {
    fn go(q: &DependencyGraph, t: &DependencyGraph, i: usize, used: &mut Vec<bool>) -> usize {
        if i == q.deps.len() {
            return 0;
        }
        let mut best = go(q, t, i + 1, used);
        for j in 0..t.deps.len() {
            if !used[j] && oracle_dep_match(q, &q.deps[i], t, &t.deps[j]) {
                used[j] = true;
                best = best.max(1 + go(q, t, i + 1, used));
                used[j] = false;
            }
        }
        best
    }
    go(q, t, 0, &mut vec![false; t.deps.len()])
}

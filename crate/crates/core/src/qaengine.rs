//! Question analysis, structural answer matching, the bag-of-terms
//! baseline, and reciprocal-rank scoring.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::depgraph::{
    build_graph, lex, parse_positions, Dependency, DependencyGraph, Label, ParserLexicon, Tag,
};
use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::rephrase::EnrichmentOrder;

/// Answers considered when scoring.
pub const MAX_RANK: usize = 5;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuestionStructure {
    pub question_id: String,
    pub text: String,
    /// Question tokens and their (BASE) dependencies.
    pub graph: DependencyGraph,
}

impl QuestionStructure {
    pub fn deps(&self) -> &[Dependency] {
        &self.graph.deps
    }

    /// Significant lemmas, as used by the baseline index.
    pub fn terms(&self) -> BTreeSet<&str> {
        self.graph
            .tokens
            .iter()
            .filter(|t| t.pos.is_significant())
            .map(|t| t.lemma.as_str())
            .collect()
    }
}

const INTERROGATIVE_DETS: [&str; 1] = ["quel"];

/// Minimal analysis of a question. A fronted "PREP quel N" phrase is set
/// aside, the rest is parsed as a sentence, and the phrase is reattached as
/// PREPPH to the copula attribute, else the object, else the subject.
/// Dependencies touching interrogative pronouns are dropped.
pub fn analyze_question(
    id: &str,
    text: &str,
    lexicon: &ParserLexicon,
) -> Result<QuestionStructure> {
    let lexed = lex(text, lexicon)?;
    let n = lexed.raw.len();
    let find = |p: usize, ok: &dyn Fn(Tag, &str) -> bool| {
        lexed
            .readings
            .get(p)
            .and_then(|r| r.iter().position(|a| ok(a.tag, &a.lemma)))
    };
    let fronted = match (
        find(0, &|t, _| t == Tag::Prep),
        find(1, &|t, l| t == Tag::Det && INTERROGATIVE_DETS.contains(&l)),
        find(2, &|t, _| t == Tag::Noun),
    ) {
        (Some(a), Some(b), Some(c)) if n > 3 => Some([a, b, c]),
        _ => None,
    };

    let unanalyzable = || Error::UnanalyzableQuestion(text.to_owned());
    let mut chosen = BTreeMap::new();
    let mut deps;
    match fronted {
        Some(choice) => {
            let positions: Vec<usize> = (3..n).collect();
            let (c, d, heads) = parse_positions(&lexed, &positions).ok_or_else(unanalyzable)?;
            chosen.extend(positions.into_iter().zip(c));
            chosen.extend((0..3).zip(choice));
            deps = d;
            let host = heads
                .attribute
                .or(heads.object)
                .or(heads.subject)
                .ok_or_else(unanalyzable)?;
            let prep = lexed.readings[0][choice[0]].lemma.clone();
            deps.push((Label::PrepPh, host, Some(prep), 2));
        }
        None => {
            let positions: Vec<usize> = (0..n).collect();
            let (c, d, _) = parse_positions(&lexed, &positions).ok_or_else(unanalyzable)?;
            chosen.extend(positions.into_iter().zip(c));
            deps = d;
        }
    }
    let mut graph = build_graph(id, text, &lexed, &chosen, deps);
    let wh: BTreeSet<usize> = graph
        .tokens
        .iter()
        .filter(|t| t.feature("tag") == Some("WH"))
        .map(|t| t.index)
        .collect();
    graph
        .deps
        .retain(|d| !d.args.iter().any(|a| wh.contains(a)));
    if graph.deps.is_empty() {
        return Err(unanalyzable());
    }
    Ok(QuestionStructure {
        question_id: id.to_owned(),
        text: text.to_owned(),
        graph,
    })
}

/// Labels and preposition equal, and every question argument lemma is the
/// text argument's lemma or one of its alternates.
pub fn dep_match(
    q: &DependencyGraph,
    qd: &Dependency,
    t: &DependencyGraph,
    td: &Dependency,
) -> bool {
    qd.label.is_known()
        && qd.label == td.label
        && qd.prep == td.prep
        && (0..2).all(|i| t.tokens[td.args[i]].answers_to(q.lemma(qd.args[i])))
}

/// Maximum bipartite matching between question and text dependencies.
/// Returns (question dep, text dep) index pairs.
pub fn max_matching(q: &DependencyGraph, t: &DependencyGraph) -> Vec<(usize, usize)> {
    let adj: Vec<Vec<usize>> = q
        .deps
        .iter()
        .map(|qd| {
            t.deps
                .iter()
                .enumerate()
                .filter(|(_, td)| dep_match(q, qd, t, td))
                .map(|(j, _)| j)
                .collect()
        })
        .collect();

    fn augment(
        i: usize,
        adj: &[Vec<usize>],
        seen: &mut [bool],
        owner: &mut [Option<usize>],
    ) -> bool {
        for &j in &adj[i] {
            if seen[j] {
                continue;
            }
            seen[j] = true;
            if owner[j].is_none_or(|o| augment(o, adj, seen, owner)) {
                owner[j] = Some(i);
                return true;
            }
        }
        false
    }

    let mut owner: Vec<Option<usize>> = vec![None; t.deps.len()];
    for i in 0..adj.len() {
        let mut seen = vec![false; t.deps.len()];
        augment(i, &adj, &mut seen, &mut owner);
    }
    let mut pairs: Vec<(usize, usize)> = owner
        .iter()
        .enumerate()
        .filter_map(|(j, o)| o.map(|i| (i, j)))
        .collect();
    pairs.sort_unstable();
    pairs
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnswerCandidate {
    pub sentence_id: String,
    /// Position of the sentence in the bank.
    pub order: usize,
    pub coverage: Ratio<u64>,
    /// (question dep, text dep) index pairs.
    pub matched: Vec<(usize, usize)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AnswerOptions {
    pub k: usize,
    pub require_full_match: bool,
}

impl Default for AnswerOptions {
    fn default() -> Self {
        AnswerOptions {
            k: MAX_RANK,
            require_full_match: false,
        }
    }
}

fn rank(mut cands: Vec<AnswerCandidate>, k: usize) -> Vec<AnswerCandidate> {
    cands.sort_by(|a, b| b.coverage.cmp(&a.coverage).then(a.order.cmp(&b.order)));
    cands.truncate(k);
    cands
}

pub fn answer(
    q: &QuestionStructure,
    bank: &[DependencyGraph],
    opts: AnswerOptions,
) -> Result<Vec<AnswerCandidate>> {
    answer_with(q, bank, opts, Execution::default())
}

/// Sentences ranked by dependency coverage, then bank order.
pub fn answer_with(
    q: &QuestionStructure,
    bank: &[DependencyGraph],
    opts: AnswerOptions,
    exec: Execution,
) -> Result<Vec<AnswerCandidate>> {
    if opts.k == 0 {
        return Err(Error::Invalid("k must be at least 1".into()));
    }
    let total = q.deps().len() as u64;
    if total == 0 {
        return Err(Error::UnanalyzableQuestion(q.text.clone()));
    }
    let indexed: Vec<(usize, &DependencyGraph)> = bank.iter().enumerate().collect();
    let scored = exec::map(exec, &indexed, |(order, g)| {
        let matched = max_matching(&q.graph, g);
        let covered = matched.len() as u64;
        let keep = covered > 0 && (!opts.require_full_match || covered == total);
        keep.then(|| AnswerCandidate {
            sentence_id: g.sentence_id.clone(),
            order: *order,
            coverage: Ratio::new(covered, total),
            matched,
        })
    });
    Ok(rank(scored.into_iter().flatten().collect(), opts.k))
}

/// Inverted index over significant lemmas of the unenriched bank.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BagIndex {
    pub postings: BTreeMap<String, BTreeSet<usize>>,
    pub sentence_ids: Vec<String>,
}

impl BagIndex {
    pub fn build(bank: &[DependencyGraph]) -> Self {
        let mut idx = BagIndex::default();
        for (i, g) in bank.iter().enumerate() {
            idx.sentence_ids.push(g.sentence_id.clone());
            for t in &g.tokens {
                if t.pos.is_significant() && !t.features.contains_key("pattern") {
                    idx.postings.entry(t.lemma.clone()).or_default().insert(i);
                }
            }
        }
        idx
    }
}

/// Sentences ranked by the number of significant lemmas shared with the
/// question, then bank order.
pub fn answer_baseline(q: &QuestionStructure, idx: &BagIndex, k: usize) -> Vec<AnswerCandidate> {
    let terms = q.terms();
    let mut shared: BTreeMap<usize, u64> = BTreeMap::new();
    for term in &terms {
        for &s in idx.postings.get(*term).into_iter().flatten() {
            *shared.entry(s).or_default() += 1;
        }
    }
    let total = terms.len().max(1) as u64;
    let cands = shared
        .into_iter()
        .map(|(order, n)| AnswerCandidate {
            sentence_id: idx.sentence_ids[order].clone(),
            order,
            coverage: Ratio::new(n, total),
            matched: Vec::new(),
        })
        .collect();
    rank(cands, k)
}

/// Rows of the evaluation table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Mode {
    Baseline,
    BaseRephrasing,
    Derivational,
    All,
}

impl Mode {
    pub const LADDER: [Mode; 4] = [
        Mode::Baseline,
        Mode::BaseRephrasing,
        Mode::Derivational,
        Mode::All,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Baseline => "baseline",
            Mode::BaseRephrasing => "base",
            Mode::Derivational => "deriv",
            Mode::All => "all",
        }
    }

    pub fn enrichment(self) -> EnrichmentOrder {
        match self {
            Mode::Baseline => EnrichmentOrder::None,
            Mode::BaseRephrasing => EnrichmentOrder::SynOnly,
            Mode::Derivational => EnrichmentOrder::SynAndDeriv,
            Mode::All => EnrichmentOrder::Both,
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Mode::LADDER
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| format!("unknown mode '{s}' (expected baseline, base, deriv or all)"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuestionResult {
    pub question_id: String,
    /// Rank of the first correct answer within the top five.
    pub rank: Option<usize>,
    pub rr: Ratio<u64>,
    /// The candidate list was empty.
    pub no_answer: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvalReport {
    pub per_question: Vec<QuestionResult>,
    pub mean_score: Ratio<u64>,
    pub no_answer_count: usize,
    /// Questions with candidates, none of them correct.
    pub wrong_only_count: usize,
}

/// Scores ranked candidate lists against gold sentence ids.
pub fn score_run(runs: &[(String, Vec<String>, BTreeSet<String>)]) -> EvalReport {
    let per_question: Vec<QuestionResult> = runs
        .iter()
        .map(|(id, ranked, gold)| {
            let rank = ranked
                .iter()
                .take(MAX_RANK)
                .position(|s| gold.contains(s))
                .map(|p| p + 1);
            QuestionResult {
                question_id: id.clone(),
                rank,
                rr: rank.map_or(Ratio::from_integer(0), |r| Ratio::new(1, r as u64)),
                no_answer: ranked.is_empty(),
            }
        })
        .collect();
    let n = per_question.len() as u64;
    let sum: Ratio<u64> = per_question.iter().map(|q| q.rr).sum();
    EvalReport {
        mean_score: if n == 0 {
            Ratio::from_integer(0)
        } else {
            sum / n
        },
        no_answer_count: per_question.iter().filter(|q| q.no_answer).count(),
        wrong_only_count: per_question
            .iter()
            .filter(|q| !q.no_answer && q.rank.is_none())
            .count(),
        per_question,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuestionEntry {
    pub question_id: String,
    pub text: String,
    pub gold: BTreeSet<String>,
}

/// A question ready for evaluation. Unanalyzable questions take part with
/// an empty candidate list.
#[derive(Clone, Debug)]
pub struct EvalQuestion {
    pub entry: QuestionEntry,
    pub structure: Option<QuestionStructure>,
}

/// Runs every question against `bank` (already enriched for `mode`) and
/// scores the top five answers.
pub fn evaluate(
    questions: &[EvalQuestion],
    bank: &[DependencyGraph],
    mode: Mode,
    opts: AnswerOptions,
    exec: Execution,
) -> Result<EvalReport> {
    let ids: BTreeSet<&str> = bank.iter().map(|g| g.sentence_id.as_str()).collect();
    for q in questions {
        if let Some(missing) = q.entry.gold.iter().find(|g| !ids.contains(g.as_str())) {
            return Err(Error::Config(format!(
                "question {}: gold sentence {missing} is not in the bank",
                q.entry.question_id
            )));
        }
    }
    let index = (mode == Mode::Baseline).then(|| BagIndex::build(bank));
    let opts = AnswerOptions {
        k: opts.k.min(MAX_RANK),
        ..opts
    };
    let ranked = exec::map(exec, questions, |q| -> Result<Vec<String>> {
        let Some(s) = &q.structure else {
            return Ok(Vec::new());
        };
        let cands = match &index {
            Some(idx) => answer_baseline(s, idx, opts.k),
            None => answer_with(s, bank, opts, Execution::Sequential)?,
        };
        Ok(cands.into_iter().map(|c| c.sentence_id).collect())
    });
    let mut runs = Vec::with_capacity(questions.len());
    for (q, r) in questions.iter().zip(ranked) {
        runs.push((q.entry.question_id.clone(), r?, q.entry.gold.clone()));
    }
    Ok(score_run(&runs))
}

pub fn ratio_to_f64(r: Ratio<u64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

pub fn write_report(report: &EvalReport, mode: Mode) -> String {
    let mut out = String::new();
    for q in &report.per_question {
        let rank = q.rank.map_or("-".to_owned(), |r| r.to_string());
        out.push_str(&format!(
            "{}\t{rank}\t{:.6}\n",
            q.question_id,
            ratio_to_f64(q.rr)
        ));
    }
    out.push_str(&format!(
        "{mode}\t{:.6}\t{}\n",
        ratio_to_f64(report.mean_score),
        report.no_answer_count
    ));
    out
}

pub fn parse_questions(text: &str, source: &str) -> Result<Vec<QuestionEntry>> {
    let mut out: Vec<QuestionEntry> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let f: Vec<&str> = line.split('\t').collect();
        let [id, q, gold] = f.as_slice() else {
            return Err(Error::format(
                source,
                i + 1,
                "expected id<TAB>question<TAB>gold_ids",
            ));
        };
        let gold: BTreeSet<String> = gold
            .split(',')
            .map(str::trim)
            .filter(|g| !g.is_empty())
            .map(str::to_owned)
            .collect();
        if id.is_empty() || gold.is_empty() {
            return Err(Error::format(
                source,
                i + 1,
                "question id and gold ids are required",
            ));
        }
        if out.iter().any(|o| o.question_id == *id) {
            return Err(Error::format(
                source,
                i + 1,
                format!("duplicate question id {id}"),
            ));
        }
        out.push(QuestionEntry {
            question_id: (*id).to_owned(),
            text: (*q).to_owned(),
            gold,
        });
    }
    Ok(out)
}

pub fn load_questions(path: &Path) -> Result<Vec<QuestionEntry>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_questions(&text, &path.display().to_string())
}

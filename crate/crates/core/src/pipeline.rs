//! End-to-end wiring: lexica → resource → parsed and enriched bank →
//! answers and evaluation.

use std::path::Path;

use log::{info, warn};

use crate::config::PipelineConfig;
use crate::depgraph::{toy_parse_with_id, DependencyGraph, ParserLexicon};
use crate::derivfilter::{
    build_resource_with, symmetrize_instructions, DerivationalResource, SymmetrizeReport,
};
use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::lexica::{
    load_code_table, load_corpus_lexicon, load_dictionary, load_inflections, load_synonyms,
    CodeTable, CorpusLexicon, Dictionary, SynonymTable,
};
use crate::morphogen::{learn_suffix_model, SuffixModel};
use crate::qaengine::{
    analyze_question, answer_baseline, answer_with, evaluate, AnswerCandidate, AnswerOptions,
    BagIndex, EvalQuestion, EvalReport, Mode, QuestionEntry, QuestionStructure,
};
use crate::rephrase::{enrich_all, load_patterns, DerivationPattern, RephraseContext};
use crate::wsd::{compile_rules, disambiguate, WsdRule};

/// Everything loaded or derived from one configuration.
pub struct Pipeline {
    pub dictionary: Dictionary,
    pub code_table: CodeTable,
    pub corpus: CorpusLexicon,
    pub model: SuffixModel,
    pub parser_lexicon: ParserLexicon,
    pub rules: Vec<WsdRule>,
    pub resource: DerivationalResource,
    pub patterns: Vec<DerivationPattern>,
    pub synonyms: SynonymTable,
    /// Base synonyms merged with the extra tables.
    pub all_synonyms: SynonymTable,
    pub symmetrized: Option<SymmetrizeReport>,
    pub exec: Execution,
}

impl Pipeline {
    pub fn load(config: &PipelineConfig) -> Result<Self> {
        config.check_paths()?;
        let p = &config.paths;
        let mut records = Vec::new();
        for path in &p.dictionary {
            records.extend(load_dictionary(path)?);
        }
        let code_table = match &p.code_table {
            Some(path) => load_code_table(path)?,
            None => CodeTable::bundled(),
        };
        let inflections = load_inflections(&p.inflections)?;
        let corpus = load_corpus_lexicon(&p.corpus_lexicon)?;
        let model = learn_suffix_model(&inflections, &config.morph)?;
        let exec = if config.run.parallel {
            Execution::Parallel
        } else {
            Execution::Sequential
        };

        let mut dictionary = Dictionary::new(records)?;
        let mut resource = build_resource_with(&dictionary, &model, &corpus, &code_table, exec);
        let mut symmetrized = None;
        if config.run.symmetrize {
            let (augmented, report) =
                symmetrize_instructions(dictionary.records(), &resource, &code_table)?;
            info!(
                "symmetrization added {} back-instructions ({} unencodable)",
                report.added.len(),
                report.unencodable.len()
            );
            dictionary = Dictionary::new(augmented)?;
            resource = build_resource_with(&dictionary, &model, &corpus, &code_table, exec);
            symmetrized = Some(report);
        }

        let synonyms = load_synonyms(&p.synonyms, &dictionary)?;
        let mut all_synonyms = synonyms.clone();
        for path in &p.extra_synonyms {
            all_synonyms.merge(&load_synonyms(path, &dictionary)?)?;
        }
        let parser_lexicon = ParserLexicon::from_inflections(&inflections);
        let rules = compile_rules(&dictionary, &parser_lexicon);
        let patterns = load_patterns(&p.patterns)?;
        Ok(Pipeline {
            dictionary,
            code_table,
            corpus,
            model,
            parser_lexicon,
            rules,
            resource,
            patterns,
            synonyms,
            all_synonyms,
            symmetrized,
            exec,
        })
    }

    pub fn context(&self, mode: Mode) -> RephraseContext<'_> {
        RephraseContext {
            resource: &self.resource,
            patterns: &self.patterns,
            synonyms: if mode == Mode::All {
                &self.all_synonyms
            } else {
                &self.synonyms
            },
            dictionary: &self.dictionary,
        }
    }

    /// Parse, disambiguate and enrich one sentence.
    pub fn process_sentence(&self, id: &str, text: &str, mode: Mode) -> Result<DependencyGraph> {
        let g = toy_parse_with_id(id, text, &self.parser_lexicon)?;
        let g = disambiguate(g, &self.rules, &self.dictionary);
        Ok(enrich_all(g, &self.context(mode), mode.enrichment()))
    }

    /// Builds the bank. Sentences that fail to parse are skipped and
    /// returned with their error.
    pub fn preprocess(
        &self,
        sentences: &[(String, String)],
        mode: Mode,
    ) -> (Vec<DependencyGraph>, Vec<(String, Error)>) {
        let results = exec::map(self.exec, sentences, |(id, text)| {
            self.process_sentence(id, text, mode)
        });
        let mut bank = Vec::new();
        let mut skipped = Vec::new();
        for ((id, _), r) in sentences.iter().zip(results) {
            match r {
                Ok(g) => bank.push(g),
                Err(e) => {
                    warn!("skipping sentence {id}: {e}");
                    skipped.push((id.clone(), e));
                }
            }
        }
        (bank, skipped)
    }

    pub fn analyze(&self, id: &str, text: &str) -> Result<QuestionStructure> {
        analyze_question(id, text, &self.parser_lexicon)
    }

    pub fn ask(
        &self,
        bank: &[DependencyGraph],
        question: &str,
        mode: Mode,
        opts: AnswerOptions,
    ) -> Result<Vec<AnswerCandidate>> {
        let q = self.analyze("q", question)?;
        Ok(match mode {
            Mode::Baseline => answer_baseline(&q, &BagIndex::build(bank), opts.k),
            _ => answer_with(&q, bank, opts, self.exec)?,
        })
    }

    pub fn evaluate(
        &self,
        bank: &[DependencyGraph],
        questions: &[QuestionEntry],
        mode: Mode,
        opts: AnswerOptions,
    ) -> Result<EvalReport> {
        let prepared: Vec<EvalQuestion> = questions
            .iter()
            .map(|e| {
                let structure = match self.analyze(&e.question_id, &e.text) {
                    Ok(s) => Some(s),
                    Err(err) => {
                        warn!("question {}: {err}", e.question_id);
                        None
                    }
                };
                EvalQuestion {
                    entry: e.clone(),
                    structure,
                }
            })
            .collect();
        evaluate(&prepared, bank, mode, opts, self.exec)
    }
}

/// Corpus sentences: `sentence_id<TAB>text` per line.
pub fn parse_sentences(text: &str, source: &str) -> Result<Vec<(String, String)>> {
    let mut out: Vec<(String, String)> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((id, sentence)) = line.split_once('\t') else {
            return Err(Error::format(
                source,
                i + 1,
                "expected sentence_id<TAB>text",
            ));
        };
        if id.is_empty() || out.iter().any(|(o, _)| o == id) {
            return Err(Error::format(
                source,
                i + 1,
                format!("missing or duplicate id '{id}'"),
            ));
        }
        out.push((id.to_owned(), sentence.to_owned()));
    }
    Ok(out)
}

pub fn load_sentences(path: &Path) -> Result<Vec<(String, String)>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_sentences(&text, &path.display().to_string())
}

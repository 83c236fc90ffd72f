//! Instruction-based filtering of candidate derivatives and assembly of the
//! sense-aware derivational resource.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use log::{debug, warn};
use num_rational::Ratio;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::lexica::{
    parse_derivation_codes, CodeTable, CorpusLexicon, DerivKind, Dictionary, Pos, SenseRecord,
};
use crate::morphogen::{
    common_prefix, corpus_filter, generate_candidates, CandidateDerivative, SuffixModel,
};

/// Seed used by [`audit_precision`] unless the configuration overrides it.
pub const DEFAULT_AUDIT_SEED: u64 = 0x5EED_D0B0;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct DerivativeRecord {
    pub surface: String,
    pub target_pos: Pos,
    pub suffix: String,
    pub source_lemma: String,
    /// Senses of the source lemma whose instructions license this
    /// derivative. Empty means every sense does (monosemous entries).
    pub licensed_senses: BTreeSet<u32>,
}

impl DerivativeRecord {
    pub fn licensed_for(&self, sense_id: u32) -> bool {
        self.licensed_senses.is_empty() || self.licensed_senses.contains(&sense_id)
    }

    /// Candidate this record was accepted from.
    pub fn as_candidate(&self) -> CandidateDerivative {
        CandidateDerivative {
            source_lemma: self.source_lemma.clone(),
            stem: self.surface[..self.surface.len() - self.suffix.len()].to_owned(),
            suffix: self.suffix.clone(),
            surface: self.surface.clone(),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResourceStats {
    pub entries_processed: usize,
    pub candidates_generated: usize,
    pub derivatives_accepted: usize,
    pub instructions_total: usize,
    pub instructions_unmatched: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DerivationalResource {
    pub by_lemma: BTreeMap<String, Vec<DerivativeRecord>>,
    pub stats: ResourceStats,
}

impl DerivationalResource {
    pub fn from_records(records: impl IntoIterator<Item = DerivativeRecord>) -> Result<Self> {
        let mut by_lemma: BTreeMap<String, Vec<DerivativeRecord>> = BTreeMap::new();
        for r in records {
            if !r.surface.ends_with(r.suffix.as_str()) || r.suffix.is_empty() {
                return Err(Error::Invalid(format!(
                    "'{}' does not end with its suffix '{}'",
                    r.surface, r.suffix
                )));
            }
            let list = by_lemma.entry(r.source_lemma.clone()).or_default();
            if list.iter().any(|o| o.surface == r.surface) {
                return Err(Error::Invalid(format!(
                    "duplicate derivative ({}, {})",
                    r.source_lemma, r.surface
                )));
            }
            list.push(r);
        }
        for list in by_lemma.values_mut() {
            list.sort();
        }
        let stats = ResourceStats {
            derivatives_accepted: by_lemma.values().map(Vec::len).sum(),
            ..ResourceStats::default()
        };
        Ok(DerivationalResource { by_lemma, stats })
    }

    pub fn records(&self, lemma: &str) -> &[DerivativeRecord] {
        self.by_lemma.get(lemma).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn iter(&self) -> impl Iterator<Item = &DerivativeRecord> {
        self.by_lemma.values().flatten()
    }

    pub fn len(&self) -> usize {
        self.by_lemma.values().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

fn sense_instructions<'a>(
    senses: &'a [SenseRecord],
    table: &CodeTable,
) -> Vec<(&'a SenseRecord, Vec<crate::lexica::DerivInstruction>)> {
    senses
        .iter()
        .map(|s| {
            (
                s,
                parse_derivation_codes(&s.deriv_codes, table).instructions,
            )
        })
        .collect()
}

/// Accepts a candidate iff its suffix equals the suffix of an instruction of
/// some sense; records which senses licensed it.
pub fn filter_by_instructions(
    cands: &[CandidateDerivative],
    senses: &[SenseRecord],
    table: &CodeTable,
) -> Vec<DerivativeRecord> {
    let parsed = sense_instructions(senses, table);
    let monosemous = senses.len() == 1;
    let mut out = Vec::new();
    for c in cands {
        if c.suffix.is_empty() {
            continue;
        }
        let mut pos = None;
        let mut licensed = BTreeSet::new();
        for (sense, instrs) in &parsed {
            if let Some(i) = instrs.iter().find(|i| i.suffix == c.suffix) {
                pos.get_or_insert(i.target_pos);
                licensed.insert(sense.sense_id);
            }
        }
        if let Some(target_pos) = pos {
            out.push(DerivativeRecord {
                surface: c.surface.clone(),
                target_pos,
                suffix: c.suffix.clone(),
                source_lemma: c.source_lemma.clone(),
                licensed_senses: if monosemous {
                    BTreeSet::new()
                } else {
                    licensed
                },
            });
        }
    }
    out
}

struct EntryOutcome {
    processed: bool,
    generated: usize,
    records: Vec<DerivativeRecord>,
}

fn process_entry(
    lemma: &str,
    senses: &[SenseRecord],
    model: &SuffixModel,
    lex: &CorpusLexicon,
    table: &CodeTable,
) -> EntryOutcome {
    match generate_candidates(lemma, model) {
        Ok(cands) => {
            let attested = corpus_filter(&cands, lex);
            EntryOutcome {
                processed: true,
                generated: cands.len(),
                records: filter_by_instructions(&attested, senses, table),
            }
        }
        Err(e) => {
            debug!("skipping {lemma}: {e}");
            EntryOutcome {
                processed: false,
                generated: 0,
                records: Vec::new(),
            }
        }
    }
}

pub fn build_resource(
    dictionary: &Dictionary,
    model: &SuffixModel,
    lex: &CorpusLexicon,
    table: &CodeTable,
) -> DerivationalResource {
    build_resource_with(dictionary, model, lex, table, Execution::default())
}

/// Generation, corpus filter and instruction filter for every entry, merged
/// in lemma order.
pub fn build_resource_with(
    dictionary: &Dictionary,
    model: &SuffixModel,
    lex: &CorpusLexicon,
    table: &CodeTable,
    exec: Execution,
) -> DerivationalResource {
    let entries: Vec<(String, Vec<SenseRecord>)> = dictionary
        .lemmas()
        .map(|l| (l.to_owned(), dictionary.senses(l).cloned().collect()))
        .collect();
    let outcomes = exec::map(exec, &entries, |(lemma, senses)| {
        process_entry(lemma, senses, model, lex, table)
    });

    let mut resource = DerivationalResource::default();
    let mut stats = ResourceStats::default();
    for ((lemma, senses), outcome) in entries.iter().zip(outcomes) {
        if outcome.processed {
            stats.entries_processed += 1;
        }
        stats.candidates_generated += outcome.generated;
        let mut records = outcome.records;
        records.sort();
        for (sense, instrs) in sense_instructions(senses, table) {
            stats.instructions_total += instrs.len();
            stats.instructions_unmatched += instrs
                .iter()
                .filter(|i| {
                    !records
                        .iter()
                        .any(|r| r.suffix == i.suffix && r.licensed_for(sense.sense_id))
                })
                .count();
        }
        stats.derivatives_accepted += records.len();
        if !records.is_empty() {
            resource.by_lemma.insert(lemma.clone(), records);
        }
    }
    resource.stats = stats;
    resource
}

pub fn write_resource(resource: &DerivationalResource) -> String {
    resource
        .iter()
        .map(|r| {
            let senses = if r.licensed_senses.is_empty() {
                "*".to_owned()
            } else {
                r.licensed_senses
                    .iter()
                    .map(u32::to_string)
                    .collect::<Vec<_>>()
                    .join(",")
            };
            format!(
                "{}\t{}\t{}\t{}\t{}\n",
                r.source_lemma, r.surface, r.target_pos, r.suffix, senses
            )
        })
        .collect()
}

pub fn parse_resource(text: &str, source: &str) -> Result<DerivationalResource> {
    let mut records = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |m: &str| Error::format(source, i + 1, m);
        let f: Vec<&str> = line.split('\t').collect();
        if f.len() != 5 {
            return Err(err(
                "expected lemma<TAB>surface<TAB>pos<TAB>suffix<TAB>senses",
            ));
        }
        let target_pos: Pos = f[2].parse().map_err(|e: String| err(&e))?;
        let licensed_senses = if f[4] == "*" {
            BTreeSet::new()
        } else {
            f[4].split(',')
                .map(|s| s.parse::<u32>().map_err(|_| err("bad sense id")))
                .collect::<Result<_>>()?
        };
        records.push(DerivativeRecord {
            surface: f[1].to_owned(),
            target_pos,
            suffix: f[3].to_owned(),
            source_lemma: f[0].to_owned(),
            licensed_senses,
        });
    }
    DerivationalResource::from_records(records).map_err(|e| Error::format(source, 0, e.to_string()))
}

pub fn load_resource(path: &Path) -> Result<DerivationalResource> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_resource(&text, &path.display().to_string())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrecisionAudit {
    pub sampled: usize,
    pub correct: usize,
}

impl PrecisionAudit {
    pub fn precision(&self) -> Ratio<u64> {
        Ratio::new(self.correct as u64, self.sampled as u64)
    }
}

/// Draws a seeded uniform sample without replacement and counts the
/// derivatives the gold judgements mark correct.
pub fn audit_precision(
    resource: &DerivationalResource,
    sample_size: usize,
    gold: &BTreeMap<String, bool>,
    seed: u64,
) -> Result<PrecisionAudit> {
    let all: Vec<&DerivativeRecord> = resource.iter().collect();
    if all.is_empty() || sample_size == 0 {
        return Err(Error::Invalid("nothing to sample".into()));
    }
    let n = if sample_size > all.len() {
        warn!(
            "sample size {sample_size} exceeds the {} derivatives; auditing all of them",
            all.len()
        );
        all.len()
    } else {
        sample_size
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut picked = rand::seq::index::sample(&mut rng, all.len(), n).into_vec();
    picked.sort_unstable();
    let mut correct = 0;
    for i in picked {
        let surface = &all[i].surface;
        match gold.get(surface) {
            Some(true) => correct += 1,
            Some(false) => {}
            None => return Err(Error::Invalid(format!("no gold judgement for '{surface}'"))),
        }
    }
    Ok(PrecisionAudit {
        sampled: n,
        correct,
    })
}

/// Gold judgements: `surface<TAB>yes|no` per line.
pub fn parse_audit_gold(text: &str, source: &str) -> Result<BTreeMap<String, bool>> {
    let mut gold = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let verdict = match line.split_once('\t') {
            Some((surface, "yes")) => (surface, true),
            Some((surface, "no")) => (surface, false),
            _ => return Err(Error::format(source, i + 1, "expected surface<TAB>yes|no")),
        };
        gold.insert(verdict.0.to_owned(), verdict.1);
    }
    Ok(gold)
}

pub fn load_audit_gold(path: &Path) -> Result<BTreeMap<String, bool>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_audit_gold(&text, &path.display().to_string())
}

/// A back-instruction added to a non-verbal sense.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BackInstruction {
    pub derivative_lemma: String,
    pub sense_id: u32,
    pub verb_lemma: String,
    pub code_letter: char,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SymmetrizeReport {
    pub added: Vec<BackInstruction>,
    /// (derivative, verb) pairs whose back-suffix has no code letter.
    pub unencodable: Vec<(String, String)>,
}

/// Copies verbal derivation instructions onto the entries of the derived
/// nouns and adjectives: for every verb sense whose instruction produced a
/// derivative present in the dictionary with the same domain, that entry
/// gains a `VERBAL` code leading back to the verb.
pub fn symmetrize_instructions(
    records: &[SenseRecord],
    resource: &DerivationalResource,
    table: &CodeTable,
) -> Result<(Vec<SenseRecord>, SymmetrizeReport)> {
    let dict = Dictionary::new(records.to_vec())?;
    let mut out = records.to_vec();
    let mut report = SymmetrizeReport::default();
    let mut done = BTreeSet::new();

    for verb in records.iter().filter(|r| r.pos == Pos::Verb) {
        let instrs = parse_derivation_codes(&verb.deriv_codes, table).instructions;
        for instr in instrs
            .iter()
            .filter(|i| matches!(i.target_pos, Pos::Noun | Pos::Adj))
        {
            for derivative in resource
                .records(&verb.lemma)
                .iter()
                .filter(|d| d.suffix == instr.suffix && d.licensed_for(verb.sense_id))
            {
                for target in dict
                    .senses_with_pos(&derivative.surface, derivative.target_pos)
                    .filter(|s| s.domain_code == verb.domain_code)
                {
                    // The derivative's own stem, when the verb still starts
                    // with it, else whatever prefix the two share.
                    let stem = derivative
                        .surface
                        .strip_suffix(derivative.suffix.as_str())
                        .filter(|s| verb.lemma.starts_with(s))
                        .map(str::to_owned)
                        .unwrap_or_else(|| {
                            common_prefix([verb.lemma.as_str(), derivative.surface.as_str()])
                        });
                    let back_suffix = &verb.lemma[stem.len()..];
                    let Some(letter) = (!back_suffix.is_empty())
                        .then(|| table.letter_for(DerivKind::Verbal, back_suffix))
                        .flatten()
                    else {
                        report
                            .unencodable
                            .push((derivative.surface.clone(), verb.lemma.clone()));
                        continue;
                    };
                    let key = (target.lemma.clone(), target.sense_id, letter);
                    if done.contains(&key) || target.deriv_codes.contains(letter) {
                        continue;
                    }
                    done.insert(key);
                    let slot = out
                        .iter_mut()
                        .find(|r| r.lemma == target.lemma && r.sense_id == target.sense_id)
                        .expect("target comes from the same records");
                    if slot.deriv_codes.is_empty() {
                        slot.deriv_codes = letter.to_string();
                    } else {
                        slot.deriv_codes = format!("{} {letter}", slot.deriv_codes);
                    }
                    report.added.push(BackInstruction {
                        derivative_lemma: target.lemma.clone(),
                        sense_id: target.sense_id,
                        verb_lemma: verb.lemma.clone(),
                        code_letter: letter,
                    });
                }
            }
        }
    }
    Ok((out, report))
}

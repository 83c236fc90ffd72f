//! Lexical resources: machine dictionary, derivation code table,
//! inflectional lexicon, corpus word list and synonym lists.
//!
//! All resources are UTF-8, tab-separated, one record per line. Blank lines
//! and lines starting with `#` are ignored. Every loader has a `parse_*`
//! twin working on an in-memory string and a `write_*` serializer producing
//! text the parser reads back into an identical model.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Part of speech, shared by dictionary senses and parsed tokens.
#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(rename_all = "UPPERCASE")]
pub enum Pos {
    Noun,
    Verb,
    Adj,
    Adv,
    Det,
    Prep,
    Pron,
    #[default]
    Other,
}

impl Pos {
    /// Nouns, verbs, adjectives and adverbs.
    pub fn is_significant(self) -> bool {
        matches!(self, Pos::Noun | Pos::Verb | Pos::Adj | Pos::Adv)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Pos::Noun => "NOUN",
            Pos::Verb => "VERB",
            Pos::Adj => "ADJ",
            Pos::Adv => "ADV",
            Pos::Det => "DET",
            Pos::Prep => "PREP",
            Pos::Pron => "PRON",
            Pos::Other => "OTHER",
        }
    }
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Pos {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Ok(match s {
            "NOUN" => Pos::Noun,
            "VERB" => Pos::Verb,
            "ADJ" => Pos::Adj,
            "ADV" => Pos::Adv,
            "DET" => Pos::Det,
            "PREP" => Pos::Prep,
            "PRON" => Pos::Pron,
            "OTHER" => Pos::Other,
            _ => return Err(format!("unknown part of speech '{s}'")),
        })
    }
}

/// Lowercases a form; diacritics are preserved.
pub fn normalize(form: &str) -> String {
    form.to_lowercase()
}

fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn source_name(path: &Path) -> String {
    path.display().to_string()
}

/// Numbered content lines: skips blank lines and `#` comments.
fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.strip_suffix('\r').unwrap_or(l)))
        .filter(|(_, l)| !l.trim().is_empty() && !l.starts_with('#'))
}

fn split_list(field: &str) -> Vec<String> {
    field
        .split(';')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(str::to_owned)
        .collect()
}

fn opt_field(field: &str) -> Option<String> {
    if field.is_empty() {
        None
    } else {
        Some(field.to_owned())
    }
}

// ---------------------------------------------------------------------------
// Dictionary
// ---------------------------------------------------------------------------

/// One sense of a dictionary entry.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SenseRecord {
    pub lemma: String,
    pub sense_id: u32,
    pub pos: Pos,
    pub domain_code: String,
    pub class_code: String,
    pub operator: String,
    pub gloss: String,
    pub examples: Vec<String>,
    pub conjugation_code: Option<String>,
    pub construction_codes: Vec<String>,
    /// Raw positional derivation code string, e.g. `-Q- - - RB- - -`.
    pub deriv_codes: String,
    pub register_level: Option<i32>,
}

impl SenseRecord {
    pub fn validate(&self) -> Result<()> {
        let id = || format!("({}, {})", self.lemma, self.sense_id);
        if self.lemma.is_empty() {
            return Err(Error::Invalid("empty lemma".into()));
        }
        if self.sense_id == 0 {
            return Err(Error::Invalid(format!("{}: sense ids start at 1", id())));
        }
        if !self.pos.is_significant() {
            return Err(Error::Invalid(format!(
                "{}: dictionary entries must be NOUN, VERB, ADJ or ADV",
                id()
            )));
        }
        let is_verb = self.pos == Pos::Verb;
        let has_conj = self.conjugation_code.is_some();
        let has_constr = !self.construction_codes.is_empty();
        if is_verb && !(has_conj && has_constr) {
            return Err(Error::Invalid(format!(
                "{}: verbs need conjugation and construction codes",
                id()
            )));
        }
        if !is_verb && (has_conj || has_constr) {
            return Err(Error::Invalid(format!(
                "{}: conjugation and construction codes are reserved for verbs",
                id()
            )));
        }
        Ok(())
    }
}

/// Dictionary senses plus a per-lemma index.
#[derive(Clone, Debug, Default)]
pub struct Dictionary {
    records: Vec<SenseRecord>,
    by_lemma: BTreeMap<String, Vec<usize>>,
}

impl Dictionary {
    pub fn new(records: Vec<SenseRecord>) -> Result<Self> {
        let mut by_lemma: BTreeMap<String, Vec<usize>> = BTreeMap::new();
        let mut seen = BTreeSet::new();
        for (i, r) in records.iter().enumerate() {
            r.validate()?;
            if !seen.insert((r.lemma.clone(), r.sense_id)) {
                return Err(Error::DuplicateSense {
                    lemma: r.lemma.clone(),
                    sense_id: r.sense_id,
                });
            }
            by_lemma.entry(r.lemma.clone()).or_default().push(i);
        }
        Ok(Dictionary { records, by_lemma })
    }

    pub fn records(&self) -> &[SenseRecord] {
        &self.records
    }

    pub fn into_records(self) -> Vec<SenseRecord> {
        self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn lemmas(&self) -> impl Iterator<Item = &str> {
        self.by_lemma.keys().map(String::as_str)
    }

    pub fn senses(&self, lemma: &str) -> impl Iterator<Item = &SenseRecord> {
        self.by_lemma
            .get(lemma)
            .into_iter()
            .flatten()
            .map(move |&i| &self.records[i])
    }

    pub fn senses_with_pos(&self, lemma: &str, pos: Pos) -> impl Iterator<Item = &SenseRecord> {
        self.senses(lemma).filter(move |s| s.pos == pos)
    }

    pub fn sense(&self, lemma: &str, sense_id: u32) -> Option<&SenseRecord> {
        self.senses(lemma).find(|s| s.sense_id == sense_id)
    }

    pub fn pos_set(&self, lemma: &str) -> BTreeSet<Pos> {
        self.senses(lemma).map(|s| s.pos).collect()
    }
}

const DICTIONARY_COLUMNS: usize = 12;

pub fn parse_dictionary(text: &str, source: &str) -> Result<Vec<SenseRecord>> {
    let mut records = Vec::new();
    let mut seen = BTreeSet::new();
    for (line_no, line) in data_lines(text) {
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != DICTIONARY_COLUMNS {
            return Err(Error::format(
                source,
                line_no,
                format!(
                    "expected {DICTIONARY_COLUMNS} columns, found {}",
                    fields.len()
                ),
            ));
        }
        let sense_id: u32 = fields[1]
            .parse()
            .map_err(|_| Error::format(source, line_no, format!("bad sense id '{}'", fields[1])))?;
        let pos: Pos = fields[2]
            .parse()
            .map_err(|e: String| Error::format(source, line_no, e))?;
        let register_level = if fields[11].is_empty() {
            None
        } else {
            Some(fields[11].parse().map_err(|_| {
                Error::format(source, line_no, format!("bad level '{}'", fields[11]))
            })?)
        };
        let record = SenseRecord {
            lemma: fields[0].to_owned(),
            sense_id,
            pos,
            domain_code: fields[3].to_owned(),
            class_code: fields[4].to_owned(),
            operator: fields[5].to_owned(),
            gloss: fields[6].to_owned(),
            examples: split_list(fields[7]),
            conjugation_code: opt_field(fields[8]),
            construction_codes: split_list(fields[9]),
            deriv_codes: fields[10].to_owned(),
            register_level,
        };
        record
            .validate()
            .map_err(|e| Error::format(source, line_no, e.to_string()))?;
        if !seen.insert((record.lemma.clone(), record.sense_id)) {
            return Err(Error::format(
                source,
                line_no,
                format!("duplicate sense ({}, {})", record.lemma, record.sense_id),
            ));
        }
        records.push(record);
    }
    Ok(records)
}

/// Loads one dictionary file. Verb and non-verb files are loaded separately
/// and concatenated with [`Dictionary::new`], which re-checks uniqueness.
pub fn load_dictionary(path: &Path) -> Result<Vec<SenseRecord>> {
    parse_dictionary(&read_file(path)?, &source_name(path))
}

pub fn write_dictionary(records: &[SenseRecord]) -> String {
    let mut out = String::new();
    for r in records {
        let fields = [
            r.lemma.clone(),
            r.sense_id.to_string(),
            r.pos.to_string(),
            r.domain_code.clone(),
            r.class_code.clone(),
            r.operator.clone(),
            r.gloss.clone(),
            r.examples.join(";"),
            r.conjugation_code.clone().unwrap_or_default(),
            r.construction_codes.join(";"),
            r.deriv_codes.clone(),
            r.register_level.map(|l| l.to_string()).unwrap_or_default(),
        ];
        out.push_str(&fields.join("\t"));
        out.push('\n');
    }
    out
}

// ---------------------------------------------------------------------------
// Derivation codes
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum DerivKind {
    Nominal,
    VerbalAdjective,
    Adverbial,
    Verbal,
}

impl DerivKind {
    pub fn target_pos(self) -> Pos {
        match self {
            DerivKind::Nominal => Pos::Noun,
            DerivKind::VerbalAdjective => Pos::Adj,
            DerivKind::Adverbial => Pos::Adv,
            DerivKind::Verbal => Pos::Verb,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            DerivKind::Nominal => "NOMINAL",
            DerivKind::VerbalAdjective => "VERBAL_ADJECTIVE",
            DerivKind::Adverbial => "ADVERBIAL",
            DerivKind::Verbal => "VERBAL",
        }
    }
}

impl FromStr for DerivKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Ok(match s {
            "NOMINAL" => DerivKind::Nominal,
            "VERBAL_ADJECTIVE" => DerivKind::VerbalAdjective,
            "ADVERBIAL" => DerivKind::Adverbial,
            "VERBAL" => DerivKind::Verbal,
            _ => return Err(format!("unknown derivation kind '{s}'")),
        })
    }
}

/// A licensed derivative: which suffix to attach and what it yields.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct DerivInstruction {
    pub target_pos: Pos,
    pub suffix: String,
    pub kind: DerivKind,
    pub code_letter: Option<char>,
}

impl DerivInstruction {
    pub fn new(kind: DerivKind, suffix: &str) -> Result<Self> {
        let instr = DerivInstruction {
            target_pos: kind.target_pos(),
            suffix: suffix.to_owned(),
            kind,
            code_letter: None,
        };
        instr.validate()?;
        Ok(instr)
    }

    pub fn validate(&self) -> Result<()> {
        if self.suffix.is_empty() || self.suffix.chars().any(char::is_whitespace) {
            return Err(Error::Invalid(format!("bad suffix '{}'", self.suffix)));
        }
        if self.kind.target_pos() != self.target_pos {
            return Err(Error::Invalid(format!(
                "{} derivatives are {}, not {}",
                self.kind.as_str(),
                self.kind.target_pos(),
                self.target_pos
            )));
        }
        Ok(())
    }
}

/// Mapping from code letters to instruction templates.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CodeTable {
    entries: BTreeMap<char, DerivInstruction>,
}

const DEFAULT_CODE_TABLE: &str = include_str!("../data/code_table.tsv");

impl CodeTable {
    /// The bundled table covering the attested codes.
    pub fn bundled() -> Self {
        parse_code_table(DEFAULT_CODE_TABLE, "<bundled code table>")
            .expect("bundled code table is valid")
    }

    pub fn insert(&mut self, letter: char, mut template: DerivInstruction) -> Result<()> {
        if letter == '-' || letter.is_whitespace() {
            return Err(Error::Invalid(format!(
                "'{letter}' cannot be a code letter"
            )));
        }
        template.validate()?;
        template.code_letter = Some(letter);
        self.entries.insert(letter, template);
        Ok(())
    }

    pub fn get(&self, letter: char) -> Option<&DerivInstruction> {
        self.entries.get(&letter)
    }

    pub fn iter(&self) -> impl Iterator<Item = (char, &DerivInstruction)> {
        self.entries.iter().map(|(c, i)| (*c, i))
    }

    /// First code letter whose template has this kind and suffix.
    pub fn letter_for(&self, kind: DerivKind, suffix: &str) -> Option<char> {
        self.entries
            .iter()
            .find(|(_, i)| i.kind == kind && i.suffix == suffix)
            .map(|(c, _)| *c)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

pub fn parse_code_table(text: &str, source: &str) -> Result<CodeTable> {
    let mut table = CodeTable::default();
    for (line_no, line) in data_lines(text) {
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 4 {
            return Err(Error::format(source, line_no, "expected 4 columns"));
        }
        let mut chars = fields[0].chars();
        let letter = match (chars.next(), chars.next()) {
            (Some(c), None) => c,
            _ => return Err(Error::format(source, line_no, "code must be one character")),
        };
        let kind: DerivKind = fields[1]
            .parse()
            .map_err(|e: String| Error::format(source, line_no, e))?;
        let target_pos: Pos = fields[2]
            .parse()
            .map_err(|e: String| Error::format(source, line_no, e))?;
        let template = DerivInstruction {
            target_pos,
            suffix: fields[3].to_owned(),
            kind,
            code_letter: None,
        };
        table
            .insert(letter, template)
            .map_err(|e| Error::format(source, line_no, e.to_string()))?;
    }
    Ok(table)
}

pub fn load_code_table(path: &Path) -> Result<CodeTable> {
    parse_code_table(&read_file(path)?, &source_name(path))
}

pub fn write_code_table(table: &CodeTable) -> String {
    table
        .iter()
        .map(|(c, i)| format!("{c}\t{}\t{}\t{}\n", i.kind.as_str(), i.target_pos, i.suffix))
        .collect()
}

/// Result of reading a positional derivation code string.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ParsedCodes {
    pub instructions: Vec<DerivInstruction>,
    /// Code letters absent from the table, in order of appearance.
    pub unknown: Vec<char>,
}

/// Reads every code letter of `raw`; dashes and whitespace separate slots
/// and slot positions carry no meaning.
pub fn parse_derivation_codes(raw: &str, table: &CodeTable) -> ParsedCodes {
    let mut parsed = ParsedCodes::default();
    for c in raw.chars().filter(|c| *c != '-' && !c.is_whitespace()) {
        match table.get(c) {
            Some(template) => parsed.instructions.push(template.clone()),
            None => parsed.unknown.push(c),
        }
    }
    parsed
}

// ---------------------------------------------------------------------------
// Inflectional lexicon
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct InflectionEntry {
    pub surface_form: String,
    pub lemma: String,
    pub morph_tags: Vec<String>,
}

pub fn parse_inflections(text: &str, source: &str) -> Result<Vec<InflectionEntry>> {
    let mut out = Vec::new();
    for (line_no, line) in data_lines(text) {
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 3 {
            return Err(Error::format(
                source,
                line_no,
                "expected form<TAB>lemma<TAB>tags",
            ));
        }
        if fields[0].is_empty() || fields[1].is_empty() {
            return Err(Error::format(source, line_no, "empty form or lemma"));
        }
        let morph_tags = fields[2]
            .split(':')
            .filter(|t| !t.is_empty())
            .map(str::to_owned)
            .collect();
        out.push(InflectionEntry {
            surface_form: fields[0].to_owned(),
            lemma: fields[1].to_owned(),
            morph_tags,
        });
    }
    Ok(out)
}

pub fn load_inflections(path: &Path) -> Result<Vec<InflectionEntry>> {
    parse_inflections(&read_file(path)?, &source_name(path))
}

pub fn write_inflections(entries: &[InflectionEntry]) -> String {
    entries
        .iter()
        .map(|e| {
            format!(
                "{}\t{}\t{}\n",
                e.surface_form,
                e.lemma,
                e.morph_tags.join(":")
            )
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Corpus lexicon
// ---------------------------------------------------------------------------

/// Forms attested in a reference corpus, keyed by [`normalize`]d form.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CorpusLexicon {
    counts: BTreeMap<String, u64>,
}

impl CorpusLexicon {
    pub fn from_counts<I, S>(counts: I) -> Self
    where
        I: IntoIterator<Item = (S, u64)>,
        S: AsRef<str>,
    {
        let mut lex = CorpusLexicon::default();
        for (form, count) in counts {
            lex.add(form.as_ref(), count);
        }
        lex
    }

    pub fn add(&mut self, form: &str, count: u64) {
        *self.counts.entry(normalize(form)).or_insert(0) += count;
    }

    pub fn contains(&self, form: &str) -> bool {
        self.counts.contains_key(&normalize(form))
    }

    pub fn count(&self, form: &str) -> Option<u64> {
        self.counts.get(&normalize(form)).copied()
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, u64)> {
        self.counts.iter().map(|(f, c)| (f.as_str(), *c))
    }
}

pub fn parse_corpus_lexicon(text: &str, source: &str) -> Result<CorpusLexicon> {
    let mut lex = CorpusLexicon::default();
    for (line_no, line) in data_lines(text) {
        let (form, count) = line
            .split_once('\t')
            .ok_or_else(|| Error::format(source, line_no, "expected form<TAB>count"))?;
        if form.is_empty() {
            return Err(Error::format(source, line_no, "empty form"));
        }
        let count: u64 = count
            .parse()
            .map_err(|_| Error::format(source, line_no, format!("bad count '{count}'")))?;
        lex.add(form, count);
    }
    Ok(lex)
}

pub fn load_corpus_lexicon(path: &Path) -> Result<CorpusLexicon> {
    parse_corpus_lexicon(&read_file(path)?, &source_name(path))
}

pub fn write_corpus_lexicon(lex: &CorpusLexicon) -> String {
    lex.iter().map(|(f, c)| format!("{f}\t{c}\n")).collect()
}

// ---------------------------------------------------------------------------
// Synonyms
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SenseKey {
    Any,
    Sense(u32),
}

impl fmt::Display for SenseKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SenseKey::Any => f.write_str("*"),
            SenseKey::Sense(s) => write!(f, "{s}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SynonymEntry {
    pub pos: Pos,
    pub synonyms: BTreeSet<String>,
}

/// Sense-keyed synonym lists. Synonyms share the part of speech of their
/// head; the head's part of speech is resolved against the dictionary at
/// load time because the file format does not carry it.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SynonymTable {
    entries: BTreeMap<(String, SenseKey), SynonymEntry>,
}

impl SynonymTable {
    pub fn insert(&mut self, lemma: &str, key: SenseKey, pos: Pos, synonym: &str) -> Result<()> {
        if synonym == lemma {
            return Err(Error::Invalid(format!(
                "'{lemma}' listed as its own synonym"
            )));
        }
        let entry = self
            .entries
            .entry((lemma.to_owned(), key))
            .or_insert_with(|| SynonymEntry {
                pos,
                synonyms: BTreeSet::new(),
            });
        if entry.pos != pos {
            return Err(Error::Invalid(format!(
                "'{lemma}' synonyms mix {} and {pos}",
                entry.pos
            )));
        }
        entry.synonyms.insert(synonym.to_owned());
        Ok(())
    }

    /// Synonyms of `lemma` used as `pos`: the wildcard list, plus the list of
    /// `sense` when one is given.
    pub fn lookup(&self, lemma: &str, pos: Pos, sense: Option<u32>) -> BTreeSet<&str> {
        let mut keys = vec![SenseKey::Any];
        if let Some(s) = sense {
            keys.push(SenseKey::Sense(s));
        }
        keys.into_iter()
            .filter_map(|k| self.entries.get(&(lemma.to_owned(), k)))
            .filter(|e| e.pos == pos)
            .flat_map(|e| e.synonyms.iter().map(String::as_str))
            .collect()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&str, SenseKey, &SynonymEntry)> {
        self.entries.iter().map(|((l, k), e)| (l.as_str(), *k, e))
    }

    /// Union of two tables (used to stack extra synonym dictionaries).
    pub fn merge(&mut self, other: &SynonymTable) -> Result<()> {
        for (lemma, key, entry) in other.entries() {
            for s in &entry.synonyms {
                self.insert(lemma, key, entry.pos, s)?;
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

pub fn parse_synonyms(text: &str, source: &str, dict: &Dictionary) -> Result<SynonymTable> {
    let mut table = SynonymTable::default();
    for (line_no, line) in data_lines(text) {
        let err = |m: String| Error::format(source, line_no, m);
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 3 {
            return Err(err("expected lemma<TAB>sense-or-*<TAB>synonyms".into()));
        }
        let lemma = fields[0];
        let key = if fields[1] == "*" {
            SenseKey::Any
        } else {
            SenseKey::Sense(
                fields[1]
                    .parse()
                    .map_err(|_| err(format!("bad sense '{}'", fields[1])))?,
            )
        };
        let pos = match key {
            SenseKey::Sense(s) => dict
                .sense(lemma, s)
                .map(|r| r.pos)
                .ok_or_else(|| err(format!("unknown sense ({lemma}, {s})")))?,
            SenseKey::Any => {
                let set = dict.pos_set(lemma);
                let mut it = set.iter();
                match (it.next(), it.next()) {
                    (Some(p), None) => *p,
                    (None, _) => return Err(err(format!("'{lemma}' is not in the dictionary"))),
                    _ => {
                        return Err(err(format!(
                            "'{lemma}' has several parts of speech; use a sense id"
                        )))
                    }
                }
            }
        };
        let synonyms = split_list(fields[2]);
        if synonyms.is_empty() {
            return Err(err("no synonyms listed".into()));
        }
        for syn in synonyms {
            let syn_pos = dict.pos_set(&syn);
            if !syn_pos.is_empty() && !syn_pos.contains(&pos) {
                return Err(err(format!("'{syn}' is not a {pos} like '{lemma}'")));
            }
            table
                .insert(lemma, key, pos, &syn)
                .map_err(|e| err(e.to_string()))?;
        }
    }
    Ok(table)
}

pub fn load_synonyms(path: &Path, dict: &Dictionary) -> Result<SynonymTable> {
    parse_synonyms(&read_file(path)?, &source_name(path), dict)
}

pub fn write_synonyms(table: &SynonymTable) -> String {
    table
        .entries()
        .map(|(lemma, key, e)| {
            let syns: Vec<&str> = e.synonyms.iter().map(String::as_str).collect();
            format!("{lemma}\t{key}\t{}\n", syns.join(";"))
        })
        .collect()
}

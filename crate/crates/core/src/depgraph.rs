//! Dependency structures, the JSON-lines dependency bank and a small
//! deterministic parser for a restricted French grammar.
//!
//! Any external parser can feed the rest of the pipeline by writing a bank
//! file; [`toy_parse`] only exists so that everything runs offline.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lexica::{InflectionEntry, Pos};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(from = "String", into = "String")]
pub enum Label {
    Subject,
    DirObj,
    Attribute,
    PrepPh,
    Modifier,
    /// Labels produced by other parsers. Kept verbatim, never matched.
    Other(String),
}

impl Label {
    pub fn as_str(&self) -> &str {
        match self {
            Label::Subject => "SUBJECT",
            Label::DirObj => "DIROBJ",
            Label::Attribute => "ATTRIBUTE",
            Label::PrepPh => "PREPPH",
            Label::Modifier => "MODIFIER",
            Label::Other(s) => s,
        }
    }

    pub fn is_known(&self) -> bool {
        !matches!(self, Label::Other(_))
    }
}

impl From<String> for Label {
    fn from(s: String) -> Self {
        match s.as_str() {
            "SUBJECT" => Label::Subject,
            "DIROBJ" => Label::DirObj,
            "ATTRIBUTE" => Label::Attribute,
            "PREPPH" => Label::PrepPh,
            "MODIFIER" => Label::Modifier,
            _ => Label::Other(s),
        }
    }
}

impl From<Label> for String {
    fn from(l: Label) -> String {
        l.as_str().to_owned()
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Provenance {
    Base,
    Synonym,
    Derivational,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenNode {
    #[serde(rename = "i")]
    pub index: usize,
    pub surface: String,
    pub lemma: String,
    pub pos: Pos,
    pub features: BTreeMap<String, String>,
    #[serde(rename = "sense")]
    pub sense_id: Option<u32>,
    pub alternates: BTreeSet<String>,
}

impl TokenNode {
    /// The lemma or one of its disjunctive alternates equals `lemma`.
    pub fn answers_to(&self, lemma: &str) -> bool {
        self.lemma == lemma || self.alternates.contains(lemma)
    }

    pub fn feature(&self, key: &str) -> Option<&str> {
        self.features.get(key).map(String::as_str)
    }
}

/// A labelled relation between two tokens. `args` is `[head, dependent]`;
/// PREPPH additionally carries its preposition as a literal string.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Dependency {
    pub label: Label,
    pub args: [usize; 2],
    pub prep: Option<String>,
    pub provenance: Provenance,
}

impl Dependency {
    pub fn new(label: Label, head: usize, dependent: usize) -> Self {
        Dependency {
            label,
            args: [head, dependent],
            prep: None,
            provenance: Provenance::Base,
        }
    }

    pub fn prepph(head: usize, prep: &str, dependent: usize) -> Self {
        Dependency {
            label: Label::PrepPh,
            args: [head, dependent],
            prep: Some(prep.to_owned()),
            provenance: Provenance::Base,
        }
    }

    pub fn with_provenance(mut self, provenance: Provenance) -> Self {
        self.provenance = provenance;
        self
    }

    pub fn touches(&self, token: usize) -> bool {
        self.args.contains(&token)
    }

    fn check_arity(&self) -> std::result::Result<(), String> {
        match (&self.label, &self.prep) {
            (Label::PrepPh, None) => Err("PREPPH without preposition".into()),
            (Label::PrepPh, Some(p)) if p.is_empty() => Err("empty preposition".into()),
            (Label::Other(_), _) | (Label::PrepPh, Some(_)) | (_, None) => Ok(()),
            (l, Some(_)) => Err(format!("{l} takes no preposition")),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DependencyGraph {
    #[serde(rename = "id")]
    pub sentence_id: String,
    pub text: String,
    pub tokens: Vec<TokenNode>,
    pub deps: Vec<Dependency>,
}

impl DependencyGraph {
    pub fn new(sentence_id: &str, text: &str) -> Self {
        DependencyGraph {
            sentence_id: sentence_id.to_owned(),
            text: text.to_owned(),
            ..Default::default()
        }
    }

    pub fn push_token(&mut self, surface: &str, lemma: &str, pos: Pos) -> usize {
        let index = self.tokens.len();
        self.tokens.push(TokenNode {
            index,
            surface: surface.to_owned(),
            lemma: lemma.to_owned(),
            pos,
            ..Default::default()
        });
        index
    }

    /// Inserts `dep` unless an identical one is present. Returns whether the
    /// graph changed.
    pub fn add_dep(&mut self, dep: Dependency) -> bool {
        if self.deps.contains(&dep) {
            false
        } else {
            self.deps.push(dep);
            true
        }
    }

    pub fn lemma(&self, token: usize) -> &str {
        &self.tokens[token].lemma
    }

    pub fn base_deps(&self) -> impl Iterator<Item = &Dependency> {
        self.deps
            .iter()
            .filter(|d| d.provenance == Provenance::Base)
    }

    pub fn validate(&self) -> std::result::Result<(), String> {
        for (i, t) in self.tokens.iter().enumerate() {
            if t.index != i {
                return Err(format!("token {i} carries index {}", t.index));
            }
            if t.lemma.is_empty() {
                return Err(format!("token {i} has an empty lemma"));
            }
            if t.alternates.contains(&t.lemma) {
                return Err(format!("token {i} lists its own lemma as alternate"));
            }
        }
        let mut seen = BTreeSet::new();
        for d in &self.deps {
            if let Some(a) = d.args.iter().find(|&&a| a >= self.tokens.len()) {
                return Err(format!("{} refers to missing token {a}", d.label));
            }
            d.check_arity()?;
            if !seen.insert(d) {
                return Err(format!("duplicate dependency {}", d.label));
            }
        }
        Ok(())
    }

    /// Lemma-level view of one dependency.
    pub fn describe(&self, d: &Dependency) -> String {
        match &d.prep {
            Some(p) => format!(
                "{}({}, {p}, {})",
                d.label,
                self.lemma(d.args[0]),
                self.lemma(d.args[1])
            ),
            None => format!(
                "{}({}, {})",
                d.label,
                self.lemma(d.args[0]),
                self.lemma(d.args[1])
            ),
        }
    }
}

type LemmaDep = (Label, String, Option<String>, String, Option<Provenance>);

fn lemma_view(g: &DependencyGraph, ignore_provenance: bool) -> BTreeSet<LemmaDep> {
    g.deps
        .iter()
        .map(|d| {
            (
                d.label.clone(),
                g.lemma(d.args[0]).to_owned(),
                d.prep.clone(),
                g.lemma(d.args[1]).to_owned(),
                (!ignore_provenance).then_some(d.provenance),
            )
        })
        .collect()
}

/// Structural equality over labels and argument lemmas.
pub fn graph_equal(a: &DependencyGraph, b: &DependencyGraph, ignore_provenance: bool) -> bool {
    lemma_view(a, ignore_provenance) == lemma_view(b, ignore_provenance)
}

pub fn write_depbank(graphs: &[DependencyGraph]) -> String {
    let mut out = String::new();
    for g in graphs {
        out.push_str(&serde_json::to_string(g).expect("graphs always serialize"));
        out.push('\n');
    }
    out
}

pub fn parse_depbank(text: &str, source: &str) -> Result<Vec<DependencyGraph>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let g: DependencyGraph =
            serde_json::from_str(line).map_err(|e| Error::format(source, i + 1, e.to_string()))?;
        g.validate()
            .map_err(|m| Error::format(source, i + 1, format!("record {}: {m}", g.sentence_id)))?;
        out.push(g);
    }
    Ok(out)
}

pub fn load_depbank(path: &Path) -> Result<Vec<DependencyGraph>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_depbank(&text, &path.display().to_string())
}

pub fn save_depbank(graphs: &[DependencyGraph], path: &Path) -> Result<()> {
    std::fs::write(path, write_depbank(graphs)).map_err(|e| Error::io(path, e))
}

/// Grammatical category read from the first tag of an inflection entry.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Tag {
    Noun,
    ProperNoun,
    Verb,
    Aux,
    Copula,
    Adj,
    Adv,
    Det,
    Prep,
    /// Contracted preposition + article (du, des, au, aux).
    PrepDet,
    Pron,
    Wh,
}

impl Tag {
    fn parse(s: &str) -> Option<Tag> {
        Some(match s {
            "N" => Tag::Noun,
            "NP" => Tag::ProperNoun,
            "V" => Tag::Verb,
            "AUX" => Tag::Aux,
            "COP" => Tag::Copula,
            "ADJ" => Tag::Adj,
            "ADV" => Tag::Adv,
            "DET" => Tag::Det,
            "PREP" => Tag::Prep,
            "PREPDET" => Tag::PrepDet,
            "PRON" => Tag::Pron,
            "WH" => Tag::Wh,
            _ => return None,
        })
    }

    fn as_str(self) -> &'static str {
        match self {
            Tag::Noun => "N",
            Tag::ProperNoun => "NP",
            Tag::Verb => "V",
            Tag::Aux => "AUX",
            Tag::Copula => "COP",
            Tag::Adj => "ADJ",
            Tag::Adv => "ADV",
            Tag::Det => "DET",
            Tag::Prep => "PREP",
            Tag::PrepDet => "PREPDET",
            Tag::Pron => "PRON",
            Tag::Wh => "WH",
        }
    }

    pub fn pos(self) -> Pos {
        match self {
            Tag::Noun | Tag::ProperNoun => Pos::Noun,
            Tag::Verb => Pos::Verb,
            Tag::Aux | Tag::Copula => Pos::Other,
            Tag::Adj => Pos::Adj,
            Tag::Adv => Pos::Adv,
            Tag::Det => Pos::Det,
            Tag::Prep | Tag::PrepDet => Pos::Prep,
            Tag::Pron | Tag::Wh => Pos::Pron,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Analysis {
    pub tag: Tag,
    pub lemma: String,
}

/// Form → analyses, in lexicon order. Entries whose first tag is not a
/// parser category are ignored.
#[derive(Clone, Debug, Default)]
pub struct ParserLexicon {
    forms: BTreeMap<String, Vec<Analysis>>,
}

impl ParserLexicon {
    pub fn from_inflections(entries: &[InflectionEntry]) -> Self {
        let mut lex = ParserLexicon::default();
        for e in entries {
            if let Some(tag) = e.morph_tags.first().and_then(|t| Tag::parse(t)) {
                lex.insert(&e.surface_form, tag, &e.lemma);
            }
        }
        lex
    }

    pub fn insert(&mut self, form: &str, tag: Tag, lemma: &str) {
        let list = self.forms.entry(form.to_owned()).or_default();
        let a = Analysis {
            tag,
            lemma: lemma.to_owned(),
        };
        if !list.contains(&a) {
            list.push(a);
        }
    }

    pub fn analyses(&self, form: &str) -> Option<&[Analysis]> {
        self.forms
            .get(form)
            .or_else(|| self.forms.get(&form.to_lowercase()))
            .map(Vec::as_slice)
    }

    pub fn len(&self) -> usize {
        self.forms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forms.is_empty()
    }
}

const INVERTED_CLITICS: [&str; 8] = ["t-il", "t-elle", "t-on", "il", "elle", "on", "ils", "elles"];
const MAX_READINGS: usize = 4096;

#[derive(Clone, Debug)]
pub(crate) struct RawToken {
    pub surface: String,
    pub inverted: bool,
}

pub(crate) fn tokenize(sentence: &str) -> Result<Vec<RawToken>> {
    let trimmed = sentence.trim().trim_end_matches(['.', '?', '!']).trim_end();
    if trimmed.contains([',', ';', ':']) {
        return Err(Error::Unparsable(format!("punctuation in '{sentence}'")));
    }
    let mut out = Vec::new();
    for word in trimmed.split_whitespace() {
        let word = word.replace('’', "'");
        let mut rest = word.as_str();
        if let Some(p) = rest.find('\'') {
            out.push(RawToken {
                surface: rest[..=p].to_owned(),
                inverted: false,
            });
            rest = &rest[p + 1..];
        }
        let mut clitic = None;
        if let Some(h) = rest.find('-') {
            let tail = &rest[h + 1..];
            if INVERTED_CLITICS.contains(&tail) {
                clitic = Some(tail.trim_start_matches("t-").to_owned());
                rest = &rest[..h];
            }
        }
        if !rest.is_empty() {
            out.push(RawToken {
                surface: rest.to_owned(),
                inverted: false,
            });
        }
        if let Some(c) = clitic {
            out.push(RawToken {
                surface: c,
                inverted: true,
            });
        }
    }
    if out.is_empty() {
        return Err(Error::Unparsable("empty sentence".into()));
    }
    Ok(out)
}

#[derive(Clone, Copy)]
struct Tok<'a> {
    tag: Tag,
    lemma: &'a str,
    inverted: bool,
    /// Position in the graph.
    at: usize,
}

type RawDep = (Label, usize, Option<String>, usize);

/// Greedy recursive-descent parser over one reading of the sentence.
struct Parser<'a> {
    toks: Vec<Tok<'a>>,
    pos: usize,
    deps: Vec<RawDep>,
}

/// Heads produced by a clause, used by the question analyzer to reattach a
/// fronted prepositional phrase.
#[derive(Clone, Copy, Debug, Default)]
pub(crate) struct ClauseHeads {
    pub subject: Option<usize>,
    pub object: Option<usize>,
    pub attribute: Option<usize>,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<Tok<'a>> {
        self.toks.get(self.pos).copied()
    }

    fn peek_tag(&self) -> Option<Tag> {
        self.peek().map(|t| t.tag)
    }

    fn eat(&mut self, tag: Tag) -> Option<Tok<'a>> {
        match self.peek() {
            Some(t) if t.tag == tag && !t.inverted => {
                self.pos += 1;
                Some(t)
            }
            _ => None,
        }
    }

    fn eat_inverted(&mut self) -> Option<Tok<'a>> {
        match self.peek() {
            Some(t) if t.inverted => {
                self.pos += 1;
                Some(t)
            }
            _ => None,
        }
    }

    fn dep(&mut self, label: Label, head: usize, dependent: usize) {
        self.deps.push((label, head, None, dependent));
    }

    /// DET? ADJ* N ADJ* NP? (de NP)*, a pronoun, or a bare proper noun.
    /// With `bare_det` the determiner was already consumed by a contracted
    /// preposition.
    fn np(&mut self, bare_det: bool) -> Option<usize> {
        let start = (self.pos, self.deps.len());
        if let Some(t) = self.eat(Tag::Pron).or_else(|| self.eat(Tag::Wh)) {
            return Some(t.at);
        }
        if !bare_det {
            self.eat(Tag::Det);
        }
        let mut adjs = Vec::new();
        while let Some(a) = self.eat(Tag::Adj) {
            adjs.push(a.at);
        }
        let head = match self.eat(Tag::Noun).or_else(|| self.eat(Tag::ProperNoun)) {
            Some(h) => h,
            None => {
                (self.pos, _) = start;
                return None;
            }
        };
        if head.tag == Tag::Noun {
            while let Some(a) = self.eat(Tag::Adj) {
                adjs.push(a.at);
            }
            if let Some(p) = self.eat(Tag::ProperNoun) {
                self.dep(Label::Attribute, head.at, p.at);
            }
        }
        for a in adjs {
            self.dep(Label::Modifier, head.at, a);
        }
        while let Some(dep) = self.pp(Some("de")) {
            self.deps.push((Label::PrepPh, head.at, Some(dep.0), dep.1));
        }
        Some(head.at)
    }

    /// PREP NP or PREPDET NP, optionally restricted to one preposition.
    fn pp(&mut self, only: Option<&str>) -> Option<(String, usize)> {
        let start = (self.pos, self.deps.len());
        let p = self.peek()?;
        let bare_det = match p.tag {
            Tag::Prep => false,
            Tag::PrepDet => true,
            _ => return None,
        };
        if only.is_some_and(|o| o != p.lemma) {
            return None;
        }
        self.pos += 1;
        match self.np(bare_det) {
            Some(h) => Some((p.lemma.to_owned(), h)),
            None => {
                self.pos = start.0;
                self.deps.truncate(start.1);
                None
            }
        }
    }

    /// Verb group and its complements. Returns the clause heads.
    fn vp(&mut self, mut subject: Option<usize>) -> Option<ClauseHeads> {
        let mut heads = ClauseHeads::default();
        if self.eat(Tag::Copula).is_some() {
            if let Some(c) = self.eat_inverted() {
                subject.get_or_insert(c.at);
            }
            let subject = subject?;
            let attr = match self.eat(Tag::Adj) {
                Some(a) => a.at,
                None => self.np(false)?,
            };
            self.dep(Label::Attribute, subject, attr);
            heads.subject = Some(subject);
            heads.attribute = Some(attr);
            return Some(heads);
        }
        if self.eat(Tag::Aux).is_some() {
            if let Some(c) = self.eat_inverted() {
                subject.get_or_insert(c.at);
            }
            if self.peek_tag() != Some(Tag::Verb) {
                return None;
            }
        }
        let verb = self.eat(Tag::Verb)?;
        if let Some(c) = self.eat_inverted() {
            subject.get_or_insert(c.at);
        }
        if let Some(s) = subject {
            self.dep(Label::Subject, verb.at, s);
        }
        heads.subject = subject;
        while let Some(a) = self.eat(Tag::Adv) {
            self.dep(Label::Modifier, verb.at, a.at);
        }
        let object = match self.pp(Some("à")) {
            Some((_, h)) => Some(h),
            None => self.np(false),
        };
        if let Some(o) = object {
            self.dep(Label::DirObj, verb.at, o);
            heads.object = Some(o);
        }
        while let Some((prep, h)) = self.pp(None) {
            self.deps.push((Label::PrepPh, verb.at, Some(prep), h));
        }
        while let Some(a) = self.eat(Tag::Adv) {
            self.dep(Label::Modifier, verb.at, a.at);
        }
        Some(heads)
    }

    fn done(&self) -> bool {
        self.pos == self.toks.len()
    }

    /// Clause, verb phrase without subject, or bare noun phrase; the first
    /// shape that consumes every token wins.
    fn sentence(toks: Vec<Tok<'a>>) -> Option<(Vec<RawDep>, ClauseHeads)> {
        let attempts: [fn(&mut Parser<'a>) -> Option<ClauseHeads>; 3] = [
            |p| {
                let s = p.np(false)?;
                p.vp(Some(s))
            },
            |p| p.vp(None),
            |p| {
                let h = p.np(false)?;
                Some(ClauseHeads {
                    subject: Some(h),
                    ..Default::default()
                })
            },
        ];
        for attempt in attempts {
            let mut p = Parser {
                toks: toks.clone(),
                pos: 0,
                deps: Vec::new(),
            };
            if let Some(heads) = attempt(&mut p) {
                if p.done() {
                    return Some((p.deps, heads));
                }
            }
        }
        None
    }
}

/// Tokens of a sentence with their readings, before parsing.
pub(crate) struct Lexed<'l> {
    pub raw: Vec<RawToken>,
    pub readings: Vec<&'l [Analysis]>,
}

pub(crate) fn lex<'l>(sentence: &str, lexicon: &'l ParserLexicon) -> Result<Lexed<'l>> {
    let raw = tokenize(sentence)?;
    let mut readings = Vec::with_capacity(raw.len());
    let mut unknown = Vec::new();
    for t in &raw {
        match lexicon.analyses(&t.surface) {
            Some(a) if !a.is_empty() => readings.push(a),
            _ => unknown.push(t.surface.clone()),
        }
    }
    if !unknown.is_empty() {
        return Err(Error::UnknownTokens(unknown));
    }
    Ok(Lexed { raw, readings })
}

/// Tries every reading of the tokens at `positions`, in lexicon order, and
/// returns the first one the grammar accepts together with its choice of
/// analysis per position.
pub(crate) fn parse_positions(
    lexed: &Lexed<'_>,
    positions: &[usize],
) -> Option<(Vec<usize>, Vec<RawDep>, ClauseHeads)> {
    let radices: Vec<usize> = positions.iter().map(|&p| lexed.readings[p].len()).collect();
    let mut choice = vec![0usize; positions.len()];
    for _ in 0..MAX_READINGS {
        let toks: Vec<Tok> = positions
            .iter()
            .zip(&choice)
            .map(|(&p, &c)| {
                let a = &lexed.readings[p][c];
                Tok {
                    tag: if lexed.raw[p].inverted {
                        Tag::Pron
                    } else {
                        a.tag
                    },
                    lemma: &a.lemma,
                    inverted: lexed.raw[p].inverted,
                    at: p,
                }
            })
            .collect();
        if let Some((deps, heads)) = Parser::sentence(toks) {
            return Some((choice, deps, heads));
        }
        // odometer, last position fastest
        let mut k = choice.len();
        loop {
            if k == 0 {
                return None;
            }
            k -= 1;
            choice[k] += 1;
            if choice[k] < radices[k] {
                break;
            }
            choice[k] = 0;
        }
    }
    None
}

pub(crate) fn build_graph(
    sentence_id: &str,
    sentence: &str,
    lexed: &Lexed<'_>,
    chosen: &BTreeMap<usize, usize>,
    deps: Vec<RawDep>,
) -> DependencyGraph {
    let mut g = DependencyGraph::new(sentence_id, sentence);
    for (p, raw) in lexed.raw.iter().enumerate() {
        let a = &lexed.readings[p][chosen.get(&p).copied().unwrap_or(0)];
        let tag = if raw.inverted { Tag::Pron } else { a.tag };
        let i = g.push_token(&raw.surface, &a.lemma, tag.pos());
        let t = &mut g.tokens[i];
        t.features.insert("tag".into(), tag.as_str().into());
        if tag == Tag::ProperNoun {
            t.features.insert("proper".into(), "yes".into());
        }
        if raw.inverted {
            t.features.insert("clitic".into(), "inverted".into());
        }
    }
    for (label, head, prep, dependent) in deps {
        let d = match prep {
            Some(p) => Dependency::prepph(head, &p, dependent),
            None => Dependency::new(label, head, dependent),
        };
        g.add_dep(d);
    }
    g
}

/// Parses one sentence of the restricted grammar. Only BASE dependencies
/// are produced.
pub fn toy_parse(sentence: &str, lexicon: &ParserLexicon) -> Result<DependencyGraph> {
    toy_parse_with_id("", sentence, lexicon)
}

pub fn toy_parse_with_id(
    sentence_id: &str,
    sentence: &str,
    lexicon: &ParserLexicon,
) -> Result<DependencyGraph> {
    let lexed = lex(sentence, lexicon)?;
    let positions: Vec<usize> = (0..lexed.raw.len()).collect();
    let (choice, deps, _) = parse_positions(&lexed, &positions)
        .ok_or_else(|| Error::Unparsable(sentence.to_owned()))?;
    let chosen = positions.into_iter().zip(choice).collect();
    Ok(build_graph(sentence_id, sentence, &lexed, &chosen, deps))
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub(crate) fn lexicon() -> ParserLexicon {
        let mut l = ParserLexicon::default();
        for (form, tag, lemma) in [
            ("Domitien", Tag::ProperNoun, "Domitien"),
            ("Titus", Tag::ProperNoun, "Titus"),
            ("succéda", Tag::Verb, "succéder"),
            ("à", Tag::Prep, "à"),
            ("de", Tag::Prep, "de"),
            ("De", Tag::Prep, "de"),
            ("l'", Tag::Det, "le"),
            ("le", Tag::Det, "le"),
            ("la", Tag::Det, "le"),
            ("empereur", Tag::Noun, "empereur"),
            ("successeur", Tag::Noun, "successeur"),
            ("chef", Tag::Noun, "chef"),
            ("quel", Tag::Det, "quel"),
            ("est", Tag::Copula, "être"),
            ("il", Tag::Pron, "il"),
            ("a", Tag::Aux, "avoir"),
            ("coupé", Tag::Adj, "coupé"),
            ("coupé", Tag::Verb, "couper"),
            ("courant", Tag::Noun, "courant"),
            ("coupure", Tag::Noun, "coupure"),
            ("prend", Tag::Verb, "prendre"),
            ("fuite", Tag::Noun, "fuite"),
            ("nuit", Tag::Noun, "nuit"),
            ("succède", Tag::Verb, "succéder"),
            ("au", Tag::PrepDet, "à"),
            ("du", Tag::PrepDet, "de"),
            ("jour", Tag::Noun, "jour"),
            ("vite", Tag::Adv, "vite"),
            ("sombre", Tag::Adj, "sombre"),
        ] {
            l.insert(form, tag, lemma);
        }
        l
    }

    fn view(g: &DependencyGraph) -> Vec<String> {
        let mut v: Vec<_> = g.deps.iter().map(|d| g.describe(d)).collect();
        v.sort();
        v
    }

    #[test]
    fn successor_sentence() {
        let g = toy_parse("Domitien succéda à l'empereur Titus", &lexicon()).unwrap();
        assert_eq!(
            view(&g),
            vec![
                "ATTRIBUTE(empereur, Titus)",
                "DIROBJ(succéder, empereur)",
                "SUBJECT(succéder, Domitien)",
            ]
        );
        assert!(g.deps.iter().all(|d| d.provenance == Provenance::Base));
        assert_eq!(g.tokens[3].surface, "l'");
        g.validate().unwrap();
    }

    #[test]
    fn composed_tense_backtracks_over_adjective_reading() {
        let g = toy_parse("il a coupé le courant", &lexicon()).unwrap();
        assert_eq!(
            view(&g),
            vec!["DIROBJ(couper, courant)", "SUBJECT(couper, il)"]
        );
        assert_eq!(g.tokens[2].lemma, "couper");
    }

    #[test]
    fn contracted_preposition_and_fragments() {
        let g = toy_parse("la nuit succède au jour", &lexicon()).unwrap();
        assert_eq!(
            view(&g),
            vec!["DIROBJ(succéder, jour)", "SUBJECT(succéder, nuit)"]
        );
        let g = toy_parse("la coupure de courant", &lexicon()).unwrap();
        assert_eq!(view(&g), vec!["PREPPH(coupure, de, courant)"]);
        let g = toy_parse("la nuit sombre", &lexicon()).unwrap();
        assert_eq!(view(&g), vec!["MODIFIER(nuit, sombre)"]);
        let g = toy_parse("il prend vite la fuite.", &lexicon()).unwrap();
        assert_eq!(
            view(&g),
            vec![
                "DIROBJ(prendre, fuite)",
                "MODIFIER(prendre, vite)",
                "SUBJECT(prendre, il)"
            ]
        );
    }

    #[test]
    fn copula_with_inverted_clitic() {
        let g = toy_parse("Domitien est-il le successeur?", &lexicon()).unwrap();
        assert_eq!(view(&g), vec!["ATTRIBUTE(Domitien, successeur)"]);
        assert_eq!(g.tokens[2].feature("clitic"), Some("inverted"));
    }

    #[test]
    fn failures_are_explicit() {
        assert!(matches!(
            toy_parse("", &lexicon()),
            Err(Error::Unparsable(_))
        ));
        assert!(matches!(
            toy_parse("  ?", &lexicon()),
            Err(Error::Unparsable(_))
        ));
        match toy_parse("il se formalise", &lexicon()) {
            Err(Error::UnknownTokens(t)) => assert_eq!(t, vec!["se", "formalise"]),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            toy_parse("le le", &lexicon()),
            Err(Error::Unparsable(_))
        ));
        assert!(matches!(
            toy_parse("il prend, la fuite", &lexicon()),
            Err(Error::Unparsable(_))
        ));
    }

    #[test]
    fn bank_round_trip_and_equality() {
        let mut g =
            toy_parse_with_id("s1", "Domitien succéda à l'empereur Titus", &lexicon()).unwrap();
        g.tokens[4].alternates.insert("chef".into());
        g.tokens[4].sense_id = Some(1);
        let text = write_depbank(std::slice::from_ref(&g));
        assert!(text.starts_with("{\"id\":\"s1\",\"text\":"));
        assert!(text
            .contains("{\"i\":0,\"surface\":\"Domitien\",\"lemma\":\"Domitien\",\"pos\":\"NOUN\""));
        let back = parse_depbank(&text, "t").unwrap();
        assert_eq!(back, vec![g.clone()]);
        assert!(graph_equal(&g, &g, false));

        let mut enriched = g.clone();
        let d = enriched.push_token("successeur", "successeur", Pos::Noun);
        enriched.add_dep(
            Dependency::new(Label::Attribute, 0, d).with_provenance(Provenance::Derivational),
        );
        enriched.add_dep(Dependency::prepph(d, "de", 4).with_provenance(Provenance::Derivational));
        assert!(!graph_equal(&g, &enriched, true));

        let mut relabelled = g.clone();
        for d in &mut relabelled.deps {
            d.provenance = Provenance::Synonym;
        }
        assert!(graph_equal(&g, &relabelled, true));
        assert!(!graph_equal(&g, &relabelled, false));
    }

    #[test]
    fn bank_rejects_schema_violations() {
        let g = toy_parse_with_id("bad", "la nuit succède au jour", &lexicon()).unwrap();
        let mut broken = g.clone();
        broken.deps.push(Dependency::new(Label::Subject, 0, 99));
        let err = parse_depbank(&write_depbank(&[broken]), "bank").unwrap_err();
        assert!(err.to_string().contains("record bad"), "{err}");
        let mut broken = g.clone();
        broken.deps.push(broken.deps[0].clone());
        assert!(parse_depbank(&write_depbank(&[broken]), "bank").is_err());
        assert!(parse_depbank("{not json}\n", "bank").is_err());
    }

    #[test]
    fn unknown_labels_survive_round_trip() {
        let mut g = toy_parse_with_id("u", "la nuit sombre", &lexicon()).unwrap();
        g.add_dep(Dependency::new(Label::Other("COORD".into()), 1, 2));
        let back = parse_depbank(&write_depbank(&[g.clone()]), "t").unwrap();
        assert_eq!(back[0].deps[1].label, Label::Other("COORD".into()));
        assert_eq!(back, vec![g]);
    }
}

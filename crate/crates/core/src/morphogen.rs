//! Suffix learning and candidate-derivative over-generation.
//!
//! The suffix model is learned from an inflectional lexicon by
//! longest-common-prefix stemming: each lemma together with its inflected
//! forms forms a family whose common prefix is a stem, and every other lemma
//! starting with a known stem joins that stem's derivational family. The
//! endings left over after removing the stem are the suffix candidates.
//!
//! Generation then strips known endings from a lemma to find its plausible
//! stems and attaches every known suffix to every stem. Precision is left to
//! the corpus and instruction filters downstream.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::{self, Execution};
use crate::lexica::{CorpusLexicon, InflectionEntry};

const VOWELS: &str = "aeiouyàâäéèêëîïôöùûüÿæœ";

pub fn is_vowel(c: char) -> bool {
    VOWELS.contains(c)
}

/// Number of maximal vowel groups in `word`.
pub fn syllable_count(word: &str) -> usize {
    let mut count = 0;
    let mut in_group = false;
    for c in word.chars().flat_map(char::to_lowercase) {
        let v = is_vowel(c);
        if v && !in_group {
            count += 1;
        }
        in_group = v;
    }
    count
}

fn char_len(s: &str) -> usize {
    s.chars().count()
}

/// Longest common prefix of all words, on character boundaries.
pub(crate) fn common_prefix<'a, I>(words: I) -> String
where
    I: IntoIterator<Item = &'a str>,
{
    let mut it = words.into_iter();
    let Some(first) = it.next() else {
        return String::new();
    };
    let mut prefix_len = first.len();
    for w in it {
        let shared: usize = first
            .char_indices()
            .zip(w.chars())
            .take_while(|((_, a), b)| a == b)
            .map(|((i, a), _)| i + a.len_utf8())
            .last()
            .unwrap_or(0);
        prefix_len = prefix_len.min(shared);
    }
    first[..prefix_len].to_owned()
}

/// Stem adjustment applied when a suffix is attached.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum EuphonyRule {
    /// Drop a final `letter` of the stem before a vowel-initial suffix.
    DropFinalBeforeVowel { letter: char },
    /// Replace the stem ending `ending` by `replacement` before suffixes
    /// starting with one of `before`.
    Alternate {
        ending: String,
        replacement: String,
        before: Vec<String>,
    },
}

impl EuphonyRule {
    fn apply(&self, stem: &mut String, suffix: &str) {
        match self {
            EuphonyRule::DropFinalBeforeVowel { letter } => {
                if suffix.chars().next().is_some_and(is_vowel) && stem.ends_with(*letter) {
                    stem.pop();
                }
            }
            EuphonyRule::Alternate {
                ending,
                replacement,
                before,
            } => {
                if stem.ends_with(ending.as_str())
                    && before.iter().any(|b| suffix.starts_with(b.as_str()))
                {
                    stem.truncate(stem.len() - ending.len());
                    stem.push_str(replacement);
                }
            }
        }
    }
}

pub fn default_euphony() -> Vec<EuphonyRule> {
    vec![EuphonyRule::DropFinalBeforeVowel { letter: 'e' }]
}

/// Stem as it surfaces in front of `suffix` after the ordered rules.
pub fn adjust_stem(stem: &str, suffix: &str, rules: &[EuphonyRule]) -> String {
    let mut s = stem.to_owned();
    for rule in rules {
        rule.apply(&mut s, suffix);
    }
    s
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct MorphParams {
    /// Minimum number of distinct stems a suffix must be seen with.
    pub threshold: u32,
    pub min_stem_len: usize,
    pub max_stems_per_lemma: usize,
    /// Entries with fewer vowel groups are not stemmed.
    pub min_syllables: usize,
    pub euphony: Vec<EuphonyRule>,
}

impl Default for MorphParams {
    fn default() -> Self {
        MorphParams {
            threshold: 1,
            min_stem_len: 3,
            max_stems_per_lemma: 2,
            min_syllables: 3,
            euphony: default_euphony(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuffixModel {
    /// Suffix → number of distinct stems it was observed with.
    pub suffixes: BTreeMap<String, u32>,
    /// Family stems seen while learning; a stripped lemma is a plausible
    /// stem when it is one of these.
    pub stems: BTreeSet<String>,
    pub min_stem_len: usize,
    pub max_stems_per_lemma: usize,
    pub min_syllables: usize,
    pub euphony: Vec<EuphonyRule>,
}

impl SuffixModel {
    /// Builds a model from explicit inventories.
    pub fn from_parts<S, T>(suffixes: S, stems: T, params: &MorphParams) -> Self
    where
        S: IntoIterator<Item = (String, u32)>,
        T: IntoIterator<Item = String>,
    {
        SuffixModel {
            suffixes: suffixes
                .into_iter()
                .filter(|(s, _)| !s.is_empty())
                .collect(),
            stems: stems.into_iter().collect(),
            min_stem_len: params.min_stem_len,
            max_stems_per_lemma: params.max_stems_per_lemma,
            min_syllables: params.min_syllables,
            euphony: params.euphony.clone(),
        }
    }
}

pub fn learn_suffix_model(
    inflections: &[InflectionEntry],
    params: &MorphParams,
) -> Result<SuffixModel> {
    if inflections.is_empty() {
        return Err(Error::EmptyInflections);
    }
    if params.threshold == 0 {
        return Err(Error::Config("suffix threshold must be at least 1".into()));
    }

    let mut families: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();
    for e in inflections {
        let members = families.entry(e.lemma.as_str()).or_default();
        members.insert(e.lemma.as_str());
        members.insert(e.surface_form.as_str());
    }

    let mut seen_with: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
    let mut stems = BTreeSet::new();
    for members in families.values() {
        let stem = common_prefix(members.iter().copied());
        if char_len(&stem) < params.min_stem_len {
            continue;
        }
        for m in members {
            let residual = &m[stem.len()..];
            if !residual.is_empty() {
                seen_with
                    .entry(residual.to_owned())
                    .or_default()
                    .insert(stem.clone());
            }
        }
        stems.insert(stem);
    }

    // Lemmas extending a known stem contribute derivational endings.
    for lemma in families.keys() {
        for (i, c) in lemma.char_indices() {
            let end = i + c.len_utf8();
            if end == lemma.len() {
                break;
            }
            let prefix = &lemma[..end];
            if char_len(prefix) >= params.min_stem_len && stems.contains(prefix) {
                seen_with
                    .entry(lemma[end..].to_owned())
                    .or_default()
                    .insert(prefix.to_owned());
            }
        }
    }

    let suffixes = seen_with
        .into_iter()
        .filter_map(|(suffix, stems)| {
            let n = u32::try_from(stems.len()).unwrap_or(u32::MAX);
            (n >= params.threshold).then_some((suffix, n))
        })
        .collect();
    Ok(SuffixModel {
        suffixes,
        stems,
        min_stem_len: params.min_stem_len,
        max_stems_per_lemma: params.max_stems_per_lemma,
        min_syllables: params.min_syllables,
        euphony: params.euphony.clone(),
    })
}

/// Plausible stems of `lemma`, longest first.
///
/// A stem is the lemma minus a known ending (or minus nothing) that is
/// itself a learned family stem. When no such stem exists the lemma minus
/// its most frequent known ending is used, or the lemma itself.
pub fn stem_candidates(lemma: &str, model: &SuffixModel) -> Result<Vec<String>> {
    if syllable_count(lemma) < model.min_syllables {
        return Err(Error::TooShort(lemma.to_owned()));
    }
    let endings = std::iter::once("").chain(
        model
            .suffixes
            .keys()
            .map(String::as_str)
            .filter(|s| lemma.ends_with(s)),
    );
    let mut stems: Vec<&str> = endings
        .map(|e| &lemma[..lemma.len() - e.len()])
        .filter(|s| char_len(s) >= model.min_stem_len && model.stems.contains(*s))
        .collect();
    stems.sort_by(|a, b| char_len(b).cmp(&char_len(a)).then_with(|| a.cmp(b)));
    stems.dedup();
    stems.truncate(model.max_stems_per_lemma);
    if !stems.is_empty() {
        return Ok(stems.into_iter().map(str::to_owned).collect());
    }

    let fallback = model
        .suffixes
        .iter()
        .filter(|(s, _)| lemma.ends_with(s.as_str()))
        .filter(|(s, _)| char_len(&lemma[..lemma.len() - s.len()]) >= model.min_stem_len)
        .max_by(|(a, fa), (b, fb)| {
            fa.cmp(fb)
                .then_with(|| a.len().cmp(&b.len()))
                .then_with(|| b.cmp(a))
        })
        .map(|(s, _)| &lemma[..lemma.len() - s.len()]);
    Ok(match fallback {
        Some(stem) => vec![stem.to_owned()],
        None if char_len(lemma) >= model.min_stem_len && model.max_stems_per_lemma > 0 => {
            vec![lemma.to_owned()]
        }
        None => Vec::new(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CandidateDerivative {
    pub source_lemma: String,
    /// Stem as it surfaces, after euphonic adjustment.
    pub stem: String,
    /// Empty for the bare-stem candidate.
    pub suffix: String,
    pub surface: String,
}

/// Every stem × every known suffix, deduplicated by surface. The bare stem
/// is emitted as a zero-suffix candidate when it differs from the lemma.
pub fn generate_candidates(lemma: &str, model: &SuffixModel) -> Result<Vec<CandidateDerivative>> {
    let stems = stem_candidates(lemma, model)?;
    if model.suffixes.is_empty() {
        return Ok(Vec::new());
    }
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let mut push = |stem: String, suffix: &str, out: &mut Vec<CandidateDerivative>| {
        let surface = format!("{stem}{suffix}");
        if surface != lemma && seen.insert(surface.clone()) {
            out.push(CandidateDerivative {
                source_lemma: lemma.to_owned(),
                stem,
                suffix: suffix.to_owned(),
                surface,
            });
        }
    };
    for stem in &stems {
        if char_len(stem) > model.min_stem_len {
            push(stem.clone(), "", &mut out);
        }
        for suffix in model.suffixes.keys() {
            let adjusted = adjust_stem(stem, suffix, &model.euphony);
            if char_len(&adjusted) >= model.min_stem_len {
                push(adjusted, suffix, &mut out);
            }
        }
    }
    Ok(out)
}

/// Generation over many lemmas; lemmas too short to stem yield nothing.
pub fn generate_all(
    lemmas: &[String],
    model: &SuffixModel,
    exec: Execution,
) -> Vec<Vec<CandidateDerivative>> {
    exec::map(exec, lemmas, |l| {
        generate_candidates(l, model).unwrap_or_default()
    })
}

/// Keeps the candidates whose surface is attested in the corpus.
pub fn corpus_filter(
    cands: &[CandidateDerivative],
    lex: &CorpusLexicon,
) -> Vec<CandidateDerivative> {
    cands
        .iter()
        .filter(|c| lex.contains(&c.surface))
        .cloned()
        .collect()
}

pub fn write_candidates(cands: &[CandidateDerivative]) -> String {
    cands
        .iter()
        .map(|c| {
            format!(
                "{}\t{}\t{}\t{}\n",
                c.source_lemma, c.stem, c.suffix, c.surface
            )
        })
        .collect()
}

pub fn parse_candidates(text: &str, source: &str) -> Result<Vec<CandidateDerivative>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.is_empty())
        .map(|(i, l)| {
            let f: Vec<&str> = l.split('\t').collect();
            if f.len() != 4 || format!("{}{}", f[1], f[2]) != f[3] {
                return Err(Error::format(
                    source,
                    i + 1,
                    "expected lemma<TAB>stem<TAB>suffix<TAB>surface",
                ));
            }
            Ok(CandidateDerivative {
                source_lemma: f[0].to_owned(),
                stem: f[1].to_owned(),
                suffix: f[2].to_owned(),
                surface: f[3].to_owned(),
            })
        })
        .collect()
}

//! Simulated rephrasing: synonym alternates on tokens and derivation
//! patterns that add the dependencies a rephrased sentence would have.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::depgraph::{Dependency, DependencyGraph, Label, Provenance};
use crate::derivfilter::{DerivationalResource, DerivativeRecord};
use crate::error::{Error, Result};
use crate::lexica::{Dictionary, Pos, SynonymTable};
use crate::wsd::select_derivatives;

/// Pattern variable. `P` is the pivot, `D` the derivative.
pub type Var = char;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DepTemplate {
    pub label: Label,
    pub args: [Var; 2],
    pub prep: Option<String>,
}

impl fmt::Display for DepTemplate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.prep {
            Some(p) => write!(f, "{}({}, {p}, {})", self.label, self.args[0], self.args[1]),
            None => write!(f, "{}({}, {})", self.label, self.args[0], self.args[1]),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivationPattern {
    pub id: String,
    pub pivot_pos: Pos,
    pub derivative_selector: (Pos, String),
    pub input_schema: Vec<DepTemplate>,
    pub output_schema: Vec<DepTemplate>,
    pub construction_constraint: Option<String>,
}

impl DerivationPattern {
    pub fn validate(&self) -> Result<()> {
        let err = |m: String| Error::Pattern {
            id: self.id.clone(),
            message: m,
        };
        let bound: BTreeSet<Var> = self.input_schema.iter().flat_map(|t| t.args).collect();
        if self.input_schema.is_empty() || !bound.contains(&'P') {
            return Err(err("input schema must mention P".into()));
        }
        if bound.contains(&'D') {
            return Err(err("D cannot appear in the input schema".into()));
        }
        let used: BTreeSet<Var> = self.output_schema.iter().flat_map(|t| t.args).collect();
        if !used.contains(&'D') {
            return Err(err("D must appear in the output schema".into()));
        }
        if let Some(v) = used.iter().find(|v| **v != 'D' && !bound.contains(v)) {
            return Err(err(format!(
                "output variable {v} is not bound by the input"
            )));
        }
        if self.derivative_selector.1.is_empty() {
            return Err(err("empty derivative suffix".into()));
        }
        Ok(())
    }
}

fn parse_templates(line: &str, id: &str) -> Result<Vec<DepTemplate>> {
    let err = |m: String| Error::Pattern {
        id: id.to_owned(),
        message: m,
    };
    let mut out = Vec::new();
    let mut rest = line.trim();
    while !rest.is_empty() {
        let open = rest
            .find('(')
            .ok_or_else(|| err(format!("expected '(' in '{rest}'")))?;
        let close = rest
            .find(')')
            .ok_or_else(|| err(format!("expected ')' in '{rest}'")))?;
        if close < open {
            return Err(err(format!("misplaced ')' in '{rest}'")));
        }
        let label = Label::from(rest[..open].trim().to_owned());
        if !label.is_known() {
            return Err(err(format!("unknown label '{label}'")));
        }
        let args: Vec<&str> = rest[open + 1..close].split(',').map(str::trim).collect();
        let var = |s: &str| -> Result<Var> {
            let mut cs = s.chars();
            match (cs.next(), cs.next()) {
                (Some(c), None) if c.is_ascii_uppercase() => Ok(c),
                _ => Err(err(format!("'{s}' is not a variable"))),
            }
        };
        let t = match (&label, args.as_slice()) {
            (Label::PrepPh, [h, p, d]) if !p.is_empty() => DepTemplate {
                label,
                args: [var(h)?, var(d)?],
                prep: Some((*p).to_owned()),
            },
            (Label::PrepPh, _) => return Err(err("PREPPH takes (head, prep, dependent)".into())),
            (_, [h, d]) => DepTemplate {
                label,
                args: [var(h)?, var(d)?],
                prep: None,
            },
            _ => return Err(err(format!("{label} takes two arguments"))),
        };
        out.push(t);
        rest = rest[close + 1..].trim_start();
    }
    Ok(out)
}

/// Reads blocks of `PATTERN` / `PIVOT` / `DERIV` / `IN` / `OUT` / `CONSTR`
/// lines separated by blank lines. `#` starts a comment line.
pub fn parse_patterns(text: &str, source: &str) -> Result<Vec<DerivationPattern>> {
    let mut out: Vec<DerivationPattern> = Vec::new();
    let mut current: Option<(DerivationPattern, bool, bool)> = None;

    fn finish(
        cur: Option<(DerivationPattern, bool, bool)>,
        out: &mut Vec<DerivationPattern>,
    ) -> Result<()> {
        if let Some((p, has_pivot, has_deriv)) = cur {
            if !has_pivot || !has_deriv {
                return Err(Error::Pattern {
                    id: p.id,
                    message: "PIVOT and DERIV are required".into(),
                });
            }
            p.validate()?;
            if out.iter().any(|o| o.id == p.id) {
                return Err(Error::Pattern {
                    id: p.id,
                    message: "duplicate pattern id".into(),
                });
            }
            out.push(p);
        }
        Ok(())
    }

    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.starts_with('#') {
            continue;
        }
        if line.is_empty() {
            finish(current.take(), &mut out)?;
            continue;
        }
        let (key, value) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
        let value = value.trim();
        if key == "PATTERN" {
            finish(current.take(), &mut out)?;
            if value.is_empty() {
                return Err(Error::format(source, n + 1, "pattern without id"));
            }
            current = Some((
                DerivationPattern {
                    id: value.to_owned(),
                    pivot_pos: Pos::Other,
                    derivative_selector: (Pos::Other, String::new()),
                    input_schema: Vec::new(),
                    output_schema: Vec::new(),
                    construction_constraint: None,
                },
                false,
                false,
            ));
            continue;
        }
        let Some((p, has_pivot, has_deriv)) = current.as_mut() else {
            return Err(Error::format(source, n + 1, "expected PATTERN"));
        };
        let bad = |m: &str| Error::Pattern {
            id: p.id.clone(),
            message: format!("{source}:{}: {m}", n + 1),
        };
        match key {
            "PIVOT" => {
                p.pivot_pos = Pos::from_str(value).map_err(|e| bad(&e))?;
                *has_pivot = true;
            }
            "DERIV" => {
                let (pos, suffix) = value
                    .split_once(char::is_whitespace)
                    .ok_or_else(|| bad("DERIV needs a POS and a suffix"))?;
                p.derivative_selector = (
                    Pos::from_str(pos).map_err(|e| bad(&e))?,
                    suffix.trim().to_owned(),
                );
                *has_deriv = true;
            }
            "IN" => {
                let t = parse_templates(value, &p.id)?;
                p.input_schema.extend(t);
            }
            "OUT" => {
                let t = parse_templates(value, &p.id)?;
                p.output_schema.extend(t);
            }
            "CONSTR" => {
                p.construction_constraint = (!value.is_empty()).then(|| value.to_owned());
            }
            other => return Err(bad(&format!("unknown key '{other}'"))),
        }
    }
    finish(current.take(), &mut out)?;
    Ok(out)
}

pub fn load_patterns(path: &Path) -> Result<Vec<DerivationPattern>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_patterns(&text, &path.display().to_string())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternMatch {
    pub pattern_id: String,
    pub bindings: BTreeMap<Var, usize>,
    pub derivative: DerivativeRecord,
}

impl PatternMatch {
    fn key(&self) -> String {
        let b: Vec<String> = self
            .bindings
            .iter()
            .map(|(v, t)| format!("{v}={t}"))
            .collect();
        format!(
            "{}|{}|{}",
            self.pattern_id,
            b.join(","),
            self.derivative.surface
        )
    }
}

/// Every injective binding of the input schema onto BASE dependencies with
/// `P` fixed to `pivot`, in lexicographic order.
pub fn bindings(
    graph: &DependencyGraph,
    pattern: &DerivationPattern,
    pivot: usize,
) -> Vec<BTreeMap<Var, usize>> {
    fn extend(
        graph: &DependencyGraph,
        templates: &[DepTemplate],
        current: &mut BTreeMap<Var, usize>,
        out: &mut BTreeSet<BTreeMap<Var, usize>>,
    ) {
        let Some((t, rest)) = templates.split_first() else {
            out.insert(current.clone());
            return;
        };
        for d in graph.base_deps() {
            if d.label != t.label || d.prep != t.prep {
                continue;
            }
            let mut added = Vec::new();
            let mut ok = true;
            for (v, tok) in t.args.iter().zip(d.args) {
                match current.get(v) {
                    Some(&b) if b == tok => {}
                    Some(_) => ok = false,
                    None if current.values().any(|&b| b == tok) => ok = false,
                    None => {
                        current.insert(*v, tok);
                        added.push(*v);
                    }
                }
                if !ok {
                    break;
                }
            }
            if ok {
                extend(graph, rest, current, out);
            }
            for v in added {
                current.remove(&v);
            }
        }
    }
    let mut out = BTreeSet::new();
    let mut current = BTreeMap::from([('P', pivot)]);
    extend(graph, &pattern.input_schema, &mut current, &mut out);
    out.into_iter().collect()
}

fn construction_ok(
    pattern: &DerivationPattern,
    lemma: &str,
    sense: Option<u32>,
    dictionary: &Dictionary,
) -> bool {
    let Some(code) = &pattern.construction_constraint else {
        return true;
    };
    let mut senses = dictionary
        .senses_with_pos(lemma, pattern.pivot_pos)
        .filter(|s| sense.is_none_or(|id| s.sense_id == id))
        .peekable();
    if senses.peek().is_none() {
        return true;
    }
    senses.any(|s| s.construction_codes.is_empty() || s.construction_codes.contains(code))
}

/// Matches of `pattern` around `pivot`, using `pivot_lemma` (the token's
/// lemma or one of its alternates) to look up derivatives.
pub fn match_pattern_as(
    graph: &DependencyGraph,
    pattern: &DerivationPattern,
    pivot: usize,
    pivot_lemma: &str,
    sense: Option<u32>,
    resource: &DerivationalResource,
    dictionary: &Dictionary,
) -> Vec<PatternMatch> {
    if graph.tokens[pivot].pos != pattern.pivot_pos
        || !construction_ok(pattern, pivot_lemma, sense, dictionary)
    {
        return Vec::new();
    }
    let (pos, suffix) = &pattern.derivative_selector;
    let derivatives: Vec<DerivativeRecord> = select_derivatives(pivot_lemma, sense, resource)
        .into_iter()
        .filter(|d| d.target_pos == *pos && d.suffix == *suffix)
        .collect();
    if derivatives.is_empty() {
        return Vec::new();
    }
    let mut out = Vec::new();
    for b in bindings(graph, pattern, pivot) {
        for d in &derivatives {
            out.push(PatternMatch {
                pattern_id: pattern.id.clone(),
                bindings: b.clone(),
                derivative: d.clone(),
            });
        }
    }
    out
}

pub fn match_pattern(
    graph: &DependencyGraph,
    pattern: &DerivationPattern,
    pivot: usize,
    resource: &DerivationalResource,
    dictionary: &Dictionary,
) -> Vec<PatternMatch> {
    let t = &graph.tokens[pivot];
    match_pattern_as(
        graph, pattern, pivot, &t.lemma, t.sense_id, resource, dictionary,
    )
}

/// Appends the derivative token and the instantiated output schema. A match
/// already applied to this graph leaves it unchanged.
pub fn apply_pattern(
    mut graph: DependencyGraph,
    pattern: &DerivationPattern,
    m: &PatternMatch,
) -> DependencyGraph {
    let key = m.key();
    if graph
        .tokens
        .iter()
        .any(|t| t.feature("match") == Some(key.as_str()))
    {
        return graph;
    }
    let d = graph.push_token(
        &m.derivative.surface,
        &m.derivative.surface,
        m.derivative.target_pos,
    );
    let token = &mut graph.tokens[d];
    token.features.insert("pattern".into(), pattern.id.clone());
    token.features.insert("match".into(), key);
    token
        .features
        .insert("base".into(), m.derivative.source_lemma.clone());
    let resolve = |v: &Var| if *v == 'D' { d } else { m.bindings[v] };
    for t in &pattern.output_schema {
        let dep = Dependency {
            label: t.label.clone(),
            args: [resolve(&t.args[0]), resolve(&t.args[1])],
            prep: t.prep.clone(),
            provenance: Provenance::Derivational,
        };
        graph.add_dep(dep);
    }
    graph
}

/// Adds synonyms of every significant token as disjunctive alternates.
pub fn enrich_synonyms(mut graph: DependencyGraph, syn: &SynonymTable) -> DependencyGraph {
    for t in &mut graph.tokens {
        if !t.pos.is_significant() {
            continue;
        }
        let found: Vec<String> = syn
            .lookup(&t.lemma, t.pos, t.sense_id)
            .into_iter()
            .filter(|s| *s != t.lemma)
            .map(str::to_owned)
            .collect();
        t.alternates.extend(found);
    }
    graph
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum EnrichmentOrder {
    None,
    SynOnly,
    DerivOnly,
    /// Synonyms and derivation side by side: derivation from the original
    /// lemmas only, and derivative tokens get no synonyms.
    SynAndDeriv,
    SynThenDeriv,
    DerivThenSyn,
    Both,
}

pub struct RephraseContext<'a> {
    pub resource: &'a DerivationalResource,
    pub patterns: &'a [DerivationPattern],
    pub synonyms: &'a SynonymTable,
    pub dictionary: &'a Dictionary,
}

/// Applies every pattern around every original token, in pattern-file order
/// then token order. With `via_alternates` the token's synonym alternates
/// also serve as pivot lemmas.
pub fn derive(
    graph: DependencyGraph,
    ctx: &RephraseContext<'_>,
    via_alternates: bool,
) -> DependencyGraph {
    let original = graph.tokens.len();
    let mut graph = graph;
    for pattern in ctx.patterns {
        for pivot in 0..original {
            let t = &graph.tokens[pivot];
            if t.pos != pattern.pivot_pos {
                continue;
            }
            let mut lemmas: Vec<(String, Option<u32>)> = vec![(t.lemma.clone(), t.sense_id)];
            if via_alternates {
                lemmas.extend(t.alternates.iter().map(|a| (a.clone(), None)));
            }
            for (lemma, sense) in lemmas {
                let found = match_pattern_as(
                    &graph,
                    pattern,
                    pivot,
                    &lemma,
                    sense,
                    ctx.resource,
                    ctx.dictionary,
                );
                for m in found {
                    graph = apply_pattern(graph, pattern, &m);
                }
            }
        }
    }
    graph
}

/// Token-level union of two enrichments of the same base graph. Derivative
/// tokens are identified by their match key.
fn union(mut a: DependencyGraph, b: &DependencyGraph, original: usize) -> DependencyGraph {
    let mut remap: Vec<usize> = (0..original).collect();
    for (i, t) in b.tokens.iter().enumerate() {
        if i < original {
            a.tokens[i].alternates.extend(t.alternates.iter().cloned());
            continue;
        }
        let key = t.feature("match");
        let existing = a.tokens[original..]
            .iter()
            .position(|o| key.is_some() && o.feature("match") == key)
            .map(|p| p + original);
        let target = match existing {
            Some(e) => {
                a.tokens[e].alternates.extend(t.alternates.iter().cloned());
                e
            }
            None => {
                let idx = a.tokens.len();
                let mut copy = t.clone();
                copy.index = idx;
                a.tokens.push(copy);
                idx
            }
        };
        remap.push(target);
    }
    for d in &b.deps {
        let mut d = d.clone();
        d.args = [remap[d.args[0]], remap[d.args[1]]];
        a.add_dep(d);
    }
    a
}

pub fn enrich_all(
    graph: DependencyGraph,
    ctx: &RephraseContext<'_>,
    order: EnrichmentOrder,
) -> DependencyGraph {
    let syn = |g| enrich_synonyms(g, ctx.synonyms);
    match order {
        EnrichmentOrder::None => graph,
        EnrichmentOrder::SynOnly => syn(graph),
        EnrichmentOrder::DerivOnly => derive(graph, ctx, false),
        EnrichmentOrder::SynAndDeriv => derive(syn(graph), ctx, false),
        EnrichmentOrder::SynThenDeriv => derive(syn(graph), ctx, true),
        EnrichmentOrder::DerivThenSyn => syn(derive(graph, ctx, false)),
        EnrichmentOrder::Both => {
            let original = graph.tokens.len();
            let a = enrich_all(graph.clone(), ctx, EnrichmentOrder::SynThenDeriv);
            let b = enrich_all(graph, ctx, EnrichmentOrder::DerivThenSyn);
            union(a, &b, original)
        }
    }
}

/// Lemma-level view of the dependencies touching derivative tokens, used to
/// compare a rephrasing against the parse of the rephrased sentence.
pub fn derivative_view(
    graph: &DependencyGraph,
    derivatives: &BTreeSet<String>,
) -> BTreeSet<String> {
    graph
        .deps
        .iter()
        .filter(|d| d.args.iter().any(|&a| derivatives.contains(graph.lemma(a))))
        .map(|d| graph.describe(d))
        .collect()
}

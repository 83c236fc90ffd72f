//! Sense disambiguation rules compiled from dictionary examples.

use log::debug;
use serde::{Deserialize, Serialize};

use crate::depgraph::{toy_parse, DependencyGraph, Label, ParserLexicon};
use crate::derivfilter::{DerivationalResource, DerivativeRecord};
use crate::lexica::Dictionary;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum OtherArg {
    Literal(String),
    Any,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct DependencyConstraint {
    pub label: Label,
    /// Argument position of the target: 0 = head, 1 = dependent.
    pub target_slot: usize,
    pub prep: Option<String>,
    pub other: OtherArg,
}

impl DependencyConstraint {
    fn holds(&self, graph: &DependencyGraph, token: usize) -> bool {
        graph.deps.iter().any(|d| {
            d.label == self.label
                && d.prep == self.prep
                && d.args[self.target_slot] == token
                && match &self.other {
                    OtherArg::Any => true,
                    OtherArg::Literal(l) => graph.lemma(d.args[1 - self.target_slot]) == l,
                }
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WsdRule {
    pub target_lemma: String,
    pub target_sense: u32,
    pub constraints: Vec<DependencyConstraint>,
    pub specificity: usize,
}

impl WsdRule {
    pub fn fires(&self, graph: &DependencyGraph, token: usize) -> bool {
        graph.tokens[token].lemma == self.target_lemma
            && self.constraints.iter().all(|c| c.holds(graph, token))
    }
}

/// One rule per parsable example: every dependency touching the entry's
/// lemma becomes a constraint. Co-arguments that are significant words are
/// literal; pronouns and function words become wildcards. Rules without any
/// literal constraint carry no lexical evidence and are dropped.
pub fn compile_rules(dictionary: &Dictionary, lexicon: &ParserLexicon) -> Vec<WsdRule> {
    let mut rules: Vec<WsdRule> = Vec::new();
    for sense in dictionary.records() {
        for example in &sense.examples {
            let graph = match toy_parse(example, lexicon) {
                Ok(g) => g,
                Err(e) => {
                    debug!("no rule for {} {}: {e}", sense.lemma, sense.sense_id);
                    continue;
                }
            };
            let Some(target) = graph
                .tokens
                .iter()
                .position(|t| t.lemma == sense.lemma && t.pos == sense.pos)
            else {
                debug!("'{example}' does not contain {}", sense.lemma);
                continue;
            };
            let mut constraints: Vec<DependencyConstraint> = graph
                .deps
                .iter()
                .filter(|d| d.label.is_known() && d.touches(target))
                .map(|d| {
                    let slot = if d.args[0] == target { 0 } else { 1 };
                    let other = &graph.tokens[d.args[1 - slot]];
                    DependencyConstraint {
                        label: d.label.clone(),
                        target_slot: slot,
                        prep: d.prep.clone(),
                        other: if other.pos.is_significant() {
                            OtherArg::Literal(other.lemma.clone())
                        } else {
                            OtherArg::Any
                        },
                    }
                })
                .collect();
            constraints.sort();
            constraints.dedup();
            let specificity = constraints
                .iter()
                .filter(|c| matches!(c.other, OtherArg::Literal(_)))
                .count();
            if specificity == 0 {
                debug!("example '{example}' gives no lexical constraint");
                continue;
            }
            let rule = WsdRule {
                target_lemma: sense.lemma.clone(),
                target_sense: sense.sense_id,
                constraints,
                specificity,
            };
            if !rules.contains(&rule) {
                rules.push(rule);
            }
        }
    }
    rules
}

/// Best firing rule for one token: highest specificity, then lowest sense.
pub fn best_sense(graph: &DependencyGraph, token: usize, rules: &[WsdRule]) -> Option<u32> {
    rules
        .iter()
        .filter(|r| r.fires(graph, token))
        .min_by_key(|r| (std::cmp::Reverse(r.specificity), r.target_sense))
        .map(|r| r.target_sense)
}

/// Annotates significant tokens with a sense. Monosemous lemmas are
/// annotated directly; otherwise the best firing rule decides. Dependencies
/// are left untouched.
pub fn disambiguate(
    mut graph: DependencyGraph,
    rules: &[WsdRule],
    dictionary: &Dictionary,
) -> DependencyGraph {
    for i in 0..graph.tokens.len() {
        let token = &graph.tokens[i];
        if !token.pos.is_significant() || token.sense_id.is_some() {
            continue;
        }
        let senses: Vec<u32> = dictionary
            .senses_with_pos(&token.lemma, token.pos)
            .map(|s| s.sense_id)
            .collect();
        let chosen = match senses.as_slice() {
            [] => None,
            [only] => Some(*only),
            _ => {
                let applicable: Vec<WsdRule> = rules
                    .iter()
                    .filter(|r| senses.contains(&r.target_sense))
                    .cloned()
                    .collect();
                best_sense(&graph, i, &applicable)
            }
        };
        graph.tokens[i].sense_id = chosen;
    }
    graph
}

/// Annotated and total significant tokens over a bank.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct WsdCoverage {
    pub annotated: usize,
    pub significant: usize,
}

impl WsdCoverage {
    pub fn percent(&self) -> f64 {
        if self.significant == 0 {
            0.0
        } else {
            100.0 * self.annotated as f64 / self.significant as f64
        }
    }
}

pub fn coverage<'a>(graphs: impl IntoIterator<Item = &'a DependencyGraph>) -> WsdCoverage {
    let mut c = WsdCoverage::default();
    for t in graphs.into_iter().flat_map(|g| &g.tokens) {
        if t.pos.is_significant() && !t.features.contains_key("pattern") {
            c.significant += 1;
            c.annotated += usize::from(t.sense_id.is_some());
        }
    }
    c
}

/// Derivatives licensed for a sense, or all derivatives of the lemma when
/// the sense is unknown.
pub fn select_derivatives(
    lemma: &str,
    sense_id: Option<u32>,
    resource: &DerivationalResource,
) -> Vec<DerivativeRecord> {
    resource
        .records(lemma)
        .iter()
        .filter(|r| sense_id.is_none_or(|s| r.licensed_for(s)))
        .cloned()
        .collect()
}

pub fn write_rules(rules: &[WsdRule]) -> String {
    let mut out = String::new();
    for r in rules {
        for c in &r.constraints {
            let label = match &c.prep {
                Some(p) => format!("{}({p})", c.label),
                None => c.label.to_string(),
            };
            let other = match &c.other {
                OtherArg::Literal(l) => l.as_str(),
                OtherArg::Any => "*",
            };
            out.push_str(&format!(
                "{}\t{}\t{label}\t{}\t{other}\n",
                r.target_lemma, r.target_sense, c.target_slot
            ));
        }
    }
    out
}

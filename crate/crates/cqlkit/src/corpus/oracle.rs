//! Brute-force query execution.
//!
//! This is the slow, obviously-correct counterpart of [`super::execute`]: it
//! enumerates every candidate span of every document, every quantifier
//! decomposition, and every label binding explicitly, sharing no matching
//! logic with the engine. It exists to cross-check the engine and is guarded
//! by a corpus-size cap.

use std::collections::{BTreeMap, HashMap};

use regex::Regex;
use thiserror::Error;

use crate::syntax::{
    CmpOp, ConstraintExpr, GlobalConstraint, Query, SeqExpr, TokenExpr, WithinClause,
};

use super::engine::{ExecError, Hit, HitSet};
use super::{AnnToken, AnnotatedCorpus};

/// Largest corpus (in tokens) the oracle will process.
pub const BRUTE_FORCE_TOKEN_CAP: usize = 10_000;

#[derive(Debug, Error)]
pub enum BruteForceError {
    #[error("corpus too large for brute-force execution: {tokens} tokens (cap {BRUTE_FORCE_TOKEN_CAP})")]
    CorpusTooLarge { tokens: usize },
    #[error(transparent)]
    Exec(#[from] ExecError),
}

type Bindings = BTreeMap<String, usize>;

/// Regexes compiled by the oracle itself, keyed by pattern text.
struct RegexCache {
    cache: HashMap<String, Regex>,
}

impl RegexCache {
    fn build(q: &Query) -> Result<RegexCache, ExecError> {
        let mut cache = HashMap::new();
        for seq in q.sequences() {
            for tok in &seq.elements {
                let mut err = None;
                tok.constraint.for_each_atom(&mut |atom| {
                    if err.is_some() || cache.contains_key(&atom.value) {
                        return;
                    }
                    match Regex::new(&format!("^(?:{})$", atom.value)) {
                        Ok(re) => {
                            cache.insert(atom.value.clone(), re);
                        }
                        Err(e) => {
                            err = Some(ExecError::Regex {
                                pattern: atom.value.clone(),
                                message: e.to_string(),
                            });
                        }
                    }
                });
                if let Some(e) = err {
                    return Err(e);
                }
            }
        }
        Ok(RegexCache { cache })
    }

    fn full_match(&self, pattern: &str, value: &str) -> bool {
        self.cache[pattern].is_match(value)
    }
}

fn attr_of<'a>(tok: &'a AnnToken, attr: &crate::syntax::Attr) -> &'a str {
    use crate::syntax::Attr;
    match attr {
        Attr::Word => &tok.word,
        Attr::Pos => &tok.pos,
        Attr::Lemma => &tok.lemma,
        Attr::Other(_) => "",
    }
}

fn token_satisfies(c: &ConstraintExpr, tok: &AnnToken, regexes: &RegexCache) -> bool {
    match c {
        ConstraintExpr::Empty => true,
        ConstraintExpr::Atom(a) => {
            let matched = regexes.full_match(&a.value, attr_of(tok, &a.attr));
            match a.op {
                CmpOp::Equal => matched,
                CmpOp::NotEqual => !matched,
            }
        }
        ConstraintExpr::And(cs) => cs.iter().all(|c| token_satisfies(c, tok, regexes)),
        ConstraintExpr::Or(cs) => cs.iter().any(|c| token_satisfies(c, tok, regexes)),
        ConstraintExpr::Not(c) => !token_satisfies(c, tok, regexes),
    }
}

/// Per-element token acceptance, evaluated once per document by the oracle's
/// own constraint checker: `sat[e][p]` is true when element `e` accepts the
/// token at offset `p`.
fn satisfaction_table(elements: &[TokenExpr], doc: &[AnnToken], regexes: &RegexCache) -> Vec<Vec<bool>> {
    elements
        .iter()
        .map(|e| {
            doc.iter()
                .map(|tok| token_satisfies(&e.constraint, tok, regexes))
                .collect()
        })
        .collect()
}

/// All binding witnesses for `elements` covering `doc[pos..end]` exactly.
fn cover_exactly(
    elements: &[TokenExpr],
    sat: &[Vec<bool>],
    pos: usize,
    end: usize,
    bindings: Bindings,
    out: &mut Vec<Bindings>,
) {
    let Some((first, rest)) = elements.split_first() else {
        if pos == end {
            out.push(bindings);
        }
        return;
    };
    let row = &sat[sat.len() - elements.len()];
    let max = first.quant.max.map_or(end - pos, |m| (m as usize).min(end - pos));
    for k in (first.quant.min as usize)..=max {
        if !(pos..pos + k).all(|i| row[i]) {
            continue;
        }
        let mut next = bindings.clone();
        if k == 1 {
            if let Some(label) = &first.label {
                next.insert(label.clone(), pos);
            }
        }
        cover_exactly(rest, sat, pos + k, end, next, out);
    }
}

/// All binding witnesses for `seq` matching some span `[ws, we)` with
/// `ws <= start` and `we >= end` (a containing match).
fn containing_witnesses(
    seq: &SeqExpr,
    sat: &[Vec<bool>],
    doc_len: usize,
    start: usize,
    end: usize,
) -> Vec<Bindings> {
    let mut out = Vec::new();
    for ws in 0..=start {
        for we in end..=doc_len {
            if we > ws {
                cover_exactly(&seq.elements, sat, ws, we, Bindings::new(), &mut out);
            }
        }
    }
    out
}

fn conditions_satisfiable(
    conditions: &[GlobalConstraint],
    doc: &[AnnToken],
    witness_sets: &[Vec<Bindings>],
    merged: &mut Vec<Bindings>,
) -> Option<Bindings> {
    if merged.len() == witness_sets.len() {
        let lookup = |label: &str| {
            merged
                .iter()
                .find_map(|env| env.get(label).copied())
        };
        for cond in conditions {
            let (Some(l), Some(r)) = (lookup(&cond.left.label), lookup(&cond.right.label)) else {
                return None;
            };
            let equal = attr_of(&doc[l], &cond.left.attr) == attr_of(&doc[r], &cond.right.attr);
            let holds = match cond.op {
                CmpOp::Equal => equal,
                CmpOp::NotEqual => !equal,
            };
            if !holds {
                return None;
            }
        }
        return Some(merged[0].clone());
    }
    for witness in &witness_sets[merged.len()] {
        merged.push(witness.clone());
        if let Some(head) = conditions_satisfiable(conditions, doc, witness_sets, merged) {
            return Some(head);
        }
        merged.pop();
    }
    None
}

/// Executes `q` by explicit enumeration over every span of every document.
/// Semantically identical to [`super::execute`] without a hit limit.
pub fn brute_force_execute(q: &Query, corpus: &AnnotatedCorpus) -> Result<HitSet, BruteForceError> {
    let tokens = corpus.token_count();
    if tokens > BRUTE_FORCE_TOKEN_CAP {
        return Err(BruteForceError::CorpusTooLarge { tokens });
    }
    for attr in q.referenced_attrs() {
        if !corpus.has_attr(&attr) {
            return Err(ExecError::UnknownAttribute(attr.name().to_string()).into());
        }
    }
    let regexes = RegexCache::build(q)?;

    let mut hits = Vec::new();
    for (doc_id, doc) in corpus.docs.iter().enumerate() {
        let head_sat = satisfaction_table(&q.head.elements, doc, &regexes);
        let within_sats: Vec<Option<Vec<Vec<bool>>>> = q
            .withins
            .iter()
            .map(|clause| match clause {
                WithinClause::Seq(seq) => {
                    Some(satisfaction_table(&seq.elements, doc, &regexes))
                }
                WithinClause::Struct(_) => None,
            })
            .collect();
        for start in 0..doc.len() {
            'ends: for end in (start + 1)..=doc.len() {
                let mut head_witnesses = Vec::new();
                cover_exactly(
                    &q.head.elements,
                    &head_sat,
                    start,
                    end,
                    Bindings::new(),
                    &mut head_witnesses,
                );
                if head_witnesses.is_empty() {
                    continue;
                }

                let mut witness_sets = vec![head_witnesses];
                for (clause, sat) in q.withins.iter().zip(&within_sats) {
                    let witnesses = match clause {
                        WithinClause::Seq(seq) => containing_witnesses(
                            seq,
                            sat.as_ref().expect("sequence clauses have tables"),
                            doc.len(),
                            start,
                            end,
                        ),
                        WithinClause::Struct(tag) => {
                            let contained = corpus.spans_named(&tag.name).any(|span| {
                                span.doc_id == doc_id && span.start <= start && span.end >= end
                            });
                            if contained {
                                vec![Bindings::new()]
                            } else {
                                Vec::new()
                            }
                        }
                    };
                    if witnesses.is_empty() {
                        continue 'ends;
                    }
                    witness_sets.push(witnesses);
                }

                let bindings = if q.conditions.is_empty() {
                    witness_sets[0][0].clone()
                } else {
                    match conditions_satisfiable(&q.conditions, doc, &witness_sets, &mut Vec::new())
                    {
                        Some(head) => head,
                        None => continue,
                    }
                };

                hits.push(Hit {
                    doc_id,
                    start,
                    end,
                    bindings,
                });
            }
        }
    }

    Ok(HitSet {
        hits,
        truncated: false,
    })
}

//! Query execution over an indexed corpus.
//!
//! Matching semantics: a hit is a document span `[start, end)` such that the
//! head sequence consumes exactly the span (every quantifier decomposition is
//! explored, not just the greedy one), every `within` clause contains the
//! span in some match of its sub-sequence or structure, and every global
//! condition holds under at least one assignment of label bindings drawn from
//! a witnessing decomposition. Atom values are anchored regular expressions:
//! they must match the whole attribute string.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::hash::{Hash, Hasher};

use regex::Regex;
use thiserror::Error;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::syntax::{
    parse, Attr, CmpOp, ConstraintExpr, GlobalConstraint, ParseError, Query, SeqExpr,
    WithinClause,
};

use super::{AnnToken, CorpusIndex, StructureSpan};

/// Default cap on the number of hits a single execution returns.
pub const DEFAULT_HIT_LIMIT: usize = 100_000;

/// A matched span. Equality and hashing consider only the `(doc_id, start,
/// end)` triple; bindings are a witness, not part of hit identity.
#[derive(Debug, Clone)]
pub struct Hit {
    pub doc_id: usize,
    pub start: usize,
    /// Exclusive end offset.
    pub end: usize,
    /// Token offset bound to each label of the head sequence, for the first
    /// witnessing decomposition. Offsets lie in `[start, end)`.
    pub bindings: BTreeMap<String, usize>,
}

impl PartialEq for Hit {
    fn eq(&self, other: &Self) -> bool {
        (self.doc_id, self.start, self.end) == (other.doc_id, other.start, other.end)
    }
}

impl Eq for Hit {}

impl Hash for Hit {
    fn hash<H: Hasher>(&self, state: &mut H) {
        (self.doc_id, self.start, self.end).hash(state);
    }
}

/// The result of executing a query: distinct hits in (doc, start, end) order.
#[derive(Debug, Clone, PartialEq)]
pub struct HitSet {
    pub hits: Vec<Hit>,
    /// True when enumeration stopped at the hit limit.
    pub truncated: bool,
}

impl HitSet {
    /// The hit spans as a set of `(doc_id, start, end)` triples.
    pub fn span_set(&self) -> BTreeSet<(usize, usize, usize)> {
        self.hits
            .iter()
            .map(|h| (h.doc_id, h.start, h.end))
            .collect()
    }

    pub fn len(&self) -> usize {
        self.hits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hits.is_empty()
    }
}

/// Execution failure.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExecError {
    #[error("unknown attribute '{0}' for this corpus")]
    UnknownAttribute(String),
    #[error("invalid regex value '{pattern}': {message}")]
    Regex { pattern: String, message: String },
}

// ---------------------------------------------------------------------------
// Compiled query plan

struct CompiledToken {
    label: Option<String>,
    min: usize,
    max: Option<usize>,
    matcher: Matcher,
}

enum Matcher {
    Empty,
    Atom {
        attr: Attr,
        negate: bool,
        re: Regex,
    },
    All(Vec<Matcher>),
    Any(Vec<Matcher>),
    Not(Box<Matcher>),
}

impl Matcher {
    fn matches(&self, tok: &AnnToken) -> bool {
        match self {
            Matcher::Empty => true,
            Matcher::Atom { attr, negate, re } => {
                let value = attr_value(tok, attr);
                re.is_match(value) != *negate
            }
            Matcher::All(ms) => ms.iter().all(|m| m.matches(tok)),
            Matcher::Any(ms) => ms.iter().any(|m| m.matches(tok)),
            Matcher::Not(m) => !m.matches(tok),
        }
    }
}

fn attr_value<'a>(tok: &'a AnnToken, attr: &Attr) -> &'a str {
    match attr {
        Attr::Word => &tok.word,
        Attr::Pos => &tok.pos,
        Attr::Lemma => &tok.lemma,
        // Unknown attributes are rejected during plan compilation.
        Attr::Other(_) => "",
    }
}

struct CompiledSeq {
    tokens: Vec<CompiledToken>,
    has_labels: bool,
}

enum CompiledWithin {
    Seq(CompiledSeq),
    Struct(String),
}

struct Plan {
    head: CompiledSeq,
    withins: Vec<CompiledWithin>,
    conditions: Vec<GlobalConstraint>,
}

fn compile_plan(q: &Query, idx: &CorpusIndex) -> Result<Plan, ExecError> {
    for attr in q.referenced_attrs() {
        if !idx.corpus().has_attr(&attr) {
            return Err(ExecError::UnknownAttribute(attr.name().to_string()));
        }
    }
    Ok(Plan {
        head: compile_seq(&q.head)?,
        withins: q
            .withins
            .iter()
            .map(|w| match w {
                WithinClause::Seq(seq) => Ok(CompiledWithin::Seq(compile_seq(seq)?)),
                WithinClause::Struct(tag) => Ok(CompiledWithin::Struct(tag.name.clone())),
            })
            .collect::<Result<_, ExecError>>()?,
        conditions: q.conditions.clone(),
    })
}

fn compile_seq(seq: &SeqExpr) -> Result<CompiledSeq, ExecError> {
    let tokens = seq
        .elements
        .iter()
        .map(|tok| {
            Ok(CompiledToken {
                label: tok.label.clone(),
                min: tok.quant.min as usize,
                max: tok.quant.max.map(|m| m as usize),
                matcher: compile_matcher(&tok.constraint)?,
            })
        })
        .collect::<Result<Vec<_>, ExecError>>()?;
    let has_labels = tokens.iter().any(|t| t.label.is_some());
    Ok(CompiledSeq { tokens, has_labels })
}

fn compile_matcher(c: &ConstraintExpr) -> Result<Matcher, ExecError> {
    Ok(match c {
        ConstraintExpr::Empty => Matcher::Empty,
        ConstraintExpr::Atom(a) => Matcher::Atom {
            attr: a.attr.clone(),
            negate: a.op == CmpOp::NotEqual,
            re: Regex::new(&format!("^(?:{})$", a.value)).map_err(|e| ExecError::Regex {
                pattern: a.value.clone(),
                message: e.to_string(),
            })?,
        },
        ConstraintExpr::And(cs) => Matcher::All(
            cs.iter()
                .map(compile_matcher)
                .collect::<Result<_, ExecError>>()?,
        ),
        ConstraintExpr::Or(cs) => Matcher::Any(
            cs.iter()
                .map(compile_matcher)
                .collect::<Result<_, ExecError>>()?,
        ),
        ConstraintExpr::Not(c) => Matcher::Not(Box::new(compile_matcher(c)?)),
    })
}

// ---------------------------------------------------------------------------
// Per-document matching

type Bindings = BTreeMap<String, usize>;

/// Per-token boolean table: `table[t][p]` is true when token matcher `t`
/// accepts the document token at offset `p`.
fn match_table(seq: &CompiledSeq, doc: &[AnnToken]) -> Vec<Vec<bool>> {
    seq.tokens
        .iter()
        .map(|t| doc.iter().map(|tok| t.matcher.matches(tok)).collect())
        .collect()
}

/// Longest prefix of consecutive matching tokens for token `ti` starting at
/// `pos`, capped by the quantifier maximum and the document end.
fn run_length(seq: &CompiledSeq, table: &[Vec<bool>], ti: usize, pos: usize, doc_len: usize) -> usize {
    let cap = doc_len - pos;
    let cap = seq.tokens[ti].max.map_or(cap, |m| m.min(cap));
    let mut run = 0;
    while run < cap && table[ti][pos + run] {
        run += 1;
    }
    run
}

/// All end offsets reachable by matching tokens `ti..` from `pos`, ignoring
/// bindings. Memoized on `(ti, pos)`.
fn ends_from(
    seq: &CompiledSeq,
    table: &[Vec<bool>],
    ti: usize,
    pos: usize,
    doc_len: usize,
    memo: &mut HashMap<(usize, usize), BTreeSet<usize>>,
) -> BTreeSet<usize> {
    if ti == seq.tokens.len() {
        return BTreeSet::from([pos]);
    }
    if let Some(cached) = memo.get(&(ti, pos)) {
        return cached.clone();
    }
    let run = run_length(seq, table, ti, pos, doc_len);
    let mut out = BTreeSet::new();
    let min = seq.tokens[ti].min;
    let mut k = min;
    while k <= run {
        out.extend(ends_from(seq, table, ti + 1, pos + k, doc_len, memo));
        k += 1;
    }
    memo.insert((ti, pos), out.clone());
    out
}

/// All `(end, bindings)` decompositions of tokens `ti..` from `pos`. A label
/// binds its token's offset when the token consumes exactly one corpus token.
fn decomps_from(
    seq: &CompiledSeq,
    table: &[Vec<bool>],
    ti: usize,
    pos: usize,
    doc_len: usize,
    current: &mut Bindings,
    out: &mut BTreeSet<(usize, Bindings)>,
) {
    if ti == seq.tokens.len() {
        out.insert((pos, current.clone()));
        return;
    }
    let token = &seq.tokens[ti];
    let run = run_length(seq, table, ti, pos, doc_len);
    let mut k = token.min;
    while k <= run {
        let bound = if k == 1 {
            token.label.as_ref().map(|label| {
                current.insert(label.clone(), pos);
                label.clone()
            })
        } else {
            None
        };
        decomps_from(seq, table, ti + 1, pos + k, doc_len, current, out);
        if let Some(label) = bound {
            current.remove(&label);
        }
        k += 1;
    }
}

/// Matches of a sequence in one document: spans grouped by `(start, end)`
/// with the witnessing binding maps (a single empty map when the sequence
/// carries no labels).
struct SeqDocMatches {
    /// (start, end) -> deduplicated binding witnesses.
    spans: BTreeMap<(usize, usize), Vec<Bindings>>,
}

fn seq_doc_matches(seq: &CompiledSeq, doc: &[AnnToken], want_bindings: bool) -> SeqDocMatches {
    let table = match_table(seq, doc);
    let doc_len = doc.len();
    let mut spans: BTreeMap<(usize, usize), Vec<Bindings>> = BTreeMap::new();
    if want_bindings && seq.has_labels {
        for start in 0..doc_len {
            let mut out = BTreeSet::new();
            decomps_from(seq, &table, 0, start, doc_len, &mut Bindings::new(), &mut out);
            for (end, bindings) in out {
                if end > start {
                    spans.entry((start, end)).or_default().push(bindings);
                }
            }
        }
    } else {
        let mut memo = HashMap::new();
        for start in 0..doc_len {
            for end in ends_from(seq, &table, 0, start, doc_len, &mut memo) {
                if end > start {
                    spans.entry((start, end)).or_default().push(Bindings::new());
                }
            }
        }
    }
    SeqDocMatches { spans }
}

/// Evaluates one global condition under merged binding maps.
fn condition_holds(cond: &GlobalConstraint, doc: &[AnnToken], envs: &[&Bindings]) -> bool {
    let lookup = |label: &str| envs.iter().find_map(|env| env.get(label).copied());
    let (Some(l), Some(r)) = (lookup(&cond.left.label), lookup(&cond.right.label)) else {
        return false;
    };
    let lv = attr_value(&doc[l], &cond.left.attr);
    let rv = attr_value(&doc[r], &cond.right.attr);
    match cond.op {
        CmpOp::Equal => lv == rv,
        CmpOp::NotEqual => lv != rv,
    }
}

/// Searches the cartesian product of witness options for an assignment that
/// satisfies every condition; returns the chosen options on success.
fn find_satisfying<'a>(
    conditions: &[GlobalConstraint],
    doc: &[AnnToken],
    options: &[&'a [Bindings]],
    chosen: &mut Vec<&'a Bindings>,
) -> bool {
    if chosen.len() == options.len() {
        let envs: Vec<&Bindings> = chosen.clone();
        return conditions.iter().all(|c| condition_holds(c, doc, &envs));
    }
    for candidate in options[chosen.len()] {
        chosen.push(candidate);
        if find_satisfying(conditions, doc, options, chosen) {
            return true;
        }
        chosen.pop();
    }
    false
}

fn doc_execute(plan: &Plan, doc_id: usize, doc: &[AnnToken], structures: &[StructureSpan], cap: usize) -> Vec<Hit> {
    if doc.is_empty() {
        return Vec::new();
    }
    let conditioned = !plan.conditions.is_empty();
    let head = seq_doc_matches(&plan.head, doc, conditioned);

    // Witness tables for each within clause, computed once per document.
    enum WithinMatches<'a> {
        Seq(SeqDocMatches),
        Struct(Vec<&'a StructureSpan>),
    }
    let within_tables: Vec<WithinMatches> = plan
        .withins
        .iter()
        .map(|w| match w {
            CompiledWithin::Seq(seq) => WithinMatches::Seq(seq_doc_matches(seq, doc, conditioned)),
            CompiledWithin::Struct(name) => WithinMatches::Struct(
                structures
                    .iter()
                    .filter(|s| s.doc_id == doc_id && s.name == *name)
                    .collect(),
            ),
        })
        .collect();

    let empty_witness = vec![Bindings::new()];
    let mut hits = Vec::new();

    'spans: for (&(start, end), head_witnesses) in &head.spans {
        // Containment witnesses for each within clause, left to right.
        let mut option_sets: Vec<&[Bindings]> = Vec::with_capacity(1 + plan.withins.len());
        option_sets.push(head_witnesses.as_slice());
        let mut containing: Vec<Vec<Bindings>> = Vec::new();
        for table in &within_tables {
            match table {
                WithinMatches::Seq(matches) => {
                    let mut witnesses = Vec::new();
                    for (&(ws, we), bindings) in matches.spans.range(..=(start, usize::MAX)) {
                        if ws <= start && we >= end {
                            witnesses.extend(bindings.iter().cloned());
                        }
                    }
                    if witnesses.is_empty() {
                        continue 'spans;
                    }
                    containing.push(witnesses);
                }
                WithinMatches::Struct(spans) => {
                    if !spans.iter().any(|s| s.start <= start && s.end >= end) {
                        continue 'spans;
                    }
                    containing.push(empty_witness.clone());
                }
            }
        }
        for witnesses in &containing {
            option_sets.push(witnesses.as_slice());
        }

        let bindings = if conditioned {
            let mut chosen = Vec::new();
            if !find_satisfying(&plan.conditions, doc, &option_sets, &mut chosen) {
                continue;
            }
            chosen[0].clone()
        } else {
            head_witnesses[0].clone()
        };

        hits.push(Hit {
            doc_id,
            start,
            end,
            bindings,
        });
        if hits.len() > cap {
            break;
        }
    }
    hits
}

/// Executes a query over the index, returning at most `limit` hits in
/// `(doc, start, end)` order. With the `parallel` feature documents are
/// matched concurrently; the result is identical either way.
pub fn execute(q: &Query, idx: &CorpusIndex, limit: usize) -> Result<HitSet, ExecError> {
    let plan = compile_plan(q, idx)?;
    let docs = idx.docs();
    let structures = &idx.corpus().structures;

    #[cfg(feature = "parallel")]
    let per_doc: Vec<Vec<Hit>> = docs
        .par_iter()
        .enumerate()
        .map(|(doc_id, doc)| doc_execute(&plan, doc_id, doc, structures, limit))
        .collect();
    #[cfg(not(feature = "parallel"))]
    let per_doc: Vec<Vec<Hit>> = docs
        .iter()
        .enumerate()
        .map(|(doc_id, doc)| doc_execute(&plan, doc_id, doc, structures, limit))
        .collect();

    let mut hits = Vec::new();
    let mut truncated = false;
    for doc_hits in per_doc {
        for hit in doc_hits {
            if hits.len() == limit {
                truncated = true;
                break;
            }
            hits.push(hit);
        }
        if truncated {
            break;
        }
    }
    Ok(HitSet { hits, truncated })
}

/// Outcome of an execution-accuracy comparison.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExOutcome {
    /// True iff the prediction parsed, executed, and produced exactly the
    /// gold hit spans without truncation on either side.
    pub matched: bool,
    /// Present when the comparison was indeterminate (hit limit reached);
    /// such comparisons score 0.
    pub warning: Option<String>,
}

/// Gold-side failures of [`execution_accuracy`].
#[derive(Debug, Error)]
pub enum ExecAccuracyError {
    #[error("gold query invalid: {0}")]
    GoldInvalid(ParseError),
    #[error("gold query failed to execute: {0}")]
    GoldExecutionFailed(ExecError),
}

/// Compares hit sets of a predicted and a gold query on the same corpus.
/// Prediction-side failures score 0; gold-side failures are errors.
pub fn execution_accuracy(
    pred: &str,
    gold: &str,
    idx: &CorpusIndex,
    limit: usize,
) -> Result<ExOutcome, ExecAccuracyError> {
    let gold_query = parse(gold).map_err(ExecAccuracyError::GoldInvalid)?;
    let gold_hits = execute(&gold_query, idx, limit).map_err(ExecAccuracyError::GoldExecutionFailed)?;

    let Ok(pred_query) = parse(pred) else {
        return Ok(ExOutcome {
            matched: false,
            warning: None,
        });
    };
    let Ok(pred_hits) = execute(&pred_query, idx, limit) else {
        return Ok(ExOutcome {
            matched: false,
            warning: None,
        });
    };

    if gold_hits.truncated || pred_hits.truncated {
        return Ok(ExOutcome {
            matched: false,
            warning: Some(format!(
                "hit limit {limit} reached; execution accuracy indeterminate, scored 0"
            )),
        });
    }

    Ok(ExOutcome {
        matched: gold_hits.span_set() == pred_hits.span_set(),
        warning: None,
    })
}

#[cfg(test)]
mod tests {
    use super::super::{build_index, ingest_vertical_str};
    use super::*;

    fn index_of(vert: &str) -> CorpusIndex {
        build_index(ingest_vertical_str(vert).unwrap())
    }

    fn spans(q: &str, idx: &CorpusIndex) -> Vec<(usize, usize, usize)> {
        execute(&parse(q).unwrap(), idx, DEFAULT_HIT_LIMIT)
            .unwrap()
            .span_set()
            .into_iter()
            .collect()
    }

    fn three_tokens() -> CorpusIndex {
        index_of("<doc>\n<s>\nrun\tNN\nis\tVBZ\nruns\tNNS\n</s>\n</doc>\n")
    }

    #[test]
    fn empty_constraint_matches_every_token() {
        let idx = three_tokens();
        assert_eq!(spans("[]", &idx), vec![(0, 0, 1), (0, 1, 2), (0, 2, 3)]);
    }

    #[test]
    fn anchored_regex_matches_full_attribute_only() {
        let idx = three_tokens();
        assert_eq!(spans(r#"[pos="N.*"]"#, &idx), vec![(0, 0, 1), (0, 2, 3)]);
        // "N" must not match "NN" as a substring.
        assert_eq!(spans(r#"[pos="N"]"#, &idx), vec![]);
    }

    #[test]
    fn condition_requires_equal_attributes() {
        let idx = index_of("<doc>\n<s>\na\tNN\nb\tVBZ\nc\tNN\n</s>\n</doc>\n");
        assert_eq!(spans("1:[] 2:[] :: 1.pos = 2.pos", &idx), vec![]);
        let idx = index_of("<doc>\n<s>\na\tNN\nb\tNN\nc\tVBZ\n</s>\n</doc>\n");
        assert_eq!(spans("1:[] 2:[] :: 1.pos = 2.pos", &idx), vec![(0, 0, 2)]);
        assert_eq!(
            spans("1:[] 2:[] :: 1.pos != 2.pos", &idx),
            vec![(0, 1, 3)]
        );
    }

    #[test]
    fn hit_bindings_witness_the_condition() {
        let idx = index_of("<doc>\n<s>\na\tNN\nb\tDT\nc\tNN\n</s>\n</doc>\n");
        let q = parse("1:[] []? 2:[] :: 1.pos = 2.pos").unwrap();
        let hits = execute(&q, &idx, DEFAULT_HIT_LIMIT).unwrap();
        assert_eq!(hits.span_set().into_iter().collect::<Vec<_>>(), vec![(0, 0, 3)]);
        let hit = &hits.hits[0];
        assert_eq!(hit.bindings.get("1"), Some(&0));
        assert_eq!(hit.bindings.get("2"), Some(&2));
    }

    #[test]
    fn quantifier_decompositions_are_exhaustive() {
        // [] []{0,2} over 3 tokens: spans of length 1..=3 from every start.
        let idx = three_tokens();
        assert_eq!(
            spans("[] []{0,2}", &idx),
            vec![(0, 0, 1), (0, 0, 2), (0, 0, 3), (0, 1, 2), (0, 1, 3), (0, 2, 3)]
        );
    }

    #[test]
    fn within_structure_restricts_to_sentences() {
        let idx = index_of(
            "<doc>\n<s>\na\tNN\nb\tNN\n</s>\n<s>\nc\tNN\n</s>\n</doc>\n",
        );
        // Two adjacent nouns exist only inside the first sentence.
        assert_eq!(
            spans(r#"[pos="NN"] [pos="NN"] within <s/>"#, &idx),
            vec![(0, 0, 2)]
        );
        // Without the structure, the span (1,3) crosses the boundary but the
        // doc still contains it.
        assert_eq!(
            spans(r#"[pos="NN"] [pos="NN"]"#, &idx),
            vec![(0, 0, 2), (0, 1, 3)]
        );
    }

    #[test]
    fn within_sequence_restricts_to_containing_matches() {
        let idx = index_of(
            "<doc>\n<s>\nbe\tVB\ncat\tNN\ngo\tVB\ndog\tNN\nrun\tVB\n</s>\n</doc>\n",
        );
        let hits = spans(r#"[pos="N.*"] within [pos="VB.*"] []{0,5} [pos="VB.*"]"#, &idx);
        assert_eq!(hits, vec![(0, 1, 2), (0, 3, 4)]);
    }

    #[test]
    fn multiple_withins_filter_left_to_right() {
        let idx = index_of(
            "<doc>\n<s>\nbe\tVB\ncat\tNN\ngo\tVB\n</s>\n<s>\ndog\tNN\n</s>\n</doc>\n",
        );
        let hits = spans(
            r#"[pos="NN"] within [pos="VB"] [] [pos="VB"] within <s/>"#,
            &idx,
        );
        assert_eq!(hits, vec![(0, 1, 2)]);
    }

    #[test]
    fn unknown_attribute_is_rejected() {
        let idx = three_tokens();
        let err = execute(&parse(r#"[tag="NN"]"#).unwrap(), &idx, 10).unwrap_err();
        assert_eq!(err, ExecError::UnknownAttribute("tag".to_string()));
        // lemma is outside the schema of a two-column corpus
        let err = execute(&parse(r#"[lemma="run"]"#).unwrap(), &idx, 10).unwrap_err();
        assert_eq!(err, ExecError::UnknownAttribute("lemma".to_string()));
    }

    #[test]
    fn limit_truncates_and_is_monotonic() {
        let idx = three_tokens();
        let q = parse("[]").unwrap();
        let mut previous: BTreeSet<(usize, usize, usize)> = BTreeSet::new();
        for limit in 1..=4 {
            let hits = execute(&q, &idx, limit).unwrap();
            assert_eq!(hits.truncated, limit < 3);
            assert_eq!(hits.len(), limit.min(3));
            let current = hits.span_set();
            assert!(previous.is_subset(&current));
            previous = current;
        }
    }

    #[test]
    fn execution_accuracy_identity_and_cascade() {
        let idx = three_tokens();
        let gold = r#"[pos="N.*"]"#;
        assert!(execution_accuracy(gold, gold, &idx, 100).unwrap().matched);
        assert!(!execution_accuracy("[pos=", gold, &idx, 100).unwrap().matched);
        let err = execution_accuracy(gold, "[pos=", &idx, 100);
        assert!(matches!(err, Err(ExecAccuracyError::GoldInvalid(_))));
    }

    #[test]
    fn execution_accuracy_accepts_commuted_or() {
        let idx = index_of("<doc>\n<s>\na\tX\nb\tY\na\tX\nc\tZ\nb\tY\nd\tW\n</s>\n</doc>\n");
        let outcome = execution_accuracy(
            r#"[word="a" | word="b"]"#,
            r#"[word="b" | word="a"]"#,
            &idx,
            100,
        )
        .unwrap();
        assert!(outcome.matched);
    }

    #[test]
    fn truncation_is_indeterminate_and_scores_zero() {
        let idx = three_tokens();
        let outcome = execution_accuracy("[]", "[]", &idx, 2).unwrap();
        assert!(!outcome.matched);
        assert!(outcome.warning.is_some());
    }

    #[test]
    fn empty_corpus_executes_to_empty_hits() {
        let idx = index_of("");
        assert_eq!(spans("[]", &idx), vec![]);
    }

    #[test]
    fn labels_inside_within_clause_participate_in_conditions() {
        let idx = index_of("<doc>\n<s>\na\tNN\nb\tDT\nc\tNN\n</s>\n</doc>\n");
        // Head token must share pos with the first token of the containing
        // 3-token window.
        let hits = spans("B:[] within A:[] [] [] :: A.pos = B.pos", &idx);
        assert_eq!(hits, vec![(0, 0, 1), (0, 2, 3)]);
    }
}

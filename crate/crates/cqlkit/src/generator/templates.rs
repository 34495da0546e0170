//! Template expansion: token mutation, null-token insertion, and the three
//! per-class query builders.

use rand::Rng;

use crate::corpus::CorpusIndex;
use crate::syntax::{
    classify, canonical_print, Attr, AttrConstraint, AttrRef, CmpOp, ConstraintExpr,
    GlobalConstraint, Quantifier, Query, SeqExpr, StructureTag, TokenExpr, WithinClause,
};

use super::collocation::{Collocation, CollocationItem, SynonymLexicon};
use super::{AbandonReason, Attempt, GenConfig, GenRecord, Provenance, SourceWord};

/// Structure names available to generated `within` clauses.
pub const STRUCTURE_NAMES: [&str; 3] = ["s", "p", "doc"];

/// The six random transformations of a collocation word into a token
/// constraint.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MutationForm {
    /// `[word="w"]`
    W,
    /// `[pos="p"]`
    P,
    /// `[word="w" & pos="p"]`
    Wap,
    /// `[word="w" | pos="p"]`
    Wop,
    /// `[word="w" | word="w2"]`
    Ww,
    /// `[(word="w" | word="w2") & pos="p"]`
    Wwp,
}

impl MutationForm {
    pub const ALL: [MutationForm; 6] = [
        MutationForm::W,
        MutationForm::P,
        MutationForm::Wap,
        MutationForm::Wop,
        MutationForm::Ww,
        MutationForm::Wwp,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MutationForm::W => "W",
            MutationForm::P => "P",
            MutationForm::Wap => "WAP",
            MutationForm::Wop => "WOP",
            MutationForm::Ww => "WW",
            MutationForm::Wwp => "WWP",
        }
    }
}

/// Uniform draw over the six mutation forms.
pub fn sample_mutation_form(rng: &mut impl Rng) -> MutationForm {
    MutationForm::ALL[rng.random_range(0..MutationForm::ALL.len())]
}

// Literal values are anchored regexes, so corpus words must be escaped to
// match themselves literally.
fn word_atom(value: &str) -> ConstraintExpr {
    ConstraintExpr::Atom(AttrConstraint {
        attr: Attr::Word,
        op: CmpOp::Equal,
        value: regex::escape(value),
    })
}

fn pos_atom(value: &str) -> ConstraintExpr {
    ConstraintExpr::Atom(AttrConstraint {
        attr: Attr::Pos,
        op: CmpOp::Equal,
        value: regex::escape(value),
    })
}

/// Converts one annotated word into a token constraint using a forced
/// mutation form. The WW/WWP forms draw a synonym uniformly and fall back to
/// the plain word query when the lexicon has none.
pub fn mutate_token_as(
    form: MutationForm,
    word: &str,
    pos: &str,
    syn: &SynonymLexicon,
    rng: &mut impl Rng,
) -> ConstraintExpr {
    fn pick_synonym(syn: &SynonymLexicon, word: &str, rng: &mut impl Rng) -> Option<String> {
        let options = syn.synonyms(word);
        if options.is_empty() {
            None
        } else {
            Some(options[rng.random_range(0..options.len())].clone())
        }
    }
    match form {
        MutationForm::W => word_atom(word),
        MutationForm::P => pos_atom(pos),
        MutationForm::Wap => ConstraintExpr::And(vec![word_atom(word), pos_atom(pos)]),
        MutationForm::Wop => ConstraintExpr::Or(vec![word_atom(word), pos_atom(pos)]),
        MutationForm::Ww => match pick_synonym(syn, word, rng) {
            Some(other) => ConstraintExpr::Or(vec![word_atom(word), word_atom(&other)]),
            None => word_atom(word),
        },
        MutationForm::Wwp => match pick_synonym(syn, word, rng) {
            Some(other) => ConstraintExpr::And(vec![
                ConstraintExpr::Or(vec![word_atom(word), word_atom(&other)]),
                pos_atom(pos),
            ]),
            None => word_atom(word),
        },
    }
}

/// Converts one annotated word into a token constraint by a uniformly random
/// mutation form.
pub fn mutate_token(
    word: &str,
    pos: &str,
    syn: &SynonymLexicon,
    rng: &mut impl Rng,
) -> ConstraintExpr {
    mutate_token_as(sample_mutation_form(rng), word, pos, syn, rng)
}

/// Uniform draw over the null-token quantifiers: `?` plus every `{m,n}` with
/// `0 <= m <= max_min` and `m < n <= m + max_width`.
pub fn sample_null_quant(rng: &mut impl Rng, max_min: u32, max_width: u32) -> Quantifier {
    let bounded = (max_min + 1) * max_width;
    let pick = rng.random_range(0..=bounded);
    if pick == 0 {
        Quantifier::new(0, Some(1))
    } else {
        let m = (pick - 1) / max_width;
        let n = m + 1 + (pick - 1) % max_width;
        Quantifier::new(m, Some(n))
    }
}

/// Appends an unrestricted `[]` token with a randomly drawn quantifier.
pub fn insert_null_token(seq: SeqExpr, cfg: &GenConfig, rng: &mut impl Rng) -> SeqExpr {
    let quant = sample_null_quant(rng, cfg.quant_max_min, cfg.quant_max_width);
    insert_null_token_with(seq, quant)
}

/// Appends an unrestricted `[]` token with the given quantifier.
pub fn insert_null_token_with(mut seq: SeqExpr, quant: Quantifier) -> SeqExpr {
    seq.elements.push(TokenExpr::empty().with_quant(quant));
    seq
}

/// Trace of one simple-sequence expansion.
pub(super) struct SeqTrace {
    pub words: Vec<SourceWord>,
    pub forms: Vec<String>,
    /// Element indices of the inserted null tokens.
    pub nulls: Vec<usize>,
}

/// Walks a collocation left to right: abandon on any low-frequency word,
/// otherwise mutate each word, inserting a null token unconditionally at gap
/// markers and with probability `null_token_prob` elsewhere.
pub(super) fn build_simple_seq(
    col: &Collocation,
    idx: &CorpusIndex,
    syn: &SynonymLexicon,
    cfg: &GenConfig,
    rng: &mut impl Rng,
) -> Result<(SeqExpr, SeqTrace), AbandonReason> {
    let mut elements: Vec<TokenExpr> = Vec::new();
    let mut trace = SeqTrace {
        words: Vec::new(),
        forms: Vec::new(),
        nulls: Vec::new(),
    };
    let items = col.items();
    for (i, item) in items.iter().enumerate() {
        let CollocationItem::Word { word, pos } = item else {
            continue; // gaps are handled by the preceding word
        };
        let freq = idx.freq(word);
        if freq < cfg.min_freq {
            return Err(AbandonReason::LowFrequency {
                word: word.clone(),
                freq,
            });
        }
        let form = sample_mutation_form(rng);
        elements.push(TokenExpr::new(mutate_token_as(form, word, pos, syn, rng)));
        trace.words.push(SourceWord {
            word: word.clone(),
            pos: pos.clone(),
        });
        trace.forms.push(form.name().to_string());

        let gap_next = matches!(items.get(i + 1), Some(CollocationItem::Gap));
        let insert = gap_next || rng.random::<f64>() < cfg.null_token_prob;
        if insert {
            let seq = insert_null_token(SeqExpr::new(elements), cfg, rng);
            elements = seq.elements;
            trace.nulls.push(elements.len() - 1);
        }
    }
    Ok((SeqExpr::new(elements), trace))
}

/// Generates one simple query from a collocation, or abandons it when any
/// constituent word is too rare.
pub fn gen_simple(
    col: &Collocation,
    idx: &CorpusIndex,
    syn: &SynonymLexicon,
    cfg: &GenConfig,
    rng: &mut impl Rng,
) -> Attempt {
    match build_simple_seq(col, idx, syn, cfg, rng) {
        Err(reason) => Attempt::Abandoned(reason),
        Ok((seq, trace)) => {
            let query = Query {
                head: seq,
                withins: vec![],
                conditions: vec![],
            };
            Attempt::Generated(finish(query, Provenance::Simple {
                words: trace.words,
                forms: trace.forms,
                nulls: trace.nulls,
            }))
        }
    }
}

/// The largest number of corpus tokens a sequence can cover: the sum of
/// quantifier maxima, `None` when any quantifier is unbounded.
pub fn max_referencable_len(seq: &SeqExpr) -> Option<u64> {
    seq.elements
        .iter()
        .map(|t| t.quant.max.map(u64::from))
        .sum()
}

/// The shape of a generated within query.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WithinForm {
    /// `short within long`
    Subquery,
    /// `seq within <name/>`
    Structure,
    /// `short within long within <name/>`
    Nested,
}

impl WithinForm {
    pub fn name(self) -> &'static str {
        match self {
            WithinForm::Subquery => "subquery",
            WithinForm::Structure => "structure",
            WithinForm::Nested => "nested",
        }
    }
}

fn sample_structure(rng: &mut impl Rng) -> String {
    STRUCTURE_NAMES[rng.random_range(0..STRUCTURE_NAMES.len())].to_string()
}

/// Generates one within query with a forced form.
pub fn gen_within_as(
    form: WithinForm,
    cols: (&Collocation, &Collocation),
    idx: &CorpusIndex,
    syn: &SynonymLexicon,
    cfg: &GenConfig,
    rng: &mut impl Rng,
) -> Attempt {
    let (first, trace_first) = match build_simple_seq(cols.0, idx, syn, cfg, rng) {
        Ok(v) => v,
        Err(reason) => return Attempt::Abandoned(reason),
    };

    if form == WithinForm::Structure {
        let structure = sample_structure(rng);
        let query = Query {
            head: first,
            withins: vec![WithinClause::Struct(StructureTag {
                name: structure.clone(),
            })],
            conditions: vec![],
        };
        return Attempt::Generated(finish(query, Provenance::Within {
            form: form.name().to_string(),
            left_words: trace_first.words,
            right_words: None,
            structure: Some(structure),
        }));
    }

    let (second, trace_second) = match build_simple_seq(cols.1, idx, syn, cfg, rng) {
        Ok(v) => v,
        Err(reason) => return Attempt::Abandoned(reason),
    };

    // The sub-query with the smaller maximum coverage precedes `within`.
    // Generated quantifiers are always bounded.
    let first_len = max_referencable_len(&first).expect("generated quantifiers are bounded");
    let second_len = max_referencable_len(&second).expect("generated quantifiers are bounded");
    let (head, scope, left_trace, right_trace) = if first_len <= second_len {
        (first, second, trace_first, trace_second)
    } else {
        (second, first, trace_second, trace_first)
    };

    let mut withins = vec![WithinClause::Seq(scope)];
    let mut structure = None;
    if form == WithinForm::Nested {
        let name = sample_structure(rng);
        withins.push(WithinClause::Struct(StructureTag { name: name.clone() }));
        structure = Some(name);
    }

    let query = Query {
        head,
        withins,
        conditions: vec![],
    };
    Attempt::Generated(finish(query, Provenance::Within {
        form: form.name().to_string(),
        left_words: left_trace.words,
        right_words: Some(right_trace.words),
        structure,
    }))
}

/// Generates one within query: nested with probability
/// `nested_within_prob`, otherwise a coin flip between the subquery and
/// structure forms.
pub fn gen_within(
    cols: (&Collocation, &Collocation),
    idx: &CorpusIndex,
    syn: &SynonymLexicon,
    cfg: &GenConfig,
    rng: &mut impl Rng,
) -> Attempt {
    let form = if rng.random::<f64>() < cfg.nested_within_prob {
        WithinForm::Nested
    } else if rng.random::<f64>() < 0.5 {
        WithinForm::Subquery
    } else {
        WithinForm::Structure
    };
    gen_within_as(form, cols, idx, syn, cfg, rng)
}

/// A token pair inside one sentence sharing a word or pos value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EligiblePair {
    pub doc_id: usize,
    pub left: usize,
    pub right: usize,
    pub attr: Attr,
}

/// All equal-attribute token pairs within sentences, in deterministic corpus
/// order. Built once and reused across condition generations.
pub struct ConditionPool {
    pub pairs: Vec<EligiblePair>,
}

impl ConditionPool {
    pub fn build(idx: &CorpusIndex) -> ConditionPool {
        let mut pairs = Vec::new();
        for sentence in idx.sentences() {
            let doc = &idx.docs()[sentence.doc_id];
            for i in sentence.start..sentence.end {
                for j in (i + 1)..sentence.end {
                    if doc[i].pos == doc[j].pos {
                        pairs.push(EligiblePair {
                            doc_id: sentence.doc_id,
                            left: i,
                            right: j,
                            attr: Attr::Pos,
                        });
                    }
                    if doc[i].word == doc[j].word {
                        pairs.push(EligiblePair {
                            doc_id: sentence.doc_id,
                            left: i,
                            right: j,
                            attr: Attr::Word,
                        });
                    }
                }
            }
        }
        ConditionPool { pairs }
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

/// No sentence contains a token pair with equal word or pos.
#[derive(Debug, thiserror::Error)]
#[error("no sentence contains a token pair with equal word or pos")]
pub struct NoEligiblePair;

pub(super) fn gen_condition_from_pool(
    pool: &ConditionPool,
    cfg: &GenConfig,
    rng: &mut impl Rng,
) -> Result<GenRecord, NoEligiblePair> {
    let _ = cfg;
    if pool.is_empty() {
        return Err(NoEligiblePair);
    }
    let pair = &pool.pairs[rng.random_range(0..pool.pairs.len())];
    let gap = pair.right - pair.left - 1;

    let mut elements = vec![TokenExpr::empty().with_label("A")];
    // A gap of zero or one is rendered as an optional filler; larger gaps
    // pin the observed distance exactly.
    if gap <= 1 {
        elements.push(TokenExpr::empty().with_quant(Quantifier::new(0, Some(1))));
    } else {
        elements.push(
            TokenExpr::empty().with_quant(Quantifier::new(gap as u32, Some(gap as u32))),
        );
    }
    elements.push(TokenExpr::empty().with_label("B"));

    let query = Query {
        head: SeqExpr::new(elements),
        withins: vec![WithinClause::Struct(StructureTag {
            name: "s".to_string(),
        })],
        conditions: vec![GlobalConstraint {
            left: AttrRef {
                label: "A".to_string(),
                attr: pair.attr.clone(),
            },
            op: CmpOp::Equal,
            right: AttrRef {
                label: "B".to_string(),
                attr: pair.attr.clone(),
            },
        }],
    };
    Ok(finish(query, Provenance::Condition {
        attr: pair.attr.name().to_string(),
        doc_id: pair.doc_id,
        left: pair.left,
        right: pair.right,
        gap,
    }))
}

/// Generates one condition query from a randomly chosen equal-attribute token
/// pair observed in a sentence.
pub fn gen_condition(
    idx: &CorpusIndex,
    cfg: &GenConfig,
    rng: &mut impl Rng,
) -> Result<GenRecord, NoEligiblePair> {
    gen_condition_from_pool(&ConditionPool::build(idx), cfg, rng)
}

fn finish(query: Query, provenance: Provenance) -> GenRecord {
    GenRecord {
        cql: canonical_print(&query),
        class: classify(&query),
        provenance,
    }
}

//! Shared helpers for randomized integration tests: seeded samplers for
//! small annotated corpora and valid queries of all three classes.

#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use cqlkit::corpus::{AnnToken, AnnotatedCorpus, StructureSpan};
use cqlkit::syntax::{
    Attr, AttrConstraint, AttrRef, CmpOp, ConstraintExpr, GlobalConstraint, Quantifier, Query,
    SeqExpr, StructureTag, TokenExpr, WithinClause,
};

pub const WORDS: [&str; 8] = ["cat", "dog", "run", "walk", "the", "a", "red", "blue"];
pub const POS_TAGS: [&str; 6] = ["NN", "NNS", "VB", "VBD", "DT", "JJ"];
pub const LEMMAS: [&str; 4] = ["cat", "run", "the", "red"];

/// Builds a corpus of at most `max_tokens` tokens: 1-4 documents, sentences
/// of 1-10 tokens, occasional paragraph spans, lemma column always present.
pub fn sample_corpus(rng: &mut ChaCha8Rng, max_tokens: usize) -> AnnotatedCorpus {
    let target = rng.random_range(max_tokens / 2..=max_tokens).max(1);
    let doc_count = rng.random_range(1..=4usize);
    let mut docs: Vec<Vec<AnnToken>> = Vec::new();
    let mut structures = Vec::new();
    let mut produced = 0;

    for doc_id in 0..doc_count {
        let mut doc = Vec::new();
        let doc_budget = ((target - produced) / (doc_count - doc_id)).max(1);
        let mut para_start = 0usize;
        while doc.len() < doc_budget {
            let sent_len = rng.random_range(1..=10usize).min(doc_budget - doc.len()).max(1);
            let start = doc.len();
            for _ in 0..sent_len {
                let word = WORDS[rng.random_range(0..WORDS.len())];
                doc.push(AnnToken {
                    word: word.to_string(),
                    pos: POS_TAGS[rng.random_range(0..POS_TAGS.len())].to_string(),
                    lemma: LEMMAS[rng.random_range(0..LEMMAS.len())].to_string(),
                });
            }
            structures.push(StructureSpan {
                name: "s".to_string(),
                doc_id,
                start,
                end: doc.len(),
            });
            // Close a paragraph roughly every other sentence.
            if rng.random_range(0..2) == 0 {
                structures.push(StructureSpan {
                    name: "p".to_string(),
                    doc_id,
                    start: para_start,
                    end: doc.len(),
                });
                para_start = doc.len();
            }
        }
        if para_start < doc.len() {
            structures.push(StructureSpan {
                name: "p".to_string(),
                doc_id,
                start: para_start,
                end: doc.len(),
            });
        }
        structures.push(StructureSpan {
            name: "doc".to_string(),
            doc_id,
            start: 0,
            end: doc.len(),
        });
        produced += doc.len();
        docs.push(doc);
    }

    AnnotatedCorpus {
        docs,
        structures,
        has_lemma: true,
    }
}

fn sample_value(rng: &mut ChaCha8Rng, attr: &Attr) -> String {
    let roll = rng.random_range(0..100);
    match attr {
        Attr::Word => {
            if roll < 70 {
                WORDS[rng.random_range(0..WORDS.len())].to_string()
            } else if roll < 90 {
                // prefix regex over the vocabulary
                let w = WORDS[rng.random_range(0..WORDS.len())];
                format!("{}.*", &w[..1])
            } else {
                "zz".to_string() // never occurs
            }
        }
        Attr::Pos => {
            if roll < 70 {
                POS_TAGS[rng.random_range(0..POS_TAGS.len())].to_string()
            } else if roll < 90 {
                ["N.*", "VB.*", "[DJ].*"][rng.random_range(0..3)].to_string()
            } else {
                "XX".to_string()
            }
        }
        _ => {
            if roll < 80 {
                LEMMAS[rng.random_range(0..LEMMAS.len())].to_string()
            } else {
                "zz".to_string()
            }
        }
    }
}

fn sample_atom(rng: &mut ChaCha8Rng) -> ConstraintExpr {
    let attr = match rng.random_range(0..10) {
        0..=4 => Attr::Word,
        5..=8 => Attr::Pos,
        _ => Attr::Lemma,
    };
    let op = if rng.random_range(0..5) == 0 {
        CmpOp::NotEqual
    } else {
        CmpOp::Equal
    };
    let value = sample_value(rng, &attr);
    ConstraintExpr::Atom(AttrConstraint { attr, op, value })
}

fn sample_constraint(rng: &mut ChaCha8Rng) -> ConstraintExpr {
    match rng.random_range(0..100) {
        0..=24 => ConstraintExpr::Empty,
        25..=64 => sample_atom(rng),
        65..=79 => ConstraintExpr::And(vec![sample_atom(rng), sample_atom(rng)]),
        80..=89 => ConstraintExpr::Or(vec![sample_atom(rng), sample_atom(rng)]),
        _ => ConstraintExpr::Not(Box::new(sample_atom(rng))),
    }
}

/// A quantifier; unbounded forms only when `allow_unbounded`.
fn sample_quant(rng: &mut ChaCha8Rng, allow_unbounded: bool) -> Quantifier {
    match rng.random_range(0..100) {
        0..=49 => Quantifier::ONE,
        50..=64 => Quantifier::new(0, Some(1)),
        65..=84 => {
            let m = rng.random_range(0..=3u32);
            let n = m + rng.random_range(1..=4u32);
            Quantifier::new(m, Some(n))
        }
        85..=92 if allow_unbounded => Quantifier::new(0, None),
        _ if allow_unbounded => Quantifier::new(1, None),
        _ => Quantifier::new(rng.random_range(0..=1), Some(rng.random_range(1..=3))),
    }
}

/// A sequence of 1-3 tokens with at most one unbounded quantifier.
fn sample_seq(rng: &mut ChaCha8Rng) -> SeqExpr {
    let len = rng.random_range(1..=3usize);
    let mut unbounded_used = false;
    let elements = (0..len)
        .map(|_| {
            let quant = sample_quant(rng, !unbounded_used);
            if quant.max.is_none() {
                unbounded_used = true;
            }
            TokenExpr::new(sample_constraint(rng)).with_quant(quant)
        })
        .collect();
    SeqExpr::new(elements)
}

fn sample_struct(rng: &mut ChaCha8Rng) -> WithinClause {
    let name = ["s", "p", "doc"][rng.random_range(0..3)];
    WithinClause::Struct(StructureTag {
        name: name.to_string(),
    })
}

fn sample_cond_attr(rng: &mut ChaCha8Rng) -> Attr {
    match rng.random_range(0..3) {
        0 => Attr::Word,
        1 => Attr::Pos,
        _ => Attr::Lemma,
    }
}

/// A random valid query of the given class index (0 simple, 1 within,
/// 2 condition).
pub fn sample_query_of_class(rng: &mut ChaCha8Rng, class: usize) -> Query {
    match class {
        0 => Query {
            head: sample_seq(rng),
            withins: vec![],
            conditions: vec![],
        },
        1 => {
            let mut withins = vec![if rng.random_range(0..2) == 0 {
                WithinClause::Seq(sample_seq(rng))
            } else {
                sample_struct(rng)
            }];
            if rng.random_range(0..4) == 0 {
                withins.push(sample_struct(rng));
            }
            Query {
                head: sample_seq(rng),
                withins,
                conditions: vec![],
            }
        }
        _ => {
            // Two labeled single-token targets; B occasionally lives in a
            // within sequence instead of the head.
            let mut head = sample_seq(rng);
            head.elements[0] = TokenExpr::new(sample_constraint(rng)).with_label("A");
            let b_token = TokenExpr::new(sample_constraint(rng)).with_label("B");
            let mut withins = Vec::new();
            let b_in_within = rng.random_range(0..5) == 0;
            if b_in_within {
                let mut scope = sample_seq(rng);
                scope.elements[0] = b_token;
                withins.push(WithinClause::Seq(scope));
            } else {
                head.elements.push(b_token);
            }
            if rng.random_range(0..2) == 0 {
                withins.push(sample_struct(rng));
            }
            let conditions = (0..rng.random_range(1..=2usize))
                .map(|_| GlobalConstraint {
                    left: AttrRef {
                        label: "A".to_string(),
                        attr: sample_cond_attr(rng),
                    },
                    op: if rng.random_range(0..3) == 0 {
                        CmpOp::NotEqual
                    } else {
                        CmpOp::Equal
                    },
                    right: AttrRef {
                        label: "B".to_string(),
                        attr: sample_cond_attr(rng),
                    },
                })
                .collect();
            Query {
                head,
                withins,
                conditions,
            }
        }
    }
}

/// A random valid query, classes drawn uniformly.
pub fn sample_query(rng: &mut ChaCha8Rng) -> Query {
    let class = rng.random_range(0..3usize);
    sample_query_of_class(rng, class)
}

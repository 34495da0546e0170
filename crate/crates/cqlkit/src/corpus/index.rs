//! In-memory index over an annotated corpus.

use std::collections::HashMap;

use crate::syntax::Attr;

use super::{AnnToken, AnnotatedCorpus, StructureSpan};

/// Immutable index: exact-value postings per attribute plus word frequencies.
/// Safe to share across threads once built.
#[derive(Debug, Clone)]
pub struct CorpusIndex {
    corpus: AnnotatedCorpus,
    /// (attribute, exact value) -> strictly increasing (doc, offset) pairs.
    postings: HashMap<(Attr, String), Vec<(usize, usize)>>,
    freq: HashMap<String, usize>,
}

/// Builds postings over word/pos/lemma exact values and the word-frequency
/// table.
pub fn build_index(corpus: AnnotatedCorpus) -> CorpusIndex {
    let mut postings: HashMap<(Attr, String), Vec<(usize, usize)>> = HashMap::new();
    let mut freq: HashMap<String, usize> = HashMap::new();

    for (doc_id, doc) in corpus.docs.iter().enumerate() {
        for (off, tok) in doc.iter().enumerate() {
            *freq.entry(tok.word.clone()).or_insert(0) += 1;
            postings
                .entry((Attr::Word, tok.word.clone()))
                .or_default()
                .push((doc_id, off));
            postings
                .entry((Attr::Pos, tok.pos.clone()))
                .or_default()
                .push((doc_id, off));
            if corpus.has_lemma {
                postings
                    .entry((Attr::Lemma, tok.lemma.clone()))
                    .or_default()
                    .push((doc_id, off));
            }
        }
    }

    CorpusIndex {
        corpus,
        postings,
        freq,
    }
}

impl CorpusIndex {
    pub fn corpus(&self) -> &AnnotatedCorpus {
        &self.corpus
    }

    pub fn docs(&self) -> &[Vec<AnnToken>] {
        &self.corpus.docs
    }

    pub fn token_count(&self) -> usize {
        self.corpus.token_count()
    }

    /// Occurrence count of an exact word form.
    pub fn freq(&self, word: &str) -> usize {
        self.freq.get(word).copied().unwrap_or(0)
    }

    /// Positions of tokens whose attribute equals `value` exactly, sorted by
    /// (doc, offset).
    pub fn postings(&self, attr: &Attr, value: &str) -> &[(usize, usize)] {
        self.postings
            .get(&(attr.clone(), value.to_string()))
            .map_or(&[], Vec::as_slice)
    }

    /// Sentence spans, in corpus order.
    pub fn sentences(&self) -> impl Iterator<Item = &StructureSpan> {
        self.corpus.spans_named("s")
    }

    /// Sum of all word frequencies; always equals the token count.
    pub fn freq_total(&self) -> usize {
        self.freq.values().sum()
    }
}

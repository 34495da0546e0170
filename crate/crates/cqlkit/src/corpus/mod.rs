//! Annotated corpora: ingestion, indexing, query execution, and the
//! brute-force execution oracle.

mod engine;
mod index;
mod oracle;
mod vertical;

pub use engine::{
    execute, execution_accuracy, ExOutcome, ExecAccuracyError, ExecError, Hit, HitSet,
    DEFAULT_HIT_LIMIT,
};
pub use index::{build_index, CorpusIndex};
pub use oracle::{brute_force_execute, BruteForceError, BRUTE_FORCE_TOKEN_CAP};
pub use vertical::{ingest_vertical, ingest_vertical_path, ingest_vertical_str, FormatError};

/// One corpus token with its annotation layers. `lemma` falls back to the
/// word form when the source file has no lemma column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnToken {
    pub word: String,
    pub pos: String,
    pub lemma: String,
}

/// A named structural region of a document, e.g. a sentence. `end` is
/// exclusive; spans of the same name never overlap.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureSpan {
    pub name: String,
    pub doc_id: usize,
    pub start: usize,
    pub end: usize,
}

/// Documents of annotated tokens plus their structure spans. Every token lies
/// inside exactly one `s` span and one `doc` span.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnnotatedCorpus {
    pub docs: Vec<Vec<AnnToken>>,
    pub structures: Vec<StructureSpan>,
    /// True when at least one token line carried an explicit lemma column;
    /// determines whether `lemma` is part of the corpus schema.
    pub has_lemma: bool,
}

impl AnnotatedCorpus {
    pub fn token_count(&self) -> usize {
        self.docs.iter().map(Vec::len).sum()
    }

    /// True when the attribute is part of this corpus's schema.
    pub fn has_attr(&self, attr: &crate::syntax::Attr) -> bool {
        use crate::syntax::Attr;
        match attr {
            Attr::Word | Attr::Pos => true,
            Attr::Lemma => self.has_lemma,
            Attr::Other(_) => false,
        }
    }

    /// Spans of the given structure name, in document order.
    pub fn spans_named<'a>(&'a self, name: &'a str) -> impl Iterator<Item = &'a StructureSpan> {
        self.structures.iter().filter(move |s| s.name == name)
    }
}

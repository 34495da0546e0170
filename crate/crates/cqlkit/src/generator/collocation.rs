//! Collocations and synonym lexicons: the seed material for query generation.
//!
//! File formats: collocations are one per line, TAB-separated items, each
//! item `word/pos` or a literal `X` gap marker; synonym lexicons are
//! `word<TAB>syn1<TAB>syn2...` per line. `#` lines are comments.

use std::collections::{BTreeMap, HashMap};
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use thiserror::Error;

use crate::corpus::CorpusIndex;

/// One item of a collocation: an annotated word or a gap marker (`X`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CollocationItem {
    Word { word: String, pos: String },
    Gap,
}

/// An ordered word combination extracted from a corpus, with optional gaps
/// between words. At least two words; gaps never lead, trail, or repeat.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Collocation {
    items: Vec<CollocationItem>,
}

/// Structural violations rejected by [`Collocation::new`].
#[derive(Debug, Error, PartialEq, Eq)]
pub enum CollocationError {
    #[error("collocation needs at least two words")]
    TooFewWords,
    #[error("gap marker at position {0} is leading, trailing, or adjacent to another gap")]
    MisplacedGap(usize),
}

impl Collocation {
    pub fn new(items: Vec<CollocationItem>) -> Result<Collocation, CollocationError> {
        let words = items
            .iter()
            .filter(|i| matches!(i, CollocationItem::Word { .. }))
            .count();
        if words < 2 {
            return Err(CollocationError::TooFewWords);
        }
        for (i, item) in items.iter().enumerate() {
            if matches!(item, CollocationItem::Gap) {
                let leading = i == 0;
                let trailing = i == items.len() - 1;
                let doubled = i > 0 && matches!(items[i - 1], CollocationItem::Gap);
                if leading || trailing || doubled {
                    return Err(CollocationError::MisplacedGap(i));
                }
            }
        }
        Ok(Collocation { items })
    }

    /// Builds a gapless collocation from (word, pos) pairs.
    pub fn from_pairs(pairs: &[(&str, &str)]) -> Result<Collocation, CollocationError> {
        Collocation::new(
            pairs
                .iter()
                .map(|(w, p)| CollocationItem::Word {
                    word: w.to_string(),
                    pos: p.to_string(),
                })
                .collect(),
        )
    }

    pub fn items(&self) -> &[CollocationItem] {
        &self.items
    }

    /// The word items in order, skipping gaps.
    pub fn words(&self) -> impl Iterator<Item = (&str, &str)> {
        self.items.iter().filter_map(|i| match i {
            CollocationItem::Word { word, pos } => Some((word.as_str(), pos.as_str())),
            CollocationItem::Gap => None,
        })
    }
}

/// Word -> synonyms map used by the WW/WWP mutation forms.
#[derive(Debug, Clone, Default)]
pub struct SynonymLexicon {
    map: HashMap<String, Vec<String>>,
}

impl SynonymLexicon {
    pub fn new() -> SynonymLexicon {
        SynonymLexicon::default()
    }

    /// Adds an entry; a word listed as its own synonym is rejected.
    pub fn insert(&mut self, word: &str, synonyms: Vec<String>) -> Result<(), LexiconError> {
        if synonyms.iter().any(|s| s == word) {
            return Err(LexiconError::SelfSynonym {
                word: word.to_string(),
            });
        }
        self.map.insert(word.to_string(), synonyms);
        Ok(())
    }

    pub fn synonyms(&self, word: &str) -> &[String] {
        self.map.get(word).map_or(&[], Vec::as_slice)
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("word '{word}' lists itself as a synonym")]
    SelfSynonym { word: String },
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("{0}")]
    Io(String),
}

/// Errors from the collocation file loader, with the 1-based line number.
#[derive(Debug, Error)]
#[error("line {line}: {message}")]
pub struct CollocationFileError {
    pub line: usize,
    pub message: String,
}

/// Loads a collocation file: `word/pos<TAB>X<TAB>word/pos...` per line.
pub fn load_collocations<R: BufRead>(reader: R) -> Result<Vec<Collocation>, CollocationFileError> {
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line_no = i + 1;
        let line = line.map_err(|e| CollocationFileError {
            line: line_no,
            message: format!("read error: {e}"),
        })?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut items = Vec::new();
        for field in trimmed.split('\t') {
            if field == "X" {
                items.push(CollocationItem::Gap);
                continue;
            }
            // The pos follows the last slash, so words may themselves
            // contain slashes.
            let Some((word, pos)) = field.rsplit_once('/') else {
                return Err(CollocationFileError {
                    line: line_no,
                    message: format!("item '{field}' is not word/pos or X"),
                });
            };
            if word.is_empty() || pos.is_empty() {
                return Err(CollocationFileError {
                    line: line_no,
                    message: format!("item '{field}' has an empty word or pos"),
                });
            }
            items.push(CollocationItem::Word {
                word: word.to_string(),
                pos: pos.to_string(),
            });
        }
        let collocation = Collocation::new(items).map_err(|e| CollocationFileError {
            line: line_no,
            message: e.to_string(),
        })?;
        out.push(collocation);
    }
    Ok(out)
}

pub fn load_collocations_path(path: &Path) -> Result<Vec<Collocation>, CollocationFileError> {
    let file = File::open(path).map_err(|e| CollocationFileError {
        line: 0,
        message: format!("{}: {e}", path.display()),
    })?;
    load_collocations(BufReader::new(file))
}

/// Loads a synonym lexicon: `word<TAB>syn1<TAB>syn2...` per line.
pub fn load_synonyms<R: BufRead>(reader: R) -> Result<SynonymLexicon, LexiconError> {
    let mut lexicon = SynonymLexicon::new();
    for (i, line) in reader.lines().enumerate() {
        let line_no = i + 1;
        let line = line.map_err(|e| LexiconError::Io(format!("line {line_no}: {e}")))?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut fields = trimmed.split('\t');
        let word = fields.next().unwrap_or("");
        if word.is_empty() {
            return Err(LexiconError::Malformed {
                line: line_no,
                message: "empty headword".to_string(),
            });
        }
        let synonyms: Vec<String> = fields
            .filter(|s| !s.is_empty())
            .map(str::to_string)
            .collect();
        lexicon.insert(word, synonyms).map_err(|e| match e {
            LexiconError::SelfSynonym { word } => LexiconError::Malformed {
                line: line_no,
                message: format!("word '{word}' lists itself as a synonym"),
            },
            other => other,
        })?;
    }
    Ok(lexicon)
}

pub fn load_synonyms_path(path: &Path) -> Result<SynonymLexicon, LexiconError> {
    let file = File::open(path).map_err(|e| LexiconError::Io(format!("{}: {e}", path.display())))?;
    load_synonyms(BufReader::new(file))
}

/// Fallback collocation extraction: (word, pos) pairs co-occurring within
/// `window` tokens of the same sentence, ranked by count descending then
/// lexicographically. Pairs at distance >= 2 carry a single gap marker.
///
/// `window` must be in `1..=5`.
pub fn extract_collocations_naive(idx: &CorpusIndex, window: usize) -> Vec<Collocation> {
    assert!((1..=5).contains(&window), "window must be in 1..=5");

    type PairKey = (String, String, String, String, bool);
    let mut counts: BTreeMap<PairKey, usize> = BTreeMap::new();
    for sentence in idx.sentences() {
        let doc = &idx.docs()[sentence.doc_id];
        for i in sentence.start..sentence.end {
            for j in (i + 1)..sentence.end.min(i + window + 1) {
                let key = (
                    doc[i].word.clone(),
                    doc[i].pos.clone(),
                    doc[j].word.clone(),
                    doc[j].pos.clone(),
                    j - i > 1,
                );
                *counts.entry(key).or_insert(0) += 1;
            }
        }
    }

    let mut ranked: Vec<(PairKey, usize)> = counts.into_iter().collect();
    ranked.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));

    ranked
        .into_iter()
        .map(|((w1, p1, w2, p2, gapped), _)| {
            let mut items = vec![CollocationItem::Word { word: w1, pos: p1 }];
            if gapped {
                items.push(CollocationItem::Gap);
            }
            items.push(CollocationItem::Word { word: w2, pos: p2 });
            Collocation::new(items).expect("pair collocation is structurally valid")
        })
        .collect()
}

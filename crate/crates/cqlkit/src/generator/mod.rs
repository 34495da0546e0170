//! Template-based synthesis of CQL queries from corpus collocations.
//!
//! Simple queries walk a collocation and mutate each word into one of six
//! constraint forms, inserting unrestricted filler tokens at gap markers and
//! randomly elsewhere; a collocation containing a word with corpus frequency
//! below the threshold is abandoned. Within queries scope one generated
//! sequence by another (shorter first) or by a structure tag, with an
//! occasional nested two-`within` form whose structure clause comes last.
//! Condition queries are seeded by observed same-word or same-pos token pairs
//! inside sentences.
//!
//! Generation is a pure function of the seed: identical inputs produce
//! byte-identical datasets.

mod collocation;
mod templates;

pub use collocation::{
    extract_collocations_naive, load_collocations, load_collocations_path, load_synonyms,
    load_synonyms_path, Collocation, CollocationError, CollocationFileError, CollocationItem,
    LexiconError, SynonymLexicon,
};
pub use templates::{
    gen_condition, gen_simple, gen_within, gen_within_as, insert_null_token,
    insert_null_token_with, max_referencable_len, mutate_token, mutate_token_as,
    sample_mutation_form, sample_null_quant, ConditionPool, EligiblePair, MutationForm,
    NoEligiblePair, WithinForm, STRUCTURE_NAMES,
};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::corpus::{execute, CorpusIndex};
use crate::syntax::{parse, QueryClass};

use templates::gen_condition_from_pool;

/// Proportions of the three query classes in a generated dataset.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassMix {
    pub simple: f64,
    pub within: f64,
    pub condition: f64,
}

impl ClassMix {
    pub fn new(simple: f64, within: f64, condition: f64) -> Result<ClassMix, GenError> {
        let mix = ClassMix {
            simple,
            within,
            condition,
        };
        if mix.is_valid() {
            Ok(mix)
        } else {
            Err(GenError::BadMix {
                simple,
                within,
                condition,
            })
        }
    }

    fn is_valid(&self) -> bool {
        let parts = [self.simple, self.within, self.condition];
        parts.iter().all(|p| (0.0..=1.0).contains(p))
            && (parts.iter().sum::<f64>() - 1.0).abs() <= 1e-9
    }
}

impl Default for ClassMix {
    /// The observed dataset class ratios: 60% simple, 25% within,
    /// 15% condition.
    fn default() -> Self {
        ClassMix {
            simple: 0.60,
            within: 0.25,
            condition: 0.15,
        }
    }
}

/// Generation parameters.
#[derive(Debug, Clone)]
pub struct GenConfig {
    pub seed: u64,
    pub mix: ClassMix,
    /// Probability of appending a filler token after a word when no gap
    /// forces one.
    pub null_token_prob: f64,
    /// Largest lower bound of a sampled `{m,n}` filler quantifier.
    pub quant_max_min: u32,
    /// Largest width `n - m` of a sampled `{m,n}` filler quantifier.
    pub quant_max_width: u32,
    /// Words with corpus frequency below this abandon the collocation.
    pub min_freq: usize,
    /// Discard and regenerate records that produce no hits on the source
    /// corpus.
    pub require_hits: bool,
    /// Probability of the nested two-`within` form.
    pub nested_within_prob: f64,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            seed: 0,
            mix: ClassMix::default(),
            null_token_prob: 0.5,
            quant_max_min: 4,
            quant_max_width: 7,
            min_freq: 6,
            require_hits: false,
            nested_within_prob: 0.2,
        }
    }
}

/// A word drawn from a source collocation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SourceWord {
    pub word: String,
    pub pos: String,
}

/// How a record was produced: its seed material and the template decisions.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    Simple {
        words: Vec<SourceWord>,
        /// Mutation form drawn for each word, in order.
        forms: Vec<String>,
        /// Element indices of inserted filler tokens.
        nulls: Vec<usize>,
    },
    Within {
        form: String,
        left_words: Vec<SourceWord>,
        right_words: Option<Vec<SourceWord>>,
        structure: Option<String>,
    },
    Condition {
        attr: String,
        doc_id: usize,
        left: usize,
        right: usize,
        gap: usize,
    },
}

/// One generated query with its class and provenance trace. The CQL text is
/// canonical and always parses back to its declared class.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GenRecord {
    pub cql: String,
    pub class: QueryClass,
    pub provenance: Provenance,
}

/// Why a single generation attempt produced no record.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AbandonReason {
    /// A collocation word fell below the frequency threshold.
    LowFrequency { word: String, freq: usize },
}

/// Outcome of one generation attempt. Abandonment is a value, not an error:
/// dataset assembly retries with fresh draws.
#[derive(Debug, Clone, PartialEq)]
pub enum Attempt {
    Generated(GenRecord),
    Abandoned(AbandonReason),
}

#[derive(Debug, Error)]
pub enum GenError {
    #[error("class mix must be non-negative and sum to 1 (got {simple}/{within}/{condition})")]
    BadMix {
        simple: f64,
        within: f64,
        condition: f64,
    },
    #[error("dataset size must be at least 1")]
    BadCount,
    #[error("exhausted inputs after {attempts} attempts ({generated}/{target} records generated)")]
    ExhaustedInputs {
        attempts: usize,
        generated: usize,
        target: usize,
    },
}

/// Per-class record targets by largest-remainder rounding.
fn class_targets(n: usize, mix: ClassMix) -> [usize; 3] {
    let raw = [
        n as f64 * mix.simple,
        n as f64 * mix.within,
        n as f64 * mix.condition,
    ];
    let mut targets = [0usize; 3];
    let mut fractions: Vec<(usize, f64)> = Vec::with_capacity(3);
    let mut assigned = 0;
    for (i, r) in raw.iter().enumerate() {
        targets[i] = r.floor() as usize;
        assigned += targets[i];
        fractions.push((i, r - r.floor()));
    }
    fractions.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then(a.0.cmp(&b.0)));
    for (i, _) in fractions.into_iter().take(n - assigned) {
        targets[i] += 1;
    }
    targets
}

/// Generates exactly `n` records with class proportions matching the mix,
/// retrying abandoned attempts (and zero-hit records under `require_hits`)
/// with fresh draws. Deterministic in `(idx, cols, syn, n, cfg)`.
pub fn generate_dataset(
    idx: &CorpusIndex,
    cols: &[Collocation],
    syn: &SynonymLexicon,
    n: usize,
    cfg: &GenConfig,
) -> Result<Vec<GenRecord>, GenError> {
    if n == 0 {
        return Err(GenError::BadCount);
    }
    if !cfg.mix.is_valid() {
        return Err(GenError::BadMix {
            simple: cfg.mix.simple,
            within: cfg.mix.within,
            condition: cfg.mix.condition,
        });
    }

    let targets = class_targets(n, cfg.mix);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let condition_pool = if targets[2] > 0 {
        Some(ConditionPool::build(idx))
    } else {
        None
    };

    let max_attempts = n.saturating_mul(100);
    let mut attempts = 0;
    let mut records = Vec::with_capacity(n);

    for (class_idx, class) in QueryClass::ALL.iter().enumerate() {
        let mut produced = 0;
        while produced < targets[class_idx] {
            attempts += 1;
            if attempts > max_attempts {
                return Err(GenError::ExhaustedInputs {
                    attempts,
                    generated: records.len(),
                    target: n,
                });
            }
            let attempt = match class {
                QueryClass::Simple => {
                    if cols.is_empty() {
                        continue;
                    }
                    let col = &cols[rng.random_range(0..cols.len())];
                    gen_simple(col, idx, syn, cfg, &mut rng)
                }
                QueryClass::Within => {
                    if cols.len() < 2 {
                        continue;
                    }
                    let first = rng.random_range(0..cols.len());
                    let mut second = rng.random_range(0..cols.len() - 1);
                    if second >= first {
                        second += 1;
                    }
                    gen_within((&cols[first], &cols[second]), idx, syn, cfg, &mut rng)
                }
                QueryClass::Condition => {
                    let pool = condition_pool.as_ref().expect("pool built for condition target");
                    match gen_condition_from_pool(pool, cfg, &mut rng) {
                        Ok(record) => Attempt::Generated(record),
                        Err(NoEligiblePair) => continue,
                    }
                }
            };
            let Attempt::Generated(record) = attempt else {
                continue;
            };
            if cfg.require_hits && !has_hits(&record, idx) {
                continue;
            }
            records.push(record);
            produced += 1;
        }
    }

    Ok(records)
}

fn has_hits(record: &GenRecord, idx: &CorpusIndex) -> bool {
    let query = parse(&record.cql).expect("generated CQL parses");
    match execute(&query, idx, 1) {
        Ok(hits) => !hits.is_empty(),
        Err(_) => false,
    }
}

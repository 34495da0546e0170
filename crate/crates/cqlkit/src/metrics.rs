//! Query-level evaluation metrics.
//!
//! Four metrics compare a predicted query against a trusted gold query:
//!
//! - **EM** (exact match): canonical texts are identical, so quote style and
//!   whitespace never break it but operand order does.
//! - **VA** (valid accuracy): the prediction parses.
//! - **EX** (execution accuracy): both queries return the same hit spans on a
//!   corpus; delegated to [`crate::corpus::execution_accuracy`].
//! - **CQLBLEU**: `alpha * BLEU + beta * TS`, where BLEU is token-stream BLEU
//!   over the lexer token texts and TS is the fraction of the prediction's
//!   non-leaf AST nodes whose signature occurs among the gold query's
//!   non-leaf signatures.
//!
//! BLEU tokenization uses the canonical token stream when a side parses and
//! the raw lexed stream otherwise; this keeps EM = 1 implying BLEU = 1.

use std::collections::{HashMap, HashSet};

use thiserror::Error;

use crate::corpus::{execution_accuracy, CorpusIndex, ExecAccuracyError};
use crate::syntax::{lex, normalize, parse, signature_nodes, ParseError};

/// Weights of the BLEU and tree-similarity components. They must sum to 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricWeights {
    alpha: f64,
    beta: f64,
}

impl MetricWeights {
    /// Builds weights, requiring `alpha + beta = 1` and both in `[0, 1]`.
    pub fn new(alpha: f64, beta: f64) -> Result<MetricWeights, MetricError> {
        let valid = (0.0..=1.0).contains(&alpha)
            && (0.0..=1.0).contains(&beta)
            && (alpha + beta - 1.0).abs() <= 1e-9;
        if valid {
            Ok(MetricWeights { alpha, beta })
        } else {
            Err(MetricError::BadWeights { alpha, beta })
        }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }
}

impl Default for MetricWeights {
    fn default() -> Self {
        MetricWeights {
            alpha: 0.5,
            beta: 0.5,
        }
    }
}

/// All per-record scores. `ex` is present only when a corpus was supplied.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricScore {
    pub em: bool,
    pub va: bool,
    pub ex: Option<bool>,
    pub bleu: f64,
    pub ts: f64,
    pub cqlbleu: f64,
}

/// Failures attributable to the trusted inputs, not the prediction.
#[derive(Debug, Error)]
pub enum MetricError {
    #[error("gold query invalid: {0}")]
    GoldInvalid(ParseError),
    #[error("gold query failed to execute: {0}")]
    GoldExecutionFailed(String),
    #[error("weights must be in [0,1] and sum to 1 (alpha={alpha}, beta={beta})")]
    BadWeights { alpha: f64, beta: f64 },
}

impl From<ExecAccuracyError> for MetricError {
    fn from(err: ExecAccuracyError) -> Self {
        match err {
            ExecAccuracyError::GoldInvalid(e) => MetricError::GoldInvalid(e),
            ExecAccuracyError::GoldExecutionFailed(e) => {
                MetricError::GoldExecutionFailed(e.to_string())
            }
        }
    }
}

/// 1 iff the prediction normalizes to exactly the gold canonical text.
pub fn exact_match(pred: &str, gold: &str) -> Result<bool, MetricError> {
    let gold_canon = normalize(gold).map_err(MetricError::GoldInvalid)?;
    Ok(normalize(pred).is_ok_and(|p| p == gold_canon))
}

/// 1 iff the prediction parses.
pub fn valid_accuracy(pred: &str) -> bool {
    parse(pred).is_ok()
}

/// The token texts BLEU is computed over: the canonical stream when the text
/// parses, the raw lexed stream otherwise.
pub fn bleu_token_stream(text: &str) -> Vec<String> {
    let canonical = normalize(text);
    let source = canonical.as_deref().unwrap_or(text);
    lex(source).into_iter().map(|t| t.text).collect()
}

/// Token-stream BLEU with up to 4-grams. See [`bleu_with_max_n`].
pub fn bleu(pred: &str, gold: &str) -> f64 {
    bleu_with_max_n(pred, gold, 4)
}

/// Corpus-of-one BLEU over CQL token streams: the geometric mean of modified
/// n-gram precisions for n = 1..=max_n, with add-one smoothing applied to
/// zero-match counts, times the brevity penalty
/// `min(1, exp(1 - |gold| / |pred|))`. An empty prediction scores 0.
pub fn bleu_with_max_n(pred: &str, gold: &str, max_n: usize) -> f64 {
    let cand = bleu_token_stream(pred);
    let refr = bleu_token_stream(gold);
    bleu_on_tokens(&cand, &refr, max_n)
}

fn bleu_on_tokens(cand: &[String], refr: &[String], max_n: usize) -> f64 {
    if cand.is_empty() || max_n == 0 {
        return 0.0;
    }
    let mut log_sum = 0.0;
    for n in 1..=max_n {
        let (matches, total) = modified_precision(cand, refr, n);
        let p = if matches == 0 {
            1.0 / (total as f64 + 1.0)
        } else {
            matches as f64 / total as f64
        };
        log_sum += p.ln();
    }
    let geo_mean = (log_sum / max_n as f64).exp();
    let brevity = if cand.len() >= refr.len() {
        1.0
    } else {
        (1.0 - refr.len() as f64 / cand.len() as f64).exp()
    };
    brevity * geo_mean
}

/// Clipped n-gram matches and the candidate n-gram total.
fn modified_precision(cand: &[String], refr: &[String], n: usize) -> (usize, usize) {
    if cand.len() < n {
        return (0, 0);
    }
    let mut ref_counts: HashMap<&[String], usize> = HashMap::new();
    if refr.len() >= n {
        for gram in refr.windows(n) {
            *ref_counts.entry(gram).or_insert(0) += 1;
        }
    }
    let mut matches = 0;
    let mut cand_counts: HashMap<&[String], usize> = HashMap::new();
    for gram in cand.windows(n) {
        let seen = cand_counts.entry(gram).or_insert(0);
        *seen += 1;
        if *seen <= ref_counts.get(gram).copied().unwrap_or(0) {
            matches += 1;
        }
    }
    (matches, cand.len() - n + 1)
}

/// Fraction of the prediction's non-leaf AST nodes whose signature occurs
/// among the gold query's non-leaf node signatures. An unparseable prediction
/// scores 0.
pub fn tree_similarity(pred: &str, gold: &str) -> Result<f64, MetricError> {
    let gold_query = parse(gold).map_err(MetricError::GoldInvalid)?;
    let Ok(pred_query) = parse(pred) else {
        return Ok(0.0);
    };
    let gold_sigs: HashSet<_> = signature_nodes(&gold_query)
        .into_iter()
        .filter(|(_, leaf)| !leaf)
        .map(|(sig, _)| sig)
        .collect();
    let pred_nonleaf: Vec<_> = signature_nodes(&pred_query)
        .into_iter()
        .filter(|(_, leaf)| !leaf)
        .map(|(sig, _)| sig)
        .collect();
    let matched = pred_nonleaf
        .iter()
        .filter(|sig| gold_sigs.contains(sig))
        .count();
    Ok(matched as f64 / pred_nonleaf.len() as f64)
}

/// `alpha * BLEU + beta * TS`.
pub fn cqlbleu(pred: &str, gold: &str, w: MetricWeights) -> Result<f64, MetricError> {
    Ok(w.alpha * bleu(pred, gold) + w.beta * tree_similarity(pred, gold)?)
}

/// Non-fatal observations from scoring a record.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ScoreWarning {
    /// Execution accuracy was indeterminate because a hit set was truncated;
    /// the record's EX scored 0.
    TruncatedHits(String),
}

/// Computes the full score bundle for one (prediction, gold) pair. `ex` is
/// filled iff `corpus` is given; gold must parse, and execute when a corpus
/// is supplied.
pub fn score_record(
    pred: &str,
    gold: &str,
    corpus: Option<&CorpusIndex>,
    w: MetricWeights,
    limit: usize,
) -> Result<(MetricScore, Vec<ScoreWarning>), MetricError> {
    let em = exact_match(pred, gold)?;
    let va = valid_accuracy(pred);
    let bleu_score = bleu(pred, gold);
    let ts = tree_similarity(pred, gold)?;
    let mut warnings = Vec::new();
    let ex = match corpus {
        None => None,
        Some(idx) => {
            let outcome = execution_accuracy(pred, gold, idx, limit)?;
            if let Some(message) = outcome.warning {
                warnings.push(ScoreWarning::TruncatedHits(message));
            }
            Some(outcome.matched)
        }
    };
    let score = MetricScore {
        em,
        va,
        ex,
        bleu: bleu_score,
        ts,
        cqlbleu: w.alpha * bleu_score + w.beta * ts,
    };
    Ok((score, warnings))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{build_index, ingest_vertical_str, DEFAULT_HIT_LIMIT};

    #[test]
    fn exact_match_ignores_quote_style_and_whitespace() {
        assert!(exact_match("[word='book']", r#"[word="book"]"#).unwrap());
        assert!(exact_match(r#"[ lemma = "teapot" ]"#, r#"[lemma="teapot"]"#).unwrap());
        assert!(!exact_match(r#"[pos="NN"]"#, r#"[word="book"]"#).unwrap());
        assert!(matches!(
            exact_match("[]", "[word="),
            Err(MetricError::GoldInvalid(_))
        ));
    }

    #[test]
    fn exact_match_is_order_sensitive() {
        assert!(!exact_match(r#"[word="a" | word="b"]"#, r#"[word="b" | word="a"]"#).unwrap());
    }

    #[test]
    fn valid_accuracy_follows_parse() {
        assert!(valid_accuracy(r#"[lemma="teapot"]"#));
        assert!(!valid_accuracy("[word="));
        assert!(!valid_accuracy(""));
    }

    #[test]
    fn bleu_identity_is_exactly_one() {
        for q in [
            r#"[lemma="teapot"]"#,
            "1:[] 2:[] :: 1.pos = 2.pos",
            r#"[pos="N.*"] within [pos="VB.*"] []{0,5} [pos="VB.*"]"#,
        ] {
            assert_eq!(bleu(q, q), 1.0);
        }
    }

    #[test]
    fn bleu_of_empty_candidate_is_zero() {
        assert_eq!(bleu("", r#"[word="a"]"#), 0.0);
    }

    #[test]
    fn bleu_uses_canonical_token_streams() {
        // Same AST through different spellings: identical streams, BLEU 1.
        assert_eq!(bleu("[word='book']", r#"[ word = "book" ]"#), 1.0);
        assert_eq!(bleu(r#"[(word="book")]"#, r#"[word="book"]"#), 1.0);
    }

    #[test]
    fn bleu_matches_independent_reference_on_distinct_queries() {
        // Reference BLEU computed over the same token streams by a separate
        // implementation (see reference_bleu below).
        let pred = r#"[word="a"]"#;
        let gold = r#"[pos="b"]"#;
        let got = bleu(pred, gold);
        let want = reference_bleu(&bleu_token_stream(pred), &bleu_token_stream(gold), 4);
        assert!((got - want).abs() < 1e-12, "got {got}, want {want}");
        assert!(got > 0.0 && got < 1.0);
    }

    /// Naive reference BLEU: counts n-grams by linear scanning, used only to
    /// cross-check the production implementation.
    pub(crate) fn reference_bleu(cand: &[String], refr: &[String], max_n: usize) -> f64 {
        if cand.is_empty() {
            return 0.0;
        }
        let ngrams = |toks: &[String], n: usize| -> Vec<Vec<String>> {
            if toks.len() < n {
                Vec::new()
            } else {
                (0..=toks.len() - n).map(|i| toks[i..i + n].to_vec()).collect()
            }
        };
        let mut product = 1.0f64;
        for n in 1..=max_n {
            let cgrams = ngrams(cand, n);
            let rgrams = ngrams(refr, n);
            let mut matched = 0usize;
            let mut used = vec![false; rgrams.len()];
            for g in &cgrams {
                let slot = rgrams
                    .iter()
                    .enumerate()
                    .position(|(i, r)| !used[i] && r == g);
                if let Some(i) = slot {
                    used[i] = true;
                    matched += 1;
                }
            }
            let total = cgrams.len();
            let p = if matched == 0 {
                1.0 / (total as f64 + 1.0)
            } else {
                matched as f64 / total as f64
            };
            product *= p.powf(1.0 / max_n as f64);
        }
        let bp = if cand.len() >= refr.len() {
            1.0
        } else {
            (1.0 - refr.len() as f64 / cand.len() as f64).exp()
        };
        bp * product
    }

    #[test]
    fn tree_similarity_identity_and_unparseable() {
        let q = "A:[] []? B:[] within <s/> :: A.pos = B.pos";
        assert_eq!(tree_similarity(q, q).unwrap(), 1.0);
        assert_eq!(tree_similarity("[word=", q).unwrap(), 0.0);
        assert!(matches!(
            tree_similarity(q, "[word="),
            Err(MetricError::GoldInvalid(_))
        ));
    }

    #[test]
    fn tree_similarity_counts_matching_nonleaf_signatures() {
        // pred [word="book"]: non-leaf nodes Query(C=[Seq]), Seq(C=[Token]),
        // Token(C=[Atom], K={1,1}).
        // gold [word="book"] []: Query(C=[Seq]), Seq(C=[Token,Token]),
        // Token(C=[Atom], K={1,1}), Token(C=[Empty], K={1,1}).
        // Query and the atom Token match; pred's Seq has one child, gold's
        // has two, so it does not. TS = 2/3.
        let got = tree_similarity(r#"[word="book"]"#, r#"[word="book"] []"#).unwrap();
        assert!((got - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn tree_similarity_is_asymmetric() {
        let a = r#"[word="book"]"#;
        let b = r#"[word="book"] []"#;
        let ab = tree_similarity(a, b).unwrap();
        let ba = tree_similarity(b, a).unwrap();
        assert_ne!(ab, ba);
        // denominator is the candidate's non-leaf count: 2/3 vs 2/4
        assert!((ba - 0.5).abs() < 1e-12);
    }

    #[test]
    fn cqlbleu_is_the_affine_combination() {
        let pred = r#"[word="a" & pos="b"]"#;
        let gold = r#"[word="a" | pos="c"]"#;
        for (alpha, beta) in [(0.5, 0.5), (0.25, 0.75), (1.0, 0.0), (0.0, 1.0)] {
            let w = MetricWeights::new(alpha, beta).unwrap();
            let combined = cqlbleu(pred, gold, w).unwrap();
            let expect = alpha * bleu(pred, gold) + beta * tree_similarity(pred, gold).unwrap();
            assert!((combined - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn cqlbleu_identity_is_one() {
        let q = r#"[word='research' & pos='NN']"#;
        assert!((cqlbleu(q, q, MetricWeights::default()).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn cqlbleu_on_unparseable_prediction_is_half_bleu() {
        let gold = r#"[word="book"]"#;
        let pred = r#"[word="book""#; // lexes but does not parse
        let w = MetricWeights::default();
        let combined = cqlbleu(pred, gold, w).unwrap();
        assert!((combined - 0.5 * bleu(pred, gold)).abs() < 1e-12);
    }

    #[test]
    fn degenerate_weights_reduce_to_one_component() {
        let pred = r#"[word="a"]"#;
        let gold = r#"[word="a"] []"#;
        let only_bleu = MetricWeights::new(1.0, 0.0).unwrap();
        assert_eq!(cqlbleu(pred, gold, only_bleu).unwrap(), bleu(pred, gold));
    }

    #[test]
    fn weights_must_sum_to_one() {
        assert!(MetricWeights::new(0.7, 0.7).is_err());
        assert!(MetricWeights::new(-0.5, 1.5).is_err());
        assert!(MetricWeights::new(0.3, 0.7).is_ok());
    }

    #[test]
    fn score_record_identity() {
        let idx = build_index(
            ingest_vertical_str("<doc>\n<s>\nbook\tNN\nread\tVB\n</s>\n</doc>\n").unwrap(),
        );
        let q = r#"[pos="NN"]"#;
        let (score, warnings) =
            score_record(q, q, Some(&idx), MetricWeights::default(), DEFAULT_HIT_LIMIT).unwrap();
        assert!(score.em && score.va);
        assert_eq!(score.ex, Some(true));
        assert_eq!(score.cqlbleu, 1.0);
        assert!(warnings.is_empty());
    }

    #[test]
    fn score_record_cascades_zeros_for_unparseable_prediction() {
        let idx =
            build_index(ingest_vertical_str("<doc>\n<s>\nbook\tNN\n</s>\n</doc>\n").unwrap());
        let (score, _) = score_record(
            "[pos=",
            r#"[pos="NN"]"#,
            Some(&idx),
            MetricWeights::default(),
            DEFAULT_HIT_LIMIT,
        )
        .unwrap();
        assert!(!score.em && !score.va);
        assert_eq!(score.ex, Some(false));
        assert_eq!(score.ts, 0.0);
    }

    #[test]
    fn score_record_separates_form_from_semantics() {
        // Commuted OR operands: different canonical text, same hit set.
        let idx = build_index(
            ingest_vertical_str("<doc>\n<s>\na\tX\nb\tY\nc\tZ\na\tX\nb\tY\nd\tW\n</s>\n</doc>\n")
                .unwrap(),
        );
        let (score, _) = score_record(
            r#"[word="a" | word="b"]"#,
            r#"[word="b" | word="a"]"#,
            Some(&idx),
            MetricWeights::default(),
            DEFAULT_HIT_LIMIT,
        )
        .unwrap();
        assert!(!score.em);
        assert_eq!(score.ex, Some(true));
    }

    #[test]
    fn score_record_without_corpus_has_no_ex() {
        let (score, _) = score_record(
            r#"[word="a"]"#,
            r#"[word="a"]"#,
            None,
            MetricWeights::default(),
            DEFAULT_HIT_LIMIT,
        )
        .unwrap();
        assert_eq!(score.ex, None);
    }

    #[test]
    fn em_implies_perfect_components() {
        let pairs = [
            ("[word='book']", r#"[word="book"]"#),
            (r#"[ lemma = "teapot" ]"#, r#"[lemma="teapot"]"#),
            ("1:[] 2:[]::1.pos=2.pos", "1:[] 2:[] :: 1.pos = 2.pos"),
        ];
        for (pred, gold) in pairs {
            assert!(exact_match(pred, gold).unwrap());
            assert_eq!(bleu(pred, gold), 1.0, "bleu({pred}, {gold})");
            assert_eq!(tree_similarity(pred, gold).unwrap(), 1.0);
            assert!((cqlbleu(pred, gold, MetricWeights::default()).unwrap() - 1.0).abs() < 1e-12);
        }
    }
}

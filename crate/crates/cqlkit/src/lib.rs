//! Toolkit for the Corpus Query Language (CQL).
//!
//! The crate is organized around five areas:
//!
//! - [`syntax`] — lexer, recursive-descent parser, canonical printer, and
//!   AST node signatures for CQL queries.
//! - [`corpus`] — vertical-file ingestion, an in-memory index over annotated
//!   corpora, the query execution engine, and a brute-force oracle used to
//!   cross-check the engine.
//! - [`metrics`] — query-level evaluation metrics: exact match, valid
//!   accuracy, execution accuracy, and the combined BLEU / tree-similarity
//!   score.
//! - [`generator`] — template-based synthesis of simple/within/condition
//!   queries from corpus collocations.
//! - [`harness`] — dataset I/O, batch evaluation with per-class reporting,
//!   and dataset statistics.
//!
//! With the `parallel` feature (on by default) batch evaluation and query
//! execution fan out over a rayon thread pool; without it the same entry
//! points run sequentially.

pub mod corpus;
pub mod generator;
pub mod harness;
pub mod metrics;
pub mod syntax;

/// Runs `f` under a rayon pool with `jobs` worker threads.
///
/// `None` uses the global pool. Without the `parallel` feature the closure
/// simply runs on the calling thread and `jobs` is ignored.
pub fn run_with_jobs<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> T {
    #[cfg(feature = "parallel")]
    {
        match jobs {
            Some(n) => rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build()
                .expect("failed to build thread pool")
                .install(f),
            None => f(),
        }
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = jobs;
        f()
    }
}

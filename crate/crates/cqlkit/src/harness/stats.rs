//! Dataset statistics: per-class structural averages.

use serde::Serialize;

use crate::syntax::{ast_depth, atom_count, node_count, parse, token_expr_count, QueryClass};

use super::DatasetRecord;

/// Per-class averages over a dataset slice.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StatRow {
    pub count: usize,
    /// Mean character length of the natural-language description.
    pub nl_chars: f64,
    /// Mean character length of the CQL text.
    pub cql_chars: f64,
    /// Mean number of token expressions (head plus within sequences).
    pub token_exprs: f64,
    /// Mean maximum AST depth.
    pub ast_depth: f64,
    /// Mean AST node count.
    pub ast_nodes: f64,
    /// Mean number of atomic attribute constraints.
    pub atoms: f64,
}

/// Statistics per query class. Classes without records are absent rather
/// than zero; `unparseable` counts records that were skipped by a lenient
/// loader.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DatasetStats {
    pub per_class: Vec<(QueryClass, StatRow)>,
    pub unparseable: usize,
}

impl DatasetStats {
    /// Renders the statistics as an aligned text table.
    pub fn to_table(&self) -> String {
        let mut out = format!(
            "{:<10} {:>7} {:>9} {:>10} {:>8} {:>7} {:>7} {:>7}\n",
            "Class", "Count", "NL chars", "CQL chars", "Tokens", "Depth", "Nodes", "Atoms"
        );
        out.push_str(&"-".repeat(out.len() - 1));
        out.push('\n');
        for (class, row) in &self.per_class {
            out.push_str(&format!(
                "{:<10} {:>7} {:>9.2} {:>10.2} {:>8.2} {:>7.2} {:>7.2} {:>7.2}\n",
                class.name(),
                row.count,
                row.nl_chars,
                row.cql_chars,
                row.token_exprs,
                row.ast_depth,
                row.ast_nodes,
                row.atoms,
            ));
        }
        if self.unparseable > 0 {
            out.push_str(&format!(
                "\n{} unparseable record(s) excluded\n",
                self.unparseable
            ));
        }
        out
    }
}

/// Computes per-class averages over validated records. `unparseable` is the
/// count of records a lenient loader skipped; pass 0 for strict loads.
pub fn compute_stats(records: &[DatasetRecord], unparseable: usize) -> DatasetStats {
    let mut per_class = Vec::new();
    for class in QueryClass::ALL {
        let rows: Vec<&DatasetRecord> = records.iter().filter(|r| r.class == class).collect();
        if rows.is_empty() {
            continue;
        }
        let n = rows.len() as f64;
        let mut nl_chars = 0.0;
        let mut cql_chars = 0.0;
        let mut token_exprs = 0.0;
        let mut depth = 0.0;
        let mut nodes = 0.0;
        let mut atoms = 0.0;
        for record in &rows {
            let query = parse(&record.cql).expect("dataset records are validated");
            nl_chars += record.nl.chars().count() as f64;
            cql_chars += record.cql.chars().count() as f64;
            token_exprs += token_expr_count(&query) as f64;
            depth += ast_depth(&query) as f64;
            nodes += node_count(&query) as f64;
            atoms += atom_count(&query) as f64;
        }
        per_class.push((
            class,
            StatRow {
                count: rows.len(),
                nl_chars: nl_chars / n,
                cql_chars: cql_chars / n,
                token_exprs: token_exprs / n,
                ast_depth: depth / n,
                ast_nodes: nodes / n,
                atoms: atoms / n,
            },
        ));
    }
    DatasetStats {
        per_class,
        unparseable,
    }
}

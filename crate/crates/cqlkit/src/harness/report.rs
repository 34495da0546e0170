//! Metric aggregation and report rendering.

use serde::Serialize;

use crate::metrics::MetricScore;
use crate::syntax::QueryClass;

/// Aggregated metrics for one slice of records. Values are raw fractions in
/// `[0, 1]`; the text table renders them as percentages.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricRow {
    pub count: usize,
    pub em: f64,
    pub va: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ex: Option<f64>,
    pub cqlbleu: f64,
}

impl MetricRow {
    fn from_scores(scores: &[&MetricScore], has_ex: bool) -> MetricRow {
        let n = scores.len() as f64;
        let mean = |f: &dyn Fn(&MetricScore) -> f64| {
            if scores.is_empty() {
                0.0
            } else {
                scores.iter().map(|s| f(s)).sum::<f64>() / n
            }
        };
        MetricRow {
            count: scores.len(),
            em: mean(&|s| if s.em { 1.0 } else { 0.0 }),
            va: mean(&|s| if s.va { 1.0 } else { 0.0 }),
            ex: has_ex.then(|| mean(&|s| if s.ex == Some(true) { 1.0 } else { 0.0 })),
            cqlbleu: mean(&|s| s.cqlbleu),
        }
    }
}

/// Per-class and overall metric aggregates, plus excluded records and the
/// number of truncation warnings.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricReport {
    /// Rows for the classes that actually occur, in simple/within/condition
    /// order.
    pub per_class: Vec<(QueryClass, MetricRow)>,
    pub overall: MetricRow,
    /// (record id, reason) for records excluded because their gold side
    /// failed.
    pub excluded: Vec<(String, String)>,
    pub warnings: usize,
}

impl MetricReport {
    pub(crate) fn from_scores(
        scored: &[(QueryClass, MetricScore)],
        excluded: Vec<(String, String)>,
        warnings: usize,
        has_ex: bool,
    ) -> MetricReport {
        let mut per_class = Vec::new();
        for class in QueryClass::ALL {
            let class_scores: Vec<&MetricScore> = scored
                .iter()
                .filter(|(c, _)| *c == class)
                .map(|(_, s)| s)
                .collect();
            if !class_scores.is_empty() {
                per_class.push((class, MetricRow::from_scores(&class_scores, has_ex)));
            }
        }
        let all: Vec<&MetricScore> = scored.iter().map(|(_, s)| s).collect();
        MetricReport {
            per_class,
            overall: MetricRow::from_scores(&all, has_ex),
            excluded,
            warnings,
        }
    }

    /// Renders the report as an aligned text table with percentages.
    pub fn to_table(&self) -> String {
        let has_ex = self.overall.ex.is_some();
        let mut out = String::new();
        let header = if has_ex {
            format!(
                "{:<10} {:>7} {:>8} {:>8} {:>8} {:>8}\n",
                "Class", "Count", "EM", "VA", "EX", "CQLBLEU"
            )
        } else {
            format!(
                "{:<10} {:>7} {:>8} {:>8} {:>8}\n",
                "Class", "Count", "EM", "VA", "CQLBLEU"
            )
        };
        out.push_str(&header);
        out.push_str(&"-".repeat(header.len() - 1));
        out.push('\n');
        for (class, row) in &self.per_class {
            out.push_str(&render_row(class.name(), row, has_ex));
        }
        out.push_str(&render_row("overall", &self.overall, has_ex));
        if !self.excluded.is_empty() {
            out.push_str(&format!(
                "\n{} record(s) excluded (invalid gold):\n",
                self.excluded.len()
            ));
            for (id, reason) in &self.excluded {
                out.push_str(&format!("  {id}: {reason}\n"));
            }
        }
        if self.warnings > 0 {
            out.push_str(&format!(
                "\n{} truncation warning(s): affected records scored EX=0\n",
                self.warnings
            ));
        }
        out
    }
}

fn render_row(name: &str, row: &MetricRow, has_ex: bool) -> String {
    if has_ex {
        format!(
            "{:<10} {:>7} {:>8} {:>8} {:>8} {:>8}\n",
            name,
            row.count,
            format_pct(row.em),
            format_pct(row.va),
            format_pct(row.ex.unwrap_or(0.0)),
            format_pct(row.cqlbleu),
        )
    } else {
        format!(
            "{:<10} {:>7} {:>8} {:>8} {:>8}\n",
            name,
            row.count,
            format_pct(row.em),
            format_pct(row.va),
            format_pct(row.cqlbleu),
        )
    }
}

/// Formats a fraction as a percentage with two decimals, rounding half up.
pub fn format_pct(fraction: f64) -> String {
    let scaled = (fraction * 10_000.0).round() / 100.0;
    format!("{scaled:.2}")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn score(em: bool, cqlbleu: f64) -> MetricScore {
        MetricScore {
            em,
            va: true,
            ex: None,
            bleu: cqlbleu,
            ts: cqlbleu,
            cqlbleu,
        }
    }

    #[test]
    fn rounds_half_up() {
        // 1/32 scales to exactly 312.5 hundredths: half-up gives 3.13 where
        // round-half-to-even would give 3.12.
        assert_eq!(format_pct(1.0 / 32.0), "3.13");
        assert_eq!(format!("{:.2}", 100.0 * (1.0 / 32.0)), "3.12");
        assert_eq!(format_pct(0.6749), "67.49");
        assert_eq!(format_pct(1.0), "100.00");
        assert_eq!(format_pct(0.0), "0.00");
    }

    #[test]
    fn empty_classes_are_omitted() {
        let scored = vec![(QueryClass::Simple, score(true, 1.0))];
        let report = MetricReport::from_scores(&scored, vec![], 0, false);
        assert_eq!(report.per_class.len(), 1);
        assert_eq!(report.per_class[0].0, QueryClass::Simple);
        assert!(!report.to_table().contains("condition"));
    }

    #[test]
    fn class_counts_partition_the_dataset() {
        let scored = vec![
            (QueryClass::Simple, score(true, 1.0)),
            (QueryClass::Simple, score(false, 0.5)),
            (QueryClass::Within, score(true, 1.0)),
            (QueryClass::Condition, score(false, 0.25)),
        ];
        let report = MetricReport::from_scores(&scored, vec![], 0, false);
        let sum: usize = report.per_class.iter().map(|(_, r)| r.count).sum();
        assert_eq!(sum, report.overall.count);
        assert_eq!(sum, 4);
    }

    #[test]
    fn json_serialization_carries_raw_fractions() {
        let scored = vec![
            (QueryClass::Simple, score(true, 1.0)),
            (QueryClass::Simple, score(false, 0.5)),
            (QueryClass::Simple, score(false, 0.5)),
        ];
        let report = MetricReport::from_scores(&scored, vec![], 0, false);
        let json = serde_json::to_value(&report).unwrap();
        let em = json["overall"]["em"].as_f64().unwrap();
        assert!((em - 1.0 / 3.0).abs() < 1e-12);
    }
}

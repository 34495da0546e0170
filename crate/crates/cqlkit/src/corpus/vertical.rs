//! Ingestion of vertical corpus files.
//!
//! The format is line-oriented UTF-8: structure markup lines (`<doc id="...">`,
//! `<s>`, `</s>`, `</doc>`) each alone on a line, token lines of
//! `word<TAB>pos<TAB>lemma` with the lemma column optional, `#`-prefixed
//! comment lines, and no blank lines inside sentences.

use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use thiserror::Error;

use super::{AnnToken, AnnotatedCorpus, StructureSpan};

/// A malformed vertical file, with the 1-based line number.
#[derive(Debug, Error)]
#[error("line {line}: {message}")]
pub struct FormatError {
    pub line: usize,
    pub message: String,
}

impl FormatError {
    fn new(line: usize, message: impl Into<String>) -> FormatError {
        FormatError {
            line,
            message: message.into(),
        }
    }
}

/// Reads a corpus from any buffered reader in vertical format.
pub fn ingest_vertical<R: BufRead>(reader: R) -> Result<AnnotatedCorpus, FormatError> {
    let mut docs: Vec<Vec<AnnToken>> = Vec::new();
    let mut structures: Vec<StructureSpan> = Vec::new();
    let mut has_lemma = false;

    // Open structures in the current document: (name, start offset, line).
    let mut stack: Vec<(String, usize, usize)> = Vec::new();
    let mut in_doc = false;
    let mut line_no = 0;

    for line in reader.lines() {
        line_no += 1;
        let line = line.map_err(|e| FormatError::new(line_no, format!("read error: {e}")))?;
        let trimmed = line.trim_end_matches(['\r', '\n']);

        if trimmed.starts_with('#') {
            continue;
        }
        if trimmed.trim().is_empty() {
            if stack.iter().any(|(name, _, _)| name == "s") {
                return Err(FormatError::new(line_no, "blank line inside sentence"));
            }
            continue;
        }

        if let Some(rest) = trimmed.strip_prefix("</") {
            let name = rest
                .strip_suffix('>')
                .ok_or_else(|| FormatError::new(line_no, format!("malformed close tag '{trimmed}'")))?
                .trim();
            if name == "doc" {
                if !in_doc {
                    return Err(FormatError::new(line_no, "</doc> before <doc>"));
                }
                if let Some((open, _, _)) = stack.last() {
                    return Err(FormatError::new(
                        line_no,
                        format!("unclosed <{open}> at </doc>"),
                    ));
                }
                let doc_id = docs.len() - 1;
                let len = docs[doc_id].len();
                structures.push(StructureSpan {
                    name: "doc".to_string(),
                    doc_id,
                    start: 0,
                    end: len,
                });
                in_doc = false;
            } else {
                match stack.pop() {
                    Some((open, start, _)) if open == name => {
                        let doc_id = docs.len() - 1;
                        let end = docs[doc_id].len();
                        if end == start {
                            return Err(FormatError::new(
                                line_no,
                                format!("empty <{name}> structure"),
                            ));
                        }
                        structures.push(StructureSpan {
                            name: open,
                            doc_id,
                            start,
                            end,
                        });
                    }
                    Some((open, _, _)) => {
                        return Err(FormatError::new(
                            line_no,
                            format!("</{name}> does not match open <{open}>"),
                        ));
                    }
                    None => {
                        return Err(FormatError::new(line_no, format!("</{name}> before <{name}>")));
                    }
                }
            }
            continue;
        }

        if let Some(rest) = trimmed.strip_prefix('<') {
            let body = rest
                .strip_suffix('>')
                .ok_or_else(|| FormatError::new(line_no, format!("malformed tag '{trimmed}'")))?;
            let name = body.split_whitespace().next().unwrap_or("").to_string();
            if name.is_empty() {
                return Err(FormatError::new(line_no, "empty tag name"));
            }
            if name == "doc" {
                if in_doc {
                    return Err(FormatError::new(line_no, "nested <doc>"));
                }
                docs.push(Vec::new());
                in_doc = true;
            } else {
                if !in_doc {
                    return Err(FormatError::new(
                        line_no,
                        format!("<{name}> outside <doc>"),
                    ));
                }
                if stack.iter().any(|(open, _, _)| *open == name) {
                    return Err(FormatError::new(line_no, format!("nested <{name}>")));
                }
                let start = docs.last().map_or(0, Vec::len);
                stack.push((name, start, line_no));
            }
            continue;
        }

        // Token line.
        if !in_doc {
            return Err(FormatError::new(line_no, "token line outside <doc>"));
        }
        if !stack.iter().any(|(name, _, _)| name == "s") {
            return Err(FormatError::new(line_no, "token line outside <s>"));
        }
        let cols: Vec<&str> = trimmed.split('\t').collect();
        if cols.len() < 2 || cols.len() > 3 {
            return Err(FormatError::new(
                line_no,
                format!("expected 2 or 3 tab-separated columns, found {}", cols.len()),
            ));
        }
        let word = cols[0];
        let pos = cols[1];
        if word.is_empty() || pos.is_empty() {
            return Err(FormatError::new(line_no, "empty word or pos column"));
        }
        let lemma = match cols.get(2) {
            Some(l) if !l.is_empty() => {
                has_lemma = true;
                l.to_string()
            }
            _ => word.to_string(),
        };
        docs.last_mut().unwrap().push(AnnToken {
            word: word.to_string(),
            pos: pos.to_string(),
            lemma,
        });
    }

    if in_doc {
        return Err(FormatError::new(line_no, "unclosed <doc> at end of input"));
    }
    if let Some((open, _, open_line)) = stack.last() {
        return Err(FormatError::new(*open_line, format!("unclosed <{open}>")));
    }

    Ok(AnnotatedCorpus {
        docs,
        structures,
        has_lemma,
    })
}

/// Convenience wrapper over [`ingest_vertical`] for in-memory text.
pub fn ingest_vertical_str(text: &str) -> Result<AnnotatedCorpus, FormatError> {
    ingest_vertical(text.as_bytes())
}

/// Reads a corpus from a file on disk.
pub fn ingest_vertical_path(path: &Path) -> Result<AnnotatedCorpus, FormatError> {
    let file = File::open(path).map_err(|e| FormatError::new(0, format!("{}: {e}", path.display())))?;
    ingest_vertical(BufReader::new(file))
}

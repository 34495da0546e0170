//! AST node signatures.
//!
//! Each node is summarized as a triple of its own kind, the ordered kinds of
//! its direct children, and an optional lexical key (operator symbol,
//! label/quantifier bounds, attribute payload, structure name, or condition
//! text). Tree-similarity matching compares these triples; labels live in the
//! key, so renaming a label changes only the keys of the nodes that carry it.

use std::fmt;

use serde::Serialize;

use super::ast::{ConstraintExpr, GlobalConstraint, Query, TokenExpr, WithinClause};

/// Kind labels for AST nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum NodeKind {
    Query,
    Seq,
    Within,
    Token,
    And,
    Or,
    Not,
    Atom,
    Empty,
    Struct,
    Cond,
}

impl fmt::Display for NodeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            NodeKind::Query => "Query",
            NodeKind::Seq => "Seq",
            NodeKind::Within => "Within",
            NodeKind::Token => "Token",
            NodeKind::And => "And",
            NodeKind::Or => "Or",
            NodeKind::Not => "Not",
            NodeKind::Atom => "Atom",
            NodeKind::Empty => "Empty",
            NodeKind::Struct => "Struct",
            NodeKind::Cond => "Cond",
        };
        f.write_str(name)
    }
}

/// Signature of one AST node: kind, ordered direct-child kinds, and the
/// node's own lexical key. Two signatures are equal iff all three match.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct NodeSignature {
    pub kind: NodeKind,
    pub child_kinds: Vec<NodeKind>,
    pub key: Option<String>,
}

/// Pre-order traversal of the query AST, pairing each node's signature with
/// whether the node is a leaf (no AST children).
pub fn signature_nodes(q: &Query) -> Vec<(NodeSignature, bool)> {
    let mut out = Vec::new();
    walk_query(q, &mut out);
    out
}

fn push(out: &mut Vec<(NodeSignature, bool)>, sig: NodeSignature) {
    let leaf = sig.child_kinds.is_empty();
    out.push((sig, leaf));
}

fn walk_query(q: &Query, out: &mut Vec<(NodeSignature, bool)>) {
    let mut child_kinds = vec![NodeKind::Seq];
    child_kinds.extend(q.withins.iter().map(|_| NodeKind::Within));
    child_kinds.extend(q.conditions.iter().map(|_| NodeKind::Cond));
    push(
        out,
        NodeSignature {
            kind: NodeKind::Query,
            child_kinds,
            key: None,
        },
    );
    walk_seq(&q.head.elements, out);
    for within in &q.withins {
        let payload = match within {
            WithinClause::Seq(_) => NodeKind::Seq,
            WithinClause::Struct(_) => NodeKind::Struct,
        };
        push(
            out,
            NodeSignature {
                kind: NodeKind::Within,
                child_kinds: vec![payload],
                key: None,
            },
        );
        match within {
            WithinClause::Seq(seq) => walk_seq(&seq.elements, out),
            WithinClause::Struct(tag) => push(
                out,
                NodeSignature {
                    kind: NodeKind::Struct,
                    child_kinds: vec![],
                    key: Some(tag.name.clone()),
                },
            ),
        }
    }
    for cond in &q.conditions {
        push(
            out,
            NodeSignature {
                kind: NodeKind::Cond,
                child_kinds: vec![],
                key: Some(cond_key(cond)),
            },
        );
    }
}

fn walk_seq(elements: &[TokenExpr], out: &mut Vec<(NodeSignature, bool)>) {
    push(
        out,
        NodeSignature {
            kind: NodeKind::Seq,
            child_kinds: vec![NodeKind::Token; elements.len()],
            key: None,
        },
    );
    for tok in elements {
        push(
            out,
            NodeSignature {
                kind: NodeKind::Token,
                child_kinds: vec![constraint_kind(&tok.constraint)],
                key: Some(token_key(tok)),
            },
        );
        walk_constraint(&tok.constraint, out);
    }
}

fn walk_constraint(c: &ConstraintExpr, out: &mut Vec<(NodeSignature, bool)>) {
    match c {
        ConstraintExpr::Empty => push(
            out,
            NodeSignature {
                kind: NodeKind::Empty,
                child_kinds: vec![],
                key: None,
            },
        ),
        ConstraintExpr::Atom(a) => {
            let mut key = String::new();
            super::print::print_atom(&mut key, a);
            push(
                out,
                NodeSignature {
                    kind: NodeKind::Atom,
                    child_kinds: vec![],
                    key: Some(key),
                },
            );
        }
        ConstraintExpr::And(children) | ConstraintExpr::Or(children) => {
            let (kind, sym) = if matches!(c, ConstraintExpr::And(_)) {
                (NodeKind::And, "&")
            } else {
                (NodeKind::Or, "|")
            };
            push(
                out,
                NodeSignature {
                    kind,
                    child_kinds: children.iter().map(constraint_kind).collect(),
                    key: Some(sym.to_string()),
                },
            );
            for child in children {
                walk_constraint(child, out);
            }
        }
        ConstraintExpr::Not(child) => {
            push(
                out,
                NodeSignature {
                    kind: NodeKind::Not,
                    child_kinds: vec![constraint_kind(child)],
                    key: Some("!".to_string()),
                },
            );
            walk_constraint(child, out);
        }
    }
}

fn constraint_kind(c: &ConstraintExpr) -> NodeKind {
    match c {
        ConstraintExpr::Empty => NodeKind::Empty,
        ConstraintExpr::Atom(_) => NodeKind::Atom,
        ConstraintExpr::And(_) => NodeKind::And,
        ConstraintExpr::Or(_) => NodeKind::Or,
        ConstraintExpr::Not(_) => NodeKind::Not,
    }
}

// Token keys carry the label (when present) and explicit quantifier bounds,
// e.g. "A:{1,1}" or "{0,5}".
fn token_key(tok: &TokenExpr) -> String {
    let bounds = match tok.quant.max {
        Some(max) => format!("{{{},{}}}", tok.quant.min, max),
        None => format!("{{{},*}}", tok.quant.min),
    };
    match &tok.label {
        Some(label) => format!("{label}:{bounds}"),
        None => bounds,
    }
}

fn cond_key(cond: &GlobalConstraint) -> String {
    format!(
        "{}.{} {} {}.{}",
        cond.left.label,
        cond.left.attr,
        cond.op.symbol(),
        cond.right.label,
        cond.right.attr
    )
}

/// Maximum depth of the AST, counting nodes on the longest root-to-leaf path
/// (a bare `[]` query has depth 4: Query, Seq, Token, Empty).
pub fn ast_depth(q: &Query) -> usize {
    fn constraint_depth(c: &ConstraintExpr) -> usize {
        match c {
            ConstraintExpr::Empty | ConstraintExpr::Atom(_) => 1,
            ConstraintExpr::And(cs) | ConstraintExpr::Or(cs) => {
                1 + cs.iter().map(constraint_depth).max().unwrap_or(0)
            }
            ConstraintExpr::Not(c) => 1 + constraint_depth(c),
        }
    }
    fn seq_depth(elements: &[TokenExpr]) -> usize {
        // Seq -> Token -> constraint
        2 + elements
            .iter()
            .map(|t| constraint_depth(&t.constraint))
            .max()
            .unwrap_or(0)
    }
    let head = seq_depth(&q.head.elements);
    let within = q
        .withins
        .iter()
        .map(|w| match w {
            WithinClause::Seq(seq) => 1 + seq_depth(&seq.elements),
            WithinClause::Struct(_) => 2,
        })
        .max()
        .unwrap_or(0);
    let cond = if q.conditions.is_empty() { 0 } else { 2 };
    1 + head.max(within).max(cond)
}

/// Total number of AST nodes.
pub fn node_count(q: &Query) -> usize {
    signature_nodes(q).len()
}

/// Number of atomic attribute constraints in the query.
pub fn atom_count(q: &Query) -> usize {
    let mut n = 0;
    for tok in q.token_exprs() {
        tok.constraint.for_each_atom(&mut |_| n += 1);
    }
    n
}

/// Number of token expressions across the head and all within sequences.
pub fn token_expr_count(q: &Query) -> usize {
    q.token_exprs().count()
}

#[cfg(test)]
mod tests {
    use super::super::parse;
    use super::*;

    fn nonleaf_sigs(src: &str) -> Vec<NodeSignature> {
        signature_nodes(&parse(src).unwrap())
            .into_iter()
            .filter(|(_, leaf)| !leaf)
            .map(|(sig, _)| sig)
            .collect()
    }

    #[test]
    fn minimal_query_nodes() {
        let nodes = signature_nodes(&parse("[]").unwrap());
        let kinds: Vec<(NodeKind, bool)> = nodes.iter().map(|(s, l)| (s.kind, *l)).collect();
        assert_eq!(
            kinds,
            vec![
                (NodeKind::Query, false),
                (NodeKind::Seq, false),
                (NodeKind::Token, false),
                (NodeKind::Empty, true),
            ]
        );
    }

    #[test]
    fn single_atom_query_has_three_nonleaf_nodes() {
        assert_eq!(nonleaf_sigs(r#"[word="a"]"#).len(), 3);
    }

    #[test]
    fn alpha_renamed_condition_queries_differ_only_in_label_keys() {
        let a = signature_nodes(&parse("1:[] 2:[] :: 1.pos = 2.pos").unwrap());
        let b = signature_nodes(&parse("x:[] y:[] :: x.pos = y.pos").unwrap());
        assert_eq!(a.len(), b.len());
        for ((sa, la), (sb, lb)) in a.iter().zip(&b) {
            assert_eq!(la, lb);
            assert_eq!(sa.kind, sb.kind);
            assert_eq!(sa.child_kinds, sb.child_kinds);
            let label_bearing = matches!(sa.kind, NodeKind::Token | NodeKind::Cond);
            if label_bearing {
                assert_ne!(sa.key, sb.key, "label key should differ for {:?}", sa.kind);
            } else {
                assert_eq!(sa.key, sb.key);
            }
        }
    }

    #[test]
    fn nonleaf_count_is_total_minus_leaves() {
        for src in [
            "[]",
            r#"[word="a" & pos="b"] []{0,5}"#,
            r#"[pos="N.*"] within [pos="VB.*"] []{0,5} [pos="VB.*"]"#,
            "A:[] []? B:[] within <s/> :: A.pos = B.pos",
        ] {
            let nodes = signature_nodes(&parse(src).unwrap());
            let leaves = nodes.iter().filter(|(_, l)| *l).count();
            let nonleaf = nodes.iter().filter(|(_, l)| !*l).count();
            assert_eq!(nonleaf, nodes.len() - leaves);
            // Leaves are exactly the nodes without child kinds.
            for (sig, leaf) in &nodes {
                assert_eq!(*leaf, sig.child_kinds.is_empty());
            }
        }
    }

    #[test]
    fn quantifier_and_label_live_in_token_key() {
        let sigs = nonleaf_sigs("A:[] []{0,5}");
        let token_keys: Vec<&str> = sigs
            .iter()
            .filter(|s| s.kind == NodeKind::Token)
            .map(|s| s.key.as_deref().unwrap())
            .collect();
        assert_eq!(token_keys, vec!["A:{1,1}", "{0,5}"]);
    }

    #[test]
    fn depth_and_counts_on_simple_query() {
        let q = parse(r#"[word="book"]"#).unwrap();
        assert_eq!(ast_depth(&q), 4);
        assert_eq!(node_count(&q), 4);
        assert_eq!(atom_count(&q), 1);
        assert_eq!(token_expr_count(&q), 1);
    }

    #[test]
    fn token_expr_count_spans_within_clauses() {
        let q = parse(r#"[pos="N.*"] within [pos="VB.*"] []{0,5} [pos="VB.*"]"#).unwrap();
        assert_eq!(token_expr_count(&q), 4);
    }
}

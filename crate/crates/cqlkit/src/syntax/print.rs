//! Canonical rendering of queries.
//!
//! The canonical form uses double quotes for all literals, single spaces
//! between sequence elements and around `&`, `|`, `within`, `::`, and
//! condition operators, no padding inside brackets, and quantifiers attached
//! without a space. Parentheses appear only where the constraint tree
//! requires them.

use std::fmt::Write;

use super::ast::{
    AttrConstraint, ConstraintExpr, GlobalConstraint, Quantifier, Query, SeqExpr, TokenExpr,
    WithinClause,
};
use super::parser::{parse, ParseError};

/// Renders a query in canonical form. `parse(canonical_print(q))` yields a
/// query structurally equal to `q`.
pub fn canonical_print(q: &Query) -> String {
    let mut out = String::new();
    print_seq(&mut out, &q.head);
    for within in &q.withins {
        out.push_str(" within ");
        match within {
            WithinClause::Seq(seq) => print_seq(&mut out, seq),
            WithinClause::Struct(tag) => {
                let _ = write!(out, "<{}/>", tag.name);
            }
        }
    }
    if !q.conditions.is_empty() {
        out.push_str(" :: ");
        for (i, cond) in q.conditions.iter().enumerate() {
            if i > 0 {
                out.push_str(" & ");
            }
            print_condition(&mut out, cond);
        }
    }
    out
}

/// Parses and reprints: the canonical text of `source`, or the parse error.
pub fn normalize(source: &str) -> Result<String, ParseError> {
    parse(source).map(|q| canonical_print(&q))
}

fn print_seq(out: &mut String, seq: &SeqExpr) {
    for (i, tok) in seq.elements.iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        print_token(out, tok);
    }
}

fn print_token(out: &mut String, tok: &TokenExpr) {
    if let Some(label) = &tok.label {
        let _ = write!(out, "{label}:");
    }
    out.push('[');
    if !tok.constraint.is_empty() {
        print_constraint(out, &tok.constraint, 0);
    }
    out.push(']');
    out.push_str(&quant_suffix(tok.quant));
}

/// Canonical quantifier suffix: `?`, `*`, `+`, `{m,n}`, `{m,}`, or nothing
/// for the implicit `{1,1}`.
pub(crate) fn quant_suffix(q: Quantifier) -> String {
    match (q.min, q.max) {
        (1, Some(1)) => String::new(),
        (0, Some(1)) => "?".to_string(),
        (0, None) => "*".to_string(),
        (1, None) => "+".to_string(),
        (m, None) => format!("{{{m},}}"),
        (m, Some(n)) => format!("{{{m},{n}}}"),
    }
}

// Binding strength; children at or below their parent's level get parentheses.
fn precedence(c: &ConstraintExpr) -> u8 {
    match c {
        ConstraintExpr::Or(_) => 1,
        ConstraintExpr::And(_) => 2,
        ConstraintExpr::Not(_) => 3,
        ConstraintExpr::Atom(_) | ConstraintExpr::Empty => 4,
    }
}

fn print_constraint(out: &mut String, c: &ConstraintExpr, parent_prec: u8) {
    let prec = precedence(c);
    let needs_parens = prec <= parent_prec;
    if needs_parens {
        out.push('(');
    }
    match c {
        ConstraintExpr::Empty => {}
        ConstraintExpr::Atom(a) => print_atom(out, a),
        ConstraintExpr::And(children) => {
            for (i, child) in children.iter().enumerate() {
                if i > 0 {
                    out.push_str(" & ");
                }
                print_constraint(out, child, prec);
            }
        }
        ConstraintExpr::Or(children) => {
            for (i, child) in children.iter().enumerate() {
                if i > 0 {
                    out.push_str(" | ");
                }
                print_constraint(out, child, prec);
            }
        }
        ConstraintExpr::Not(child) => {
            out.push('!');
            // `!` binds tighter than `&`/`|`, so composite children need
            // parentheses; a nested `!` or atom does not.
            print_constraint(out, child, 2);
        }
    }
    if needs_parens {
        out.push(')');
    }
}

pub(crate) fn print_atom(out: &mut String, a: &AttrConstraint) {
    let _ = write!(out, "{}{}\"{}\"", a.attr, a.op.symbol(), a.value);
}

fn print_condition(out: &mut String, cond: &GlobalConstraint) {
    let _ = write!(
        out,
        "{}.{} {} {}.{}",
        cond.left.label,
        cond.left.attr,
        cond.op.symbol(),
        cond.right.label,
        cond.right.attr
    );
}

//! CQL syntax: lexing, parsing, canonical printing, and node signatures.
//!
//! A query is a sequence of bracketed token constraints, optionally scoped by
//! `within` clauses (sub-sequences or XML-style structure tags) and followed
//! by global `::` conditions that compare attributes of labeled tokens:
//!
//! ```text
//! [pos="N.*"] within [pos="VB.*"] []{0,5} [pos="VB.*"]
//! 1:[] 2:[] :: 1.pos = 2.pos
//! ```
//!
//! The grammar:
//!
//! ```text
//! query     := seq ("within" (seq | structure))* ("::" cond ("&" cond)*)?
//! seq       := token+
//! token     := (label ":")? "[" orExpr? "]" quant?
//! orExpr    := andExpr ("|" andExpr)*
//! andExpr   := unary ("&" unary)*
//! unary     := "!" unary | "(" orExpr ")" | attr op literal
//! structure := "<" ident "/>"
//! quant     := "?" | "*" | "+" | "{" n ("," n?)? "}"
//! cond      := label "." attr op label "." attr
//! ```
//!
//! Both quote styles are accepted on input; the canonical printer emits
//! double quotes. Literal values are anchored regular expressions.

mod ast;
mod lexer;
mod parser;
mod print;
mod signature;

pub use ast::{
    Attr, AttrConstraint, AttrRef, CmpOp, ConstraintExpr, GlobalConstraint, Quantifier, Query,
    QueryClass, SeqExpr, StructureTag, TokenExpr, WithinClause,
};
pub use lexer::{lex, CqlToken, TokenKind};
pub use parser::{parse, ParseError};
pub use print::{canonical_print, normalize};
pub use signature::{
    ast_depth, atom_count, node_count, signature_nodes, token_expr_count, NodeKind, NodeSignature,
};

/// Classifies a query by its dominant keyword: conditions beat withins beat
/// plain sequences.
pub fn classify(q: &Query) -> QueryClass {
    if !q.conditions.is_empty() {
        QueryClass::Condition
    } else if !q.withins.is_empty() {
        QueryClass::Within
    } else {
        QueryClass::Simple
    }
}

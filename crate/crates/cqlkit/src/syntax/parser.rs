//! Recursive-descent parser producing [`Query`] values.

use std::collections::HashMap;
use std::fmt;

use super::ast::{
    Attr, AttrConstraint, AttrRef, CmpOp, ConstraintExpr, GlobalConstraint, Quantifier, Query,
    SeqExpr, StructureTag, TokenExpr, WithinClause,
};
use super::lexer::{lex, CqlToken, TokenKind};

/// A parse failure with the byte offset where it occurred and the set of
/// token descriptions that would have been accepted there.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub offset: usize,
    pub expected: Vec<String>,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at byte {}: {}", self.offset, self.message)?;
        if !self.expected.is_empty() {
            write!(f, " (expected {})", self.expected.join(" or "))?;
        }
        Ok(())
    }
}

impl std::error::Error for ParseError {}

/// Parses CQL source into a [`Query`], validating label uniqueness, condition
/// references, quantifier bounds, and regex values.
pub fn parse(source: &str) -> Result<Query, ParseError> {
    Parser::new(source).parse_query()
}

struct Parser {
    tokens: Vec<CqlToken>,
    pos: usize,
    end_offset: usize,
    /// label -> (byte offset of declaration, quantifier of the labeled token)
    labels: HashMap<String, (usize, Quantifier)>,
}

impl Parser {
    fn new(source: &str) -> Parser {
        Parser {
            tokens: lex(source),
            pos: 0,
            end_offset: source.len(),
            labels: HashMap::new(),
        }
    }

    fn peek(&self) -> Option<&CqlToken> {
        self.tokens.get(self.pos)
    }

    fn peek_kind(&self) -> Option<TokenKind> {
        self.peek().map(|t| t.kind)
    }

    fn peek2_kind(&self) -> Option<TokenKind> {
        self.tokens.get(self.pos + 1).map(|t| t.kind)
    }

    fn advance(&mut self) -> &CqlToken {
        let tok = &self.tokens[self.pos];
        self.pos += 1;
        tok
    }

    fn offset(&self) -> usize {
        self.peek().map_or(self.end_offset, |t| t.span.0)
    }

    fn error(&self, message: impl Into<String>, expected: &[&str]) -> ParseError {
        ParseError {
            offset: self.offset(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
            message: message.into(),
        }
    }

    fn error_at(&self, offset: usize, message: impl Into<String>) -> ParseError {
        ParseError {
            offset,
            expected: Vec::new(),
            message: message.into(),
        }
    }

    fn describe_here(&self) -> String {
        match self.peek() {
            Some(t) => format!("found {}", t.kind.describe()),
            None => "found end of input".to_string(),
        }
    }

    fn expect(&mut self, kind: TokenKind) -> Result<&CqlToken, ParseError> {
        if self.peek_kind() == Some(kind) {
            Ok(self.advance())
        } else {
            Err(self.error(
                format!("expected {}, {}", kind.describe(), self.describe_here()),
                &[kind.describe()],
            ))
        }
    }

    fn parse_query(&mut self) -> Result<Query, ParseError> {
        let head = self.parse_seq()?;

        let mut withins = Vec::new();
        while self.peek_kind() == Some(TokenKind::Within) {
            self.advance();
            match self.peek_kind() {
                Some(TokenKind::StructOpen) => {
                    withins.push(WithinClause::Struct(self.parse_structure()?));
                }
                Some(TokenKind::LBracket) | Some(TokenKind::Ident) | Some(TokenKind::Number) => {
                    withins.push(WithinClause::Seq(self.parse_seq()?));
                }
                _ => {
                    return Err(self.error(
                        format!("dangling 'within': {}", self.describe_here()),
                        &["'['", "'<'"],
                    ));
                }
            }
        }

        let mut conditions = Vec::new();
        if self.peek_kind() == Some(TokenKind::CondSep) {
            self.advance();
            conditions.push(self.parse_condition()?);
            while self.peek_kind() == Some(TokenKind::And) {
                self.advance();
                conditions.push(self.parse_condition()?);
            }
        }

        if self.pos < self.tokens.len() {
            return Err(self.error(
                format!("unexpected trailing input: {}", self.describe_here()),
                &["end of input"],
            ));
        }

        Ok(Query {
            head,
            withins,
            conditions,
        })
    }

    fn parse_seq(&mut self) -> Result<SeqExpr, ParseError> {
        let mut elements = vec![self.parse_token_expr()?];
        loop {
            match self.peek_kind() {
                Some(TokenKind::LBracket) => elements.push(self.parse_token_expr()?),
                // A label ahead of a bracket also starts a token expression.
                Some(TokenKind::Ident) | Some(TokenKind::Number)
                    if self.peek2_kind() == Some(TokenKind::LabelSep) =>
                {
                    elements.push(self.parse_token_expr()?)
                }
                _ => break,
            }
        }
        Ok(SeqExpr::new(elements))
    }

    fn parse_token_expr(&mut self) -> Result<TokenExpr, ParseError> {
        let mut label = None;
        if matches!(
            self.peek_kind(),
            Some(TokenKind::Ident) | Some(TokenKind::Number)
        ) && self.peek2_kind() == Some(TokenKind::LabelSep)
        {
            let tok = self.advance();
            let (name, offset) = (tok.text.clone(), tok.span.0);
            self.advance(); // ':'
            if self.labels.contains_key(&name) {
                return Err(self.error_at(offset, format!("duplicate label '{name}'")));
            }
            label = Some((name, offset));
        }

        self.expect(TokenKind::LBracket)?;
        let constraint = if self.peek_kind() == Some(TokenKind::RBracket) {
            ConstraintExpr::Empty
        } else {
            self.parse_or_expr()?
        };
        if self.peek_kind() != Some(TokenKind::RBracket) {
            return Err(self.error(
                format!("unbalanced bracket: {}", self.describe_here()),
                &["']'"],
            ));
        }
        self.advance();

        let quant = self.parse_quantifier()?;

        if let Some((name, offset)) = &label {
            self.labels.insert(name.clone(), (*offset, quant));
        }

        Ok(TokenExpr {
            label: label.map(|(name, _)| name),
            constraint,
            quant,
        })
    }

    fn parse_quantifier(&mut self) -> Result<Quantifier, ParseError> {
        match self.peek_kind() {
            Some(TokenKind::Question) => {
                self.advance();
                Ok(Quantifier::new(0, Some(1)))
            }
            Some(TokenKind::Star) => {
                self.advance();
                Ok(Quantifier::new(0, None))
            }
            Some(TokenKind::Plus) => {
                self.advance();
                Ok(Quantifier::new(1, None))
            }
            Some(TokenKind::LBrace) => {
                let brace_offset = self.offset();
                self.advance();
                let min = self.parse_number()?;
                let quant = match self.peek_kind() {
                    Some(TokenKind::Comma) => {
                        self.advance();
                        if self.peek_kind() == Some(TokenKind::RBrace) {
                            Quantifier::new(min, None)
                        } else {
                            let max = self.parse_number()?;
                            Quantifier::new(min, Some(max))
                        }
                    }
                    _ => Quantifier::new(min, Some(min)),
                };
                self.expect(TokenKind::RBrace)?;
                if let Some(max) = quant.max {
                    if quant.min > max {
                        return Err(self.error_at(
                            brace_offset,
                            format!("bad quantifier: min {} exceeds max {}", quant.min, max),
                        ));
                    }
                }
                Ok(quant)
            }
            _ => Ok(Quantifier::ONE),
        }
    }

    fn parse_number(&mut self) -> Result<u32, ParseError> {
        let offset = self.offset();
        let tok = self.expect(TokenKind::Number)?;
        let text = tok.text.clone();
        text.parse::<u32>()
            .map_err(|_| self.error_at(offset, format!("number '{text}' out of range")))
    }

    fn parse_or_expr(&mut self) -> Result<ConstraintExpr, ParseError> {
        let first = self.parse_and_expr()?;
        if self.peek_kind() != Some(TokenKind::Or) {
            return Ok(first);
        }
        let mut children = vec![first];
        while self.peek_kind() == Some(TokenKind::Or) {
            self.advance();
            children.push(self.parse_and_expr()?);
        }
        Ok(ConstraintExpr::Or(children))
    }

    fn parse_and_expr(&mut self) -> Result<ConstraintExpr, ParseError> {
        let first = self.parse_unary()?;
        if self.peek_kind() != Some(TokenKind::And) {
            return Ok(first);
        }
        let mut children = vec![first];
        while self.peek_kind() == Some(TokenKind::And) {
            self.advance();
            children.push(self.parse_unary()?);
        }
        Ok(ConstraintExpr::And(children))
    }

    fn parse_unary(&mut self) -> Result<ConstraintExpr, ParseError> {
        match self.peek_kind() {
            Some(TokenKind::Not) => {
                self.advance();
                Ok(ConstraintExpr::Not(Box::new(self.parse_unary()?)))
            }
            Some(TokenKind::LParen) => {
                self.advance();
                let inner = self.parse_or_expr()?;
                self.expect(TokenKind::RParen)?;
                Ok(inner)
            }
            Some(TokenKind::Ident) => Ok(ConstraintExpr::Atom(self.parse_atom()?)),
            _ => Err(self.error(
                format!("expected constraint atom, {}", self.describe_here()),
                &["attribute name", "'!'", "'('"],
            )),
        }
    }

    fn parse_atom(&mut self) -> Result<AttrConstraint, ParseError> {
        let attr = Attr::from_name(&self.expect(TokenKind::Ident)?.text.clone());
        let op = match self.peek_kind() {
            Some(TokenKind::Eq) => {
                self.advance();
                CmpOp::Equal
            }
            Some(TokenKind::Neq) => {
                self.advance();
                CmpOp::NotEqual
            }
            _ => {
                return Err(self.error(
                    format!("expected comparison operator, {}", self.describe_here()),
                    &["'='", "'!='"],
                ));
            }
        };
        let value_offset = self.offset();
        let literal = self.expect(TokenKind::StringLiteral)?;
        let value = literal.unquoted().to_string();
        if value.is_empty() {
            return Err(self.error_at(value_offset, "empty literal value".to_string()));
        }
        if let Err(err) = regex::Regex::new(&format!("^(?:{value})$")) {
            return Err(self.error_at(
                value_offset,
                format!("invalid regex value '{value}': {err}"),
            ));
        }
        Ok(AttrConstraint { attr, op, value })
    }

    fn parse_structure(&mut self) -> Result<StructureTag, ParseError> {
        self.expect(TokenKind::StructOpen)?;
        let name = self.expect(TokenKind::Ident)?.text.clone();
        self.expect(TokenKind::StructSelfClose)?;
        Ok(StructureTag { name })
    }

    fn parse_condition(&mut self) -> Result<GlobalConstraint, ParseError> {
        let left = self.parse_attr_ref()?;
        let op = match self.peek_kind() {
            Some(TokenKind::Eq) => {
                self.advance();
                CmpOp::Equal
            }
            Some(TokenKind::Neq) => {
                self.advance();
                CmpOp::NotEqual
            }
            _ => {
                return Err(self.error(
                    format!("expected comparison operator, {}", self.describe_here()),
                    &["'='", "'!='"],
                ));
            }
        };
        let right = self.parse_attr_ref()?;
        if left.label == right.label {
            return Err(self.error_at(
                self.prev_offset(),
                format!("condition compares label '{}' with itself", left.label),
            ));
        }
        Ok(GlobalConstraint { left, op, right })
    }

    fn prev_offset(&self) -> usize {
        self.tokens
            .get(self.pos.saturating_sub(1))
            .map_or(self.end_offset, |t| t.span.0)
    }

    fn parse_attr_ref(&mut self) -> Result<AttrRef, ParseError> {
        let offset = self.offset();
        let label = match self.peek_kind() {
            Some(TokenKind::Ident) | Some(TokenKind::Number) => self.advance().text.clone(),
            _ => {
                return Err(self.error(
                    format!("expected label reference, {}", self.describe_here()),
                    &["identifier", "number"],
                ));
            }
        };
        match self.labels.get(&label) {
            None => {
                return Err(self.error_at(
                    offset,
                    format!("undeclared label '{label}' in condition"),
                ));
            }
            Some((_, quant)) if !quant.is_one() => {
                return Err(self.error_at(
                    offset,
                    format!("label '{label}' is quantified; comparison targets must bind exactly one token"),
                ));
            }
            Some(_) => {}
        }
        self.expect(TokenKind::Dot)?;
        let attr = Attr::from_name(&self.expect(TokenKind::Ident)?.text.clone());
        Ok(AttrRef { label, attr })
    }
}

#[cfg(test)]
mod tests {
    use super::super::{classify, QueryClass};
    use super::*;

    #[test]
    fn parses_simple_lemma_query() {
        let q = parse(r#"[lemma="teapot"]"#).unwrap();
        assert_eq!(
            q,
            Query {
                head: SeqExpr::new(vec![TokenExpr::new(ConstraintExpr::Atom(AttrConstraint {
                    attr: Attr::Lemma,
                    op: CmpOp::Equal,
                    value: "teapot".to_string(),
                }))]),
                withins: vec![],
                conditions: vec![],
            }
        );
        assert_eq!(classify(&q), QueryClass::Simple);
    }

    #[test]
    fn parses_within_query_with_bounded_gap() {
        let q = parse(r#"[pos="N.*"] within [pos="VB.*"] []{0,5} [pos="VB.*"]"#).unwrap();
        assert_eq!(q.head.elements.len(), 1);
        assert_eq!(q.withins.len(), 1);
        match &q.withins[0] {
            WithinClause::Seq(seq) => {
                assert_eq!(seq.elements.len(), 3);
                assert!(seq.elements[1].constraint.is_empty());
                assert_eq!(seq.elements[1].quant, Quantifier::new(0, Some(5)));
            }
            WithinClause::Struct(_) => panic!("expected sequence clause"),
        }
        assert_eq!(classify(&q), QueryClass::Within);
    }

    #[test]
    fn parses_condition_query_with_numeric_labels() {
        let q = parse("1:[] 2:[] :: 1.pos = 2.pos").unwrap();
        assert_eq!(q.head.elements.len(), 2);
        assert_eq!(q.head.elements[0].label.as_deref(), Some("1"));
        assert_eq!(q.conditions.len(), 1);
        assert_eq!(q.conditions[0].left.label, "1");
        assert_eq!(q.conditions[0].right.attr, Attr::Pos);
        assert_eq!(classify(&q), QueryClass::Condition);
    }

    #[test]
    fn parses_conjunction_with_both_quote_styles() {
        let q = parse("[word='research' & pos='NN']").unwrap();
        match &q.head.elements[0].constraint {
            ConstraintExpr::And(children) => assert_eq!(children.len(), 2),
            other => panic!("expected conjunction, got {other:?}"),
        }
    }

    #[test]
    fn incomplete_conjunction_reports_bracket_offset() {
        let src = "[word='book' &]";
        let err = parse(src).unwrap_err();
        assert_eq!(err.offset, src.find(']').unwrap());
        assert!(err.message.contains("constraint atom"), "{}", err.message);
    }

    #[test]
    fn rejects_unbalanced_and_dangling_input() {
        assert!(parse("[word=").is_err());
        assert!(parse("[word='a'").is_err());
        let err = parse("[] within").unwrap_err();
        assert!(err.message.contains("dangling 'within'"), "{}", err.message);
        assert_eq!(err.offset, "[] within".len());
        assert!(parse("").is_err());
        assert!(parse("[] ]").is_err());
    }

    #[test]
    fn rejects_bad_quantifiers() {
        let err = parse("[]{5,2}").unwrap_err();
        assert!(err.message.contains("bad quantifier"), "{}", err.message);
        assert!(parse("[]{1,").is_err());
        assert!(parse("[]{,2}").is_err());
    }

    #[test]
    fn accepts_open_ended_and_exact_quantifiers() {
        assert_eq!(
            parse("[]{2,}").unwrap().head.elements[0].quant,
            Quantifier::new(2, None)
        );
        assert_eq!(
            parse("[]{3}").unwrap().head.elements[0].quant,
            Quantifier::new(3, Some(3))
        );
        assert_eq!(
            parse("[]?").unwrap().head.elements[0].quant,
            Quantifier::new(0, Some(1))
        );
        assert_eq!(
            parse("[]*").unwrap().head.elements[0].quant,
            Quantifier::new(0, None)
        );
        assert_eq!(
            parse("[]+").unwrap().head.elements[0].quant,
            Quantifier::new(1, None)
        );
    }

    #[test]
    fn rejects_invalid_regex_and_empty_values() {
        let err = parse(r#"[word="("]"#).unwrap_err();
        assert!(err.message.contains("invalid regex"), "{}", err.message);
        let err = parse(r#"[word=""]"#).unwrap_err();
        assert!(err.message.contains("empty literal"), "{}", err.message);
    }

    #[test]
    fn rejects_undeclared_and_duplicate_labels() {
        let err = parse("1:[] :: 1.pos = 2.pos").unwrap_err();
        assert!(
            err.message.contains("undeclared label '2'"),
            "{}",
            err.message
        );
        let err = parse("A:[] A:[]").unwrap_err();
        assert!(err.message.contains("duplicate label"), "{}", err.message);
    }

    #[test]
    fn rejects_quantified_comparison_targets() {
        let err = parse("A:[]{0,3} B:[] :: A.pos = B.pos").unwrap_err();
        assert!(err.message.contains("quantified"), "{}", err.message);
        // A quantified label that is never referenced stays legal.
        assert!(parse("A:[]{0,3} B:[] C:[] :: B.pos = C.pos").is_ok());
    }

    #[test]
    fn rejects_self_comparison() {
        let err = parse("A:[] B:[] :: A.pos = A.word").unwrap_err();
        assert!(err.message.contains("itself"), "{}", err.message);
    }

    #[test]
    fn parses_labels_inside_within_clause() {
        let q = parse("A:[] within B:[] [] :: A.pos = B.pos").unwrap();
        assert_eq!(q.withins.len(), 1);
        assert_eq!(q.conditions.len(), 1);
    }

    #[test]
    fn unknown_attribute_parses_and_is_reported() {
        let q = parse(r#"[tag="NN"]"#).unwrap();
        assert_eq!(q.unknown_attrs(), vec!["tag".to_string()]);
    }

    #[test]
    fn parses_nested_grouping() {
        let q = parse(r#"[(word="book" | word="notebook") & pos="NN"]"#).unwrap();
        match &q.head.elements[0].constraint {
            ConstraintExpr::And(children) => {
                assert!(matches!(children[0], ConstraintExpr::Or(_)));
                assert!(matches!(children[1], ConstraintExpr::Atom(_)));
            }
            other => panic!("expected conjunction, got {other:?}"),
        }
    }

    #[test]
    fn parses_negation() {
        let q = parse(r#"[!word="real" & pos="RB"]"#).unwrap();
        match &q.head.elements[0].constraint {
            ConstraintExpr::And(children) => {
                assert!(matches!(children[0], ConstraintExpr::Not(_)));
            }
            other => panic!("expected conjunction, got {other:?}"),
        }
    }

    #[test]
    fn parses_multiple_withins_and_conditions() {
        let q = parse("[] within [] [] within <s/> :: ").is_err();
        assert!(q, "trailing '::' without condition must fail");
        let q = parse("A:[] B:[] within <s/> :: A.pos = B.pos & A.word != B.word").unwrap();
        assert_eq!(q.conditions.len(), 2);
        assert_eq!(q.conditions[1].op, CmpOp::NotEqual);
    }
}

//! Typed AST for CQL queries.

use std::fmt;

use serde::{Deserialize, Serialize};

/// A token attribute. `word`, `pos`, and `lemma` are the known set; anything
/// else parses as [`Attr::Other`] so corpora with extra annotation layers
/// still round-trip.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Attr {
    Word,
    Pos,
    Lemma,
    Other(String),
}

impl Attr {
    pub fn from_name(name: &str) -> Attr {
        match name {
            "word" => Attr::Word,
            "pos" => Attr::Pos,
            "lemma" => Attr::Lemma,
            other => Attr::Other(other.to_string()),
        }
    }

    pub fn name(&self) -> &str {
        match self {
            Attr::Word => "word",
            Attr::Pos => "pos",
            Attr::Lemma => "lemma",
            Attr::Other(name) => name,
        }
    }

    /// True for attributes outside the word/pos/lemma core.
    pub fn is_known(&self) -> bool {
        !matches!(self, Attr::Other(_))
    }
}

impl fmt::Display for Attr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Serialize for Attr {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.name())
    }
}

/// Comparison operator in token constraints and global conditions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum CmpOp {
    Equal,
    NotEqual,
}

impl CmpOp {
    pub fn symbol(self) -> &'static str {
        match self {
            CmpOp::Equal => "=",
            CmpOp::NotEqual => "!=",
        }
    }
}

/// A single attribute test, e.g. `word="research"`. The value is an anchored
/// regular expression: it must match the whole attribute string.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AttrConstraint {
    pub attr: Attr,
    pub op: CmpOp,
    pub value: String,
}

/// Boolean constraint tree inside a bracketed token expression.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum ConstraintExpr {
    /// `[]` — matches any token.
    Empty,
    Atom(AttrConstraint),
    /// `&`-joined children; always at least two.
    And(Vec<ConstraintExpr>),
    /// `|`-joined children; always at least two.
    Or(Vec<ConstraintExpr>),
    Not(Box<ConstraintExpr>),
}

impl ConstraintExpr {
    pub fn is_empty(&self) -> bool {
        matches!(self, ConstraintExpr::Empty)
    }

    /// Visits every atom in the tree.
    pub fn for_each_atom<'a>(&'a self, f: &mut impl FnMut(&'a AttrConstraint)) {
        match self {
            ConstraintExpr::Empty => {}
            ConstraintExpr::Atom(a) => f(a),
            ConstraintExpr::And(cs) | ConstraintExpr::Or(cs) => {
                for c in cs {
                    c.for_each_atom(f);
                }
            }
            ConstraintExpr::Not(c) => c.for_each_atom(f),
        }
    }
}

/// Repetition bounds on a token expression. `max == None` means unbounded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Quantifier {
    pub min: u32,
    pub max: Option<u32>,
}

impl Quantifier {
    /// The implicit quantifier of a bare token: exactly one.
    pub const ONE: Quantifier = Quantifier {
        min: 1,
        max: Some(1),
    };

    pub fn new(min: u32, max: Option<u32>) -> Quantifier {
        Quantifier { min, max }
    }

    pub fn is_one(&self) -> bool {
        *self == Quantifier::ONE
    }
}

impl Default for Quantifier {
    fn default() -> Self {
        Quantifier::ONE
    }
}

/// One bracketed token expression, optionally labeled and quantified.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TokenExpr {
    pub label: Option<String>,
    pub constraint: ConstraintExpr,
    pub quant: Quantifier,
}

impl TokenExpr {
    pub fn new(constraint: ConstraintExpr) -> TokenExpr {
        TokenExpr {
            label: None,
            constraint,
            quant: Quantifier::ONE,
        }
    }

    /// An unconstrained `[]` token.
    pub fn empty() -> TokenExpr {
        TokenExpr::new(ConstraintExpr::Empty)
    }

    pub fn with_quant(mut self, quant: Quantifier) -> TokenExpr {
        self.quant = quant;
        self
    }

    pub fn with_label(mut self, label: impl Into<String>) -> TokenExpr {
        self.label = Some(label.into());
        self
    }
}

/// A non-empty sequence of token expressions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SeqExpr {
    pub elements: Vec<TokenExpr>,
}

impl SeqExpr {
    pub fn new(elements: Vec<TokenExpr>) -> SeqExpr {
        SeqExpr { elements }
    }
}

/// An XML-style structure tag such as `<s/>`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StructureTag {
    pub name: String,
}

/// The scope restriction following a `within` keyword.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum WithinClause {
    Seq(SeqExpr),
    Struct(StructureTag),
}

/// One side of a global condition: `label.attr`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AttrRef {
    pub label: String,
    pub attr: Attr,
}

/// A global condition comparing attributes of two labeled tokens,
/// e.g. `1.pos = 2.pos`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GlobalConstraint {
    pub left: AttrRef,
    pub op: CmpOp,
    pub right: AttrRef,
}

/// A complete CQL query.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Query {
    pub head: SeqExpr,
    pub withins: Vec<WithinClause>,
    pub conditions: Vec<GlobalConstraint>,
}

impl Query {
    /// All sequences in the query: the head followed by every `within`
    /// sub-sequence, in source order.
    pub fn sequences(&self) -> impl Iterator<Item = &SeqExpr> {
        std::iter::once(&self.head).chain(self.withins.iter().filter_map(|w| match w {
            WithinClause::Seq(seq) => Some(seq),
            WithinClause::Struct(_) => None,
        }))
    }

    /// Every token expression in the query, head first then within clauses.
    pub fn token_exprs(&self) -> impl Iterator<Item = &TokenExpr> {
        self.sequences().flat_map(|s| s.elements.iter())
    }

    /// Attribute names referenced anywhere in the query (constraints and
    /// conditions).
    pub fn referenced_attrs(&self) -> Vec<Attr> {
        let mut attrs = Vec::new();
        for tok in self.token_exprs() {
            tok.constraint.for_each_atom(&mut |a| attrs.push(a.attr.clone()));
        }
        for cond in &self.conditions {
            attrs.push(cond.left.attr.clone());
            attrs.push(cond.right.attr.clone());
        }
        attrs.sort();
        attrs.dedup();
        attrs
    }

    /// Attribute names outside the word/pos/lemma core; callers may surface
    /// these as warnings.
    pub fn unknown_attrs(&self) -> Vec<String> {
        self.referenced_attrs()
            .into_iter()
            .filter(|a| !a.is_known())
            .map(|a| a.name().to_string())
            .collect()
    }
}

/// The three structural classes of a query.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum QueryClass {
    Simple,
    Within,
    Condition,
}

impl QueryClass {
    pub const ALL: [QueryClass; 3] = [QueryClass::Simple, QueryClass::Within, QueryClass::Condition];

    pub fn name(self) -> &'static str {
        match self {
            QueryClass::Simple => "simple",
            QueryClass::Within => "within",
            QueryClass::Condition => "condition",
        }
    }
}

impl fmt::Display for QueryClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

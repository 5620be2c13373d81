use alloc::string::{String, ToString};
use alloc::vec::Vec;

use thiserror::Error;

use super::node::{Btor2File, ConstKind, Immediates, NodeId, NodeKind, NodeLine};
use crate::ops::Op;
use crate::sort::Width;

/// A parse failure with a 1-based source position.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("{source_name}:{line}:{column}: {kind}")]
pub struct ParseError {
    pub source_name: String,
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("unknown keyword `{0}`")]
    UnknownKeyword(String),
    #[error("duplicate id {0}")]
    DuplicateId(NodeId),
    #[error("id {id} does not follow previous id {previous}")]
    NonIncreasingId { id: NodeId, previous: NodeId },
    #[error("reference to {0}, which is not defined on an earlier line")]
    ForwardReference(NodeId),
}

struct Token<'a> {
    text: &'a str,
    column: usize,
}

fn tokenize(line: &str) -> Vec<Token<'_>> {
    let code = match line.find(';') {
        Some(pos) => &line[..pos],
        None => line,
    };
    let mut tokens = Vec::new();
    let mut start = None;
    for (i, c) in code.char_indices() {
        if c.is_ascii_whitespace() {
            if let Some(s) = start.take() {
                tokens.push(Token { text: &code[s..i], column: s + 1 });
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        tokens.push(Token { text: &code[s..], column: s + 1 });
    }
    tokens
}

struct LineParser<'a, 'f> {
    tokens: Vec<Token<'a>>,
    pos: usize,
    line: usize,
    end_column: usize,
    file: &'f Btor2File,
}

impl<'a> LineParser<'a, '_> {
    fn error_at(&self, column: usize, kind: ParseErrorKind) -> ParseError {
        ParseError { source_name: self.file.source_name.clone(), line: self.line, column, kind }
    }

    fn column(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end_column, |t| t.column)
    }

    fn syntax(&self, msg: impl Into<String>) -> ParseError {
        self.error_at(self.column(), ParseErrorKind::Syntax(msg.into()))
    }

    fn next(&mut self, what: &str) -> Result<&'a str, ParseError> {
        match self.tokens.get(self.pos) {
            Some(t) => {
                self.pos += 1;
                Ok(t.text)
            }
            None => Err(self.syntax(alloc::format!("expected {what}"))),
        }
    }

    fn unsigned(&mut self, what: &str) -> Result<u64, ParseError> {
        let column = self.column();
        let tok = self.next(what)?;
        tok.parse::<u64>().map_err(|_| {
            self.error_at(column, ParseErrorKind::Syntax(alloc::format!("expected {what}, found `{tok}`")))
        })
    }

    fn width(&mut self, what: &str) -> Result<Width, ParseError> {
        let column = self.column();
        let v = self.unsigned(what)?;
        Width::try_from(v)
            .map_err(|_| self.error_at(column, ParseErrorKind::Syntax(alloc::format!("{what} {v} is too large"))))
    }

    fn reference(&mut self, what: &str, allow_negative: bool) -> Result<i64, ParseError> {
        let column = self.column();
        let tok = self.next(what)?;
        let bad =
            |p: &Self| p.error_at(column, ParseErrorKind::Syntax(alloc::format!("expected {what}, found `{tok}`")));
        let v: i64 = tok.parse().map_err(|_| bad(self))?;
        if v == 0 || (v < 0 && !allow_negative) {
            return Err(bad(self));
        }
        let target = NodeId(v.unsigned_abs());
        if !self.file.nodes.contains_key(&target) {
            return Err(self.error_at(column, ParseErrorKind::ForwardReference(target)));
        }
        Ok(v)
    }

    fn sort_ref(&mut self) -> Result<NodeId, ParseError> {
        self.reference("sort id", false).map(|v| NodeId(v as u64))
    }

    fn rest_symbol(&mut self) -> Result<Option<String>, ParseError> {
        let symbol = self.tokens.get(self.pos).map(|t| t.text.to_string());
        if symbol.is_some() {
            self.pos += 1;
        }
        if self.pos < self.tokens.len() {
            return Err(self.syntax("unexpected trailing token"));
        }
        Ok(symbol)
    }
}

/// Parses BTOR2 text into a line-indexed node table.
///
/// Comments run from `;` to the end of the line. Blank and comment-only
/// lines are skipped. Both LF and CRLF line endings are accepted.
pub fn parse_btor2(text: &str, source_name: &str) -> Result<Btor2File, ParseError> {
    let mut file = Btor2File::new(source_name);
    let mut previous: Option<NodeId> = None;
    for (index, raw) in text.split('\n').enumerate() {
        let raw = raw.strip_suffix('\r').unwrap_or(raw);
        let tokens = tokenize(raw);
        if tokens.is_empty() {
            continue;
        }
        let mut p = LineParser { tokens, pos: 0, line: index + 1, end_column: raw.len() + 1, file: &file };

        let id_column = p.column();
        let id = NodeId(p.unsigned("node id")?);
        if id.0 == 0 {
            return Err(p.error_at(id_column, ParseErrorKind::Syntax("node id must be positive".into())));
        }
        if p.file.nodes.contains_key(&id) {
            return Err(p.error_at(id_column, ParseErrorKind::DuplicateId(id)));
        }
        if let Some(prev) = previous {
            if id < prev {
                return Err(p.error_at(id_column, ParseErrorKind::NonIncreasingId { id, previous: prev }));
            }
        }

        let kw_column = p.column();
        let keyword = p.next("keyword")?;
        let line = parse_body(&mut p, id, keyword, kw_column)?;
        file.nodes.insert(id, line);
        previous = Some(id);
    }
    Ok(file)
}

fn parse_body(p: &mut LineParser<'_, '_>, id: NodeId, keyword: &str, kw_column: usize) -> Result<NodeLine, ParseError> {
    let kind = match keyword {
        "sort" => {
            let column = p.column();
            match p.next("sort kind")? {
                "bitvec" => NodeKind::SortBitvec,
                "array" => NodeKind::SortArray,
                other => {
                    return Err(p.error_at(column, ParseErrorKind::Syntax(alloc::format!("unknown sort `{other}`"))))
                }
            }
        }
        "input" => NodeKind::Input,
        "state" => NodeKind::State,
        "const" => NodeKind::Const(ConstKind::Binary),
        "constd" => NodeKind::Const(ConstKind::Decimal),
        "consth" => NodeKind::Const(ConstKind::Hex),
        "zero" => NodeKind::Const(ConstKind::Zero),
        "one" => NodeKind::Const(ConstKind::One),
        "ones" => NodeKind::Const(ConstKind::Ones),
        "init" => NodeKind::Init,
        "next" => NodeKind::Next,
        "bad" => NodeKind::Bad,
        "constraint" => NodeKind::Constraint,
        "output" => NodeKind::Output,
        "fair" => NodeKind::Fair,
        "justice" => NodeKind::Justice,
        other => match Op::from_keyword(other) {
            Some(op) => NodeKind::Op(op),
            None => return Err(p.error_at(kw_column, ParseErrorKind::UnknownKeyword(other.to_string()))),
        },
    };

    let mut line = NodeLine::new(id, kind);
    match kind {
        NodeKind::SortBitvec => {
            let column = p.column();
            let w = p.width("bitvector width")?;
            if w == 0 {
                return Err(p.error_at(column, ParseErrorKind::Syntax("bitvector width must be positive".into())));
            }
            line.immediates = Immediates::Width(w);
        }
        NodeKind::SortArray => {
            line.operands.push(p.reference("index sort id", false)?);
            line.operands.push(p.reference("element sort id", false)?);
        }
        NodeKind::Input | NodeKind::State => line.sort = Some(p.sort_ref()?),
        NodeKind::Const(k) => {
            line.sort = Some(p.sort_ref()?);
            if k.has_literal() {
                line.immediates = Immediates::Literal(p.next("constant literal")?.to_string());
            }
        }
        NodeKind::Op(op) => {
            line.sort = Some(p.sort_ref()?);
            for _ in 0..op.arity() {
                line.operands.push(p.reference("operand id", true)?);
            }
            line.kind = NodeKind::Op(match op {
                Op::Sext(_) => Op::Sext(p.width("extension width")?),
                Op::Uext(_) => Op::Uext(p.width("extension width")?),
                Op::Slice { .. } => {
                    let upper = p.width("upper bit index")?;
                    let lower = p.width("lower bit index")?;
                    Op::Slice { upper, lower }
                }
                op => op,
            });
        }
        NodeKind::Init | NodeKind::Next => {
            line.sort = Some(p.sort_ref()?);
            line.operands.push(p.reference("state id", false)?);
            line.operands.push(p.reference("value id", true)?);
        }
        NodeKind::Bad | NodeKind::Constraint | NodeKind::Output | NodeKind::Fair => {
            line.operands.push(p.reference("operand id", true)?);
        }
        NodeKind::Justice => {
            let n = p.unsigned("condition count")?;
            for _ in 0..n {
                line.operands.push(p.reference("operand id", true)?);
            }
        }
    }
    line.symbol = p.rest_symbol()?;
    Ok(line)
}

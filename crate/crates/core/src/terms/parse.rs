use super::{canon, check_shape, NodeKind, Term, Tree};
use crate::error::{Error, Result};

const DELIMS: &[char] = &['{', '}', '[', ']', ',', ':'];

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    kind: &'a NodeKind,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Syntax {
            pos: self.pos,
            msg: msg.into(),
        }
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    /// A maximal run of non-delimiter characters; internal whitespace is dropped.
    fn word(&mut self) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        let mut out = String::new();
        while let Some(c) = self.peek() {
            if DELIMS.contains(&c) {
                break;
            }
            if !c.is_whitespace() {
                out.push(c);
            }
            self.pos += c.len_utf8();
        }
        if out.is_empty() {
            self.pos = start;
            return Err(self.err("expected an atom or a bracket"));
        }
        Ok(out)
    }

    fn term(&mut self) -> Result<Tree> {
        self.skip_ws();
        match self.peek() {
            Some('{') => {
                self.pos += 1;
                match self.kind {
                    NodeKind::Weighted(_) => Ok(Tree::Weighted(self.entries('}')?)),
                    NodeKind::Multiset => Ok(Tree::Node(self.plain('}')?)),
                    NodeKind::List => Err(self.err("list terms use `[...]`")),
                }
            }
            Some('[') => {
                self.pos += 1;
                if *self.kind != NodeKind::List {
                    return Err(self.err("`[...]` is only valid for list terms"));
                }
                Ok(Tree::Node(self.plain(']')?))
            }
            Some(_) => Ok(Tree::Leaf(self.word()?.into())),
            None => Err(self.err("unexpected end of input")),
        }
    }

    fn plain(&mut self, close: char) -> Result<Vec<Tree>> {
        let mut out = Vec::new();
        self.skip_ws();
        if self.peek() == Some(close) {
            self.pos += 1;
            return Ok(out);
        }
        loop {
            let start = self.pos;
            let t = self.term()?;
            self.skip_ws();
            if self.peek() == Some(':') {
                self.pos = start;
                return Err(self.err("coefficients are only allowed in weighted terms"));
            }
            out.push(t);
            self.skip_ws();
            match self.peek() {
                Some(',') => self.pos += 1,
                Some(c) if c == close => {
                    self.pos += 1;
                    return Ok(out);
                }
                _ => return Err(self.err(format!("expected `,` or `{close}`"))),
            }
        }
    }

    fn entries(&mut self, close: char) -> Result<Vec<(super::Coeff, Tree)>> {
        let scalars = self.kind.scalars().expect("weighted kind");
        let mut out = Vec::new();
        self.skip_ws();
        if self.peek() == Some(close) {
            self.pos += 1;
            return Ok(out);
        }
        loop {
            self.skip_ws();
            let entry = match self.peek() {
                Some('{') | Some('[') => (scalars.one(), self.term()?),
                _ => {
                    let start = self.pos;
                    let w = self.word()?;
                    self.skip_ws();
                    if self.peek() == Some(':') {
                        self.pos += 1;
                        let coeff = scalars.parse(&w).map_err(|e| match e {
                            Error::Syntax { msg, .. } => Error::Syntax { pos: start, msg },
                            other => other,
                        })?;
                        (coeff, self.term()?)
                    } else {
                        (scalars.one(), Tree::Leaf(w.into()))
                    }
                }
            };
            out.push(entry);
            self.skip_ws();
            match self.peek() {
                Some(',') => self.pos += 1,
                Some(c) if c == close => {
                    self.pos += 1;
                    return Ok(out);
                }
                _ => return Err(self.err(format!("expected `,` or `{close}`"))),
            }
        }
    }
}

/// Parses a term of the given kind and level and returns it canonicalized.
pub fn parse(text: &str, kind: &NodeKind, level: usize) -> Result<Term> {
    let mut p = Parser {
        src: text,
        pos: 0,
        kind,
    };
    let tree = p.term()?;
    p.skip_ws();
    if p.pos != text.len() {
        return Err(p.err("trailing input"));
    }
    check_shape(&tree, kind, level, 0)?;
    let (tree, _) = canon(tree, kind)?;
    Ok(Term {
        kind: kind.clone(),
        level,
        tree,
    })
}

//! Layered terms: elements of Tⁿ(carrier) written as nested boxes.
//!
//! A term of level `n` is a rooted tree whose labelled leaves all sit at depth
//! exactly `n`. An empty node at depth `k < n` stands for the neutral element
//! of T^{n-k}(carrier). Multiset and weighted nodes are kept in canonical
//! order (children sorted by their canonical print string); list nodes are
//! planar and never reordered.

mod enumerate;
mod parse;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::monoid::MonoidTable;
use crate::semirings::{self, Elem, SemiringId};

pub(crate) use enumerate::odometer as odometer_step;
pub use enumerate::{count_upper_bound, enumerate_terms, probability_vectors};
pub use parse::parse;

/// A carrier element used as a leaf label.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Atom(pub String);

impl Atom {
    pub fn new(s: impl Into<String>) -> Self {
        Atom(s.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<String> for Atom {
    fn from(s: String) -> Self {
        Atom(s)
    }
}

impl From<&str> for Atom {
    fn from(s: &str) -> Self {
        Atom(s.to_string())
    }
}

/// Where the coefficients of weighted nodes live.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalars {
    Semiring(SemiringId),
    /// Monoid labels; such nodes carry exactly one child.
    Monoid(Arc<MonoidTable>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Coeff {
    Elem(Elem),
    /// Index into the monoid table of the enclosing [`Scalars::Monoid`].
    Act(usize),
}

impl Scalars {
    pub fn one(&self) -> Coeff {
        match self {
            Scalars::Semiring(id) => Coeff::Elem(id.one()),
            Scalars::Monoid(m) => Coeff::Act(m.unit()),
        }
    }

    /// Outer-times-inner product used when a layer is flattened.
    pub fn mul(&self, outer: &Coeff, inner: &Coeff) -> Result<Coeff> {
        match (self, outer, inner) {
            (Scalars::Semiring(_), Coeff::Elem(a), Coeff::Elem(b)) => {
                Ok(Coeff::Elem(semirings::mul(a, b)?))
            }
            (Scalars::Monoid(m), Coeff::Act(a), Coeff::Act(b)) => Ok(Coeff::Act(m.mul(*a, *b))),
            _ => Err(Error::MalformedTerm("coefficient of the wrong kind".into())),
        }
    }

    pub fn add(&self, a: &Coeff, b: &Coeff) -> Result<Option<Coeff>> {
        match (a, b) {
            (Coeff::Elem(a), Coeff::Elem(b)) => Ok(Some(Coeff::Elem(semirings::add(a, b)?))),
            _ => Ok(None),
        }
    }

    pub fn is_zero(&self, c: &Coeff) -> bool {
        matches!(c, Coeff::Elem(e) if e.is_zero())
    }

    pub fn print(&self, c: &Coeff) -> String {
        match (self, c) {
            (_, Coeff::Elem(e)) => e.to_string(),
            (Scalars::Monoid(m), Coeff::Act(i)) => m.name_of(*i).to_string(),
            (Scalars::Semiring(_), Coeff::Act(i)) => format!("#{i}"),
        }
    }

    pub fn parse(&self, text: &str) -> Result<Coeff> {
        match self {
            Scalars::Semiring(id) => Ok(Coeff::Elem(Elem::parse(*id, text)?)),
            Scalars::Monoid(m) => {
                m.index_of(text.trim())
                    .map(Coeff::Act)
                    .ok_or_else(|| Error::Syntax {
                        pos: 0,
                        msg: format!("`{text}` is not an element of {}", m.name),
                    })
            }
        }
    }

    fn check(&self, c: &Coeff) -> Result<()> {
        let ok = match (self, c) {
            (Scalars::Semiring(id), Coeff::Elem(e)) => e.semiring() == *id,
            (Scalars::Monoid(m), Coeff::Act(i)) => *i < m.len(),
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::MalformedTerm(format!(
                "coefficient {} does not belong to {}",
                self.print(c),
                self.name()
            )))
        }
    }

    pub fn name(&self) -> String {
        match self {
            Scalars::Semiring(id) => id.to_string(),
            Scalars::Monoid(m) => m.name.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum NodeKind {
    Multiset,
    List,
    Weighted(Scalars),
}

impl NodeKind {
    pub fn scalars(&self) -> Option<&Scalars> {
        match self {
            NodeKind::Weighted(s) => Some(s),
            _ => None,
        }
    }
}

/// Per-node shape rules imposed by a monad on top of its node kind.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Arity {
    Any,
    NonEmpty,
    Single,
}

/// Node kind plus the per-node constraints a monad imposes.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Flavor {
    pub kind: NodeKind,
    pub arity: Arity,
    /// Weighted coefficients must be positive and sum to one.
    pub normalized: bool,
}

impl Flavor {
    pub fn multiset() -> Self {
        Flavor {
            kind: NodeKind::Multiset,
            arity: Arity::Any,
            normalized: false,
        }
    }

    pub fn list() -> Self {
        Flavor {
            kind: NodeKind::List,
            arity: Arity::Any,
            normalized: false,
        }
    }

    pub fn weighted(id: SemiringId) -> Self {
        Flavor {
            kind: NodeKind::Weighted(Scalars::Semiring(id)),
            arity: Arity::Any,
            normalized: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Tree {
    Leaf(Atom),
    Node(Vec<Tree>),
    Weighted(Vec<(Coeff, Tree)>),
}

impl Tree {
    pub fn is_leaf(&self) -> bool {
        matches!(self, Tree::Leaf(_))
    }

    /// Number of children of a node; zero for leaves.
    pub fn width(&self) -> usize {
        match self {
            Tree::Leaf(_) => 0,
            Tree::Node(c) => c.len(),
            Tree::Weighted(c) => c.len(),
        }
    }

    pub fn leaves<'a>(&'a self, out: &mut Vec<&'a Atom>) {
        match self {
            Tree::Leaf(a) => out.push(a),
            Tree::Node(c) => c.iter().for_each(|t| t.leaves(out)),
            Tree::Weighted(c) => c.iter().for_each(|(_, t)| t.leaves(out)),
        }
    }

    pub fn print_into(&self, kind: &NodeKind, out: &mut String) {
        match self {
            Tree::Leaf(a) => out.push_str(a.as_str()),
            Tree::Node(children) => {
                let (open, close) = if *kind == NodeKind::List {
                    ('[', ']')
                } else {
                    ('{', '}')
                };
                out.push(open);
                for (i, c) in children.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    c.print_into(kind, out);
                }
                out.push(close);
            }
            Tree::Weighted(children) => {
                let scalars = kind.scalars();
                out.push('{');
                for (i, (k, c)) in children.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    match scalars {
                        Some(s) => out.push_str(&s.print(k)),
                        None => out.push('?'),
                    }
                    out.push(':');
                    c.print_into(kind, out);
                }
                out.push('}');
            }
        }
    }

    pub fn print(&self, kind: &NodeKind) -> String {
        let mut s = String::new();
        self.print_into(kind, &mut s);
        s
    }
}

/// Checks that leaves sit at depth `level`, nodes above it, and node types
/// agree with `kind`.
pub(crate) fn check_shape(tree: &Tree, kind: &NodeKind, level: usize, depth: usize) -> Result<()> {
    match tree {
        Tree::Leaf(a) => {
            if a.0.is_empty() {
                return Err(Error::MalformedTerm("empty atom".into()));
            }
            if depth != level {
                return Err(Error::LevelMismatch {
                    expected: level,
                    detail: format!("leaf `{a}` sits at depth {depth}"),
                });
            }
            Ok(())
        }
        Tree::Node(children) => {
            if depth >= level {
                return Err(Error::LevelMismatch {
                    expected: level,
                    detail: format!("node at depth {depth}"),
                });
            }
            if matches!(kind, NodeKind::Weighted(_)) {
                return Err(Error::MalformedTerm(
                    "unweighted node in a weighted term".into(),
                ));
            }
            children
                .iter()
                .try_for_each(|c| check_shape(c, kind, level, depth + 1))
        }
        Tree::Weighted(children) => {
            if depth >= level {
                return Err(Error::LevelMismatch {
                    expected: level,
                    detail: format!("node at depth {depth}"),
                });
            }
            let Some(scalars) = kind.scalars() else {
                return Err(Error::MalformedTerm(
                    "weighted node in an unweighted term".into(),
                ));
            };
            children.iter().try_for_each(|(k, c)| {
                scalars.check(k)?;
                check_shape(c, kind, level, depth + 1)
            })
        }
    }
}

/// Canonical form of a tree together with its canonical print string.
pub(crate) fn canon(tree: Tree, kind: &NodeKind) -> Result<(Tree, String)> {
    match tree {
        Tree::Leaf(a) => {
            let s = a.0.clone();
            Ok((Tree::Leaf(a), s))
        }
        Tree::Node(children) => {
            let mut cs = children
                .into_iter()
                .map(|c| canon(c, kind))
                .collect::<Result<Vec<_>>>()?;
            if *kind == NodeKind::Multiset {
                cs.sort_by(|a, b| a.1.cmp(&b.1));
            }
            let open = if *kind == NodeKind::List { '[' } else { '{' };
            let close = if *kind == NodeKind::List { ']' } else { '}' };
            let mut s = String::new();
            s.push(open);
            s.push_str(
                &cs.iter()
                    .map(|c| c.1.as_str())
                    .collect::<Vec<_>>()
                    .join(","),
            );
            s.push(close);
            Ok((Tree::Node(cs.into_iter().map(|c| c.0).collect()), s))
        }
        Tree::Weighted(children) => {
            let scalars = kind.scalars().ok_or_else(|| {
                Error::MalformedTerm("weighted node in an unweighted term".into())
            })?;
            let mut cs: Vec<(Coeff, Tree, String)> = Vec::with_capacity(children.len());
            for (k, c) in children {
                let (t, s) = canon(c, kind)?;
                cs.push((k, t, s));
            }
            cs.sort_by(|a, b| a.2.cmp(&b.2));
            let mut merged: Vec<(Coeff, Tree, String)> = Vec::with_capacity(cs.len());
            for (k, t, s) in cs {
                if let Some(last) = merged.last_mut() {
                    if last.2 == s {
                        match scalars.add(&last.0, &k)? {
                            Some(sum) => {
                                last.0 = sum;
                                continue;
                            }
                            None => {
                                return Err(Error::MalformedTerm(format!(
                                    "duplicate child {s} cannot be merged over {}",
                                    scalars.name()
                                )))
                            }
                        }
                    }
                }
                merged.push((k, t, s));
            }
            merged.retain(|(k, _, _)| !scalars.is_zero(k));
            let mut s = String::from("{");
            for (i, (k, _, cs)) in merged.iter().enumerate() {
                if i > 0 {
                    s.push(',');
                }
                s.push_str(&scalars.print(k));
                s.push(':');
                s.push_str(cs);
            }
            s.push('}');
            Ok((
                Tree::Weighted(merged.into_iter().map(|(k, t, _)| (k, t)).collect()),
                s,
            ))
        }
    }
}

/// A canonical layered term.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Term {
    kind: NodeKind,
    level: usize,
    tree: Tree,
}

impl Term {
    /// Validates and canonicalizes.
    pub fn new(kind: NodeKind, level: usize, tree: Tree) -> Result<Term> {
        check_shape(&tree, &kind, level, 0)?;
        let (tree, _) = canon(tree, &kind)?;
        Ok(Term { kind, level, tree })
    }

    pub fn atom(kind: NodeKind, a: impl Into<Atom>) -> Term {
        Term {
            kind,
            level: 0,
            tree: Tree::Leaf(a.into()),
        }
    }

    /// The neutral element `{}` at the given level (level ≥ 1).
    pub fn empty(kind: NodeKind, level: usize) -> Term {
        let tree = match kind {
            NodeKind::Weighted(_) => Tree::Weighted(vec![]),
            _ => Tree::Node(vec![]),
        };
        Term {
            kind,
            level: level.max(1),
            tree,
        }
    }

    pub fn kind(&self) -> &NodeKind {
        &self.kind
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn tree(&self) -> &Tree {
        &self.tree
    }

    pub fn into_tree(self) -> Tree {
        self.tree
    }

    pub fn as_atom(&self) -> Option<&Atom> {
        match &self.tree {
            Tree::Leaf(a) => Some(a),
            _ => None,
        }
    }

    pub fn print(&self) -> String {
        self.tree.print(&self.kind)
    }

    pub fn leaves(&self) -> Vec<&Atom> {
        let mut out = Vec::new();
        self.tree.leaves(&mut out);
        out
    }

    /// Number of labelled leaves.
    pub fn leaf_count(&self) -> usize {
        self.leaves().len()
    }

    /// Number of depth-1 children.
    pub fn block_count(&self) -> usize {
        self.tree.width()
    }

    /// The depth-1 subterms (level − 1 each) with their coefficients, if weighted.
    pub fn children(&self) -> Vec<(Option<Coeff>, Term)> {
        let wrap = |t: &Tree| Term {
            kind: self.kind.clone(),
            level: self.level - 1,
            tree: t.clone(),
        };
        match &self.tree {
            Tree::Leaf(_) => vec![],
            Tree::Node(c) => c.iter().map(|t| (None, wrap(t))).collect(),
            Tree::Weighted(c) => c.iter().map(|(k, t)| (Some(k.clone()), wrap(t))).collect(),
        }
    }

    /// Rebuilds a term of the given level from trees; canonicalizes.
    pub(crate) fn from_parts(kind: &NodeKind, level: usize, tree: Tree) -> Result<Term> {
        let (tree, _) = canon(tree, kind)?;
        Ok(Term {
            kind: kind.clone(),
            level,
            tree,
        })
    }

    /// Replaces every depth-(level−1) subtree by an atom naming its print
    /// string; used for free algebras whose carrier is a term set.
    pub fn collapse_bottom(&self) -> Result<Term> {
        if self.level < 2 {
            return Err(Error::LevelMismatch {
                expected: 2,
                detail: format!("cannot collapse a level-{} term", self.level),
            });
        }
        fn go(t: &Tree, kind: &NodeKind, depth: usize, target: usize) -> Tree {
            if depth == target {
                return Tree::Leaf(Atom(t.print(kind)));
            }
            match t {
                Tree::Leaf(a) => Tree::Leaf(a.clone()),
                Tree::Node(c) => {
                    Tree::Node(c.iter().map(|x| go(x, kind, depth + 1, target)).collect())
                }
                Tree::Weighted(c) => Tree::Weighted(
                    c.iter()
                        .map(|(k, x)| (k.clone(), go(x, kind, depth + 1, target)))
                        .collect(),
                ),
            }
        }
        let tree = go(&self.tree, &self.kind, 0, self.level - 1);
        Term::from_parts(&self.kind, self.level - 1, tree)
    }

    /// Inverse of [`Term::collapse_bottom`]: parses every leaf as a level-1 term.
    pub fn expand_bottom(&self) -> Result<Term> {
        fn go(t: &Tree, kind: &NodeKind) -> Result<Tree> {
            Ok(match t {
                Tree::Leaf(a) => parse(a.as_str(), kind, 1)?.tree,
                Tree::Node(c) => Tree::Node(c.iter().map(|x| go(x, kind)).collect::<Result<_>>()?),
                Tree::Weighted(c) => Tree::Weighted(
                    c.iter()
                        .map(|(k, x)| Ok((k.clone(), go(x, kind)?)))
                        .collect::<Result<_>>()?,
                ),
            })
        }
        Term::from_parts(&self.kind, self.level + 1, go(&self.tree, &self.kind)?)
    }
}

/// Orders by level, then canonical print.
impl PartialOrd for Term {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Term {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.level, self.print()).cmp(&(other.level, other.print()))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.print())
    }
}

/// Canonicalizes an arbitrary well-formed term; idempotent.
pub fn canonicalize(t: &Term) -> Result<Term> {
    Term::new(t.kind.clone(), t.level, t.tree.clone())
}

/// Enumeration limits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bounds {
    pub max_width: usize,
    pub carrier: Vec<Atom>,
    /// Largest coefficient component (semirings) or denominator (distributions).
    pub coeff_bound: u64,
    pub max_candidates: u128,
    /// Optional cap on the total number of labelled leaves of an enumerated term.
    pub max_leaves: Option<usize>,
}

impl Bounds {
    pub fn new(max_width: usize, carrier: &[&str]) -> Self {
        Bounds {
            max_width,
            carrier: carrier.iter().map(|s| Atom::from(*s)).collect(),
            coeff_bound: 2,
            max_candidates: 1_000_000_000,
            max_leaves: None,
        }
    }

    pub fn with_coeff_bound(mut self, b: u64) -> Self {
        self.coeff_bound = b;
        self
    }

    pub fn with_max_leaves(mut self, n: usize) -> Self {
        self.max_leaves = Some(n);
        self
    }

    pub fn with_max_candidates(mut self, n: u128) -> Self {
        self.max_candidates = n;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_width == 0 || self.coeff_bound == 0 || self.max_candidates == 0 {
            return Err(Error::Config("bounds must be positive".into()));
        }
        if self.carrier.is_empty() {
            return Err(Error::Config("carrier subset is empty".into()));
        }
        if self.max_leaves == Some(0) {
            return Err(Error::Config("leaf cap must be positive".into()));
        }
        Ok(())
    }
}

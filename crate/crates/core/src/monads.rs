//! Finitary monads acting on layered terms: functor action, unit insertion
//! and multiplication at a chosen depth.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::monoid::MonoidTable;
use crate::semirings::{Elem, Rational, SemiringId};
use crate::terms::{
    enumerate_terms, Arity, Atom, Bounds, Coeff, Flavor, NodeKind, Scalars, Term, Tree,
};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum MonadId {
    Identity,
    CommutativeMonoid,
    Monoid,
    Semigroup,
    CommutativeSemigroup,
    MSet(Arc<MonoidTable>),
    Distribution,
    Semimodule(SemiringId),
}

impl fmt::Display for MonadId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MonadId::Identity => f.write_str("identity"),
            MonadId::CommutativeMonoid => f.write_str("commutative_monoid"),
            MonadId::Monoid => f.write_str("monoid"),
            MonadId::Semigroup => f.write_str("semigroup"),
            MonadId::CommutativeSemigroup => f.write_str("commutative_semigroup"),
            MonadId::MSet(m) => write!(f, "m_set({})", m.name),
            MonadId::Distribution => f.write_str("distribution"),
            MonadId::Semimodule(id) => write!(f, "semimodule({id})"),
        }
    }
}

/// An immutable monad descriptor.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MonadInstance {
    pub id: MonadId,
    pub flavor: Flavor,
}

impl fmt::Display for MonadInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.id.fmt(f)
    }
}

impl MonadInstance {
    fn with(id: MonadId, kind: NodeKind, arity: Arity, normalized: bool) -> Self {
        MonadInstance {
            id,
            flavor: Flavor {
                kind,
                arity,
                normalized,
            },
        }
    }

    pub fn identity() -> Self {
        Self::with(MonadId::Identity, NodeKind::Multiset, Arity::Single, false)
    }

    pub fn commutative_monoid() -> Self {
        Self::with(
            MonadId::CommutativeMonoid,
            NodeKind::Multiset,
            Arity::Any,
            false,
        )
    }

    pub fn monoid() -> Self {
        Self::with(MonadId::Monoid, NodeKind::List, Arity::Any, false)
    }

    pub fn semigroup() -> Self {
        Self::with(MonadId::Semigroup, NodeKind::List, Arity::NonEmpty, false)
    }

    pub fn commutative_semigroup() -> Self {
        Self::with(
            MonadId::CommutativeSemigroup,
            NodeKind::Multiset,
            Arity::NonEmpty,
            false,
        )
    }

    pub fn m_set(table: MonoidTable) -> Self {
        let table = Arc::new(table);
        Self::with(
            MonadId::MSet(table.clone()),
            NodeKind::Weighted(Scalars::Monoid(table)),
            Arity::Single,
            false,
        )
    }

    pub fn distribution() -> Self {
        Self::with(
            MonadId::Distribution,
            NodeKind::Weighted(Scalars::Semiring(SemiringId::Rat)),
            Arity::NonEmpty,
            true,
        )
    }

    pub fn semimodule(id: SemiringId) -> Self {
        Self::with(
            MonadId::Semimodule(id),
            NodeKind::Weighted(Scalars::Semiring(id)),
            Arity::Any,
            false,
        )
    }

    /// Built-in instance by name; `m_set` defaults to ℤ/2 without a table.
    pub fn by_name(
        name: &str,
        semiring: Option<SemiringId>,
        table: Option<MonoidTable>,
    ) -> Result<Self> {
        Ok(match name {
            "identity" | "id" => Self::identity(),
            "commutative_monoid" | "cmon" => Self::commutative_monoid(),
            "monoid" | "mon" | "list" => Self::monoid(),
            "semigroup" | "sgrp" => Self::semigroup(),
            "commutative_semigroup" | "csgrp" => Self::commutative_semigroup(),
            "distribution" | "dist" => Self::distribution(),
            "semimodule" | "smod" => Self::semimodule(semiring.unwrap_or(SemiringId::S)),
            "m_set" | "mset" => Self::m_set(table.unwrap_or_else(|| MonoidTable::cyclic(2))),
            other => return Err(Error::Config(format!("unknown monad `{other}`"))),
        })
    }

    pub fn kind(&self) -> &NodeKind {
        &self.flavor.kind
    }

    pub fn scalars(&self) -> Option<&Scalars> {
        self.flavor.kind.scalars()
    }

    /// True when empty nodes are legal.
    pub fn has_unit_element(&self) -> bool {
        self.flavor.arity == Arity::Any
    }

    pub fn parse(&self, text: &str, level: usize) -> Result<Term> {
        let t = crate::terms::parse(text, self.kind(), level)?;
        self.validate(&t)?;
        Ok(t)
    }

    pub fn atom(&self, a: impl Into<Atom>) -> Term {
        Term::atom(self.kind().clone(), a)
    }

    /// Checks the instance's node constraints at every node.
    pub fn validate(&self, t: &Term) -> Result<()> {
        if t.kind() != self.kind() {
            return Err(Error::ConstraintViolation(format!(
                "term {t} is not a {self} term"
            )));
        }
        self.validate_tree(t.tree(), t)
    }

    fn validate_tree(&self, tree: &Tree, whole: &Term) -> Result<()> {
        let width = match tree {
            Tree::Leaf(_) => return Ok(()),
            Tree::Node(c) => c.len(),
            Tree::Weighted(c) => c.len(),
        };
        let bad = |why: &str| {
            Err(Error::ConstraintViolation(format!(
                "{why} in {whole} for {self}"
            )))
        };
        match self.flavor.arity {
            Arity::NonEmpty if width == 0 => return bad("empty node"),
            Arity::Single if width != 1 => return bad("node without exactly one child"),
            _ => {}
        }
        if let Tree::Weighted(c) = tree {
            if self.flavor.normalized {
                let mut total = Rational::from_integer(0);
                for (k, _) in c {
                    match k {
                        Coeff::Elem(Elem::Rat(p)) if *p > Rational::from_integer(0) => total += p,
                        _ => return bad("non-positive probability"),
                    }
                }
                if total != Rational::from_integer(1) {
                    return bad("probabilities not summing to 1");
                }
            }
            for (_, t) in c {
                self.validate_tree(t, whole)?;
            }
        } else if let Tree::Node(c) = tree {
            for t in c {
                self.validate_tree(t, whole)?;
            }
        }
        Ok(())
    }

    /// Every valid term of `level` within bounds.
    pub fn enumerate(&self, level: usize, bounds: &Bounds) -> Result<Vec<Term>> {
        enumerate_terms(&self.flavor, level, bounds)
    }

    /// Tⁿf on a level-n term.
    pub fn map_leaves(&self, t: &Term, f: &dyn Fn(&Atom) -> Result<Atom>) -> Result<Term> {
        map_leaves(t, f)
    }

    /// T^k μ: removes the nodes at depth k+1.
    pub fn mu_at(&self, t: &Term, k: usize) -> Result<Term> {
        let out = mu_at(t, k)?;
        self.validate(&out)?;
        Ok(out)
    }

    pub fn mu(&self, t: &Term) -> Result<Term> {
        self.mu_at(t, 0)
    }

    /// T^k η: wraps every depth-k subterm in a singleton.
    pub fn eta_at(&self, t: &Term, k: usize) -> Result<Term> {
        eta_at(t, k)
    }

    pub fn eta(&self, t: &Term) -> Result<Term> {
        eta_at(t, 0)
    }

    pub fn check_monad_laws(&self, bounds: &Bounds) -> Result<Vec<LawReport>> {
        check_monad_laws(self, bounds, 3)
    }
}

/// Tⁿf; leaves only.
pub fn map_leaves(t: &Term, f: &dyn Fn(&Atom) -> Result<Atom>) -> Result<Term> {
    fn go(tree: &Tree, f: &dyn Fn(&Atom) -> Result<Atom>) -> Result<Tree> {
        Ok(match tree {
            Tree::Leaf(a) => Tree::Leaf(f(a)?),
            Tree::Node(c) => Tree::Node(c.iter().map(|x| go(x, f)).collect::<Result<_>>()?),
            Tree::Weighted(c) => Tree::Weighted(
                c.iter()
                    .map(|(k, x)| Ok((k.clone(), go(x, f)?)))
                    .collect::<Result<_>>()?,
            ),
        })
    }
    Term::new(t.kind().clone(), t.level(), go(t.tree(), f)?)
}

pub(crate) fn mu_tree(tree: &Tree, kind: &NodeKind, k: usize) -> Result<Tree> {
    if k > 0 {
        return Ok(match tree {
            Tree::Leaf(_) => {
                return Err(Error::MalformedTerm(
                    "leaf above the flattened layer".into(),
                ))
            }
            Tree::Node(c) => Tree::Node(
                c.iter()
                    .map(|x| mu_tree(x, kind, k - 1))
                    .collect::<Result<_>>()?,
            ),
            Tree::Weighted(c) => Tree::Weighted(
                c.iter()
                    .map(|(w, x)| Ok((w.clone(), mu_tree(x, kind, k - 1)?)))
                    .collect::<Result<_>>()?,
            ),
        });
    }
    match tree {
        Tree::Leaf(_) => Err(Error::MalformedTerm("cannot flatten a leaf".into())),
        Tree::Node(c) => {
            let mut out = Vec::new();
            for child in c {
                match child {
                    Tree::Node(g) => out.extend(g.iter().cloned()),
                    _ => return Err(Error::MalformedTerm("flattened layer is not a node".into())),
                }
            }
            Ok(Tree::Node(out))
        }
        Tree::Weighted(c) => {
            let scalars = kind
                .scalars()
                .ok_or_else(|| Error::MalformedTerm("weighted node in unweighted term".into()))?;
            let mut out = Vec::new();
            for (outer, child) in c {
                match child {
                    Tree::Weighted(g) => {
                        for (inner, x) in g {
                            out.push((scalars.mul(outer, inner)?, x.clone()));
                        }
                    }
                    _ => {
                        return Err(Error::MalformedTerm(
                            "flattened layer is not weighted".into(),
                        ))
                    }
                }
            }
            Ok(Tree::Weighted(out))
        }
    }
}

/// T^k μ on a level-(n+1) term, 0 ≤ k ≤ n−1.
pub fn mu_at(t: &Term, k: usize) -> Result<Term> {
    if t.level() < 2 || k + 2 > t.level() {
        return Err(Error::IndexOutOfRange {
            index: k,
            level: t.level(),
        });
    }
    let tree = mu_tree(t.tree(), t.kind(), k)?;
    Term::new(t.kind().clone(), t.level() - 1, tree)
}

pub(crate) fn eta_tree(tree: &Tree, kind: &NodeKind, k: usize) -> Tree {
    if k == 0 {
        return match kind {
            NodeKind::Weighted(s) => Tree::Weighted(vec![(s.one(), tree.clone())]),
            _ => Tree::Node(vec![tree.clone()]),
        };
    }
    match tree {
        Tree::Leaf(_) => tree.clone(),
        Tree::Node(c) => Tree::Node(c.iter().map(|x| eta_tree(x, kind, k - 1)).collect()),
        Tree::Weighted(c) => Tree::Weighted(
            c.iter()
                .map(|(w, x)| (w.clone(), eta_tree(x, kind, k - 1)))
                .collect(),
        ),
    }
}

/// T^k η on a level-n term, 0 ≤ k ≤ n.
pub fn eta_at(t: &Term, k: usize) -> Result<Term> {
    if k > t.level() {
        return Err(Error::IndexOutOfRange {
            index: k,
            level: t.level(),
        });
    }
    Term::new(
        t.kind().clone(),
        t.level() + 1,
        eta_tree(t.tree(), t.kind(), k),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

impl Status {
    pub fn from_ok(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub term: String,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LawReport {
    pub check: String,
    pub status: Status,
    pub level: usize,
    pub checked: usize,
    pub violations: Vec<Violation>,
}

impl LawReport {
    pub(crate) fn new(check: &str, level: usize) -> Self {
        LawReport {
            check: check.into(),
            status: Status::Pass,
            level,
            checked: 0,
            violations: vec![],
        }
    }

    pub(crate) fn record(&mut self, term: &Term, lhs: Result<Term>, rhs: Result<Term>) {
        self.checked += 1;
        let show = |r: &Result<Term>| match r {
            Ok(t) => t.print(),
            Err(e) => format!("error: {e}"),
        };
        let ok = matches!((&lhs, &rhs), (Ok(a), Ok(b)) if a == b);
        if !ok {
            self.status = Status::Fail;
            self.violations.push(Violation {
                term: term.print(),
                lhs: show(&lhs),
                rhs: show(&rhs),
            });
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// Unit laws on levels 1..=max_level, associativity from level 3, and
/// naturality of μ under a collapsing relabelling.
pub fn check_monad_laws(
    m: &MonadInstance,
    bounds: &Bounds,
    max_level: usize,
) -> Result<Vec<LawReport>> {
    let mut reports = Vec::new();
    let first = bounds
        .carrier
        .first()
        .cloned()
        .unwrap_or_else(|| Atom::new("*"));
    for n in 1..=max_level {
        let terms = m.enumerate(n, bounds)?;
        let mut left = LawReport::new("unit_left", n);
        let mut right = LawReport::new("unit_right", n);
        let mut assoc = LawReport::new("associativity", n);
        let mut natural = LawReport::new("mu_naturality", n);
        let mut valid = LawReport::new("closure", n);
        for t in &terms {
            for k in 0..n {
                // μ∘ηT and μ∘Tη at depth k
                left.record(t, eta_at(t, k).and_then(|e| m.mu_at(&e, k)), Ok(t.clone()));
                right.record(
                    t,
                    eta_at(t, k + 1).and_then(|e| m.mu_at(&e, k)),
                    Ok(t.clone()),
                );
            }
            for k in 0..n.saturating_sub(2) {
                assoc.record(
                    t,
                    m.mu_at(t, k).and_then(|u| m.mu_at(&u, k)),
                    m.mu_at(t, k + 1).and_then(|u| m.mu_at(&u, k)),
                );
            }
            if n >= 2 {
                let f = |_: &Atom| Ok(first.clone());
                natural.record(
                    t,
                    m.mu_at(t, 0).and_then(|u| map_leaves(&u, &f)),
                    map_leaves(t, &f).and_then(|u| m.mu_at(&u, 0)),
                );
            }
            let v = m.validate(t).map(|_| t.clone());
            valid.record(t, v, Ok(t.clone()));
        }
        reports.push(valid);
        reports.push(left);
        reports.push(right);
        if n >= 2 {
            reports.push(natural);
        }
        if n >= 3 {
            reports.push(assoc);
        }
    }
    Ok(reports)
}

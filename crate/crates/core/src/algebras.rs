//! T-algebras (A, e) over finite or bounded carriers.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::monads::{LawReport, MonadInstance};
use crate::monoid::MonoidTable;
use crate::semirings::{self, Elem, SemiringId};
use crate::terms::{Atom, Bounds, Coeff, NodeKind, Scalars, Term, Tree};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AlgebraKind {
    /// ℕ under addition; `cap` bounds the literals used for enumeration.
    NaturalsAdd {
        cap: u64,
    },
    /// ℤ/k under addition.
    Cyclic(u64),
    Terminal,
    /// (TA, μ); carrier elements are printed level-1 terms over `base`.
    Free {
        base: Bounds,
    },
    /// A monoid acting on itself by left multiplication.
    GSet(Arc<MonoidTable>),
    /// The monoid acts trivially on the listed atoms.
    TrivialAction(Vec<Atom>),
    /// Maximum in the listed order; the empty term goes to the first element.
    Max(Vec<Atom>),
    /// The semiring as a module over itself (finite or bounded carrier).
    Scalars {
        bound: u64,
    },
}

#[derive(Debug, Clone)]
pub struct Algebra {
    pub name: String,
    pub monad: MonadInstance,
    pub kind: AlgebraKind,
}

impl fmt::Display for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} over {}", self.name, self.monad)
    }
}

fn unsupported(what: &str, m: &MonadInstance) -> Error {
    Error::UnsupportedInstance(format!("{what} is not an algebra of {m}"))
}

fn additive(m: &MonadInstance) -> bool {
    matches!(
        m.kind(),
        NodeKind::Multiset
            | NodeKind::List
            | NodeKind::Weighted(Scalars::Semiring(SemiringId::Nat))
    )
}

impl Algebra {
    fn make(name: impl Into<String>, monad: &MonadInstance, kind: AlgebraKind) -> Self {
        Algebra {
            name: name.into(),
            monad: monad.clone(),
            kind,
        }
    }

    pub fn naturals_add(monad: &MonadInstance, cap: u64) -> Result<Self> {
        if !additive(monad) {
            return Err(unsupported("(ℕ,+)", monad));
        }
        Ok(Self::make("nat", monad, AlgebraKind::NaturalsAdd { cap }))
    }

    pub fn cyclic(monad: &MonadInstance, k: u64) -> Result<Self> {
        if !additive(monad) || k == 0 {
            return Err(unsupported(&format!("ℤ/{k}"), monad));
        }
        Ok(Self::make(
            format!("cyclic:{k}"),
            monad,
            AlgebraKind::Cyclic(k),
        ))
    }

    pub fn terminal(monad: &MonadInstance) -> Self {
        Self::make("terminal", monad, AlgebraKind::Terminal)
    }

    pub fn free(monad: &MonadInstance, base: Bounds) -> Self {
        Self::make("free", monad, AlgebraKind::Free { base })
    }

    pub fn g_set(monad: &MonadInstance) -> Result<Self> {
        match monad.kind() {
            NodeKind::Weighted(Scalars::Monoid(m)) => Ok(Self::make(
                format!("gset:{}", m.name),
                monad,
                AlgebraKind::GSet(m.clone()),
            )),
            _ => Err(unsupported("a monoid acting on itself", monad)),
        }
    }

    pub fn trivial_action(monad: &MonadInstance, carrier: &[&str]) -> Result<Self> {
        match monad.kind() {
            NodeKind::Weighted(Scalars::Monoid(_)) => Ok(Self::make(
                "trivial",
                monad,
                AlgebraKind::TrivialAction(carrier.iter().map(|&a| Atom::from(a)).collect()),
            )),
            _ => Err(unsupported("a trivial action", monad)),
        }
    }

    pub fn max_semilattice(monad: &MonadInstance, order: &[&str]) -> Result<Self> {
        let ok = match monad.kind() {
            NodeKind::Multiset | NodeKind::List => true,
            NodeKind::Weighted(Scalars::Semiring(SemiringId::Rat)) => monad.flavor.normalized,
            _ => false,
        };
        if !ok || order.is_empty() {
            return Err(unsupported("a max-semilattice", monad));
        }
        Ok(Self::make(
            "max",
            monad,
            AlgebraKind::Max(order.iter().map(|&a| Atom::from(a)).collect()),
        ))
    }

    pub fn scalars(monad: &MonadInstance, bound: u64) -> Result<Self> {
        match monad.kind() {
            NodeKind::Weighted(Scalars::Semiring(id)) if !monad.flavor.normalized => {
                Ok(Self::make(
                    format!("semiring:{id}"),
                    monad,
                    AlgebraKind::Scalars { bound },
                ))
            }
            _ => Err(unsupported("the scalar module", monad)),
        }
    }

    /// Parses `nat`, `nat:<cap>`, `cyclic:<k>`, `terminal`, `free`, `gset`,
    /// `trivial:<a,b,..>`, `max:<a,b,..>`, `semiring`.
    pub fn from_spec(monad: &MonadInstance, spec: &str, base: &Bounds) -> Result<Self> {
        let (head, arg) = match spec.split_once(':') {
            Some((h, a)) => (h, Some(a)),
            None => (spec, None),
        };
        let num = |a: Option<&str>, d: u64| -> Result<u64> {
            a.map_or(Ok(d), |s| {
                s.trim()
                    .parse()
                    .map_err(|_| Error::Config(format!("bad number in `{spec}`")))
            })
        };
        let list = |a: Option<&str>| -> Vec<String> {
            a.unwrap_or("a,b")
                .split(',')
                .map(|s| s.trim().to_string())
                .collect()
        };
        match head {
            "nat" => Self::naturals_add(monad, num(arg, 32)?),
            "cyclic" => Self::cyclic(monad, num(arg, 3)?),
            "terminal" => Ok(Self::terminal(monad)),
            "free" => Ok(Self::free(monad, base.clone())),
            "gset" => Self::g_set(monad),
            "trivial" => {
                let l = list(arg);
                Self::trivial_action(monad, &l.iter().map(|s| s.as_str()).collect::<Vec<_>>())
            }
            "max" => {
                let l = list(arg);
                Self::max_semilattice(monad, &l.iter().map(|s| s.as_str()).collect::<Vec<_>>())
            }
            "semiring" => Self::scalars(monad, num(arg, 2)?),
            _ => Err(Error::Config(format!("unknown algebra `{spec}`"))),
        }
    }

    pub fn contains(&self, a: &Atom) -> bool {
        let s = a.as_str();
        match &self.kind {
            AlgebraKind::NaturalsAdd { .. } => s.parse::<u64>().is_ok(),
            AlgebraKind::Cyclic(k) => s.parse::<u64>().map_or(false, |x| x < *k),
            AlgebraKind::Terminal => s == "*",
            AlgebraKind::Free { .. } => self.monad.parse(s, 1).map_or(false, |t| t.print() == s),
            AlgebraKind::GSet(m) => m.index_of(s).is_some(),
            AlgebraKind::TrivialAction(c) | AlgebraKind::Max(c) => c.contains(a),
            AlgebraKind::Scalars { .. } => self.semiring().map_or(false, |id| {
                Elem::parse(id, s).map_or(false, |e| e.to_string() == s)
            }),
        }
    }

    fn semiring(&self) -> Option<SemiringId> {
        match self.monad.kind() {
            NodeKind::Weighted(Scalars::Semiring(id)) => Some(*id),
            _ => None,
        }
    }

    /// The carrier, or its bounded part for infinite carriers.
    pub fn carrier(&self) -> Result<Vec<Atom>> {
        Ok(match &self.kind {
            AlgebraKind::NaturalsAdd { cap } => {
                (0..=*cap).map(|i| Atom::new(i.to_string())).collect()
            }
            AlgebraKind::Cyclic(k) => (0..*k).map(|i| Atom::new(i.to_string())).collect(),
            AlgebraKind::Terminal => vec![Atom::new("*")],
            AlgebraKind::Free { base } => self
                .monad
                .enumerate(1, base)?
                .into_iter()
                .map(|t| Atom::new(t.print()))
                .collect(),
            AlgebraKind::GSet(m) => m.elements().iter().map(|e| Atom::new(e.clone())).collect(),
            AlgebraKind::TrivialAction(c) | AlgebraKind::Max(c) => c.clone(),
            AlgebraKind::Scalars { bound } => self
                .semiring()
                .map(|id| id.bounded_elements(*bound))
                .unwrap_or_default()
                .into_iter()
                .map(|e| Atom::new(e.to_string()))
                .collect(),
        })
    }

    fn check_leaf(&self, a: &Atom) -> Result<()> {
        if self.contains(a) {
            Ok(())
        } else {
            Err(Error::CarrierMismatch(a.to_string()))
        }
    }

    /// e on a level-1 term.
    pub fn evaluate(&self, t: &Term) -> Result<Atom> {
        if t.level() != 1 {
            return Err(Error::LevelMismatch {
                expected: 1,
                detail: format!("got level {}", t.level()),
            });
        }
        self.monad.validate(t)?;
        self.eval_tree(t.tree())
    }

    fn eval_tree(&self, tree: &Tree) -> Result<Atom> {
        let entries: Vec<(Option<&Coeff>, &Atom)> = match tree {
            Tree::Node(c) => c
                .iter()
                .map(|x| Ok((None, leaf(x)?)))
                .collect::<Result<_>>()?,
            Tree::Weighted(c) => c
                .iter()
                .map(|(k, x)| Ok((Some(k), leaf(x)?)))
                .collect::<Result<_>>()?,
            Tree::Leaf(_) => return Err(Error::MalformedTerm("expected a node".into())),
        };
        for (_, a) in &entries {
            self.check_leaf(a)?;
        }
        let nat = |k: Option<&Coeff>| -> Result<u64> {
            match k {
                None => Ok(1),
                Some(Coeff::Elem(Elem::Nat(n))) => Ok(*n),
                Some(_) => Err(unsupported("an additive algebra", &self.monad)),
            }
        };
        match &self.kind {
            AlgebraKind::NaturalsAdd { .. } | AlgebraKind::Cyclic(_) => {
                let mut sum: u64 = 0;
                for (k, a) in &entries {
                    let x: u64 = a
                        .as_str()
                        .parse()
                        .map_err(|_| Error::CarrierMismatch(a.to_string()))?;
                    sum = sum
                        .checked_add(nat(*k)?.checked_mul(x).ok_or_else(overflow)?)
                        .ok_or_else(overflow)?;
                }
                if let AlgebraKind::Cyclic(k) = self.kind {
                    sum %= k;
                }
                Ok(Atom::new(sum.to_string()))
            }
            AlgebraKind::Terminal => Ok(Atom::new("*")),
            AlgebraKind::Free { .. } => {
                let inner = Term::new(self.monad.kind().clone(), 1, tree.clone())?;
                let expanded = inner.expand_bottom()?;
                Ok(Atom::new(self.monad.mu(&expanded)?.print()))
            }
            AlgebraKind::GSet(m) => match entries.as_slice() {
                [(Some(Coeff::Act(g)), a)] => {
                    let h = m
                        .index_of(a.as_str())
                        .ok_or_else(|| Error::CarrierMismatch(a.to_string()))?;
                    Ok(Atom::new(m.name_of(m.mul(*g, h))))
                }
                _ => Err(Error::MalformedTerm(
                    "an action term has exactly one child".into(),
                )),
            },
            AlgebraKind::TrivialAction(_) => match entries.as_slice() {
                [(_, a)] => Ok((*a).clone()),
                _ => Err(Error::MalformedTerm(
                    "an action term has exactly one child".into(),
                )),
            },
            AlgebraKind::Max(order) => {
                let rank = |a: &Atom| order.iter().position(|o| o == a).unwrap_or(0);
                Ok(entries
                    .iter()
                    .map(|(_, a)| (*a).clone())
                    .max_by_key(rank)
                    .unwrap_or_else(|| order[0].clone()))
            }
            AlgebraKind::Scalars { .. } => {
                let id = self
                    .semiring()
                    .ok_or_else(|| unsupported("the scalar module", &self.monad))?;
                let mut acc = id.zero();
                for (k, a) in &entries {
                    let x = Elem::parse(id, a.as_str())?;
                    let c = match k {
                        Some(Coeff::Elem(c)) => c.clone(),
                        _ => id.one(),
                    };
                    acc = semirings::add(&acc, &semirings::mul(&c, &x)?)?;
                }
                Ok(Atom::new(acc.to_string()))
            }
        }
    }

    /// Tⁿe on a level-(n+1) term: every deepest node becomes its value.
    pub fn evaluate_at(&self, t: &Term) -> Result<Term> {
        if t.level() == 0 {
            return Err(Error::LevelMismatch {
                expected: 1,
                detail: "cannot evaluate an atom".into(),
            });
        }
        self.monad.validate(t)?;
        fn go(alg: &Algebra, tree: &Tree, depth: usize) -> Result<Tree> {
            if depth == 0 {
                return Ok(Tree::Leaf(alg.eval_tree(tree)?));
            }
            Ok(match tree {
                Tree::Leaf(_) => {
                    return Err(Error::MalformedTerm("leaf above the bottom layer".into()))
                }
                Tree::Node(c) => Tree::Node(
                    c.iter()
                        .map(|x| go(alg, x, depth - 1))
                        .collect::<Result<_>>()?,
                ),
                Tree::Weighted(c) => Tree::Weighted(
                    c.iter()
                        .map(|(k, x)| Ok((k.clone(), go(alg, x, depth - 1)?)))
                        .collect::<Result<_>>()?,
                ),
            })
        }
        let tree = go(self, t.tree(), t.level() - 1)?;
        Term::new(t.kind().clone(), t.level() - 1, tree)
    }

    /// Level-2 terms over the carrier used for law checks; the free algebra
    /// collapses level-3 terms over its base.
    pub fn level_terms(&self, level: usize, bounds: &Bounds) -> Result<Vec<Term>> {
        match &self.kind {
            AlgebraKind::Free { base } => {
                let mut b = bounds.clone();
                if b.carrier.is_empty() {
                    b.carrier = base.carrier.clone();
                }
                self.monad
                    .enumerate(level + 1, &b)?
                    .iter()
                    .map(|t| t.collapse_bottom())
                    .collect()
            }
            _ => {
                let mut b = bounds.clone();
                if b.carrier.is_empty() {
                    b.carrier = self.carrier()?;
                }
                self.monad.enumerate(level, &b)
            }
        }
    }

    /// e∘η = id on the carrier and e∘Te = e∘μ on level-2 terms.
    pub fn check_algebra_laws(&self, bounds: &Bounds) -> Result<Vec<LawReport>> {
        let mut unit = LawReport::new("unit", 0);
        let carrier: Vec<Atom> = match &self.kind {
            AlgebraKind::Free { .. } => self.carrier()?,
            _ if !bounds.carrier.is_empty() => bounds.carrier.clone(),
            _ => self.carrier()?,
        };
        for a in carrier {
            let t = self.monad.atom(a.clone());
            let lhs = self
                .monad
                .eta(&t)
                .and_then(|e| self.evaluate(&e))
                .map(|x| self.monad.atom(x));
            unit.record(&t, lhs, Ok(t.clone()));
        }
        let mut mult = LawReport::new("multiplicativity", 2);
        for t in self.level_terms(2, bounds)? {
            let lhs = self
                .evaluate_at(&t)
                .and_then(|u| self.evaluate(&u))
                .map(|x| self.monad.atom(x));
            let rhs = self
                .monad
                .mu(&t)
                .and_then(|u| self.evaluate(&u))
                .map(|x| self.monad.atom(x));
            mult.record(&t, lhs, rhs);
        }
        Ok(vec![unit, mult])
    }
}

fn leaf(t: &Tree) -> Result<&Atom> {
    match t {
        Tree::Leaf(a) => Ok(a),
        _ => Err(Error::MalformedTerm("expected a leaf".into())),
    }
}

fn overflow() -> Error {
    Error::ConstraintViolation("natural number overflow".into())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cm() -> MonadInstance {
        MonadInstance::commutative_monoid()
    }

    #[test]
    fn sums() {
        let nat = Algebra::naturals_add(&cm(), 32).unwrap();
        let t = cm().parse("{{3,4},{5}}", 2).unwrap();
        assert_eq!(nat.evaluate_at(&t).unwrap().print(), "{5,7}");
        assert_eq!(
            nat.evaluate(&cm().parse("{}", 1).unwrap())
                .unwrap()
                .as_str(),
            "0"
        );
        let alpha = cm().parse("{{{2,2},{3,3},{3,1}}}", 3).unwrap();
        assert_eq!(nat.evaluate_at(&alpha).unwrap().print(), "{{4,4,6}}");
        assert!(matches!(
            nat.evaluate(&cm().parse("{x}", 1).unwrap()),
            Err(Error::CarrierMismatch(_))
        ));
    }

    #[test]
    fn cyclic_is_sum_mod_k() {
        let z3 = Algebra::cyclic(&cm(), 3).unwrap();
        let b = Bounds::new(3, &["0", "1", "2"]);
        for t in cm().enumerate(1, &b).unwrap() {
            let direct: u64 = t
                .leaves()
                .iter()
                .map(|a| a.as_str().parse::<u64>().unwrap())
                .sum::<u64>()
                % 3;
            assert_eq!(z3.evaluate(&t).unwrap().as_str(), direct.to_string());
        }
    }

    fn pass(a: &Algebra, b: &Bounds) {
        for r in a.check_algebra_laws(b).unwrap() {
            assert!(r.passed(), "{a}: {} {:?}", r.check, r.violations.first());
        }
    }

    #[test]
    fn laws_hold_for_builtins() {
        pass(
            &Algebra::naturals_add(&cm(), 20).unwrap(),
            &Bounds::new(3, &["0", "1", "7", "20"]).with_max_leaves(4),
        );
        pass(
            &Algebra::cyclic(&cm(), 3).unwrap(),
            &Bounds::new(3, &[]).with_max_leaves(4),
        );
        pass(&Algebra::terminal(&cm()), &Bounds::new(3, &[]));
        pass(
            &Algebra::free(&cm(), Bounds::new(2, &["a", "b"])),
            &Bounds::new(2, &["a", "b"]).with_max_leaves(4),
        );
        let z3 = MonadInstance::m_set(MonoidTable::cyclic(3));
        pass(&Algebra::g_set(&z3).unwrap(), &Bounds::new(1, &[]));
        pass(
            &Algebra::trivial_action(&z3, &["a", "b"]).unwrap(),
            &Bounds::new(1, &[]),
        );
        let d = MonadInstance::distribution();
        pass(
            &Algebra::max_semilattice(&d, &["0", "1"]).unwrap(),
            &Bounds::new(2, &[]).with_coeff_bound(3),
        );
        let s9 = MonadInstance::semimodule(SemiringId::S9);
        pass(
            &Algebra::scalars(&s9, 2).unwrap(),
            &Bounds::new(1, &["0", "1", "X"]),
        );
        pass(&Algebra::terminal(&s9), &Bounds::new(1, &[]));
    }

    #[test]
    fn free_evaluation_is_flattening() {
        let free = Algebra::free(&cm(), Bounds::new(2, &["a", "b"]));
        for t in cm()
            .enumerate(3, &Bounds::new(2, &["a", "b"]).with_max_leaves(3))
            .unwrap()
        {
            let collapsed = t.collapse_bottom().unwrap();
            let via_e = free
                .evaluate_at(&collapsed)
                .unwrap()
                .expand_bottom()
                .unwrap();
            assert_eq!(via_e, cm().mu_at(&t, 1).unwrap());
        }
    }

    #[test]
    fn spec_strings() {
        let s9 = MonadInstance::semimodule(SemiringId::S9);
        let base = Bounds::new(1, &["a"]);
        assert!(Algebra::from_spec(&s9, "terminal", &base).is_ok());
        assert!(Algebra::from_spec(&cm(), "cyclic:4", &base).is_ok());
        assert!(Algebra::from_spec(&cm(), "gset", &base).is_err());
        assert!(Algebra::from_spec(&cm(), "bogus", &base).is_err());
    }
}

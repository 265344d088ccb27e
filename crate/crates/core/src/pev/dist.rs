//! Finite distributions with exact rational weights: pushforwards and the
//! conditional product over a common pushforward.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::monads::{map_leaves, MonadInstance};
use crate::semirings::{Elem, Rational};
use crate::terms::{Atom, Coeff, Term, Tree};

/// Pair atoms are written `(b;c)`.
pub fn pair_atom(b: &Atom, c: &Atom) -> Atom {
    Atom::new(format!("({b};{c})"))
}

pub fn split_pair(a: &Atom) -> Option<(Atom, Atom)> {
    let inner = a.as_str().strip_prefix('(')?.strip_suffix(')')?;
    let (b, c) = inner.split_once(';')?;
    Some((Atom::new(b), Atom::new(c)))
}

/// Weights of a level-1 distribution.
pub fn weights(p: &Term) -> Result<BTreeMap<Atom, Rational>> {
    let mut out = BTreeMap::new();
    match p.tree() {
        Tree::Weighted(c) if p.level() == 1 => {
            for (k, x) in c {
                match (k, x) {
                    (Coeff::Elem(Elem::Rat(r)), Tree::Leaf(a)) => {
                        *out.entry(a.clone())
                            .or_insert_with(|| Rational::from_integer(0)) += r
                    }
                    _ => return Err(Error::MalformedTerm(format!("{p} is not a distribution"))),
                }
            }
        }
        _ => {
            return Err(Error::MalformedTerm(format!(
                "{p} is not a level-1 distribution"
            )))
        }
    }
    Ok(out)
}

pub fn from_weights(w: &BTreeMap<Atom, Rational>) -> Result<Term> {
    let d = MonadInstance::distribution();
    let children = w
        .iter()
        .filter(|(_, r)| **r != Rational::from_integer(0))
        .map(|(a, r)| (Coeff::Elem(Elem::Rat(*r)), Tree::Leaf(a.clone())))
        .collect();
    let t = Term::new(d.kind().clone(), 1, Tree::Weighted(children))?;
    d.validate(&t)?;
    Ok(t)
}

fn lookup<'a>(f: &'a BTreeMap<Atom, Atom>, a: &Atom) -> Result<&'a Atom> {
    f.get(a)
        .ok_or_else(|| Error::CarrierMismatch(a.to_string()))
}

/// D f.
pub fn pushforward(p: &Term, f: &BTreeMap<Atom, Atom>) -> Result<Term> {
    map_leaves(p, &|a| lookup(f, a).cloned())
}

/// s(b,c) = p(b)·q(c)/r(e) on B ×_E C, where r = Dm(p) = Dn(q).
pub fn conditional_product(
    p: &Term,
    q: &Term,
    m: &BTreeMap<Atom, Atom>,
    n: &BTreeMap<Atom, Atom>,
) -> Result<Term> {
    let r = pushforward(p, m)?;
    let r2 = pushforward(q, n)?;
    if r != r2 {
        return Err(Error::MarginalMismatch(format!("{r} vs {r2}")));
    }
    let rw = weights(&r)?;
    let (pw, qw) = (weights(p)?, weights(q)?);
    let mut s = BTreeMap::new();
    for (b, pb) in &pw {
        let e = lookup(m, b)?;
        for (c, qc) in &qw {
            if lookup(n, c)? == e {
                s.insert(pair_atom(b, c), pb * qc / rw[e]);
            }
        }
    }
    from_weights(&s)
}

/// A lift σ with μ(σ) = b and DDf(σ) = c for the μ-naturality square of f,
/// built as a conditional product over the common image Df(b) = μ(c);
/// `None` when that compatibility fails. The children of `b` are the
/// elements of X, the grandchildren of `c` those of Y.
pub fn mu_naturality_lift(
    b: &Term,
    c: &Term,
    f: &dyn Fn(&Term) -> Result<Term>,
) -> Result<Option<Term>> {
    let zero = Rational::from_integer(0);
    let weight = |k: &Option<Coeff>| match k {
        Some(Coeff::Elem(Elem::Rat(r))) => Ok(*r),
        _ => Err(Error::MalformedTerm("expected probabilities".into())),
    };
    let xs: Vec<(Rational, Term, Term)> = b
        .children()
        .into_iter()
        .map(|(k, x)| Ok((weight(&k)?, f(&x)?, x)))
        .collect::<Result<_>>()?;
    let ls: Vec<(Rational, Vec<(Rational, Term)>)> = c
        .children()
        .into_iter()
        .map(|(k, eps)| {
            let inner = eps
                .children()
                .into_iter()
                .map(|(k, y)| Ok((weight(&k)?, y)))
                .collect::<Result<_>>()?;
            Ok((weight(&k)?, inner))
        })
        .collect::<Result<_>>()?;
    // r = Df(b) and μ(c), compared exactly
    let mut r: BTreeMap<Term, Rational> = BTreeMap::new();
    for (w, y, _) in &xs {
        *r.entry(y.clone()).or_insert(zero) += w;
    }
    let mut r2: BTreeMap<Term, Rational> = BTreeMap::new();
    for (g, eps) in &ls {
        for (e, y) in eps {
            *r2.entry(y.clone()).or_insert(zero) += g * e;
        }
    }
    if r != r2 {
        return Ok(None);
    }
    let kind = b.kind().clone();
    let mut outer = Vec::new();
    for (g, eps) in &ls {
        let mut inner = Vec::new();
        for (w, y, x) in &xs {
            let e_y = eps
                .iter()
                .filter(|(_, z)| z == y)
                .map(|(e, _)| *e)
                .sum::<Rational>();
            let pi = w * g * e_y / r[y];
            if pi != zero {
                inner.push((Coeff::Elem(Elem::Rat(pi / g)), x.tree().clone()));
            }
        }
        outer.push((Coeff::Elem(Elem::Rat(*g)), Tree::Weighted(inner)));
    }
    Ok(Some(Term::new(kind, b.level() + 1, Tree::Weighted(outer))?))
}

/// The two marginals of a distribution on pair atoms.
pub fn marginals(s: &Term) -> Result<(Term, Term)> {
    let mut left = BTreeMap::new();
    let mut right = BTreeMap::new();
    for (a, w) in weights(s)? {
        let (b, c) =
            split_pair(&a).ok_or_else(|| Error::MalformedTerm(format!("{a} is not a pair")))?;
        *left.entry(b).or_insert_with(|| Rational::from_integer(0)) += w;
        *right.entry(c).or_insert_with(|| Rational::from_integer(0)) += w;
    }
    Ok((from_weights(&left)?, from_weights(&right)?))
}

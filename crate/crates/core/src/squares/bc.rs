//! Naturality squares of a monad along sample maps f: X → Y, restricted to
//! bounded terms.
//!
//! Lifts are never looked up in a truncated enumeration: for multisets and
//! lists they are groupings of the given term's children, for distributions
//! conditional products, so a missing lift is a real one.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{classify_square, FiniteSquare, Verdict};
use crate::bar::{list_groupings, multiset_groupings};
use crate::error::{Error, Result};
use crate::monads::{map_leaves, MonadId, MonadInstance, Status};
use crate::pev::dist;
use crate::terms::{Atom, Bounds, NodeKind, Term, Tree};

/// A map between finite sets of atoms.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleMap {
    pub name: String,
    pub table: BTreeMap<Atom, Atom>,
}

impl SampleMap {
    pub fn new(name: &str, pairs: &[(&str, &str)]) -> Self {
        SampleMap {
            name: name.into(),
            table: pairs
                .iter()
                .map(|(x, y)| (Atom::from(*x), Atom::from(*y)))
                .collect(),
        }
    }

    /// The unique map to a point.
    pub fn to_point(xs: &[&str]) -> Self {
        let pairs: Vec<(&str, &str)> = xs.iter().map(|x| (*x, "*")).collect();
        Self::new(&format!("{{{}}} -> {{*}}", xs.join(",")), &pairs)
    }

    fn domain(&self) -> Vec<&str> {
        self.table.keys().map(Atom::as_str).collect()
    }

    fn codomain(&self) -> Vec<&str> {
        self.table
            .values()
            .map(Atom::as_str)
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect()
    }

    fn apply(&self, a: &Atom) -> Result<Atom> {
        self.table
            .get(a)
            .cloned()
            .ok_or_else(|| Error::CarrierMismatch(a.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BcEntry {
    /// "mu_naturality", "kernel_pair" or "eta_naturality".
    pub square: String,
    pub map: String,
    /// Whether BC asks this square to be a weak pullback.
    pub required: bool,
    pub verdict: Verdict,
    pub pairs: usize,
    pub missing: Vec<(String, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BcReport {
    pub monad: String,
    pub status: Status,
    pub squares: Vec<BcEntry>,
}

struct Tally {
    entry: BcEntry,
    undecided: bool,
    ambiguous: bool,
}

impl Tally {
    fn new(square: &str, map: &SampleMap, required: bool) -> Self {
        Tally {
            entry: BcEntry {
                square: square.into(),
                map: map.name.clone(),
                required,
                verdict: Verdict::Strong,
                pairs: 0,
                missing: vec![],
            },
            undecided: false,
            ambiguous: false,
        }
    }

    /// `lifts` is None when only existence was established.
    fn record(
        &mut self,
        b: &Term,
        c: &Term,
        lifts: Option<usize>,
        exists: bool,
        max_report: usize,
    ) {
        self.entry.pairs += 1;
        if !exists {
            self.entry.verdict = Verdict::NotWeak;
            if self.entry.missing.len() < max_report {
                self.entry.missing.push((b.print(), c.print()));
            }
        }
        match lifts {
            None => self.undecided = true,
            Some(k) if k > 1 => self.ambiguous = true,
            _ => {}
        }
    }

    fn finish(mut self) -> BcEntry {
        if self.entry.verdict != Verdict::NotWeak {
            self.entry.verdict = if self.ambiguous {
                Verdict::WeakNotStrong
            } else if self.undecided {
                Verdict::Weak
            } else {
                Verdict::Strong
            };
        }
        self.entry
    }
}

fn bounded(
    m: &MonadInstance,
    level: usize,
    carrier: &[&str],
    bounds: &Bounds,
) -> Result<Vec<Term>> {
    let mut b = bounds.clone();
    b.carrier = carrier.iter().map(|s| Atom::from(*s)).collect();
    m.enumerate(level, &b)
}

fn node(m: &MonadInstance, level: usize, children: Vec<Tree>) -> Result<Term> {
    Term::new(m.kind().clone(), level, Tree::Node(children))
}

/// Terms σ over X with μσ = b and TTf(σ) = c; `None` for "exists, count
/// unknown", with the boolean saying whether one exists.
fn mu_lifts(
    m: &MonadInstance,
    f: &SampleMap,
    b: &Term,
    c: &Term,
    bounds: &Bounds,
) -> Result<(Option<usize>, bool)> {
    let tf = |t: &Term| map_leaves(t, &|a| f.apply(a));
    match (m.kind(), &m.id) {
        (NodeKind::Multiset | NodeKind::List, _) => {
            let items: Vec<Tree> = match b.tree() {
                Tree::Node(ch) => ch.clone(),
                _ => return Err(Error::MalformedTerm(b.to_string())),
            };
            let targets: Vec<Term> = c.children().into_iter().map(|(_, t)| t).collect();
            let ok = |k: usize, block: &[Tree]| {
                node(m, 1, block.to_vec())
                    .and_then(|t| tf(&t))
                    .map_or(false, |t| t == targets[k])
            };
            let groupings = if *m.kind() == NodeKind::Multiset {
                multiset_groupings(&items, targets.len(), &ok)
            } else {
                list_groupings(&items, targets.len(), &ok)
            };
            let mut found = BTreeSet::new();
            for g in groupings {
                let blocks = g
                    .into_iter()
                    .map(|bl| node(m, 1, bl).map(Term::into_tree))
                    .collect::<Result<_>>()?;
                let sigma = node(m, 2, blocks)?;
                if m.validate(&sigma).is_ok() && m.mu(&sigma)? == *b && tf(&sigma)? == *c {
                    found.insert(sigma);
                }
            }
            Ok((Some(found.len()), !found.is_empty()))
        }
        (_, MonadId::Distribution) => {
            let g = |x: &Term| {
                Ok(m.atom(
                    f.apply(
                        x.as_atom()
                            .ok_or_else(|| Error::MalformedTerm(x.to_string()))?,
                    )?,
                ))
            };
            Ok((None, dist::mu_naturality_lift(b, c, &g)?.is_some()))
        }
        (_, MonadId::MSet(_)) => {
            // finitely many level-2 terms over the fibre of c's leaf
            let mut bb = bounds.clone();
            bb.max_width = 1;
            let xs: Vec<&str> = b.leaves().iter().map(|a| a.as_str()).collect();
            let n = bounded(m, 2, &xs, &bb)?
                .into_iter()
                .filter(|s| m.mu(s).map_or(false, |x| x == *b) && tf(s).map_or(false, |y| y == *c))
                .count();
            Ok((Some(n), n > 0))
        }
        _ => Err(Error::UnsupportedInstance(format!(
            "constructive μ-naturality lifts for {}",
            m.id
        ))),
    }
}

/// u ∈ T(X ×_Y X) with Tπ₁u = s and Tπ₂u = t, if one exists.
fn kernel_lift(m: &MonadInstance, f: &SampleMap, s: &Term, t: &Term) -> Result<bool> {
    match (m.kind(), &m.id) {
        (NodeKind::Multiset, _) => {
            // zip the fibres, which have equal sizes since Tf s = Tf t
            let mut fibres: BTreeMap<Atom, (Vec<Atom>, Vec<Atom>)> = BTreeMap::new();
            for a in s.leaves() {
                fibres.entry(f.apply(a)?).or_default().0.push(a.clone());
            }
            for a in t.leaves() {
                fibres.entry(f.apply(a)?).or_default().1.push(a.clone());
            }
            let mut pairs = vec![];
            for (l, r) in fibres.values() {
                if l.len() != r.len() {
                    return Ok(false);
                }
                pairs.extend(
                    l.iter()
                        .zip(r)
                        .map(|(x, y)| Tree::Leaf(dist::pair_atom(x, y))),
                );
            }
            let u = node(m, 1, pairs)?;
            Ok(m.validate(&u).is_ok() && projections(&u)? == (s.clone(), t.clone()))
        }
        (NodeKind::List, _) => {
            let (l, r) = (s.leaves(), t.leaves());
            if l.len() != r.len() {
                return Ok(false);
            }
            for (x, y) in l.iter().zip(&r) {
                if f.apply(x)? != f.apply(y)? {
                    return Ok(false);
                }
            }
            let u = node(
                m,
                1,
                l.iter()
                    .zip(&r)
                    .map(|(x, y)| Tree::Leaf(dist::pair_atom(x, y)))
                    .collect(),
            )?;
            Ok(m.validate(&u).is_ok())
        }
        (_, MonadId::Distribution) => match dist::conditional_product(s, t, &f.table, &f.table) {
            Ok(u) => Ok(dist::marginals(&u)? == (s.clone(), t.clone())),
            Err(Error::MarginalMismatch(_)) => Ok(false),
            Err(e) => Err(e),
        },
        (NodeKind::Weighted(_), MonadId::MSet(_)) => {
            let (x, y) = match (s.children().pop(), t.children().pop()) {
                (Some((Some(g), x)), Some((Some(h), y))) if g == h => (x, y),
                _ => return Ok(false),
            };
            let (x, y) = (x.as_atom().cloned(), y.as_atom().cloned());
            Ok(matches!((x, y), (Some(x), Some(y)) if f.apply(&x)? == f.apply(&y)?))
        }
        _ => Err(Error::UnsupportedInstance(format!(
            "kernel-pair lifts for {}",
            m.id
        ))),
    }
}

fn projections(u: &Term) -> Result<(Term, Term)> {
    let side = |first: bool| {
        map_leaves(u, &|a| {
            let (l, r) = dist::split_pair(a).ok_or_else(|| Error::MalformedTerm(a.to_string()))?;
            Ok(if first { l } else { r })
        })
    };
    Ok((side(true)?, side(false)?))
}

/// The η-naturality square along f as a finite square: A = X, B = TX,
/// C = Y, D = TY.
fn eta_square(m: &MonadInstance, f: &SampleMap, bounds: &Bounds) -> Result<FiniteSquare> {
    let tx = bounded(m, 1, &f.domain(), bounds)?;
    let mut sq = FiniteSquare {
        a: f.domain().iter().map(|s| s.to_string()).collect(),
        b: tx.iter().map(Term::print).collect(),
        c: f.codomain().iter().map(|s| s.to_string()).collect(),
        d: vec![],
        f: BTreeMap::new(),
        g: BTreeMap::new(),
        m: BTreeMap::new(),
        n: BTreeMap::new(),
    };
    let mut d = BTreeSet::new();
    for x in f.domain() {
        let ex = m.eta(&m.atom(x))?;
        if !sq.b.contains(&ex.print()) {
            sq.b.push(ex.print());
        }
        sq.f.insert(x.into(), ex.print());
        sq.g.insert(x.into(), f.apply(&Atom::from(x))?.to_string());
    }
    for t in tx {
        let y = map_leaves(&t, &|a| f.apply(a))?;
        sq.m.insert(t.print(), y.print());
        d.insert(y.print());
    }
    for y in f.codomain() {
        let ey = m.eta(&m.atom(y))?;
        sq.n.insert(y.into(), ey.print());
        d.insert(ey.print());
    }
    sq.d = d.into_iter().collect();
    Ok(sq)
}

/// μ-naturality and T-images of kernel pairs along each sample map, plus
/// the η-naturality square for information.
pub fn check_bc(
    m: &MonadInstance,
    maps: &[SampleMap],
    bounds: &Bounds,
    max_report: usize,
) -> Result<BcReport> {
    let mut squares = Vec::new();
    for f in maps {
        let tf = |t: &Term| map_leaves(t, &|a| f.apply(a));

        let mut mu = Tally::new("mu_naturality", f, true);
        let mut by_mu: BTreeMap<Term, Vec<Term>> = BTreeMap::new();
        for c in bounded(m, 2, &f.codomain(), bounds)? {
            by_mu.entry(m.mu(&c)?).or_default().push(c);
        }
        for b in bounded(m, 1, &f.domain(), bounds)? {
            for c in by_mu.get(&tf(&b)?).into_iter().flatten() {
                let (count, exists) = mu_lifts(m, f, &b, c, bounds)?;
                mu.record(&b, c, count, exists, max_report);
            }
        }
        squares.push(mu.finish());

        let mut kp = Tally::new("kernel_pair", f, true);
        let tx = bounded(m, 1, &f.domain(), bounds)?;
        let mut by_image: BTreeMap<Term, Vec<&Term>> = BTreeMap::new();
        for s in &tx {
            by_image.entry(tf(s)?).or_default().push(s);
        }
        for group in by_image.values() {
            for s in group {
                for t in group {
                    let exists = kernel_lift(m, f, s, t)?;
                    kp.record(s, t, None, exists, max_report);
                }
            }
        }
        squares.push(kp.finish());

        let report = classify_square(&eta_square(m, f, bounds)?, max_report)?;
        squares.push(BcEntry {
            square: "eta_naturality".into(),
            map: f.name.clone(),
            required: false,
            verdict: report.verdict,
            pairs: report.pairs,
            missing: report.missing,
        });
    }
    let ok = squares.iter().all(|s| !s.required || s.verdict.is_weak());
    Ok(BcReport {
        monad: m.id.to_string(),
        status: Status::from_ok(ok),
        squares,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monoid::MonoidTable;

    fn verdict(r: &BcReport, square: &str) -> Verdict {
        r.squares
            .iter()
            .find(|s| s.square == square)
            .unwrap()
            .verdict
    }

    #[test]
    fn distribution_is_bc_but_eta_is_not_cartesian() {
        let d = MonadInstance::distribution();
        let b = Bounds::new(2, &[]).with_coeff_bound(4);
        let r = check_bc(&d, &[SampleMap::to_point(&["a", "b"])], &b, 4).unwrap();
        assert_eq!(r.status, Status::Pass, "{r:?}");
        assert!(verdict(&r, "mu_naturality").is_weak());
        assert!(r.squares[0].pairs >= 7, "{r:?}");
        assert_eq!(verdict(&r, "eta_naturality"), Verdict::NotWeak);
    }

    #[test]
    fn commutative_monoids_are_weakly_cartesian() {
        let cm = MonadInstance::commutative_monoid();
        let b = Bounds::new(3, &[]).with_max_leaves(3);
        let maps = [
            SampleMap::to_point(&["a", "b"]),
            SampleMap::new("fold", &[("a", "u"), ("b", "u"), ("c", "v")]),
        ];
        let r = check_bc(&cm, &maps, &b, 4).unwrap();
        assert_eq!(r.status, Status::Pass, "{r:?}");
        assert_eq!(verdict(&r, "eta_naturality"), Verdict::Strong);
        let lists = check_bc(&MonadInstance::monoid(), &maps, &b, 4).unwrap();
        assert_eq!(lists.status, Status::Pass, "{lists:?}");
    }

    #[test]
    fn group_actions() {
        let z2 = MonadInstance::m_set(MonoidTable::cyclic(2));
        let r = check_bc(
            &z2,
            &[SampleMap::to_point(&["a", "b"])],
            &Bounds::new(1, &[]),
            4,
        )
        .unwrap();
        assert_eq!(r.status, Status::Pass, "{r:?}");
        assert_eq!(verdict(&r, "mu_naturality"), Verdict::Strong);
    }
}

//! Witness search for semimodule monads over zero-sum-free semirings
//! without zero divisors.
//!
//! A witness τ = Σ w_j·B_j can only use inner terms B_j supported on the
//! support of the source, and every partial sum of either face stays below
//! the corresponding target in the natural preorder. With coefficients
//! bounded by the largest component in sight this makes the search finite
//! and complete. Existence is decided by a forward sweep over reachable
//! partial sums; listing walks the same space depth-first, pruning branches
//! that cannot reach the target.

use std::collections::{BTreeMap, BTreeSet};

use crate::algebras::Algebra;
use crate::error::{Error, Result};
use crate::semirings::{self, Elem, SemiringId};
use crate::terms::{Atom, Coeff, NodeKind, Scalars, Term, Tree};

type Vector = Vec<Elem>;

pub(crate) struct WeightedSearch {
    kind: NodeKind,
    /// Inner terms B_j, each a level-1 tree.
    inner: Vec<Tree>,
    /// Per inner term: (w, contribution of w·B_j to both faces).
    options: Vec<Vec<(Elem, Vector)>>,
    target: Vector,
    zero: Vector,
    /// Reachable sums from candidate k onwards, below the target.
    suffix: Vec<BTreeSet<Vector>>,
    /// |coefficient choices|^|inner terms|, the unpruned space.
    pub space: u128,
}

fn components(e: &Elem) -> u64 {
    match e {
        Elem::Nat(n) => *n,
        Elem::S(a, b) => (*a).max(*b),
        Elem::S9(a, b) => (*a).max(*b) as u64,
        Elem::Rat(_) => 0,
    }
}

fn entries(t: &Term) -> Result<Vec<(Elem, Atom)>> {
    match t.tree() {
        Tree::Weighted(c) => c
            .iter()
            .map(|(k, x)| match (k, x) {
                (Coeff::Elem(e), Tree::Leaf(a)) => Ok((e.clone(), a.clone())),
                _ => Err(Error::MalformedTerm(format!(
                    "{t} is not a level-1 weighted term"
                ))),
            })
            .collect(),
        _ => Err(Error::MalformedTerm(format!("{t} is not weighted"))),
    }
}

fn leq(a: &Vector, b: &Vector) -> bool {
    a.iter()
        .zip(b)
        .all(|(x, y)| semirings::natural_leq(x, y).unwrap_or(false))
}

fn plus(a: &Vector, b: &Vector) -> Result<Vector> {
    a.iter().zip(b).map(|(x, y)| semirings::add(x, y)).collect()
}

impl WeightedSearch {
    /// Which semirings admit a complete search.
    pub fn supported(id: SemiringId) -> bool {
        matches!(id, SemiringId::Nat | SemiringId::S | SemiringId::S9)
    }

    pub fn new(alg: &Algebra, t0: &Term, t1: &Term, max_candidates: u128) -> Result<Self> {
        let kind = alg.monad.kind().clone();
        let id = match &kind {
            NodeKind::Weighted(Scalars::Semiring(id)) if Self::supported(*id) => *id,
            _ => {
                return Err(Error::UnsupportedInstance(format!(
                    "complete weighted search for {}",
                    alg.monad
                )))
            }
        };
        let src = entries(t0)?;
        let dst = entries(t1)?;
        for (_, a) in src.iter().chain(&dst) {
            if !alg.contains(a) {
                return Err(Error::CarrierMismatch(a.to_string()));
            }
        }
        let bound = src
            .iter()
            .chain(&dst)
            .map(|(e, _)| components(e))
            .max()
            .unwrap_or(0)
            .max(1);
        let values: Vec<Elem> = id.bounded_elements(bound);
        let nonzero: Vec<Elem> = values.iter().filter(|e| !e.is_zero()).cloned().collect();
        let dims = src.len() + dst.len();
        let mut target: Vector = src.iter().map(|(e, _)| e.clone()).collect();
        target.extend(dst.iter().map(|(e, _)| e.clone()));
        let zero: Vector = vec![id.zero(); dims];

        // inner terms: every function supp(t0) → values, i.e. odometer over values
        let k = src.len();
        let inner_count = (values.len() as u128).saturating_pow(k as u32);
        if inner_count > max_candidates {
            return Err(Error::SearchSpaceTooLarge {
                count: inner_count,
                cap: max_candidates,
            });
        }
        let mut inner = Vec::new();
        let mut options = Vec::new();
        let mut idx = vec![0usize; k];
        loop {
            let children: Vec<(Coeff, Tree)> = idx
                .iter()
                .zip(&src)
                .filter(|(&i, _)| !values[i].is_zero())
                .map(|(&i, (_, a))| (Coeff::Elem(values[i].clone()), Tree::Leaf(a.clone())))
                .collect();
            let b = Term::new(kind.clone(), 1, Tree::Weighted(children))?;
            let value = alg.evaluate(&b)?;
            if let Some(pos) = dst.iter().position(|(_, a)| *a == value) {
                let mut opts = Vec::new();
                for w in &nonzero {
                    let mut v = zero.clone();
                    for (slot, &i) in idx.iter().enumerate() {
                        v[slot] = semirings::mul(w, &values[i])?;
                    }
                    v[k + pos] = w.clone();
                    if leq(&v, &target) {
                        opts.push((w.clone(), v));
                    }
                }
                if !opts.is_empty() {
                    inner.push(b.into_tree());
                    options.push(opts);
                }
            }
            if !crate::terms::odometer_step(&mut idx, values.len()) {
                break;
            }
        }
        let space = (values.len() as u128).saturating_pow(options.len() as u32);
        let mut s = WeightedSearch {
            kind,
            inner,
            options,
            target,
            zero,
            suffix: vec![],
            space,
        };
        s.suffix = s.suffix_sets()?;
        Ok(s)
    }

    fn suffix_sets(&self) -> Result<Vec<BTreeSet<Vector>>> {
        let n = self.inner.len();
        let mut sets = vec![BTreeSet::new(); n + 1];
        sets[n].insert(self.zero.clone());
        for k in (0..n).rev() {
            let mut next = sets[k + 1].clone();
            for v in &sets[k + 1] {
                for (_, c) in &self.options[k] {
                    let s = plus(v, c)?;
                    if leq(&s, &self.target) {
                        next.insert(s);
                    }
                }
            }
            sets[k] = next;
        }
        Ok(sets)
    }

    pub fn exists(&self) -> bool {
        self.suffix[0].contains(&self.target)
    }

    fn can_finish(&self, k: usize, partial: &Vector) -> bool {
        self.suffix[k]
            .iter()
            .any(|r| plus(partial, r).map_or(false, |s| s == self.target))
    }

    fn build(&self, choice: &[Option<usize>]) -> Result<Term> {
        let children = choice
            .iter()
            .enumerate()
            .filter_map(|(j, c)| {
                c.map(|o| {
                    (
                        Coeff::Elem(self.options[j][o].0.clone()),
                        self.inner[j].clone(),
                    )
                })
            })
            .collect();
        Term::new(self.kind.clone(), 2, Tree::Weighted(children))
    }

    /// Up to `limit` witnesses in a deterministic order.
    pub fn list(&self, limit: usize) -> Result<Vec<Term>> {
        let mut out = BTreeMap::new();
        let mut choice = vec![None; self.inner.len()];
        self.walk(0, self.zero.clone(), &mut choice, limit, &mut out)?;
        Ok(out.into_values().collect())
    }

    fn walk(
        &self,
        k: usize,
        partial: Vector,
        choice: &mut Vec<Option<usize>>,
        limit: usize,
        out: &mut BTreeMap<String, Term>,
    ) -> Result<()> {
        if out.len() >= limit || !self.can_finish(k, &partial) {
            return Ok(());
        }
        if k == self.inner.len() {
            let t = self.build(choice)?;
            out.insert(t.print(), t);
            return Ok(());
        }
        choice[k] = None;
        self.walk(k + 1, partial.clone(), choice, limit, out)?;
        for (o, (_, c)) in self.options[k].iter().enumerate() {
            let s = plus(&partial, c)?;
            if leq(&s, &self.target) {
                choice[k] = Some(o);
                self.walk(k + 1, s, choice, limit, out)?;
            }
        }
        choice[k] = None;
        Ok(())
    }
}

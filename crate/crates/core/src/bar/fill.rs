//! Simplices with prescribed faces.
//!
//! For unweighted terms the search is structural: when the top flattening
//! d_n is known, a filler is a grouping of its children into blocks; when
//! only inner faces are known, children are matched up across the given
//! faces and solved one level down. Either way the leaf content is pinned
//! by the constraints, so an empty answer is a proof of nonexistence. Other
//! cases fall back to bounded enumeration and say so.

use std::collections::{BTreeMap, BTreeSet};

use super::{face_term, Simplex};
use crate::algebras::{Algebra, AlgebraKind};
use crate::error::{Error, Result};
use crate::monads::MonadId;
use crate::terms::{Bounds, NodeKind, Scalars, Term, Tree};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fillers {
    pub simplices: Vec<Simplex>,
    /// True when the list is provably complete.
    pub exhaustive: bool,
    pub note: String,
}

/// Checks the compatibility equations d_i c_j = d_{j−1} c_i for i < j.
pub fn check_horn(alg: &Algebra, n: usize, faces: &BTreeMap<usize, Simplex>) -> Result<()> {
    for (&i, s) in faces {
        if i > n || s.n + 1 != n {
            return Err(Error::InvalidHorn(format!(
                "face {i} has level {} in a level-{n} horn",
                s.n
            )));
        }
        alg.monad.validate(&s.term)?;
    }
    if n < 2 {
        return Ok(());
    }
    for (&i, ci) in faces {
        for (&j, cj) in faces.range(i + 1..) {
            let l = face_term(alg, &cj.term, i)?;
            let r = face_term(alg, &ci.term, j - 1)?;
            if l != r {
                return Err(Error::InvalidHorn(format!(
                    "d{i} of face {j} is {l} but d{} of face {i} is {r}",
                    j - 1
                )));
            }
        }
    }
    Ok(())
}

/// All n-simplices whose faces at the given indices are as prescribed.
pub fn fillers_for_faces(
    alg: &Algebra,
    n: usize,
    faces: &BTreeMap<usize, Simplex>,
    bounds: &Bounds,
) -> Result<Fillers> {
    if n == 0 {
        return Err(Error::InvalidHorn("0-simplices have no faces".into()));
    }
    check_horn(alg, n, faces)?;
    let cons: BTreeMap<usize, Term> = faces.iter().map(|(&i, s)| (i, s.term.clone())).collect();
    if alg.monad.id == MonadId::Distribution
        && n >= 2
        && cons.len() == 2
        && cons.contains_key(&0)
        && cons.contains_key(&n)
    {
        return distribution_lift(alg, n, &cons);
    }
    let mut solver = Solver {
        alg,
        bounds,
        exhaustive: true,
        structural: true,
    };
    let found = solver.solve(n, &cons)?;
    let mut simplices = Vec::new();
    for t in found.into_values() {
        // re-verify every face and the instance constraints
        if alg.monad.validate(&t).is_err() {
            continue;
        }
        if cons
            .iter()
            .all(|(&i, c)| face_term(alg, &t, i).map_or(false, |f| &f == c))
        {
            simplices.push(Simplex { n, term: t });
        }
    }
    let note = if solver.structural && solver.exhaustive {
        "leaf content pinned by the given faces; search complete".to_string()
    } else if solver.exhaustive {
        "finite instance enumerated completely".to_string()
    } else {
        format!(
            "bounded enumeration (width ≤ {}, coefficients ≤ {}); absence is not a proof",
            bounds.max_width, bounds.coeff_bound
        )
    };
    Ok(Fillers {
        simplices,
        exhaustive: solver.exhaustive,
        note,
    })
}

/// d_0 and d_n together form a μ-naturality square; the conditional
/// product gives one filler, though not necessarily the only one.
fn distribution_lift(alg: &Algebra, n: usize, cons: &BTreeMap<usize, Term>) -> Result<Fillers> {
    let f = |x: &Term| face_term(alg, x, 0);
    let lifted = crate::pev::dist::mu_naturality_lift(&cons[&n], &cons[&0], &f)?;
    let mut simplices = Vec::new();
    if let Some(t) = lifted {
        alg.monad.validate(&t)?;
        if cons
            .iter()
            .all(|(&i, c)| face_term(alg, &t, i).map_or(false, |x| &x == c))
        {
            simplices.push(Simplex { n, term: t });
        }
    }
    Ok(Fillers {
        simplices,
        exhaustive: false,
        note: "constructive lift by conditional product".into(),
    })
}

struct Solver<'a> {
    alg: &'a Algebra,
    bounds: &'a Bounds,
    exhaustive: bool,
    structural: bool,
}

impl Solver<'_> {
    fn kind(&self) -> &NodeKind {
        self.alg.monad.kind()
    }

    fn allow_empty(&self) -> bool {
        self.alg.monad.has_unit_element()
    }

    fn check(&self, t: &Term, cons: &BTreeMap<usize, Term>) -> bool {
        cons.iter()
            .all(|(&i, c)| face_term(self.alg, t, i).map_or(false, |f| &f == c))
    }

    /// Level-(n+1) terms with the given faces, keyed by print.
    fn solve(&mut self, n: usize, cons: &BTreeMap<usize, Term>) -> Result<BTreeMap<String, Term>> {
        let structural = matches!(self.kind(), NodeKind::Multiset | NodeKind::List);
        if structural && cons.contains_key(&n) && n >= 1 {
            return self.by_blocks(n, cons);
        }
        if structural && n >= 1 && cons.keys().any(|&i| i >= 1) {
            return self.by_children(n, cons);
        }
        self.by_enumeration(n, cons)
    }

    /// The top flattening is known: group its children into blocks.
    fn by_blocks(
        &mut self,
        n: usize,
        cons: &BTreeMap<usize, Term>,
    ) -> Result<BTreeMap<String, Term>> {
        let top = &cons[&n];
        let items: Vec<Tree> = match top.tree() {
            Tree::Node(c) => c.clone(),
            _ => return Err(Error::MalformedTerm(format!("{top} is not a node"))),
        };
        // inner faces fix the number of blocks and, through a reference face,
        // what each block must look like
        let inner: Vec<(usize, Vec<Term>)> = cons
            .iter()
            .filter(|(&i, _)| i < n)
            .map(|(&i, c)| (i, c.children().into_iter().map(|(_, t)| t).collect()))
            .collect();
        let block_counts: Vec<usize> = match inner.first() {
            Some((_, ch)) => {
                if inner.iter().any(|(_, c)| c.len() != ch.len()) {
                    return Ok(BTreeMap::new());
                }
                vec![ch.len()]
            }
            None => {
                if self.allow_empty() {
                    // empty blocks can be added freely
                    self.exhaustive = false;
                    (0..=items.len().max(self.bounds.max_width)).collect()
                } else {
                    (0..=items.len()).collect()
                }
            }
        };
        let kind = self.kind().clone();
        let reference = inner.first().cloned();
        let alg = self.alg;
        let block_ok = |j: usize, block: &[Tree]| -> bool {
            if block.is_empty() && !alg.monad.has_unit_element() {
                return false;
            }
            match &reference {
                None => true,
                Some((i, targets)) => Term::new(kind.clone(), n, Tree::Node(block.to_vec()))
                    .and_then(|b| face_term(alg, &b, *i))
                    .map_or(false, |f| f == targets[j]),
            }
        };
        let mut out = BTreeMap::new();
        for m in block_counts {
            let groupings = match self.kind() {
                NodeKind::List => list_groupings(&items, m, &block_ok),
                _ => multiset_groupings(&items, m, &block_ok),
            };
            for blocks in groupings {
                let t = Term::new(
                    kind.clone(),
                    n + 1,
                    Tree::Node(blocks.into_iter().map(Tree::Node).collect()),
                )?;
                if self.check(&t, cons) {
                    out.insert(t.print(), t);
                }
            }
        }
        Ok(out)
    }

    /// Only inner faces are known: match children across them and recurse.
    fn by_children(
        &mut self,
        n: usize,
        cons: &BTreeMap<usize, Term>,
    ) -> Result<BTreeMap<String, Term>> {
        let kids: Vec<(usize, Vec<Term>)> = cons
            .iter()
            .map(|(&i, c)| (i, c.children().into_iter().map(|(_, t)| t).collect()))
            .collect();
        let m = kids[0].1.len();
        if kids.iter().any(|(_, c)| c.len() != m) {
            return Ok(BTreeMap::new());
        }
        let planar = *self.kind() == NodeKind::List;
        // alignments of every other face's children against the first one
        let mut alignments: Vec<Vec<Vec<Term>>> = vec![vec![kids[0].1.clone()]];
        for (_, ch) in &kids[1..] {
            let perms = if planar {
                vec![ch.clone()]
            } else {
                distinct_permutations(ch)
            };
            alignments = alignments
                .into_iter()
                .flat_map(|a| {
                    perms.iter().map(move |p| {
                        let mut a = a.clone();
                        a.push(p.clone());
                        a
                    })
                })
                .collect();
        }
        let kind = self.kind().clone();
        let mut out = BTreeMap::new();
        let mut memo: BTreeMap<BTreeMap<usize, Term>, Vec<Tree>> = BTreeMap::new();
        for aligned in alignments {
            let mut per_child: Vec<Vec<Tree>> = Vec::with_capacity(m);
            for j in 0..m {
                let sub: BTreeMap<usize, Term> = kids
                    .iter()
                    .zip(&aligned)
                    .map(|((i, _), col)| (*i, col[j].clone()))
                    .collect();
                let sols = match memo.get(&sub) {
                    Some(s) => s.clone(),
                    None => {
                        let s: Vec<Tree> = self
                            .solve(n - 1, &sub)?
                            .into_values()
                            .map(Term::into_tree)
                            .collect();
                        memo.insert(sub, s.clone());
                        s
                    }
                };
                if sols.is_empty() {
                    break;
                }
                per_child.push(sols);
            }
            if per_child.len() < m {
                continue;
            }
            let mut idx = vec![0usize; m];
            loop {
                let children = idx
                    .iter()
                    .zip(&per_child)
                    .map(|(&k, s)| s[k].clone())
                    .collect();
                let t = Term::new(kind.clone(), n + 1, Tree::Node(children))?;
                if self.check(&t, cons) {
                    out.insert(t.print(), t);
                }
                if !bump(&mut idx, &per_child) {
                    break;
                }
            }
        }
        Ok(out)
    }

    fn by_enumeration(
        &mut self,
        n: usize,
        cons: &BTreeMap<usize, Term>,
    ) -> Result<BTreeMap<String, Term>> {
        self.structural = false;
        let finite_carrier = !matches!(
            self.alg.kind,
            AlgebraKind::NaturalsAdd { .. } | AlgebraKind::Free { .. }
        );
        let finite_terms = matches!(self.alg.monad.id, MonadId::Identity | MonadId::MSet(_))
            || matches!(self.kind(), NodeKind::Weighted(Scalars::Monoid(_)));
        if !(finite_carrier && finite_terms && self.bounds.carrier.is_empty()) {
            self.exhaustive = false;
        }
        let mut b = self.bounds.clone();
        if finite_terms {
            b.max_width = 1;
        }
        let mut out = BTreeMap::new();
        for t in self.alg.level_terms(n + 1, &b)? {
            if self.check(&t, cons) {
                out.insert(t.print(), t);
            }
        }
        Ok(out)
    }
}

fn bump(idx: &mut [usize], sizes: &[Vec<Tree>]) -> bool {
    for i in (0..idx.len()).rev() {
        idx[i] += 1;
        if idx[i] < sizes[i].len() {
            return true;
        }
        idx[i] = 0;
    }
    false
}

/// Distinct orderings of a list of terms.
pub(crate) fn distinct_permutations(items: &[Term]) -> Vec<Vec<Term>> {
    let mut sorted = items.to_vec();
    sorted.sort();
    let mut out = vec![sorted.clone()];
    // lexicographic next permutation
    loop {
        let k = match (0..sorted.len().saturating_sub(1))
            .rev()
            .find(|&k| sorted[k] < sorted[k + 1])
        {
            Some(k) => k,
            None => return out,
        };
        let l = (k + 1..sorted.len())
            .rev()
            .find(|&l| sorted[k] < sorted[l])
            .unwrap_or(k + 1);
        sorted.swap(k, l);
        sorted[k + 1..].reverse();
        out.push(sorted.clone());
    }
}

/// Ways to split a multiset of trees into m labelled blocks.
pub(crate) fn multiset_groupings(
    items: &[Tree],
    m: usize,
    ok: &dyn Fn(usize, &[Tree]) -> bool,
) -> Vec<Vec<Vec<Tree>>> {
    let mut counts: BTreeMap<String, (Tree, usize)> = BTreeMap::new();
    for t in items {
        // keys only need to be injective; Debug is
        counts.entry(format!("{t:?}")).or_insert((t.clone(), 0)).1 += 1;
    }
    let distinct: Vec<(Tree, usize)> = counts.into_values().collect();
    let mut remaining: Vec<usize> = distinct.iter().map(|(_, c)| *c).collect();
    let mut out = BTreeSet::new();
    let mut blocks: Vec<Vec<Tree>> = Vec::new();
    fn go(
        distinct: &[(Tree, usize)],
        remaining: &mut Vec<usize>,
        m: usize,
        blocks: &mut Vec<Vec<Tree>>,
        ok: &dyn Fn(usize, &[Tree]) -> bool,
        out: &mut BTreeSet<Vec<Vec<String>>>,
        found: &mut Vec<Vec<Vec<Tree>>>,
    ) {
        let j = blocks.len();
        if j == m {
            if remaining.iter().all(|&r| r == 0) {
                let key: Vec<Vec<String>> = blocks
                    .iter()
                    .map(|b| b.iter().map(|t| format!("{t:?}")).collect())
                    .collect();
                if out.insert(key) {
                    found.push(blocks.clone());
                }
            }
            return;
        }
        let last = j + 1 == m;
        let mut take = vec![0usize; distinct.len()];
        loop {
            let fits = if last { take == *remaining } else { true };
            if fits {
                let block: Vec<Tree> = distinct
                    .iter()
                    .zip(&take)
                    .flat_map(|((t, _), &k)| std::iter::repeat(t.clone()).take(k))
                    .collect();
                if ok(j, &block) {
                    for (r, k) in remaining.iter_mut().zip(&take) {
                        *r -= k;
                    }
                    blocks.push(block);
                    go(distinct, remaining, m, blocks, ok, out, found);
                    blocks.pop();
                    for (r, k) in remaining.iter_mut().zip(&take) {
                        *r += k;
                    }
                }
            }
            // odometer over take[i] ≤ remaining[i]
            let mut i = 0;
            loop {
                if i == take.len() {
                    return;
                }
                if take[i] < remaining[i] {
                    take[i] += 1;
                    break;
                }
                take[i] = 0;
                i += 1;
            }
        }
    }
    let mut found = Vec::new();
    if m == 0 {
        if items.is_empty() {
            found.push(vec![]);
        }
        return found;
    }
    go(
        &distinct,
        &mut remaining,
        m,
        &mut blocks,
        ok,
        &mut out,
        &mut found,
    );
    found
}

/// Ways to cut a sequence into m consecutive (possibly empty) segments.
pub(crate) fn list_groupings(
    items: &[Tree],
    m: usize,
    ok: &dyn Fn(usize, &[Tree]) -> bool,
) -> Vec<Vec<Vec<Tree>>> {
    fn go(
        items: &[Tree],
        start: usize,
        m: usize,
        blocks: &mut Vec<Vec<Tree>>,
        ok: &dyn Fn(usize, &[Tree]) -> bool,
        found: &mut Vec<Vec<Vec<Tree>>>,
    ) {
        let j = blocks.len();
        if j == m {
            if start == items.len() {
                found.push(blocks.clone());
            }
            return;
        }
        let ends: Vec<usize> = if j + 1 == m {
            vec![items.len()]
        } else {
            (start..=items.len()).collect()
        };
        for end in ends {
            let block = items[start..end].to_vec();
            if ok(j, &block) {
                blocks.push(block);
                go(items, end, m, blocks, ok, found);
                blocks.pop();
            }
        }
    }
    let mut found = Vec::new();
    if m == 0 {
        if items.is_empty() {
            found.push(vec![]);
        }
        return found;
    }
    go(items, 0, m, &mut Vec::new(), ok, &mut found);
    found
}

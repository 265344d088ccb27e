//! Finite enumeration of Tⁿ(carrier) under [`Bounds`].

use std::collections::BTreeSet;

use super::{Arity, Bounds, Coeff, Flavor, NodeKind, Scalars, Term, Tree};
use crate::error::{Error, Result};
use crate::semirings::{Elem, Rational};

struct Entry {
    tree: Tree,
    leaves: usize,
    print: String,
}

/// All positive vectors of length `len` summing to one whose entries share a
/// common denominator of at most `max_denominator`, in sorted order.
pub fn probability_vectors(len: usize, max_denominator: u64) -> Vec<Vec<Rational>> {
    let mut out = BTreeSet::new();
    if len == 0 {
        return vec![];
    }
    fn compositions(rest: i128, slots: usize, prefix: &mut Vec<i128>, out: &mut Vec<Vec<i128>>) {
        if slots == 1 {
            prefix.push(rest);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for k in 1..=rest - (slots as i128 - 1) {
            prefix.push(k);
            compositions(rest - k, slots - 1, prefix, out);
            prefix.pop();
        }
    }
    for q in len as i128..=max_denominator as i128 {
        let mut parts = Vec::new();
        compositions(q, len, &mut Vec::new(), &mut parts);
        for p in parts {
            out.insert(
                p.into_iter()
                    .map(|k| Rational::new(k, q))
                    .collect::<Vec<_>>(),
            );
        }
    }
    out.into_iter().collect()
}

fn sizes(flavor: &Flavor, width: usize) -> std::ops::RangeInclusive<usize> {
    match flavor.arity {
        Arity::Any if !flavor.normalized => 0..=width,
        Arity::Single => 1..=1,
        _ => 1..=width,
    }
}

fn binom(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let mut r: u128 = 1;
    for i in 0..k {
        r = r.saturating_mul(n - i) / (i + 1);
    }
    r
}

fn coefficient_choices(flavor: &Flavor, bounds: &Bounds) -> Vec<Coeff> {
    match &flavor.kind {
        NodeKind::Weighted(Scalars::Semiring(id)) => id
            .bounded_elements(bounds.coeff_bound)
            .into_iter()
            .filter(|e| !e.is_zero())
            .map(Coeff::Elem)
            .collect(),
        NodeKind::Weighted(Scalars::Monoid(m)) => (0..m.len()).map(Coeff::Act).collect(),
        _ => vec![],
    }
}

fn level_count(flavor: &Flavor, prev: u128, bounds: &Bounds) -> u128 {
    let w = bounds.max_width;
    let k = coefficient_choices(flavor, bounds).len() as u128;
    let mut total: u128 = 0;
    if let NodeKind::Weighted(Scalars::Monoid(_)) = flavor.kind {
        return prev.saturating_mul(k);
    }
    for s in sizes(flavor, w) {
        let s128 = s as u128;
        let term = match &flavor.kind {
            NodeKind::Multiset => binom(prev + s128.saturating_sub(1), s128),
            NodeKind::List => prev.saturating_pow(s as u32),
            NodeKind::Weighted(_) if flavor.normalized => binom(prev, s128)
                .saturating_mul(probability_vectors(s, bounds.coeff_bound).len() as u128),
            NodeKind::Weighted(_) => binom(prev, s128).saturating_mul(k.saturating_pow(s as u32)),
        };
        total = total.saturating_add(term);
    }
    total
}

/// Closed-form count of level-`level` terms ignoring any leaf cap.
pub fn count_upper_bound(flavor: &Flavor, level: usize, bounds: &Bounds) -> u128 {
    let mut n = bounds.carrier.len() as u128;
    for _ in 0..level {
        n = level_count(flavor, n, bounds);
    }
    n
}

/// Every canonical term of the given level whose nodes have at most
/// `max_width` children, leaves from the carrier subset and coefficients
/// within the coefficient bound; sorted by canonical print, no duplicates.
pub fn enumerate_terms(flavor: &Flavor, level: usize, bounds: &Bounds) -> Result<Vec<Term>> {
    bounds.validate()?;
    let cap = bounds.max_candidates;
    if bounds.max_leaves.is_none() {
        let count = count_upper_bound(flavor, level, bounds);
        if count > cap {
            return Err(Error::SearchSpaceTooLarge { count, cap });
        }
    }
    let leaf_cap = bounds.max_leaves.unwrap_or(usize::MAX);
    let mut cur: Vec<Entry> = bounds
        .carrier
        .iter()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .filter(|_| leaf_cap >= 1 || level > 0)
        .map(|a| Entry {
            tree: Tree::Leaf(a.clone()),
            leaves: 1,
            print: a.0.clone(),
        })
        .collect();
    let coeffs = coefficient_choices(flavor, bounds);
    for _ in 0..level {
        let mut next: Vec<Entry> = Vec::new();
        let push = |tree: Tree, leaves: usize, next: &mut Vec<Entry>| -> Result<()> {
            if next.len() as u128 >= cap {
                return Err(Error::SearchSpaceTooLarge {
                    count: cap + 1,
                    cap,
                });
            }
            let print = tree.print(&flavor.kind);
            next.push(Entry {
                tree,
                leaves,
                print,
            });
            Ok(())
        };
        match &flavor.kind {
            NodeKind::Weighted(Scalars::Monoid(_)) => {
                for c in &cur {
                    for k in &coeffs {
                        push(
                            Tree::Weighted(vec![(k.clone(), c.tree.clone())]),
                            c.leaves,
                            &mut next,
                        )?;
                    }
                }
            }
            kind => {
                for s in sizes(flavor, bounds.max_width) {
                    let prob_vectors = if flavor.normalized {
                        probability_vectors(s, bounds.coeff_bound)
                    } else {
                        vec![]
                    };
                    let mut idx = vec![0usize; s];
                    let repeat = *kind == NodeKind::Multiset;
                    let ordered = *kind == NodeKind::List;
                    // initialise the first index tuple
                    let valid_start = if ordered || repeat {
                        true
                    } else {
                        for (i, x) in idx.iter_mut().enumerate() {
                            *x = i;
                        }
                        s <= cur.len()
                    };
                    if !valid_start || (s > 0 && cur.is_empty()) {
                        continue;
                    }
                    loop {
                        let leaves: usize = idx.iter().map(|&i| cur[i].leaves).sum();
                        if leaves <= leaf_cap {
                            match kind {
                                NodeKind::Multiset | NodeKind::List => {
                                    let children =
                                        idx.iter().map(|&i| cur[i].tree.clone()).collect();
                                    push(Tree::Node(children), leaves, &mut next)?;
                                }
                                NodeKind::Weighted(_) if flavor.normalized => {
                                    for probs in &prob_vectors {
                                        let children = idx
                                            .iter()
                                            .zip(probs)
                                            .map(|(&i, p)| {
                                                (Coeff::Elem(Elem::Rat(*p)), cur[i].tree.clone())
                                            })
                                            .collect();
                                        push(Tree::Weighted(children), leaves, &mut next)?;
                                    }
                                }
                                NodeKind::Weighted(_) => {
                                    let mut ks = vec![0usize; s];
                                    loop {
                                        let children = idx
                                            .iter()
                                            .zip(&ks)
                                            .map(|(&i, &k)| {
                                                (coeffs[k].clone(), cur[i].tree.clone())
                                            })
                                            .collect();
                                        push(Tree::Weighted(children), leaves, &mut next)?;
                                        if !odometer(&mut ks, coeffs.len()) {
                                            break;
                                        }
                                    }
                                }
                            }
                        }
                        let more = if ordered {
                            odometer(&mut idx, cur.len())
                        } else if repeat {
                            next_multichoose(&mut idx, cur.len())
                        } else {
                            next_choose(&mut idx, cur.len())
                        };
                        if !more {
                            break;
                        }
                    }
                }
            }
        }
        next.sort_by(|a, b| a.print.cmp(&b.print));
        cur = next;
    }
    Ok(cur
        .into_iter()
        .map(|e| Term {
            kind: flavor.kind.clone(),
            level,
            tree: e.tree,
        })
        .collect())
}

pub(crate) fn odometer(idx: &mut [usize], base: usize) -> bool {
    for i in (0..idx.len()).rev() {
        idx[i] += 1;
        if idx[i] < base {
            return true;
        }
        idx[i] = 0;
    }
    false
}

fn next_multichoose(idx: &mut [usize], base: usize) -> bool {
    for i in (0..idx.len()).rev() {
        if idx[i] + 1 < base {
            let v = idx[i] + 1;
            for x in idx[i..].iter_mut() {
                *x = v;
            }
            return true;
        }
    }
    false
}

fn next_choose(idx: &mut [usize], base: usize) -> bool {
    let s = idx.len();
    for i in (0..s).rev() {
        if idx[i] < base - (s - i) {
            idx[i] += 1;
            for j in i + 1..s {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

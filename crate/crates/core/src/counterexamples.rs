//! Three fixed instances on which the bar construction misbehaves, each
//! checked end to end: partial evaluations that do not compose, a 2-horn
//! with two fillers whose outer faces differ, and inner 3-horns that cannot
//! be filled.

use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::algebras::{Algebra, AlgebraKind};
use crate::bar::{check_horn, face, fillers_for_faces, Simplex};
use crate::error::{Error, Result};
use crate::monads::{MonadInstance, Status};
use crate::pev::{pe_witnesses, Witness};
use crate::semirings::{self, SemiringId, SemiringTable};
use crate::terms::Bounds;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Claim {
    pub description: String,
    pub status: Status,
    pub evidence: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CounterexampleReport {
    pub id: String,
    pub claims: Vec<Claim>,
    pub overall: Status,
    /// Wall-clock time; the only field that varies between runs.
    pub elapsed_ms: u128,
}

impl CounterexampleReport {
    fn new(id: &str, claims: Vec<Claim>, start: Instant) -> Self {
        let ok = claims.iter().all(|c| c.status == Status::Pass);
        CounterexampleReport {
            id: id.into(),
            claims,
            overall: Status::from_ok(ok),
            elapsed_ms: start.elapsed().as_millis(),
        }
    }

    pub fn passed(&self) -> bool {
        self.overall == Status::Pass
    }
}

fn claim(description: &str, ok: bool, evidence: Vec<String>) -> Claim {
    Claim {
        description: description.into(),
        status: Status::from_ok(ok),
        evidence,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    /// Worker threads; 0 lets rayon decide.
    pub jobs: usize,
    /// Cut prefixes whose running sums already exceed the targets.
    pub prune: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            jobs: 0,
            prune: true,
        }
    }
}

/// Outcome of the search over all S9-weighted sums of the nine terms r·∗.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EnumerationResult {
    /// Complete assignments visited.
    pub visited: u64,
    /// Assignments w with Σ w_r·r = 1 and Σ w_r = X, as index vectors.
    pub witnesses: Vec<Vec<usize>>,
}

/// Every function w from the nine elements r·∗ of TA to S9 is a candidate
/// τ = Σ w_r·(r·∗); μτ has coefficient Σ w_r·r and, A being a point,
/// (Te)τ has coefficient Σ w_r. Sharded over the first two values.
pub fn search_terminal_s9(
    target_mu: usize,
    target_te: usize,
    opts: SearchOptions,
) -> Result<EnumerationResult> {
    let t = SemiringTable::new(SemiringId::S9)?;
    let n = t.len();
    let shards: Vec<(usize, usize)> = (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).collect();
    let run = || {
        shards
            .par_iter()
            .map(|&(a, b)| {
                let mut w = vec![0usize; n];
                w[0] = a;
                w[1] = b;
                let mu = t.add(t.mul(a, 0), t.mul(b, 1));
                let te = t.add(a, b);
                let mut out = EnumerationResult {
                    visited: 0,
                    witnesses: vec![],
                };
                walk(
                    &t,
                    &mut w,
                    2,
                    mu,
                    te,
                    (target_mu, target_te),
                    opts.prune,
                    &mut out,
                );
                out
            })
            .collect::<Vec<_>>()
    };
    let parts = if opts.jobs == 0 {
        run()
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(opts.jobs)
            .build()
            .map_err(|e| Error::Config(e.to_string()))?
            .install(run)
    };
    let mut total = EnumerationResult {
        visited: 0,
        witnesses: vec![],
    };
    for p in parts {
        total.visited += p.visited;
        total.witnesses.extend(p.witnesses);
    }
    total.witnesses.sort();
    Ok(total)
}

#[allow(clippy::too_many_arguments)]
fn walk(
    t: &SemiringTable,
    w: &mut Vec<usize>,
    k: usize,
    mu: usize,
    te: usize,
    target: (usize, usize),
    prune: bool,
    out: &mut EnumerationResult,
) {
    // partial sums only grow in the natural preorder
    if prune && !(t.leq(mu, target.0) && t.leq(te, target.1)) {
        return;
    }
    if k == w.len() {
        out.visited += 1;
        if mu == target.0 && te == target.1 {
            out.witnesses.push(w.clone());
        }
        return;
    }
    for v in 0..t.len() {
        w[k] = v;
        walk(
            t,
            w,
            k + 1,
            t.add(mu, t.mul(v, k)),
            t.add(te, v),
            target,
            prune,
            out,
        );
    }
    w[k] = 0;
}

/// Partial evaluation on the terminal S9-semimodule is not transitive.
pub fn verify_nontransitivity(opts: SearchOptions) -> Result<CounterexampleReport> {
    let start = Instant::now();
    let m = MonadInstance::semimodule(SemiringId::S9);
    let a = Algebra::terminal(&m);
    let one = m.parse("{1:*}", 1)?;
    let two = m.parse("{2:*}", 1)?;
    let x = m.parse("{X:*}", 1)?;
    let mut claims = Vec::new();

    let w1 = Witness::parse(&a, "{1:{},1:{1:*}}")?;
    claims.push(claim(
        "a witness carries η(*) to 2·η(*)",
        w1.verify(&a) && w1.source == one && w1.target == two,
        vec![w1.tau.print(), format!("{} -> {}", w1.source, w1.target)],
    ));
    let w2 = Witness::parse(&a, "{X:{X:*}}")?;
    claims.push(claim(
        "a witness carries 2·η(*) to X·η(*)",
        w2.verify(&a) && w2.source == two && w2.target == x,
        vec![w2.tau.print(), format!("{} -> {}", w2.source, w2.target)],
    ));

    let t = SemiringTable::new(SemiringId::S9)?;
    let idx = |e| {
        t.index_of(&e)
            .ok_or_else(|| Error::InvalidTable("S9".into()))
    };
    let (i_one, i_x) = (
        idx(SemiringId::S9.one())?,
        idx(SemiringId::S9.x().unwrap())?,
    );
    // position k of the search is the term (elements[k])·∗
    let found = search_terminal_s9(i_one, i_x, opts)?;
    let expected = if opts.prune { None } else { Some(9u64.pow(9)) };
    let complete = expected.map_or(true, |e| found.visited == e);
    claims.push(claim(
        "no element of TTA carries η(*) to X·η(*)",
        found.witnesses.is_empty() && complete,
        vec![
            format!(
                "{} complete assignments visited{}",
                found.visited,
                if opts.prune { " after pruning" } else { "" }
            ),
            format!("{} witnesses", found.witnesses.len()),
        ],
    ));
    let dp = pe_witnesses(&a, &one, &x, &Bounds::new(9, &[]))?;
    claims.push(claim(
        "the coefficient search agrees",
        dp.witnesses.is_empty() && dp.exhaustive,
        vec![dp.note.clone()],
    ));

    let xe = SemiringId::S9.x().unwrap();
    let indecomposable = semirings::additively_indecomposable(&xe, 1 << 20)?;
    let inverses = semirings::solve_mul(&xe, &SemiringId::S9.one(), 2, 1 << 20)?;
    claims.push(claim(
        "X is additively indecomposable and X·r = 1 has no solution",
        indecomposable && inverses.is_empty() && t.verify_axioms().is_empty(),
        vec![
            format!("indecomposable: {indecomposable}"),
            format!("solutions of X·r = 1: {}", inverses.len()),
        ],
    ));
    Ok(CounterexampleReport::new("nontransitivity", claims, start))
}

pub const NONUNIQUENESS_ALPHA: &str = "{{2,2},{3,3},{3,1}}";
pub const NONUNIQUENESS_BETA: &str = "{{4,6},{4}}";
pub const NONUNIQUENESS_DELTA: &str = "{{{2,2},{3,3}},{{3,1}}}";
pub const NONUNIQUENESS_DELTA_PRIME: &str = "{{{2,2}},{{3,3},{3,1}}}";

fn naturals() -> Result<Algebra> {
    Algebra::naturals_add(&MonadInstance::commutative_monoid(), 64)
}

/// All fillers of the (α, β) horn found by structural search.
pub fn nonuniqueness_fillers(max_width: usize) -> Result<Vec<Simplex>> {
    let a = naturals()?;
    let faces = BTreeMap::from([
        (2, Simplex::parse(&a, NONUNIQUENESS_ALPHA, 1)?),
        (0, Simplex::parse(&a, NONUNIQUENESS_BETA, 1)?),
    ]);
    Ok(fillers_for_faces(&a, 2, &faces, &Bounds::new(max_width, &[]))?.simplices)
}

/// A 2-horn of the naturals with two fillers whose outer faces differ.
pub fn verify_nonuniqueness() -> Result<CounterexampleReport> {
    let start = Instant::now();
    let a = naturals()?;
    let alpha = Simplex::parse(&a, NONUNIQUENESS_ALPHA, 1)?;
    let beta = Simplex::parse(&a, NONUNIQUENESS_BETA, 1)?;
    let mut claims = Vec::new();
    let te_alpha = face(&a, &alpha, 0)?;
    let mu_beta = face(&a, &beta, 1)?;
    let faces = BTreeMap::from([(2, alpha.clone()), (0, beta.clone())]);
    claims.push(claim(
        "(Te)(α) = μ(β), so α and β form a horn",
        te_alpha == mu_beta && check_horn(&a, 2, &faces).is_ok(),
        vec![te_alpha.print(), mu_beta.print()],
    ));
    let delta = Simplex::parse(&a, NONUNIQUENESS_DELTA, 2)?;
    let delta2 = Simplex::parse(&a, NONUNIQUENESS_DELTA_PRIME, 2)?;
    let fills =
        |d: &Simplex| -> Result<bool> { Ok(face(&a, d, 2)? == alpha && face(&a, d, 0)? == beta) };
    claims.push(claim(
        "δ and δ′ both fill the horn",
        fills(&delta)? && fills(&delta2)?,
        vec![delta.print(), delta2.print()],
    ));
    let (o1, o2) = (face(&a, &delta, 1)?, face(&a, &delta2, 1)?);
    claims.push(claim(
        "their outer faces differ",
        o1 != o2,
        vec![o1.print(), o2.print()],
    ));
    let found = fillers_for_faces(&a, 2, &faces, &Bounds::new(6, &[]))?;
    let outer: std::collections::BTreeSet<String> = found
        .simplices
        .iter()
        .map(|s| face(&a, s, 1).map(|f| f.print()))
        .collect::<Result<_>>()?;
    let has_both = found.simplices.contains(&delta) && found.simplices.contains(&delta2);
    let mut evidence = vec![format!(
        "{} fillers, {} distinct outer faces; {}",
        found.simplices.len(),
        outer.len(),
        found.note
    )];
    evidence.extend(found.simplices.iter().map(Simplex::print));
    claims.push(claim(
        "the complete filler list has at least two outer faces",
        found.exhaustive && has_both && outer.len() >= 2,
        evidence,
    ));
    Ok(CounterexampleReport::new("nonuniqueness", claims, start))
}

/// The first horn: faces 0, 1, 3 given, face 2 missing.
pub const HORN1: [(usize, &str); 3] = [
    (0, "{{{4}},{{2,2},{3,1}}}"),
    (1, "{{{2,2},{2,2}},{{3,1}}}"),
    (3, "{{{2,2}},{{2},{2}},{{3},{1}}}"),
];
/// The second horn: faces 0, 2, 3 given, face 1 missing.
pub const HORN2: [(usize, &str); 3] = [
    (0, "{{{4,4}},{{4}}}"),
    (2, "{{{2,2}},{{2,2},{3,1}}}"),
    (3, "{{{2,2},{2,2}},{{3,1}}}"),
];

fn horn(a: &Algebra, spec: &[(usize, &str)]) -> Result<BTreeMap<usize, Simplex>> {
    spec.iter()
        .map(|&(i, t)| Ok((i, Simplex::parse(a, t, 2)?)))
        .collect()
}

fn horn_claims(
    a: &Algebra,
    name: &str,
    spec: &[(usize, &str)],
    missing: usize,
    sub_faces: [(usize, usize, usize); 2],
    blocking: (&Algebra, &str, &str),
    claims: &mut Vec<Claim>,
) -> Result<()> {
    let h = horn(a, spec)?;
    let valid = check_horn(a, 3, &h);
    // the two d_0 faces that agree only up to reordering
    let d0: Vec<String> = h
        .values()
        .take(2)
        .map(|s| face(a, s, 0).map(|f| f.print()))
        .collect::<Result<_>>()?;
    let mut evidence = vec![format!("{valid:?}")];
    evidence.extend(d0);
    claims.push(claim(
        &format!("{name}: the three faces are compatible"),
        valid.is_ok(),
        evidence,
    ));

    let b = Bounds::new(8, &[]);
    let fill = fillers_for_faces(a, 3, &h, &b)?;
    claims.push(claim(
        &format!("{name}: no 3-simplex fills it"),
        fill.simplices.is_empty() && fill.exhaustive,
        vec![fill.note.clone()],
    ));

    // faces the missing 2-simplex would need: d_p(missing) = d_q(h[r])
    let mut faces = BTreeMap::new();
    let mut evidence = vec![];
    for (p, r, q) in sub_faces {
        let f = face(a, &h[&r], q)?;
        evidence.push(format!("d{p} = {}", f.print()));
        faces.insert(p, f);
    }
    let sub = fillers_for_faces(a, 2, &faces, &b)?;
    evidence.push(sub.note.clone());
    claims.push(claim(
        &format!("{name}: no 2-simplex can serve as face {missing}"),
        sub.simplices.is_empty() && sub.exhaustive,
        evidence,
    ));

    let (alg, from, to) = blocking;
    let vertex = |text: &str| match alg.kind {
        // elements of the free algebra are themselves terms
        AlgebraKind::Free { .. } => alg.monad.parse(text, 2)?.collapse_bottom(),
        _ => alg.monad.parse(text, 1),
    };
    let (t0, t1) = (vertex(from)?, vertex(to)?);
    let ws = pe_witnesses(alg, &t0, &t1, &b)?;
    claims.push(claim(
        &format!("{name}: no partial evaluation from {from} to {to}"),
        ws.witnesses.is_empty() && ws.exhaustive && ws.common_evaluation,
        vec![ws.note.clone()],
    ));
    Ok(())
}

/// One inner 3-horn of each kind over the naturals without a filler.
pub fn verify_unfillable_horns() -> Result<CounterexampleReport> {
    let start = Instant::now();
    let a = naturals()?;
    let free = Algebra::free(
        &MonadInstance::commutative_monoid(),
        Bounds::new(4, &["1", "2", "3"]),
    );
    let mut claims = Vec::new();
    // for the missing c_2: d_0 c_2 = d_1 c_0 and d_1 c_2 = d_1 c_1
    horn_claims(
        &a,
        "horn 1",
        &HORN1,
        2,
        [(0, 0, 1), (1, 1, 1)],
        (&a, "{2,2,2,2}", "{2,2,3,1}"),
        &mut claims,
    )?;
    // for the missing c_1: d_2 c_1 = d_1 c_3 and d_1 c_1 = d_1 c_2
    horn_claims(
        &a,
        "horn 2",
        &HORN2,
        1,
        [(2, 3, 1), (1, 2, 1)],
        (&free, "{{2,2,2,2},{3,1}}", "{{2,2},{2,2,3,1}}"),
        &mut claims,
    )?;
    Ok(CounterexampleReport::new("horns", claims, start))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pruned_search_is_empty() {
        let r = verify_nontransitivity(SearchOptions::default()).unwrap();
        assert!(r.passed(), "{r:#?}");
        assert_eq!(r.claims[0].evidence[0], "{1:{1:*},1:{}}");
    }

    #[test]
    fn search_finds_the_composable_legs() {
        // η(*) → 2·η(*) is reachable, so the same search is not vacuous
        let t = SemiringTable::new(SemiringId::S9).unwrap();
        let two = t.index_of(&semirings::Elem::S9(2, 0)).unwrap();
        let r = search_terminal_s9(t.one, two, SearchOptions::default()).unwrap();
        assert!(!r.witnesses.is_empty());
    }

    #[test]
    fn nonuniqueness() {
        let r = verify_nonuniqueness().unwrap();
        assert!(r.passed(), "{r:#?}");
    }

    #[test]
    fn horns() {
        let r = verify_unfillable_horns().unwrap();
        assert!(r.passed(), "{r:#?}");
    }
}

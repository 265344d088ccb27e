//! Face and degeneracy squares of a truncated bar construction.
//!
//! Degeneracies are injective, so the mixed squares need no lift search:
//! t lies in the image of s_k exactly when s_k(d_k t) = t, and the lift,
//! when it exists, is unique.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use super::{FiniteSquare, Verdict};
use crate::algebras::Algebra;
use crate::bar::{degeneracy, face, fillers_for_faces, simplices, Simplex};
use crate::error::Result;
use crate::monads::Status;
use crate::terms::{Bounds, Term};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SquareEntry {
    /// "face", "stiff_left", "stiff_right" or "split".
    pub shape: String,
    pub n: usize,
    pub i: usize,
    pub j: usize,
    pub verdict: Verdict,
    pub pairs: usize,
    pub missing: Vec<(String, String)>,
    pub ambiguous: Vec<(String, String, Vec<String>)>,
    /// Every lift search behind the verdict was complete.
    pub exhaustive: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SimplicialSquareReport {
    pub check: String,
    pub status: Status,
    pub squares: Vec<SquareEntry>,
}

impl SimplicialSquareReport {
    fn new(check: &str, squares: Vec<SquareEntry>, strong: bool) -> Self {
        let ok = squares.iter().all(|s| {
            if strong {
                s.verdict == Verdict::Strong
            } else {
                s.verdict.is_weak()
            }
        });
        SimplicialSquareReport {
            check: check.into(),
            status: Status::from_ok(ok),
            squares,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    /// The first square with a missing lift.
    pub fn first_failure(&self) -> Option<&SquareEntry> {
        self.squares.iter().find(|s| !s.missing.is_empty())
    }
}

/// The square d_{j−1}∘d_i = d_i∘d_j out of X_n for i < j: pairs (x, y) of
/// (n−1)-simplices with d_{j−1}x = d_i y, lifted by fillers with faces
/// {i: x, j: y}.
pub fn face_square(
    alg: &Algebra,
    n: usize,
    i: usize,
    j: usize,
    bounds: &Bounds,
    max_report: usize,
) -> Result<SquareEntry> {
    let xs = simplices(alg, n - 1, bounds)?;
    let mut by_face: BTreeMap<Term, Vec<&Simplex>> = BTreeMap::new();
    for y in &xs {
        by_face.entry(face(alg, y, i)?.term).or_default().push(y);
    }
    let mut pairs = Vec::new();
    for x in &xs {
        for y in by_face
            .get(&face(alg, x, j - 1)?.term)
            .into_iter()
            .flatten()
        {
            pairs.push((x, *y));
        }
    }
    let results: Vec<_> = pairs
        .par_iter()
        .map(|(x, y)| {
            let faces = BTreeMap::from([(i, (*x).clone()), (j, (*y).clone())]);
            fillers_for_faces(alg, n, &faces, bounds).map(|f| (x, y, f))
        })
        .collect::<Result<_>>()?;
    let mut entry = SquareEntry {
        shape: "face".into(),
        n,
        i,
        j,
        verdict: Verdict::Strong,
        pairs: results.len(),
        missing: vec![],
        ambiguous: vec![],
        exhaustive: true,
    };
    let (mut any_missing, mut any_ambiguous) = (false, false);
    for (x, y, found) in results {
        entry.exhaustive &= found.exhaustive;
        match found.simplices.len() {
            0 => {
                any_missing = true;
                if entry.missing.len() < max_report {
                    entry.missing.push((x.print(), y.print()));
                }
            }
            1 => {}
            _ => {
                any_ambiguous = true;
                if entry.ambiguous.len() < max_report {
                    let ls = found.simplices.iter().map(Simplex::print).collect();
                    entry.ambiguous.push((x.print(), y.print(), ls));
                }
            }
        }
    }
    entry.verdict = if any_missing {
        Verdict::NotWeak
    } else if any_ambiguous {
        Verdict::WeakNotStrong
    } else if entry.exhaustive {
        Verdict::Strong
    } else {
        Verdict::Weak
    };
    Ok(entry)
}

/// Every face square with 0 ≤ i < j−1 ≤ n−1 for 2 ≤ n ≤ max_level must be a
/// weak pullback.
pub fn check_inner_span_complete(
    alg: &Algebra,
    max_level: usize,
    bounds: &Bounds,
    max_report: usize,
) -> Result<SimplicialSquareReport> {
    let mut squares = Vec::new();
    for n in 2..=max_level {
        for j in 2..=n {
            for i in 0..j - 1 {
                squares.push(face_square(alg, n, i, j, bounds, max_report)?);
            }
        }
    }
    Ok(SimplicialSquareReport::new(
        "inner_span_complete",
        squares,
        false,
    ))
}

fn in_image(alg: &Algebra, t: &Simplex, k: usize) -> Result<bool> {
    if t.n == 0 || k >= t.n {
        return Ok(false);
    }
    Ok(degeneracy(alg, &face(alg, t, k)?, k)? == *t)
}

/// Runs `premise ⇒ conclusion` over every (n+1+extra)-simplex c.
fn degeneracy_square(
    shape: &str,
    (n, i, j): (usize, usize, usize),
    cs: &[Simplex],
    max_report: usize,
    premise: &(dyn Fn(&Simplex) -> Result<Option<Simplex>> + Sync),
    conclusion: &(dyn Fn(&Simplex, &Simplex) -> Result<bool> + Sync),
) -> Result<SquareEntry> {
    let checked: Vec<Option<(Simplex, &Simplex, bool)>> = cs
        .par_iter()
        .map(|c| match premise(c)? {
            Some(b) => {
                let ok = conclusion(&b, c)?;
                Ok(Some((b, c, ok)))
            }
            None => Ok(None),
        })
        .collect::<Result<_>>()?;
    let mut entry = SquareEntry {
        shape: shape.into(),
        n,
        i,
        j,
        verdict: Verdict::Strong,
        pairs: 0,
        missing: vec![],
        ambiguous: vec![],
        exhaustive: true,
    };
    for (b, c, ok) in checked.into_iter().flatten() {
        entry.pairs += 1;
        if !ok {
            entry.verdict = Verdict::NotWeak;
            if entry.missing.len() < max_report {
                entry.missing.push((b.print(), c.print()));
            }
        }
    }
    Ok(entry)
}

fn stiff_squares(
    alg: &Algebra,
    max_level: usize,
    bounds: &Bounds,
    max_report: usize,
) -> Result<Vec<SquareEntry>> {
    let mut out = Vec::new();
    for n in 1..=max_level {
        let cs = simplices(alg, n + 1, bounds)?;
        for i in 0..=n {
            for j in 0..=n {
                if i < j {
                    // d_i c = s_{j−1} b forces c = s_j a
                    let premise = |c: &Simplex| {
                        let x = face(alg, c, i)?;
                        Ok(if in_image(alg, &x, j - 1)? {
                            Some(face(alg, &x, j - 1)?)
                        } else {
                            None
                        })
                    };
                    let conclusion = |_: &Simplex, c: &Simplex| in_image(alg, c, j);
                    out.push(degeneracy_square(
                        "stiff_left",
                        (n, i, j),
                        &cs,
                        max_report,
                        &premise,
                        &conclusion,
                    )?);
                } else if j < i {
                    // d_{i+1} c = s_j b forces c = s_j a
                    let premise = |c: &Simplex| {
                        let x = face(alg, c, i + 1)?;
                        Ok(if in_image(alg, &x, j)? {
                            Some(face(alg, &x, j)?)
                        } else {
                            None
                        })
                    };
                    let conclusion = |_: &Simplex, c: &Simplex| in_image(alg, c, j);
                    out.push(degeneracy_square(
                        "stiff_right",
                        (n, i, j),
                        &cs,
                        max_report,
                        &premise,
                        &conclusion,
                    )?);
                }
            }
        }
    }
    Ok(out)
}

/// The mixed face/degeneracy squares must be pullbacks.
pub fn check_stiff(
    alg: &Algebra,
    max_level: usize,
    bounds: &Bounds,
    max_report: usize,
) -> Result<SimplicialSquareReport> {
    Ok(SimplicialSquareReport::new(
        "stiff",
        stiff_squares(alg, max_level, bounds, max_report)?,
        true,
    ))
}

/// Stiffness plus the squares d_{i+1}c = s_i b ⇒ c = s_i s_i b, for
/// 0 ≤ i ≤ n < max_level.
pub fn check_split(
    alg: &Algebra,
    max_level: usize,
    bounds: &Bounds,
    max_report: usize,
) -> Result<SimplicialSquareReport> {
    let mut squares = stiff_squares(alg, max_level, bounds, max_report)?;
    for n in 0..max_level {
        let cs = simplices(alg, n + 2, bounds)?;
        for i in 0..=n {
            let premise = |c: &Simplex| {
                let x = face(alg, c, i + 1)?;
                Ok(if in_image(alg, &x, i)? {
                    Some(face(alg, &x, i)?)
                } else {
                    None
                })
            };
            let conclusion =
                |b: &Simplex, c: &Simplex| Ok(degeneracy(alg, &degeneracy(alg, b, i)?, i)? == *c);
            squares.push(degeneracy_square(
                "split",
                (n, i, i),
                &cs,
                max_report,
                &premise,
                &conclusion,
            )?);
        }
    }
    Ok(SimplicialSquareReport::new("split", squares, true))
}

/// The square μ, Te over e, e on bounded level-2 terms, as a finite square:
/// a weak pullback exactly when every partial evaluation has a witness.
pub fn algebra_square(alg: &Algebra, bounds: &Bounds) -> Result<FiniteSquare> {
    let top = alg.level_terms(2, bounds)?;
    let mut sq = FiniteSquare {
        a: vec![],
        b: vec![],
        c: vec![],
        d: vec![],
        f: BTreeMap::new(),
        g: BTreeMap::new(),
        m: BTreeMap::new(),
        n: BTreeMap::new(),
    };
    let mut b = std::collections::BTreeSet::new();
    let mut c = std::collections::BTreeSet::new();
    for t in &top {
        let s = Simplex::new(t.clone())?;
        let (mu, te) = (face(alg, &s, 1)?.term, face(alg, &s, 0)?.term);
        sq.a.push(t.print());
        sq.f.insert(t.print(), mu.print());
        sq.g.insert(t.print(), te.print());
        b.insert(mu);
        c.insert(te);
    }
    for t in alg.level_terms(1, bounds)? {
        b.insert(t.clone());
        c.insert(t);
    }
    let mut d = std::collections::BTreeSet::new();
    for t in b.iter().chain(&c) {
        let v = alg.evaluate(t)?;
        sq.m.insert(t.print(), v.to_string());
        sq.n.insert(t.print(), v.to_string());
        d.insert(v.to_string());
    }
    sq.b = b.iter().map(Term::print).collect();
    sq.c = c.iter().map(Term::print).collect();
    sq.d = d.into_iter().collect();
    Ok(sq)
}

//! The bar construction Bar(T,A)(n) = T^{n+1}A with its face and degeneracy maps.

mod fill;

use std::collections::BTreeMap;

use serde::Serialize;

pub use fill::{check_horn, fillers_for_faces, Fillers};
pub(crate) use fill::{list_groupings, multiset_groupings};

use crate::algebras::Algebra;
use crate::error::{Error, Result};
use crate::monads::{eta_at, LawReport, Status};
use crate::terms::{Bounds, Term};

/// An n-simplex: a term of level n+1 over the algebra's carrier.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Simplex {
    pub n: usize,
    pub term: Term,
}

impl Simplex {
    pub fn new(term: Term) -> Result<Self> {
        if term.level() == 0 {
            return Err(Error::LevelMismatch {
                expected: 1,
                detail: "a simplex needs a term of level ≥ 1".into(),
            });
        }
        Ok(Simplex {
            n: term.level() - 1,
            term,
        })
    }

    pub fn parse(alg: &Algebra, text: &str, n: usize) -> Result<Self> {
        let term = alg.monad.parse(text, n + 1)?;
        for a in term.leaves() {
            if !alg.contains(a) {
                return Err(Error::CarrierMismatch(a.to_string()));
            }
        }
        Ok(Simplex { n, term })
    }

    pub fn print(&self) -> String {
        self.term.print()
    }
}

impl std::fmt::Display for Simplex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.print())
    }
}

/// d_i on a term of level L ≥ 1 viewed as an (L−1)-simplex; on a 0-simplex
/// d_0 is the augmentation and yields an atom.
pub(crate) fn face_term(alg: &Algebra, t: &Term, i: usize) -> Result<Term> {
    let n = t
        .level()
        .checked_sub(1)
        .ok_or(Error::IndexOutOfRange { index: i, level: 0 })?;
    if i > n {
        return Err(Error::IndexOutOfRange { index: i, level: n });
    }
    if n == 0 {
        return Ok(alg.monad.atom(alg.evaluate(t)?));
    }
    if i == 0 {
        alg.evaluate_at(t)
    } else {
        alg.monad.mu_at(t, n - i)
    }
}

/// d_{n,0} = Tⁿe, d_{n,i} = T^{n−i}μ.
pub fn face(alg: &Algebra, s: &Simplex, i: usize) -> Result<Simplex> {
    if s.n == 0 || i > s.n {
        return Err(Error::IndexOutOfRange {
            index: i,
            level: s.n,
        });
    }
    Ok(Simplex {
        n: s.n - 1,
        term: face_term(alg, &s.term, i)?,
    })
}

/// s_{n,i} = T^{n−i+1}η.
pub fn degeneracy(_alg: &Algebra, s: &Simplex, i: usize) -> Result<Simplex> {
    if i > s.n {
        return Err(Error::IndexOutOfRange {
            index: i,
            level: s.n,
        });
    }
    Ok(Simplex {
        n: s.n + 1,
        term: eta_at(&s.term, s.n - i + 1)?,
    })
}

/// All n-simplices within bounds.
pub fn simplices(alg: &Algebra, n: usize, bounds: &Bounds) -> Result<Vec<Simplex>> {
    Ok(alg
        .level_terms(n + 1, bounds)?
        .into_iter()
        .map(|term| Simplex { n, term })
        .collect())
}

fn rec(r: &mut LawReport, s: &Simplex, lhs: Result<Simplex>, rhs: Result<Simplex>) {
    r.record(&s.term, lhs.map(|x| x.term), rhs.map(|x| x.term));
}

/// d_i d_j = d_{j−1} d_i, s_i s_j = s_{j+1} s_i and the mixed identities on
/// every enumerated simplex of level ≤ max_level.
pub fn check_simplicial_identities(
    alg: &Algebra,
    max_level: usize,
    bounds: &Bounds,
) -> Result<Vec<LawReport>> {
    let mut out = Vec::new();
    for n in 0..=max_level {
        let xs = simplices(alg, n, bounds)?;
        let mut dd = LawReport::new("face_face", n);
        let mut ss = LawReport::new("degeneracy_degeneracy", n);
        let mut ds = LawReport::new("face_degeneracy", n);
        for s in &xs {
            let d = |x: &Simplex, i| face(alg, x, i);
            let sg = |x: &Simplex, i| degeneracy(alg, x, i);
            if n >= 2 {
                for j in 1..=n {
                    for i in 0..j {
                        rec(
                            &mut dd,
                            s,
                            d(s, j).and_then(|x| d(&x, i)),
                            d(s, i).and_then(|x| d(&x, j - 1)),
                        );
                    }
                }
            }
            for j in 0..=n {
                for i in 0..=j {
                    rec(
                        &mut ss,
                        s,
                        sg(s, j).and_then(|x| sg(&x, i)),
                        sg(s, i).and_then(|x| sg(&x, j + 1)),
                    );
                }
                for i in 0..=n + 1 {
                    let lhs = sg(s, j).and_then(|x| d(&x, i));
                    let rhs = if i < j {
                        d(s, i).and_then(|x| sg(&x, j - 1))
                    } else if i == j || i == j + 1 {
                        Ok(s.clone())
                    } else {
                        d(s, i - 1).and_then(|x| sg(&x, j))
                    };
                    rec(&mut ds, s, lhs, rhs);
                }
            }
        }
        out.push(dd);
        out.push(ss);
        out.push(ds);
    }
    out.retain(|r| r.checked > 0);
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpineSample {
    pub first: String,
    pub second: String,
    pub fillers: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SegalReport {
    pub check: String,
    pub status: Status,
    pub level: usize,
    pub spines: usize,
    pub injective: bool,
    pub surjective: bool,
    /// Whether every filler search was exhaustive.
    pub exhaustive: bool,
    pub injectivity_failures: Vec<SpineSample>,
    pub surjectivity_failures: Vec<SpineSample>,
}

/// Checks X_2 → X_1 ×_{X_0} X_1 for bijectivity over enumerated composable
/// edge pairs plus any extra pairs supplied.
pub fn segal_check(
    alg: &Algebra,
    n: usize,
    bounds: &Bounds,
    extra: &[(Simplex, Simplex)],
    max_report: usize,
) -> Result<SegalReport> {
    if n != 2 {
        return Err(Error::UnsupportedInstance(format!(
            "segal_check is implemented for n = 2, not {n}"
        )));
    }
    let edges = simplices(alg, 1, bounds)?;
    let mut by_source: BTreeMap<Term, Vec<&Simplex>> = BTreeMap::new();
    for e in &edges {
        by_source.entry(face(alg, e, 1)?.term).or_default().push(e);
    }
    let mut pairs: Vec<(Simplex, Simplex)> = extra.to_vec();
    for a in &edges {
        if let Some(next) = by_source.get(&face(alg, a, 0)?.term) {
            pairs.extend(next.iter().map(|b| (a.clone(), (*b).clone())));
        }
    }
    let mut report = SegalReport {
        check: "segal".into(),
        status: Status::Pass,
        level: n,
        spines: 0,
        injective: true,
        surjective: true,
        exhaustive: true,
        injectivity_failures: vec![],
        surjectivity_failures: vec![],
    };
    for (a, b) in pairs {
        let faces = BTreeMap::from([(2, a.clone()), (0, b.clone())]);
        let found = fillers_for_faces(alg, 2, &faces, bounds)?;
        report.spines += 1;
        report.exhaustive &= found.exhaustive;
        let sample = || SpineSample {
            first: a.print(),
            second: b.print(),
            fillers: found.simplices.iter().map(|s| s.print()).collect(),
        };
        match found.simplices.len() {
            1 => {}
            0 => {
                report.surjective = false;
                if report.surjectivity_failures.len() < max_report {
                    report.surjectivity_failures.push(sample());
                }
            }
            _ => {
                report.injective = false;
                if report.injectivity_failures.len() < max_report {
                    report.injectivity_failures.push(sample());
                }
            }
        }
    }
    report.status = Status::from_ok(report.injective && report.surjective);
    Ok(report)
}

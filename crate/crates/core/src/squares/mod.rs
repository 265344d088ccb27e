//! Commutative squares of finite sets, and the weak-pullback conditions the
//! bar construction is tested against.
//!
//! A square
//!
//! ```text
//!   A --f--> B
//!   |        |
//!   g        m
//!   v        v
//!   C --n--> D
//! ```
//!
//! is a weak pullback when every pair (b, c) with m(b) = n(c) has at least
//! one lift a, and a pullback when that lift is unique.

mod bc;
mod simplicial;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

pub use crate::bar::fillers_for_faces;
pub use bc::{check_bc, BcReport, SampleMap};
pub use simplicial::{
    algebra_square, check_inner_span_complete, check_split, check_stiff, face_square,
    SimplicialSquareReport, SquareEntry,
};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteSquare {
    #[serde(rename = "A")]
    pub a: Vec<String>,
    #[serde(rename = "B")]
    pub b: Vec<String>,
    #[serde(rename = "C")]
    pub c: Vec<String>,
    #[serde(rename = "D")]
    pub d: Vec<String>,
    pub f: BTreeMap<String, String>,
    pub g: BTreeMap<String, String>,
    pub m: BTreeMap<String, String>,
    pub n: BTreeMap<String, String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Strong,
    WeakNotStrong,
    /// Lifts exist but uniqueness was not decided.
    Weak,
    NotWeak,
}

impl Verdict {
    pub fn is_weak(self) -> bool {
        self != Verdict::NotWeak
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Strong => "strong",
            Verdict::WeakNotStrong => "weak_not_strong",
            Verdict::Weak => "weak",
            Verdict::NotWeak => "not_weak",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SquareReport {
    pub verdict: Verdict,
    /// Compatible pairs (b, c).
    pub pairs: usize,
    /// Pairs without a lift.
    pub missing: Vec<(String, String)>,
    /// Pairs with more than one lift, with their lifts.
    pub ambiguous: Vec<(String, String, Vec<String>)>,
    /// One of the legs out of A is injective.
    pub monic_leg: bool,
    /// Monic leg and weak pullback imply pullback.
    pub mono_lemma_holds: bool,
}

fn apply<'a>(
    name: &str,
    map: &'a BTreeMap<String, String>,
    x: &str,
    codomain: &BTreeSet<&str>,
) -> Result<&'a str> {
    let y = map
        .get(x)
        .ok_or_else(|| Error::InvalidTable(format!("{name} is not defined at {x}")))?;
    if !codomain.contains(y.as_str()) {
        return Err(Error::InvalidTable(format!(
            "{name}({x}) = {y} is outside its codomain"
        )));
    }
    Ok(y)
}

fn injective(map: &BTreeMap<String, String>, dom: &[String]) -> bool {
    let mut seen = BTreeSet::new();
    dom.iter().all(|x| seen.insert(&map[x]))
}

impl FiniteSquare {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(format!("square: {e}")))
    }

    /// Checks that the maps are total, land in their codomains and that the
    /// square commutes.
    pub fn validate(&self) -> Result<()> {
        fn set(xs: &[String]) -> BTreeSet<&str> {
            xs.iter().map(String::as_str).collect()
        }
        let (b, c, d) = (set(&self.b), set(&self.c), set(&self.d));
        for x in &self.a {
            let fb = apply("f", &self.f, x, &b)?;
            let gc = apply("g", &self.g, x, &c)?;
            let left = apply("m", &self.m, fb, &d)?;
            let right = apply("n", &self.n, gc, &d)?;
            if left != right {
                return Err(Error::NonCommutingSquare(format!(
                    "m(f({x})) = {left} but n(g({x})) = {right}"
                )));
            }
        }
        for x in &self.b {
            apply("m", &self.m, x, &d)?;
        }
        for x in &self.c {
            apply("n", &self.n, x, &d)?;
        }
        Ok(())
    }

    /// Glues `self` (left) and `right` along the shared edge: self's B, D
    /// become right's A, C. The result is the outer rectangle.
    pub fn paste(&self, right: &FiniteSquare) -> Result<FiniteSquare> {
        if self.b != right.a || self.d != right.c || self.m != right.g {
            return Err(Error::InvalidTable("squares do not share an edge".into()));
        }
        let compose = |first: &BTreeMap<String, String>,
                       second: &BTreeMap<String, String>|
         -> Result<BTreeMap<String, String>> {
            first
                .iter()
                .map(|(x, y)| {
                    let z = second
                        .get(y)
                        .ok_or_else(|| Error::InvalidTable(format!("cannot compose at {y}")))?;
                    Ok((x.clone(), z.clone()))
                })
                .collect()
        };
        Ok(FiniteSquare {
            a: self.a.clone(),
            b: right.b.clone(),
            c: self.c.clone(),
            d: right.d.clone(),
            f: compose(&self.f, &right.f)?,
            g: self.g.clone(),
            m: right.m.clone(),
            n: compose(&self.n, &right.n)?,
        })
    }
}

/// Counts lifts for every compatible pair and classifies the square.
pub fn classify_square(sq: &FiniteSquare, max_report: usize) -> Result<SquareReport> {
    sq.validate()?;
    let mut lifts: BTreeMap<(&str, &str), Vec<&str>> = BTreeMap::new();
    for x in &sq.a {
        lifts.entry((&sq.f[x], &sq.g[x])).or_default().push(x);
    }
    let mut by_image: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
    for c in &sq.c {
        by_image.entry(&sq.n[c]).or_default().push(c);
    }
    let mut pairs = 0;
    let (mut missing, mut ambiguous) = (vec![], vec![]);
    let (mut any_missing, mut any_ambiguous) = (false, false);
    for b in &sq.b {
        for c in by_image.get(sq.m[b].as_str()).into_iter().flatten() {
            pairs += 1;
            match lifts.get(&(b.as_str(), *c)).map_or(0, Vec::len) {
                0 => {
                    any_missing = true;
                    if missing.len() < max_report {
                        missing.push((b.clone(), c.to_string()));
                    }
                }
                1 => {}
                _ => {
                    any_ambiguous = true;
                    if ambiguous.len() < max_report {
                        let ls = lifts[&(b.as_str(), *c)]
                            .iter()
                            .map(|s| s.to_string())
                            .collect();
                        ambiguous.push((b.clone(), c.to_string(), ls));
                    }
                }
            }
        }
    }
    let verdict = match (any_missing, any_ambiguous) {
        (true, _) => Verdict::NotWeak,
        (false, true) => Verdict::WeakNotStrong,
        (false, false) => Verdict::Strong,
    };
    let monic_leg = injective(&sq.f, &sq.a) || injective(&sq.g, &sq.a);
    let mono_lemma_holds = !(monic_leg && verdict.is_weak()) || verdict == Verdict::Strong;
    Ok(SquareReport {
        verdict,
        pairs,
        missing,
        ambiguous,
        monic_leg,
        mono_lemma_holds,
    })
}

fn strs(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

fn table(pairs: &[(&str, &str)]) -> BTreeMap<String, String> {
    pairs
        .iter()
        .map(|(x, y)| (x.to_string(), y.to_string()))
        .collect()
}

/// Two squares side by side whose right half and outer rectangle are weak
/// pullbacks while the left half is not: weak pullbacks do not cancel.
pub fn prism_example() -> (FiniteSquare, FiniteSquare) {
    let left = FiniteSquare {
        a: strs(&["*"]),
        b: strs(&["a", "b"]),
        c: strs(&["*"]),
        d: strs(&["*"]),
        f: table(&[("*", "a")]),
        g: table(&[("*", "*")]),
        m: table(&[("a", "*"), ("b", "*")]),
        n: table(&[("*", "*")]),
    };
    let right = FiniteSquare {
        a: strs(&["a", "b"]),
        b: strs(&["*"]),
        c: strs(&["*"]),
        d: strs(&["*"]),
        f: table(&[("a", "*"), ("b", "*")]),
        g: table(&[("a", "*"), ("b", "*")]),
        m: table(&[("*", "*")]),
        n: table(&[("*", "*")]),
    };
    (left, right)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prism() {
        let (l, r) = prism_example();
        let outer = l.paste(&r).unwrap();
        assert_eq!(
            classify_square(&r, 4).unwrap().verdict,
            Verdict::WeakNotStrong
        );
        assert!(classify_square(&outer, 4).unwrap().verdict.is_weak());
        let left = classify_square(&l, 4).unwrap();
        assert_eq!(left.verdict, Verdict::NotWeak);
        assert_eq!(left.missing, vec![("b".to_string(), "*".to_string())]);
    }

    #[test]
    fn product_is_a_pullback() {
        let sq = FiniteSquare {
            a: strs(&["00", "01", "10", "11"]),
            b: strs(&["0", "1"]),
            c: strs(&["0", "1"]),
            d: strs(&["*"]),
            f: table(&[("00", "0"), ("01", "0"), ("10", "1"), ("11", "1")]),
            g: table(&[("00", "0"), ("01", "1"), ("10", "0"), ("11", "1")]),
            m: table(&[("0", "*"), ("1", "*")]),
            n: table(&[("0", "*"), ("1", "*")]),
        };
        let r = classify_square(&sq, 4).unwrap();
        assert_eq!((r.verdict, r.pairs), (Verdict::Strong, 4));
        let json = serde_json::to_string(&sq).unwrap();
        assert!(json.contains("\"A\""));
        assert_eq!(FiniteSquare::from_json(&json).unwrap(), sq);
    }

    #[test]
    fn rejects_noncommuting() {
        let (mut l, _) = prism_example();
        l.d = strs(&["*", "x"]);
        l.n = table(&[("*", "x")]);
        assert!(matches!(
            classify_square(&l, 4),
            Err(Error::NonCommutingSquare(_))
        ));
        l.n = table(&[]);
        assert!(matches!(
            classify_square(&l, 4),
            Err(Error::InvalidTable(_))
        ));
    }
}

//! Commutative semirings used as coefficient domains.
//!
//! Four semirings are bundled:
//!
//! * `nat`: the natural numbers.
//! * `S`: ℕ[X]/⟨X² = 2⟩, elements `a + bX` with `a, b ∈ ℕ`.
//! * `S9`: the quotient of `S` by the extra relation `2 + 1 = 2`, elements
//!   `a + bX` with `a, b ∈ {0, 1, 2}` and saturating components.
//! * `rat`: the nonnegative rationals, exact.
//!
//! Products in `S` and `S9` use the ordinary expansion
//! `(a₁ + b₁X)(a₂ + b₂X) = (a₁a₂ + 2b₁b₂) + (a₁b₂ + a₂b₁)X`. The cross term
//! `(a₁b₁ + a₂b₂)X` that sometimes appears in print is not bilinear and is not
//! used here.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Rational = Ratio<i128>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SemiringId {
    #[serde(rename = "nat")]
    Nat,
    S,
    S9,
    #[serde(rename = "rat")]
    Rat,
}

impl fmt::Display for SemiringId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SemiringId::Nat => "nat",
            SemiringId::S => "S",
            SemiringId::S9 => "S9",
            SemiringId::Rat => "rat",
        })
    }
}

impl FromStr for SemiringId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "nat" | "N" => Ok(SemiringId::Nat),
            "S" => Ok(SemiringId::S),
            "S9" => Ok(SemiringId::S9),
            "rat" | "Q" => Ok(SemiringId::Rat),
            other => Err(Error::Config(format!("unknown semiring `{other}`"))),
        }
    }
}

/// An element of one of the bundled semirings; the variant names the semiring.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Elem {
    Nat(u64),
    S(u64, u64),
    S9(u8, u8),
    Rat(Rational),
}

fn sat(n: u64) -> u8 {
    n.min(2) as u8
}

impl SemiringId {
    pub fn zero(self) -> Elem {
        match self {
            SemiringId::Nat => Elem::Nat(0),
            SemiringId::S => Elem::S(0, 0),
            SemiringId::S9 => Elem::S9(0, 0),
            SemiringId::Rat => Elem::Rat(Rational::zero()),
        }
    }

    pub fn one(self) -> Elem {
        match self {
            SemiringId::Nat => Elem::Nat(1),
            SemiringId::S => Elem::S(1, 0),
            SemiringId::S9 => Elem::S9(1, 0),
            SemiringId::Rat => Elem::Rat(Rational::one()),
        }
    }

    /// The adjoined square root of two, where it exists.
    pub fn x(self) -> Option<Elem> {
        match self {
            SemiringId::S => Some(Elem::S(0, 1)),
            SemiringId::S9 => Some(Elem::S9(0, 1)),
            _ => None,
        }
    }

    pub fn is_finite(self) -> bool {
        self == SemiringId::S9
    }

    /// All elements of a finite semiring in a fixed order (zero first).
    pub fn elements(self) -> Option<Vec<Elem>> {
        match self {
            SemiringId::S9 => Some(
                (0..3u8)
                    .flat_map(|b| (0..3u8).map(move |a| Elem::S9(a, b)))
                    .collect(),
            ),
            _ => None,
        }
    }

    /// Elements whose integer components (or numerator and denominator) are at most `bound`.
    pub fn bounded_elements(self, bound: u64) -> Vec<Elem> {
        match self {
            SemiringId::Nat => (0..=bound).map(Elem::Nat).collect(),
            SemiringId::S => (0..=bound)
                .flat_map(|b| (0..=bound).map(move |a| Elem::S(a, b)))
                .collect(),
            SemiringId::S9 => self.elements().unwrap(),
            SemiringId::Rat => {
                let mut out: Vec<Rational> = Vec::new();
                for q in 1..=bound.max(1) as i128 {
                    for p in 0..=(bound as i128) {
                        let r = Rational::new(p, q);
                        if !out.contains(&r) {
                            out.push(r);
                        }
                    }
                }
                out.sort();
                out.into_iter().map(Elem::Rat).collect()
            }
        }
    }
}

impl Elem {
    pub fn semiring(&self) -> SemiringId {
        match self {
            Elem::Nat(_) => SemiringId::Nat,
            Elem::S(..) => SemiringId::S,
            Elem::S9(..) => SemiringId::S9,
            Elem::Rat(_) => SemiringId::Rat,
        }
    }

    pub fn is_zero(&self) -> bool {
        *self == self.semiring().zero()
    }

    pub fn is_one(&self) -> bool {
        *self == self.semiring().one()
    }

    pub fn parse(id: SemiringId, text: &str) -> Result<Elem> {
        let bad = || Error::Syntax {
            pos: 0,
            msg: format!("`{text}` is not a {id} literal"),
        };
        let text = text.trim();
        match id {
            SemiringId::Nat => text.parse::<u64>().map(Elem::Nat).map_err(|_| bad()),
            SemiringId::Rat => {
                let r = match text.split_once('/') {
                    Some((p, q)) => {
                        let p: i128 = p.trim().parse().map_err(|_| bad())?;
                        let q: i128 = q.trim().parse().map_err(|_| bad())?;
                        if q == 0 || p < 0 || q < 0 {
                            return Err(bad());
                        }
                        Rational::new(p, q)
                    }
                    None => Rational::from_integer(text.parse::<i128>().map_err(|_| bad())?),
                };
                if r < Rational::zero() {
                    return Err(bad());
                }
                Ok(Elem::Rat(r))
            }
            SemiringId::S | SemiringId::S9 => {
                let (a, b) = parse_poly(text).ok_or_else(bad)?;
                if id == SemiringId::S {
                    Ok(Elem::S(a, b))
                } else {
                    Ok(Elem::S9(sat(a), sat(b)))
                }
            }
        }
    }
}

/// Parses `a`, `X`, `bX`, `a+X`, `a+bX`.
fn parse_poly(text: &str) -> Option<(u64, u64)> {
    let parse_x = |t: &str| -> Option<u64> {
        let t = t.trim();
        let coeff = t.strip_suffix('X')?.trim();
        if coeff.is_empty() {
            Some(1)
        } else {
            coeff.parse().ok()
        }
    };
    match text.split_once('+') {
        Some((a, bx)) => Some((a.trim().parse().ok()?, parse_x(bx)?)),
        None if text.ends_with('X') => Some((0, parse_x(text)?)),
        None => Some((text.parse().ok()?, 0)),
    }
}

fn print_poly(f: &mut fmt::Formatter<'_>, a: u64, b: u64) -> fmt::Result {
    match (a, b) {
        (a, 0) => write!(f, "{a}"),
        (0, 1) => write!(f, "X"),
        (0, b) => write!(f, "{b}X"),
        (a, 1) => write!(f, "{a}+X"),
        (a, b) => write!(f, "{a}+{b}X"),
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Elem::Nat(n) => write!(f, "{n}"),
            Elem::S(a, b) => print_poly(f, *a, *b),
            Elem::S9(a, b) => print_poly(f, *a as u64, *b as u64),
            Elem::Rat(r) if r.is_integer() => write!(f, "{}", r.numer()),
            Elem::Rat(r) => write!(f, "{}/{}", r.numer(), r.denom()),
        }
    }
}

fn mixed(x: &Elem, y: &Elem) -> Error {
    Error::MixedSemirings(x.semiring().to_string(), y.semiring().to_string())
}

pub fn add(x: &Elem, y: &Elem) -> Result<Elem> {
    Ok(match (x, y) {
        (Elem::Nat(a), Elem::Nat(b)) => Elem::Nat(a + b),
        (Elem::S(a1, b1), Elem::S(a2, b2)) => Elem::S(a1 + a2, b1 + b2),
        (Elem::S9(a1, b1), Elem::S9(a2, b2)) => {
            Elem::S9(sat((a1 + a2) as u64), sat((b1 + b2) as u64))
        }
        (Elem::Rat(p), Elem::Rat(q)) => Elem::Rat(p + q),
        _ => return Err(mixed(x, y)),
    })
}

pub fn mul(x: &Elem, y: &Elem) -> Result<Elem> {
    Ok(match (x, y) {
        (Elem::Nat(a), Elem::Nat(b)) => Elem::Nat(a * b),
        (Elem::S(a1, b1), Elem::S(a2, b2)) => Elem::S(a1 * a2 + 2 * b1 * b2, a1 * b2 + a2 * b1),
        (Elem::S9(a1, b1), Elem::S9(a2, b2)) => {
            let (a1, b1, a2, b2) = (*a1 as u64, *b1 as u64, *a2 as u64, *b2 as u64);
            Elem::S9(sat(a1 * a2 + 2 * b1 * b2), sat(a1 * b2 + a2 * b1))
        }
        (Elem::Rat(p), Elem::Rat(q)) => Elem::Rat(p * q),
        _ => return Err(mixed(x, y)),
    })
}

/// The natural preorder `x ≤ y ⟺ ∃z. x + z = y`.
///
/// All bundled semirings are ordered componentwise, so this is decided
/// without search.
pub fn natural_leq(x: &Elem, y: &Elem) -> Result<bool> {
    Ok(match (x, y) {
        (Elem::Nat(a), Elem::Nat(b)) => a <= b,
        (Elem::S(a1, b1), Elem::S(a2, b2)) => a1 <= a2 && b1 <= b2,
        (Elem::S9(a1, b1), Elem::S9(a2, b2)) => a1 <= a2 && b1 <= b2,
        (Elem::Rat(p), Elem::Rat(q)) => p <= q,
        _ => return Err(mixed(x, y)),
    })
}

/// Candidate summands `r` with `r ≤ x` in the natural preorder.
fn summands_below(x: &Elem, cap: u128) -> Result<Vec<Elem>> {
    let out: Vec<Elem> = match *x {
        Elem::Nat(n) => (0..=n).map(Elem::Nat).collect(),
        Elem::S(a, b) => {
            let count = (a as u128 + 1) * (b as u128 + 1);
            if count > cap {
                return Err(Error::SearchSpaceTooLarge { count, cap });
            }
            (0..=b)
                .flat_map(|j| (0..=a).map(move |i| Elem::S(i, j)))
                .collect()
        }
        Elem::S9(..) => SemiringId::S9.elements().unwrap(),
        Elem::Rat(_) => return Err(Error::UnsupportedInstance("dense semiring".into())),
    };
    if out.len() as u128 > cap {
        return Err(Error::SearchSpaceTooLarge {
            count: out.len() as u128,
            cap,
        });
    }
    Ok(out)
}

/// True iff `x = r + s` forces `r = 0` or `s = 0`, decided by exhaustive search
/// over pairs of candidate summands.
pub fn additively_indecomposable(x: &Elem, max_candidates: u128) -> Result<bool> {
    if let Elem::Rat(r) = x {
        // x = x/2 + x/2
        return Ok(r.is_zero());
    }
    let cands = summands_below(x, max_candidates)?;
    let pairs = cands.len() as u128 * cands.len() as u128;
    if pairs > max_candidates {
        return Err(Error::SearchSpaceTooLarge {
            count: pairs,
            cap: max_candidates,
        });
    }
    for r in &cands {
        for s in &cands {
            if !r.is_zero() && !s.is_zero() && add(r, s)? == *x {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// All `r` with `a · r = target`, components bounded by `bound` for the
/// infinite semirings.
pub fn solve_mul(a: &Elem, target: &Elem, bound: u64, max_candidates: u128) -> Result<Vec<Elem>> {
    if a.semiring() != target.semiring() {
        return Err(mixed(a, target));
    }
    if let (Elem::Rat(p), Elem::Rat(q)) = (a, target) {
        return Ok(if p.is_zero() {
            if q.is_zero() {
                // every r works; report the bounded ones
                a.semiring().bounded_elements(bound)
            } else {
                vec![]
            }
        } else {
            vec![Elem::Rat(q / p)]
        });
    }
    let cands = a.semiring().bounded_elements(bound);
    if cands.len() as u128 > max_candidates {
        return Err(Error::SearchSpaceTooLarge {
            count: cands.len() as u128,
            cap: max_candidates,
        });
    }
    let mut out = Vec::new();
    for r in cands {
        if mul(a, &r)? == *target {
            out.push(r);
        }
    }
    Ok(out)
}

/// The quotient map `S → S9` (componentwise saturation at 2).
pub fn saturate(x: &Elem) -> Option<Elem> {
    match *x {
        Elem::S(a, b) => Some(Elem::S9(sat(a), sat(b))),
        _ => None,
    }
}

/// A finite commutative semiring as explicit index tables, validated at
/// construction time.
#[derive(Debug, Clone)]
pub struct SemiringTable {
    pub id: SemiringId,
    pub elements: Vec<Elem>,
    pub zero: usize,
    pub one: usize,
    add: Vec<usize>,
    mul: Vec<usize>,
    leq: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomViolation {
    pub axiom: &'static str,
    pub elements: Vec<Elem>,
}

impl SemiringTable {
    pub fn new(id: SemiringId) -> Result<Self> {
        let elements = id
            .elements()
            .ok_or_else(|| Error::UnsupportedInstance(format!("{id} is not finite")))?;
        let n = elements.len();
        let index = |e: &Elem| elements.iter().position(|x| x == e).unwrap();
        let mut add_t = vec![0; n * n];
        let mut mul_t = vec![0; n * n];
        let mut leq = vec![false; n * n];
        for i in 0..n {
            for j in 0..n {
                add_t[i * n + j] = index(&add(&elements[i], &elements[j])?);
                mul_t[i * n + j] = index(&mul(&elements[i], &elements[j])?);
                leq[i * n + j] = natural_leq(&elements[i], &elements[j])?;
            }
        }
        let table = SemiringTable {
            id,
            zero: index(&id.zero()),
            one: index(&id.one()),
            elements,
            add: add_t,
            mul: mul_t,
            leq,
        };
        let violations = table.verify_axioms();
        if let Some(v) = violations.first() {
            return Err(Error::InvalidTable(format!(
                "{} fails {} at {:?}",
                id, v.axiom, v.elements
            )));
        }
        Ok(table)
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn index_of(&self, e: &Elem) -> Option<usize> {
        self.elements.iter().position(|x| x == e)
    }

    #[inline]
    pub fn add(&self, i: usize, j: usize) -> usize {
        self.add[i * self.len() + j]
    }

    #[inline]
    pub fn mul(&self, i: usize, j: usize) -> usize {
        self.mul[i * self.len() + j]
    }

    #[inline]
    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.leq[i * self.len() + j]
    }

    /// Checks every commutative-semiring axiom over all element triples.
    pub fn verify_axioms(&self) -> Vec<AxiomViolation> {
        let n = self.len();
        let mut out = Vec::new();
        let el = |ids: &[usize]| ids.iter().map(|&i| self.elements[i].clone()).collect();
        for a in 0..n {
            if self.add(a, self.zero) != a {
                out.push(AxiomViolation {
                    axiom: "additive identity",
                    elements: el(&[a]),
                });
            }
            if self.mul(a, self.one) != a {
                out.push(AxiomViolation {
                    axiom: "multiplicative identity",
                    elements: el(&[a]),
                });
            }
            if self.mul(a, self.zero) != self.zero {
                out.push(AxiomViolation {
                    axiom: "absorption",
                    elements: el(&[a]),
                });
            }
            for b in 0..n {
                if self.add(a, b) != self.add(b, a) {
                    out.push(AxiomViolation {
                        axiom: "additive commutativity",
                        elements: el(&[a, b]),
                    });
                }
                if self.mul(a, b) != self.mul(b, a) {
                    out.push(AxiomViolation {
                        axiom: "multiplicative commutativity",
                        elements: el(&[a, b]),
                    });
                }
                for c in 0..n {
                    if self.add(self.add(a, b), c) != self.add(a, self.add(b, c)) {
                        out.push(AxiomViolation {
                            axiom: "additive associativity",
                            elements: el(&[a, b, c]),
                        });
                    }
                    if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                        out.push(AxiomViolation {
                            axiom: "multiplicative associativity",
                            elements: el(&[a, b, c]),
                        });
                    }
                    if self.mul(a, self.add(b, c)) != self.add(self.mul(a, b), self.mul(a, c)) {
                        out.push(AxiomViolation {
                            axiom: "distributivity",
                            elements: el(&[a, b, c]),
                        });
                    }
                }
            }
        }
        if self.zero == self.one && n > 1 {
            out.push(AxiomViolation {
                axiom: "distinct identities",
                elements: vec![],
            });
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s9(a: u8, b: u8) -> Elem {
        Elem::S9(a, b)
    }

    #[test]
    fn x_squared_is_two() {
        let x = SemiringId::S.x().unwrap();
        assert_eq!(mul(&x, &x).unwrap(), Elem::S(2, 0));
        let x9 = SemiringId::S9.x().unwrap();
        assert_eq!(mul(&x9, &x9).unwrap(), s9(2, 0));
    }

    #[test]
    fn s9_saturates() {
        assert_eq!(add(&s9(2, 0), &s9(1, 0)).unwrap(), s9(2, 0));
        assert_eq!(add(&s9(0, 2), &s9(0, 2)).unwrap(), s9(0, 2));
    }

    #[test]
    fn identity_laws() {
        for id in [
            SemiringId::Nat,
            SemiringId::S,
            SemiringId::S9,
            SemiringId::Rat,
        ] {
            for x in id.bounded_elements(3) {
                assert_eq!(add(&x, &id.zero()).unwrap(), x);
                assert_eq!(mul(&x, &id.one()).unwrap(), x);
            }
        }
    }

    #[test]
    fn mixed_operands_rejected() {
        assert!(matches!(
            add(&Elem::Nat(1), &s9(1, 0)),
            Err(Error::MixedSemirings(..))
        ));
    }

    #[test]
    fn indecomposability() {
        assert!(additively_indecomposable(&s9(0, 1), 1000).unwrap());
        assert!(!additively_indecomposable(&s9(2, 0), 1000).unwrap());
        assert!(additively_indecomposable(&Elem::Nat(1), 1000).unwrap());
        assert!(additively_indecomposable(&Elem::S(0, 1), 1000).unwrap());
        assert!(!additively_indecomposable(&Elem::Rat(Rational::new(1, 2)), 10).unwrap());
    }

    #[test]
    fn solve_mul_examples() {
        let x = s9(0, 1);
        assert!(solve_mul(&x, &s9(1, 0), 2, 100).unwrap().is_empty());
        assert!(solve_mul(&x, &s9(2, 0), 2, 100).unwrap().contains(&x));
        for y in SemiringId::S9.elements().unwrap() {
            assert_eq!(solve_mul(&s9(1, 0), &y, 2, 100).unwrap(), vec![y.clone()]);
        }
        // in S no r with Xr = 1, among components up to 6
        assert!(solve_mul(&Elem::S(0, 1), &Elem::S(1, 0), 6, 1000)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn s9_axioms_hold() {
        let t = SemiringTable::new(SemiringId::S9).unwrap();
        assert_eq!(t.len(), 9);
        assert!(t.verify_axioms().is_empty());
    }

    #[test]
    fn quotient_is_homomorphism_on_grid() {
        let grid = SemiringId::S.bounded_elements(6);
        for x in &grid {
            for y in &grid {
                let (qx, qy) = (saturate(x).unwrap(), saturate(y).unwrap());
                assert_eq!(
                    saturate(&add(x, y).unwrap()).unwrap(),
                    add(&qx, &qy).unwrap()
                );
                assert_eq!(
                    saturate(&mul(x, y).unwrap()).unwrap(),
                    mul(&qx, &qy).unwrap()
                );
            }
        }
    }

    #[test]
    fn literals_round_trip() {
        for id in [
            SemiringId::Nat,
            SemiringId::S,
            SemiringId::S9,
            SemiringId::Rat,
        ] {
            for x in id.bounded_elements(3) {
                assert_eq!(Elem::parse(id, &x.to_string()).unwrap(), x);
            }
        }
        assert_eq!(Elem::parse(SemiringId::S, "1+X").unwrap(), Elem::S(1, 1));
        assert_eq!(Elem::parse(SemiringId::S9, "3X").unwrap(), s9(0, 2));
        assert!(Elem::parse(SemiringId::Rat, "1/0").is_err());
    }
}

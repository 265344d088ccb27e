//! Partial evaluations: witnesses τ ∈ TTA with μ(τ) = t₀ and (Te)(τ) = t₁,
//! their composition, the induced relation on TA, and algebra-level checks.

pub mod dist;
pub(crate) mod weighted;

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::algebras::Algebra;
use crate::bar::{fillers_for_faces, Simplex};
use crate::error::{Error, Result};
use crate::monads::{eta_at, MonadId, MonadInstance, Status};
use crate::terms::{Arity, Atom, Bounds, NodeKind, Scalars, Term, Tree};
use weighted::WeightedSearch;

/// Upper limit on listed witnesses per query.
pub const LIST_LIMIT: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Witness {
    pub tau: Term,
    pub source: Term,
    pub target: Term,
}

impl Witness {
    /// Computes both faces of τ.
    pub fn new(alg: &Algebra, tau: Term) -> Result<Self> {
        let source = alg.monad.mu(&tau)?;
        let target = alg.evaluate_at(&tau)?;
        Ok(Witness {
            tau,
            source,
            target,
        })
    }

    pub fn parse(alg: &Algebra, text: &str) -> Result<Self> {
        Self::new(alg, Simplex::parse(alg, text, 1)?.term)
    }

    /// The degenerate witness s₀(t) = Tη(t).
    pub fn identity(alg: &Algebra, t: &Term) -> Result<Self> {
        Self::new(alg, eta_at(t, 1)?)
    }

    pub fn verify(&self, alg: &Algebra) -> bool {
        alg.monad.mu(&self.tau).map_or(false, |s| s == self.source)
            && alg
                .evaluate_at(&self.tau)
                .map_or(false, |t| t == self.target)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WitnessView {
    pub tau: String,
    pub source: String,
    pub target: String,
}

impl From<&Witness> for WitnessView {
    fn from(w: &Witness) -> Self {
        WitnessView {
            tau: w.tau.print(),
            source: w.source.print(),
            target: w.target.print(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct WitnessSet {
    pub witnesses: Vec<Witness>,
    /// True when the list provably contains every witness.
    pub exhaustive: bool,
    /// False when e(t₀) ≠ e(t₁); the list is then empty.
    pub common_evaluation: bool,
    pub note: String,
}

fn check_vertex(alg: &Algebra, t: &Term) -> Result<()> {
    if t.level() != 1 {
        return Err(Error::LevelMismatch {
            expected: 1,
            detail: format!("{t} has level {}", t.level()),
        });
    }
    alg.monad.validate(t)?;
    for a in t.leaves() {
        if !alg.contains(a) {
            return Err(Error::CarrierMismatch(a.to_string()));
        }
    }
    Ok(())
}

fn weighted_complete(alg: &Algebra) -> bool {
    matches!(alg.monad.kind(), NodeKind::Weighted(Scalars::Semiring(id)) if WeightedSearch::supported(*id))
        && !alg.monad.flavor.normalized
}

/// Every witness from t₀ to t₁ (up to [`LIST_LIMIT`]).
pub fn pe_witnesses(alg: &Algebra, t0: &Term, t1: &Term, bounds: &Bounds) -> Result<WitnessSet> {
    witnesses_up_to(alg, t0, t1, bounds, LIST_LIMIT)
}

fn witnesses_up_to(
    alg: &Algebra,
    t0: &Term,
    t1: &Term,
    bounds: &Bounds,
    limit: usize,
) -> Result<WitnessSet> {
    check_vertex(alg, t0)?;
    check_vertex(alg, t1)?;
    if alg.evaluate(t0)? != alg.evaluate(t1)? {
        return Ok(WitnessSet {
            witnesses: vec![],
            exhaustive: true,
            common_evaluation: false,
            note: "no common evaluation: the two terms evaluate differently".into(),
        });
    }
    if weighted_complete(alg) {
        let search = WeightedSearch::new(alg, t0, t1, bounds.max_candidates)?;
        let taus = if search.exists() {
            search.list(limit)?
        } else {
            vec![]
        };
        let complete = taus.len() < limit;
        let witnesses = taus
            .into_iter()
            .map(|t| Witness::new(alg, t))
            .collect::<Result<Vec<_>>>()?;
        return Ok(WitnessSet {
            witnesses,
            exhaustive: complete,
            common_evaluation: true,
            note: format!(
                "coefficient search over {} assignments with preorder pruning",
                search.space
            ),
        });
    }
    let faces = BTreeMap::from([
        (
            1,
            Simplex {
                n: 0,
                term: t0.clone(),
            },
        ),
        (
            0,
            Simplex {
                n: 0,
                term: t1.clone(),
            },
        ),
    ]);
    let found = fillers_for_faces(alg, 1, &faces, bounds)?;
    let mut witnesses: Vec<Witness> = found
        .simplices
        .into_iter()
        .map(|s| Witness::new(alg, s.term))
        .collect::<Result<_>>()?;
    witnesses.truncate(limit);
    Ok(WitnessSet {
        witnesses,
        exhaustive: found.exhaustive,
        common_evaluation: true,
        note: found.note,
    })
}

/// Some witness, if one exists.
pub fn find_witness(
    alg: &Algebra,
    t0: &Term,
    t1: &Term,
    bounds: &Bounds,
) -> Result<(Option<Witness>, bool)> {
    let set = witnesses_up_to(alg, t0, t1, bounds, 1)?;
    Ok((set.witnesses.into_iter().next(), set.exhaustive))
}

#[derive(Debug, Clone)]
pub struct Composition {
    /// Θ ∈ T³A with μΘ = τ₀₁ and T²e Θ = τ₁₂.
    pub theta: Term,
    /// (Tμ)(Θ).
    pub composite: Witness,
}

/// All composition strategies for a composable pair, with their composites.
pub fn compose_witnesses(
    alg: &Algebra,
    first: &Witness,
    second: &Witness,
    bounds: &Bounds,
) -> Result<(Vec<Composition>, bool)> {
    if first.target != second.source {
        return Err(Error::IncomposableWitnesses {
            first_target: first.target.print(),
            second_source: second.source.print(),
        });
    }
    let faces = BTreeMap::from([
        (
            2,
            Simplex {
                n: 1,
                term: first.tau.clone(),
            },
        ),
        (
            0,
            Simplex {
                n: 1,
                term: second.tau.clone(),
            },
        ),
    ]);
    let found = fillers_for_faces(alg, 2, &faces, bounds)?;
    let mut out = Vec::new();
    for s in found.simplices {
        let tau = alg.monad.mu_at(&s.term, 1)?;
        out.push(Composition {
            theta: s.term,
            composite: Witness::new(alg, tau)?,
        });
    }
    Ok((out, found.exhaustive))
}

#[derive(Debug, Clone)]
pub struct PERelation {
    pub vertices: Vec<Term>,
    /// (source, target) → one witness.
    pub edges: BTreeMap<(Term, Term), Witness>,
    pub exhaustive: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Chain {
    pub first: WitnessView,
    pub second: WitnessView,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelationReport {
    pub check: String,
    pub status: Status,
    pub vertices: usize,
    pub edges: usize,
    pub exhaustive: bool,
    pub transitive: bool,
    pub symmetric: bool,
    pub kernel_pair: bool,
    pub transitivity_failures: Vec<Chain>,
    pub symmetry_failures: Vec<(String, String)>,
}

/// Vertices are the bounded level-1 terms, closed under t ↦ η(e(t)).
pub fn pe_relation(alg: &Algebra, bounds: &Bounds) -> Result<PERelation> {
    let mut vs: BTreeSet<Term> = alg.level_terms(1, bounds)?.into_iter().collect();
    for t in vs.clone() {
        vs.insert(alg.monad.eta(&alg.monad.atom(alg.evaluate(&t)?))?);
    }
    let vertices: Vec<Term> = vs.into_iter().collect();
    let values: Vec<Atom> = vertices
        .iter()
        .map(|t| alg.evaluate(t))
        .collect::<Result<_>>()?;
    let mut edges = BTreeMap::new();
    let mut exhaustive = true;
    for (i, s) in vertices.iter().enumerate() {
        for (j, t) in vertices.iter().enumerate() {
            if values[i] != values[j] {
                continue;
            }
            let (w, complete) = find_witness(alg, s, t, bounds)?;
            exhaustive &= complete || w.is_some();
            if let Some(w) = w {
                edges.insert((s.clone(), t.clone()), w);
            }
        }
    }
    Ok(PERelation {
        vertices,
        edges,
        exhaustive,
    })
}

impl PERelation {
    pub fn related(&self, s: &Term, t: &Term) -> bool {
        self.edges.contains_key(&(s.clone(), t.clone()))
    }

    pub fn transitivity_failures(&self) -> Vec<(Witness, Witness)> {
        let mut by_source: BTreeMap<&Term, Vec<&Witness>> = BTreeMap::new();
        for ((s, _), w) in &self.edges {
            by_source.entry(s).or_default().push(w);
        }
        let mut out = Vec::new();
        for ((a, b), w1) in &self.edges {
            for w2 in by_source.get(b).into_iter().flatten() {
                if !self.related(a, &w2.target) {
                    out.push((w1.clone(), (*w2).clone()));
                }
            }
        }
        out
    }

    pub fn symmetry_failures(&self) -> Vec<(Term, Term)> {
        self.edges
            .keys()
            .filter(|(s, t)| !self.related(t, s))
            .cloned()
            .collect()
    }

    /// Whether the relation is exactly {(s,t) : e(s) = e(t)} on the vertices.
    pub fn equals_kernel_pair(&self, alg: &Algebra) -> Result<bool> {
        for s in &self.vertices {
            for t in &self.vertices {
                if (alg.evaluate(s)? == alg.evaluate(t)?) != self.related(s, t) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    pub fn report(&self, alg: &Algebra, check: &str, max_report: usize) -> Result<RelationReport> {
        let tf = self.transitivity_failures();
        let sf = self.symmetry_failures();
        let kernel_pair = self.equals_kernel_pair(alg)?;
        let (transitive, symmetric) = (tf.is_empty(), sf.is_empty());
        let ok = match check {
            "transitive" => transitive,
            "symmetric" => symmetric,
            "equivalence" => transitive && symmetric && kernel_pair,
            other => return Err(Error::Config(format!("unknown relation check `{other}`"))),
        };
        Ok(RelationReport {
            check: check.into(),
            status: Status::from_ok(ok),
            vertices: self.vertices.len(),
            edges: self.edges.len(),
            exhaustive: self.exhaustive,
            transitive,
            symmetric,
            kernel_pair,
            transitivity_failures: tf
                .iter()
                .take(max_report)
                .map(|(a, b)| Chain {
                    first: a.into(),
                    second: b.into(),
                })
                .collect(),
            symmetry_failures: sf
                .iter()
                .take(max_report)
                .map(|(s, t)| (s.print(), t.print()))
                .collect(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IndiscreteReport {
    pub check: String,
    pub status: Status,
    pub pairs: usize,
    /// Every pair has exactly one witness.
    pub unique_lifts: bool,
    pub exhaustive: bool,
    /// (μ side, Te side) pairs without a witness.
    pub missing: Vec<(String, String)>,
}

/// Weak-pullback property of the algebra square on bounded TA.
pub fn check_indiscrete(
    alg: &Algebra,
    bounds: &Bounds,
    max_report: usize,
) -> Result<IndiscreteReport> {
    let vertices = alg.level_terms(1, bounds)?;
    let values: Vec<Atom> = vertices
        .iter()
        .map(|t| alg.evaluate(t))
        .collect::<Result<_>>()?;
    let mut r = IndiscreteReport {
        check: "indiscrete".into(),
        status: Status::Pass,
        pairs: 0,
        unique_lifts: true,
        exhaustive: true,
        missing: vec![],
    };
    for (i, s) in vertices.iter().enumerate() {
        for (j, t) in vertices.iter().enumerate() {
            if values[i] != values[j] {
                continue;
            }
            r.pairs += 1;
            let set = witnesses_up_to(alg, s, t, bounds, 2)?;
            match set.witnesses.len() {
                0 => {
                    r.exhaustive &= set.exhaustive;
                    r.status = Status::Fail;
                    if r.missing.len() < max_report {
                        r.missing.push((s.print(), t.print()));
                    }
                }
                1 => {}
                _ => r.unique_lifts = false,
            }
        }
    }
    Ok(r)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PositivityReport {
    pub check: String,
    pub status: Status,
    pub reduction: String,
    pub exhaustive: bool,
    /// Terms π ≠ ηη(x) with μ(π) = η(x).
    pub witnesses: Vec<String>,
}

fn cartesian(m: &MonadInstance) -> bool {
    matches!(
        m.id,
        MonadId::Identity | MonadId::Monoid | MonadId::Semigroup | MonadId::MSet(_)
    )
}

/// Searches TT(X) for π ≠ ηη(x) with μ(π) = η(x), at X = 1 and, unless the
/// instance is cartesian, at X = {x, y}.
pub fn check_strict_positivity(
    m: &MonadInstance,
    bounds: &Bounds,
    max_report: usize,
) -> Result<PositivityReport> {
    let carriers: Vec<Vec<&str>> = if cartesian(m) {
        vec![vec!["x"]]
    } else {
        vec![vec!["x"], vec!["x", "y"]]
    };
    let reduction = if cartesian(m) {
        "cartesian instance: X = 1 suffices".to_string()
    } else {
        "checked at X = 1 and X = {x, y}".to_string()
    };
    let mut found = BTreeSet::new();
    for carrier in &carriers {
        let mut b = bounds.clone();
        b.carrier = carrier.iter().map(|&a| Atom::new(a)).collect();
        for x in &b.carrier {
            let ex = m.eta(&m.atom(x.clone()))?;
            let eex = m.eta(&ex)?;
            for p in m.enumerate(2, &b)? {
                if p != eex && m.mu(&p)? == ex {
                    found.insert(p.print());
                }
            }
        }
    }
    // nothing beyond the bounds can matter when the flattening pins every
    // block and blocks cannot be empty, or when terms are finite
    let exhaustive = match m.flavor.arity {
        Arity::Single => true,
        Arity::NonEmpty => !matches!(m.kind(), NodeKind::Weighted(_)),
        Arity::Any => !found.is_empty(),
    };
    Ok(PositivityReport {
        check: "strict_positivity".into(),
        status: Status::from_ok(found.is_empty()),
        reduction,
        exhaustive,
        witnesses: found.into_iter().take(max_report).collect(),
    })
}

/// τ + σ: the union of the outer layers.
pub fn combine(a: &Term, b: &Term) -> Result<Term> {
    let tree = match (a.tree(), b.tree()) {
        (Tree::Node(x), Tree::Node(y)) => Tree::Node(x.iter().chain(y).cloned().collect()),
        (Tree::Weighted(x), Tree::Weighted(y)) => {
            Tree::Weighted(x.iter().chain(y).cloned().collect())
        }
        _ => return Err(Error::MalformedTerm(format!("cannot add {a} and {b}"))),
    };
    Term::new(a.kind().clone(), a.level(), tree)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InternalityReport {
    pub check: String,
    pub status: Status,
    pub pairs: usize,
    pub failures: Vec<(String, String)>,
}

/// For sampled edges t₀→t₁ and u₀→u₁, the union of witnesses witnesses
/// t₀+u₀ → t₁+u₁.
pub fn check_internality_sample(
    alg: &Algebra,
    bounds: &Bounds,
    sample: usize,
    max_report: usize,
) -> Result<InternalityReport> {
    let additive = match alg.monad.kind() {
        NodeKind::Multiset | NodeKind::List => true,
        NodeKind::Weighted(Scalars::Semiring(_)) => !alg.monad.flavor.normalized,
        _ => false,
    } && alg.monad.flavor.arity != Arity::Single;
    if !additive {
        return Err(Error::UnsupportedInstance(format!(
            "{} has no term-level sum",
            alg.monad
        )));
    }
    let taus: Vec<Witness> = alg
        .level_terms(2, bounds)?
        .into_iter()
        .take(sample)
        .map(|t| Witness::new(alg, t))
        .collect::<Result<_>>()?;
    let mut r = InternalityReport {
        check: "internality".into(),
        status: Status::Pass,
        pairs: 0,
        failures: vec![],
    };
    for a in &taus {
        for b in &taus {
            r.pairs += 1;
            let ok = combine(&a.tau, &b.tau).and_then(|tau| {
                let w = Witness::new(alg, tau)?;
                Ok(w.source == combine(&a.source, &b.source)?
                    && w.target == combine(&a.target, &b.target)?)
            });
            if !matches!(ok, Ok(true)) {
                r.status = Status::Fail;
                if r.failures.len() < max_report {
                    r.failures.push((a.tau.print(), b.tau.print()));
                }
            }
        }
    }
    Ok(r)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PositiveIndiscreteReport {
    pub check: String,
    pub status: Status,
    pub hypotheses_hold: bool,
    pub evaluation_bijective: bool,
    pub relation_is_identity: bool,
    pub note: String,
}

/// If the monad is strictly positive and the algebra indiscrete, e is a
/// bijection and the relation is the identity; vacuous otherwise.
pub fn check_positive_indiscrete_consequence(
    alg: &Algebra,
    bounds: &Bounds,
) -> Result<PositiveIndiscreteReport> {
    let positive = check_strict_positivity(&alg.monad, bounds, 1)?.status == Status::Pass;
    let indiscrete = check_indiscrete(alg, bounds, 1)?.status == Status::Pass;
    let mut r = PositiveIndiscreteReport {
        check: "positive_indiscrete".into(),
        status: Status::Pass,
        hypotheses_hold: positive && indiscrete,
        evaluation_bijective: false,
        relation_is_identity: false,
        note: String::new(),
    };
    if !r.hypotheses_hold {
        r.note = format!("vacuous: strictly positive = {positive}, indiscrete = {indiscrete}");
        return Ok(r);
    }
    let vertices = alg.level_terms(1, bounds)?;
    let mut images = BTreeMap::new();
    for t in &vertices {
        images
            .entry(alg.evaluate(t)?)
            .or_insert_with(Vec::new)
            .push(t.clone());
    }
    let carrier: BTreeSet<Atom> = alg.carrier()?.into_iter().collect();
    r.evaluation_bijective =
        images.values().all(|v| v.len() == 1) && carrier.iter().all(|a| images.contains_key(a));
    let rel = pe_relation(alg, bounds)?;
    r.relation_is_identity = rel.edges.keys().all(|(s, t)| s == t);
    r.status = Status::from_ok(r.evaluation_bijective && r.relation_is_identity);
    r.note = format!("{} terms checked", vertices.len());
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monoid::MonoidTable;
    use crate::semirings::SemiringId;

    fn cm() -> MonadInstance {
        MonadInstance::commutative_monoid()
    }

    fn nat() -> Algebra {
        Algebra::naturals_add(&cm(), 32).unwrap()
    }

    fn t(s: &str) -> Term {
        cm().parse(s, 1).unwrap()
    }

    fn prints(ws: &WitnessSet) -> Vec<String> {
        ws.witnesses.iter().map(|w| w.tau.print()).collect()
    }

    #[test]
    fn witness_examples() {
        let a = nat();
        let b = Bounds::new(3, &[]);
        let ws = pe_witnesses(&a, &t("{3,4,5}"), &t("{7,5}"), &b).unwrap();
        assert!(ws.exhaustive);
        assert!(prints(&ws).contains(&"{{3,4},{5}}".to_string()));
        let ws = pe_witnesses(&a, &t("{3}"), &t("{3}"), &b).unwrap();
        assert!(prints(&ws).contains(&"{{3}}".to_string()));
        let ws = pe_witnesses(&a, &t("{2,2}"), &t("{4}"), &b).unwrap();
        assert_eq!(prints(&ws), ["{{2,2}}"]);
        let ws = pe_witnesses(&a, &t("{2,2}"), &t("{5}"), &b).unwrap();
        assert!(!ws.common_evaluation && ws.witnesses.is_empty());
        for w in pe_witnesses(&a, &t("{1,1,2}"), &t("{2,2}"), &b)
            .unwrap()
            .witnesses
        {
            assert!(w.verify(&a));
        }
    }

    #[test]
    fn composing() {
        let a = nat();
        let b = Bounds::new(3, &[]);
        let w1 = Witness::parse(&a, "{{2,3},{4}}").unwrap();
        let w2 = Witness::parse(&a, "{{5,4}}").unwrap();
        let (cs, exhaustive) = compose_witnesses(&a, &w1, &w2, &b).unwrap();
        assert!(exhaustive);
        let theta = cm().parse("{{{2,3},{4}}}", 3).unwrap();
        let c = cs.iter().find(|c| c.theta == theta).expect("Θ");
        assert_eq!(c.composite.tau.print(), "{{2,3,4}}");
        assert!(compose_witnesses(&a, &w2, &w1, &b).is_err());

        let alpha = Witness::parse(&a, "{{2,2},{3,3},{3,1}}").unwrap();
        let beta = Witness::parse(&a, "{{4,6},{4}}").unwrap();
        let (cs, _) = compose_witnesses(&a, &alpha, &beta, &b).unwrap();
        let composites: BTreeSet<String> = cs.iter().map(|c| c.composite.tau.print()).collect();
        assert!(composites.len() >= 2);

        let v = Witness::identity(&a, &t("{1,2}")).unwrap();
        let (cs, _) = compose_witnesses(&a, &v, &v, &b).unwrap();
        let dd = eta_at(&eta_at(&t("{1,2}"), 1).unwrap(), 1).unwrap();
        assert!(cs.iter().any(|c| c.theta == dd));
    }

    #[test]
    fn terminal_commutative_monoid_relation() {
        let a = Algebra::terminal(&cm());
        let rel = pe_relation(&a, &Bounds::new(2, &[])).unwrap();
        let (e, s) = (t("{}"), t("{*}"));
        assert!(rel.related(&e, &s));
        assert!(!rel.related(&s, &e));
        let r = rel.report(&a, "transitive", 4).unwrap();
        assert!(r.transitive && !r.symmetric);
        let ind = check_indiscrete(&a, &Bounds::new(2, &[]), 16).unwrap();
        assert_eq!(ind.status, Status::Fail);
        assert!(ind.missing.contains(&("{*}".to_string(), "{}".to_string())));
    }

    #[test]
    fn group_action_is_an_equivalence() {
        let m = MonadInstance::m_set(MonoidTable::cyclic(2));
        let a = Algebra::g_set(&m).unwrap();
        let rel = pe_relation(&a, &Bounds::new(1, &[])).unwrap();
        let r = rel.report(&a, "equivalence", 4).unwrap();
        assert_eq!(r.status, Status::Pass, "{r:?}");
        assert!(r.kernel_pair);
        let ind = check_indiscrete(&a, &Bounds::new(1, &[]), 16).unwrap();
        assert_eq!(ind.status, Status::Pass);
        assert!(ind.unique_lifts && ind.exhaustive);
    }

    #[test]
    fn s9_terminal_is_not_transitive() {
        let m = MonadInstance::semimodule(SemiringId::S9);
        let a = Algebra::terminal(&m);
        let rel = pe_relation(&a, &Bounds::new(1, &[]).with_coeff_bound(2)).unwrap();
        let r = rel.report(&a, "transitive", 100).unwrap();
        assert_eq!(r.status, Status::Fail);
        assert!(r.exhaustive);
        assert!(r
            .transitivity_failures
            .iter()
            .any(|c| c.first.source == "{1:*}" && c.second.target == "{X:*}"));
    }

    #[test]
    fn positivity() {
        let b = Bounds::new(2, &[]);
        let r = check_strict_positivity(&cm(), &b, 8).unwrap();
        assert_eq!(r.status, Status::Fail);
        assert!(r.witnesses.contains(&"{{x},{}}".to_string()), "{r:?}");
        let r = check_strict_positivity(&MonadInstance::semigroup(), &b, 8).unwrap();
        assert_eq!(r.status, Status::Pass);
        assert!(r.exhaustive);
        let r = check_strict_positivity(
            &MonadInstance::distribution(),
            &b.clone().with_coeff_bound(4),
            8,
        )
        .unwrap();
        assert_eq!(r.status, Status::Pass);
        let r = check_strict_positivity(
            &MonadInstance::m_set(MonoidTable::cyclic(2)),
            &Bounds::new(1, &[]),
            8,
        )
        .unwrap();
        assert_eq!(r.status, Status::Fail);
    }

    #[test]
    fn internality() {
        let a = nat();
        let x = Witness::parse(&a, "{{3,4},{5}}").unwrap();
        let y = Witness::parse(&a, "{{2}}").unwrap();
        let z = Witness::new(&a, combine(&x.tau, &y.tau).unwrap()).unwrap();
        assert_eq!(z.source, t("{3,4,5,2}"));
        assert_eq!(z.target, t("{7,5,2}"));
        let empty = Witness::parse(&a, "{}").unwrap();
        assert_eq!(combine(&x.tau, &empty.tau).unwrap(), x.tau);
        let r = check_internality_sample(
            &Algebra::cyclic(&cm(), 3).unwrap(),
            &Bounds::new(2, &[]).with_max_leaves(3),
            40,
            4,
        )
        .unwrap();
        assert_eq!(r.status, Status::Pass);
        assert!(r.pairs > 100);
    }

    #[test]
    fn positive_indiscrete() {
        let id = MonadInstance::identity();
        let r = check_positive_indiscrete_consequence(
            &Algebra::cyclic(&id, 3).unwrap(),
            &Bounds::new(1, &[]),
        )
        .unwrap();
        assert!(r.hypotheses_hold && r.evaluation_bijective && r.relation_is_identity);
        let m = MonadInstance::m_set(MonoidTable::trivial());
        let a = Algebra::trivial_action(&m, &["a", "b", "c"]).unwrap();
        let r = check_positive_indiscrete_consequence(&a, &Bounds::new(1, &[])).unwrap();
        assert!(r.hypotheses_hold && r.evaluation_bijective, "{r:?}");
        let sg = MonadInstance::semigroup();
        let r = check_positive_indiscrete_consequence(
            &Algebra::cyclic(&sg, 2).unwrap(),
            &Bounds::new(2, &[]).with_max_leaves(3),
        )
        .unwrap();
        assert!(!r.hypotheses_hold);
        assert_eq!(r.status, Status::Pass);
    }
}

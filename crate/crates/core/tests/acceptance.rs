//! One line per acceptance criterion; exits non-zero if any fails.
//! Run with `cargo test -p pevbar --test acceptance`.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use pevbar::algebras::Algebra;
use pevbar::bar::{check_simplicial_identities, segal_check, Simplex};
use pevbar::counterexamples::{
    nonuniqueness_fillers, verify_nontransitivity, verify_nonuniqueness, verify_unfillable_horns,
    SearchOptions, NONUNIQUENESS_ALPHA, NONUNIQUENESS_BETA,
};
use pevbar::monads::{check_monad_laws, MonadInstance, Status};
use pevbar::monoid::MonoidTable;
use pevbar::pev::dist::{
    conditional_product, from_weights, marginals, pushforward, split_pair, weights,
};
use pevbar::pev::{check_indiscrete, pe_relation};
use pevbar::semirings::Rational;
use pevbar::squares::{
    check_inner_span_complete, check_split, check_stiff, classify_square, FiniteSquare, Verdict,
};
use pevbar::terms::{Atom, Bounds};

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t <= limit, || format!("took {t:.1?}, limit {limit:?}"))
}

fn e<E: std::fmt::Display>(x: E) -> String {
    x.to_string()
}

fn c1_nontransitivity() -> Outcome {
    let start = Instant::now();
    let r = verify_nontransitivity(SearchOptions {
        jobs: 8,
        prune: false,
    })
    .map_err(e)?;
    within(start, Duration::from_secs(120))?;
    if let Some(c) = r.claims.iter().find(|c| c.status != Status::Pass) {
        return Err(format!("{}: {:?}", c.description, c.evidence));
    }
    Ok(format!(
        "{} claims, unpruned search in {:.1?}",
        r.claims.len(),
        start.elapsed()
    ))
}

fn c2_nonuniqueness() -> Outcome {
    let start = Instant::now();
    let r = verify_nonuniqueness().map_err(e)?;
    ensure(r.passed(), || format!("{:?}", r.claims))?;
    let got: Vec<String> = nonuniqueness_fillers(6)
        .map_err(e)?
        .iter()
        .map(Simplex::print)
        .collect();
    let golden = include_str!("golden/nonuniqueness.txt");
    let want: Vec<&str> = golden.lines().filter(|l| !l.is_empty()).collect();
    ensure(got == want, || {
        format!("fillers {got:?} differ from golden {want:?}")
    })?;
    within(start, Duration::from_secs(5))?;
    Ok(format!("{} fillers match the golden file", got.len()))
}

fn c3_horns() -> Outcome {
    let start = Instant::now();
    let r = verify_unfillable_horns().map_err(e)?;
    ensure(r.passed(), || {
        format!("{:?}", r.claims.iter().find(|c| c.status != Status::Pass))
    })?;
    within(start, Duration::from_secs(30))?;
    Ok(format!("{} claims", r.claims.len()))
}

fn c4_laws() -> Outcome {
    let start = Instant::now();
    let (mut monads, mut algebras, mut checks) = (0, 0, 0usize);
    for (m, algs) in common::bundled() {
        for (level, b) in common::monad_law_scales(&m) {
            for r in check_monad_laws(&m, &b, level).map_err(|x| format!("{}: {x}", m.id))? {
                ensure(r.passed(), || {
                    format!(
                        "{} {} level {}: {:?}",
                        m.id,
                        r.check,
                        r.level,
                        r.violations.first()
                    )
                })?;
                checks += r.checked;
            }
        }
        monads += 1;
        for a in algs {
            let laws = a
                .check_algebra_laws(&common::algebra_law_bounds(&m, &a))
                .map_err(|x| format!("{a}: {x}"))?;
            let ids = check_simplicial_identities(&a, 2, &common::simplicial_bounds(&m, &a))
                .map_err(|x| format!("{a}: {x}"))?;
            for r in laws.iter().chain(&ids) {
                ensure(r.passed(), || {
                    format!(
                        "{} on {a} level {}: {:?}",
                        r.check,
                        r.level,
                        r.violations.first()
                    )
                })?;
                checks += r.checked;
            }
            algebras += 1;
        }
    }
    within(start, Duration::from_secs(60))?;
    Ok(format!(
        "{monads} monads, {algebras} algebras, {checks} checks"
    ))
}

fn c5_squares() -> Outcome {
    let cm = MonadInstance::commutative_monoid();
    let cyc2 = Algebra::cyclic(&cm, 2).map_err(e)?;
    let b = Bounds::new(2, &[]).with_max_leaves(2);
    let r = check_inner_span_complete(&cyc2, 3, &b, 4).map_err(e)?;
    ensure(r.passed(), || format!("cmon isc: {:?}", r.first_failure()))?;
    let isc = r.squares.len();
    let d = MonadInstance::distribution();
    let max = Algebra::max_semilattice(&d, &["a", "b"]).map_err(e)?;
    let r = check_inner_span_complete(&max, 2, &Bounds::new(2, &[]).with_coeff_bound(3), 4)
        .map_err(e)?;
    ensure(r.passed() && r.squares.iter().all(|s| s.pairs > 0), || {
        format!("distribution isc: {:?}", r.first_failure())
    })?;
    let r = check_stiff(&cyc2, 2, &b, 4).map_err(e)?;
    ensure(r.passed(), || {
        format!("cmon stiff: {:?}", r.first_failure())
    })?;
    let b3 = Bounds::new(2, &[]).with_max_leaves(3);
    let cs = Algebra::cyclic(&MonadInstance::commutative_semigroup(), 2).map_err(e)?;
    let r = check_split(&cs, 2, &b3, 4).map_err(e)?;
    ensure(r.passed(), || {
        format!("csgrp split: {:?}", r.first_failure())
    })?;
    let r = check_split(&cyc2, 1, &b3, 4).map_err(e)?;
    let bad = r.first_failure().ok_or("cmon is split")?;
    ensure(
        bad.shape == "split" && bad.missing.iter().any(|(_, c)| c.contains("{}")),
        || format!("unexpected cmon split failure {bad:?}"),
    )?;
    Ok(format!(
        "{isc} inner squares; cmon not split, e.g. {:?}",
        bad.missing[0]
    ))
}

fn c6_segal() -> Outcome {
    let t = Algebra::terminal(&MonadInstance::monoid());
    let r = segal_check(&t, 2, &Bounds::new(3, &[]).with_max_leaves(3), &[], 4).map_err(e)?;
    ensure(r.status == Status::Pass && r.exhaustive, || {
        format!("monoid terminal: {r:?}")
    })?;
    let z2 = MonadInstance::m_set(MonoidTable::cyclic(2));
    let g = Algebra::g_set(&z2).map_err(e)?;
    let r = segal_check(&g, 2, &Bounds::new(1, &[]), &[], 4).map_err(e)?;
    ensure(r.status == Status::Pass, || format!("Z2 action: {r:?}"))?;
    let nat = Algebra::naturals_add(&MonadInstance::commutative_monoid(), 6).map_err(e)?;
    let alpha = Simplex::parse(&nat, NONUNIQUENESS_ALPHA, 1).map_err(e)?;
    let beta = Simplex::parse(&nat, NONUNIQUENESS_BETA, 1).map_err(e)?;
    let b = Bounds::new(6, &["0", "1"]).with_max_leaves(2);
    let (pa, pb) = (alpha.print(), beta.print());
    let r = segal_check(&nat, 2, &b, &[(alpha, beta)], 4).map_err(e)?;
    ensure(!r.injective && r.status == Status::Fail, || {
        format!("naturals: {r:?}")
    })?;
    let hit = r
        .injectivity_failures
        .iter()
        .any(|s| s.first == pa && s.second == pb && s.fillers.len() >= 2);
    ensure(hit, || {
        format!(
            "(α, β) not among injectivity failures {:?}",
            r.injectivity_failures
        )
    })?;
    Ok("lists and Z2 pass; naturals fail injectivity at (α, β)".into())
}

fn atom(s: String) -> Atom {
    Atom::new(s)
}

fn random_weights(
    rng: &mut ChaCha8Rng,
    keys: &[Atom],
    total: Rational,
) -> BTreeMap<Atom, Rational> {
    let raw: Vec<i128> = keys.iter().map(|_| rng.gen_range(1..=5)).collect();
    let sum: i128 = raw.iter().sum();
    keys.iter()
        .zip(raw)
        .map(|(k, w)| (k.clone(), total * Rational::new(w, sum)))
        .collect()
}

fn c7_conditional_products() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let one = Rational::from_integer(1);
    for round in 0..200 {
        let ne = rng.gen_range(1..=3);
        let es: Vec<Atom> = (0..ne).map(|i| atom(format!("e{i}"))).collect();
        // Every fibre is non-empty, so r can be split over both sides.
        let side = |rng: &mut ChaCha8Rng, p: &str| -> BTreeMap<Atom, Atom> {
            let extra = rng.gen_range(0..=3);
            (0..ne + extra)
                .map(|i| {
                    (
                        atom(format!("{p}{i}")),
                        es[if i < ne { i } else { rng.gen_range(0..ne) }].clone(),
                    )
                })
                .collect()
        };
        let (m, n) = (side(&mut rng, "b"), side(&mut rng, "c"));
        let r = random_weights(&mut rng, &es, one);
        let mut pw = BTreeMap::new();
        let mut qw = BTreeMap::new();
        for (ev, re) in &r {
            let fb: Vec<Atom> = m
                .iter()
                .filter(|(_, x)| *x == ev)
                .map(|(b, _)| b.clone())
                .collect();
            let fc: Vec<Atom> = n
                .iter()
                .filter(|(_, x)| *x == ev)
                .map(|(c, _)| c.clone())
                .collect();
            pw.extend(random_weights(&mut rng, &fb, *re));
            qw.extend(random_weights(&mut rng, &fc, *re));
        }
        let (p, q) = (from_weights(&pw).map_err(e)?, from_weights(&qw).map_err(e)?);
        let s = conditional_product(&p, &q, &m, &n).map_err(e)?;
        let sw = weights(&s).map_err(e)?;
        let total: Rational = sw.values().sum();
        ensure(total == one, || format!("round {round}: mass {total}"))?;
        for (k, w) in &sw {
            let (b, c) =
                split_pair(k).ok_or_else(|| format!("round {round}: {k} is not a pair"))?;
            ensure(m[&b] == n[&c] && *w == pw[&b] * qw[&c] / r[&m[&b]], || {
                format!("round {round}: bad weight at {k}")
            })?;
        }
        let (l, rt) = marginals(&s).map_err(e)?;
        ensure(l == p && rt == q, || {
            format!("round {round}: marginals {l} {rt} vs {p} {q}")
        })?;
        ensure(
            pushforward(&p, &m).map_err(e)? == from_weights(&r).map_err(e)?,
            || format!("round {round}: base"),
        )?;
    }
    Ok("200 random spans over |E| ≤ 3".into())
}

/// Independent brute force: enumerate B × C and count preimages in A.
fn oracle(sq: &FiniteSquare) -> (usize, bool, bool) {
    let (mut pairs, mut missing, mut ambiguous) = (0, false, false);
    for b in &sq.b {
        for c in &sq.c {
            if sq.m[b] != sq.n[c] {
                continue;
            }
            pairs += 1;
            let k =
                sq.a.iter()
                    .filter(|a| &sq.f[*a] == b && &sq.g[*a] == c)
                    .count();
            missing |= k == 0;
            ambiguous |= k > 1;
        }
    }
    (pairs, missing, ambiguous)
}

fn random_square(rng: &mut ChaCha8Rng) -> FiniteSquare {
    let names = |p: &str, k: usize| -> Vec<String> { (0..k).map(|i| format!("{p}{i}")).collect() };
    let d = names("d", rng.gen_range(1..=3));
    let b = names("b", rng.gen_range(1..=4));
    let c = names("c", rng.gen_range(1..=4));
    let pick = |xs: &[String], rng: &mut ChaCha8Rng| xs[rng.gen_range(0..xs.len())].clone();
    let m: BTreeMap<String, String> = b.iter().map(|x| (x.clone(), pick(&d, rng))).collect();
    let n: BTreeMap<String, String> = c.iter().map(|x| (x.clone(), pick(&d, rng))).collect();
    let compatible: Vec<(String, String)> = b
        .iter()
        .flat_map(|x| {
            c.iter()
                .filter(|y| m[x] == n[*y])
                .map(move |y| (x.clone(), y.clone()))
        })
        .collect();
    let (mut a, mut f, mut g) = (vec![], BTreeMap::new(), BTreeMap::new());
    if !compatible.is_empty() {
        for i in 0..rng.gen_range(0..=compatible.len() + 2) {
            let (x, y) = compatible[rng.gen_range(0..compatible.len())].clone();
            let name = format!("a{i}");
            f.insert(name.clone(), x);
            g.insert(name.clone(), y);
            a.push(name);
        }
    }
    FiniteSquare {
        a,
        b,
        c,
        d,
        f,
        g,
        m,
        n,
    }
}

fn c8_random_squares() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut seen = BTreeSet::new();
    for round in 0..1000 {
        let sq = random_square(&mut rng);
        let r = classify_square(&sq, 4).map_err(e)?;
        let (pairs, missing, ambiguous) = oracle(&sq);
        let want = match (missing, ambiguous) {
            (true, _) => Verdict::NotWeak,
            (false, true) => Verdict::WeakNotStrong,
            _ => Verdict::Strong,
        };
        ensure(r.pairs == pairs && r.verdict == want, || {
            format!("round {round}: {r:?} vs oracle {want} on {sq:?}")
        })?;
        let inj =
            |h: &BTreeMap<String, String>| h.values().collect::<BTreeSet<_>>().len() == h.len();
        let monic = inj(&sq.f) || inj(&sq.g);
        ensure(r.monic_leg == monic, || format!("round {round}: monic leg"))?;
        ensure(
            !(monic && want.is_weak()) || want == Verdict::Strong,
            || format!("round {round}: mono lemma fails"),
        )?;
        ensure(r.mono_lemma_holds, || {
            format!("round {round}: reported mono lemma failure")
        })?;
        seen.insert(want);
    }
    ensure(seen.len() == 3, || format!("only saw verdicts {seen:?}"))?;
    Ok("1000 random squares agree with brute force".into())
}

fn c9_indiscrete() -> Outcome {
    for k in [2, 3] {
        let g = Algebra::g_set(&MonadInstance::m_set(MonoidTable::cyclic(k))).map_err(e)?;
        let r = check_indiscrete(&g, &Bounds::new(1, &[]), 4).map_err(e)?;
        ensure(
            r.status == Status::Pass && r.unique_lifts && r.pairs > 0,
            || format!("Z{k}: {r:?}"),
        )?;
    }
    let t = Algebra::terminal(&MonadInstance::commutative_monoid());
    let r = check_indiscrete(&t, &Bounds::new(2, &[]), 16).map_err(e)?;
    let want = ("{*}".to_string(), "{}".to_string());
    ensure(
        r.status == Status::Fail && r.missing.contains(&want),
        || format!("cmon terminal: {r:?}"),
    )?;
    let mut checked = 0;
    for (m, algs) in common::bundled() {
        for a in algs {
            let b = common::simplicial_bounds(&m, &a);
            let ind = check_indiscrete(&a, &b, 1).map_err(|x| format!("{a}: {x}"))?;
            let rel = pe_relation(&a, &b).map_err(|x| format!("{a}: {x}"))?;
            if !(ind.exhaustive && rel.exhaustive) {
                continue;
            }
            let eq = rel.report(&a, "equivalence", 1).map_err(e)?.status == Status::Pass;
            ensure(eq == (ind.status == Status::Pass), || {
                format!(
                    "{} {a}: equivalence {eq}, indiscrete {:?}",
                    m.id, ind.status
                )
            })?;
            checked += 1;
        }
    }
    Ok(format!("Z2, Z3 unique lifts; cmon terminal misses ({{*}}, {{}}); biconditional on {checked} algebras"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        (
            "terminal S9 algebra: non-transitive witnesses",
            c1_nontransitivity,
        ),
        ("naturals: non-unique 2-fillers", c2_nonuniqueness),
        ("naturals: unfillable 3-horns", c3_horns),
        ("monad, algebra and simplicial laws", c4_laws),
        ("inner span completeness, stiffness, splitness", c5_squares),
        ("segal maps", c6_segal),
        ("conditional products", c7_conditional_products),
        ("random squares and the mono lemma", c8_random_squares),
        ("indiscreteness", c9_indiscrete),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (tag, detail) = match run() {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!(
            "criterion {}: {tag} {name} [{:.1?}] {detail}",
            i + 1,
            start.elapsed()
        );
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}

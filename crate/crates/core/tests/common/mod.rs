#![allow(dead_code)]

use pevbar::algebras::Algebra;
use pevbar::monads::MonadInstance;
use pevbar::monoid::MonoidTable;
use pevbar::semirings::SemiringId;
use pevbar::terms::Bounds;

/// Every bundled monad with the algebras shipped for it.
pub fn bundled() -> Vec<(MonadInstance, Vec<Algebra>)> {
    let mut out = Vec::new();
    let id = MonadInstance::identity();
    out.push((
        id.clone(),
        vec![Algebra::terminal(&id), Algebra::cyclic(&id, 3).unwrap()],
    ));
    for (m, base) in [
        (MonadInstance::commutative_monoid(), &["a", "b"][..]),
        (MonadInstance::monoid(), &["a"][..]),
    ] {
        let algs = vec![
            Algebra::terminal(&m),
            Algebra::cyclic(&m, 2).unwrap(),
            Algebra::cyclic(&m, 3).unwrap(),
            Algebra::naturals_add(&m, 6).unwrap(),
            Algebra::free(&m, Bounds::new(2, base)),
        ];
        out.push((m, algs));
    }
    for m in [
        MonadInstance::semigroup(),
        MonadInstance::commutative_semigroup(),
    ] {
        let algs = vec![
            Algebra::terminal(&m),
            Algebra::cyclic(&m, 2).unwrap(),
            Algebra::max_semilattice(&m, &["a", "b", "c"]).unwrap(),
        ];
        out.push((m, algs));
    }
    let d = MonadInstance::distribution();
    out.push((
        d.clone(),
        vec![
            Algebra::terminal(&d),
            Algebra::max_semilattice(&d, &["a", "b"]).unwrap(),
        ],
    ));
    for s in [SemiringId::Nat, SemiringId::S, SemiringId::S9] {
        let m = MonadInstance::semimodule(s);
        let mut algs = vec![Algebra::terminal(&m), Algebra::scalars(&m, 2).unwrap()];
        if s == SemiringId::Nat {
            algs.push(Algebra::naturals_add(&m, 6).unwrap());
        }
        out.push((m, algs));
    }
    for k in [2, 3] {
        let m = MonadInstance::m_set(MonoidTable::cyclic(k));
        let algs = vec![
            Algebra::g_set(&m).unwrap(),
            Algebra::trivial_action(&m, &["a", "b"]).unwrap(),
        ];
        out.push((m, algs));
    }
    out
}

/// A small carrier for free enumeration of monad terms.
pub fn carrier(m: &MonadInstance) -> Vec<&'static str> {
    match m.kind() {
        _ if matches!(m.id, pevbar::monads::MonadId::Distribution) => vec!["a", "b"],
        _ => vec!["a", "b", "c"],
    }
}

fn heavy(m: &MonadInstance) -> bool {
    matches!(m.id, pevbar::monads::MonadId::Semimodule(_))
}

/// (level, bounds) pairs the monad laws are checked at.
pub fn monad_law_scales(m: &MonadInstance) -> Vec<(usize, Bounds)> {
    let c = carrier(m);
    if heavy(m) {
        // Leafless children escape the leaf cap, so level 3 stays tiny.
        let level3 = if matches!(m.id, pevbar::monads::MonadId::Semimodule(SemiringId::S9)) {
            Bounds::new(1, &c[..2]).with_max_leaves(2)
        } else {
            Bounds::new(2, &c[..1])
                .with_coeff_bound(1)
                .with_max_leaves(2)
        };
        return vec![
            (
                2,
                Bounds::new(2, &c[..2])
                    .with_coeff_bound(2)
                    .with_max_leaves(3),
            ),
            (3, level3),
        ];
    }
    vec![
        (2, Bounds::new(3, &c).with_coeff_bound(2)),
        (3, Bounds::new(2, &c[..2]).with_coeff_bound(2)),
    ]
}

/// Carrier subset used for algebra checks: empty means the whole carrier.
fn algebra_carrier(m: &MonadInstance, a: &Algebra) -> Vec<String> {
    if !heavy(m) {
        return vec![];
    }
    let c = a.carrier().expect("finite carrier");
    c.iter().take(2).map(|x| x.to_string()).collect()
}

/// Bounds for the algebra laws.
pub fn algebra_law_bounds(m: &MonadInstance, a: &Algebra) -> Bounds {
    let width = if heavy(m) { 2 } else { 3 };
    let c = algebra_carrier(m, a);
    let c: Vec<&str> = c.iter().map(String::as_str).collect();
    let coeff = if heavy(m) { 1 } else { 2 };
    Bounds::new(width, &c)
        .with_coeff_bound(coeff)
        .with_max_leaves(3)
}

/// Bounds for the simplicial identities up to level 2.
pub fn simplicial_bounds(m: &MonadInstance, a: &Algebra) -> Bounds {
    let c = algebra_carrier(m, a);
    let c: Vec<&str> = c.iter().map(String::as_str).collect();
    match &m.id {
        pevbar::monads::MonadId::Semimodule(SemiringId::S9) => {
            Bounds::new(1, &c).with_max_leaves(3)
        }
        _ if heavy(m) => Bounds::new(2, &c).with_coeff_bound(1).with_max_leaves(2),
        _ => Bounds::new(2, &c).with_coeff_bound(2).with_max_leaves(3),
    }
}

use pevbar::algebras::Algebra;
use pevbar::monads::{MonadInstance, Status};
use pevbar::monoid::MonoidTable;
use pevbar::pev::{compose_witnesses, find_witness, pe_relation, pe_witnesses, Witness};
use pevbar::terms::Bounds;

fn nat() -> Algebra {
    Algebra::naturals_add(&MonadInstance::commutative_monoid(), 12).unwrap()
}

#[test]
fn a_witness_carries_its_source_to_its_target() {
    let a = nat();
    let w = Witness::parse(&a, "{{1,2},{3}}").unwrap();
    assert_eq!(w.source.print(), "{1,2,3}");
    assert_eq!(w.target.print(), "{3,3}");
    assert!(w.verify(&a));
}

#[test]
fn witness_listing_is_complete_for_small_terms() {
    let a = nat();
    let m = &a.monad;
    let s = m.parse("{1,1,2}", 1).unwrap();
    let t = m.parse("{2,2}", 1).unwrap();
    let set = pe_witnesses(&a, &s, &t, &Bounds::new(4, &[])).unwrap();
    assert!(set.exhaustive);
    let taus: Vec<String> = set.witnesses.iter().map(|w| w.tau.print()).collect();
    assert_eq!(taus, vec!["{{1,1},{2}}"]);
    let (none, complete) = find_witness(&a, &t, &s, &Bounds::new(4, &[])).unwrap();
    assert!(none.is_none() && complete);
}

#[test]
fn witnesses_compose_through_a_two_simplex() {
    let a = nat();
    let x = Witness::parse(&a, "{{1,1},{2}}").unwrap();
    let y = Witness::parse(&a, "{{2,2}}").unwrap();
    let (comps, exhaustive) = compose_witnesses(&a, &x, &y, &Bounds::new(4, &[])).unwrap();
    assert!(exhaustive && !comps.is_empty());
}

#[test]
fn the_relation_on_a_group_action_is_its_kernel_pair() {
    let g = Algebra::g_set(&MonadInstance::m_set(MonoidTable::cyclic(3))).unwrap();
    let rel = pe_relation(&g, &Bounds::new(1, &[])).unwrap();
    let r = rel.report(&g, "equivalence", 4).unwrap();
    assert_eq!(r.status, Status::Pass);
    assert!(r.kernel_pair && r.exhaustive);
}

#[test]
fn the_relation_on_a_point_is_not_symmetric() {
    let t = Algebra::terminal(&MonadInstance::commutative_monoid());
    let rel = pe_relation(&t, &Bounds::new(2, &[])).unwrap();
    let r = rel.report(&t, "symmetric", 4).unwrap();
    assert_eq!(r.status, Status::Fail);
    assert!(r
        .symmetry_failures
        .iter()
        .any(|(s, t)| s == "{}" || t == "{}"));
}

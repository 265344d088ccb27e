mod common;

use std::collections::BTreeMap;

use pevbar::algebras::Algebra;
use pevbar::bar::{degeneracy, face, fillers_for_faces, simplices, Simplex};
use pevbar::monads::MonadInstance;
use pevbar::terms::Bounds;

fn nat() -> Algebra {
    Algebra::naturals_add(&MonadInstance::commutative_monoid(), 12).unwrap()
}

#[test]
fn faces_of_an_edge() {
    let a = nat();
    let e = Simplex::parse(&a, "{{3,4},{5}}", 1).unwrap();
    assert_eq!(face(&a, &e, 0).unwrap().print(), "{5,7}");
    assert_eq!(face(&a, &e, 1).unwrap().print(), "{3,4,5}");
}

#[test]
fn vertex_faces_evaluate() {
    let a = nat();
    let v = Simplex::parse(&a, "{3,4}", 0).unwrap();
    assert_eq!(a.evaluate(&v.term).unwrap().as_str(), "7");
    assert!(face(&a, &v, 0).is_err());
}

#[test]
fn degenerate_simplices_fill_their_own_horns() {
    let a = Algebra::cyclic(&MonadInstance::commutative_monoid(), 2).unwrap();
    let b = Bounds::new(2, &[]).with_max_leaves(3);
    for v in simplices(&a, 1, &b).unwrap() {
        let s = degeneracy(&a, &v, 0).unwrap();
        let faces = BTreeMap::from([(2, face(&a, &s, 2).unwrap()), (0, face(&a, &s, 0).unwrap())]);
        let found = fillers_for_faces(&a, 2, &faces, &Bounds::new(4, &[])).unwrap();
        assert!(found.simplices.contains(&s), "{}", s.print());
    }
}

#[test]
fn out_of_range_indices_are_errors() {
    let a = nat();
    let e = Simplex::parse(&a, "{{1}}", 1).unwrap();
    assert!(face(&a, &e, 2).is_err());
    assert!(degeneracy(&a, &e, 2).is_err());
}

mod common;

use pevbar::monads::MonadInstance;
use pevbar::semirings::SemiringId;
use pevbar::terms::Bounds;
use proptest::prelude::*;

#[test]
fn enumerated_terms_reparse_to_themselves() {
    for (m, _) in common::bundled() {
        let c = common::carrier(&m);
        for level in 1..=2 {
            let b = Bounds::new(2, &c[..2]).with_max_leaves(3);
            for t in m.enumerate(level, &b).unwrap() {
                let again = m.parse(&t.print(), level).unwrap();
                assert_eq!(again, t, "{} at level {level}", m.id);
            }
        }
    }
}

#[test]
fn enumeration_is_sorted_and_distinct() {
    let m = MonadInstance::monoid();
    let ts = m.enumerate(2, &Bounds::new(2, &["a", "b"])).unwrap();
    assert!(ts.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn multisets_forget_order_lists_do_not() {
    let cm = MonadInstance::commutative_monoid();
    assert_eq!(
        cm.parse("{b,a,a}", 1).unwrap(),
        cm.parse("{a,b,a}", 1).unwrap()
    );
    let l = MonadInstance::monoid();
    assert_ne!(l.parse("[b,a]", 1).unwrap(), l.parse("[a,b]", 1).unwrap());
}

#[test]
fn weighted_terms_merge_and_drop_zero() {
    let m = MonadInstance::semimodule(SemiringId::Nat);
    assert_eq!(m.parse("{1:a,2:a,0:b}", 1).unwrap().print(), "{3:a}");
    assert_eq!(m.eta(&m.atom("*")).unwrap().print(), "{1:*}");
}

#[test]
fn malformed_input_is_rejected() {
    let cm = MonadInstance::commutative_monoid();
    for bad in ["{a", "{a}}", "{{a}}", ""] {
        assert!(cm.parse(bad, 1).is_err(), "{bad}");
    }
}

proptest! {
    #[test]
    fn mu_is_associative_on_random_multisets(xs in proptest::collection::vec(proptest::collection::vec(proptest::collection::vec(0u8..3, 0..3), 0..3), 0..3)) {
        let cm = MonadInstance::commutative_monoid();
        let text = format!("{{{}}}", xs.iter().map(|ys| format!("{{{}}}", ys.iter().map(|zs| format!("{{{}}}", zs.iter().map(u8::to_string).collect::<Vec<_>>().join(","))).collect::<Vec<_>>().join(","))).collect::<Vec<_>>().join(","));
        let t = cm.parse(&text, 3).unwrap();
        let outer = cm.mu(&cm.mu_at(&t, 1).unwrap()).unwrap();
        let inner = cm.mu(&cm.mu(&t).unwrap()).unwrap();
        prop_assert_eq!(outer, inner);
    }
}

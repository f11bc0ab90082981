mod common;

use std::sync::Arc;

use proptest::prelude::*;
use sheafhist_core::presheaf::{
    enumerate_subobjects, global_sections, truth_of_inclusion, FinitePresheaf, Subobject, DEFAULT_SEARCH_CAP,
};
use sheafhist_core::random;
use sheafhist_core::temporal::ProductSpace;

fn presheaves() -> Vec<Arc<FinitePresheaf>> {
    let mut out: Vec<Arc<FinitePresheaf>> = common::fixture_posets().iter().map(|p| p.spectral().clone()).collect();
    let zx = common::zx_poset();
    out.push(ProductSpace::binary(zx.spectral().clone(), zx.spectral().clone()).unwrap().presheaf().clone());
    out
}

fn leq(a: &Subobject, b: &Subobject) -> bool {
    a.includes_in(b).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn heyting_laws(seed in any::<u64>(), which in 0usize..5) {
        let mut rng = common::rng(seed);
        let sheaf = presheaves().swap_remove(which);
        let a = random::subobject(&mut rng, &sheaf);
        let b = random::subobject(&mut rng, &sheaf);
        let c = random::subobject(&mut rng, &sheaf);
        let imp = a.implies(&b).unwrap();
        prop_assert!(imp.is_restriction_closed());
        prop_assert_eq!(leq(&c, &imp), leq(&c.meet(&a).unwrap(), &b));
        let lhs = a.meet(&b.join(&c).unwrap()).unwrap();
        let rhs = a.meet(&b).unwrap().join(&a.meet(&c).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        prop_assert!(a.meet(&a.not()).unwrap().is_empty());
        prop_assert!(leq(&a, &a.not().not()));
        prop_assert!(a.implies(&a).unwrap().is_full());
    }

    #[test]
    fn inclusion_truth_values_are_global_elements(seed in any::<u64>(), which in 0usize..5) {
        let mut rng = common::rng(seed);
        let sheaf = presheaves().swap_remove(which);
        let a = random::subobject(&mut rng, &sheaf);
        let b = random::subobject(&mut rng, &sheaf);
        let tv = truth_of_inclusion(&a, &b).unwrap();
        tv.check(sheaf.poset()).unwrap();
        prop_assert_eq!(tv.is_totally_true(sheaf.poset()), leq(&a, &b));
    }
}

#[test]
fn subobject_enumeration_is_closed_under_operations() {
    let sheaf = common::zx_poset().spectral().clone();
    let all = enumerate_subobjects(&sheaf, DEFAULT_SEARCH_CAP).unwrap();
    assert!(all.iter().all(Subobject::is_restriction_closed));
    for a in &all {
        for b in &all {
            assert!(all.contains(&a.implies(b).unwrap()));
            assert!(all.contains(&a.join(b).unwrap()));
        }
    }
}

#[test]
fn global_section_counts() {
    assert_eq!(global_sections(common::z_poset().spectral(), DEFAULT_SEARCH_CAP).unwrap().len(), 2);
    assert_eq!(global_sections(common::dim3_poset().spectral(), DEFAULT_SEARCH_CAP).unwrap().len(), 5);
    assert_eq!(global_sections(common::zx_poset().spectral(), DEFAULT_SEARCH_CAP).unwrap().len(), 4);
}

#[test]
fn search_cap_is_reported() {
    let err = global_sections(common::dim4_poset().spectral(), 1).unwrap_err();
    assert!(matches!(err, sheafhist_core::Error::CapExceeded { cap: 1 }));
}

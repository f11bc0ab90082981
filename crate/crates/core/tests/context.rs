mod common;

use proptest::prelude::*;
use sheafhist_core::algebra::{Matrix, Projector};
use sheafhist_core::context::{Context, ContextPoset, SpectrumPoint};
use sheafhist_core::random;

fn check_context(c: &Context) -> Result<(), TestCaseError> {
    let dim = c.dim();
    let mut sum = Matrix::zeros(dim);
    for (i, q) in c.minimals().iter().enumerate() {
        prop_assert!(!q.is_zero());
        for r in &c.minimals()[i + 1..] {
            prop_assert!(q.is_orthogonal_to(r));
        }
        sum = sum.add(q.matrix()).unwrap();
    }
    prop_assert!(sum.approx_eq(&Matrix::identity(dim)));
    let keys: Vec<_> = c.minimals().iter().map(Projector::sort_key).collect();
    let mut sorted = keys.clone();
    sorted.sort_by(|a, b| b.cmp(a));
    prop_assert_eq!(keys, sorted);
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn commuting_families_give_contexts(seed in any::<u64>(), dim in 2usize..6, count in 1usize..4) {
        let mut rng = common::rng(seed);
        let family = random::commuting_family(&mut rng, dim, count);
        let c = Context::from_commuting(dim, &family).unwrap();
        check_context(&c)?;
        for p in &family {
            prop_assert!(c.contains(p));
            let sum = Projector::orthogonal_sum(dim, c.minimals_under(p).iter().map(|&i| &c.minimals()[i]));
            prop_assert!(sum.approx_eq(p));
        }
        prop_assert!(Context::trivial(dim).leq(&c));
    }

    #[test]
    fn meets_are_greatest_lower_bounds(seed in any::<u64>(), dim in 2usize..5) {
        let mut rng = common::rng(seed);
        let u = random::commuting_family(&mut rng, dim, 2);
        let a = Context::from_commuting(dim, &u).unwrap();
        let b = Context::from_commuting(dim, &u[..1]).unwrap();
        let m = a.meet(&b).unwrap();
        check_context(&m)?;
        prop_assert!(m.leq(&a) && m.leq(&b));
        prop_assert_eq!(&m, &b);
        let other = Context::from_commuting(dim, &random::commuting_family(&mut rng, dim, 2)).unwrap();
        let m = a.meet(&other).unwrap();
        prop_assert!(m.leq(&a) && m.leq(&other));
    }

    #[test]
    fn closed_posets_are_meet_closed(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let dim = 3;
        let cs: Vec<Context> = (0..3)
            .map(|_| Context::from_commuting(dim, &random::commuting_family(&mut rng, dim, 2)).unwrap())
            .collect();
        let poset = sheafhist_core::context::close_poset(dim, cs).unwrap();
        for a in poset.contexts() {
            for b in poset.contexts() {
                let m = a.meet(b).unwrap();
                prop_assert!(poset.contexts().contains(&m));
            }
        }
        check_functoriality(&poset)?;
    }
}

fn check_functoriality(poset: &ContextPoset) -> Result<(), TestCaseError> {
    let n = poset.len();
    for a in 0..n {
        for b in 0..n {
            if !poset.leq(b, a) {
                continue;
            }
            for c in 0..n {
                if !poset.leq(c, b) {
                    continue;
                }
                let (va, vb, vc) = (poset.context(a), poset.context(b), poset.context(c));
                for lambda in va.spectrum() {
                    let step = vb.restrict_point(va.restrict_point(lambda, vb).unwrap(), vc).unwrap();
                    prop_assert_eq!(step, va.restrict_point(lambda, vc).unwrap());
                    let image = va.restrict_point(lambda, vb).unwrap();
                    prop_assert!(va.minimal(lambda).leq(vb.minimal(image)));
                }
            }
        }
    }
    Ok(())
}

#[test]
fn fixture_posets_are_functorial() {
    for poset in common::fixture_posets() {
        check_functoriality(&poset).unwrap();
        assert_eq!(poset.name(poset.trivial()), "trivial");
        assert_eq!(poset.context(0).spectrum(), vec![SpectrumPoint { index: 0 }]);
    }
}

#[test]
fn fixture_poset_sizes() {
    assert_eq!(common::z_poset().len(), 2);
    assert_eq!(common::zx_poset().len(), 3);
    let d3 = common::dim3_poset();
    assert!(d3.len() >= 5);
    assert_eq!(d3.context(1).size(), 3);
}

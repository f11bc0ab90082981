mod common;

use proptest::prelude::*;
use rand::Rng;
use sheafhist_core::algebra::{Projector, Scalar, C64};
use sheafhist_core::decoherence::{
    check_additivity, check_negation, class_operator, decoherence, heisenberg_class_operator, hpo_decoherence,
    is_consistent, DensityMatrix, Evolution, History, TimedHistory,
};
use sheafhist_core::hpo::hpo_projector;
use sheafhist_core::random;

fn setup<R: Rng>(rng: &mut R, dim: usize) -> (Evolution, DensityMatrix) {
    let ev = Evolution::from_steps(vec![0, 1, 2, 3], (0..3).map(|_| random::unitary(rng, dim)).collect()).unwrap();
    let rho = DensityMatrix::pure(&random::ket(rng, dim));
    (ev, rho)
}

fn homogeneous<R: Rng>(rng: &mut R, dim: usize) -> TimedHistory {
    TimedHistory::new(vec![1, 2], vec![random::projector(rng, dim), random::projector(rng, dim)]).unwrap()
}

fn close(a: C64, b: C64) -> bool {
    (a - b).norm() <= 1e-9
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn hermitian_and_bounded(seed in any::<u64>(), dim in 2usize..4) {
        let mut rng = common::rng(seed);
        let (ev, rho) = setup(&mut rng, dim);
        let a = History::Homogeneous(homogeneous(&mut rng, dim));
        let b = History::Homogeneous(homogeneous(&mut rng, dim));
        let dab = decoherence(&a, &b, &rho, &ev).unwrap();
        let dba = decoherence(&b, &a, &rho, &ev).unwrap();
        prop_assert!(close(dab, dba.conj()));
        let daa = decoherence(&a, &a, &rho, &ev).unwrap();
        prop_assert!(daa.im.abs() <= 1e-9 && daa.re >= -1e-9 && daa.re <= 1.0 + 1e-9);
        let unit = History::Unit { dim };
        prop_assert!(close(decoherence(&unit, &unit, &rho, &ev).unwrap(), C64::new(1.0, 0.0)));
    }

    #[test]
    fn additivity_and_negation(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let (ev, rho) = setup(&mut rng, 2);
        let p = random::projector_of_rank(&mut rng, 2, 1);
        let q = random::projector(&mut rng, 2);
        let alpha = History::Homogeneous(TimedHistory::new(vec![1, 2], vec![p.clone(), q.clone()]).unwrap());
        let beta = History::Homogeneous(TimedHistory::new(vec![1, 3], vec![p.complement(), random::projector(&mut rng, 2)]).unwrap());
        let gamma = History::Homogeneous(homogeneous(&mut rng, 2));
        prop_assert!(check_additivity(&alpha, &beta, &gamma, &rho, &ev).unwrap());
        prop_assert!(check_negation(&alpha, &gamma, &rho, &ev).unwrap());
        prop_assert!(check_negation(&beta, &alpha, &rho, &ev).unwrap());
    }

    #[test]
    fn orderings_and_hpo_route_agree(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let (ev, rho) = setup(&mut rng, 2);
        let (a, b) = (homogeneous(&mut rng, 2), homogeneous(&mut rng, 2));
        let tilde = class_operator(&a, &ev, ev.origin()).unwrap();
        let hat = heisenberg_class_operator(&a, &ev).unwrap();
        prop_assert!(tilde.approx_eq(&hat.adjoint()));
        let direct = decoherence(&History::Homogeneous(a.clone()), &History::Homogeneous(b.clone()), &rho, &ev).unwrap();
        let xa = hpo_projector(a.projectors()).unwrap();
        let xb = hpo_projector(b.projectors()).unwrap();
        let via = hpo_decoherence(xa.matrix(), xb.matrix(), a.times(), &rho, &ev).unwrap();
        prop_assert!(close(direct, via));
    }
}

#[test]
fn z_basis_family_is_consistent() {
    let ev = Evolution::trivial(2, 0);
    let rho = DensityMatrix::pure(&sheafhist_core::algebra::Ket::basis(2, 0));
    let (up, down) = (Projector::<C64>::diag_bits(&[1, 0]), Projector::diag_bits(&[0, 1]));
    let mut family = Vec::new();
    for a in [&up, &down] {
        for b in [&up, &down] {
            family.push(History::Homogeneous(TimedHistory::new(vec![1, 2], vec![a.clone(), b.clone()]).unwrap()));
        }
    }
    let report = is_consistent(&family, &rho, &ev, false).unwrap();
    assert!(report.consistent);
    assert!((report.probability_sum - C64::new(1.0, 0.0)).is_zero());
}

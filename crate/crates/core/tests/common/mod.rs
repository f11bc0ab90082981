#![allow(dead_code)]

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sheafhist_core::algebra::{Matrix, Projector, C64};
use sheafhist_core::context::{close_poset, Context, ContextPoset};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn pz() -> Projector {
    Projector::diag_bits(&[1, 0])
}

pub fn px() -> Projector {
    Projector::new(Matrix::from_real(&[&[0.5, 0.5], &[0.5, 0.5]]).unwrap()).unwrap()
}

pub fn ctx(dim: usize, gens: &[Projector]) -> Context {
    Context::from_commuting(dim, gens).unwrap()
}

pub fn z_poset() -> ContextPoset {
    close_poset(2, vec![ctx(2, &[pz()])]).unwrap()
}

pub fn zx_poset() -> ContextPoset {
    close_poset(2, vec![ctx(2, &[pz()]), ctx(2, &[px()])]).unwrap()
}

/// Maximal basis context, two coarsenings and a rotated basis in dim 3.
pub fn dim3_poset() -> ContextPoset {
    let e = |i| {
        let mut b = [0u8; 3];
        b[i] = 1;
        Projector::diag_bits(&b)
    };
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let rot = Projector::span(3, &[vec![C64::new(h, 0.0), C64::new(h, 0.0), C64::new(0.0, 0.0)]]).unwrap();
    close_poset(
        3,
        vec![
            ctx(3, &[e(0), e(1)]),
            ctx(3, &[e(0)]),
            ctx(3, &[e(2)]),
            ctx(3, &[rot, e(2)]),
        ],
    )
    .unwrap()
}

/// z⊗z basis context, its two one-sided coarsenings and a Bell context.
pub fn dim4_poset() -> ContextPoset {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let c = |x: f64| C64::new(x, 0.0);
    let zi = Projector::diag_bits(&[1, 1, 0, 0]);
    let iz = Projector::diag_bits(&[1, 0, 1, 0]);
    let bell = Projector::span(4, &[vec![c(h), c(0.0), c(0.0), c(h)]]).unwrap();
    close_poset(4, vec![ctx(4, &[zi.clone(), iz.clone()]), ctx(4, &[zi]), ctx(4, &[iz]), ctx(4, &[bell])]).unwrap()
}

pub fn fixture_posets() -> Vec<ContextPoset> {
    vec![z_poset(), zx_poset(), dim3_poset(), dim4_poset()]
}

/// Random projector aligned with a fixture poset: a sum of minimals of one
/// of its contexts, joined with a ray inside another minimal. Generic
/// random projectors are daseinized to the identity almost everywhere.
pub fn aligned_projector<R: rand::Rng>(rng: &mut R, poset: &ContextPoset) -> Projector {
    use sheafhist_core::random;
    if rng.gen_bool(0.25) {
        return random::projector(rng, poset.dim());
    }
    let v = poset.context(rng.gen_range(0..poset.len()));
    let mut acc = Projector::orthogonal_sum(
        poset.dim(),
        v.minimals().iter().filter(|_| rng.gen_bool(0.4)),
    );
    if rng.gen_bool(0.6) {
        let q = &v.minimals()[rng.gen_range(0..v.size())];
        let ray = q.matrix().apply(&random::vector(rng, poset.dim())).unwrap();
        if let Ok(p) = Projector::span(poset.dim(), &[ray]) {
            acc = acc.join(&p).unwrap();
        }
    }
    acc
}

//! Seeded random bundles that are compatible by construction.
//!
//! On surfaces any family of filtrations is compatible, so every ray gets an
//! independent random flag. In dimension three the samples are direct sums
//! of line bundles and twists of the tangent and cotangent bundles.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exactlin::{rank, Subspace};
use crate::examples;
use crate::fan::Fan;
use crate::klyachko::{Filtration, FiltrationStep, ToricBundle};
use crate::scalar::to_field;
use crate::{QBundle, Rational};

/// Jumps are drawn from `-JUMP..=JUMP`.
pub const JUMP: i64 = 5;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A basis of `Q^r` with small entries, biased toward coordinate vectors so
/// that different rays share lines.
fn random_basis(rng: &mut impl Rng, r: usize) -> Vec<Vec<i64>> {
    loop {
        let basis: Vec<Vec<i64>> = (0..r)
            .map(|_| {
                if rng.gen_bool(0.5) {
                    let i = rng.gen_range(0..r);
                    (0..r).map(|j| i64::from(i == j)).collect()
                } else {
                    (0..r).map(|_| rng.gen_range(-1..=1)).collect()
                }
            })
            .collect();
        let rows: Vec<Vec<Rational>> = basis.iter().map(|v| to_field(v)).collect();
        if rank(&rows, r) == r {
            return basis;
        }
    }
}

/// A random filtration of `Q^r` with jumps in `-JUMP..=JUMP`.
pub fn random_filtration(rng: &mut impl Rng, r: usize) -> Filtration {
    let basis = random_basis(rng, r);
    let mut dims: Vec<usize> = (1..r).filter(|_| rng.gen_bool(0.5)).collect();
    dims.push(r);
    dims.sort_unstable_by(|a, b| b.cmp(a));
    let mut levels: Vec<i64> = (-JUMP..=JUMP).collect();
    levels.shuffle(rng);
    let mut throughs: Vec<i64> = levels[..dims.len()].to_vec();
    throughs.sort_unstable();
    let steps = dims
        .iter()
        .zip(throughs)
        .map(|(&k, through)| {
            let rows: Vec<Vec<Rational>> = basis[..k].iter().map(|v| to_field(v)).collect();
            FiltrationStep { through, span: Subspace::span(r, &rows).expect("rank-sized rows") }
        })
        .collect();
    Filtration::new(r, steps).expect("strictly nested by construction")
}

/// A random bundle of rank `1..=max_rank` on a two-dimensional fan.
pub fn random_surface_bundle(rng: &mut impl Rng, fan: &Fan, max_rank: usize) -> QBundle {
    assert_eq!(fan.dim(), 2, "surface sampler needs a planar fan");
    let r = rng.gen_range(1..=max_rank);
    let filtrations = (0..fan.num_rays()).map(|_| random_filtration(rng, r)).collect();
    ToricBundle::new(fan.clone(), r, filtrations).expect("planar filtrations are always compatible")
}

fn random_twist(rng: &mut impl Rng, n: usize) -> Vec<i64> {
    (0..n).map(|_| rng.gen_range(-2..=2)).collect()
}

/// A random bundle on `P^3` of rank at most three.
pub fn random_threefold_bundle(rng: &mut impl Rng) -> QBundle {
    let fan = Fan::projective_space(3);
    let n = fan.num_rays();
    match rng.gen_range(0..3) {
        0 => examples::tangent_projective(3).twist(&random_twist(rng, n)).expect("valid twist"),
        1 => examples::cotangent(fan).twist(&random_twist(rng, n)).expect("valid twist"),
        _ => {
            let r = rng.gen_range(1..=3);
            let mut bundle = ToricBundle::line_bundle(fan.clone(), &random_twist(rng, n)).expect("valid fan");
            for _ in 1..r {
                let next = ToricBundle::line_bundle(fan.clone(), &random_twist(rng, n)).expect("valid fan");
                bundle = bundle.direct_sum(&next).expect("same fan");
            }
            bundle
        }
    }
}

/// The fans the command-line sampler draws from.
pub fn surface_fans() -> Vec<Fan> {
    vec![Fan::projective_space(2), Fan::hirzebruch(0), Fan::hirzebruch(1), Fan::hirzebruch(2)]
}

/// The bundle the command-line `sample` subcommand prints for `seed`.
pub fn sample(seed: u64) -> QBundle {
    let mut rng = rng(seed);
    let fans = surface_fans();
    let choice = rng.gen_range(0..=fans.len());
    match fans.get(choice) {
        Some(fan) => random_surface_bundle(&mut rng, fan, 3),
        None => random_threefold_bundle(&mut rng),
    }
}

/// A source of small integers for [`crate::matroid::GroundSet::with_mixer`].
pub fn mixer(seed: u64) -> impl FnMut() -> i64 {
    let mut rng = rng(seed);
    move || rng.gen_range(-3..=3)
}

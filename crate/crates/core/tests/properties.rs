//! Randomized properties of the analyses on sampled bundles.

use proptest::prelude::*;

use toric_parliament::cohomology::{cech_report, euler_characteristic, DEFAULT_REGION_CAP};
use toric_parliament::format::{read_bundle, BundleFile};
use toric_parliament::matroid::GroundSet;
use toric_parliament::parliament::{global_sections, parliament, Polytope};
use toric_parliament::positivity::{
    analyze, characters_in_own_polytopes, is_globally_generated, jet_rank_oracle, separates_k_jets,
};
use toric_parliament::sample::{mixer, random_surface_bundle, random_threefold_bundle, rng, surface_fans};
use toric_parliament::{examples, Fan, QBundle};

fn surface(seed: u64) -> QBundle {
    let fans = surface_fans();
    let fan = &fans[(seed % fans.len() as u64) as usize];
    random_surface_bundle(&mut rng(seed), fan, 3)
}

/// Every character lies in the polytope of the vector selected for it from
/// `ground`.
fn selection_contains_characters(b: &QBundle, ground: &GroundSet) -> bool {
    (0..b.fan().num_cones()).all(|c| {
        let s = b.splitting_basis(c, ground).unwrap();
        s.entries.iter().all(|e| {
            let p = Polytope::new(b.fan(), b.bounds(&e.vector).unwrap()).unwrap();
            p.contains(b.fan(), &e.character)
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn generation_matches_characters_in_their_polytopes(seed in any::<u64>()) {
        let b = surface(seed);
        let gg = is_globally_generated(&b).holds;
        prop_assert_eq!(characters_in_own_polytopes(&b).unwrap(), gg);
        for m in 0..2 {
            let mixed = GroundSet::with_mixer(b.lattice(), mixer(seed ^ m)).unwrap();
            prop_assert_eq!(selection_contains_characters(&b, &mixed), gg);
        }
    }

    #[test]
    fn jet_separation_is_monotone(seed in any::<u64>()) {
        let b = surface(seed);
        let jets: Vec<bool> = (0..4).map(|k| separates_k_jets(&b, k).unwrap().holds).collect();
        for k in 1..jets.len() {
            prop_assert!(!jets[k] || jets[k - 1], "{k}-jets without {}-jets", k - 1);
        }
    }

    #[test]
    fn euler_characteristic_is_additive(a in any::<u64>(), b in any::<u64>()) {
        let x = surface(a);
        let fan = x.fan().clone();
        let y = random_surface_bundle(&mut rng(b), &fan, 2);
        let sum = x.direct_sum(&y).unwrap();
        let lhs = euler_characteristic(&sum).unwrap();
        let rhs = &euler_characteristic(&x).unwrap() + &euler_characteristic(&y).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn line_bundle_sums_on_the_line(a in -4i64..=4, b in -4i64..=4) {
        let sum = examples::projective_degree(1, a).direct_sum(&examples::projective_degree(1, b)).unwrap();
        let chi = euler_characteristic(&sum).unwrap();
        prop_assert_eq!(chi.evaluate_at_one(), a + b + 2);
        let r = analyze(&sum, &[]).unwrap();
        prop_assert_eq!(r.globally_generated, a >= 0 && b >= 0);
        prop_assert_eq!(r.ample, a > 0 && b > 0);
    }

    #[test]
    fn threefold_samples_are_consistent(seed in any::<u64>()) {
        let b = random_threefold_bundle(&mut rng(seed));
        let gg = is_globally_generated(&b).holds;
        prop_assert_eq!(separates_k_jets(&b, 0).unwrap().holds, gg);
        for k in 0..2 {
            let contained = separates_k_jets(&b, k).unwrap().holds;
            let oracle = (0..b.fan().num_cones()).all(|c| jet_rank_oracle(&b, c, k).unwrap());
            prop_assert_eq!(contained, oracle);
        }
        let r = analyze(&b, &[]).unwrap();
        prop_assert!(!r.ample || r.nef);
    }

    #[test]
    fn bundle_files_round_trip(seed in any::<u64>()) {
        let b = surface(seed);
        let text = BundleFile::from_bundle(&b, Some(format!("seed {seed}"))).to_json();
        let back = read_bundle(&text).unwrap();
        prop_assert_eq!(back.fan(), b.fan());
        prop_assert_eq!(back.filtrations(), b.filtrations());
    }
}

#[test]
fn nef_and_generation_agree_on_plane_sums_and_twists() {
    let p2 = Fan::projective_space(2);
    let mut bundles = Vec::new();
    for a in -2..=3 {
        for b in -2..=3 {
            let x = examples::projective_degree(2, a);
            bundles.push((format!("O({a})+O({b})"), x.direct_sum(&examples::projective_degree(2, b)).unwrap()));
        }
        let t = [a, 0, 0];
        bundles.push((format!("T({a})"), examples::tangent_projective(2).twist(&t).unwrap()));
        bundles.push((format!("Ω({a})"), examples::cotangent(p2.clone()).twist(&t).unwrap()));
    }
    for (name, b) in bundles {
        let r = analyze(&b, &[]).unwrap();
        assert_eq!(r.nef, r.globally_generated, "{name}");
    }
}

#[test]
fn threefold_sections_match_cohomology() {
    let mut r = rng(11);
    for _ in 0..6 {
        let b = random_threefold_bundle(&mut r);
        let sections = global_sections(&b, &parliament(&b).unwrap());
        let cech = cech_report(&b, DEFAULT_REGION_CAP).unwrap();
        assert_eq!(cech.total(0), sections.total);
    }
}

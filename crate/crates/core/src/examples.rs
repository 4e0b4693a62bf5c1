//! Bundles used throughout the documentation and the test suites.
//!
//! Vectors are written in the standard basis `e_1, .., e_r` of `E = Q^r`.

use crate::exactlin::Subspace;
use crate::fan::Fan;
use crate::klyachko::{Filtration, FiltrationStep, ToricBundle};
use crate::scalar::to_field;
use crate::Rational;

/// A filtration from `(through, spanning vectors)` pairs; the first entry
/// must span all of `E`.
pub fn filtration(rank: usize, steps: &[(i64, &[&[i64]])]) -> Filtration {
    let steps = steps
        .iter()
        .map(|(through, vectors)| {
            let rows: Vec<Vec<Rational>> = vectors.iter().map(|v| to_field(v)).collect();
            FiltrationStep { through: *through, span: Subspace::span(rank, &rows).expect("rank-sized vectors") }
        })
        .collect();
    Filtration::new(rank, steps).expect("well-formed filtration")
}

const E1: &[i64] = &[1, 0, 0];
const E2: &[i64] = &[0, 1, 0];
const E3: &[i64] = &[0, 0, 1];

/// Rank 3 on `P^1 x P^1` whose ground set is strictly larger than the union of
/// the splitting bases.
pub fn p1xp1_rank3() -> ToricBundle {
    let whole: &[&[i64]] = &[E1, E2, E3];
    let f = vec![
        filtration(3, &[(-1, whole), (0, &[E1, E2]), (1, &[&[1, 1, 0]])]),
        filtration(3, &[(0, whole), (1, &[E2, E3]), (2, &[E2])]),
        filtration(3, &[(-1, whole), (0, &[E1, E3]), (1, &[&[1, 0, 1]])]),
        filtration(3, &[(0, whole), (1, &[E2, E3]), (2, &[E2])]),
    ];
    ToricBundle::new(Fan::p1_x_p1(), 3, f).expect("compatible")
}

/// The tangent bundle of `P^d`, with fibre `N ⊗ Q`.
pub fn tangent_projective(d: usize) -> ToricBundle {
    let fan = Fan::projective_space(d);
    let filtrations = fan
        .rays()
        .iter()
        .map(|v| {
            let steps = vec![
                FiltrationStep { through: 0, span: Subspace::full(d) },
                FiltrationStep { through: 1, span: Subspace::span(d, &[to_field(v)]).expect("ray in N") },
            ];
            Filtration::new(d, steps).expect("well-formed")
        })
        .collect();
    ToricBundle::new(fan, d, filtrations).expect("compatible")
}

/// The cotangent bundle of a smooth complete fan, with fibre `M ⊗ Q`.
pub fn cotangent(fan: Fan) -> ToricBundle {
    let d = fan.dim();
    let filtrations = fan
        .rays()
        .iter()
        .map(|v| {
            let perp = crate::exactlin::null_space(&[to_field::<Rational>(v)], d);
            let mut steps = vec![FiltrationStep { through: -1, span: Subspace::full(d) }];
            if !perp.is_empty() {
                steps.push(FiltrationStep { through: 0, span: Subspace::span(d, &perp).expect("dimension d") });
            }
            Filtration::new(d, steps).expect("well-formed")
        })
        .collect();
    ToricBundle::new(fan, d, filtrations).expect("compatible")
}

/// Rank 3 on `P^2`: ample but not globally generated.
pub fn bundle_f() -> ToricBundle {
    let whole: &[&[i64]] = &[E1, E2, E3];
    let f = vec![
        filtration(3, &[(-1, whole), (0, &[E1, E2]), (4, &[E1])]),
        filtration(3, &[(-2, whole), (0, &[E2, E3]), (3, &[E3])]),
        filtration(3, &[(-1, whole), (2, &[&[0, -1, 1], &[1, -1, 0]]), (3, &[&[1, -1, 0]])]),
    ];
    ToricBundle::new(Fan::projective_space(2), 3, f).expect("compatible")
}

/// Rank 2 on the first Hirzebruch surface: globally generated and ample with
/// nonvanishing `H^1`.
pub fn bundle_g() -> ToricBundle {
    let whole: &[&[i64]] = &[&[1, 0], &[0, 1]];
    let f = vec![
        filtration(2, &[(-2, whole), (4, &[&[1, 0]])]),
        filtration(2, &[(2, whole), (3, &[&[1, 0]])]),
        filtration(2, &[(0, whole), (5, &[&[0, 1]])]),
        filtration(2, &[(-1, whole), (3, &[&[1, 1]])]),
    ];
    ToricBundle::new(Fan::hirzebruch(1), 2, f).expect("compatible")
}

/// Rank 3 on `P^2`: globally generated and ample but not very ample.
pub fn bundle_h() -> ToricBundle {
    let whole: &[&[i64]] = &[E1, E2, E3];
    let f = vec![
        filtration(3, &[(-2, whole), (-1, &[E1, E2]), (2, &[E1])]),
        filtration(3, &[(-2, whole), (0, &[E2, E3]), (2, &[E3])]),
        filtration(3, &[(1, whole), (3, &[&[0, -1, 1], &[1, -1, 0]]), (4, &[&[1, -1, 0]])]),
    ];
    ToricBundle::new(Fan::projective_space(2), 3, f).expect("compatible")
}

/// `O(Σ a_i D_i)` on `P^d`.
pub fn projective_line_bundle(d: usize, coefficients: &[i64]) -> ToricBundle {
    ToricBundle::line_bundle(Fan::projective_space(d), coefficients).expect("valid fan")
}

/// `O_{P^d}(a)`, as `a·D_{d+1}`.
pub fn projective_degree(d: usize, a: i64) -> ToricBundle {
    let mut coefficients = vec![0; d + 1];
    coefficients[d] = a;
    projective_line_bundle(d, &coefficients)
}

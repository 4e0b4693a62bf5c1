//! Global generation, jet separation, and ampleness via invariant curves.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactlin::{rank, Subspace};
use crate::fan::Wall;
use crate::klyachko::ToricBundle;
use crate::parliament::jet_simplex_contained;
use crate::scalar::{pairing, Field};

/// Where a positivity property fails.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    /// 1-based maximal cone.
    pub cone: usize,
    pub character: Vec<i64>,
    /// Jet order, `0` for global generation.
    pub order: i64,
    pub detail: String,
}

/// A decision together with the first failure found.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub holds: bool,
    pub witness: Option<Witness>,
}

impl Verdict {
    fn yes() -> Self {
        Self { holds: true, witness: None }
    }

    fn no(witness: Witness) -> Self {
        Self { holds: false, witness: Some(witness) }
    }
}

/// Global generation by the evaluation criterion: at every cone and every
/// character `u ∈ u(σ)`, the ground vectors `e` with `u ∈ P_e` must span
/// `E_u^σ / E_{>u}^σ`.
pub fn is_globally_generated<F: Field>(bundle: &ToricBundle<F>) -> Verdict {
    let fan = bundle.fan();
    let ground = bundle.ground_set();
    for c in 0..fan.num_cones() {
        for (u, m) in bundle.cone_characters(c) {
            let (here, above) = bundle.cone_subspaces(c, u);
            let sections: Vec<Vec<F>> = (0..ground.len())
                .filter(|&g| fan.rays().iter().zip(bundle.ground_bounds(g)).all(|(v, &a)| pairing(u, v) <= a))
                .map(|g| ground.vectors()[g].clone())
                .collect();
            let reached = here.quotient_rank_of_images(&sections, &above).expect("sections at u lie in E_u");
            if reached < *m {
                return Verdict::no(Witness {
                    cone: c + 1,
                    character: u.clone(),
                    order: 0,
                    detail: format!("sections reach {reached} of {m} quotient directions"),
                });
            }
        }
    }
    Verdict::yes()
}

/// The literal form: `u_ℓ ∈ P_{e_{ℓ,σ}}` for the cached splittings.
pub fn characters_in_own_polytopes<F: Field>(bundle: &ToricBundle<F>) -> Result<bool> {
    for c in 0..bundle.fan().num_cones() {
        for l in 0..bundle.rank() {
            if !jet_simplex_contained(bundle, c, l, 0)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `k`-jet separation: `u_ℓ - k·conv(0, w_1..w_d) ⊆ P_{e_{ℓ,σ}}` for every cone
/// and every `ℓ`.
pub fn separates_k_jets<F: Field>(bundle: &ToricBundle<F>, k: i64) -> Result<Verdict> {
    if k < 0 {
        return Err(Error::NegativeJetOrder(k));
    }
    for c in 0..bundle.fan().num_cones() {
        for (l, s) in bundle.splitting(c).entries.iter().enumerate() {
            if !jet_simplex_contained(bundle, c, l, k)? {
                return Ok(Verdict::no(Witness {
                    cone: c + 1,
                    character: s.character.clone(),
                    order: k,
                    detail: format!("jet simplex of order {k} leaves the polytope of its basis vector"),
                }));
            }
        }
    }
    Ok(Verdict::yes())
}

fn multi_indices(d: usize, k: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..d {
        let mut next = Vec::new();
        for m in &out {
            let used: i64 = m.iter().sum();
            for x in 0..=(k - used) {
                let mut n = m.clone();
                n.push(x);
                next.push(n);
            }
        }
        out = next;
    }
    out
}

/// Jet surjectivity at the fixed point of one cone, from local expansions.
///
/// For each `u ∈ u(σ)` and `|m| <= k`, the sections `e ⊗ χ^{-u'}` with
/// `u' = u - Σ m_i w_i` contribute the `B_σ`-coefficients of `e` on the basis
/// vectors of character `u`; these must have full rank.
pub fn jet_rank_oracle<F: Field>(bundle: &ToricBundle<F>, cone: usize, k: i64) -> Result<bool> {
    if k < 0 {
        return Err(Error::NegativeJetOrder(k));
    }
    let fan = bundle.fan();
    let ground = bundle.ground_set();
    let splitting = bundle.splitting(cone);
    let coordinates: Vec<Vec<F>> = ground.vectors().iter().map(|e| splitting.coordinates(e)).collect();
    let duals = bundle.duals(cone);
    for (u, m) in bundle.cone_characters(cone) {
        let slots: Vec<usize> =
            splitting.entries.iter().enumerate().filter(|(_, e)| &e.character == u).map(|(l, _)| l).collect();
        for mi in multi_indices(fan.dim(), k) {
            let mut shifted = u.clone();
            for (w, &t) in duals.iter().zip(&mi) {
                for (x, y) in shifted.iter_mut().zip(w) {
                    *x -= t * y;
                }
            }
            let rows: Vec<Vec<F>> = (0..ground.len())
                .filter(|&g| fan.rays().iter().zip(bundle.ground_bounds(g)).all(|(v, &a)| pairing(&shifted, v) <= a))
                .map(|g| slots.iter().map(|&l| coordinates[g][l].clone()).collect())
                .collect();
            if rank(&rows, slots.len()) < *m {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// One summand `L_{u,u'}|_C ≅ O(degree)` of a curve restriction.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct CurvePair {
    pub degree: i64,
    pub u: Vec<i64>,
    pub u_prime: Vec<i64>,
}

/// The splitting type of `E` on the invariant curve of a wall.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CurveSplitting {
    pub wall: Wall,
    /// The separating vector in the relative interior of the wall.
    pub v0: Vec<i64>,
    /// Sorted by decreasing degree.
    pub pairs: Vec<CurvePair>,
}

impl CurveSplitting {
    pub fn degrees(&self) -> Vec<i64> {
        self.pairs.iter().map(|p| p.degree).collect()
    }
}

fn class_of(u: &[i64], wall: &Wall, bundle_rays: &[Vec<i64>]) -> Vec<i64> {
    wall.ray_indices.iter().map(|&i| pairing(u, &bundle_rays[i])).collect()
}

/// Positive coefficient vectors on the wall's rays, by increasing sum, then
/// lexicographically.
fn coefficient_vectors(n: usize) -> impl Iterator<Item = Vec<i64>> {
    (n as i64..).take_while(move |&total| n > 0 || total == 0).flat_map(move |total| {
        let mut out = Vec::new();
        compositions(total, n, &mut Vec::new(), &mut out);
        out
    })
}

fn compositions(total: i64, parts: usize, prefix: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
    if parts == 0 {
        if total == 0 {
            out.push(prefix.clone());
        }
        return;
    }
    if parts == 1 {
        if total >= 1 {
            prefix.push(total);
            out.push(prefix.clone());
            prefix.pop();
        }
        return;
    }
    for first in 1..=(total - parts as i64 + 1) {
        prefix.push(first);
        compositions(total - first, parts - 1, prefix, out);
        prefix.pop();
    }
}

/// Separating vectors `v0 = Σ c_i v_i` (all `c_i > 0`) that give distinct
/// values on the classes of the characters of both adjacent cones, in search
/// order.
pub fn separating_vectors<F: Field>(bundle: &ToricBundle<F>, wall: &Wall) -> impl Iterator<Item = Vec<i64>> {
    let fan = bundle.fan();
    let rays: Vec<Vec<i64>> = wall.ray_indices.iter().map(|&i| fan.ray(i).to_vec()).collect();
    let mut classes: BTreeSet<Vec<i64>> = BTreeSet::new();
    for c in [wall.left_cone, wall.right_cone] {
        for (u, _) in bundle.cone_characters(c) {
            classes.insert(class_of(u, wall, fan.rays()));
        }
    }
    let classes: Vec<Vec<i64>> = classes.into_iter().collect();
    let d = fan.dim();
    coefficient_vectors(rays.len()).filter_map(move |coeffs| {
        let values: BTreeSet<i64> = classes.iter().map(|t| t.iter().zip(&coeffs).map(|(a, b)| a * b).sum()).collect();
        if values.len() != classes.len() {
            return None;
        }
        let mut v0 = vec![0i64; d];
        for (ray, c) in rays.iter().zip(&coeffs) {
            for (x, y) in v0.iter_mut().zip(ray) {
                *x += c * y;
            }
        }
        Some(v0)
    })
}

/// Restriction to the curve of `wall` using the first separating vector.
pub fn restrict_to_curve<F: Field>(bundle: &ToricBundle<F>, wall: &Wall) -> Result<CurveSplitting> {
    let v0 = separating_vectors(bundle, wall).next().expect("the search is unbounded");
    restrict_with(bundle, wall, &v0)
}

/// Restriction to the curve of `wall` graded by a given separating vector.
///
/// The graded piece of `E^{v0}` at a class isolates that class; on it, the
/// filtrations of the two transverse rays split simultaneously and their double
/// differences count the pairs `(u, u')`.
pub fn restrict_with<F: Field>(bundle: &ToricBundle<F>, wall: &Wall, v0: &[i64]) -> Result<CurveSplitting> {
    let fan = bundle.fan();
    let r = bundle.rank();
    let left = bundle.splitting(wall.left_cone);
    let graded = |h: i64| {
        let rows: Vec<Vec<F>> =
            left.entries.iter().filter(|e| pairing(&e.character, v0) >= h).map(|e| e.vector.clone()).collect();
        Subspace::span(r, &rows).expect("rank-sized")
    };
    let mut classes: BTreeMap<Vec<i64>, i64> = BTreeMap::new();
    for (u, _) in bundle.cone_characters(wall.left_cone).iter().chain(bundle.cone_characters(wall.right_cone)) {
        classes.insert(class_of(u, wall, fan.rays()), pairing(u, v0));
    }
    let values: BTreeSet<i64> = classes.values().copied().collect();
    if values.len() != classes.len() {
        return Err(Error::Internal(format!("{} does not separate the classes of the wall", crate::exactlin::vector_text(v0))));
    }
    let plus = bundle.filtration(wall.v_tau);
    let minus = bundle.filtration(wall.v_opposite);
    let left_duals = bundle.duals(wall.left_cone);
    let right_duals = bundle.duals(wall.right_cone);
    let left_rays = fan.cone(wall.left_cone);
    let right_rays = fan.cone(wall.right_cone);
    let mut pairs = Vec::new();
    for (class, h) in &classes {
        let top = graded(*h);
        let below = graded(h + 1);
        if top.dim() == below.dim() {
            continue;
        }
        let induced = |s: &Subspace<F>| top.intersect(s).and_then(|x| x.sum(&below)).expect("same ambient");
        let meet_dim = |a: &Subspace<F>, b: &Subspace<F>| a.intersect(b).expect("same ambient").dim() as i64 - below.dim() as i64;
        let is: Vec<i64> = plus.jumps().collect();
        let js: Vec<i64> = minus.jumps().collect();
        let fp: BTreeMap<i64, Subspace<F>> = is.iter().flat_map(|&i| [i, i + 1]).map(|i| (i, induced(plus.at(i)))).collect();
        let fm: BTreeMap<i64, Subspace<F>> = js.iter().flat_map(|&j| [j, j + 1]).map(|j| (j, induced(minus.at(j)))).collect();
        for &i in &is {
            for &j in &js {
                let m = meet_dim(&fp[&i], &fm[&j]) - meet_dim(&fp[&(i + 1)], &fm[&j]) - meet_dim(&fp[&i], &fm[&(j + 1)])
                    + meet_dim(&fp[&(i + 1)], &fm[&(j + 1)]);
                if m < 0 {
                    return Err(Error::Internal(format!("negative pair multiplicity on wall {:?}", wall.ray_indices)));
                }
                if m == 0 {
                    continue;
                }
                let u = character_from(left_rays, left_duals, wall, class, wall.v_tau, i);
                let u_prime = character_from(right_rays, right_duals, wall, class, wall.v_opposite, j);
                let degree = pairing(&u, fan.ray(wall.v_tau)) - pairing(&u_prime, fan.ray(wall.v_tau));
                for _ in 0..m {
                    pairs.push(CurvePair { degree, u: u.clone(), u_prime: u_prime.clone() });
                }
            }
        }
    }
    pairs.sort_by(|a, b| b.cmp(a));
    check_pairs(bundle, wall, &pairs)?;
    Ok(CurveSplitting { wall: wall.clone(), v0: v0.to_vec(), pairs })
}

/// The character with prescribed values on the rays of a cone.
fn character_from(cone_rays: &[usize], duals: &[Vec<i64>], wall: &Wall, class: &[i64], transverse: usize, value: i64) -> Vec<i64> {
    let mut u = vec![0i64; duals[0].len()];
    for (&ray, w) in cone_rays.iter().zip(duals) {
        let t = if ray == transverse {
            value
        } else {
            class[wall.ray_indices.iter().position(|&x| x == ray).expect("wall ray")]
        };
        for (x, y) in u.iter_mut().zip(w) {
            *x += t * y;
        }
    }
    u
}

fn check_pairs<F: Field>(bundle: &ToricBundle<F>, wall: &Wall, pairs: &[CurvePair]) -> Result<()> {
    let fail = |what: &str| Err(Error::Internal(format!("curve restriction on wall {:?}: {what}", wall.ray_indices)));
    if pairs.len() != bundle.rank() {
        return fail("pair count differs from the rank");
    }
    for p in pairs {
        let diff: Vec<i64> = p.u.iter().zip(&p.u_prime).map(|(a, b)| a - b).collect();
        let scaled: Vec<i64> = wall.m_tau.iter().map(|x| x * p.degree).collect();
        if diff != scaled {
            return fail("difference is not a multiple of the wall normal");
        }
    }
    let mut us: Vec<Vec<i64>> = pairs.iter().map(|p| p.u.clone()).collect();
    let mut ups: Vec<Vec<i64>> = pairs.iter().map(|p| p.u_prime.clone()).collect();
    us.sort();
    ups.sort();
    if us != bundle.character_list(wall.left_cone) || ups != bundle.character_list(wall.right_cone) {
        return fail("paired characters differ from the cone characters");
    }
    Ok(())
}

/// Splitting types on every wall, in [`crate::Fan::walls`] order.
pub fn restrict_all<F: Field>(bundle: &ToricBundle<F>) -> Result<Vec<CurveSplitting>> {
    bundle.fan().walls().iter().map(|w| restrict_to_curve(bundle, w)).collect()
}

/// `(ample, nef)` from the degrees on all invariant curves.
pub fn is_ample_nef(restrictions: &[CurveSplitting]) -> (bool, bool) {
    let degrees = restrictions.iter().flat_map(|s| s.pairs.iter().map(|p| p.degree));
    let (mut ample, mut nef) = (true, true);
    for a in degrees {
        ample &= a > 0;
        nef &= a >= 0;
    }
    (ample, nef)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WallDegrees {
    /// 1-based wall number.
    pub wall: usize,
    /// 1-based rays of the wall.
    pub rays: Vec<usize>,
    pub degrees: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PositivityReport {
    pub globally_generated: bool,
    pub jets: BTreeMap<i64, bool>,
    pub very_ample: bool,
    /// Equal to `jets`: separating `k`-jets and `k`-jet ampleness coincide.
    pub k_jet_ample: BTreeMap<i64, bool>,
    pub ample: bool,
    pub nef: bool,
    pub wall_degrees: Vec<WallDegrees>,
    pub witnesses: Vec<Witness>,
}

/// Every positivity flag; `jets` lists the orders to decide (order 1 is always
/// included for very ampleness).
pub fn analyze<F: Field>(bundle: &ToricBundle<F>, jets: &[i64]) -> Result<PositivityReport> {
    let generation = is_globally_generated(bundle);
    let mut witnesses: Vec<Witness> = generation.witness.iter().cloned().collect();
    let mut orders: BTreeSet<i64> = jets.iter().copied().collect();
    orders.insert(1);
    let mut jet_flags = BTreeMap::new();
    for &k in &orders {
        let v = separates_k_jets(bundle, k)?;
        if let Some(w) = v.witness {
            if k > 0 {
                witnesses.push(w);
            }
        }
        jet_flags.insert(k, v.holds);
    }
    let restrictions = restrict_all(bundle)?;
    let (ample, nef) = is_ample_nef(&restrictions);
    let wall_degrees = restrictions
        .iter()
        .enumerate()
        .map(|(n, s)| WallDegrees {
            wall: n + 1,
            rays: s.wall.ray_indices.iter().map(|i| i + 1).collect(),
            degrees: s.degrees(),
        })
        .collect();
    Ok(PositivityReport {
        globally_generated: generation.holds,
        very_ample: jet_flags[&1],
        k_jet_ample: jet_flags.clone(),
        jets: jet_flags,
        ample,
        nef,
        wall_degrees,
        witnesses,
    })
}

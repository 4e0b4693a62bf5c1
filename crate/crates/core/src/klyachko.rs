//! Klyachko filtrations, the compatibility condition, and the per-cone
//! splitting data `u(σ)`, `B_σ`, `E_u^σ`, `E_{>u}^σ`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::exactlin::{Echelon, Subspace};
use crate::fan::Fan;
use crate::matroid::{GroundSet, IntersectionLattice};
use crate::scalar::{pairing, Field};
use crate::Rational;

/// One step `E^v(j) = span` for `previous.through < j <= through`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiltrationStep<F: Field = Rational> {
    pub through: i64,
    pub span: Subspace<F>,
}

/// A decreasing `Z`-filtration of `E`, stored by its steps.
///
/// `E^v(j)` is `E` for `j <= steps[0].through`, `steps[k].span` on
/// `(steps[k-1].through, steps[k].through]`, and `0` above the last step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Filtration<F: Field = Rational> {
    steps: Vec<FiltrationStep<F>>,
    zero: Subspace<F>,
}

impl<F: Field> Filtration<F> {
    pub fn new(rank: usize, steps: Vec<FiltrationStep<F>>) -> Result<Self> {
        let Some(first) = steps.first() else {
            return Err(Error::input("steps", "a filtration needs at least one step"));
        };
        for (k, step) in steps.iter().enumerate() {
            if step.span.ambient_dim() != rank {
                return Err(Error::input(
                    format!("steps[{k}].span"),
                    format!("vectors have {} entries, rank is {rank}", step.span.ambient_dim()),
                ));
            }
            if step.span.is_zero() {
                return Err(Error::input(format!("steps[{k}].span"), "spans must be nonzero"));
            }
        }
        if !first.span.is_full() {
            return Err(Error::input("steps[0].span", format!("first span must be all of E (rank {rank})")));
        }
        for (k, pair) in steps.windows(2).enumerate() {
            if pair[1].through <= pair[0].through {
                return Err(Error::input(format!("steps[{}].through", k + 1), "throughs must strictly increase"));
            }
            if pair[1].span.dim() >= pair[0].span.dim() || !pair[0].span.contains_subspace(&pair[1].span) {
                return Err(Error::input(format!("steps[{}].span", k + 1), "spans must strictly decrease"));
            }
        }
        Ok(Self { steps, zero: Subspace::zero(rank) })
    }

    /// `E` up to `through` and `0` above: the filtration of a line bundle
    /// (or of a trivial twist of `E`).
    pub fn constant(rank: usize, through: i64) -> Self {
        Self { steps: vec![FiltrationStep { through, span: Subspace::full(rank) }], zero: Subspace::zero(rank) }
    }

    pub fn rank(&self) -> usize {
        self.zero.ambient_dim()
    }

    pub fn steps(&self) -> &[FiltrationStep<F>] {
        &self.steps
    }

    /// `E^v(j)`.
    pub fn at(&self, j: i64) -> &Subspace<F> {
        match self.steps.iter().find(|s| j <= s.through) {
            Some(step) => &step.span,
            None => &self.zero,
        }
    }

    /// The values `j` with `E^v(j) != E^v(j+1)`, ascending.
    pub fn jumps(&self) -> impl Iterator<Item = i64> + '_ {
        self.steps.iter().map(|s| s.through)
    }

    /// `max { j : e ∈ E^v(j) }`.
    pub fn value_of(&self, e: &[F]) -> Result<i64> {
        if e.len() != self.rank() {
            return Err(Error::DimensionMismatch { expected: self.rank(), found: e.len() });
        }
        if e.iter().all(|x| x.is_zero()) {
            return Err(Error::ZeroVector);
        }
        let step = self.steps.iter().rev().find(|s| s.span.contains(e)).expect("first span is E");
        Ok(step.through)
    }

    /// Shift every jump by `by`; tensoring with a line bundle.
    pub fn shifted(&self, by: i64) -> Self {
        let steps = self.steps.iter().map(|s| FiltrationStep { through: s.through + by, span: s.span.clone() }).collect();
        Self { steps, zero: self.zero.clone() }
    }
}

/// The chosen basis `B_σ` with its characters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeSplitting<F: Field = Rational> {
    pub cone: usize,
    pub entries: Vec<SplittingEntry<F>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplittingEntry<F: Field = Rational> {
    pub character: Vec<i64>,
    pub vector: Vec<F>,
    /// Position of `vector` in the ground set used for the selection.
    pub ground_index: usize,
}

impl<F: Field> ConeSplitting<F> {
    /// `B_σ`-coordinates of `e`.
    pub fn coordinates(&self, e: &[F]) -> Vec<F> {
        let r = e.len();
        let basis: Vec<Vec<F>> = self.entries.iter().map(|x| x.vector.clone()).collect();
        // solve B^T a = e: transpose the basis into columns
        let matrix: Vec<Vec<F>> = (0..r).map(|i| basis.iter().map(|b| b[i].clone()).collect()).collect();
        let inv = crate::exactlin::invert(&matrix).expect("B_σ is a basis");
        inv.iter()
            .map(|row| row.iter().zip(e).fold(F::zero(), |acc, (a, b)| acc + a.clone() * b.clone()))
            .collect()
    }
}

/// Multiset of characters `u(σ)` as `(u, multiplicity)`, sorted by `u`.
pub type CharacterMultiset = Vec<(Vec<i64>, usize)>;

/// A torus-equivariant vector bundle given by its fan and Klyachko data.
///
/// Construction validates the fan and the compatibility condition on every
/// maximal cone and caches the intersection lattice, ground set and splittings.
#[derive(Clone, Debug)]
pub struct ToricBundle<F: Field = Rational> {
    fan: Fan,
    rank: usize,
    filtrations: Vec<Filtration<F>>,
    duals: Vec<Vec<Vec<i64>>>,
    characters: Vec<CharacterMultiset>,
    lattice: IntersectionLattice<F>,
    ground: GroundSet<F>,
    ground_bounds: Vec<Vec<i64>>,
    splittings: Vec<ConeSplitting<F>>,
}

impl<F: Field> ToricBundle<F> {
    pub fn new(fan: Fan, rank: usize, filtrations: Vec<Filtration<F>>) -> Result<Self> {
        fan.ensure_valid()?;
        if rank == 0 {
            return Err(Error::input("bundle.rank", "rank must be positive"));
        }
        if filtrations.len() != fan.num_rays() {
            return Err(Error::input(
                "bundle.filtrations",
                format!("expected {} filtrations (one per ray), found {}", fan.num_rays(), filtrations.len()),
            ));
        }
        if let Some(i) = filtrations.iter().position(|f| f.rank() != rank) {
            return Err(Error::input(format!("bundle.filtrations[{i}]"), format!("spans must live in rank {rank}")));
        }
        let duals = (0..fan.num_cones()).map(|c| fan.dual_generators(c)).collect::<Result<Vec<_>>>()?;
        let lattice = IntersectionLattice::from_filtrations(rank, &filtrations)?;
        let ground = GroundSet::new(&lattice)?;
        let mut bundle = Self {
            fan,
            rank,
            filtrations,
            duals,
            characters: Vec::new(),
            lattice,
            ground,
            ground_bounds: Vec::new(),
            splittings: Vec::new(),
        };
        bundle.characters = (0..bundle.fan.num_cones()).map(|c| bundle.compute_characters(c)).collect::<Result<_>>()?;
        bundle.ground_bounds = bundle.ground.vectors().iter().map(|e| bundle.bounds(e)).collect::<Result<_>>()?;
        bundle.splittings =
            (0..bundle.fan.num_cones()).map(|c| bundle.splitting_basis(c, &bundle.ground)).collect::<Result<_>>()?;
        Ok(bundle)
    }

    pub fn fan(&self) -> &Fan {
        &self.fan
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn filtrations(&self) -> &[Filtration<F>] {
        &self.filtrations
    }

    pub fn filtration(&self, ray: usize) -> &Filtration<F> {
        &self.filtrations[ray]
    }

    pub fn lattice(&self) -> &IntersectionLattice<F> {
        &self.lattice
    }

    pub fn ground_set(&self) -> &GroundSet<F> {
        &self.ground
    }

    /// Filtration values `a_i(e)` of the `g`-th ground vector, one per ray.
    pub fn ground_bounds(&self, g: usize) -> &[i64] {
        &self.ground_bounds[g]
    }

    /// Dual generators `w_1..w_d` of cone `c`, ordered like [`Fan::cone`].
    pub fn duals(&self, c: usize) -> &[Vec<i64>] {
        &self.duals[c]
    }

    /// `u(σ)` for cone `c`.
    pub fn cone_characters(&self, c: usize) -> &CharacterMultiset {
        &self.characters[c]
    }

    /// `u(σ)` with multiplicities expanded, sorted.
    pub fn character_list(&self, c: usize) -> Vec<Vec<i64>> {
        self.characters[c].iter().flat_map(|(u, m)| std::iter::repeat_n(u.clone(), *m)).collect()
    }

    pub fn splitting(&self, c: usize) -> &ConeSplitting<F> {
        &self.splittings[c]
    }

    pub fn splittings(&self) -> &[ConeSplitting<F>] {
        &self.splittings
    }

    /// `max { j : e ∈ E^{v_i}(j) }`.
    pub fn filtration_value(&self, e: &[F], ray: usize) -> Result<i64> {
        self.filtrations[ray].value_of(e)
    }

    /// Filtration values of `e` on every ray: the right-hand sides of `P_e`.
    pub fn bounds(&self, e: &[F]) -> Result<Vec<i64>> {
        self.filtrations.iter().map(|f| f.value_of(e)).collect()
    }

    /// `V_u = ∩_i E^{v_i}(<u, v_i>)` over all rays.
    pub fn subspace_at(&self, u: &[i64]) -> Subspace<F> {
        let spaces = self.fan.rays().iter().zip(&self.filtrations).map(|(v, f)| f.at(pairing(u, v)));
        Subspace::intersect_all(self.rank, spaces).expect("same ambient")
    }

    /// `E_u^σ = ∩_{v_i ∈ σ} E^{v_i}(<u, v_i>)`.
    pub fn cone_space(&self, c: usize, u: &[i64]) -> Subspace<F> {
        self.rays_space(self.fan.cone(c), u)
    }

    fn rays_space(&self, rays: &[usize], u: &[i64]) -> Subspace<F> {
        let spaces = rays.iter().map(|&i| self.filtrations[i].at(pairing(u, self.fan.ray(i))));
        Subspace::intersect_all(self.rank, spaces).expect("same ambient")
    }

    /// `(E_u^σ, E_{>u}^σ)`, the latter as the sum over the shifts `u + w_j`.
    pub fn cone_subspaces(&self, c: usize, u: &[i64]) -> (Subspace<F>, Subspace<F>) {
        let here = self.cone_space(c, u);
        let above: Vec<Subspace<F>> = self.duals[c]
            .iter()
            .map(|w| {
                let shifted: Vec<i64> = u.iter().zip(w).map(|(a, b)| a + b).collect();
                self.cone_space(c, &shifted)
            })
            .collect();
        let above = Subspace::sum_all(self.rank, &above).expect("same ambient");
        (here, above)
    }

    fn compute_characters(&self, c: usize) -> Result<CharacterMultiset> {
        let cone = self.fan.cone(c);
        let duals = &self.duals[c];
        let d = cone.len();
        let jumps: Vec<Vec<i64>> = cone.iter().map(|&i| self.filtrations[i].jumps().collect()).collect();
        let mut out = BTreeMap::new();
        let mut total = 0usize;
        let mut index = vec![0usize; d];
        loop {
            let levels: Vec<i64> = (0..d).map(|k| jumps[k][index[k]]).collect();
            let mut u = vec![0i64; d];
            for (w, t) in duals.iter().zip(&levels) {
                for (x, y) in u.iter_mut().zip(w) {
                    *x += t * y;
                }
            }
            let mut m = 0i64;
            for mask in 0u32..(1 << d) {
                let spaces = (0..d).map(|k| self.filtrations[cone[k]].at(levels[k] + i64::from(mask >> k & 1)));
                let dim = Subspace::intersect_all(self.rank, spaces)?.dim() as i64;
                m += if mask.count_ones() % 2 == 0 { dim } else { -dim };
            }
            if m < 0 {
                return Err(Error::IncompatibleFiltrations {
                    cone: c + 1,
                    detail: format!("negative multiplicity {m} at character {}", crate::exactlin::vector_text(&u)),
                });
            }
            if m > 0 {
                total += m as usize;
                out.insert(u, m as usize);
            }
            let mut k = 0;
            loop {
                if k == d {
                    if total != self.rank {
                        return Err(Error::IncompatibleFiltrations {
                            cone: c + 1,
                            detail: format!("multiplicities sum to {total}, rank is {}", self.rank),
                        });
                    }
                    return Ok(out.into_iter().collect());
                }
                index[k] += 1;
                if index[k] < jumps[k].len() {
                    break;
                }
                index[k] = 0;
                k += 1;
            }
        }
    }

    /// Select `B_σ` from `ground` and verify it splits every ray filtration of
    /// the cone.
    ///
    /// For each character `u` the lifts of `E_u^σ / E_{>u}^σ` are chosen greedily
    /// by decreasing jet depth (the largest `k` with `u - k·conv(0, w_1..w_d)`
    /// inside `P_e`, or `-1` when `u ∉ P_e`), then by ground-set order. Greedy
    /// selection on the quotient matroid makes the depth profile of the chosen
    /// basis optimal for every `k` at once.
    pub fn splitting_basis(&self, c: usize, ground: &GroundSet<F>) -> Result<ConeSplitting<F>> {
        let cone = self.fan.cone(c);
        let mut entries = Vec::with_capacity(self.rank);
        for (u, m) in &self.characters[c] {
            let (here, above) = self.cone_subspaces(c, u);
            let mut candidates = Vec::new();
            for (g, e) in ground.vectors().iter().enumerate() {
                if here.contains(e) && !above.contains(e) {
                    let bounds = self.bounds(e)?;
                    candidates.push((std::cmp::Reverse(self.jet_depth(c, u, &bounds)), g));
                }
            }
            candidates.sort();
            let mut echelon = Echelon::from_rows(self.rank, above.basis().iter());
            let mut picked = 0;
            for (_, g) in candidates {
                if picked == *m {
                    break;
                }
                if echelon.insert(&ground.vectors()[g]) {
                    entries.push(SplittingEntry { character: u.clone(), vector: ground.vectors()[g].clone(), ground_index: g });
                    picked += 1;
                }
            }
            if picked != *m {
                return Err(Error::IncompatibleFiltrations {
                    cone: c + 1,
                    detail: format!(
                        "quotient at character {} has dimension {picked}, multiplicity is {m}",
                        crate::exactlin::vector_text(u)
                    ),
                });
            }
        }
        let splitting = ConeSplitting { cone: c, entries };
        self.verify_splitting(&splitting, cone)?;
        Ok(splitting)
    }

    fn verify_splitting(&self, s: &ConeSplitting<F>, cone: &[usize]) -> Result<()> {
        let fail = |detail: String| Error::IncompatibleFiltrations { cone: s.cone + 1, detail };
        let all: Vec<Vec<F>> = s.entries.iter().map(|e| e.vector.clone()).collect();
        if crate::exactlin::rank(&all, self.rank) != self.rank {
            return Err(fail("selected vectors are not a basis".into()));
        }
        for &i in cone {
            let v = self.fan.ray(i);
            let f = &self.filtrations[i];
            let mut levels: Vec<i64> = Vec::new();
            for j in f.jumps() {
                levels.extend([j, j + 1]);
            }
            for e in &s.entries {
                let p = pairing(&e.character, v);
                levels.extend([p, p + 1]);
            }
            levels.sort_unstable();
            levels.dedup();
            for j in levels {
                let chosen: Vec<Vec<F>> =
                    s.entries.iter().filter(|e| pairing(&e.character, v) >= j).map(|e| e.vector.clone()).collect();
                if Subspace::span(self.rank, &chosen)? != *f.at(j) {
                    return Err(fail(format!("ray {} is not split at level {j}", i + 1)));
                }
            }
        }
        Ok(())
    }

    /// Largest `k` with `u` and every `u - k·w_j` inside the polytope with the
    /// given bounds; `-1` when `u` itself is outside, `i64::MAX` when no ray
    /// limits the growth.
    pub(crate) fn jet_depth(&self, c: usize, u: &[i64], bounds: &[i64]) -> i64 {
        let mut depth = i64::MAX;
        for (j, v) in self.fan.rays().iter().enumerate() {
            let slack = bounds[j] - pairing(u, v);
            if slack < 0 {
                return -1;
            }
            for w in &self.duals[c] {
                let rate = pairing(w, v);
                if rate < 0 {
                    depth = depth.min(slack / -rate);
                }
            }
        }
        depth
    }

    /// `E ⊕ other`, with `E` on the first coordinates.
    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        if self.fan != other.fan {
            return Err(Error::input("bundle", "direct summands must live on the same fan"));
        }
        let r = self.rank + other.rank;
        let embed = |v: &[F], offset: usize| {
            let mut out = vec![F::zero(); r];
            for (k, x) in v.iter().enumerate() {
                out[offset + k] = x.clone();
            }
            out
        };
        let mut filtrations = Vec::with_capacity(self.filtrations.len());
        for (a, b) in self.filtrations.iter().zip(&other.filtrations) {
            let mut levels: Vec<i64> = a.jumps().chain(b.jumps()).collect();
            levels.sort_unstable();
            levels.dedup();
            let steps = levels
                .iter()
                .map(|&j| {
                    let mut rows: Vec<Vec<F>> = a.at(j).basis().iter().map(|v| embed(v, 0)).collect();
                    rows.extend(b.at(j).basis().iter().map(|v| embed(v, self.rank)));
                    FiltrationStep { through: j, span: Subspace::span_unchecked(r, rows) }
                })
                .collect();
            filtrations.push(Filtration::new(r, steps)?);
        }
        Self::new(self.fan.clone(), r, filtrations)
    }

    /// `E ⊗ O(Σ a_i D_i)`.
    pub fn twist(&self, coefficients: &[i64]) -> Result<Self> {
        if coefficients.len() != self.fan.num_rays() {
            return Err(Error::DimensionMismatch { expected: self.fan.num_rays(), found: coefficients.len() });
        }
        let filtrations = self.filtrations.iter().zip(coefficients).map(|(f, &a)| f.shifted(a)).collect();
        Self::new(self.fan.clone(), self.rank, filtrations)
    }

    /// The line bundle `O(Σ a_i D_i)`.
    pub fn line_bundle(fan: Fan, coefficients: &[i64]) -> Result<Self> {
        if coefficients.len() != fan.num_rays() {
            return Err(Error::DimensionMismatch { expected: fan.num_rays(), found: coefficients.len() });
        }
        let filtrations = coefficients.iter().map(|&a| Filtration::constant(1, a)).collect();
        Self::new(fan, 1, filtrations)
    }
}

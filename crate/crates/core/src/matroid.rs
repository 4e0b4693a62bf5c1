//! The intersection lattice `L(E)` of the filtration steps and the ground set
//! of its free-expansion matroid.

use std::collections::BTreeSet;

use crate::error::Result;
use crate::exactlin::{primitive, Subspace};
use crate::klyachko::{Filtration, ToricBundle};
use crate::scalar::Field;
use crate::Rational;

/// All intersections of filtration steps, including `0` and `E`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntersectionLattice<F: Field = Rational> {
    rank: usize,
    members: Vec<Subspace<F>>,
}

impl<F: Field> IntersectionLattice<F> {
    /// Close the set of filtration steps under pairwise intersection.
    pub fn from_filtrations(rank: usize, filtrations: &[Filtration<F>]) -> Result<Self> {
        let mut members: BTreeSet<Subspace<F>> = BTreeSet::new();
        members.insert(Subspace::zero(rank));
        members.insert(Subspace::full(rank));
        for f in filtrations {
            for step in f.steps() {
                members.insert(step.span.clone());
            }
        }
        let mut frontier: Vec<Subspace<F>> = members.iter().cloned().collect();
        while !frontier.is_empty() {
            let snapshot: Vec<Subspace<F>> = members.iter().cloned().collect();
            let mut fresh = Vec::new();
            for a in &frontier {
                for b in &snapshot {
                    let meet = a.intersect(b)?;
                    if !members.contains(&meet) && !fresh.contains(&meet) {
                        fresh.push(meet);
                    }
                }
            }
            members.extend(fresh.iter().cloned());
            frontier = fresh;
        }
        let mut members: Vec<Subspace<F>> = members.into_iter().collect();
        members.sort_by(|a, b| a.dim().cmp(&b.dim()).then_with(|| a.cmp(b)));
        Ok(Self { rank, members })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Members ordered by dimension, then by their echelon matrices.
    pub fn members(&self) -> &[Subspace<F>] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn position(&self, space: &Subspace<F>) -> Option<usize> {
        self.members.iter().position(|m| m == space)
    }
}

/// Representing vectors of the free-expansion matroid, one per line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroundSet<F: Field = Rational> {
    vectors: Vec<Vec<F>>,
    /// `flats[k]` lists the vectors lying in lattice member `k`.
    flats: Vec<Vec<usize>>,
}

impl<F: Field> GroundSet<F> {
    /// Deterministic construction: complements are echelon extensions.
    pub fn new(lattice: &IntersectionLattice<F>) -> Result<Self> {
        Self::build(lattice, |_, complement| complement)
    }

    /// Construction where every complement basis is perturbed by a
    /// unitriangular integer change of basis and by integer multiples of the
    /// part it complements. `coefficient` supplies the integers.
    pub fn with_mixer(lattice: &IntersectionLattice<F>, mut coefficient: impl FnMut() -> i64) -> Result<Self> {
        Self::build(lattice, |meet: &Subspace<F>, complement: Vec<Vec<F>>| {
            let mut mixed = Vec::with_capacity(complement.len());
            for (k, x) in complement.iter().enumerate() {
                let mut y = x.clone();
                let others = complement[k + 1..].iter().chain(meet.basis());
                for other in others {
                    let c = F::from_i64(coefficient());
                    for (a, b) in y.iter_mut().zip(other) {
                        *a = a.clone() + c.clone() * b.clone();
                    }
                }
                mixed.push(primitive(&y));
            }
            mixed
        })
    }

    fn build(
        lattice: &IntersectionLattice<F>,
        mut adjust: impl FnMut(&Subspace<F>, Vec<Vec<F>>) -> Vec<Vec<F>>,
    ) -> Result<Self> {
        let r = lattice.rank();
        let mut vectors: Vec<Vec<F>> = Vec::new();
        for member in lattice.members() {
            let inside = lattice.members().iter().filter(|m| m.dim() < member.dim() && member.contains_subspace(m));
            let below = Subspace::sum_all(r, inside)?;
            let complement = member.complement_in(&below)?;
            if !complement.is_empty() {
                vectors.extend(adjust(&below, complement));
            }
        }
        vectors.sort();
        vectors.dedup();
        let flats = lattice
            .members()
            .iter()
            .map(|m| (0..vectors.len()).filter(|&i| m.contains(&vectors[i])).collect())
            .collect();
        Ok(Self { vectors, flats })
    }

    pub fn vectors(&self) -> &[Vec<F>] {
        &self.vectors
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// Ground-set indices lying in lattice member `k`.
    pub fn flat(&self, k: usize) -> &[usize] {
        &self.flats[k]
    }

    pub fn flats(&self) -> &[Vec<usize>] {
        &self.flats
    }

    pub fn index_of(&self, v: &[F]) -> Option<usize> {
        let p = primitive(v);
        self.vectors.iter().position(|x| *x == p)
    }
}

/// `L(E)` of a bundle.
pub fn intersection_lattice<F: Field>(bundle: &ToricBundle<F>) -> Result<IntersectionLattice<F>> {
    IntersectionLattice::from_filtrations(bundle.rank(), bundle.filtrations())
}

/// The deterministic ground set of a bundle's lattice.
pub fn ground_set<F: Field>(lattice: &IntersectionLattice<F>) -> Result<GroundSet<F>> {
    GroundSet::new(lattice)
}

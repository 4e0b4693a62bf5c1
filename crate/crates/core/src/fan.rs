//! Smooth complete fans: validation, dual cones, and walls.
//!
//! Ray and cone indices are 0-based internally; everything user-facing
//! (reports, messages, files) adds one.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactlin::invert;
use crate::scalar::{pairing, Field};
use crate::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fan {
    dim: usize,
    rays: Vec<Vec<i64>>,
    cones: Vec<Vec<usize>>,
}

/// A codimension-one cone together with the two maximal cones it separates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Wall {
    pub ray_indices: Vec<usize>,
    pub left_cone: usize,
    pub right_cone: usize,
    /// Primitive generator of the wall's orthogonal, positive on the left cone.
    pub m_tau: Vec<i64>,
    /// The ray of the left cone not in the wall.
    pub v_tau: usize,
    /// The ray of the right cone not in the wall.
    pub v_opposite: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct FanReport {
    pub smooth: bool,
    pub complete: bool,
    pub violations: Vec<String>,
}

impl FanReport {
    pub fn is_valid(&self) -> bool {
        self.smooth && self.complete && self.violations.is_empty()
    }
}

fn gcd_all(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |acc, &x| acc.gcd(&x))
}

fn subsets_dropping_one(cone: &[usize]) -> impl Iterator<Item = (Vec<usize>, usize)> + '_ {
    (0..cone.len()).map(move |skip| {
        let face: Vec<usize> = cone.iter().enumerate().filter(|(i, _)| *i != skip).map(|(_, &r)| r).collect();
        (face, cone[skip])
    })
}

impl Fan {
    /// Build a fan from rays in `Z^dim` and maximal cones given as 0-based ray indices.
    ///
    /// Only structural checks happen here; geometric conditions are reported by
    /// [`Fan::validate`].
    pub fn new(dim: usize, rays: Vec<Vec<i64>>, cones: Vec<Vec<usize>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidFan("lattice rank must be positive".into()));
        }
        for (i, ray) in rays.iter().enumerate() {
            if ray.len() != dim {
                return Err(Error::input(format!("rays[{i}]"), format!("expected {dim} entries, found {}", ray.len())));
            }
        }
        let mut sorted_cones = Vec::with_capacity(cones.len());
        for (c, cone) in cones.iter().enumerate() {
            let mut sorted = cone.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != cone.len() {
                return Err(Error::input(format!("max_cones[{c}]"), "repeated ray index"));
            }
            if let Some(&bad) = sorted.iter().find(|&&r| r >= rays.len()) {
                return Err(Error::input(format!("max_cones[{c}]"), format!("ray {} does not exist", bad + 1)));
            }
            sorted_cones.push(sorted);
        }
        Ok(Self { dim, rays, cones: sorted_cones })
    }

    /// Build from 1-indexed cones, as they appear in input files.
    pub fn from_one_indexed(dim: usize, rays: Vec<Vec<i64>>, cones: &[Vec<usize>]) -> Result<Self> {
        let mut zero_based = Vec::with_capacity(cones.len());
        for (c, cone) in cones.iter().enumerate() {
            if cone.contains(&0) {
                return Err(Error::input(format!("max_cones[{c}]"), "ray indices are 1-based"));
            }
            zero_based.push(cone.iter().map(|r| r - 1).collect());
        }
        Self::new(dim, rays, zero_based)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rays(&self) -> &[Vec<i64>] {
        &self.rays
    }

    pub fn ray(&self, i: usize) -> &[i64] {
        &self.rays[i]
    }

    pub fn num_rays(&self) -> usize {
        self.rays.len()
    }

    pub fn cones(&self) -> &[Vec<usize>] {
        &self.cones
    }

    /// Ray indices of a maximal cone, ascending.
    pub fn cone(&self, c: usize) -> &[usize] {
        &self.cones[c]
    }

    pub fn num_cones(&self) -> usize {
        self.cones.len()
    }

    fn determinant(&self, cone: &[usize]) -> Option<i64> {
        let m: Vec<Vec<Rational>> = cone.iter().map(|&r| crate::scalar::to_field(&self.rays[r])).collect();
        determinant(&m).to_i64()
    }

    /// Check smoothness and completeness, listing every violation found.
    pub fn validate(&self) -> FanReport {
        let mut violations = Vec::new();
        let d = self.dim;

        for (i, ray) in self.rays.iter().enumerate() {
            match gcd_all(ray) {
                0 => violations.push(format!("ray {} is zero", i + 1)),
                1 => {}
                g => violations.push(format!("ray {} is not primitive (gcd {g})", i + 1)),
            }
        }

        let mut smooth = true;
        let mut shape_ok = true;
        for (c, cone) in self.cones.iter().enumerate() {
            if cone.len() != d {
                violations.push(format!("cone {} has {} rays, expected {d}", c + 1, cone.len()));
                smooth = false;
                shape_ok = false;
                continue;
            }
            match self.determinant(cone) {
                Some(1) | Some(-1) => {}
                det => {
                    smooth = false;
                    violations.push(format!("cone {} is not unimodular (determinant {})", c + 1, det.unwrap_or(0)));
                }
            }
        }
        let distinct: BTreeSet<&Vec<usize>> = self.cones.iter().collect();
        if distinct.len() != self.cones.len() {
            violations.push("a maximal cone is listed twice".into());
            shape_ok = false;
        }
        let used: BTreeSet<usize> = self.cones.iter().flatten().copied().collect();
        for i in 0..self.rays.len() {
            if !used.contains(&i) {
                violations.push(format!("ray {} lies in no maximal cone", i + 1));
            }
        }

        let mut complete = shape_ok && !self.cones.is_empty();
        if !complete {
            if self.cones.is_empty() {
                violations.push("fan has no maximal cones".into());
            }
            return FanReport { smooth, complete, violations };
        }

        let faces = self.face_incidence();
        for (face, owners) in &faces {
            if owners.len() != 2 {
                complete = false;
                violations.push(format!(
                    "wall on rays {:?} lies in {} maximal cone(s)",
                    face.iter().map(|r| r + 1).collect::<Vec<_>>(),
                    owners.len()
                ));
            }
        }

        if smooth {
            for (face, owners) in &faces {
                if owners.len() != 2 {
                    continue;
                }
                let (left, right) = (owners[0].0, owners[1].0);
                let m = self.wall_normal(left, face);
                if pairing(&m, &self.rays[owners[1].1]) != -1 {
                    complete = false;
                    violations.push(format!("cones {} and {} overlap across their common wall", left + 1, right + 1));
                }
            }
        }

        if !self.connected(&faces) {
            complete = false;
            violations.push("maximal cones are not connected through walls".into());
        }

        if smooth && complete {
            let covering = self.covering_degree();
            if covering != 1 {
                complete = false;
                violations.push(format!("cones cover a generic point {covering} times"));
            }
        }

        FanReport { smooth, complete, violations }
    }

    /// Validate and turn any violation into an error.
    pub fn ensure_valid(&self) -> Result<()> {
        let report = self.validate();
        if report.is_valid() {
            Ok(())
        } else {
            Err(Error::InvalidFan(report.violations.join("; ")))
        }
    }

    /// Map from each (d-1)-subset of a maximal cone to the cones containing it,
    /// with the ray each cone adds.
    fn face_incidence(&self) -> BTreeMap<Vec<usize>, Vec<(usize, usize)>> {
        let mut faces: BTreeMap<Vec<usize>, Vec<(usize, usize)>> = BTreeMap::new();
        for (c, cone) in self.cones.iter().enumerate() {
            for (face, extra) in subsets_dropping_one(cone) {
                faces.entry(face).or_default().push((c, extra));
            }
        }
        faces
    }

    fn connected(&self, faces: &BTreeMap<Vec<usize>, Vec<(usize, usize)>>) -> bool {
        let n = self.cones.len();
        let mut adjacency = vec![Vec::new(); n];
        for owners in faces.values() {
            for a in owners {
                for b in owners {
                    if a.0 != b.0 {
                        adjacency[a.0].push(b.0);
                    }
                }
            }
        }
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(c) = queue.pop_front() {
            for &next in &adjacency[c] {
                if !seen[next] {
                    seen[next] = true;
                    queue.push_back(next);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Number of maximal cones whose interior contains a generic lattice point.
    fn covering_degree(&self) -> usize {
        let duals: Vec<Vec<Vec<i64>>> =
            (0..self.cones.len()).map(|c| self.dual_generators(c).expect("smooth")).collect();
        let mut base = 2i64;
        loop {
            let point: Vec<i64> = (0..self.dim as u32).map(|k| base.pow(k) * if k % 2 == 0 { 1 } else { -1 } + k as i64).collect();
            let coords: Vec<Vec<i64>> = duals.iter().map(|ws| ws.iter().map(|w| pairing(w, &point)).collect()).collect();
            if coords.iter().flatten().all(|&x| x != 0) {
                return coords.iter().filter(|cs| cs.iter().all(|&x| x > 0)).count();
            }
            base += 1;
        }
    }

    /// Dual basis `w_1..w_d` of a unimodular cone: `<w_j, v_i> = δ_ij`, in the
    /// order of [`Fan::cone`].
    pub fn dual_generators(&self, c: usize) -> Result<Vec<Vec<i64>>> {
        let cone = &self.cones[c];
        if cone.len() != self.dim {
            return Err(Error::InvalidFan(format!("cone {} is not full-dimensional", c + 1)));
        }
        let m: Vec<Vec<Rational>> = cone.iter().map(|&r| crate::scalar::to_field(&self.rays[r])).collect();
        let inv = invert(&m).ok_or_else(|| Error::InvalidFan(format!("cone {} is singular", c + 1)))?;
        // rows of (V^{-1})^T are the columns of V^{-1}
        let mut out = vec![vec![0i64; self.dim]; self.dim];
        for (i, row) in inv.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                out[j][i] = x.to_i64().ok_or_else(|| Error::InvalidFan(format!("cone {} is not unimodular", c + 1)))?;
            }
        }
        Ok(out)
    }

    fn wall_normal(&self, cone: usize, face: &[usize]) -> Vec<i64> {
        let duals = self.dual_generators(cone).expect("smooth cone");
        let pos = self.cones[cone].iter().position(|r| !face.contains(r)).expect("face is proper");
        duals[pos].clone()
    }

    /// All walls, ordered by their ray sets. The left cone is the one with the
    /// smaller index.
    pub fn walls(&self) -> Vec<Wall> {
        self.face_incidence()
            .into_iter()
            .filter(|(_, owners)| owners.len() == 2)
            .map(|(face, owners)| {
                let (left, v_tau) = owners[0];
                let (right, v_opposite) = owners[1];
                let m_tau = self.wall_normal(left, &face);
                Wall { ray_indices: face, left_cone: left, right_cone: right, m_tau, v_tau, v_opposite }
            })
            .collect()
    }

    /// Cone indices containing every ray in `rays`.
    pub fn cones_containing(&self, rays: &[usize]) -> Vec<usize> {
        (0..self.cones.len()).filter(|&c| rays.iter().all(|r| self.cones[c].contains(r))).collect()
    }

    /// Projective space `P^d`: rays `e_1..e_d, -(e_1+..+e_d)`, cone `i` omits ray `i`.
    pub fn projective_space(d: usize) -> Self {
        let mut rays: Vec<Vec<i64>> = (0..d).map(|i| (0..d).map(|j| i64::from(i == j)).collect()).collect();
        rays.push(vec![-1; d]);
        let cones = (0..=d).map(|skip| (0..=d).filter(|&r| r != skip).collect()).collect();
        Self::new(d, rays, cones).expect("well-formed")
    }

    /// Hirzebruch surface `F_a` with rays `(1,0),(0,1),(-1,a),(0,-1)`.
    pub fn hirzebruch(a: i64) -> Self {
        let rays = vec![vec![1, 0], vec![0, 1], vec![-1, a], vec![0, -1]];
        let cones = vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![0, 3]];
        Self::new(2, rays, cones).expect("well-formed")
    }

    /// `P^1 x P^1`.
    pub fn p1_x_p1() -> Self {
        Self::hirzebruch(0)
    }
}

fn determinant(m: &[Vec<Rational>]) -> Rational {
    let n = m.len();
    let mut a = m.to_vec();
    let mut det = Rational::from_i64(1);
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| a[r][col] != Rational::from_i64(0)) else {
            return Rational::from_i64(0);
        };
        if p != col {
            a.swap(p, col);
            det = -det;
        }
        let pivot = a[col][col].clone();
        det *= pivot.clone();
        for r in col + 1..n {
            let factor = a[r][col].clone() / pivot.clone();
            let (top, bottom) = a.split_at_mut(r);
            for (x, y) in bottom[0][col..].iter_mut().zip(&top[col][col..]) {
                *x -= factor.clone() * y.clone();
            }
        }
    }
    det
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p2() -> Fan {
        Fan::projective_space(2)
    }

    #[test]
    fn projective_plane_is_valid() {
        let f = p2();
        assert_eq!(f.cone(0), &[1, 2]);
        assert_eq!(f.cone(2), &[0, 1]);
        let report = f.validate();
        assert!(report.smooth && report.complete, "{report:?}");
    }

    #[test]
    fn missing_cone_is_incomplete() {
        let f = Fan::new(2, p2().rays().to_vec(), vec![vec![1, 2], vec![0, 2]]).unwrap();
        let report = f.validate();
        assert!(report.smooth);
        assert!(!report.complete);
    }

    #[test]
    fn determinant_two_is_not_smooth() {
        let rays = vec![vec![1, 0], vec![1, 2], vec![-1, -1]];
        let f = Fan::new(2, rays, vec![vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap();
        let report = f.validate();
        assert!(!report.smooth);
        assert!(report.violations.iter().any(|v| v.contains("determinant 2")));
    }

    #[test]
    fn double_cover_is_rejected() {
        // Six rays winding twice around the origin: every wall is two-sided.
        let rays = vec![vec![1, 0], vec![0, 1], vec![-1, -1], vec![1, 0], vec![0, 1], vec![-1, -1]];
        let cones = vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 4], vec![4, 5], vec![5, 0]];
        let f = Fan::new(2, rays, cones).unwrap();
        assert!(!f.validate().complete);
    }

    #[test]
    fn non_primitive_ray_is_flagged() {
        let rays = vec![vec![2, 0], vec![0, 1], vec![-1, -1]];
        let f = Fan::new(2, rays, vec![vec![1, 2], vec![0, 2], vec![0, 1]]).unwrap();
        assert!(!f.validate().is_valid());
    }

    #[test]
    fn dual_generators_examples() {
        assert_eq!(p2().dual_generators(2).unwrap(), vec![vec![1, 0], vec![0, 1]]);
        // cone on (0,1), (-1,-1)
        assert_eq!(p2().dual_generators(0).unwrap(), vec![vec![-1, 1], vec![-1, 0]]);
        let h = Fan::hirzebruch(1);
        // cone on (0,1), (-1,1)
        assert_eq!(h.dual_generators(1).unwrap(), vec![vec![1, 1], vec![-1, 0]]);
    }

    #[test]
    fn dual_generators_pair_to_identity() {
        for fan in [p2(), Fan::hirzebruch(1), Fan::hirzebruch(3), Fan::projective_space(3)] {
            for c in 0..fan.num_cones() {
                let ws = fan.dual_generators(c).unwrap();
                for (j, w) in ws.iter().enumerate() {
                    for (i, &r) in fan.cone(c).iter().enumerate() {
                        assert_eq!(pairing(w, fan.ray(r)), i64::from(i == j));
                    }
                }
            }
        }
    }

    #[test]
    fn wall_counts_and_normals() {
        let walls = p2().walls();
        assert_eq!(walls.len(), 3);
        let w = &walls[0];
        assert_eq!(w.ray_indices, vec![0]);
        // cones containing ray 1 are {1,3} (index 1) and {1,2} (index 2)
        assert_eq!((w.left_cone, w.right_cone), (1, 2));
        assert_eq!(Fan::p1_x_p1().walls().len(), 4);
        assert_eq!(Fan::projective_space(3).walls().len(), 6);
    }

    #[test]
    fn wall_between_sigma3_and_sigma2_has_expected_normal() {
        // Orient the wall pos((1,0)) with sigma_3 = pos((1,0),(0,1)) on the left.
        let f = p2();
        let m = f.wall_normal(2, &[0]);
        assert_eq!(m, vec![0, 1]);
        assert_eq!(pairing(&m, &[0, 1]), 1);
    }

    #[test]
    fn walls_pair_plus_one_and_minus_one() {
        for fan in [p2(), Fan::hirzebruch(1), Fan::hirzebruch(2), Fan::projective_space(3)] {
            for w in fan.walls() {
                assert_eq!(pairing(&w.m_tau, fan.ray(w.v_tau)), 1);
                assert_eq!(pairing(&w.m_tau, fan.ray(w.v_opposite)), -1);
                for &r in &w.ray_indices {
                    assert_eq!(pairing(&w.m_tau, fan.ray(r)), 0);
                }
            }
        }
    }

    #[test]
    fn one_dimensional_fan() {
        let f = Fan::projective_space(1);
        assert!(f.validate().is_valid());
        let walls = f.walls();
        assert_eq!(walls.len(), 1);
        assert!(walls[0].ray_indices.is_empty());
    }
}

//! The parliament of polytopes `{P_e}`, global sections, and jet simplices.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactlin::invert;
use crate::fan::Fan;
use crate::klyachko::ToricBundle;
use crate::scalar::{pairing, to_field, Field};
use crate::Rational;

/// `P = { u : <u, v_i> <= bounds[i] }` over the rays of a fan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polytope {
    pub bounds: Vec<i64>,
    /// Sorted; rational in general.
    pub vertices: Vec<Vec<Rational>>,
    /// Sorted integer points.
    pub lattice_points: Vec<Vec<i64>>,
}

impl Polytope {
    /// Vertices by solving every `d`-subset of inequalities; lattice points by
    /// scanning the vertex bounding box.
    ///
    /// The fan must be complete, which makes the polytope bounded.
    pub fn new(fan: &Fan, bounds: Vec<i64>) -> Result<Self> {
        if bounds.len() != fan.num_rays() {
            return Err(Error::DimensionMismatch { expected: fan.num_rays(), found: bounds.len() });
        }
        let d = fan.dim();
        let rays: Vec<Vec<Rational>> = fan.rays().iter().map(|v| to_field(v)).collect();
        let mut vertices: Vec<Vec<Rational>> = Vec::new();
        for subset in combinations(fan.num_rays(), d) {
            let normals: Vec<Vec<Rational>> = subset.iter().map(|&i| rays[i].clone()).collect();
            let Some(inv) = invert(&normals) else { continue };
            // u = N^{-1} a, with N the normal rows
            let point: Vec<Rational> = inv
                .iter()
                .map(|row| {
                    row.iter().zip(&subset).fold(Rational::zero(), |acc, (x, &i)| acc + x * Rational::from_i64(bounds[i]))
                })
                .collect();
            let feasible = rays.iter().zip(&bounds).all(|(v, &b)| dot(&point, v) <= Rational::from_i64(b));
            if feasible && !vertices.contains(&point) {
                vertices.push(point);
            }
        }
        vertices.sort();
        let lattice_points = if vertices.is_empty() { Vec::new() } else { scan(fan, &bounds, &vertices) };
        Ok(Self { bounds, vertices, lattice_points })
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Whether `u` satisfies every inequality.
    pub fn contains(&self, fan: &Fan, u: &[i64]) -> bool {
        fan.rays().iter().zip(&self.bounds).all(|(v, &b)| pairing(u, v) <= b)
    }

    /// Support function `max { <u, v> : u ∈ P }`; `None` when empty.
    pub fn support(&self, v: &[i64]) -> Option<Rational> {
        let v: Vec<Rational> = to_field(v);
        self.vertices.iter().map(|p| dot(p, &v)).max()
    }

    /// Dimension of the affine hull.
    pub fn dimension(&self) -> Option<usize> {
        let first = self.vertices.first()?;
        let diffs: Vec<Vec<Rational>> =
            self.vertices[1..].iter().map(|p| p.iter().zip(first).map(|(a, b)| a - b).collect()).collect();
        Some(crate::exactlin::rank(&diffs, first.len()))
    }

    /// For a polygon with integral vertices, the lattice lengths of the two
    /// edges at `vertex`.
    pub fn edge_lengths_at(&self, vertex: &[i64]) -> Option<Vec<i64>> {
        if vertex.len() != 2 || self.vertices.iter().any(|p| p.iter().any(|x| !x.is_integer())) {
            return None;
        }
        let pts: Vec<Vec<i64>> = self.vertices.iter().map(|p| p.iter().map(|x| x.to_i64().unwrap()).collect()).collect();
        if !pts.iter().any(|p| p == vertex) {
            return None;
        }
        if pts.len() == 1 {
            return Some(vec![0, 0]);
        }
        // neighbours are the points making extreme angles around `vertex`
        let others: Vec<&Vec<i64>> = pts.iter().filter(|p| *p != vertex).collect();
        let cross = |a: &[i64], b: &[i64]| (a[0] - vertex[0]) * (b[1] - vertex[1]) - (a[1] - vertex[1]) * (b[0] - vertex[0]);
        let mut lengths = Vec::new();
        for sign in [1i64, -1] {
            let nb = others.iter().find(|a| others.iter().all(|b| sign * cross(a, b) >= 0));
            if let Some(a) = nb {
                let g = num_integer::gcd(a[0] - vertex[0], a[1] - vertex[1]);
                lengths.push(g.abs());
            }
        }
        Some(lengths)
    }
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(k);
    fn go(start: usize, n: usize, k: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == k {
            out.push(current.clone());
            return;
        }
        for i in start..n {
            current.push(i);
            go(i + 1, n, k, current, out);
            current.pop();
        }
    }
    go(0, n, k, &mut current, &mut out);
    out
}

fn scan(fan: &Fan, bounds: &[i64], vertices: &[Vec<Rational>]) -> Vec<Vec<i64>> {
    let d = fan.dim();
    let lo: Vec<i64> = (0..d).map(|k| vertices.iter().map(|p| p[k].floor_i64()).min().unwrap()).collect();
    let hi: Vec<i64> = (0..d).map(|k| vertices.iter().map(|p| p[k].ceil_i64()).max().unwrap()).collect();
    let mut out = Vec::new();
    let mut u = lo.clone();
    loop {
        if fan.rays().iter().zip(bounds).all(|(v, &b)| pairing(&u, v) <= b) {
            out.push(u.clone());
        }
        let mut k = 0;
        loop {
            if k == d {
                return out;
            }
            u[k] += 1;
            if u[k] <= hi[k] {
                break;
            }
            u[k] = lo[k];
            k += 1;
        }
    }
}

/// One member `P_e` of the parliament.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParliamentPolytope<F: Field = Rational> {
    pub vector: Vec<F>,
    pub ground_index: usize,
    pub polytope: Polytope,
}

impl<F: Field> ParliamentPolytope<F> {
    pub fn is_empty(&self) -> bool {
        self.polytope.is_empty()
    }
}

/// `P_e` for an arbitrary nonzero `e`.
pub fn polytope<F: Field>(bundle: &ToricBundle<F>, e: &[F]) -> Result<Polytope> {
    Polytope::new(bundle.fan(), bundle.bounds(e)?)
}

/// The parliament, one polytope per ground-set vector, in ground-set order.
pub fn parliament<F: Field>(bundle: &ToricBundle<F>) -> Result<Vec<ParliamentPolytope<F>>> {
    bundle
        .ground_set()
        .vectors()
        .iter()
        .enumerate()
        .map(|(g, e)| {
            Ok(ParliamentPolytope {
                vector: e.clone(),
                ground_index: g,
                polytope: Polytope::new(bundle.fan(), bundle.ground_bounds(g).to_vec())?,
            })
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SectionEntry {
    pub character: Vec<i64>,
    /// `dim V_u`.
    pub dim: usize,
    /// Ground-set indices `g` with `u ∈ P_{e_g}`.
    pub vectors: Vec<usize>,
}

/// `H^0` by isotypical component.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SectionsTable {
    pub entries: Vec<SectionEntry>,
    pub total: usize,
}

impl SectionsTable {
    pub fn dim_at(&self, u: &[i64]) -> usize {
        self.entries.iter().find(|e| e.character == u).map_or(0, |e| e.dim)
    }
}

/// Characters in the parliament with `dim V_u`, and `h^0 = Σ dim V_u`.
pub fn global_sections<F: Field>(bundle: &ToricBundle<F>, members: &[ParliamentPolytope<F>]) -> SectionsTable {
    let mut by_character: BTreeMap<Vec<i64>, Vec<usize>> = BTreeMap::new();
    for p in members {
        for u in &p.polytope.lattice_points {
            by_character.entry(u.clone()).or_default().push(p.ground_index);
        }
    }
    let entries: Vec<SectionEntry> = by_character
        .into_iter()
        .map(|(u, vectors)| {
            let dim = bundle.subspace_at(&u).dim();
            SectionEntry { character: u, dim, vectors }
        })
        .collect();
    let total = entries.iter().map(|e| e.dim).sum();
    SectionsTable { entries, total }
}

/// Whether `u_ℓ` and every `u_ℓ - k·w_j` lie in `P_{e_{ℓ,σ}}`.
pub fn jet_simplex_contained<F: Field>(bundle: &ToricBundle<F>, cone: usize, entry: usize, k: i64) -> Result<bool> {
    if k < 0 {
        return Err(Error::NegativeJetOrder(k));
    }
    let s = &bundle.splitting(cone).entries[entry];
    let bounds = bundle.bounds(&s.vector)?;
    let fan = bundle.fan();
    let inside = |u: &[i64]| fan.rays().iter().zip(&bounds).all(|(v, &b)| pairing(u, v) <= b);
    if !inside(&s.character) {
        return Ok(false);
    }
    Ok(bundle.duals(cone).iter().all(|w| {
        let corner: Vec<i64> = s.character.iter().zip(w).map(|(a, b)| a - k * b).collect();
        inside(&corner)
    }))
}

/// `E` is a sum of line bundles exactly when the ground set has `rank` lines.
pub fn splits_equivariantly<F: Field>(bundle: &ToricBundle<F>) -> bool {
    bundle.ground_set().len() == bundle.rank()
}

/// `max` of `<·, v>` over the polytope equals `<u_ℓ, v>` for every ray of `σ`,
/// checked wherever `P_{e_{ℓ,σ}}` is nonempty. Returns the failures as
/// `(cone, entry, ray)`.
pub fn support_identity_failures<F: Field>(bundle: &ToricBundle<F>) -> Result<Vec<(usize, usize, usize)>> {
    let mut failures = Vec::new();
    for c in 0..bundle.fan().num_cones() {
        for (l, s) in bundle.splitting(c).entries.iter().enumerate() {
            let p = polytope(bundle, &s.vector)?;
            if p.is_empty() {
                continue;
            }
            for &i in bundle.fan().cone(c) {
                let v = bundle.fan().ray(i);
                if p.support(v) != Some(Rational::from_i64(pairing(&s.character, v))) {
                    failures.push((c, l, i));
                }
            }
        }
    }
    Ok(failures)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples;
    use crate::exactlin::primitive;
    use crate::Rational;

    fn pts(xs: &[&[i64]]) -> Vec<Vec<Rational>> {
        let mut v: Vec<Vec<Rational>> = xs.iter().map(|p| to_field(p)).collect();
        v.sort();
        v
    }

    fn member<'a>(ps: &'a [ParliamentPolytope], e: &[i64]) -> &'a Polytope {
        let key = primitive(&to_field::<Rational>(e));
        &ps.iter().find(|p| primitive(&p.vector) == key).expect("vector in ground set").polytope
    }

    #[test]
    fn printed_polytopes_of_f() {
        let f = examples::bundle_f();
        let ps = parliament(&f).unwrap();
        assert_eq!(member(&ps, &[1, 0, 0]).vertices, pts(&[&[3, -2], &[4, -2], &[4, -3]]));
        assert_eq!(member(&ps, &[1, -1, 0]).vertices, pts(&[&[-1, -2], &[0, -2], &[0, -3]]));
        assert_eq!(member(&ps, &[0, 0, 1]).vertices, pts(&[&[-2, 3], &[-1, 3], &[-1, 2]]));
        assert_eq!(member(&ps, &[0, -1, 1]).vertices, pts(&[&[-2, 0], &[-1, 0], &[-1, -1]]));
        assert!(member(&ps, &[0, 1, 0]).is_empty());
        assert!(member(&ps, &[0, 1, 0]).lattice_points.is_empty());
    }

    #[test]
    fn tangent_plane_polytopes_and_sections() {
        let t = examples::tangent_projective(2);
        let ps = parliament(&t).unwrap();
        assert_eq!(member(&ps, &[-1, -1]).vertices, pts(&[&[0, 0], &[-1, 0], &[0, -1]]));
        assert_eq!(member(&ps, &[1, 0]).vertices, pts(&[&[0, 0], &[1, 0], &[1, -1]]));
        let s = global_sections(&t, &ps);
        assert_eq!(s.total, 8);
        assert_eq!(s.dim_at(&[0, 0]), 2);
        assert_eq!(s.entries.len(), 7);
    }

    #[test]
    fn sections_of_the_reference_bundle_and_g() {
        let e = examples::p1xp1_rank3();
        let s = global_sections(&e, &parliament(&e).unwrap());
        assert_eq!(s.total, 3);
        let chars: Vec<Vec<i64>> = s.entries.iter().map(|x| x.character.clone()).collect();
        assert_eq!(chars, vec![vec![-1, 0], vec![0, 0], vec![1, 0]]);
        let g = examples::bundle_g();
        assert_eq!(global_sections(&g, &parliament(&g).unwrap()).total, 17);
    }

    #[test]
    fn line_bundle_triangles() {
        for a in 0..5 {
            let l = examples::projective_degree(2, a);
            let ps = parliament(&l).unwrap();
            let n = ((a + 1) * (a + 2) / 2) as usize;
            assert_eq!(ps[0].polytope.lattice_points.len(), n);
            assert_eq!(global_sections(&l, &ps).total, n);
        }
        let neg = examples::projective_degree(2, -1);
        assert!(parliament(&neg).unwrap()[0].is_empty());
    }

    #[test]
    fn vertices_have_d_active_constraints_and_points_satisfy_all() {
        for b in [examples::bundle_f(), examples::bundle_g(), examples::bundle_h()] {
            for p in parliament(&b).unwrap() {
                for v in &p.polytope.vertices {
                    let active = b
                        .fan()
                        .rays()
                        .iter()
                        .zip(&p.polytope.bounds)
                        .filter(|(r, &a)| dot(v, &to_field(r)) == Rational::from_i64(a))
                        .count();
                    assert!(active >= 2);
                }
                for u in &p.polytope.lattice_points {
                    assert!(p.polytope.contains(b.fan(), u));
                }
            }
        }
    }

    #[test]
    fn jet_simplices() {
        let t = examples::tangent_projective(2);
        let l = t.splitting(2).entries.iter().position(|e| e.character == vec![1, 0]).unwrap();
        assert!(jet_simplex_contained(&t, 2, l, 1).unwrap());
        assert!(!jet_simplex_contained(&t, 2, l, 2).unwrap());
        let h = examples::bundle_h();
        let l = h.splitting(2).entries.iter().position(|e| e.character == vec![-1, 0]).unwrap();
        assert!(jet_simplex_contained(&h, 2, l, 0).unwrap());
        assert!(!jet_simplex_contained(&h, 2, l, 1).unwrap());
        assert_eq!(jet_simplex_contained(&h, 2, l, -1), Err(Error::NegativeJetOrder(-1)));
    }

    #[test]
    fn splitting_detection() {
        let a = examples::projective_line_bundle(2, &[1, 0, 0]);
        let b = examples::projective_line_bundle(2, &[0, 2, 0]);
        assert!(splits_equivariantly(&a.direct_sum(&b).unwrap()));
        assert!(!splits_equivariantly(&examples::tangent_projective(2)));
        assert!(!splits_equivariantly(&examples::bundle_f()));
    }

    #[test]
    fn edge_lengths_of_tangent_triangles_are_one() {
        let t = examples::tangent_projective(2);
        for p in parliament(&t).unwrap() {
            assert_eq!(p.polytope.edge_lengths_at(&[0, 0]), Some(vec![1, 1]));
        }
        let h = examples::bundle_h();
        let ps = parliament(&h).unwrap();
        assert_eq!(member(&ps, &[0, 1, 0]).edge_lengths_at(&[-1, 0]), Some(vec![0, 0]));
    }

    #[test]
    fn support_identity_fails_on_a_redundant_facet() {
        let l = crate::QBundle::line_bundle(crate::Fan::hirzebruch(1), &[0, 5, 0, 0]).unwrap();
        let ps = parliament(&l).unwrap();
        assert_eq!(ps[0].polytope.vertices, pts(&[&[0, 0]]));
        assert_eq!(l.cone_characters(0)[0].0, vec![0, 5]);
        assert!(!jet_simplex_contained(&l, 0, 0, 0).unwrap());
        let failures = support_identity_failures(&l).unwrap();
        assert_eq!(failures, vec![(0, 0, 1), (1, 0, 1)]);
    }
}

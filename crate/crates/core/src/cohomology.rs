//! Per-character Čech cohomology on the cover by maximal-cone charts, and the
//! equivariant Euler characteristic.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactlin::{rank, Subspace};
use crate::klyachko::ToricBundle;
use crate::scalar::{pairing, zero_vec, Field};

/// Default number of shell expansions before the Euler characteristic gives up.
pub const DEFAULT_REGION_CAP: usize = 64;

/// The Čech complex of `E` at one character.
///
/// Subsets of maximal cones are bitmasks over the input cone order; the term
/// of `S` is `∩ E^v(⟨u, v⟩)` over the rays shared by every cone of `S`.
#[derive(Clone, Debug)]
pub struct CechComplex<F: Field = crate::Rational> {
    pub character: Vec<i64>,
    num_cones: usize,
    /// `degrees[p]` lists the subsets of size `p + 1` in increasing mask order.
    degrees: Vec<Vec<u64>>,
    terms: HashMap<u64, Subspace<F>>,
}

fn subset_sign(mask: u64, bit: usize) -> bool {
    (mask & ((1u64 << bit) - 1)).count_ones() % 2 == 1
}

impl<F: Field> CechComplex<F> {
    pub fn new(bundle: &ToricBundle<F>, u: &[i64]) -> Result<Self> {
        let fan = bundle.fan();
        let n = fan.num_cones();
        if u.len() != fan.dim() {
            return Err(Error::DimensionMismatch { expected: fan.dim(), found: u.len() });
        }
        if n >= 63 {
            return Err(Error::Internal("too many maximal cones for the Čech cover".into()));
        }
        let r = bundle.rank();
        let mut degrees = vec![Vec::new(); n];
        let mut terms = HashMap::new();
        for mask in 1u64..(1u64 << n) {
            let members: Vec<usize> = (0..n).filter(|&c| mask >> c & 1 == 1).collect();
            let shared: Vec<usize> =
                fan.cone(members[0]).iter().copied().filter(|ray| members.iter().all(|&c| fan.cone(c).contains(ray))).collect();
            let term = Subspace::intersect_all(r, shared.iter().map(|&ray| bundle.filtration(ray).at(pairing(u, fan.ray(ray)))))?;
            degrees[members.len() - 1].push(mask);
            terms.insert(mask, term);
        }
        let complex = Self { character: u.to_vec(), num_cones: n, degrees, terms };
        complex.check_square_zero()?;
        Ok(complex)
    }

    pub fn term(&self, mask: u64) -> &Subspace<F> {
        &self.terms[&mask]
    }

    /// `dim C^p`.
    pub fn dim(&self, p: usize) -> usize {
        self.degrees.get(p).map_or(0, |ms| ms.iter().map(|m| self.terms[m].dim()).sum())
    }

    /// The coefficient of the face `small` in `δ(small)` at `large`, where
    /// `large = small ∪ {bit}`.
    fn sign(large: u64, bit: usize) -> i64 {
        if subset_sign(large, bit) {
            -1
        } else {
            1
        }
    }

    /// The signed incidences compose to zero on every pair of subsets two
    /// apart.
    fn check_square_zero(&self) -> Result<()> {
        for p in 0..self.degrees.len().saturating_sub(2) {
            for &small in &self.degrees[p] {
                for &large in &self.degrees[p + 2] {
                    if small & !large != 0 {
                        continue;
                    }
                    let extra: Vec<usize> = (0..self.num_cones).filter(|&b| (large & !small) >> b & 1 == 1).collect();
                    let (a, b) = (extra[0], extra[1]);
                    let via_a = Self::sign(small | 1 << a, a) * Self::sign(large, b);
                    let via_b = Self::sign(small | 1 << b, b) * Self::sign(large, a);
                    if via_a + via_b != 0 {
                        return Err(Error::Internal("Čech differential does not square to zero".into()));
                    }
                }
            }
        }
        Ok(())
    }

    /// Rank of `δ: C^p → C^{p+1}`, computed on images inside `⊕_S E`.
    pub fn differential_rank(&self, p: usize) -> usize {
        let Some(target) = self.degrees.get(p + 1) else {
            return 0;
        };
        let r = self.terms.values().next().map_or(0, Subspace::ambient_dim);
        let slot: HashMap<u64, usize> = target.iter().enumerate().map(|(i, &m)| (m, i)).collect();
        let mut rows = Vec::new();
        for &small in &self.degrees[p] {
            for b in self.terms[&small].basis() {
                let mut row = zero_vec::<F>(r * target.len());
                for bit in (0..self.num_cones).filter(|&bit| small >> bit & 1 == 0) {
                    let large = small | 1 << bit;
                    let at = slot[&large] * r;
                    for (k, x) in b.iter().enumerate() {
                        row[at + k] = if Self::sign(large, bit) < 0 { -x.clone() } else { x.clone() };
                    }
                }
                rows.push(row);
            }
        }
        rank(&rows, r * target.len())
    }

    /// `[h^0, .., h^{n-1}]` over all degrees of the complex.
    pub fn cohomology(&self) -> Vec<usize> {
        let ranks: Vec<usize> = (0..self.degrees.len()).map(|p| self.differential_rank(p)).collect();
        (0..self.degrees.len()).map(|p| self.dim(p) - ranks[p] - if p == 0 { 0 } else { ranks[p - 1] }).collect()
    }
}

/// `[h^0_u, .., h^d_u]`.
pub fn cohomology_at<F: Field>(bundle: &ToricBundle<F>, u: &[i64]) -> Result<Vec<usize>> {
    let d = bundle.fan().dim();
    let mut h = CechComplex::new(bundle, u)?.cohomology();
    if h.iter().skip(d + 1).any(|&x| x != 0) {
        return Err(Error::Internal(format!("Čech cohomology above degree {d} at {}", crate::exactlin::vector_text(u))));
    }
    h.resize(d + 1, 0);
    Ok(h)
}

/// A Laurent polynomial `Σ c_u t^u` in `t_1, .., t_d`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct LaurentPolynomial {
    terms: BTreeMap<Vec<i64>, i64>,
}

impl LaurentPolynomial {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_term(&mut self, exponent: Vec<i64>, coefficient: i64) {
        let c = self.terms.entry(exponent).or_insert(0);
        *c += coefficient;
        if *c == 0 {
            self.terms.retain(|_, c| *c != 0);
        }
    }

    pub fn coefficient(&self, exponent: &[i64]) -> i64 {
        self.terms.get(exponent).copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms by decreasing total degree, then decreasing exponents.
    pub fn terms(&self) -> Vec<(Vec<i64>, i64)> {
        let mut out: Vec<(Vec<i64>, i64)> = self.terms.iter().map(|(u, c)| (u.clone(), *c)).collect();
        out.sort_by(|(a, _), (b, _)| {
            let (da, db): (i64, i64) = (a.iter().sum(), b.iter().sum());
            db.cmp(&da).then_with(|| b.cmp(a))
        });
        out
    }

    /// Sum of the coefficients.
    pub fn evaluate_at_one(&self) -> i64 {
        self.terms.values().sum()
    }
}

impl std::ops::Add for &LaurentPolynomial {
    type Output = LaurentPolynomial;

    fn add(self, other: &LaurentPolynomial) -> LaurentPolynomial {
        let mut out = self.clone();
        for (u, c) in &other.terms {
            out.add_term(u.clone(), *c);
        }
        out
    }
}

fn monomial(u: &[i64]) -> String {
    let factors: Vec<String> = u
        .iter()
        .enumerate()
        .filter(|(_, &e)| e != 0)
        .map(|(i, &e)| if e == 1 { format!("t{}", i + 1) } else { format!("t{}^{e}", i + 1) })
        .collect();
    factors.join("*")
}

impl fmt::Display for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.terms();
        if terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (u, c)) in terms.iter().enumerate() {
            let sign = if *c < 0 { "-" } else { "+" };
            match (n, *c < 0) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                _ => write!(f, " {sign} ")?,
            }
            let m = monomial(u);
            let a = c.abs();
            match (m.is_empty(), a) {
                (true, _) => write!(f, "{a}")?,
                (false, 1) => write!(f, "{m}")?,
                (false, _) => write!(f, "{a}*{m}")?,
            }
        }
        Ok(())
    }
}

/// Characters with some nonzero cohomology, and the Euler characteristic.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CechReport {
    /// `(u, [h^0_u, .., h^d_u])`, sorted by `u`.
    pub nonzero: Vec<(Vec<i64>, Vec<usize>)>,
    /// The box `[lo_i, hi_i]` that was scanned.
    pub region: Vec<(i64, i64)>,
    pub euler: LaurentPolynomial,
}

impl CechReport {
    /// `Σ_u h^i_u`.
    pub fn total(&self, i: usize) -> usize {
        self.nonzero.iter().map(|(_, h)| h.get(i).copied().unwrap_or(0)).sum()
    }
}

fn box_points(region: &[(i64, i64)]) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for &(lo, hi) in region {
        out = out.into_iter().flat_map(|p: Vec<i64>| (lo..=hi).map(move |x| [p.clone(), vec![x]].concat())).collect();
    }
    out
}

fn on_boundary(u: &[i64], region: &[(i64, i64)]) -> bool {
    u.iter().zip(region).any(|(x, (lo, hi))| x == lo || x == hi)
}

/// Cohomology over an adaptive box: start from the bounding box of all cone
/// characters widened by one and widen further while the boundary shell has
/// nonzero cohomology, at most `cap` times.
pub fn cech_report<F: Field>(bundle: &ToricBundle<F>, cap: usize) -> Result<CechReport> {
    let fan = bundle.fan();
    let d = fan.dim();
    let mut region = vec![(i64::MAX, i64::MIN); d];
    for c in 0..fan.num_cones() {
        for (u, _) in bundle.cone_characters(c) {
            for (b, &x) in region.iter_mut().zip(u) {
                *b = (b.0.min(x - 1), b.1.max(x + 1));
            }
        }
    }
    let mut computed: BTreeMap<Vec<i64>, Vec<usize>> = BTreeMap::new();
    let mut widenings = 0;
    loop {
        let mut shell_active = false;
        for u in box_points(&region) {
            let h = match computed.get(&u) {
                Some(h) => h.clone(),
                None => {
                    let h = cohomology_at(bundle, &u)?;
                    computed.insert(u.clone(), h.clone());
                    h
                }
            };
            if on_boundary(&u, &region) && h.iter().any(|&x| x != 0) {
                shell_active = true;
            }
        }
        if !shell_active {
            break;
        }
        if widenings == cap {
            return Err(Error::RegionCapExceeded { cap });
        }
        widenings += 1;
        for b in region.iter_mut() {
            *b = (b.0 - 1, b.1 + 1);
        }
    }
    let mut euler = LaurentPolynomial::new();
    let mut nonzero = Vec::new();
    for (u, h) in computed {
        if h.iter().all(|&x| x == 0) {
            continue;
        }
        let chi: i64 = h.iter().enumerate().map(|(i, &x)| if i % 2 == 0 { x as i64 } else { -(x as i64) }).sum();
        euler.add_term(u.clone(), chi);
        nonzero.push((u, h));
    }
    Ok(CechReport { nonzero, region, euler })
}

/// `χ(E) = Σ_u Σ_i (-1)^i h^i_u t^u`.
pub fn euler_characteristic<F: Field>(bundle: &ToricBundle<F>) -> Result<LaurentPolynomial> {
    Ok(cech_report(bundle, DEFAULT_REGION_CAP)?.euler)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples;
    use crate::fan::Fan;
    use crate::parliament::{global_sections, parliament};

    #[test]
    fn g_has_one_first_cohomology_class() {
        let g = examples::bundle_g();
        assert_eq!(cohomology_at(&g, &[-1, 0]).unwrap(), vec![0, 1, 0]);
        let report = cech_report(&g, DEFAULT_REGION_CAP).unwrap();
        assert_eq!(report.total(1), 1);
        assert_eq!(report.total(0), 17);
        assert_eq!(report.total(2), 0);
    }

    #[test]
    fn f_has_first_cohomology_at_one_minus_one() {
        assert!(cohomology_at(&examples::bundle_f(), &[1, -1]).unwrap()[1] >= 1);
    }

    #[test]
    fn far_characters_have_no_cohomology() {
        assert_eq!(cohomology_at(&examples::bundle_g(), &[40, 40]).unwrap(), vec![0, 0, 0]);
    }

    #[test]
    fn projective_line() {
        let l = crate::QBundle::line_bundle(Fan::projective_space(1), &[1, 0]).unwrap();
        assert_eq!(euler_characteristic(&l).unwrap().to_string(), "t1 + 1");
        let o = examples::projective_degree(2, 0);
        assert_eq!(euler_characteristic(&o).unwrap().to_string(), "1");
    }

    #[test]
    fn negative_degree_has_top_cohomology() {
        let l = examples::projective_degree(2, -3);
        let report = cech_report(&l, DEFAULT_REGION_CAP).unwrap();
        assert_eq!((report.total(0), report.total(1), report.total(2)), (0, 0, 1));
        let l = examples::projective_degree(2, -4);
        assert_eq!(cech_report(&l, DEFAULT_REGION_CAP).unwrap().total(2), 3);
    }

    #[test]
    fn degree_zero_equals_sections() {
        for b in [examples::bundle_f(), examples::bundle_g(), examples::bundle_h(), examples::tangent_projective(2)] {
            let table = global_sections(&b, &parliament(&b).unwrap());
            let report = cech_report(&b, DEFAULT_REGION_CAP).unwrap();
            for (u, h) in &report.nonzero {
                assert_eq!(h[0], table.dim_at(u));
            }
            assert_eq!(report.total(0), table.total);
        }
    }

    #[test]
    fn tangent_of_three_space() {
        let report = cech_report(&examples::tangent_projective(3), DEFAULT_REGION_CAP).unwrap();
        assert_eq!(report.total(0), 15);
        assert_eq!(report.total(1) + report.total(2) + report.total(3), 0);
    }

    #[test]
    fn display_order_and_signs() {
        let mut p = LaurentPolynomial::new();
        p.add_term(vec![-1, 0], -1);
        p.add_term(vec![1, 0], 1);
        p.add_term(vec![4, 3], 1);
        p.add_term(vec![0, 0], 2);
        p.add_term(vec![0, 1], 1);
        assert_eq!(p.to_string(), "t1^4*t2^3 + t1 + t2 + 2 - t1^-1");
        p.add_term(vec![0, 0], -2);
        assert_eq!(p.len(), 4);
        assert_eq!(LaurentPolynomial::new().to_string(), "0");
    }
}

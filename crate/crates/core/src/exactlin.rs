//! Exact linear algebra over the fibre `E = F^r`.
//!
//! A [`Subspace`] is stored as its reduced row echelon basis, so two
//! subspaces are equal exactly when their stored matrices are equal.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::Field;
use crate::Rational;

/// Reduce `rows` to reduced row echelon form, dropping zero rows.
///
/// Returns the nonzero rows and their pivot columns.
pub fn rref<F: Field>(mut rows: Vec<Vec<F>>, cols: usize) -> (Vec<Vec<F>>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut lead = 0;
    for col in 0..cols {
        if lead == rows.len() {
            break;
        }
        let Some(found) = (lead..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(lead, found);
        let inv = F::one() / rows[lead][col].clone();
        for x in rows[lead].iter_mut() {
            *x = x.clone() * inv.clone();
        }
        let pivot_row = rows[lead].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == lead || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x = x.clone() - factor.clone() * p.clone();
                }
            }
        }
        pivots.push(col);
        lead += 1;
    }
    rows.truncate(lead);
    (rows, pivots)
}

/// Basis of `{ x : row · x = 0 for every row }`.
pub fn null_space<F: Field>(rows: &[Vec<F>], cols: usize) -> Vec<Vec<F>> {
    let (reduced, pivots) = rref(rows.to_vec(), cols);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![F::zero(); cols];
            x[f] = F::one();
            for (row, &p) in reduced.iter().zip(&pivots) {
                x[p] = -row[f].clone();
            }
            x
        })
        .collect()
}

/// Dimension of the row span.
pub fn rank<F: Field>(rows: &[Vec<F>], cols: usize) -> usize {
    rref(rows.to_vec(), cols).0.len()
}

/// Inverse of a square matrix, `None` when singular.
pub fn invert<F: Field>(matrix: &[Vec<F>]) -> Option<Vec<Vec<F>>> {
    let n = matrix.len();
    let augmented: Vec<Vec<F>> = matrix
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { F::one() } else { F::zero() }));
            r
        })
        .collect();
    let (reduced, pivots) = rref(augmented, 2 * n);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(reduced.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Scale a nonzero vector to the primitive integer vector on its line whose
/// first nonzero entry is positive. The zero vector is returned unchanged.
pub fn primitive<F: Field>(v: &[F]) -> Vec<F> {
    let big: Vec<BigRational> = v.iter().map(Field::to_big).collect();
    let Some(first) = big.iter().find(|x| !x.is_zero()) else {
        return v.to_vec();
    };
    let lcm = big.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = big.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    let mut gcd = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if first.is_negative() {
        gcd = -gcd;
    }
    ints.iter()
        .map(|x| F::from_big(&BigRational::from_integer(x / &gcd)).expect("primitive entry overflow"))
        .collect()
}

/// Incrementally maintained echelon basis used for independence tests.
#[derive(Clone, Debug)]
pub(crate) struct Echelon<F: Field> {
    cols: usize,
    rows: Vec<(usize, Vec<F>)>,
}

impl<F: Field> Echelon<F> {
    pub(crate) fn new(cols: usize) -> Self {
        Self { cols, rows: Vec::new() }
    }

    pub(crate) fn from_rows<'a>(cols: usize, rows: impl IntoIterator<Item = &'a Vec<F>>) -> Self {
        let mut e = Self::new(cols);
        for r in rows {
            e.insert(r);
        }
        e
    }

    pub(crate) fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &[F]) -> Vec<F> {
        let mut v = v.to_vec();
        for (p, row) in &self.rows {
            if v[*p].is_zero() {
                continue;
            }
            let factor = v[*p].clone();
            for (x, r) in v.iter_mut().zip(row) {
                if !r.is_zero() {
                    *x = x.clone() - factor.clone() * r.clone();
                }
            }
        }
        v
    }

    /// Add `v`; returns `false` when it was already in the span.
    pub(crate) fn insert(&mut self, v: &[F]) -> bool {
        debug_assert_eq!(v.len(), self.cols);
        let mut r = self.reduce(v);
        let Some(p) = r.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = F::one() / r[p].clone();
        for x in r.iter_mut() {
            *x = x.clone() * inv.clone();
        }
        let at = self.rows.partition_point(|(q, _)| *q < p);
        self.rows.insert(at, (p, r));
        true
    }
}

/// A linear subspace of `F^r` in canonical (RREF) form.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace<F: Field = Rational> {
    ambient_dim: usize,
    basis: Vec<Vec<F>>,
}

impl<F: Field> Subspace<F> {
    pub fn zero(ambient_dim: usize) -> Self {
        Self { ambient_dim, basis: Vec::new() }
    }

    pub fn full(ambient_dim: usize) -> Self {
        let basis = (0..ambient_dim)
            .map(|i| (0..ambient_dim).map(|j| if i == j { F::one() } else { F::zero() }).collect())
            .collect();
        Self { ambient_dim, basis }
    }

    /// The span of `vectors`, each of length `ambient_dim`.
    pub fn span(ambient_dim: usize, vectors: &[Vec<F>]) -> Result<Self> {
        if let Some(bad) = vectors.iter().find(|v| v.len() != ambient_dim) {
            return Err(Error::DimensionMismatch { expected: ambient_dim, found: bad.len() });
        }
        Ok(Self::span_unchecked(ambient_dim, vectors.to_vec()))
    }

    pub(crate) fn span_unchecked(ambient_dim: usize, vectors: Vec<Vec<F>>) -> Self {
        let (basis, _) = rref(vectors, ambient_dim);
        Self { ambient_dim, basis }
    }

    /// Span of standard basis vectors, 0-indexed.
    pub fn coordinate(ambient_dim: usize, axes: &[usize]) -> Self {
        let vectors = axes
            .iter()
            .map(|&a| (0..ambient_dim).map(|j| if j == a { F::one() } else { F::zero() }).collect())
            .collect();
        Self::span_unchecked(ambient_dim, vectors)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.basis.len() == self.ambient_dim
    }

    /// Rows of the reduced row echelon basis.
    pub fn basis(&self) -> &[Vec<F>] {
        &self.basis
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.ambient_dim != other.ambient_dim {
            return Err(Error::DimensionMismatch { expected: self.ambient_dim, found: other.ambient_dim });
        }
        Ok(())
    }

    pub fn contains(&self, v: &[F]) -> bool {
        if v.len() != self.ambient_dim {
            return false;
        }
        let mut v = v.to_vec();
        for row in &self.basis {
            let p = row.iter().position(|x| !x.is_zero()).expect("basis rows are nonzero");
            if v[p].is_zero() {
                continue;
            }
            let factor = v[p].clone();
            for (x, r) in v.iter_mut().zip(row) {
                *x = x.clone() - factor.clone() * r.clone();
            }
        }
        v.iter().all(Zero::is_zero)
    }

    pub fn contains_subspace(&self, other: &Self) -> bool {
        other.ambient_dim == self.ambient_dim && other.basis.iter().all(|v| self.contains(v))
    }

    /// `A + B`.
    pub fn sum(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut rows = self.basis.clone();
        rows.extend(other.basis.iter().cloned());
        Ok(Self::span_unchecked(self.ambient_dim, rows))
    }

    /// `A ∩ B`, computed as the annihilator of `ann(A) + ann(B)`.
    pub fn intersect(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        if self.is_full() || other.is_zero() {
            return Ok(other.clone());
        }
        if other.is_full() || self.is_zero() {
            return Ok(self.clone());
        }
        let r = self.ambient_dim;
        let mut annihilators = null_space(&self.basis, r);
        annihilators.extend(null_space(&other.basis, r));
        Ok(Self::span_unchecked(r, null_space(&annihilators, r)))
    }

    /// Intersection of a nonempty family; the full space for an empty one.
    pub fn intersect_all<'a>(ambient_dim: usize, spaces: impl IntoIterator<Item = &'a Self>) -> Result<Self> {
        let mut acc = Self::full(ambient_dim);
        for s in spaces {
            acc = acc.intersect(s)?;
            if acc.is_zero() {
                break;
            }
        }
        Ok(acc)
    }

    pub fn sum_all<'a>(ambient_dim: usize, spaces: impl IntoIterator<Item = &'a Self>) -> Result<Self> {
        let mut rows = Vec::new();
        for s in spaces {
            if s.ambient_dim != ambient_dim {
                return Err(Error::DimensionMismatch { expected: ambient_dim, found: s.ambient_dim });
            }
            rows.extend(s.basis.iter().cloned());
        }
        Ok(Self::span_unchecked(ambient_dim, rows))
    }

    /// Vectors of `self` completing a basis of `self ∩ other` to a basis of `self`.
    ///
    /// Rows of the echelon basis of `self` are taken left to right whenever they
    /// raise the rank, then scaled to primitive integer form.
    pub fn complement_in(&self, other: &Self) -> Result<Vec<Vec<F>>> {
        let meet = self.intersect(other)?;
        let mut echelon = Echelon::from_rows(self.ambient_dim, meet.basis.iter());
        let mut out = Vec::new();
        for row in &self.basis {
            if echelon.insert(row) {
                out.push(primitive(row));
            }
        }
        Ok(out)
    }

    /// Dimension of the span of the images of `vectors` in `self / sub`.
    pub fn quotient_rank_of_images(&self, vectors: &[Vec<F>], sub: &Self) -> Result<usize> {
        self.check_same(sub)?;
        if !self.contains_subspace(sub) {
            return Err(Error::NotInSubspace);
        }
        if let Some(v) = vectors.iter().find(|v| v.len() != self.ambient_dim) {
            return Err(Error::DimensionMismatch { expected: self.ambient_dim, found: v.len() });
        }
        if vectors.iter().any(|v| !self.contains(v)) {
            return Err(Error::NotInSubspace);
        }
        let mut echelon = Echelon::from_rows(self.ambient_dim, sub.basis.iter());
        let base = echelon.rank();
        for v in vectors {
            echelon.insert(v);
        }
        Ok(echelon.rank() - base)
    }
}

impl<F: Field> fmt::Debug for Subspace<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace{}", self)
    }
}

impl<F: Field> fmt::Display for Subspace<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<")?;
        for (i, row) in self.basis.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", vector_text(&primitive(row)))?;
        }
        write!(f, ">")
    }
}

/// `(a,b,c)` rendering used for vectors in reports.
pub fn vector_text<T: fmt::Display>(v: &[T]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(","))
}

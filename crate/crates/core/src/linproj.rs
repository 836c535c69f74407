//! Exact projective linear algebra: points of P^N, linear subvarieties in
//! reduced row-echelon form, span/meet/join/containment, and Pluecker
//! coordinates.
//!
//! Echelon form is the canonical representation: equal subspaces have equal
//! basis matrices, so equality, hashing and grouping are bit-exact. Pluecker
//! coordinates are an output format, not a working representation.

use std::fmt;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::gf::{FieldCtx, Scalar};

/// A point of P^N, normalized so the first nonzero coordinate is 1.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ProjPoint {
    field: FieldCtx,
    coords: Vec<Scalar>,
}

impl ProjPoint {
    pub fn new(field: &FieldCtx, coords: Vec<Scalar>) -> Result<ProjPoint> {
        for c in &coords {
            field.check(c)?;
        }
        let pivot = coords.iter().position(|c| !c.is_zero()).ok_or(Error::ZeroPoint)?;
        let inv = field.inv(&coords[pivot])?;
        let coords = coords.iter().map(|c| field.mul(c, &inv)).collect();
        Ok(ProjPoint { field: field.clone(), coords })
    }

    pub fn from_ints(field: &FieldCtx, coords: &[i64]) -> Result<ProjPoint> {
        Self::new(field, coords.iter().map(|&v| field.from_int(v)).collect())
    }

    pub fn field(&self) -> &FieldCtx {
        &self.field
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.coords
    }

    /// Projective ambient dimension N.
    pub fn ambient_dim(&self) -> usize {
        self.coords.len() - 1
    }

    /// Deterministic key for set membership and sorting.
    pub fn key(&self) -> Vec<u64> {
        self.coords.iter().map(|c| self.field.index_of(c)).collect()
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, " : ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A dense matrix of scalars with exact row reduction.
#[derive(Clone, PartialEq, Eq)]
pub struct Mat {
    field: FieldCtx,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Mat {
    pub fn zeros(field: &FieldCtx, rows: usize, cols: usize) -> Mat {
        Mat { field: field.clone(), rows, cols, data: vec![field.zero(); rows * cols] }
    }

    pub fn from_rows(field: &FieldCtx, rows: Vec<Vec<Scalar>>) -> Result<Mat> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in &rows {
            if row.len() != cols {
                return Err(Error::DimensionMismatch { expected: cols, got: row.len() });
            }
            for s in row {
                field.check(s)?;
                data.push(*s);
            }
        }
        Ok(Mat { field: field.clone(), rows: rows.len(), cols, data })
    }

    pub fn identity(field: &FieldCtx, n: usize) -> Mat {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            *m.at_mut(i, i) = field.one();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> &FieldCtx {
        &self.field
    }

    pub fn at(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    pub fn at_mut(&mut self, r: usize, c: usize) -> &mut Scalar {
        &mut self.data[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Result<Vec<Scalar>> {
        if v.len() != self.cols {
            return Err(Error::LengthMismatch { expected: self.cols, got: v.len() });
        }
        Ok((0..self.rows)
            .map(|r| {
                let mut acc = self.field.zero();
                for (c, x) in v.iter().enumerate() {
                    let a = self.at(r, c);
                    if !a.is_zero() && !x.is_zero() {
                        acc = self.field.add(&acc, &self.field.mul(a, x));
                    }
                }
                acc
            })
            .collect())
    }

    /// In-place reduced row echelon form; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let f = self.field.clone();
        let mut pivots = vec![];
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(pr) = (row..self.rows).find(|&r| !self.at(r, col).is_zero()) else {
                continue;
            };
            if pr != row {
                for c in 0..self.cols {
                    self.data.swap(row * self.cols + c, pr * self.cols + c);
                }
            }
            let inv = f.inv(self.at(row, col)).expect("pivot nonzero");
            for c in col..self.cols {
                *self.at_mut(row, c) = f.mul(self.at(row, c), &inv);
            }
            for r in 0..self.rows {
                if r != row && !self.at(r, col).is_zero() {
                    let factor = *self.at(r, col);
                    for c in col..self.cols {
                        let delta = f.mul(&factor, self.at(row, c));
                        *self.at_mut(r, c) = f.sub(self.at(r, c), &delta);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    /// Basis of { v : M v = 0 }, one row per free column, in RREF.
    pub fn nullspace(&self) -> Mat {
        let mut m = self.clone();
        let pivots = m.rref();
        let f = &self.field;
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut rows = Vec::with_capacity(free.len());
        for &fc in &free {
            let mut v = vec![f.zero(); self.cols];
            v[fc] = f.one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(m.at(r, fc));
            }
            rows.push(v);
        }
        let mut ns = Mat {
            field: f.clone(),
            rows: rows.len(),
            cols: self.cols,
            data: rows.concat(),
        };
        ns.rref();
        ns
    }

    pub fn vstack(&self, other: &Mat) -> Result<Mat> {
        if self.field != other.field || self.cols != other.cols {
            return Err(Error::AmbientMismatch);
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(Mat { field: self.field.clone(), rows: self.rows + other.rows, cols: self.cols, data })
    }

    /// Exact determinant of a square matrix by Gaussian elimination.
    pub fn det(&self) -> Result<Scalar> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch { expected: self.rows, got: self.cols });
        }
        let f = self.field.clone();
        let mut m = self.clone();
        let mut det = f.one();
        for col in 0..m.cols {
            let Some(pr) = (col..m.rows).find(|&r| !m.at(r, col).is_zero()) else {
                return Ok(f.zero());
            };
            if pr != col {
                for c in 0..m.cols {
                    m.data.swap(col * m.cols + c, pr * m.cols + c);
                }
                det = f.neg(&det);
            }
            let pivot = *m.at(col, col);
            det = f.mul(&det, &pivot);
            let inv = f.inv(&pivot)?;
            for r in col + 1..m.rows {
                if !m.at(r, col).is_zero() {
                    let factor = f.mul(m.at(r, col), &inv);
                    for c in col..m.cols {
                        let delta = f.mul(&factor, m.at(col, c));
                        *m.at_mut(r, c) = f.sub(m.at(r, c), &delta);
                    }
                }
            }
        }
        Ok(det)
    }
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  [")?;
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.at(r, c))?;
            }
            writeln!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// A linear subvariety of P^N: the projectivization of a row space held in
/// reduced row-echelon form. An empty basis encodes the empty subvariety
/// (projective dimension -1).
#[derive(Clone, PartialEq, Eq)]
pub struct LinearSubspace {
    field: FieldCtx,
    ambient_dim: usize,
    basis: Mat,
}

impl LinearSubspace {
    pub fn empty(field: &FieldCtx, ambient_dim: usize) -> LinearSubspace {
        LinearSubspace {
            field: field.clone(),
            ambient_dim,
            basis: Mat::zeros(field, 0, ambient_dim + 1),
        }
    }

    /// Span of raw coordinate vectors; zero vectors are harmless.
    pub fn from_rows(
        field: &FieldCtx,
        ambient_dim: usize,
        rows: Vec<Vec<Scalar>>,
    ) -> Result<LinearSubspace> {
        for row in &rows {
            if row.len() != ambient_dim + 1 {
                return Err(Error::DimensionMismatch { expected: ambient_dim + 1, got: row.len() });
            }
        }
        if rows.is_empty() {
            return Ok(Self::empty(field, ambient_dim));
        }
        let mut m = Mat::from_rows(field, rows)?;
        let pivots = m.rref();
        let keep = pivots.len();
        if keep == 0 {
            return Ok(Self::empty(field, ambient_dim));
        }
        let rows = (0..keep).map(|r| m.row(r).to_vec()).collect();
        Ok(LinearSubspace {
            field: field.clone(),
            ambient_dim,
            basis: Mat::from_rows(field, rows)?,
        })
    }

    /// Linear span of a set of points.
    pub fn from_points(
        field: &FieldCtx,
        ambient_dim: usize,
        points: &[ProjPoint],
    ) -> Result<LinearSubspace> {
        for p in points {
            if p.ambient_dim() != ambient_dim || p.field() != field {
                return Err(Error::AmbientMismatch);
            }
        }
        Self::from_rows(field, ambient_dim, points.iter().map(|p| p.coords().to_vec()).collect())
    }

    /// The hyperplane { Z : sum_i normal_i Z_i = 0 }.
    pub fn hyperplane(field: &FieldCtx, normal: &[Scalar]) -> Result<LinearSubspace> {
        let m = Mat::from_rows(field, vec![normal.to_vec()])?;
        let ns = m.nullspace();
        let ambient = normal.len() - 1;
        Self::from_rows(field, ambient, ns.row_vecs())
    }

    pub fn field(&self) -> &FieldCtx {
        &self.field
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    /// Dimension of the affine cone (number of basis rows).
    pub fn affine_dim(&self) -> usize {
        self.basis.rows()
    }

    /// Projective dimension: -1 for the empty subvariety, 0 for a point.
    pub fn proj_dim(&self) -> i64 {
        self.basis.rows() as i64 - 1
    }

    pub fn is_empty(&self) -> bool {
        self.basis.rows() == 0
    }

    /// Canonical echelon basis, one row per cone dimension.
    pub fn basis(&self) -> &Mat {
        &self.basis
    }

    /// The unique point of a 0-dimensional subvariety.
    pub fn point(&self) -> Result<ProjPoint> {
        if self.proj_dim() != 0 {
            return Err(Error::DimensionMismatch { expected: 1, got: self.basis.rows() });
        }
        ProjPoint::new(&self.field, self.basis.row(0).to_vec())
    }

    /// All rational points, enumerated deterministically (small subspaces).
    pub fn rational_points(&self) -> Vec<ProjPoint> {
        let r = self.basis.rows();
        if r == 0 {
            return vec![];
        }
        let q = self.field.order();
        let mut out = vec![];
        // Chart-by-chart over the coefficient space P^(r-1).
        for chart in 0..r {
            let frees = r - chart - 1;
            let mut combo = vec![0u64; frees];
            loop {
                let mut coeffs = vec![self.field.zero(); r];
                coeffs[chart] = self.field.one();
                for (i, &ci) in combo.iter().enumerate() {
                    coeffs[chart + 1 + i] = self.field.scalar_at(ci);
                }
                let mut v = vec![self.field.zero(); self.ambient_dim + 1];
                for (i, c) in coeffs.iter().enumerate() {
                    if !c.is_zero() {
                        for j in 0..=self.ambient_dim {
                            let t = self.field.mul(c, self.basis.at(i, j));
                            v[j] = self.field.add(&v[j], &t);
                        }
                    }
                }
                out.push(ProjPoint::new(&self.field, v).expect("combination of basis rows"));
                // odometer
                let mut pos = frees;
                loop {
                    if pos == 0 {
                        break;
                    }
                    pos -= 1;
                    combo[pos] += 1;
                    if combo[pos] < q {
                        break;
                    }
                    combo[pos] = 0;
                }
                if frees == 0 || combo.iter().all(|&c| c == 0) {
                    break;
                }
            }
        }
        out
    }

    fn compatible(&self, other: &LinearSubspace) -> Result<()> {
        if self.field != other.field || self.ambient_dim != other.ambient_dim {
            return Err(Error::AmbientMismatch);
        }
        Ok(())
    }

    pub fn contains_point(&self, x: &ProjPoint) -> Result<bool> {
        if x.ambient_dim() != self.ambient_dim || *x.field() != self.field {
            return Err(Error::AmbientMismatch);
        }
        Ok(self.reduces_to_zero(x.coords()))
    }

    pub fn contains_subspace(&self, other: &LinearSubspace) -> Result<bool> {
        self.compatible(other)?;
        Ok((0..other.basis.rows()).all(|r| self.reduces_to_zero(other.basis.row(r))))
    }

    /// Reduce a vector against the echelon basis; true iff it lies in the span.
    fn reduces_to_zero(&self, v: &[Scalar]) -> bool {
        let f = &self.field;
        let mut v = v.to_vec();
        for r in 0..self.basis.rows() {
            let pc = (0..=self.ambient_dim)
                .find(|&c| !self.basis.at(r, c).is_zero())
                .expect("no zero rows in echelon basis");
            if !v[pc].is_zero() {
                let factor = v[pc];
                for c in 0..=self.ambient_dim {
                    let delta = f.mul(&factor, self.basis.at(r, c));
                    v[c] = f.sub(&v[c], &delta);
                }
            }
        }
        v.iter().all(Scalar::is_zero)
    }

    /// Smallest linear subvariety containing both.
    pub fn join(&self, other: &LinearSubspace) -> Result<LinearSubspace> {
        self.compatible(other)?;
        let mut rows = self.basis.row_vecs();
        rows.extend(other.basis.row_vecs());
        Self::from_rows(&self.field, self.ambient_dim, rows)
    }

    /// Extend the subspace by one point.
    pub fn join_point(&self, x: &ProjPoint) -> Result<LinearSubspace> {
        let mut rows = self.basis.row_vecs();
        rows.push(x.coords().to_vec());
        Self::from_rows(&self.field, self.ambient_dim, rows)
    }

    /// Annihilator in the dual space: { w : w . v = 0 for all v in S }.
    pub fn annihilator(&self) -> LinearSubspace {
        if self.is_empty() {
            let id = Mat::identity(&self.field, self.ambient_dim + 1);
            return LinearSubspace {
                field: self.field.clone(),
                ambient_dim: self.ambient_dim,
                basis: id,
            };
        }
        let ns = self.basis.nullspace();
        LinearSubspace { field: self.field.clone(), ambient_dim: self.ambient_dim, basis: ns }
    }

    /// Intersection, computed through annihilators.
    pub fn meet(&self, other: &LinearSubspace) -> Result<LinearSubspace> {
        self.compatible(other)?;
        Ok(self.annihilator().join(&other.annihilator())?.annihilator())
    }

    /// Pluecker coordinates: maximal minors of the basis matrix over column
    /// subsets in lexicographic order, normalized so the first nonzero
    /// coordinate is 1.
    pub fn plucker(&self) -> Result<Vec<Scalar>> {
        let r = self.basis.rows();
        if r == 0 {
            return Err(Error::EmptySubspace);
        }
        let mut minors = Vec::new();
        for combo in (0..=self.ambient_dim).combinations(r) {
            let rows: Vec<Vec<Scalar>> = (0..r)
                .map(|i| combo.iter().map(|&c| *self.basis.at(i, c)).collect())
                .collect();
            minors.push(Mat::from_rows(&self.field, rows)?.det()?);
        }
        let pivot = minors
            .iter()
            .position(|m| !m.is_zero())
            .expect("a rank-r matrix has a nonzero maximal minor");
        let inv = self.field.inv(&minors[pivot])?;
        Ok(minors.iter().map(|m| self.field.mul(m, &inv)).collect())
    }

    /// Deterministic grouping key: dimensions plus packed basis entries.
    pub fn key(&self) -> Vec<u64> {
        let mut key = vec![self.basis.rows() as u64];
        for r in 0..self.basis.rows() {
            for c in 0..=self.ambient_dim {
                key.push(self.field.index_of(self.basis.at(r, c)));
            }
        }
        key
    }
}

impl fmt::Debug for LinearSubspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LinearSubspace(dim {}, basis {:?})", self.proj_dim(), self.basis)
    }
}

/// Minor ordering used by [`LinearSubspace::plucker`], for reports.
pub const PLUCKER_MINOR_ORDER: &str =
    "maximal minors over column subsets in lexicographic order, first nonzero normalized to 1";

//! Exact linear algebra over ℚ: dense matrices and subspaces kept in
//! reduced row echelon form.
//!
//! Matrices act on column vectors. A [`Subspace`] stores its spanning rows
//! fully reduced with pivots increasing, so two subspaces are equal exactly
//! when their row lists are equal.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

pub type Vector = Vec<Rational>;

pub fn zero_vector(n: usize) -> Vector {
    vec![Rational::zero(); n]
}

pub fn unit_vector(n: usize, i: usize) -> Vector {
    let mut v = zero_vector(n);
    v[i] = Rational::one();
    v
}

pub fn is_zero_vector(v: &[Rational]) -> bool {
    v.iter().all(Zero::is_zero)
}

/// `y += c·x`
pub fn axpy(y: &mut [Rational], c: &Rational, x: &[Rational]) {
    if c.is_zero() {
        return;
    }
    for (yi, xi) in y.iter_mut().zip(x) {
        if !xi.is_zero() {
            *yi += c * xi;
        }
    }
}

pub fn scale_vector(v: &[Rational], c: &Rational) -> Vector {
    v.iter().map(|x| x * c).collect()
}

pub fn sub_vectors(a: &[Rational], b: &[Rational]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Vector>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![zero_vector(cols); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i][i] = Rational::one();
        }
        m
    }

    pub fn from_rows(data: Vec<Vector>) -> Result<Self> {
        let rows = data.len();
        let cols = data.first().map_or(0, Vec::len);
        if data.iter().any(|r| r.len() != cols) {
            return Err(Error::Input("matrix rows have unequal lengths".into()));
        }
        Ok(Self { rows, cols, data })
    }

    /// Matrix whose `j`-th column is `columns[j]`.
    pub fn from_columns(n_rows: usize, columns: &[Vector]) -> Self {
        let mut m = Self::zeros(n_rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            for (i, v) in col.iter().enumerate() {
                m.data[i][j] = v.clone();
            }
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i][j] = v;
    }

    pub fn rows(&self) -> &[Vector] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i]
    }

    pub fn column(&self, j: usize) -> Vector {
        self.data.iter().map(|r| r[j].clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vector> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_columns(self.cols, &self.data)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|r| is_zero_vector(r))
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && self.data.iter().enumerate().all(|(i, r)| {
                r.iter()
                    .enumerate()
                    .all(|(j, v)| if i == j { v.is_one() } else { v.is_zero() })
            })
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|r| scale_vector(r, c)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect())
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| sub_vectors(a, b))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Self::zeros(self.rows, other.cols);
        for (i, row) in self.data.iter().enumerate() {
            let acc = &mut out.data[i];
            for (k, a) in row.iter().enumerate() {
                if !a.is_zero() {
                    axpy(acc, a, &other.data[k]);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vector {
        assert_eq!(self.cols, v.len());
        self.data
            .iter()
            .map(|row| {
                let mut acc = Rational::zero();
                for (a, b) in row.iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc += a * b;
                    }
                }
                acc
            })
            .collect()
    }

    pub fn trace(&self) -> Rational {
        (0..self.rows.min(self.cols))
            .map(|i| self.data[i][i].clone())
            .fold(Rational::zero(), |a, b| a + b)
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.data.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !m[i][c].is_zero()) else {
                continue;
            };
            m.swap(r, p);
            let inv = m[r][c].recip();
            for v in m[r].iter_mut() {
                *v *= &inv;
            }
            let pivot_row = m[r].clone();
            for (i, row) in m.iter_mut().enumerate() {
                if i != r && !row[c].is_zero() {
                    let f = -row[c].clone();
                    axpy(row, &f, &pivot_row);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (
            Matrix {
                rows: self.rows,
                cols: self.cols,
                data: m,
            },
            pivots,
        )
    }

    pub fn rank(&self) -> usize {
        Subspace::from_vectors(self.cols, self.data.iter().cloned()).dim()
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.data[i][j] = self.data[i][j].clone();
            }
            aug.data[i][n + i] = Rational::one();
        }
        let (red, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let data = red.data.iter().map(|r| r[n..].to_vec()).collect();
        Some(Matrix {
            rows: n,
            cols: n,
            data,
        })
    }

    /// Basis of `{v : M v = 0}`.
    pub fn nullspace(&self) -> Vec<Vector> {
        let (red, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = zero_vector(self.cols);
                v[f] = Rational::one();
                for (r, &p) in pivots.iter().enumerate() {
                    v[p] = -red.data[r][f].clone();
                }
                v
            })
            .collect()
    }

    /// Solves `M x = b`; `None` when inconsistent. Returns one solution and a
    /// basis of the homogeneous solution space.
    pub fn solve(&self, b: &[Rational]) -> Option<(Vector, Vec<Vector>)> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Self::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.data[i][j] = self.data[i][j].clone();
            }
            aug.data[i][self.cols] = b[i].clone();
        }
        let (red, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = zero_vector(self.cols);
        for (r, &p) in pivots.iter().enumerate() {
            x[p] = red.data[r][self.cols].clone();
        }
        Some((x, self.nullspace()))
    }

    /// `M^k`, by repeated squaring.
    pub fn pow(&self, mut k: u32) -> Matrix {
        let mut base = self.clone();
        let mut acc = Matrix::identity(self.rows);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Submatrix on the given row and column index lists.
    pub fn block(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        let data = rows
            .iter()
            .map(|&i| cols.iter().map(|&j| self.data[i][j].clone()).collect())
            .collect();
        Matrix {
            rows: rows.len(),
            cols: cols.len(),
            data,
        }
    }

    pub fn to_wire(&self) -> WireMatrix {
        WireMatrix {
            dim: self.rows,
            entries: self.data.clone(),
        }
    }

    pub fn from_wire(w: &WireMatrix) -> Result<Self> {
        if w.entries.len() != w.dim || w.entries.iter().any(|r| r.len() != w.dim) {
            return Err(Error::Input(format!(
                "entries: expected a {0}x{0} array to match dim = {0}",
                w.dim
            )));
        }
        Ok(Self {
            rows: w.dim,
            cols: w.dim,
            data: w.entries.clone(),
        })
    }
}

/// JSON form of a square matrix: `{"dim": n, "entries": [[...]]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WireMatrix {
    pub dim: usize,
    #[serde(with = "rational::rows_as_strings")]
    pub entries: Vec<Vector>,
}

/// Subspace of `ℚⁿ` in reduced row echelon form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    rows: Vec<Vector>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Self {
            ambient,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Self::coordinate(ambient, 0..ambient)
    }

    /// Span of the given standard basis vectors.
    pub fn coordinate(ambient: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut idx: Vec<usize> = indices.into_iter().collect();
        idx.sort_unstable();
        idx.dedup();
        Self {
            ambient,
            rows: idx.iter().map(|&i| unit_vector(ambient, i)).collect(),
            pivots: idx,
        }
    }

    pub fn from_vectors(ambient: usize, vectors: impl IntoIterator<Item = Vector>) -> Self {
        let mut s = Self::zero(ambient);
        for v in vectors {
            s.insert(v);
        }
        s
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn basis(&self) -> &[Vector] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// `v` minus its echelon projection: zero exactly when `v` lies in the
    /// subspace, and always zero at the pivot columns.
    pub fn reduce(&self, v: &[Rational]) -> Vector {
        let mut out = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if !out[p].is_zero() {
                let c = -out[p].clone();
                axpy(&mut out, &c, row);
            }
        }
        out
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        is_zero_vector(&self.reduce(v))
    }

    /// Coordinates of a member with respect to [`Subspace::basis`]; these
    /// are its entries at the pivot columns.
    pub fn coordinates(&self, v: &[Rational]) -> Option<Vector> {
        self.contains(v)
            .then(|| self.pivots.iter().map(|&p| v[p].clone()).collect())
    }

    /// Adds `v` to the span; returns whether the dimension grew.
    pub fn insert(&mut self, v: Vector) -> bool {
        assert_eq!(v.len(), self.ambient, "vector length mismatch");
        let mut v = self.reduce(&v);
        let Some(q) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = v[q].recip();
        for x in v.iter_mut() {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        for row in self.rows.iter_mut() {
            if !row[q].is_zero() {
                let c = -row[q].clone();
                axpy(row, &c, &v);
            }
        }
        let pos = self.pivots.partition_point(|&p| p < q);
        self.pivots.insert(pos, q);
        self.rows.insert(pos, v);
        true
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        let mut s = self.clone();
        for v in &other.rows {
            s.insert(v.clone());
        }
        s
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.rows.iter().all(|v| other.contains(v))
    }

    pub fn intersection(&self, other: &Subspace) -> Subspace {
        // Solve Σ aᵢ uᵢ = Σ bⱼ wⱼ.
        if self.is_zero() || other.is_zero() {
            return Subspace::zero(self.ambient);
        }
        let mut cols: Vec<Vector> = self.rows.clone();
        cols.extend(other.rows.iter().map(|w| scale_vector(w, &-Rational::one())));
        let m = Matrix::from_columns(self.ambient, &cols);
        let k = self.rows.len();
        Subspace::from_vectors(
            self.ambient,
            m.nullspace().into_iter().map(|sol| {
                let mut v = zero_vector(self.ambient);
                for (a, u) in sol[..k].iter().zip(&self.rows) {
                    axpy(&mut v, a, u);
                }
                v
            }),
        )
    }

    /// Image under a linear map.
    pub fn image(&self, m: &Matrix) -> Subspace {
        Subspace::from_vectors(m.nrows(), self.rows.iter().map(|v| m.mul_vec(v)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    fn mat(rows: &[&[i64]]) -> Matrix {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect())
            .unwrap()
    }

    #[test]
    fn inverse_roundtrip() {
        let m = mat(&[&[2, 1], &[1, 1]]);
        let inv = m.inverse().unwrap();
        assert!(m.mul(&inv).is_identity());
        assert!(mat(&[&[1, 2], &[2, 4]]).inverse().is_none());
    }

    #[test]
    fn nullspace_and_rank() {
        let m = mat(&[&[1, 2, 3], &[2, 4, 6]]);
        assert_eq!(m.rank(), 1);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 2);
        for v in ns {
            assert!(is_zero_vector(&m.mul_vec(&v)));
        }
    }

    #[test]
    fn subspace_canonical_form() {
        let a = Subspace::from_vectors(3, vec![vec![int(1), int(1), int(0)], vec![int(0), int(2), int(2)]]);
        let b = Subspace::from_vectors(3, vec![vec![int(1), int(0), int(-1)], vec![int(3), int(3), int(0)]]);
        assert_eq!(a, b);
        assert_eq!(a.pivots(), &[0, 1]);
        assert!(a.contains(&[int(2), int(1), int(-1)]));
        assert!(!a.contains(&[int(0), int(0), int(1)]));
        let coords = a.coordinates(&[int(2), int(1), int(-1)]).unwrap();
        assert_eq!(coords, vec![int(2), int(1)]);
    }

    #[test]
    fn intersection_of_planes() {
        let a = Subspace::coordinate(3, [0, 1]);
        let b = Subspace::coordinate(3, [1, 2]);
        assert_eq!(a.intersection(&b), Subspace::coordinate(3, [1]));
    }

    #[test]
    fn solve_affine_system() {
        let m = mat(&[&[1, 1], &[1, -1]]);
        let (x, kernel) = m.solve(&[int(3), int(1)]).unwrap();
        assert_eq!(x, vec![int(2), int(1)]);
        assert!(kernel.is_empty());
        let singular = mat(&[&[1, 1], &[1, 1]]);
        assert!(singular.solve(&[int(0), int(1)]).is_none());
    }

    #[test]
    fn power_of_nilpotent() {
        let n = mat(&[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]]);
        assert!(!n.pow(2).is_zero());
        assert!(n.pow(3).is_zero());
        assert!(n.pow(0).is_identity());
    }

    #[test]
    fn wire_matrix_uses_strings() {
        let m = Matrix::from_rows(vec![vec![frac(1, 2), int(0)], vec![int(0), int(-3)]]).unwrap();
        let json = serde_json::to_string(&m.to_wire()).unwrap();
        assert_eq!(json, r#"{"dim":2,"entries":[["1/2","0"],["0","-3"]]}"#);
        let back: WireMatrix = serde_json::from_str(&json).unwrap();
        assert_eq!(Matrix::from_wire(&back).unwrap(), m);
    }
}

use serde::{Deserialize, Serialize};

use super::{LinalgError, Mat};

/// Which discrete alphabet a matrix's entries come from, most specific first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Discreteness {
    /// Entries in {0, 1}.
    Binary,
    /// Entries in {-1, 1}.
    Signed,
    /// Entries in {-1, 0, 1}.
    Ternary,
    General,
}

/// Dense symmetric matrix stored as its packed lower triangle.
///
/// Symmetry holds by construction. Integer-valued data is kept exactly (every
/// integer below 2^53 is an exact `f64`), and [`SymMat::to_i64`] returns an
/// exact integer copy when one exists.
///
/// Serializes as a list of full rows; deserializing rejects asymmetric input.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<f64>>", into = "Vec<Vec<f64>>")]
pub struct SymMat {
    n: usize,
    data: Vec<f64>,
}

#[inline]
fn idx(i: usize, j: usize) -> usize {
    let (r, c) = if i >= j { (i, j) } else { (j, i) };
    r * (r + 1) / 2 + c
}

impl SymMat {
    pub fn zeros(n: usize) -> Self {
        SymMat { n, data: vec![0.0; n * (n + 1) / 2] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_diag(&vec![1.0; n])
    }

    /// The all-ones matrix `J_n`.
    pub fn ones(n: usize) -> Self {
        SymMat { n, data: vec![1.0; n * (n + 1) / 2] }
    }

    pub fn from_diag(d: &[f64]) -> Self {
        let mut m = Self::zeros(d.len());
        for (i, &v) in d.iter().enumerate() {
            m.set(i, i, v);
        }
        m
    }

    /// Builds from a function of `(i, j)` evaluated on the lower triangle.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..=i {
                m.data[idx(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Builds from full rows, rejecting ragged or asymmetric input. Symmetry
    /// is checked exactly.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self, LinalgError> {
        Self::from_rows_tol(rows, 0.0)
    }

    /// Like [`SymMat::from_rows`] but accepts `|a_ij - a_ji| ≤ tol·max(1,|a_ij|)`,
    /// keeping the average.
    pub fn from_rows_tol(rows: &[Vec<f64>], tol: f64) -> Result<Self, LinalgError> {
        let n = rows.len();
        if let Some(r) = rows.iter().position(|r| r.len() != n) {
            return Err(LinalgError::Shape(format!(
                "row {} has {} entries, expected {n}",
                r + 1,
                rows[r].len()
            )));
        }
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..=i {
                let (a, b) = (rows[i][j], rows[j][i]);
                if (a - b).abs() > tol * a.abs().max(1.0) {
                    return Err(LinalgError::NotSymmetric { i, j });
                }
                m.data[idx(i, j)] = if a == b { a } else { 0.5 * (a + b) };
            }
        }
        Ok(m)
    }

    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Result<Self, LinalgError> {
        let f: Vec<Vec<f64>> = rows.iter().map(|r| r.iter().map(|&v| v as f64).collect()).collect();
        Self::from_rows(&f)
    }

    /// `x xᵀ`.
    pub fn outer(x: &[f64]) -> Self {
        Self::from_fn(x.len(), |i, j| x[i] * x[j])
    }

    /// Symmetric part of a square general matrix, `(M + Mᵀ)/2`.
    pub fn sym_part(m: &Mat) -> Self {
        assert_eq!(m.rows(), m.cols(), "sym_part needs a square matrix");
        Self::from_fn(m.rows(), |i, j| {
            if i == j {
                m[(i, i)]
            } else {
                0.5 * (m[(i, j)] + m[(j, i)])
            }
        })
    }

    /// `M` itself when it is exactly symmetric.
    pub fn try_from_mat(m: &Mat) -> Result<Self, LinalgError> {
        if m.rows() != m.cols() {
            return Err(LinalgError::Shape(format!("{}x{} is not square", m.rows(), m.cols())));
        }
        let rows: Vec<Vec<f64>> = (0..m.rows()).map(|i| m.row(i).to_vec()).collect();
        Self::from_rows(&rows)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[idx(i, j)]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[idx(i, j)] = v;
    }

    #[inline]
    pub fn add_to(&mut self, i: usize, j: usize, v: f64) {
        self.data[idx(i, j)] += v;
    }

    pub fn diag(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    pub fn row(&self, i: usize) -> Vec<f64> {
        (0..self.n).map(|j| self.get(i, j)).collect()
    }

    /// Row-major full copy.
    pub fn to_dense(&self) -> Vec<f64> {
        let n = self.n;
        let mut out = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..=i {
                let v = self.data[idx(i, j)];
                out[i * n + j] = v;
                out[j * n + i] = v;
            }
        }
        out
    }

    pub fn to_mat(&self) -> Mat {
        Mat::from_vec(self.n, self.n, self.to_dense())
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.n).map(|i| self.row(i)).collect()
    }

    /// Max absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j).abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn norm_frob(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..self.n {
            for j in 0..=i {
                let v = self.get(i, j);
                s += if i == j { v * v } else { 2.0 * v * v };
            }
        }
        s.sqrt()
    }

    pub fn scale(&self, a: f64) -> Self {
        SymMat { n: self.n, data: self.data.iter().map(|v| v * a).collect() }
    }

    pub fn add(&self, other: &SymMat) -> Self {
        assert_eq!(self.n, other.n);
        SymMat {
            n: self.n,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &SymMat) -> Self {
        self.add(&other.scale(-1.0))
    }

    /// Frobenius inner product `⟨A, B⟩ = tr(AB)`.
    pub fn inner(&self, other: &SymMat) -> f64 {
        assert_eq!(self.n, other.n);
        let mut s = 0.0;
        for i in 0..self.n {
            for j in 0..=i {
                let p = self.get(i, j) * other.get(i, j);
                s += if i == j { p } else { 2.0 * p };
            }
        }
        s
    }

    pub fn mul(&self, other: &SymMat) -> Mat {
        self.to_mat().mul(&other.to_mat())
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n).map(|i| (0..self.n).map(|j| self.get(i, j) * x[j]).sum()).collect()
    }

    /// `B = PᵀAP` for the permutation sending new index `k` to old `perm[k]`,
    /// i.e. `B[k][l] = A[perm[k]][perm[l]]`.
    pub fn permute(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.n);
        Self::from_fn(self.n, |i, j| self.get(perm[i], perm[j]))
    }

    pub fn principal(&self, idx: &[usize]) -> Self {
        Self::from_fn(idx.len(), |i, j| self.get(idx[i], idx[j]))
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, other: &SymMat) -> Self {
        let (a, b) = (self.n, other.n);
        Self::from_fn(a + b, |i, j| {
            if i < a && j < a {
                self.get(i, j)
            } else if i >= a && j >= a {
                other.get(i - a, j - a)
            } else {
                0.0
            }
        })
    }

    /// `[[t, dᵀ], [d, self]]`.
    pub fn bordered(&self, corner: f64, border: &[f64]) -> Self {
        assert_eq!(border.len(), self.n);
        Self::from_fn(self.n + 1, |i, j| match (i, j) {
            (0, 0) => corner,
            (i, 0) => border[i - 1],
            (i, j) => self.get(i - 1, j - 1),
        })
    }

    pub fn is_integer(&self) -> bool {
        self.data.iter().all(|v| v.fract() == 0.0 && v.abs() < 9.0e15)
    }

    /// Exact integer copy (row-major, full) when every entry is integral.
    pub fn to_i64(&self) -> Option<Vec<Vec<i64>>> {
        if !self.is_integer() {
            return None;
        }
        Some((0..self.n).map(|i| (0..self.n).map(|j| self.get(i, j) as i64).collect()).collect())
    }

    fn all_in(&self, alphabet: &[f64]) -> bool {
        self.data.iter().all(|v| alphabet.contains(v))
    }

    pub fn is_binary(&self) -> bool {
        self.all_in(&[0.0, 1.0])
    }

    pub fn is_signed(&self) -> bool {
        self.all_in(&[-1.0, 1.0])
    }

    pub fn is_ternary(&self) -> bool {
        self.all_in(&[-1.0, 0.0, 1.0])
    }

    pub fn discreteness(&self) -> Discreteness {
        if self.is_binary() {
            Discreteness::Binary
        } else if self.is_signed() {
            Discreteness::Signed
        } else if self.is_ternary() {
            Discreteness::Ternary
        } else {
            Discreteness::General
        }
    }

    /// Entries of the upper triangle (diagonal included) in row-major order.
    pub fn upper_triangle(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.data.len());
        for i in 0..self.n {
            for j in i..self.n {
                out.push(self.get(i, j));
            }
        }
        out
    }
}

impl TryFrom<Vec<Vec<f64>>> for SymMat {
    type Error = LinalgError;

    fn try_from(rows: Vec<Vec<f64>>) -> Result<Self, Self::Error> {
        Self::from_rows(&rows)
    }
}

impl From<SymMat> for Vec<Vec<f64>> {
    fn from(m: SymMat) -> Self {
        m.to_rows()
    }
}

impl std::fmt::Display for SymMat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&super::text::write_symmat(self))
    }
}

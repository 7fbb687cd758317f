//! Exact matrices over finite fields: rank, kernels, and homology of
//! two-step complexes.
//!
//! Matrices act on column vectors. Storage is either dense (row-major) or a
//! sparse triplet list; elimination densifies anything with more than 20%
//! nonzero entries and runs a sparse row-reduction otherwise. Pivots are
//! chosen by sparsity count, ties broken by row order, so every routine is
//! deterministic given its input.

use thiserror::Error;

use crate::field::{Arith, Elem, Field};

/// Density above which a sparse matrix is converted before elimination.
pub const DENSIFY_THRESHOLD: f64 = 0.2;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("entry ({row}, {col}) outside a {rows}x{cols} matrix")]
    OutOfRange { row: usize, col: usize, rows: usize, cols: usize },
    #[error("duplicate sparse entry at ({0}, {1})")]
    DuplicateEntry(usize, usize),
    #[error("maps are not composable: {0}")]
    NotComposable(String),
    #[error("composition of the two maps is nonzero ({nonzero} nonzero entries)")]
    ComplexViolation { nonzero: usize },
    #[error("dimension mismatch: {0}")]
    Shape(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Storage {
    Dense(Vec<Elem>),
    /// Sorted by (row, col), no duplicates, no explicit zeros.
    Sparse(Vec<(usize, usize, Elem)>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    storage: Storage,
}

impl Matrix {
    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Matrix {
        Matrix { field: field.clone(), rows, cols, storage: Storage::Dense(vec![0; rows * cols]) }
    }

    pub fn identity(field: &Field, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    /// Dense matrix from rows; all rows must have length `cols`.
    pub fn from_rows(field: &Field, cols: usize, rows: Vec<Vec<Elem>>) -> Result<Matrix, LinalgError> {
        let r = rows.len();
        let mut data = Vec::with_capacity(r * cols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != cols {
                return Err(LinalgError::Shape(format!("row {i} has length {} != {cols}", row.len())));
            }
            data.extend(row);
        }
        Ok(Matrix { field: field.clone(), rows: r, cols, storage: Storage::Dense(data) })
    }

    /// Sparse matrix from `(row, col, value)` triplets. Zero values are dropped.
    pub fn from_triplets(
        field: &Field,
        rows: usize,
        cols: usize,
        mut entries: Vec<(usize, usize, Elem)>,
    ) -> Result<Matrix, LinalgError> {
        for &(r, c, _) in &entries {
            if r >= rows || c >= cols {
                return Err(LinalgError::OutOfRange { row: r, col: c, rows, cols });
            }
        }
        entries.sort_unstable_by_key(|&(r, c, _)| (r, c));
        for w in entries.windows(2) {
            if (w[0].0, w[0].1) == (w[1].0, w[1].1) {
                return Err(LinalgError::DuplicateEntry(w[0].0, w[0].1));
            }
        }
        entries.retain(|&(_, _, v)| v != 0);
        Ok(Matrix { field: field.clone(), rows, cols, storage: Storage::Sparse(entries) })
    }

    /// Matrix whose columns are the given vectors (each of length `rows`).
    pub fn from_columns(field: &Field, rows: usize, columns: &[Vec<Elem>]) -> Matrix {
        let mut m = Matrix::zeros(field, rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length mismatch");
            for (i, &v) in col.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_sparse(&self) -> bool {
        matches!(self.storage, Storage::Sparse(_))
    }

    pub fn nnz(&self) -> usize {
        match &self.storage {
            Storage::Dense(d) => d.iter().filter(|&&v| v != 0).count(),
            Storage::Sparse(e) => e.len(),
        }
    }

    pub fn density(&self) -> f64 {
        let total = self.rows * self.cols;
        if total == 0 {
            0.0
        } else {
            self.nnz() as f64 / total as f64
        }
    }

    pub fn get(&self, r: usize, c: usize) -> Elem {
        assert!(r < self.rows && c < self.cols);
        match &self.storage {
            Storage::Dense(d) => d[r * self.cols + c],
            Storage::Sparse(e) => e
                .binary_search_by_key(&(r, c), |&(a, b, _)| (a, b))
                .map(|i| e[i].2)
                .unwrap_or(0),
        }
    }

    /// Sets an entry, densifying sparse storage first.
    pub fn set(&mut self, r: usize, c: usize, v: Elem) {
        assert!(r < self.rows && c < self.cols);
        self.densify();
        if let Storage::Dense(d) = &mut self.storage {
            d[r * self.cols + c] = v;
        }
    }

    fn densify(&mut self) {
        if let Storage::Sparse(e) = &self.storage {
            let mut d = vec![0; self.rows * self.cols];
            for &(r, c, v) in e {
                d[r * self.cols + c] = v;
            }
            self.storage = Storage::Dense(d);
        }
    }

    pub fn to_dense(&self) -> Matrix {
        let mut m = self.clone();
        m.densify();
        m
    }

    pub fn to_rows(&self) -> Vec<Vec<Elem>> {
        let mut out = vec![vec![0; self.cols]; self.rows];
        self.for_each_nonzero(|r, c, v| out[r][c] = v);
        out
    }

    pub fn for_each_nonzero(&self, mut f: impl FnMut(usize, usize, Elem)) {
        match &self.storage {
            Storage::Dense(d) => {
                for r in 0..self.rows {
                    for c in 0..self.cols {
                        let v = d[r * self.cols + c];
                        if v != 0 {
                            f(r, c, v);
                        }
                    }
                }
            }
            Storage::Sparse(e) => e.iter().for_each(|&(r, c, v)| f(r, c, v)),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.nnz() == 0
    }

    pub fn transpose(&self) -> Matrix {
        let mut entries = Vec::with_capacity(self.nnz());
        self.for_each_nonzero(|r, c, v| entries.push((c, r, v)));
        let t = Matrix::from_triplets(&self.field, self.cols, self.rows, entries).expect("valid transpose");
        if self.is_sparse() {
            t
        } else {
            t.to_dense()
        }
    }

    /// Product `self * other`.
    pub fn mul(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &self.field;
        let rhs = other.to_rows();
        let mut out = vec![0; self.rows * other.cols];
        self.for_each_nonzero(|r, k, a| {
            let row = &mut out[r * other.cols..(r + 1) * other.cols];
            for (j, &b) in rhs[k].iter().enumerate() {
                if b != 0 {
                    row[j] = f.add(row[j], f.mul(a, b));
                }
            }
        });
        Ok(Matrix { field: f.clone(), rows: self.rows, cols: other.cols, storage: Storage::Dense(out) })
    }

    pub fn mul_vec(&self, v: &[Elem]) -> Vec<Elem> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        let f = &self.field;
        let mut out = vec![0; self.rows];
        self.for_each_nonzero(|r, c, a| out[r] = f.add(out[r], f.mul(a, v[c])));
        out
    }

    /// Rank over the field.
    pub fn rank(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        let sparse_path = self.is_sparse() && self.density() <= DENSIFY_THRESHOLD;
        match (self.field.prime_ops(), sparse_path) {
            (Some(ops), true) => sparse_rank(&ops, self.cols, self.sparse_rows()),
            (None, true) => sparse_rank(&self.field, self.cols, self.sparse_rows()),
            (Some(ops), false) => rref_in_place(&ops, self.rows, self.cols, &mut self.dense_data()).len(),
            (None, false) => rref_in_place(&self.field, self.rows, self.cols, &mut self.dense_data()).len(),
        }
    }

    /// Basis of the right null space; `cols - rank` vectors, each with `m v = 0`.
    pub fn kernel_basis(&self) -> Vec<Vec<Elem>> {
        let (data, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let f = &self.field;
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![0; self.cols];
            v[free] = 1;
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(data[i * self.cols + free]);
            }
            basis.push(v);
        }
        basis
    }

    /// Reduced row echelon form (row-major data, pivot columns in row order).
    pub fn rref(&self) -> (Vec<Elem>, Vec<usize>) {
        let mut data = self.dense_data();
        let pivots = match self.field.prime_ops() {
            Some(ops) => rref_in_place(&ops, self.rows, self.cols, &mut data),
            None => rref_in_place(&self.field, self.rows, self.cols, &mut data),
        };
        (data, pivots)
    }

    /// Indices of a maximal set of linearly independent rows, in increasing order.
    pub fn independent_rows(&self) -> Vec<usize> {
        let t = self.transpose().to_dense();
        let (_, pivots) = t.rref();
        pivots
    }

    /// Solves `self x = b` when a solution exists; returns one solution.
    pub fn solve(&self, b: &[Elem]) -> Option<Vec<Elem>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Matrix::zeros(&self.field, self.rows, self.cols + 1);
        self.for_each_nonzero(|r, c, v| aug.set(r, c, v));
        for (r, &v) in b.iter().enumerate() {
            aug.set(r, self.cols, v);
        }
        let (data, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![0; self.cols];
        for (i, &pc) in pivots.iter().enumerate() {
            x[pc] = data[i * (self.cols + 1) + self.cols];
        }
        Some(x)
    }

    /// Solves `self x = b` for many right-hand sides with one elimination.
    ///
    /// Requires full column rank. `Err(i)` names the first inconsistent
    /// right-hand side (or `usize::MAX` when the matrix is rank deficient).
    pub fn solve_many(&self, rhs: &[Vec<Elem>]) -> Result<Vec<Vec<Elem>>, usize> {
        let width = self.cols + rhs.len();
        let mut data = vec![0; self.rows * width];
        self.for_each_nonzero(|r, c, v| data[r * width + c] = v);
        for (k, b) in rhs.iter().enumerate() {
            assert_eq!(b.len(), self.rows);
            for (r, &v) in b.iter().enumerate() {
                data[r * width + self.cols + k] = v;
            }
        }
        let pivots = match self.field.prime_ops() {
            Some(ops) => rref_in_place(&ops, self.rows, width, &mut data),
            None => rref_in_place(&self.field, self.rows, width, &mut data),
        };
        let rank = pivots.iter().take_while(|&&c| c < self.cols).count();
        if rank < self.cols {
            return Err(usize::MAX);
        }
        if let Some(&c) = pivots.get(rank) {
            return Err(c - self.cols);
        }
        Ok((0..rhs.len()).map(|k| (0..self.cols).map(|i| data[i * width + self.cols + k]).collect()).collect())
    }

    /// Returns the permuted matrix with entry (i, j) = self(row_perm[i], col_perm[j]).
    pub fn permuted(&self, row_perm: &[usize], col_perm: &[usize]) -> Matrix {
        assert_eq!(row_perm.len(), self.rows);
        assert_eq!(col_perm.len(), self.cols);
        let mut out = Matrix::zeros(&self.field, self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(row_perm[i], col_perm[j]));
            }
        }
        out
    }

    fn dense_data(&self) -> Vec<Elem> {
        match &self.storage {
            Storage::Dense(d) => d.clone(),
            Storage::Sparse(_) => match self.to_dense().storage {
                Storage::Dense(d) => d,
                Storage::Sparse(_) => unreachable!(),
            },
        }
    }

    fn sparse_rows(&self) -> Vec<Vec<(usize, Elem)>> {
        let mut rows = vec![Vec::new(); self.rows];
        self.for_each_nonzero(|r, c, v| rows[r].push((c, v)));
        rows
    }
}

/// In-place Gauss-Jordan elimination. At each column the pivot is the
/// candidate row with the fewest nonzeros to its right.
fn rref_in_place<A: Arith>(ops: &A, rows: usize, cols: usize, data: &mut [Elem]) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let mut best: Option<(usize, usize)> = None;
        for i in r..rows {
            if data[i * cols + c] != 0 {
                let weight = data[i * cols + c..(i + 1) * cols].iter().filter(|&&v| v != 0).count();
                if best.is_none_or(|(_, w)| weight < w) {
                    best = Some((i, weight));
                }
            }
        }
        let Some((pr, _)) = best else { continue };
        if pr != r {
            for j in 0..cols {
                data.swap(pr * cols + j, r * cols + j);
            }
        }
        let inv = ops.inv(data[r * cols + c]);
        for j in c..cols {
            let v = data[r * cols + j];
            if v != 0 {
                data[r * cols + j] = ops.mul(v, inv);
            }
        }
        let (before, rest) = data.split_at_mut(r * cols);
        let (pivot_row, after) = rest.split_at_mut(cols);
        let eliminate = |row: &mut [Elem]| {
            let factor = row[c];
            if factor != 0 {
                for j in c..cols {
                    let b = pivot_row[j];
                    if b != 0 {
                        row[j] = ops.sub_mul(row[j], factor, b);
                    }
                }
            }
        };
        before.chunks_mut(cols).for_each(eliminate);
        after.chunks_mut(cols).for_each(eliminate);
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Rank by sparse row reduction. Rows are inserted in order of increasing
/// nonzero count and reduced against existing pivots keyed by leading column.
fn sparse_rank<A: Arith>(ops: &A, cols: usize, mut rows: Vec<Vec<(usize, Elem)>>) -> usize {
    rows.sort_by_key(|r| r.len());
    let mut pivot_of: Vec<Option<Vec<(usize, Elem)>>> = vec![None; cols];
    let mut rank = 0;
    let mut scratch: Vec<(usize, Elem)> = Vec::new();
    for mut row in rows {
        loop {
            let Some(&(lead, val)) = row.first() else { break };
            match &pivot_of[lead] {
                None => {
                    let inv = ops.inv(val);
                    for e in row.iter_mut() {
                        e.1 = ops.mul(e.1, inv);
                    }
                    pivot_of[lead] = Some(row);
                    rank += 1;
                    break;
                }
                Some(piv) => {
                    // row <- row - val * piv (piv is monic at `lead`).
                    scratch.clear();
                    let (mut i, mut j) = (0, 0);
                    while i < row.len() || j < piv.len() {
                        let ci = row.get(i).map_or(usize::MAX, |e| e.0);
                        let cj = piv.get(j).map_or(usize::MAX, |e| e.0);
                        if ci < cj {
                            scratch.push(row[i]);
                            i += 1;
                        } else if cj < ci {
                            scratch.push((cj, ops.neg(ops.mul(val, piv[j].1))));
                            j += 1;
                        } else {
                            let v = ops.sub_mul(row[i].1, val, piv[j].1);
                            if v != 0 {
                                scratch.push((ci, v));
                            }
                            i += 1;
                            j += 1;
                        }
                    }
                    std::mem::swap(&mut row, &mut scratch);
                }
            }
        }
    }
    rank
}

/// Two composable maps `A -> M -> B` (`first: A -> M`, `second: M -> B`).
#[derive(Debug, Clone)]
pub struct HomPair {
    pub first: Matrix,
    pub second: Matrix,
}

impl HomPair {
    pub fn new(first: Matrix, second: Matrix) -> Result<HomPair, LinalgError> {
        if first.rows() != second.cols() {
            return Err(LinalgError::NotComposable(format!(
                "first has {} rows, second has {} columns",
                first.rows(),
                second.cols()
            )));
        }
        Ok(HomPair { first, second })
    }

    pub fn middle_dim(&self) -> usize {
        self.second.cols()
    }

    /// Checks `second * first = 0` exactly.
    pub fn verify_complex(&self) -> Result<(), LinalgError> {
        if self.first.cols() == 0 || self.second.rows() == 0 {
            return Ok(());
        }
        let comp = self.second.mul(&self.first)?;
        match comp.nnz() {
            0 => Ok(()),
            nonzero => Err(LinalgError::ComplexViolation { nonzero }),
        }
    }

    /// `dim ker(second) - rank(first)`, after verifying the complex condition.
    pub fn homology_dim(&self) -> Result<usize, LinalgError> {
        self.verify_complex()?;
        let kernel = self.middle_dim() - self.second.rank();
        Ok(kernel - self.first.rank())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn gf(p: u64) -> Field {
        Field::prime(p).unwrap()
    }

    fn random_matrix(f: &Field, rows: usize, cols: usize, rank_cap: usize, rng: &mut ChaCha8Rng) -> Matrix {
        // Product of rows x r and r x cols random factors.
        let a = Matrix::from_rows(f, rank_cap, (0..rows).map(|_| (0..rank_cap).map(|_| f.random(rng)).collect()).collect()).unwrap();
        let b = Matrix::from_rows(f, cols, (0..rank_cap).map(|_| (0..cols).map(|_| f.random(rng)).collect()).collect()).unwrap();
        a.mul(&b).unwrap()
    }

    #[test]
    fn identity_and_zero() {
        let f = gf(101);
        assert_eq!(Matrix::identity(&f, 3).rank(), 3);
        assert_eq!(Matrix::zeros(&f, 4, 7).rank(), 0);
        assert!(Matrix::identity(&f, 3).kernel_basis().is_empty());
        assert_eq!(Matrix::zeros(&f, 0, 0).rank(), 0);
    }

    #[test]
    fn one_by_two_kernel() {
        let f = gf(5);
        let m = Matrix::from_rows(&f, 2, vec![vec![1, 1]]).unwrap();
        let k = m.kernel_basis();
        assert_eq!(k.len(), 1);
        assert_eq!(f.add(k[0][0], k[0][1]), 0);
        assert_ne!(k[0], vec![0, 0]);
    }

    #[test]
    fn sparse_validation() {
        let f = gf(7);
        assert!(matches!(Matrix::from_triplets(&f, 2, 2, vec![(2, 0, 1)]), Err(LinalgError::OutOfRange { .. })));
        assert!(matches!(
            Matrix::from_triplets(&f, 2, 2, vec![(0, 0, 1), (0, 0, 2)]),
            Err(LinalgError::DuplicateEntry(0, 0))
        ));
    }

    #[test]
    fn sparse_and_dense_paths_agree() {
        let f = gf(1009);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let (rows, cols) = (rng.gen_range(1..60), rng.gen_range(1..60));
            let mut entries = Vec::new();
            for r in 0..rows {
                for c in 0..cols {
                    if rng.gen_bool(0.05) {
                        entries.push((r, c, f.random_nonzero(&mut rng)));
                    }
                }
            }
            // Force some dependent rows.
            let m = Matrix::from_triplets(&f, rows, cols, entries).unwrap();
            assert!(m.density() <= DENSIFY_THRESHOLD);
            assert_eq!(m.rank(), m.to_dense().rank());
        }
    }

    #[test]
    fn kernel_vectors_are_annihilated() {
        let f = gf(101);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let m = random_matrix(&f, 15, 30, 9, &mut rng);
        let k = m.kernel_basis();
        assert_eq!(k.len(), 30 - m.rank());
        assert_eq!(m.rank(), 9);
        for v in &k {
            assert!(m.mul_vec(v).iter().all(|&x| x == 0));
        }
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let f = gf(13);
        let m = Matrix::from_rows(&f, 2, vec![vec![1, 2], vec![2, 4]]).unwrap();
        let x = m.solve(&[3, 6]).unwrap();
        assert_eq!(m.mul_vec(&x), vec![3, 6]);
        assert!(m.solve(&[3, 7]).is_none());
    }

    #[test]
    fn homology_of_zero_pair_is_middle_dim() {
        let f = gf(101);
        let pair = HomPair::new(Matrix::zeros(&f, 7, 3), Matrix::zeros(&f, 2, 7)).unwrap();
        assert_eq!(pair.homology_dim().unwrap(), 7);
    }

    #[test]
    fn exact_pair_has_zero_homology() {
        let f = gf(101);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let second = random_matrix(&f, 4, 10, 4, &mut rng);
        let kernel = second.kernel_basis();
        let first = Matrix::from_columns(&f, 10, &kernel);
        let pair = HomPair::new(first, second).unwrap();
        assert_eq!(pair.homology_dim().unwrap(), 0);
    }

    #[test]
    fn complex_violation_reported() {
        let f = gf(101);
        let pair = HomPair::new(Matrix::identity(&f, 2), Matrix::identity(&f, 2)).unwrap();
        assert!(matches!(pair.homology_dim(), Err(LinalgError::ComplexViolation { nonzero: 2 })));
        assert!(HomPair::new(Matrix::identity(&f, 2), Matrix::identity(&f, 3)).is_err());
    }

    #[test]
    fn extension_field_rank() {
        let f = Field::extension(3, 2).unwrap();
        let m = Matrix::from_rows(&f, 2, vec![vec![1, 3], vec![3, f.mul(3, 3)]]).unwrap();
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn independent_rows_span() {
        let f = gf(31);
        let m = Matrix::from_rows(&f, 3, vec![vec![1, 2, 3], vec![2, 4, 6], vec![0, 1, 1]]).unwrap();
        assert_eq!(m.independent_rows(), vec![0, 2]);
    }
}

use std::fmt;
use std::ops::{Index, IndexMut};

use super::field::{FieldSpec, Scalar};
use crate::error::{Error, Result};

/// Dense row-major matrix over a single exact field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    field: FieldSpec,
    data: Vec<Scalar>,
}

/// Reduced row-echelon form together with its pivot columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub reduced: Matrix,
    pub pivots: Vec<usize>,
    pub rank: usize,
}

impl Matrix {
    pub fn zeros(field: FieldSpec, rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, field, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: FieldSpec, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m[(i, i)] = field.one();
        }
        m
    }

    pub fn from_rows(field: FieldSpec, rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            if row.len() != c {
                return Err(Error::DimensionMismatch(format!("ragged row of length {} (expected {c})", row.len())));
            }
            for x in row {
                if x.field() != field {
                    return Err(Error::FieldMismatch);
                }
                data.push(x);
            }
        }
        Ok(Matrix { rows: r, cols: c, field, data })
    }

    /// Convenience constructor from small integer literals.
    pub fn from_i64(field: FieldSpec, rows: &[&[i64]]) -> Self {
        let rows = rows.iter().map(|r| r.iter().map(|&x| field.from_i64(x)).collect()).collect();
        Self::from_rows(field, rows).expect("rectangular literal")
    }

    /// Builds a `rows x columns.len()` matrix whose columns are the given vectors.
    pub fn from_columns(field: FieldSpec, rows: usize, columns: &[Vec<Scalar>]) -> Self {
        let mut m = Self::zeros(field, rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length");
            for (i, x) in col.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Scalar>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zeros(self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other.data[k * other.cols + j];
                    if !b.is_zero() {
                        out.data[i * other.cols + j].add_product(a, b);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols, "vector length");
        let mut out = vec![self.field.zero(); self.rows];
        for (i, o) in out.iter_mut().enumerate() {
            for (j, x) in v.iter().enumerate() {
                if !x.is_zero() {
                    o.add_product(&self.data[i * self.cols + j], x);
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        self.check_same_shape(other)?;
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(&other.data) {
            a.add_assign_ref(b);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        self.add(&other.scale(&-self.field.one()))
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            field: self.field,
            data: self.data.iter().map(|x| x * s).collect(),
        }
    }

    fn check_same_shape(&self, other: &Matrix) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn select_rows(&self, idx: &[usize]) -> Matrix {
        let mut out = Matrix::zeros(self.field, idx.len(), self.cols);
        for (r, &i) in idx.iter().enumerate() {
            for j in 0..self.cols {
                out[(r, j)] = self[(i, j)].clone();
            }
        }
        out
    }

    pub fn select_cols(&self, idx: &[usize]) -> Matrix {
        let mut out = Matrix::zeros(self.field, self.rows, idx.len());
        for i in 0..self.rows {
            for (c, &j) in idx.iter().enumerate() {
                out[(i, c)] = self[(i, j)].clone();
            }
        }
        out
    }

    pub fn hstack(&self, other: &Matrix) -> Result<Matrix> {
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch(format!("hstack {} rows vs {}", self.rows, other.rows)));
        }
        let mut out = Matrix::zeros(self.field, self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self[(i, j)].clone();
            }
            for j in 0..other.cols {
                out[(i, self.cols + j)] = other[(i, j)].clone();
            }
        }
        Ok(out)
    }

    pub fn vstack(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!("vstack {} cols vs {}", self.cols, other.cols)));
        }
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Ok(Matrix { rows: self.rows + other.rows, cols: self.cols, field: self.field, data })
    }

    /// Gauss-Jordan elimination. Pivots come back strictly increasing.
    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m[(r, c)].inv().expect("nonzero pivot");
            for j in c..m.cols {
                let x = &m.data[r * m.cols + j] * &inv;
                m.data[r * m.cols + j] = x;
            }
            for i in 0..m.rows {
                if i == r || m[(i, c)].is_zero() {
                    continue;
                }
                let factor = -&m[(i, c)];
                for j in c..m.cols {
                    let pv = m.data[r * m.cols + j].clone();
                    if !pv.is_zero() {
                        m.data[i * m.cols + j].add_product(&factor, &pv);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        let rank = pivots.len();
        Rref { reduced: m, pivots, rank }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        // eliminate along the shorter side
        if self.rows < self.cols {
            self.transpose().rref().rank
        } else {
            self.rref().rank
        }
    }

    /// Some `x` with `self * x = b`, or `None` when the system is inconsistent.
    /// Free variables are set to zero.
    pub fn solve(&self, b: &Matrix) -> Result<Option<Matrix>> {
        if self.rows != b.rows {
            return Err(Error::DimensionMismatch(format!(
                "solve: {} equations but right-hand side has {} rows",
                self.rows, b.rows
            )));
        }
        let aug = self.hstack(b)?.rref();
        if aug.pivots.iter().any(|&p| p >= self.cols) {
            return Ok(None);
        }
        let mut x = Matrix::zeros(self.field, self.cols, b.cols);
        for (r, &p) in aug.pivots.iter().enumerate() {
            for j in 0..b.cols {
                x[(p, j)] = aug.reduced[(r, self.cols + j)].clone();
            }
        }
        Ok(Some(x))
    }

    /// Columns spanning the kernel, one per free column of the RREF.
    pub fn kernel_basis(&self) -> Matrix {
        let Rref { reduced, pivots, .. } = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut k = Matrix::zeros(self.field, self.cols, free.len());
        for (col, &f) in free.iter().enumerate() {
            k[(f, col)] = self.field.one();
            for (r, &p) in pivots.iter().enumerate() {
                k[(p, col)] = -&reduced[(r, f)];
            }
        }
        k
    }

    /// A basis of the column space, taken from the original pivot columns.
    pub fn column_space(&self) -> Matrix {
        let Rref { pivots, .. } = self.rref();
        self.select_cols(&pivots)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }
}

/// Unit vectors completing the column span of `subspace` to all of `k^ambient_dim`.
///
/// The chosen coordinates are those that are not pivots of the RREF of the
/// transposed spanning set, so the answer depends only on the subspace and
/// the coordinate order.
pub fn complement(subspace: &Matrix, ambient_dim: usize) -> Result<Matrix> {
    if subspace.rows() != ambient_dim {
        return Err(Error::DimensionMismatch(format!(
            "subspace vectors have length {} in ambient dimension {ambient_dim}",
            subspace.rows()
        )));
    }
    let pivots = subspace.transpose().rref().pivots;
    let free: Vec<usize> = (0..ambient_dim).filter(|c| !pivots.contains(c)).collect();
    let mut out = Matrix::zeros(subspace.field(), ambient_dim, free.len());
    for (col, &f) in free.iter().enumerate() {
        out[(f, col)] = subspace.field().one();
    }
    Ok(out)
}

/// Coordinates (indices into `0..ambient_dim`) picked by [`complement`].
pub fn complement_coordinates(subspace: &Matrix) -> Vec<usize> {
    let pivots = subspace.transpose().rref().pivots;
    (0..subspace.rows()).filter(|c| !pivots.contains(c)).collect()
}

impl Index<(usize, usize)> for Matrix {
    type Output = Scalar;
    fn index(&self, (i, j): (usize, usize)) -> &Scalar {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of bounds");
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Scalar {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of bounds");
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Linear system assembled one equation at a time, kept in echelon form.
///
/// Large sparse systems (A-linearity constraints) produce many redundant
/// equations; only independent rows are stored.
#[derive(Clone, Debug)]
pub struct LinearSystem {
    field: FieldSpec,
    unknowns: usize,
    rows: Vec<(usize, Vec<Scalar>)>,
    inconsistent: bool,
}

impl LinearSystem {
    pub fn new(field: FieldSpec, unknowns: usize) -> Self {
        LinearSystem { field, unknowns, rows: Vec::new(), inconsistent: false }
    }

    pub fn unknowns(&self) -> usize {
        self.unknowns
    }

    pub fn is_consistent(&self) -> bool {
        !self.inconsistent
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Adds `sum coeffs[j] x_j = rhs`; `coeffs` is sparse `(index, value)`.
    pub fn add_equation(&mut self, coeffs: &[(usize, Scalar)], rhs: Scalar) {
        let mut row = vec![self.field.zero(); self.unknowns + 1];
        for (j, c) in coeffs {
            row[*j].add_assign_ref(c);
        }
        row[self.unknowns] = rhs;
        for (p, stored) in &self.rows {
            if row[*p].is_zero() {
                continue;
            }
            let factor = -&row[*p];
            for (x, s) in row.iter_mut().zip(stored) {
                if !s.is_zero() {
                    x.add_product(&factor, s);
                }
            }
        }
        match row[..self.unknowns].iter().position(|x| !x.is_zero()) {
            Some(p) => {
                let inv = row[p].inv().expect("nonzero");
                for x in row.iter_mut() {
                    *x = &*x * &inv;
                }
                self.rows.push((p, row));
            }
            None => {
                if !row[self.unknowns].is_zero() {
                    self.inconsistent = true;
                }
            }
        }
    }

    /// A particular solution with free variables set to zero.
    pub fn solution(&self) -> Option<Vec<Scalar>> {
        if self.inconsistent {
            return None;
        }
        let mut x = vec![self.field.zero(); self.unknowns];
        for (p, row) in self.rows.iter().rev() {
            let mut v = row[self.unknowns].clone();
            for (j, c) in row[..self.unknowns].iter().enumerate() {
                if j != *p && !c.is_zero() && !x[j].is_zero() {
                    v.add_product(&-c, &x[j]);
                }
            }
            x[*p] = v;
        }
        Some(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> FieldSpec {
        FieldSpec::Rationals
    }

    #[test]
    fn rref_empty() {
        let m = Matrix::zeros(q(), 0, 0);
        let r = m.rref();
        assert_eq!(r.rank, 0);
        assert!(r.pivots.is_empty());
    }

    #[test]
    fn rref_identity() {
        let id = Matrix::identity(q(), 3);
        let r = id.rref();
        assert_eq!(r.reduced, id);
        assert_eq!(r.rank, 3);
        assert_eq!(r.pivots, vec![0, 1, 2]);
    }

    #[test]
    fn rref_rank_one() {
        // hand elimination: R2 <- R2 - 2 R1 gives [[1,2],[0,0]]
        let m = Matrix::from_i64(q(), &[&[1, 2], &[2, 4]]);
        let r = m.rref();
        assert_eq!(r.rank, 1);
        assert_eq!(r.pivots, vec![0]);
        assert_eq!(r.reduced, Matrix::from_i64(q(), &[&[1, 2], &[0, 0]]));
    }

    #[test]
    fn solve_identity() {
        let b = Matrix::from_i64(q(), &[&[3, -1], &[5, 7]]);
        let x = Matrix::identity(q(), 2).solve(&b).unwrap().unwrap();
        assert_eq!(x, b);
    }

    #[test]
    fn solve_over_f2() {
        let f2 = FieldSpec::prime(2).unwrap();
        let a = Matrix::from_i64(f2, &[&[1, 1]]);
        let b = Matrix::from_i64(f2, &[&[1]]);
        let x = a.solve(&b).unwrap().unwrap();
        // the 4 candidates over F_2: (0,0),(0,1),(1,0),(1,1); valid ones sum to 1
        let valid: Vec<(i64, i64)> = [(0, 0), (0, 1), (1, 0), (1, 1)]
            .into_iter()
            .filter(|&(u, v)| (u + v) % 2 == 1)
            .collect();
        let got = (
            if x[(0, 0)].is_zero() { 0 } else { 1 },
            if x[(1, 0)].is_zero() { 0 } else { 1 },
        );
        assert!(valid.contains(&got));
        assert_eq!(a.mul(&x).unwrap(), b);
    }

    #[test]
    fn solve_inconsistent_and_mismatch() {
        let a = Matrix::from_i64(q(), &[&[0]]);
        assert_eq!(a.solve(&Matrix::from_i64(q(), &[&[1]])).unwrap(), None);
        let b = Matrix::zeros(q(), 2, 1);
        assert!(a.solve(&b).is_err());
    }

    #[test]
    fn kernels() {
        assert_eq!(Matrix::identity(q(), 3).kernel_basis().cols(), 0);
        let zero = Matrix::zeros(q(), 1, 2);
        assert_eq!(zero.kernel_basis().cols(), 2);
        let m = Matrix::from_i64(q(), &[&[1, 2], &[2, 4]]);
        let k = m.kernel_basis();
        assert_eq!(k.cols(), 1);
        // span{(2,-1)}: k is (-2, 1), a multiple
        assert_eq!(k.column(0), vec![q().from_i64(-2), q().from_i64(1)]);
    }

    #[test]
    fn complements() {
        let f = q();
        // span{(1,1,0)} in k^3: pivot coordinate 0, complement e1, e2
        let s = Matrix::from_i64(f, &[&[1], &[1], &[0]]);
        let c = complement(&s, 3).unwrap();
        assert_eq!(c.cols(), 2);
        assert_eq!(s.hstack(&c).unwrap().rank(), 3);
        // whole space has empty complement
        assert_eq!(complement(&Matrix::identity(f, 2), 2).unwrap().cols(), 0);
        // zero subspace: all unit vectors
        assert_eq!(complement(&Matrix::zeros(f, 3, 0), 3).unwrap(), Matrix::identity(f, 3));
        assert!(complement(&s, 2).is_err());
    }

    #[test]
    fn incremental_system() {
        let f = q();
        let mut sys = LinearSystem::new(f, 3);
        // x0 + x1 = 2, x1 - x2 = 1, 2x0 + 2x1 = 4 (redundant)
        sys.add_equation(&[(0, f.one()), (1, f.one())], f.from_i64(2));
        sys.add_equation(&[(1, f.one()), (2, f.from_i64(-1))], f.one());
        sys.add_equation(&[(0, f.from_i64(2)), (1, f.from_i64(2))], f.from_i64(4));
        assert_eq!(sys.rank(), 2);
        let x = sys.solution().unwrap();
        assert_eq!(&x[0] + &x[1], f.from_i64(2));
        assert_eq!(&x[1] - &x[2], f.one());
        sys.add_equation(&[(0, f.one()), (1, f.one())], f.from_i64(3));
        assert!(sys.solution().is_none());
    }
}

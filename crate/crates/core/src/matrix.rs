//! Dense vectors and matrices over a [`Field`], with exact elimination.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::Field;

/// A vector in GF(q)^n.
#[derive(Clone, PartialEq, Eq)]
pub struct Vector {
    field: Field,
    entries: Vec<u32>,
}

impl fmt::Debug for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.entries)
    }
}

impl Vector {
    pub fn new(field: &Field, entries: Vec<u32>) -> Result<Self> {
        if let Some(&bad) = entries.iter().find(|&&v| !field.contains(u64::from(v))) {
            return Err(Error::NotAnElement { value: u64::from(bad), q: field.order() });
        }
        Ok(Vector { field: field.clone(), entries })
    }

    pub fn zeros(field: &Field, len: usize) -> Self {
        Vector { field: field.clone(), entries: vec![0; len] }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.entries
    }

    pub fn into_inner(self) -> Vec<u32> {
        self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&x| x == 0)
    }

    /// Hamming weight.
    pub fn weight(&self) -> usize {
        self.entries.iter().filter(|&&x| x != 0).count()
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.entries[i] != 0).collect()
    }

    pub fn add(&self, other: &Vector) -> Result<Vector> {
        self.check(other)?;
        let f = &self.field;
        Ok(Vector {
            field: f.clone(),
            entries: self.entries.iter().zip(&other.entries).map(|(&a, &b)| f.add(a, b)).collect(),
        })
    }

    pub fn sub(&self, other: &Vector) -> Result<Vector> {
        self.check(other)?;
        let f = &self.field;
        Ok(Vector {
            field: f.clone(),
            entries: self.entries.iter().zip(&other.entries).map(|(&a, &b)| f.sub(a, b)).collect(),
        })
    }

    pub fn scale(&self, c: u32) -> Vector {
        let f = &self.field;
        Vector { field: f.clone(), entries: self.entries.iter().map(|&a| f.mul(a, c)).collect() }
    }

    fn check(&self, other: &Vector) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        if self.len() != other.len() {
            return Err(Error::Dimension(format!("vector lengths {} and {}", self.len(), other.len())));
        }
        Ok(())
    }
}

/// A dense row-major matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}x{} over {:?}", self.rows, self.cols, self.field)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        Ok(())
    }
}

impl Matrix {
    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Self {
        Matrix { field: field.clone(), rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(field: &Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(field: &Field, rows: &[Vec<u32>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if r == 0 || c == 0 {
            return Err(Error::Dimension("matrix must have at least one row and column".into()));
        }
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        let data: Vec<u32> = rows.concat();
        if let Some(&bad) = data.iter().find(|&&v| !field.contains(u64::from(v))) {
            return Err(Error::NotAnElement { value: u64::from(bad), q: field.order() });
        }
        Ok(Matrix { field: field.clone(), rows: r, cols: c, data })
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(field: &Field, columns: &[&[u32]]) -> Result<Self> {
        let c = columns.len();
        let r = columns.first().map_or(0, |v| v.len());
        if columns.iter().any(|v| v.len() != r) {
            return Err(Error::Dimension("columns of different lengths".into()));
        }
        let mut m = Self::zeros(field, r, c);
        for (j, col) in columns.iter().enumerate() {
            for (i, &v) in col.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        Ok(m)
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

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<u32> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(&self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        if self.cols != other.rows {
            return Err(Error::Dimension(format!("{}x{} times {}x{}", self.rows, self.cols, other.rows, other.cols)));
        }
        let f = &self.field;
        let mut out = Matrix::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = f.add(out.get(i, j), f.mul(a, other.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    /// `M · v` for a column vector `v`.
    pub fn mul_vec(&self, v: &[u32]) -> Result<Vec<u32>> {
        if v.len() != self.cols {
            return Err(Error::Dimension(format!("{} columns, vector of length {}", self.cols, v.len())));
        }
        let f = &self.field;
        Ok((0..self.rows).map(|r| dot(f, self.row(r), v)).collect())
    }

    /// `v · M` for a row vector `v`.
    pub fn vec_mul(&self, v: &[u32]) -> Result<Vec<u32>> {
        if v.len() != self.rows {
            return Err(Error::Dimension(format!("{} rows, vector of length {}", self.rows, v.len())));
        }
        let f = &self.field;
        let mut out = vec![0; self.cols];
        for (r, &a) in v.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (c, o) in out.iter_mut().enumerate() {
                *o = f.add(*o, f.mul(a, self.get(r, c)));
            }
        }
        Ok(out)
    }

    pub fn select_columns(&self, cols: &[usize]) -> Matrix {
        let mut m = Matrix::zeros(&self.field, self.rows, cols.len());
        for (j, &c) in cols.iter().enumerate() {
            for r in 0..self.rows {
                m.set(r, j, self.get(r, c));
            }
        }
        m
    }

    /// Reduces in place to reduced row echelon form and returns the pivot
    /// columns in order.
    pub fn rref_in_place(&mut self) -> Vec<usize> {
        let f = self.field.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&r| self.get(r, col) != 0) else {
                continue;
            };
            self.swap_rows(row, p);
            let inv = f.inv(self.get(row, col));
            for c in col..self.cols {
                let v = f.mul(self.get(row, c), inv);
                self.set(row, c, v);
            }
            for r in 0..self.rows {
                let factor = self.get(r, col);
                if r == row || factor == 0 {
                    continue;
                }
                for c in col..self.cols {
                    let v = f.sub(self.get(r, c), f.mul(factor, self.get(row, c)));
                    self.set(r, c, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right null space `{v : M·v = 0}`, one vector per free column.
    pub fn kernel_basis(&self) -> Vec<Vector> {
        let (r, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let f = &self.field;
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut v = vec![0; self.cols];
                v[free] = 1;
                for (i, &p) in pivots.iter().enumerate() {
                    v[p] = f.neg(r.get(i, free));
                }
                Vector { field: f.clone(), entries: v }
            })
            .collect()
    }

    /// Whether the columns at the given (zero-based) indices are linearly dependent.
    pub fn columns_dependent(&self, subset: &[usize]) -> Result<bool> {
        let mut seen = vec![false; self.cols];
        for &i in subset {
            if i >= self.cols {
                return Err(Error::IndexOutOfRange { index: i, len: self.cols });
            }
            if seen[i] {
                return Err(Error::DuplicateIndex(i));
            }
            seen[i] = true;
        }
        Ok(self.select_columns(subset).rank() < subset.len())
    }

    /// Solves `M·x = b` when the solution is unique; `None` if the system is
    /// inconsistent or underdetermined.
    pub fn solve_unique(&self, b: &[u32]) -> Option<Vec<u32>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = Matrix::zeros(&self.field, self.rows, self.cols + 1);
        for (r, &rhs) in b.iter().enumerate() {
            for c in 0..self.cols {
                aug.set(r, c, self.get(r, c));
            }
            aug.set(r, self.cols, rhs);
        }
        let pivots = aug.rref_in_place();
        if pivots.len() != self.cols || pivots.contains(&self.cols) {
            return None;
        }
        Some((0..self.cols).map(|i| aug.get(i, self.cols)).collect())
    }
}

pub(crate) fn dot(f: &Field, a: &[u32], b: &[u32]) -> u32 {
    a.iter().zip(b).fold(0, |acc, (&x, &y)| f.add(acc, f.mul(x, y)))
}

/// Rank of a small set of equal-length vectors.
pub fn vectors_rank(field: &Field, vectors: &[&[u32]]) -> usize {
    let mut basis = EchelonBasis::new(vectors.first().map_or(0, |v| v.len()));
    vectors.iter().filter(|v| basis.insert(field, v)).count()
}

/// Incrementally maintained basis in echelon form: each stored vector is
/// normalized to 1 at its pivot and zero at every earlier pivot.
#[derive(Clone, Debug)]
pub struct EchelonBasis {
    dim: usize,
    rows: Vec<(usize, Vec<u32>)>,
}

impl EchelonBasis {
    pub fn new(dim: usize) -> Self {
        EchelonBasis { dim, rows: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Residue of `v` after elimination against the basis.
    pub fn reduce(&self, field: &Field, v: &[u32]) -> Vec<u32> {
        debug_assert_eq!(v.len(), self.dim);
        let mut r = v.to_vec();
        for (p, b) in &self.rows {
            let c = r[*p];
            if c == 0 {
                continue;
            }
            for (x, &y) in r.iter_mut().zip(b) {
                *x = field.sub(*x, field.mul(c, y));
            }
        }
        r
    }

    pub fn contains(&self, field: &Field, v: &[u32]) -> bool {
        self.reduce(field, v).iter().all(|&x| x == 0)
    }

    /// Adds `v`; returns false (leaving the basis unchanged) if `v` is already
    /// in the span.
    pub fn insert(&mut self, field: &Field, v: &[u32]) -> bool {
        let mut r = self.reduce(field, v);
        let Some(p) = r.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = field.inv(r[p]);
        for x in &mut r {
            *x = field.mul(*x, inv);
        }
        self.rows.push((p, r));
        true
    }

    pub fn pop(&mut self) {
        self.rows.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn gf(q: u64) -> Field {
        Field::with_order(q).unwrap()
    }

    #[test]
    fn rank_basics() {
        let f = gf(7);
        assert_eq!(Matrix::identity(&f, 4).rank(), 4);
        assert_eq!(Matrix::zeros(&f, 3, 5).rank(), 0);
        assert!(Matrix::identity(&f, 4).kernel_basis().is_empty());
    }

    #[test]
    fn kernel_of_rank_one() {
        let f = gf(5);
        let m = Matrix::from_rows(&f, &[vec![1, 2, 3], vec![2, 4, 1]]).unwrap();
        let k = m.kernel_basis();
        assert_eq!(k.len(), 3 - m.rank());
        for v in &k {
            assert!(m.mul_vec(v.as_slice()).unwrap().iter().all(|&x| x == 0));
        }
    }

    #[test]
    fn zero_column_is_dependent() {
        let f = gf(4);
        let m = Matrix::from_rows(&f, &[vec![1, 0, 2], vec![0, 0, 1]]).unwrap();
        assert!(m.columns_dependent(&[0, 1]).unwrap());
        assert!(!m.columns_dependent(&[0, 2]).unwrap());
        assert!(matches!(m.columns_dependent(&[0, 3]), Err(Error::IndexOutOfRange { .. })));
        assert_eq!(m.columns_dependent(&[2, 2]), Err(Error::DuplicateIndex(2)));
    }

    #[test]
    fn solve_unique_system() {
        let f = gf(7);
        let m = Matrix::from_rows(&f, &[vec![1, 2], vec![3, 4], vec![5, 6]]).unwrap();
        let x = vec![3, 5];
        let b = m.mul_vec(&x).unwrap();
        assert_eq!(m.solve_unique(&b), Some(x));
        let wide = Matrix::from_rows(&f, &[vec![1, 2, 3]]).unwrap();
        assert_eq!(wide.solve_unique(&[1]), None);
    }

    #[test]
    fn ragged_rejected() {
        let f = gf(2);
        assert!(Matrix::from_rows(&f, &[vec![1, 0], vec![1]]).is_err());
        assert!(Matrix::from_rows(&f, &[vec![2]]).is_err());
        assert!(Vector::new(&f, vec![0, 3]).is_err());
    }

    fn arb_matrix() -> impl Strategy<Value = (u64, usize, usize, Vec<u32>)> {
        (prop::sample::select(vec![2u64, 3, 4, 5, 7, 8, 9]), 1usize..7, 1usize..8)
            .prop_flat_map(|(q, r, c)| (Just(q), Just(r), Just(c), prop::collection::vec(0..q as u32, r * c)))
    }

    fn build(q: u64, r: usize, c: usize, data: &[u32]) -> Matrix {
        let rows: Vec<Vec<u32>> = data.chunks(c).map(<[u32]>::to_vec).collect();
        assert_eq!(rows.len(), r);
        Matrix::from_rows(&gf(q), &rows).unwrap()
    }

    proptest! {
        #[test]
        fn rank_equals_transpose_rank((q, r, c, data) in arb_matrix()) {
            let m = build(q, r, c, &data);
            prop_assert_eq!(m.rank(), m.transpose().rank());
        }

        #[test]
        fn kernel_is_independent_null_space((q, r, c, data) in arb_matrix()) {
            let m = build(q, r, c, &data);
            let k = m.kernel_basis();
            prop_assert_eq!(k.len(), c - m.rank());
            for v in &k {
                prop_assert!(m.mul_vec(v.as_slice()).unwrap().iter().all(|&x| x == 0));
            }
            if !k.is_empty() {
                let cols: Vec<&[u32]> = k.iter().map(Vector::as_slice).collect();
                prop_assert_eq!(vectors_rank(m.field(), &cols), k.len());
            }
        }

        // incremental column-by-column basis is a second elimination order
        #[test]
        fn dependence_matches_incremental_basis((q, r, c, data) in arb_matrix(), mask in any::<u8>()) {
            let m = build(q, r, c, &data);
            let subset: Vec<usize> = (0..c).filter(|i| mask & (1 << i) != 0).collect();
            prop_assume!(!subset.is_empty());
            let cols: Vec<Vec<u32>> = subset.iter().map(|&j| m.column(j)).collect();
            let refs: Vec<&[u32]> = cols.iter().map(Vec::as_slice).collect();
            let independent = vectors_rank(m.field(), &refs) == subset.len();
            prop_assert_eq!(m.columns_dependent(&subset).unwrap(), !independent);
        }
    }
}

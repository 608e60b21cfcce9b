//! Dense matrices over a [`CycloWeilField`] and subspace calculus on
//! column-basis matrices.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::field::{CwScalar, CycloWeilField, Elem};
use crate::kpoly::KPoly;

/// Bit size of an element, used to pick cheap pivots.
fn elem_size(a: &Elem) -> u64 {
    a.iter()
        .filter(|c| !num_traits::Zero::is_zero(*c))
        .map(|c| c.numer().bits() + c.denom().bits())
        .sum()
}

/// Row-major matrix with entries in a cyclotomic Weil field.
#[derive(Clone)]
pub struct Matrix {
    field: CycloWeilField,
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl PartialEq for Matrix {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field
            && self.rows == other.rows
            && self.cols == other.cols
            && self.data == other.data
    }
}

impl Eq for Matrix {}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[{}x{} over {:?}]", self.rows, self.cols, self.field)?;
        for i in 0..self.rows {
            let row: Vec<_> = (0..self.cols)
                .map(|j| self.field.format_terms(self.at(i, j)))
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl Matrix {
    pub(crate) fn from_elems(
        field: &CycloWeilField,
        rows: usize,
        cols: usize,
        data: Vec<Elem>,
    ) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        Matrix {
            field: field.clone(),
            rows,
            cols,
            data,
        }
    }

    pub fn zeros(field: &CycloWeilField, rows: usize, cols: usize) -> Self {
        Self::from_elems(field, rows, cols, vec![field.zero_elem(); rows * cols])
    }

    pub fn identity(field: &CycloWeilField, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = field.one_elem();
        }
        m
    }

    /// Builds a matrix from row-major scalars, all from `field`.
    pub fn from_scalars(
        field: &CycloWeilField,
        rows: usize,
        cols: usize,
        entries: Vec<CwScalar>,
    ) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                what: "matrix entries",
                expected: rows * cols,
                found: entries.len(),
            });
        }
        let mut data = Vec::with_capacity(entries.len());
        for e in entries {
            if e.field() != field {
                return Err(Error::MixedFields(
                    alloc::string::ToString::to_string(field),
                    alloc::string::ToString::to_string(e.field()),
                ));
            }
            data.push(e.into_elem());
        }
        Ok(Self::from_elems(field, rows, cols, data))
    }

    /// Builds a matrix of small integers, handy for fixtures.
    pub fn from_ints(field: &CycloWeilField, rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let data = rows
            .iter()
            .flat_map(|row| {
                assert_eq!(row.len(), c, "ragged integer matrix");
                row.iter().map(|&v| field.int_elem(v))
            })
            .collect();
        Self::from_elems(field, r, c, data)
    }

    pub fn diagonal(field: &CycloWeilField, diag: &[CwScalar]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(field, n, n);
        for (i, d) in diag.iter().enumerate() {
            m.data[i * n + i] = d.elem().clone();
        }
        m
    }

    pub(crate) fn diagonal_elems(field: &CycloWeilField, diag: Vec<Elem>) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(field, n, n);
        for (i, d) in diag.into_iter().enumerate() {
            m.data[i * n + i] = d;
        }
        m
    }

    pub fn field(&self) -> &CycloWeilField {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub(crate) fn at(&self, i: usize, j: usize) -> &Elem {
        &self.data[i * self.cols + j]
    }

    pub(crate) fn at_mut(&mut self, i: usize, j: usize) -> &mut Elem {
        &mut self.data[i * self.cols + j]
    }

    pub(crate) fn set(&mut self, i: usize, j: usize, v: Elem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn get(&self, i: usize, j: usize) -> CwScalar {
        self.field.wrap(self.at(i, j).clone())
    }

    pub fn entry_strings(&self) -> Vec<Vec<alloc::string::String>> {
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| self.field.format_terms(self.at(i, j)))
                    .collect()
            })
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(CycloWeilField::is_zero_elem)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == Self::identity(&self.field, self.rows)
    }

    pub fn transpose(&self) -> Matrix {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.at(i, j).clone());
            }
        }
        Self::from_elems(&self.field, self.cols, self.rows, data)
    }

    fn zip_with(&self, other: &Matrix, f: impl Fn(&Elem, &Elem) -> Elem) -> Matrix {
        assert!(
            self.rows == other.rows && self.cols == other.cols,
            "shape mismatch"
        );
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| f(a, b))
            .collect();
        Self::from_elems(&self.field, self.rows, self.cols, data)
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        self.zip_with(other, |a, b| self.field.add_elem(a, b))
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        self.zip_with(other, |a, b| self.field.sub_elem(a, b))
    }

    pub fn neg(&self) -> Matrix {
        let data = self.data.iter().map(|a| self.field.neg_elem(a)).collect();
        Self::from_elems(&self.field, self.rows, self.cols, data)
    }

    pub fn scale(&self, c: &CwScalar) -> Matrix {
        self.scale_elem(c.elem())
    }

    pub(crate) fn scale_elem(&self, c: &Elem) -> Matrix {
        let data = self
            .data
            .iter()
            .map(|a| self.field.mul_elem(a, c))
            .collect();
        Self::from_elems(&self.field, self.rows, self.cols, data)
    }

    pub(crate) fn scale_rational(&self, r: &BigRational) -> Matrix {
        let data = self
            .data
            .iter()
            .map(|a| self.field.scale_elem(a, r))
            .collect();
        Self::from_elems(&self.field, self.rows, self.cols, data)
    }

    /// Matrix product; panics on incompatible shapes.
    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "shape mismatch in product");
        let f = &self.field;
        let mut out = Self::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if CycloWeilField::is_zero_elem(a) {
                    continue;
                }
                let a_is_one = f.is_one_elem(a);
                for j in 0..other.cols {
                    let b = other.at(k, j);
                    if CycloWeilField::is_zero_elem(b) {
                        continue;
                    }
                    let prod = if a_is_one {
                        b.clone()
                    } else {
                        f.mul_elem(a, b)
                    };
                    let slot = out.at_mut(i, j);
                    *slot = f.add_elem(slot, &prod);
                }
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Matrix {
        assert!(self.is_square());
        let mut acc = Self::identity(&self.field, self.rows);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn trace(&self) -> CwScalar {
        self.field.wrap(self.trace_elem())
    }

    pub(crate) fn trace_elem(&self) -> Elem {
        let mut acc = self.field.zero_elem();
        for i in 0..self.rows.min(self.cols) {
            acc = self.field.add_elem(&acc, self.at(i, i));
        }
        acc
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Matrix) -> Matrix {
        let f = &self.field;
        let (r, c) = (self.rows * other.rows, self.cols * other.cols);
        let mut out = Self::zeros(f, r, c);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.at(i, j);
                if CycloWeilField::is_zero_elem(a) {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out.set(
                            i * other.rows + k,
                            j * other.cols + l,
                            f.mul_elem(a, other.at(k, l)),
                        );
                    }
                }
            }
        }
        out
    }

    pub fn block_diag(&self, other: &Matrix) -> Matrix {
        let mut out = Self::zeros(&self.field, self.rows + other.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.at(i, j).clone());
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                out.set(self.rows + i, self.cols + j, other.at(i, j).clone());
            }
        }
        out
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows, "hstack row mismatch");
        let mut data = Vec::with_capacity(self.rows * (self.cols + other.cols));
        for i in 0..self.rows {
            for j in 0..self.cols {
                data.push(self.at(i, j).clone());
            }
            for j in 0..other.cols {
                data.push(other.at(i, j).clone());
            }
        }
        Self::from_elems(&self.field, self.rows, self.cols + other.cols, data)
    }

    /// Vertical concatenation.
    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols, "vstack column mismatch");
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Self::from_elems(&self.field, self.rows + other.rows, self.cols, data)
    }

    pub fn column(&self, j: usize) -> Matrix {
        self.select_columns(&[j])
    }

    pub fn select_columns(&self, idx: &[usize]) -> Matrix {
        let mut data = Vec::with_capacity(self.rows * idx.len());
        for i in 0..self.rows {
            for &j in idx {
                data.push(self.at(i, j).clone());
            }
        }
        Self::from_elems(&self.field, self.rows, idx.len(), data)
    }

    pub fn select_rows(&self, idx: &[usize]) -> Matrix {
        let mut data = Vec::with_capacity(self.cols * idx.len());
        for &i in idx {
            for j in 0..self.cols {
                data.push(self.at(i, j).clone());
            }
        }
        Self::from_elems(&self.field, idx.len(), self.cols, data)
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let f = &self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            // the cheapest pivot keeps inversions and coefficient growth down
            let Some(p) = (row..m.rows)
                .filter(|&r| !CycloWeilField::is_zero_elem(m.at(r, col)))
                .min_by_key(|&r| elem_size(m.at(r, col)))
            else {
                continue;
            };
            if p != row {
                for j in 0..m.cols {
                    m.data.swap(p * m.cols + j, row * m.cols + j);
                }
            }
            let inv = f.inv_elem(m.at(row, col)).expect("pivot is nonzero");
            for j in col..m.cols {
                let v = f.mul_elem(m.at(row, j), &inv);
                m.set(row, j, v);
            }
            for r in 0..m.rows {
                if r == row || CycloWeilField::is_zero_elem(m.at(r, col)) {
                    continue;
                }
                let factor = m.at(r, col).clone();
                for j in col..m.cols {
                    if CycloWeilField::is_zero_elem(m.at(row, j)) {
                        continue;
                    }
                    let v = f.sub_elem(m.at(r, j), &f.mul_elem(&factor, m.at(row, j)));
                    m.set(r, j, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// `ker A^j` once the kernels stop growing: the generalized kernel.
    pub fn generalized_kernel(&self) -> Matrix {
        let mut power = self.clone();
        let mut space = power.kernel();
        loop {
            if space.cols() == 0 || space.cols() == self.cols {
                return space;
            }
            power = power.mul(self);
            let next = power.kernel();
            if next.cols() == space.cols() {
                return space;
            }
            space = next;
        }
    }

    /// Column basis of the right kernel.
    pub fn kernel(&self) -> Matrix {
        let f = &self.field;
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = Self::zeros(f, self.cols, free.len());
        for (k, &fc) in free.iter().enumerate() {
            out.set(fc, k, f.one_elem());
            for (pr, &pc) in pivots.iter().enumerate() {
                out.set(pc, k, f.neg_elem(r.at(pr, fc)));
            }
        }
        out
    }

    /// Linearly independent columns spanning the column space.
    pub fn image(&self) -> Matrix {
        let (_, pivots) = self.rref();
        self.select_columns(&pivots)
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let aug = self.hstack(&Self::identity(&self.field, n));
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let idx: Vec<usize> = (n..2 * n).collect();
        Some(r.select_columns(&idx))
    }

    pub fn det(&self) -> CwScalar {
        self.field.wrap(self.det_elem())
    }

    pub(crate) fn det_elem(&self) -> Elem {
        assert!(self.is_square());
        let f = &self.field;
        let n = self.rows;
        let mut m = self.clone();
        let mut det = f.one_elem();
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !CycloWeilField::is_zero_elem(m.at(r, col))) else {
                return f.zero_elem();
            };
            if p != col {
                for j in 0..n {
                    m.data.swap(p * n + j, col * n + j);
                }
                det = f.neg_elem(&det);
            }
            let pivot = m.at(col, col).clone();
            det = f.mul_elem(&det, &pivot);
            let inv = f.inv_elem(&pivot).expect("pivot is nonzero");
            for r in col + 1..n {
                if CycloWeilField::is_zero_elem(m.at(r, col)) {
                    continue;
                }
                let factor = f.mul_elem(m.at(r, col), &inv);
                for j in col..n {
                    let v = f.sub_elem(m.at(r, j), &f.mul_elem(&factor, m.at(col, j)));
                    m.set(r, j, v);
                }
            }
        }
        det
    }

    /// Solves `self · X = rhs`; `None` when inconsistent.
    pub fn solve(&self, rhs: &Matrix) -> Option<Matrix> {
        assert_eq!(self.rows, rhs.rows);
        let f = &self.field;
        let aug = self.hstack(rhs);
        let (r, pivots) = aug.rref();
        if pivots.iter().any(|&p| p >= self.cols) {
            return None;
        }
        let mut x = Self::zeros(f, self.cols, rhs.cols);
        for (pr, &pc) in pivots.iter().enumerate() {
            for j in 0..rhs.cols {
                x.set(pc, j, r.at(pr, self.cols + j).clone());
            }
        }
        Some(x)
    }

    /// Characteristic polynomial `det(x·I − self)`, Faddeev-LeVerrier.
    pub(crate) fn charpoly(&self) -> KPoly {
        assert!(self.is_square());
        let f = &self.field;
        let n = self.rows;
        let mut coeffs = vec![f.zero_elem(); n + 1];
        coeffs[n] = f.one_elem();
        let mut m = Self::zeros(f, n, n);
        let id = Self::identity(f, n);
        for k in 1..=n {
            m = self.mul(&m).add(&id.scale_elem(&coeffs[n + 1 - k]));
            let tr = self.mul(&m).trace_elem();
            let kr = BigRational::new(BigInt::from(-1), BigInt::from(k as i64));
            coeffs[n - k] = f.scale_elem(&tr, &kr);
        }
        KPoly::new(f, coeffs)
    }

    pub fn is_nilpotent(&self) -> bool {
        self.is_square() && self.pow(self.rows as u32).is_zero()
    }

    /// Evaluates a polynomial at this matrix.
    #[cfg(test)]
    pub(crate) fn eval_poly(&self, p: &KPoly) -> Matrix {
        let f = &self.field;
        let n = self.rows;
        let mut acc = Self::zeros(f, n, n);
        let id = Self::identity(f, n);
        for c in p.coeffs().iter().rev() {
            acc = acc.mul(self).add(&id.scale_elem(c));
        }
        acc
    }

    /// `self − λ·I`.
    pub(crate) fn shift(&self, lambda: &Elem) -> Matrix {
        let f = &self.field;
        let mut m = self.clone();
        for i in 0..self.rows {
            let v = f.sub_elem(m.at(i, i), lambda);
            m.set(i, i, v);
        }
        m
    }

    /// `Some(c)` when the matrix is `c·I`.
    pub(crate) fn scalar_value(&self) -> Option<Elem> {
        if !self.is_square() {
            return None;
        }
        let c = if self.rows == 0 {
            self.field.zero_elem()
        } else {
            self.at(0, 0).clone()
        };
        for i in 0..self.rows {
            for j in 0..self.cols {
                let v = self.at(i, j);
                let ok = if i == j {
                    *v == c
                } else {
                    CycloWeilField::is_zero_elem(v)
                };
                if !ok {
                    return None;
                }
            }
        }
        Some(c)
    }
}

/// Subspace calculus; subspaces are matrices whose columns form a basis.
pub mod subspace {
    use super::*;

    pub fn zero(field: &CycloWeilField, ambient: usize) -> Matrix {
        Matrix::zeros(field, ambient, 0)
    }

    pub fn whole(field: &CycloWeilField, ambient: usize) -> Matrix {
        Matrix::identity(field, ambient)
    }

    pub fn dim(basis: &Matrix) -> usize {
        basis.cols()
    }

    pub fn sum(a: &Matrix, b: &Matrix) -> Matrix {
        a.hstack(b).image()
    }

    pub fn intersection(a: &Matrix, b: &Matrix) -> Matrix {
        if a.cols() == 0 || b.cols() == 0 {
            return zero(a.field(), a.rows());
        }
        let k = a.hstack(&b.neg()).kernel();
        let top: Vec<usize> = (0..a.cols()).collect();
        a.mul(&k.select_rows(&top)).image()
    }

    /// True when every column of `v` lies in the span of `basis`.
    pub fn contains(basis: &Matrix, v: &Matrix) -> bool {
        if v.cols() == 0 {
            return true;
        }
        if basis.cols() == 0 {
            return v.is_zero();
        }
        basis.solve(v).is_some()
    }

    pub fn equal(a: &Matrix, b: &Matrix) -> bool {
        a.cols() == b.cols() && contains(a, b) && contains(b, a)
    }

    /// Coordinates of the columns of `v` in the (independent) basis.
    pub fn coordinates(basis: &Matrix, v: &Matrix) -> Option<Matrix> {
        if basis.cols() == 0 {
            return v.is_zero().then(|| Matrix::zeros(v.field(), 0, v.cols()));
        }
        basis.solve(v)
    }

    /// Image of a subspace under an operator.
    pub fn apply(op: &Matrix, basis: &Matrix) -> Matrix {
        if basis.cols() == 0 {
            return basis.clone();
        }
        op.mul(basis).image()
    }

    pub fn is_stable(op: &Matrix, basis: &Matrix) -> bool {
        basis.cols() == 0 || contains(basis, &op.mul(basis))
    }

    /// Matrix of `op` restricted to a stable subspace, in the given basis.
    pub fn restrict(op: &Matrix, basis: &Matrix) -> Option<Matrix> {
        coordinates(basis, &op.mul(basis))
    }

    /// Standard basis vectors completing `basis` to the whole space.
    pub fn complement(basis: &Matrix) -> Matrix {
        let n = basis.rows();
        let aug = basis.hstack(&Matrix::identity(basis.field(), n));
        let (_, pivots) = aug.rref();
        let extra: Vec<usize> = pivots
            .into_iter()
            .filter(|&p| p >= basis.cols())
            .map(|p| p - basis.cols())
            .collect();
        Matrix::identity(basis.field(), n).select_columns(&extra)
    }

    /// Columns of `sup` completing a basis of `sub ⊆ sup` to one of `sup`.
    pub fn relative_complement(sub: &Matrix, sup: &Matrix) -> Matrix {
        let aug = sub.hstack(sup);
        let (_, pivots) = aug.rref();
        let extra: Vec<usize> = pivots
            .into_iter()
            .filter(|&p| p >= sub.cols())
            .map(|p| p - sub.cols())
            .collect();
        sup.select_columns(&extra)
    }

    /// Operator induced on `V / sub`, expressed in the basis `comp` of a
    /// complement (images taken modulo `sub`).
    pub fn quotient_operator(op: &Matrix, sub: &Matrix, comp: &Matrix) -> Matrix {
        let full = sub.hstack(comp);
        let coords = full
            .solve(&op.mul(comp))
            .expect("sub and comp span the space");
        let idx: Vec<usize> = (sub.cols()..sub.cols() + comp.cols()).collect();
        coords.select_rows(&idx)
    }
}

#[cfg(test)]
mod tests {
    use super::subspace::*;
    use super::*;

    fn k() -> CycloWeilField {
        CycloWeilField::new(3, 2).unwrap()
    }

    #[test]
    fn inverse_and_det() {
        let f = k();
        let a = Matrix::from_ints(&f, &[&[2, 1], &[7, 4]]);
        assert_eq!(a.det(), f.one());
        let inv = a.inverse().unwrap();
        assert!(a.mul(&inv).is_identity());
        let s = Matrix::from_ints(&f, &[&[1, 2], &[2, 4]]);
        assert!(s.inverse().is_none());
        assert!(s.det().is_zero());
        assert_eq!(s.rank(), 1);
    }

    #[test]
    fn kernel_and_image() {
        let f = k();
        let a = Matrix::from_ints(&f, &[&[1, 2, 3], &[2, 4, 6]]);
        let ker = a.kernel();
        assert_eq!(ker.cols(), 2);
        assert!(a.mul(&ker).is_zero());
        assert_eq!(a.image().cols(), 1);
    }

    #[test]
    fn charpoly_of_companion() {
        let f = k();
        // companion of x^2 - 3x + 2
        let a = Matrix::from_ints(&f, &[&[0, -2], &[1, 3]]);
        let p = a.charpoly();
        let want: Vec<Elem> = [2, -3, 1].iter().map(|&c| f.int_elem(c)).collect();
        assert_eq!(p.coeffs(), &want[..]);
        assert!(a.eval_poly(&p).is_zero());
    }

    #[test]
    fn subspace_operations() {
        let f = k();
        let a = Matrix::from_ints(&f, &[&[1, 0], &[0, 1], &[0, 0]]);
        let b = Matrix::from_ints(&f, &[&[0, 0], &[1, 0], &[0, 1]]);
        assert_eq!(intersection(&a, &b).cols(), 1);
        assert_eq!(sum(&a, &b).cols(), 3);
        assert_eq!(complement(&a).cols(), 1);
        let op = Matrix::from_ints(&f, &[&[1, 1, 5], &[0, 2, 7], &[0, 0, 3]]);
        assert!(is_stable(&op, &a));
        let r = restrict(&op, &a).unwrap();
        assert_eq!(r, Matrix::from_ints(&f, &[&[1, 1], &[0, 2]]));
        let q = quotient_operator(&op, &a, &complement(&a));
        assert_eq!(q, Matrix::from_ints(&f, &[&[3]]));
    }
}

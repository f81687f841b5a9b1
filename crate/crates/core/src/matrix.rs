//! Dense matrices over exact scalars.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::numfield::{BaseElem, FieldElem, FqElem};

/// Exact field scalars. Elements carry their field, so constants are built from an existing element.
pub trait Scalar: Clone + PartialEq + fmt::Debug + Send + Sync {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, o: &Self) -> Self;
    fn minus(&self, o: &Self) -> Self;
    fn times(&self, o: &Self) -> Self;
    fn negate(&self) -> Self;
    fn recip(&self) -> Option<Self>;
    fn int_like(&self, n: i64) -> Self;

    fn is_one(&self) -> bool {
        *self == self.one_like()
    }
}

impl Scalar for FieldElem {
    fn zero_like(&self) -> Self {
        self.field().zero()
    }
    fn one_like(&self) -> Self {
        self.field().one()
    }
    fn is_zero(&self) -> bool {
        FieldElem::is_zero(self)
    }
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn minus(&self, o: &Self) -> Self {
        self - o
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn negate(&self) -> Self {
        -self
    }
    fn recip(&self) -> Option<Self> {
        self.inv().ok()
    }
    fn int_like(&self, n: i64) -> Self {
        self.field().int(n)
    }
}

impl Scalar for BaseElem {
    fn zero_like(&self) -> Self {
        self.field().zero()
    }
    fn one_like(&self) -> Self {
        self.field().one()
    }
    fn is_zero(&self) -> bool {
        BaseElem::is_zero(self)
    }
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn minus(&self, o: &Self) -> Self {
        self - o
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn negate(&self) -> Self {
        -self
    }
    fn recip(&self) -> Option<Self> {
        self.inv()
    }
    fn int_like(&self, n: i64) -> Self {
        self.field().int(n)
    }
}

impl Scalar for FqElem {
    fn zero_like(&self) -> Self {
        self.field().zero()
    }
    fn one_like(&self) -> Self {
        self.field().one()
    }
    fn is_zero(&self) -> bool {
        FqElem::is_zero(self)
    }
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn minus(&self, o: &Self) -> Self {
        self - o
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn negate(&self) -> Self {
        -self
    }
    fn recip(&self) -> Option<Self> {
        self.inv()
    }
    fn int_like(&self, n: i64) -> Self {
        self.field().int(n)
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: fmt::Display> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.data[i * self.cols + j].to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl<T: fmt::Display> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{}\n{self}", self.rows, self.cols)
    }
}

impl<T: Scalar> Matrix<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<T>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data length");
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize, zero: &T) -> Self {
        Matrix { rows, cols, data: vec![zero.zero_like(); rows * cols] }
    }

    pub fn identity(n: usize, one: &T) -> Self {
        Self::scalar(n, &one.one_like())
    }

    pub fn scalar(n: usize, c: &T) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { c.clone() } else { c.zero_like() })
    }

    pub fn diag(d: &[T]) -> Self {
        let n = d.len();
        Self::from_fn(n, n, |i, j| if i == j { d[i].clone() } else { d[0].zero_like() })
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

    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: T) {
        self.data[i * self.cols + j] = x;
    }

    /// Any entry, used to produce constants of the right field.
    pub fn sample(&self) -> &T {
        &self.data[0]
    }

    pub fn one_elem(&self) -> T {
        self.data[0].one_like()
    }

    pub fn zero_elem(&self) -> T {
        self.data[0].zero_like()
    }

    pub fn row(&self, i: usize) -> Vec<T> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn try_map<U: Scalar>(&self, f: impl Fn(&T) -> Result<U>) -> Result<Matrix<U>> {
        Ok(Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect::<Result<Vec<_>>>()? })
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn try_mul(&self, o: &Self) -> Result<Self> {
        if self.cols != o.rows {
            return Err(Error::DimensionMismatch(format!("{}x{} * {}x{}", self.rows, self.cols, o.rows, o.cols)));
        }
        let mut out = Vec::with_capacity(self.rows * o.cols);
        for i in 0..self.rows {
            for j in 0..o.cols {
                let mut acc: Option<T> = None;
                for k in 0..self.cols {
                    let a = self.get(i, k);
                    if a.is_zero() {
                        continue;
                    }
                    let b = o.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let p = a.times(b);
                    acc = Some(match acc {
                        None => p,
                        Some(s) => s.plus(&p),
                    });
                }
                out.push(acc.unwrap_or_else(|| self.data[0].zero_like()));
            }
        }
        Ok(Matrix { rows: self.rows, cols: o.cols, data: out })
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                (0..self.cols).fold(v[0].zero_like(), |acc, k| {
                    let a = self.get(i, k);
                    if a.is_zero() || v[k].is_zero() {
                        acc
                    } else {
                        acc.plus(&a.times(&v[k]))
                    }
                })
            })
            .collect()
    }

    pub fn scale(&self, c: &T) -> Self {
        self.map(|x| x.times(c))
    }

    pub fn trace(&self) -> T {
        (1..self.rows).fold(self.get(0, 0).clone(), |acc, i| acc.plus(self.get(i, i)))
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut r = Self::identity(self.rows, self.sample());
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                r = &r * &b;
            }
            e >>= 1;
            if e > 0 {
                b = &b * &b;
            }
        }
        r
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..self.cols).all(|j| if i == j { self.get(i, j).is_one() } else { self.get(i, j).is_zero() }))
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self.get(i, j).is_zero()))
    }

    /// The scalar c if the matrix is c·I.
    pub fn as_scalar(&self) -> Option<T> {
        (self.is_square() && self.is_diagonal() && (1..self.rows).all(|i| self.get(i, i) == self.get(0, 0))).then(|| self.get(0, 0).clone())
    }

    pub fn diagonal(&self) -> Vec<T> {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i).clone()).collect()
    }

    pub fn block(&self, r0: usize, c0: usize, h: usize, w: usize) -> Self {
        Self::from_fn(h, w, |i, j| self.get(r0 + i, c0 + j).clone())
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &Self) {
        for i in 0..b.rows {
            for j in 0..b.cols {
                self.set(r0 + i, c0 + j, b.get(i, j).clone());
            }
        }
    }

    /// Row echelon form by Gaussian elimination; returns (reduced matrix, pivot columns, determinant sign factor).
    fn eliminate(&self) -> (Self, Vec<usize>, T) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut det = self.data[0].one_like();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..m.cols {
                    m.data.swap(p * m.cols + j, r * m.cols + j);
                }
                det = det.negate();
            }
            let pv = m.get(r, c).clone();
            det = det.times(&pv);
            let inv = pv.recip().unwrap();
            for j in c..m.cols {
                let x = m.get(r, j).times(&inv);
                m.set(r, j, x);
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let f = m.get(i, c).clone();
                if f.is_zero() {
                    continue;
                }
                for j in c..m.cols {
                    let rj = m.get(r, j);
                    if rj.is_zero() {
                        continue;
                    }
                    let x = m.get(i, j).minus(&f.times(rj));
                    m.set(i, j, x);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots, det)
    }

    pub fn rank(&self) -> usize {
        self.eliminate().1.len()
    }

    pub fn det(&self) -> T {
        assert!(self.is_square());
        let (_, pivots, det) = self.eliminate();
        if pivots.len() < self.rows {
            self.zero_elem()
        } else {
            det
        }
    }

    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::NotInvertible);
        }
        let n = self.rows;
        let one = self.one_elem();
        let mut aug = Self::zeros(n, 2 * n, &one);
        aug.set_block(0, 0, self);
        aug.set_block(0, n, &Self::identity(n, &one));
        let (m, pivots, _) = aug.eliminate();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return Err(Error::NotInvertible);
        }
        Ok(m.block(0, n, n, n))
    }

    /// Basis of {v : self·v = 0}.
    pub fn nullspace(&self) -> Vec<Vec<T>> {
        let (m, pivots, _) = self.eliminate();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let zero = self.zero_elem();
        free.iter()
            .map(|&f| {
                let mut v = vec![zero.clone(); self.cols];
                v[f] = zero.one_like();
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = m.get(r, f).negate();
                }
                v
            })
            .collect()
    }

    /// Scale so the first nonzero entry (row-major) is 1; canonical projective representative.
    pub fn proj_normalize(&self) -> Self {
        match self.data.iter().find(|x| !x.is_zero()) {
            Some(lead) => self.scale(&lead.recip().unwrap()),
            None => self.clone(),
        }
    }

    pub fn proj_eq(&self, o: &Self) -> bool {
        self.rows == o.rows && self.cols == o.cols && self.proj_normalize() == o.proj_normalize()
    }

    /// Commutator ABA⁻¹B⁻¹.
    pub fn commutator(&self, o: &Self) -> Result<Self> {
        Ok(&(&(self * o) * &self.inverse()?) * &o.inverse()?)
    }
}

impl<T: Scalar> Mul for &Matrix<T> {
    type Output = Matrix<T>;
    fn mul(self, o: &Matrix<T>) -> Matrix<T> {
        self.try_mul(o).expect("matrix dimensions")
    }
}

impl<T: Scalar> Add for &Matrix<T> {
    type Output = Matrix<T>;
    fn add(self, o: &Matrix<T>) -> Matrix<T> {
        assert!(self.rows == o.rows && self.cols == o.cols);
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&o.data).map(|(a, b)| a.plus(b)).collect() }
    }
}

impl<T: Scalar> Sub for &Matrix<T> {
    type Output = Matrix<T>;
    fn sub(self, o: &Matrix<T>) -> Matrix<T> {
        assert!(self.rows == o.rows && self.cols == o.cols);
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&o.data).map(|(a, b)| a.minus(b)).collect() }
    }
}

impl<T: Scalar> Neg for &Matrix<T> {
    type Output = Matrix<T>;
    fn neg(self) -> Matrix<T> {
        self.map(|x| x.negate())
    }
}

pub type FMatrix = Matrix<FieldElem>;
pub type BMatrix = Matrix<BaseElem>;

impl Matrix<FieldElem> {
    pub fn galois(&self, g: &crate::numfield::GaloisChar) -> Self {
        self.map(|x| x.galois(g))
    }

    /// Integer matrix lifted into a tower.
    pub fn from_ints(e: &crate::numfield::ExtField, rows: &[&[i64]]) -> Self {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| e.int(x)).collect()).collect())
    }

    /// Entries as base elements, if all lie in the base.
    pub fn to_base(&self) -> Option<BMatrix> {
        let data = self.data.iter().map(|x| x.as_base()).collect::<Option<Vec<_>>>()?;
        Some(Matrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn lift_to(&self, e: &crate::numfield::ExtField) -> Result<Self> {
        self.try_map(|x| e.lift(x))
    }
}

impl Matrix<BaseElem> {
    pub fn to_tower(&self, e: &crate::numfield::ExtField) -> FMatrix {
        self.map(|x| e.from_base(x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numfield::ExtField;

    #[test]
    fn inverse_det_nullspace() {
        let e = ExtField::rationals();
        let m = FMatrix::from_ints(&e, &[&[2, 1], &[1, 1]]);
        assert_eq!(m.det(), e.int(1));
        assert!((&m * &m.inverse().unwrap()).is_identity());
        let s = FMatrix::from_ints(&e, &[&[1, 2], &[2, 4]]);
        assert_eq!(s.det(), e.zero());
        assert_eq!(s.inverse().unwrap_err(), Error::NotInvertible);
        let ns = s.nullspace();
        assert_eq!(ns.len(), 1);
        assert!(s.mul_vec(&ns[0]).iter().all(|x| x.is_zero()));
        assert_eq!(s.rank(), 1);
    }

    #[test]
    fn projective_equality() {
        let e = ExtField::rationals();
        let a = FMatrix::from_ints(&e, &[&[0, 1], &[-1, 0]]);
        assert!(a.proj_eq(&a.scale(&e.int(-3))));
        assert!(!a.proj_eq(&FMatrix::from_ints(&e, &[&[0, 1], &[1, 0]])));
    }
}

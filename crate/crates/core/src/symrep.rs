//! The irreducible representation τ_n of SL₂ on binary forms of degree n−1,
//! its invariant form J_n, and the trace polynomial Φ_n.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{Matrix, Scalar};
use crate::numfield::rat::factorial;

fn poly_mul<T: Scalar>(p: &[T], q: &[T]) -> Vec<T> {
    let z = p[0].zero_like();
    let mut out = vec![z; p.len() + q.len() - 1];
    for (i, x) in p.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in q.iter().enumerate() {
            out[i + j] = out[i + j].plus(&x.times(y));
        }
    }
    out
}

fn poly_pow<T: Scalar>(p: &[T], e: usize) -> Vec<T> {
    let mut r = vec![p[0].one_like()];
    for _ in 0..e {
        r = poly_mul(&r, p);
    }
    r
}

/// τ_n(M) in the basis X^{n-1}, X^{n-2}Y, …, Y^{n-1}: column j holds (aX+cY)^{n-1-j}(bX+dY)^j.
pub fn tau<T: Scalar>(n: usize, m: &Matrix<T>) -> Result<Matrix<T>> {
    if m.rows() != 2 || m.cols() != 2 {
        return Err(Error::DimensionMismatch(format!("tau expects 2x2, got {}x{}", m.rows(), m.cols())));
    }
    assert!(n >= 1);
    if m.det().is_zero() {
        return Err(Error::NotInvertible);
    }
    let (a, b, c, d) = (m.get(0, 0), m.get(0, 1), m.get(1, 0), m.get(1, 1));
    let u = [a.clone(), c.clone()];
    let v = [b.clone(), d.clone()];
    let mut out = Matrix::zeros(n, n, a);
    for j in 0..n {
        let col = poly_mul(&poly_pow(&u, n - 1 - j), &poly_pow(&v, j));
        for (i, x) in col.into_iter().enumerate() {
            out.set(i, j, x);
        }
    }
    Ok(out)
}

/// Antidiagonal form with entry (−1)^{i−1}(n−i)!(i−1)! in row i (1-based).
pub fn j_form<T: Scalar>(n: usize, one: &T) -> Matrix<T> {
    let mut out = Matrix::zeros(n, n, one);
    for i in 1..=n {
        let v = factorial((n - i) as u64) * factorial((i - 1) as u64);
        let v = v.to_i64().expect("factorial overflow");
        let s = if i % 2 == 1 { v } else { -v };
        out.set(i - 1, n - i, one.int_like(s));
    }
    out
}

pub fn check_invariance<T: Scalar>(n: usize, m: &Matrix<T>) -> Result<bool> {
    let t = tau(n, m)?;
    let j = j_form(n, m.sample());
    Ok(&(&t.transpose() * &j) * &t == j)
}

/// Φ_n with Tr τ_n(M) = Φ_n(Tr M) on SL₂; coefficients ascending in degree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TracePoly {
    pub n: usize,
    pub coeffs: Vec<BigInt>,
}

pub fn trace_poly(n: usize) -> TracePoly {
    assert!(n >= 1);
    let mut prev: Vec<BigInt> = vec![BigInt::from(1)];
    if n == 1 {
        return TracePoly { n, coeffs: prev };
    }
    let mut cur: Vec<BigInt> = vec![BigInt::from(0), BigInt::from(1)];
    for _ in 2..n {
        let mut next = vec![BigInt::from(0); cur.len() + 1];
        for (i, c) in cur.iter().enumerate() {
            next[i + 1] += c;
        }
        for (i, c) in prev.iter().enumerate() {
            next[i] -= c;
        }
        prev = cur;
        cur = next;
    }
    TracePoly { n, coeffs: cur }
}

impl TracePoly {
    pub fn eval<T: Scalar>(&self, t: &T) -> T {
        let mut acc = t.zero_like();
        for c in self.coeffs.iter().rev() {
            acc = acc.times(t).plus(&t.int_like(c.to_i64().expect("coefficient overflow")));
        }
        acc
    }
}

/// Φ_n(t) by the three-term recurrence; no coefficient growth issues.
pub fn phi_eval<T: Scalar>(n: usize, t: &T) -> T {
    let mut prev = t.one_like();
    if n == 1 {
        return prev;
    }
    let mut cur = t.clone();
    for _ in 2..n {
        let next = t.times(&cur).minus(&prev);
        prev = cur;
        cur = next;
    }
    cur
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::FMatrix;
    use crate::numfield::ExtField;

    #[test]
    fn tau_unipotent() {
        let e = ExtField::rationals();
        let u = FMatrix::from_ints(&e, &[&[1, 1], &[0, 1]]);
        assert_eq!(tau(3, &u).unwrap(), FMatrix::from_ints(&e, &[&[1, 1, 1], &[0, 1, 2], &[0, 0, 1]]));
        assert!(tau(4, &FMatrix::identity(2, &e.one())).unwrap().is_identity());
    }

    #[test]
    fn tau_diagonal() {
        let e = ExtField::rationals();
        let l = e.int(3);
        let li = l.inv().unwrap();
        let d = FMatrix::diag(&[l.clone(), li.clone()]);
        let t = tau(3, &d).unwrap();
        assert_eq!(t, FMatrix::diag(&[&l * &l, e.one(), &li * &li]));
    }

    #[test]
    fn j_small() {
        let e = ExtField::rationals();
        let j3 = j_form(3, &e.one());
        assert_eq!(j3, FMatrix::from_ints(&e, &[&[0, 0, 2], &[0, -1, 0], &[2, 0, 0]]));
        let j4 = j_form(4, &e.one());
        let anti: Vec<_> = (0..4).map(|i| j4.get(i, 3 - i).clone()).collect();
        assert_eq!(anti, [6, -2, 2, -6].map(|x| e.int(x)));
        for n in 3..=9 {
            let j = j_form(n, &e.one());
            let sign = if n % 2 == 1 { e.one() } else { e.int(-1) };
            assert_eq!(j.transpose(), j.scale(&sign));
        }
    }

    #[test]
    fn phi_small() {
        assert_eq!(trace_poly(2).coeffs, vec![BigInt::from(0), BigInt::from(1)]);
        assert_eq!(trace_poly(3).coeffs, vec![BigInt::from(-1), BigInt::from(0), BigInt::from(1)]);
        let e = ExtField::rationals();
        for n in 1..10 {
            let t = e.int(5);
            assert_eq!(trace_poly(n).eval(&t), phi_eval(n, &t));
        }
    }
}

//! Congruence diagonalization of symmetric and Hermitian matrices, with entries in 1×1 or 2×2 blocks.

use crate::error::{Error, Result};
use crate::matrix::FMatrix;
use crate::numfield::GaloisChar;

/// Involution applied to each block: optionally the adjugate (quaternion conjugation), then a Galois character.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Involution {
    pub block: usize,
    pub adjugate: bool,
    pub galois: Option<GaloisChar>,
}

impl Involution {
    pub fn identity() -> Self {
        Involution { block: 1, adjugate: false, galois: None }
    }

    pub fn galois(g: GaloisChar) -> Self {
        Involution { block: 1, adjugate: false, galois: Some(g) }
    }

    pub fn quaternion(g: Option<GaloisChar>) -> Self {
        Involution { block: 2, adjugate: true, galois: g }
    }

    pub fn on_block(&self, b: &FMatrix) -> FMatrix {
        let m = if self.adjugate {
            let (p, q, r, s) = (b.get(0, 0), b.get(0, 1), b.get(1, 0), b.get(1, 1));
            FMatrix::from_rows(vec![vec![s.clone(), -q], vec![-r, p.clone()]])
        } else {
            b.clone()
        };
        match &self.galois {
            Some(g) => m.galois(g),
            None => m,
        }
    }

    /// Blockwise conjugate transpose: block (i,j) of the result is the conjugate of block (j,i).
    pub fn star(&self, m: &FMatrix) -> FMatrix {
        let s = self.block;
        let (r, c) = (m.rows() / s, m.cols() / s);
        let mut out = FMatrix::zeros(m.cols(), m.rows(), m.sample());
        for i in 0..r {
            for j in 0..c {
                out.set_block(s * j, s * i, &self.on_block(&m.block(s * i, s * j, s, s)));
            }
        }
        out
    }

    pub fn is_hermitian(&self, m: &FMatrix) -> bool {
        m.is_square() && m.rows() % self.block == 0 && self.star(m) == *m
    }

    /// C^* H C
    pub fn congruent(&self, h: &FMatrix, c: &FMatrix) -> FMatrix {
        &(&self.star(c) * h) * c
    }
}

#[derive(Clone, Debug)]
pub struct Diagonalization {
    /// Central scalar of each diagonal block.
    pub diag: Vec<crate::numfield::FieldElem>,
    /// C with C^* H C = Diag(diag).
    pub congruence: FMatrix,
}

fn gram(inv: &Involution, h: &FMatrix, c: &FMatrix, i: usize, j: usize) -> FMatrix {
    let s = inv.block;
    let n = c.rows();
    let ci = c.block(0, s * i, n, s);
    let cj = c.block(0, s * j, n, s);
    &(&inv.star(&ci) * h) * &cj
}

fn swap_block_cols(c: &mut FMatrix, s: usize, i: usize, j: usize) {
    let n = c.rows();
    let bi = c.block(0, s * i, n, s);
    let bj = c.block(0, s * j, n, s);
    c.set_block(0, s * i, &bj);
    c.set_block(0, s * j, &bi);
}

/// Gram–Schmidt with anisotropic pivoting. `multipliers` are the block scalars t tried in e_k + e_j·t
/// when no diagonal pivot is left.
pub fn diagonalize(h: &FMatrix, inv: &Involution, multipliers: &[FMatrix]) -> Result<Diagonalization> {
    let s = inv.block;
    if !inv.is_hermitian(h) {
        return Err(Error::DimensionMismatch("matrix is not symmetric for the involution".into()));
    }
    if h.det().is_zero() {
        return Err(Error::Degenerate);
    }
    let n = h.rows() / s;
    let one = h.one_elem();
    let mut c = FMatrix::identity(h.rows(), &one);
    let mut diag = Vec::with_capacity(n);
    for k in 0..n {
        if gram(inv, h, &c, k, k).is_zero() {
            if let Some(j) = (k + 1..n).find(|&j| !gram(inv, h, &c, j, j).is_zero()) {
                swap_block_cols(&mut c, s, k, j);
            } else {
                let mut found = false;
                'search: for j in k + 1..n {
                    if gram(inv, h, &c, k, j).is_zero() {
                        continue;
                    }
                    for t in multipliers {
                        let rows = c.rows();
                        let v = &c.block(0, s * k, rows, s) + &(&c.block(0, s * j, rows, s) * t);
                        let mut trial = c.clone();
                        trial.set_block(0, s * k, &v);
                        if !gram(inv, h, &trial, k, k).is_zero() {
                            c = trial;
                            found = true;
                            break 'search;
                        }
                    }
                }
                if !found {
                    return Err(Error::IsotropicPivotFailure);
                }
            }
        }
        let alpha = gram(inv, h, &c, k, k);
        let a = alpha.as_scalar().ok_or_else(|| Error::Unsupported("non-central diagonal pivot".into()))?;
        let ainv = a.inv()?;
        let rows = c.rows();
        let ck = c.block(0, s * k, rows, s);
        for j in k + 1..n {
            let f = gram(inv, h, &c, k, j).scale(&ainv);
            if f.is_zero() {
                continue;
            }
            let cj = &c.block(0, s * j, rows, s) - &(&ck * &f);
            c.set_block(0, s * j, &cj);
        }
        diag.push(a);
    }
    let d = inv.congruent(h, &c);
    let expect = crate::cocycle::block_diag(&diag.iter().map(|x| FMatrix::scalar(s, x)).collect::<Vec<_>>());
    debug_assert!(d == expect, "congruence witness failed");
    if d != expect {
        return Err(Error::IsotropicPivotFailure);
    }
    Ok(Diagonalization { diag, congruence: c })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numfield::ExtField;

    #[test]
    fn hyperbolic_plane() {
        let e = ExtField::rationals();
        let h = FMatrix::from_ints(&e, &[&[0, 1], &[1, 0]]);
        let d = diagonalize(&h, &Involution::identity(), &[FMatrix::identity(1, &e.one())]).unwrap();
        assert_eq!(d.diag, vec![e.int(2), e.rat(crate::numfield::rat::qf(-1, 2))]);
        let c = &d.congruence;
        assert!((&(&c.transpose() * &h) * c).is_diagonal());
    }

    #[test]
    fn degenerate_rejected() {
        let e = ExtField::rationals();
        let h = FMatrix::from_ints(&e, &[&[1, 1], &[1, 1]]);
        assert_eq!(diagonalize(&h, &Involution::identity(), &[]).unwrap_err(), Error::Degenerate);
    }
}

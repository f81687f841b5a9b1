//! The G₂ cross products on 7-space, G₂-membership, and split octonions over F_q.

use crate::error::{Error, Result};
use crate::forms::jnab;
use crate::matrix::{FMatrix, Matrix, Scalar};
use crate::numfield::{BaseElem, Fq, FqElem};
use crate::symrep::j_form;

fn w<T: Scalar>(x: &[T], y: &[T], i: usize, j: usize) -> T {
    x[i - 1].times(&y[j - 1]).minus(&x[j - 1].times(&y[i - 1]))
}

fn lin<T: Scalar>(terms: &[(T, T)]) -> T {
    terms.iter().fold(terms[0].1.zero_like(), |acc, (c, v)| acc.plus(&c.times(v)))
}

/// The (a,b)-twisted cross product, preserved by G₂^{a,b}.
pub fn cross<T: Scalar>(a: &T, b: &T, x: &[T], y: &[T]) -> Vec<T> {
    assert!(x.len() == 7 && y.len() == 7);
    let k = |n: i64| a.int_like(n);
    let ab = a.times(b);
    vec![
        lin(&[(k(6).times(a), w(x, y, 7, 4)), (k(-4), w(x, y, 2, 3)), (k(-4).times(a), w(x, y, 6, 5))]),
        lin(&[(k(24).times(b), w(x, y, 3, 1)), (k(24).times(&ab), w(x, y, 7, 5)), (k(-6).times(a), w(x, y, 6, 4))]),
        lin(&[(k(60), w(x, y, 2, 1)), (k(60).times(a), w(x, y, 7, 6)), (k(-6).times(a), w(x, y, 5, 4))]),
        lin(&[(k(240).times(b), w(x, y, 1, 7)), (k(40), w(x, y, 2, 6)), (k(-16).times(b), w(x, y, 3, 5))]),
        lin(&[(k(60), w(x, y, 1, 6)), (k(-60), w(x, y, 7, 2)), (k(-6), w(x, y, 3, 4))]),
        lin(&[(k(24).times(b), w(x, y, 3, 7)), (k(24).times(b), w(x, y, 1, 5)), (k(-6), w(x, y, 2, 4))]),
        lin(&[(k(6), w(x, y, 1, 4)), (k(-4), w(x, y, 2, 5)), (k(-4), w(x, y, 6, 3))]),
    ]
}

/// The cross product in the τ₇ basis, preserved by τ₇(SL₂).
pub fn untwisted_cross<T: Scalar>(x: &[T], y: &[T]) -> Vec<T> {
    assert!(x.len() == 7 && y.len() == 7);
    let k = |n: i64| x[0].int_like(n);
    vec![
        lin(&[(k(6), w(x, y, 1, 4)), (k(-4), w(x, y, 2, 3))]),
        lin(&[(k(24), w(x, y, 1, 5)), (k(-6), w(x, y, 2, 4))]),
        lin(&[(k(60), w(x, y, 1, 6)), (k(-6), w(x, y, 3, 4))]),
        lin(&[(k(120), w(x, y, 1, 7)), (k(20), w(x, y, 2, 6)), (k(-8), w(x, y, 3, 5))]),
        lin(&[(k(60), w(x, y, 2, 7)), (k(-6), w(x, y, 4, 5))]),
        lin(&[(k(24), w(x, y, 3, 7)), (k(-6), w(x, y, 4, 6))]),
        lin(&[(k(6), w(x, y, 4, 7)), (k(-4), w(x, y, 5, 6))]),
    ]
}

/// M(e_i × e_j) = Me_i × Me_j on all 21 basis pairs.
pub fn preserves_cross<T: Scalar>(m: &Matrix<T>, prod: impl Fn(&[T], &[T]) -> Vec<T>) -> bool {
    let one = m.one_elem();
    let e = |i: usize| (0..7).map(|j| if i == j { one.clone() } else { one.zero_like() }).collect::<Vec<_>>();
    for i in 0..7 {
        for j in i + 1..7 {
            let lhs = m.mul_vec(&prod(&e(i), &e(j)));
            let rhs = prod(&m.col(i), &m.col(j));
            if lhs != rhs {
                return false;
            }
        }
    }
    true
}

/// Membership in G₂^{a,b}: det 1, preserves J₇^{a,b}, and preserves the twisted cross product.
pub fn in_g2(a: &BaseElem, b: &BaseElem, m: &FMatrix) -> Result<bool> {
    if m.rows() != 7 || !m.is_square() {
        return Err(Error::DimensionMismatch(format!("G2 membership needs 7x7, got {}x{}", m.rows(), m.cols())));
    }
    let e = m.sample().field().clone();
    let j = jnab(a.field(), 7, a, b)?.matrix().to_tower(&e);
    if !m.det().is_one() || &(&m.transpose() * &j) * m != j {
        return Ok(false);
    }
    let (ae, be) = (e.from_base(a), e.from_base(b));
    Ok(preserves_cross(m, |x, y| cross(&ae, &be, x, y)))
}

/// Membership in the G₂ of the τ₇ basis: preserves J₇ and the untwisted cross product.
pub fn in_g2_untwisted<T: Scalar>(m: &Matrix<T>) -> bool {
    let j = j_form(7, &m.one_elem());
    m.rows() == 7 && m.det().is_one() && &(&m.transpose() * &j) * m == j && preserves_cross(m, untwisted_cross)
}

type M2 = Matrix<FqElem>;

/// Split octonions over F_q as pairs of 2×2 matrices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Octonion {
    pub a: M2,
    pub b: M2,
}

fn bar(m: &M2) -> M2 {
    let (p, q, r, s) = (m.get(0, 0), m.get(0, 1), m.get(1, 0), m.get(1, 1));
    Matrix::from_rows(vec![vec![*s, -q], vec![-r, *p]])
}

impl Octonion {
    /// (A₁A₂ − B̄₂B₁, B₂A₁ + B₁Ā₂)
    pub fn mul(&self, o: &Octonion) -> Octonion {
        Octonion { a: &(&self.a * &o.a) - &(&bar(&o.b) * &self.b), b: &(&o.b * &self.a) + &(&self.b * &bar(&o.a)) }
    }

    pub fn norm(&self) -> FqElem {
        self.a.det() + self.b.det()
    }

    /// Coordinates (A₁₁, A₁₂, A₂₁, A₂₂, B₁₁, B₁₂, B₂₁, B₂₂).
    pub fn coords(&self) -> Vec<FqElem> {
        self.a.data().iter().chain(self.b.data()).cloned().collect()
    }

    pub fn from_coords(fq: &Fq, c: &[FqElem]) -> Octonion {
        assert_eq!(c.len(), 8);
        let _ = fq;
        Octonion { a: Matrix::new(2, 2, c[..4].to_vec()), b: Matrix::new(2, 2, c[4..].to_vec()) }
    }
}

pub struct OctonionFq {
    fq: Fq,
}

impl OctonionFq {
    pub fn new(q: u64) -> Result<Self> {
        if q % 2 == 0 {
            return Err(Error::EvenCharacteristic);
        }
        Ok(OctonionFq { fq: Fq::of_order(q)? })
    }

    pub fn field(&self) -> Fq {
        self.fq
    }

    pub fn basis(&self) -> Vec<Octonion> {
        (0..8)
            .map(|i| {
                let c: Vec<FqElem> = (0..8).map(|j| if i == j { self.fq.one() } else { self.fq.zero() }).collect();
                Octonion::from_coords(&self.fq, &c)
            })
            .collect()
    }

    pub fn one(&self) -> Octonion {
        let (o, z) = (self.fq.one(), self.fq.zero());
        Octonion::from_coords(&self.fq, &[o, z, z, o, z, z, z, z])
    }
}

/// φ_a: (A,B) ↦ (A, XB) with X = (a 1; −1 0).
#[derive(Clone, Debug)]
pub struct OctAut {
    pub fq: Fq,
    pub a: FqElem,
    pub x: M2,
}

pub fn oct_aut_phi(alg: &OctonionFq, a: &FqElem) -> OctAut {
    let fq = alg.fq;
    let x = Matrix::from_rows(vec![vec![*a, fq.one()], vec![-&fq.one(), fq.zero()]]);
    OctAut { fq, a: *a, x }
}

impl OctAut {
    pub fn apply(&self, u: &Octonion) -> Octonion {
        Octonion { a: u.a.clone(), b: &self.x * &u.b }
    }

    /// φ(uv) = φ(u)φ(v) on all 64 basis pairs.
    pub fn is_automorphism(&self, alg: &OctonionFq) -> bool {
        let basis = alg.basis();
        basis.iter().all(|u| basis.iter().all(|v| self.apply(&u.mul(v)) == self.apply(u).mul(&self.apply(v))))
    }

    /// Norm preserved on the basis and on all pairwise sums (hence the whole polar form).
    pub fn preserves_norm(&self, alg: &OctonionFq) -> bool {
        let basis = alg.basis();
        let sum = |u: &Octonion, v: &Octonion| Octonion { a: &u.a + &v.a, b: &u.b + &v.b };
        basis.iter().all(|u| basis.iter().all(|v| {
            let s = sum(u, v);
            self.apply(&s).norm() == s.norm()
        }))
    }

    /// The 8×8 matrix in the coordinate basis (columns are images of basis vectors).
    pub fn matrix8(&self, alg: &OctonionFq) -> M2 {
        let cols: Vec<Vec<FqElem>> = alg.basis().iter().map(|u| self.apply(u).coords()).collect();
        Matrix::from_fn(8, 8, |i, j| cols[j][i])
    }
}

/// Trace of φ on the 7-dimensional orthogonal complement of the identity.
pub fn oct_trace7(phi: &OctAut, alg: &OctonionFq) -> FqElem {
    let fq = phi.fq;
    let (o, z) = (fq.one(), fq.zero());
    // complement of (I,0) for the polar form of the norm: tr A = 0
    let mut basis: Vec<Vec<FqElem>> = vec![
        vec![o, z, z, -&o, z, z, z, z],
        vec![z, o, z, z, z, z, z, z],
        vec![z, z, o, z, z, z, z, z],
    ];
    for i in 4..8 {
        basis.push((0..8).map(|j| if i == j { o } else { z }).collect());
    }
    let m8 = phi.matrix8(alg);
    // coordinates in the complement basis: solve B·c = φ(b_i)
    let bmat = Matrix::from_fn(8, 7, |i, j| basis[j][i]);
    let mut aug = Matrix::from_fn(8, 8, |i, j| if j < 7 { *bmat.get(i, j) } else { z });
    let mut tr = z;
    for (k, v) in basis.iter().enumerate() {
        let img = m8.mul_vec(v);
        for (i, x) in img.into_iter().enumerate() {
            aug.set(i, 7, x);
        }
        let sol = solve_column(&aug);
        tr = tr + sol[k];
    }
    tr
}

/// Solve the consistent system [B | y] with B of full column rank 7.
fn solve_column(aug: &M2) -> Vec<FqElem> {
    let mut m = aug.clone();
    let (rows, cols) = (m.rows(), m.cols());
    let mut piv = Vec::new();
    let mut r = 0;
    for c in 0..cols - 1 {
        let Some(p) = (r..rows).find(|&i| !m.get(i, c).is_zero()) else { continue };
        for j in 0..cols {
            let (x, y) = (*m.get(r, j), *m.get(p, j));
            m.set(r, j, y);
            m.set(p, j, x);
        }
        let inv = m.get(r, c).inv().expect("pivot");
        for j in 0..cols {
            let v = m.get(r, j) * &inv;
            m.set(r, j, v);
        }
        for i in 0..rows {
            if i != r && !m.get(i, c).is_zero() {
                let f = *m.get(i, c);
                for j in 0..cols {
                    let v = m.get(i, j) - &(&f * m.get(r, j));
                    m.set(i, j, v);
                }
            }
        }
        piv.push(c);
        r += 1;
    }
    let mut out = vec![m.get(0, 0).zero_like(); cols - 1];
    for (i, &c) in piv.iter().enumerate() {
        out[c] = *m.get(i, cols - 1);
    }
    out
}

/// Whether a ↦ tr₇(φ_a) hits every element of F_q.
pub fn trace_surjective(q: u64) -> Result<bool> {
    let alg = OctonionFq::new(q)?;
    let mut seen: Vec<u64> = alg.fq.elements().map(|a| oct_trace7(&oct_aut_phi(&alg, &a), &alg).index()).collect();
    seen.sort_unstable();
    seen.dedup();
    Ok(seen.len() as u64 == alg.fq.q())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cocycle::explicit_s7;
    use crate::qalg::QuatAlgebra;
    use crate::symrep::tau;
    use crate::numfield::{BaseField, ExtField};

    #[test]
    fn untwisted_basis_value() {
        let e = ExtField::rationals();
        let v = |i: usize| (0..7).map(|j| if j == i { e.one() } else { e.zero() }).collect::<Vec<_>>();
        let r = untwisted_cross(&v(0), &v(3));
        assert_eq!(r, (0..7).map(|j| if j == 0 { e.int(6) } else { e.zero() }).collect::<Vec<_>>());
    }

    #[test]
    fn tau7_preserves_untwisted() {
        let e = ExtField::rationals();
        for m in [[[1, 1], [0, 1]], [[1, 0], [1, 1]], [[2, 3], [1, 2]]] {
            let m = FMatrix::from_ints(&e, &[&m[0], &m[1]]);
            assert!(in_g2_untwisted(&tau(7, &m).unwrap()));
        }
        assert!(in_g2_untwisted(&FMatrix::identity(7, &e.one())));
    }

    #[test]
    fn conjugated_order_lands_in_twisted_g2() {
        let f = BaseField::rationals();
        let (a, b) = (f.int(2), f.int(3));
        let alg = QuatAlgebra::new(f, a.clone(), b.clone()).unwrap();
        let s = explicit_s7(f, &a, &b).unwrap();
        let si = s.inverse().unwrap();
        for u in [alg.from_ints([3, 2, 0, 0]), alg.from_ints([2, 0, 1, 0]), alg.from_ints([1, 0, 0, 0])] {
            let m = &(&s * &tau(7, &u.embed_2x2()).unwrap()) * &si;
            assert!(m.to_base().is_some());
            assert!(in_g2(&a, &b, &m).unwrap());
        }
    }

    #[test]
    fn octonion_phi() {
        let alg = OctonionFq::new(5).unwrap();
        let fq = alg.field();
        let phi = oct_aut_phi(&alg, &fq.int(2));
        assert!(phi.is_automorphism(&alg));
        assert!(phi.preserves_norm(&alg));
        assert_eq!(phi.apply(&alg.one()), alg.one());
    }

    #[test]
    fn trace_is_affine_in_a() {
        for q in [3u64, 5, 7, 9] {
            let alg = OctonionFq::new(q).unwrap();
            let fq = alg.field();
            for a in fq.elements() {
                let t = oct_trace7(&oct_aut_phi(&alg, &a), &alg);
                assert_eq!(t, (fq.int(2) * a) + fq.int(3), "q={q}");
            }
            assert!(trace_surjective(q).unwrap());
        }
    }

    #[test]
    fn even_char_rejected() {
        assert_eq!(OctonionFq::new(4).err(), Some(Error::EvenCharacteristic));
    }
}

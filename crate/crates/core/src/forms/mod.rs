//! Quadratic forms over Q or a real quadratic field: diagonalization, local invariants, the
//! explicit forms J_n^{a,b}, and the admissibility computation for uniform SO(k+1,k) lattices.

pub mod diag;
pub mod hermitian;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::cocycle::{explicit_n, explicit_p, k_matrix};
use crate::error::{Error, Result};
use crate::matrix::{BMatrix, FMatrix, Matrix};
use crate::numfield::rat::{factorial, int_sqrt_exact, prime_divisors, squarefree_class};
use crate::numfield::{prime_split, BaseElem, BaseField, ExtField, FieldElem, Q};
use crate::qalg::{hilbert_symbol, Place};
use crate::symrep::j_form;

pub use diag::{Diagonalization, Involution};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticForm {
    field: BaseField,
    mat: BMatrix,
}

impl QuadraticForm {
    pub fn new(field: BaseField, mat: BMatrix) -> Result<Self> {
        if !mat.is_square() {
            return Err(Error::DimensionMismatch(format!("{}x{} form", mat.rows(), mat.cols())));
        }
        let mat = mat.try_map(|x| field.coerce(x))?;
        if mat.transpose() != mat {
            return Err(Error::DimensionMismatch("form is not symmetric".into()));
        }
        Ok(QuadraticForm { field, mat })
    }

    pub fn diagonal(field: BaseField, d: &[BaseElem]) -> Self {
        QuadraticForm { field, mat: Matrix::diag(d) }
    }

    pub fn from_ints(field: BaseField, rows: &[&[i64]]) -> Result<Self> {
        Self::new(field, Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| field.int(x)).collect()).collect()))
    }

    pub fn field(&self) -> BaseField {
        self.field
    }

    pub fn matrix(&self) -> &BMatrix {
        &self.mat
    }

    pub fn rank(&self) -> usize {
        self.mat.rows()
    }

    pub fn det(&self) -> BaseElem {
        self.mat.det()
    }

    pub fn scaled(&self, c: &BaseElem) -> Self {
        QuadraticForm { field: self.field, mat: self.mat.scale(c) }
    }

    /// C^⊤QC
    pub fn congruent(&self, c: &BMatrix) -> Result<Self> {
        let m = c.transpose().try_mul(&self.mat)?.try_mul(c)?;
        Ok(QuadraticForm { field: self.field, mat: m })
    }

    /// Det(Q)·Q, whose determinant is a square for odd rank.
    pub fn normalized(&self) -> Self {
        self.scaled(&self.det())
    }
}

/// Diagonal entries and a congruence C with C^⊤QC = diag.
pub fn diagonalize(q: &QuadraticForm) -> Result<(Vec<BaseElem>, BMatrix)> {
    let e = ExtField::over(q.field);
    let h = q.mat.to_tower(&e);
    let d = diag::diagonalize(&h, &Involution::identity(), &[FMatrix::identity(1, &e.one())])?;
    let entries = d.diag.iter().map(|x| x.as_base().expect("base entry")).collect();
    let c = d.congruence.to_base().expect("base congruence");
    Ok((entries, c))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Signature {
    pub place: usize,
    pub pos: usize,
    pub neg: usize,
}

impl Signature {
    pub fn is_definite(&self) -> bool {
        self.pos == 0 || self.neg == 0
    }
}

pub fn signatures(f: BaseField, diag: &[BaseElem]) -> Vec<Signature> {
    f.real_places()
        .into_iter()
        .map(|v| {
            let pos = diag.iter().filter(|x| x.sign_at(v) > 0).count();
            Signature { place: v, pos, neg: diag.len() - pos }
        })
        .collect()
}

/// Finite places over 2 and over every prime dividing a norm of some entry.
pub fn hasse_support(f: BaseField, diag: &[BaseElem]) -> Result<Vec<Place>> {
    let mut ps = vec![2u64];
    for x in diag {
        let n = x.norm();
        ps.extend(prime_divisors(n.numer())?);
        ps.extend(prime_divisors(n.denom())?);
    }
    ps.sort_unstable();
    ps.dedup();
    let mut out = Vec::new();
    for p in ps {
        out.extend(prime_split(f, p)?.into_iter().map(Place::Finite));
    }
    Ok(out)
}

/// A representative of the square class of x with squarefree rational content.
pub fn square_reduced(x: &BaseElem) -> Result<BaseElem> {
    let f = x.field();
    if x.is_zero() {
        return Err(Error::ZeroArgument);
    }
    let (u, v) = (x.re(), x.im());
    let l = u.denom().lcm(v.denom());
    let (uu, vv) = (u.numer() * (&l / u.denom()), v.numer() * (&l / v.denom()));
    let g = uu.gcd(&vv);
    let c = squarefree_class(&Q::new(g.clone(), l))?;
    let y = f.elem(Q::from_integer(&uu / &g), Q::from_integer(&vv / &g));
    Ok(&y * &f.rat(Q::from_integer(c)))
}

fn reduce_all(diag: &[BaseElem]) -> Result<Vec<BaseElem>> {
    diag.iter().map(square_reduced).collect()
}

/// ε_v = ∏_{i<j} (d_i, d_j)_v
pub fn hasse_at(diag: &[BaseElem], v: &Place) -> Result<i32> {
    hasse_raw(&reduce_all(diag)?, v)
}

fn hasse_raw(diag: &[BaseElem], v: &Place) -> Result<i32> {
    let mut e = 1;
    for i in 0..diag.len() {
        for j in i + 1..diag.len() {
            e *= hilbert_symbol(&diag[i], &diag[j], v)?;
        }
    }
    Ok(e)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormInvariants {
    pub field: BaseField,
    pub rank: usize,
    pub disc: BaseElem,
    pub signatures: Vec<Signature>,
    /// ε_P over the support; +1 at every other finite place.
    pub hasse: Vec<(Place, i32)>,
}

impl FormInvariants {
    pub fn hasse_at(&self, v: &Place) -> i32 {
        self.hasse.iter().find(|(p, _)| p == v).map_or(1, |(_, s)| *s)
    }

    /// Places where ε_P = −1.
    pub fn hasse_defects(&self) -> Vec<Place> {
        self.hasse.iter().filter(|(_, s)| *s == -1).map(|(p, _)| *p).collect()
    }

    pub fn disc_class(&self) -> String {
        if self.field.is_rationals() {
            if let Ok(c) = squarefree_class(self.disc.re()) {
                return c.to_string();
            }
        }
        self.disc.to_string()
    }

    pub fn agrees_with(&self, o: &FormInvariants) -> bool {
        self.field == o.field
            && self.rank == o.rank
            && self.field.is_square(&(&self.disc / &o.disc))
            && self.signatures == o.signatures
            && self.hasse_defects() == o.hasse_defects()
    }
}

pub fn invariants_of_diagonal(f: BaseField, diag: &[BaseElem]) -> Result<FormInvariants> {
    let disc = square_reduced(&diag.iter().fold(f.one(), |acc, x| &acc * x))?;
    let red = reduce_all(diag)?;
    let mut hasse = Vec::new();
    for v in hasse_support(f, &red)? {
        hasse.push((v, hasse_raw(&red, &v)?));
    }
    Ok(FormInvariants { field: f, rank: diag.len(), disc, signatures: signatures(f, diag), hasse })
}

pub fn invariants(q: &QuadraticForm) -> Result<FormInvariants> {
    let (d, _) = diagonalize(q)?;
    invariants_of_diagonal(q.field, &d)
}

pub fn equiv_quadratic(q1: &QuadraticForm, q2: &QuadraticForm) -> Result<bool> {
    if q1.field != q2.field {
        return Err(Error::FieldMismatch);
    }
    if q1.rank() != q2.rank() {
        return Ok(false);
    }
    Ok(invariants(q1)?.agrees_with(&invariants(q2)?))
}

fn fact(n: usize) -> BigInt {
    factorial(n as u64)
}

/// The diagonal form J_n^{a,b} (n odd); J_n itself when a or b is a square.
pub fn jnab(f: BaseField, n: usize, a: &BaseElem, b: &BaseElem) -> Result<QuadraticForm> {
    if n < 3 || n % 2 == 0 {
        return Err(Error::DimensionMismatch(format!("J^(a,b) needs odd n >= 3, got {n}")));
    }
    let (a, b) = (f.coerce(a)?, f.coerce(b)?);
    if a.is_zero() || b.is_zero() {
        return Err(Error::ZeroArgument);
    }
    if f.is_square(&a) || f.is_square(&b) {
        return Ok(QuadraticForm { field: f, mat: j_form(n, &f.one()) });
    }
    let k = (n - 1) / 2;
    let ab = &a * &b;
    let mut d = Vec::with_capacity(n);
    for i in 1..=n {
        let base = f.rat(crate::numfield::Q::from_integer(fact(n - i) * fact(i - 1)));
        let two = f.int(2);
        let entry = if n % 4 == 1 {
            match i {
                _ if i <= k && i % 2 == 1 => -&(&(&two * &a) * &base),
                _ if i <= k => -&(&(&two * &b) * &base),
                _ if i == k + 1 => base,
                _ if i % 2 == 0 => &(&two * &ab) * &base,
                _ => &two * &base,
            }
        } else {
            match i {
                _ if i <= k && i % 2 == 1 => -&(&(&two * &b) * &base),
                _ if i <= k => &two * &base,
                _ if i == k + 1 => -&(&a * &base),
                _ if i % 2 == 0 => -&(&(&two * &a) * &base),
                _ => &(&two * &ab) * &base,
            }
        };
        d.push(entry);
    }
    Ok(QuadraticForm::diagonal(f, &d))
}

/// The integer whose squareness makes the Hasse invariant of J_n^{a,b} collapse:
/// ∏_{j=1,3,…,k−1} j(n−j) for n ≡ 1 mod 4, 2∏_{j=1,3,…,k} j(n−j) for n ≡ 3 mod 4.
pub fn square_product(n: usize) -> BigInt {
    let k = (n - 1) / 2;
    let top = if n % 4 == 1 { k.saturating_sub(1) } else { k };
    let mut acc = if n % 4 == 1 { BigInt::one() } else { BigInt::from(2) };
    for j in (1..=top).step_by(2) {
        acc *= BigInt::from(j * (n - j));
    }
    acc
}

pub fn square_product_check(n: usize) -> bool {
    n >= 5 && n % 2 == 1 && int_sqrt_exact(&square_product(n)).is_some()
}

/// 1 if n ≡ ±1 mod 8, (a,b)_v(−1,−1)_v if n ≡ ±3 mod 8.
pub fn hasse_closed_form(n: usize, a: &BaseElem, b: &BaseElem, v: &Place) -> Result<i32> {
    match n % 8 {
        1 | 7 => Ok(1),
        3 | 5 => {
            let m1 = a.field().int(-1);
            Ok(hilbert_symbol(a, b, v)? * hilbert_symbol(&m1, &m1, v)?)
        }
        _ => Err(Error::DimensionMismatch(format!("closed form needs odd n, got {n}"))),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParityCertificate {
    /// ε_v(Q)·(−1,−1)_v at each real place and each place of the support.
    pub symbols: Vec<(Place, i32)>,
    /// Number of places where the product is −1 (even by reciprocity).
    pub nontrivial: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Admissibility {
    pub n: usize,
    /// The unique real place where the normalized form is indefinite.
    pub sigma: usize,
    pub signature: Signature,
    /// V_F ∖ {σ}
    pub real_part: Vec<Place>,
    /// Finite places with ε_P(Q)(−1,−1)_P ≠ 1; `None` when n ≡ ±1 mod 8, where the form carries no
    /// information on the finite ramification.
    pub finite_part: Option<Vec<Place>>,
    pub certificate: ParityCertificate,
}

impl Admissibility {
    /// Target ramification set of the quaternion algebra, when determined.
    pub fn target(&self) -> Option<Vec<Place>> {
        let fin = self.finite_part.as_ref()?;
        let mut t = self.real_part.clone();
        t.extend(fin.iter().copied());
        t.sort();
        Some(t)
    }
}

/// Which quaternion algebra an order must come from for τ_n of its norm-one group to land in SO(Q, O_F).
pub fn fuchsian_admissibility(q: &QuadraticForm) -> Result<Admissibility> {
    let n = q.rank();
    if n < 3 || n % 2 == 0 {
        return Err(Error::DimensionMismatch(format!("admissibility needs odd rank, got {n}")));
    }
    let f = q.field();
    let qn = q.normalized();
    let (d, _) = diagonalize(&qn)?;
    let sigs = signatures(f, &d);
    let indefinite: Vec<&Signature> = sigs.iter().filter(|s| !s.is_definite()).collect();
    if indefinite.len() != 1 {
        return Err(Error::SignatureProfileMismatch(format!("{} indefinite real places", indefinite.len())));
    }
    let sig = *indefinite[0];
    let k = (n - 1) / 2;
    let want = if k % 2 == 0 { (k + 1, k) } else { (k, k + 1) };
    if (sig.pos, sig.neg) != want {
        return Err(Error::SignatureProfileMismatch(format!("signature ({},{}) at inf{}", sig.pos, sig.neg, sig.place)));
    }
    if let Some(s) = sigs.iter().find(|s| s.place != sig.place && s.neg != 0) {
        return Err(Error::SignatureProfileMismatch(format!("not positive definite at inf{}", s.place)));
    }
    let m1 = f.int(-1);
    let d = reduce_all(&d)?;
    let mut symbols = Vec::new();
    for v in f.real_places().into_iter().map(Place::Real).chain(hasse_support(f, &d)?) {
        symbols.push((v, hasse_raw(&d, &v)? * hilbert_symbol(&m1, &m1, &v)?));
    }
    let nontrivial = symbols.iter().filter(|(_, s)| *s == -1).count();
    if nontrivial % 2 == 1 {
        return Err(Error::Unsupported(format!("odd number ({nontrivial}) of nontrivial local symbols")));
    }
    let real_part: Vec<Place> = f.real_places().into_iter().filter(|&v| v != sig.place).map(Place::Real).collect();
    let finite_part = match n % 8 {
        3 | 5 => Some(symbols.iter().filter(|(v, s)| !v.is_real() && *s == -1).map(|(v, _)| *v).collect::<Vec<_>>()),
        _ => None,
    };
    if let Some(fin) = &finite_part {
        if (fin.len() + real_part.len()) % 2 == 1 {
            return Err(Error::Unsupported("target ramification set has odd cardinality".into()));
        }
    }
    Ok(Admissibility {
        n,
        sigma: sig.place,
        signature: sig,
        real_part,
        finite_part,
        certificate: ParityCertificate { symbols, nontrivial },
    })
}

/// J*_{2n} = K P^{-⊤} J_{2n} P^{-1} over F(√a,√b).
pub fn jstar(f: BaseField, a: &BaseElem, b: &BaseElem, n: usize) -> Result<FMatrix> {
    let p = explicit_p(f, a, b, n)?;
    let e = p.sample().field().clone();
    let pi = p.inverse()?;
    let j = j_form(2 * n, &e.one());
    Ok(&(&(&k_matrix(&e, n) * &pi.transpose()) * &j) * &pi)
}

/// N̄^t J*_{2n} N; returns the 2n diagonal entries, failing if the product is not diagonal.
pub fn n_diagonalize(f: BaseField, a: &BaseElem, b: &BaseElem, n: usize) -> Result<Vec<FieldElem>> {
    let js = jstar(f, a, b, n)?;
    let nm = explicit_n(f, a, b, n)?.lift_to(js.sample().field())?;
    let d = Involution::quaternion(None).congruent(&js, &nm);
    if !d.is_diagonal() {
        return Err(Error::Unsupported("N does not diagonalize J*".into()));
    }
    Ok(d.diagonal())
}

/// −4(2n−i−1)!i! for odd i, −4(2n−i)!(i−1)! for even i (1-based).
pub fn jstar_diagonal_formula(n: usize) -> Vec<BigInt> {
    (1..=2 * n)
        .map(|i| {
            let v = if i % 2 == 1 { fact(2 * n - i - 1) * fact(i) } else { fact(2 * n - i) * fact(i - 1) };
            -4 * v
        })
        .collect()
}

/// Signature counts of J_n over Q.
pub fn j_signature(n: usize) -> Result<Signature> {
    let f = BaseField::rationals();
    let q = QuadraticForm::new(f, j_form(n, &f.one()))?;
    let (d, _) = diagonalize(&q)?;
    Ok(signatures(f, &d)[0])
}

/// Hasse symbols of several diagonal forms, keyed by place; places outside a form's support read +1.
pub fn hasse_table(f: BaseField, forms: &[Vec<BaseElem>]) -> Result<BTreeMap<Place, Vec<i32>>> {
    let mut places = Vec::new();
    for d in forms {
        places.extend(hasse_support(f, d)?);
    }
    places.sort();
    places.dedup();
    let mut out = BTreeMap::new();
    for v in places {
        out.insert(v, forms.iter().map(|d| hasse_at(d, &v)).collect::<Result<Vec<_>>>()?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numfield::rat::{q, qf};
    use crate::qalg::local_symbols;

    fn qq() -> BaseField {
        BaseField::rationals()
    }

    #[test]
    fn hyperbolic_diagonalizes() {
        let f = qq();
        let h = QuadraticForm::from_ints(f, &[&[0, 1], &[1, 0]]).unwrap();
        let (d, c) = diagonalize(&h).unwrap();
        assert_eq!(d, vec![f.int(2), f.rat(qf(-1, 2))]);
        assert_eq!(h.congruent(&c).unwrap().matrix(), &Matrix::diag(&d));
    }

    #[test]
    fn diagonal_input_untouched() {
        let f = qq();
        let d = vec![f.int(3), f.int(-5), f.int(7)];
        let (dd, c) = diagonalize(&QuadraticForm::diagonal(f, &d)).unwrap();
        assert_eq!(dd, d);
        assert!(c.is_identity());
    }

    #[test]
    fn j3_disc() {
        let f = qq();
        let j3 = QuadraticForm::new(f, j_form(3, &f.one())).unwrap();
        let inv = invariants(&j3).unwrap();
        assert!(f.is_square(&(&inv.disc / &j3.det())));
        assert_eq!(inv.disc_class(), "1");
    }

    #[test]
    fn square_reduction() {
        let f = qq();
        assert_eq!(square_reduced(&f.rat(qf(-72, 5))).unwrap(), f.int(-10));
        let g = BaseField::quadratic(2).unwrap();
        let x = g.elem(q(12), q(-8));
        let r = square_reduced(&x).unwrap();
        assert_eq!(r, g.elem(q(3), q(-2)));
        assert!(g.is_square(&(&x / &r)));
    }

    #[test]
    fn trivial_invariants() {
        let f = qq();
        let i3 = QuadraticForm::diagonal(f, &[f.one(), f.one(), f.one()]);
        let inv = invariants(&i3).unwrap();
        assert_eq!(inv.disc_class(), "1");
        assert_eq!(inv.signatures, vec![Signature { place: 0, pos: 3, neg: 0 }]);
        assert!(inv.hasse_defects().is_empty());
    }

    #[test]
    fn j_signatures() {
        // (k+1,k) for even k, (k,k+1) for odd k
        assert_eq!(j_signature(5).unwrap(), Signature { place: 0, pos: 3, neg: 2 });
        assert_eq!(j_signature(7).unwrap(), Signature { place: 0, pos: 3, neg: 4 });
        assert_eq!(j_signature(9).unwrap(), Signature { place: 0, pos: 5, neg: 4 });
    }

    #[test]
    fn small_equivalences() {
        let f = qq();
        let d = |xs: &[i64]| QuadraticForm::diagonal(f, &xs.iter().map(|&x| f.int(x)).collect::<Vec<_>>());
        assert!(!equiv_quadratic(&d(&[1, 1]), &d(&[1, -1])).unwrap());
        assert!(equiv_quadratic(&d(&[1, -1]), &d(&[2, -2])).unwrap());
        // same rank, disc and signature, different Hasse at 3
        assert!(!equiv_quadratic(&d(&[1, 1]), &d(&[3, 3])).unwrap());
        assert!(equiv_quadratic(&d(&[1, 1]), &d(&[2, 2])).unwrap());
    }

    #[test]
    fn jnab_entries() {
        let f = qq();
        let (a, b) = (f.int(2), f.int(3));
        let j5 = jnab(f, 5, &a, &b).unwrap();
        assert_eq!(j5.matrix().diagonal(), [-96, -36, 4, 72, 48].map(|x| f.int(x)));
        let j7 = jnab(f, 7, &a, &b).unwrap();
        assert_eq!(j7.matrix().get(3, 3), &f.int(-72));
        let sq = jnab(f, 5, &f.int(4), &b).unwrap();
        assert_eq!(sq.matrix(), &j_form(5, &f.one()));
    }

    #[test]
    fn square_products() {
        assert_eq!(square_product(5), BigInt::from(4));
        assert_eq!(square_product(7), BigInt::from(144));
        assert_eq!(square_product(9), BigInt::from(144));
        assert!((5..=101).step_by(2).all(square_product_check));
    }

    #[test]
    fn j5ab_hasse_matches_closed_form() {
        let f = qq();
        let (a, b) = (f.int(2), f.int(3));
        let d = jnab(f, 5, &a, &b).unwrap().normalized().matrix().diagonal();
        for p in [2u64, 3, 5, 7, 11, 13] {
            let v = Place::Finite(prime_split(f, p).unwrap()[0]);
            assert_eq!(hasse_at(&d, &v).unwrap(), hasse_closed_form(5, &a, &b, &v).unwrap(), "p={p}");
        }
    }

    #[test]
    fn jstar_n2() {
        let f = qq();
        let (a, b) = (f.int(2), f.int(3));
        let js = jstar(f, &a, &b, 2).unwrap();
        assert!(Involution::quaternion(None).is_hermitian(&js));
        let d = n_diagonalize(f, &a, &b, 2).unwrap();
        let e = d[0].field().clone();
        assert_eq!(d, [-8, -8, -24, -24].map(|x| e.int(x)));
        for n in 2..=4 {
            let d = n_diagonalize(f, &a, &b, n).unwrap();
            let want: Vec<FieldElem> = jstar_diagonal_formula(n).into_iter().map(|x| e.rat(crate::numfield::Q::from_integer(x))).collect();
            assert_eq!(d, want, "n={n}");
        }
    }

    fn sqrt2_pair() -> (BaseField, BaseElem, BaseElem) {
        let f = BaseField::quadratic(2).unwrap();
        // both negative at inf0, positive at inf1
        (f, f.elem(q(1), q(-1)), f.elem(q(1), q(-2)))
    }

    #[test]
    fn admissibility_round_trip() {
        let (f, a, b) = sqrt2_pair();
        let ram = local_symbols(f, &a, &b).unwrap().ramified();
        for n in [5, 11, 13] {
            let v = fuchsian_admissibility(&jnab(f, n, &a, &b).unwrap()).unwrap();
            assert_eq!(v.sigma, 1);
            assert_eq!(v.target().unwrap(), ram, "n={n}");
            assert_eq!(v.certificate.nontrivial % 2, 0);
        }
        // n ≡ ±1 mod 8: only the real part is forced
        let v = fuchsian_admissibility(&jnab(f, 7, &a, &b).unwrap()).unwrap();
        assert_eq!(v.real_part, vec![Place::Real(0)]);
        assert!(v.finite_part.is_none());
    }

    #[test]
    fn compact_at_negative_place() {
        let (f, a, b) = sqrt2_pair();
        let d = jnab(f, 7, &a, &b).unwrap().matrix().diagonal();
        let s = signatures(f, &d);
        assert!(s[0].is_definite());
        assert!(!s[1].is_definite());
    }

    #[test]
    fn admissibility_rejects_definite() {
        let f = BaseField::quadratic(2).unwrap();
        let q = QuadraticForm::diagonal(f, &vec![f.one(); 5]);
        assert!(matches!(fuchsian_admissibility(&q), Err(Error::SignatureProfileMismatch(_))));
    }
}

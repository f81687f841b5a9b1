//! Surface-group representations, bending along a separating curve, and Zariski-closure classification.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::g2::{preserves_cross, untwisted_cross};
use crate::matrix::{FMatrix, Matrix, Scalar};
use crate::numfield::{ExtField, FieldElem, RealPlace};
use crate::symrep::{j_form, tau};

/// Genus g with generators a₁,b₁,…,a_g,b_g and separating curve γ = ∏_{i≤h}[a_i,b_i].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfacePresentation {
    pub genus: usize,
    pub h: usize,
}

impl SurfacePresentation {
    pub fn new(genus: usize, h: usize) -> Result<Self> {
        if genus < 2 || h == 0 || h >= genus {
            return Err(Error::DimensionMismatch(format!("need g >= 2 and 1 <= h < g, got g={genus}, h={h}")));
        }
        Ok(SurfacePresentation { genus, h })
    }

    pub fn generators(&self) -> usize {
        2 * self.genus
    }

    /// Generator indices on the D side of γ.
    pub fn d_side(&self) -> std::ops::Range<usize> {
        2 * self.h..2 * self.genus
    }

    fn commutators<T: Scalar>(&self, images: &[Matrix<T>], upto: usize) -> Result<Matrix<T>> {
        let mut acc = Matrix::identity(images[0].rows(), &images[0].one_elem());
        for i in 0..upto {
            acc = &acc * &images[2 * i].commutator(&images[2 * i + 1])?;
        }
        Ok(acc)
    }

    pub fn relator<T: Scalar>(&self, images: &[Matrix<T>]) -> Result<Matrix<T>> {
        self.commutators(images, self.genus)
    }

    pub fn gamma<T: Scalar>(&self, images: &[Matrix<T>]) -> Result<Matrix<T>> {
        self.commutators(images, self.h)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceRep {
    pub pres: SurfacePresentation,
    pub field: ExtField,
    pub n: usize,
    pub images: Vec<FMatrix>,
    /// Designated real place for positivity of bending multipliers.
    pub place: Option<RealPlace>,
    /// SL₂ representation whose τ_n-lift agrees with this one on the C side.
    pub sl2: Option<Box<SurfaceRep>>,
}

pub fn rep_from_images(pres: SurfacePresentation, images: Vec<FMatrix>) -> Result<SurfaceRep> {
    if images.len() != pres.generators() {
        return Err(Error::DimensionMismatch(format!("{} images for {} generators", images.len(), pres.generators())));
    }
    let n = images[0].rows();
    let field = images[0].sample().field().clone();
    for m in &images {
        if m.rows() != n || m.cols() != n {
            return Err(Error::DimensionMismatch("images must be square of equal size".into()));
        }
        if m.sample().field() != &field {
            return Err(Error::FieldMismatch);
        }
        if !m.det().is_one() {
            return Err(Error::DetNotOne);
        }
    }
    if !pres.relator(&images)?.is_identity() {
        return Err(Error::RelatorViolation);
    }
    let place = field.real_places().into_iter().next();
    Ok(SurfaceRep { pres, field, n, images, place, sl2: None })
}

impl SurfaceRep {
    pub fn gamma(&self) -> FMatrix {
        self.pres.gamma(&self.images).expect("images are invertible")
    }

    pub fn with_place(mut self, place: RealPlace) -> Self {
        self.place = Some(place);
        self
    }
}

/// τ_n applied generator-wise.
pub fn fuchsian_lift(n: usize, rep: &SurfaceRep) -> Result<SurfaceRep> {
    if rep.n != 2 {
        return Err(Error::DimensionMismatch(format!("lift needs an SL2 representation, got dimension {}", rep.n)));
    }
    let images = rep.images.iter().map(|m| tau(n, m)).collect::<Result<Vec<_>>>()?;
    Ok(SurfaceRep { pres: rep.pres, field: rep.field.clone(), n, images, place: rep.place.clone(), sl2: Some(Box::new(rep.clone())) })
}

/// Basis of {X : XM = MX}.
pub fn centralizer_basis<T: Scalar>(m: &Matrix<T>) -> Vec<Matrix<T>> {
    let n = m.rows();
    let z = m.zero_elem();
    // (XM − MX)_{ij} = Σ_k X_ik M_kj − M_ik X_kj
    let sys = Matrix::from_fn(n * n, n * n, |row, col| {
        let (i, j) = (row / n, row % n);
        let (a, b) = (col / n, col % n);
        let mut v = z.clone();
        if a == i {
            v = v.plus(m.get(b, j));
        }
        if b == j {
            v = v.minus(m.get(i, a));
        }
        v
    });
    sys.nullspace().into_iter().map(|v| Matrix::new(n, n, v)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Eigenbasis {
    /// V = τ_n(P) with P an SL₂ eigenbasis of the curve image in SL₂.
    Tau(FMatrix),
    /// ρ(γ) is already diagonal.
    Standard,
    /// B supplied directly.
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BendingDatum {
    pub b: FMatrix,
    pub h: usize,
    pub multipliers: Vec<FieldElem>,
    pub basis: Eigenbasis,
}

impl BendingDatum {
    /// A bending matrix given directly; it cannot be classified.
    pub fn from_matrix(b: FMatrix, h: usize) -> Self {
        BendingDatum { b, h, multipliers: vec![], basis: Eigenbasis::Unknown }
    }

    pub fn identity(rep: &SurfaceRep) -> Self {
        let one = rep.field.one();
        BendingDatum { b: FMatrix::identity(rep.n, &one), h: rep.pres.h, multipliers: vec![one; rep.n], basis: Eigenbasis::Unknown }
    }

    /// B^k, with multipliers raised accordingly.
    pub fn power(&self, k: u32) -> Self {
        BendingDatum {
            b: self.b.pow(k as u64),
            h: self.h,
            multipliers: self.multipliers.iter().map(|m| m.pow(k)).collect(),
            basis: self.basis.clone(),
        }
    }
}

fn eigvec(m: &FMatrix, l: &FieldElem) -> Vec<FieldElem> {
    let (p, q, r, s) = (m.get(0, 0), m.get(0, 1), m.get(1, 0), m.get(1, 1));
    if !q.is_zero() {
        vec![q.clone(), l - p]
    } else if !r.is_zero() {
        vec![l - s, r.clone()]
    } else if l == p {
        vec![m.one_elem(), m.zero_elem()]
    } else {
        vec![m.zero_elem(), m.one_elem()]
    }
}

/// Eigenbasis of ρ(γ) with eigenvalue order λ^{n−1}, λ^{n−3}, …, λ^{1−n}.
fn tau_eigenbasis(rep: &SurfaceRep) -> Result<Eigenbasis> {
    let Some(src) = &rep.sl2 else {
        let g = rep.gamma();
        let d = g.diagonal();
        let distinct = d.iter().enumerate().all(|(i, x)| d[..i].iter().all(|y| y != x));
        return if g.is_diagonal() && distinct { Ok(Eigenbasis::Standard) } else { Err(Error::NonSplitSpectrum) };
    };
    let c = src.gamma();
    let e = &rep.field;
    let t = c.trace();
    let disc = &(&t * &t) - &e.int(4);
    let s = disc.as_base().and_then(|x| e.base().sqrt(&x)).ok_or(Error::NonSplitSpectrum)?;
    let s = e.from_base(&s);
    if s.is_zero() {
        return Err(Error::Unsupported("curve image is not regular semisimple".into()));
    }
    let half = e.int(2).inv()?;
    let l1 = &(&t + &s) * &half;
    let l2 = &(&t - &s) * &half;
    let (v1, v2) = (eigvec(&c, &l1), eigvec(&c, &l2));
    let det = &(&v1[0] * &v2[1]) - &(&v1[1] * &v2[0]);
    let k = det.inv()?;
    let p = FMatrix::from_rows(vec![vec![v1[0].clone(), &v2[0] * &k], vec![v1[1].clone(), &v2[1] * &k]]);
    let v = tau(rep.n, &p)?;
    let g = rep.gamma();
    let d = &(&v.inverse()? * &g) * &v;
    if !d.is_diagonal() {
        return Err(Error::UnsupportedBasis);
    }
    let diag = d.diagonal();
    if diag.iter().enumerate().any(|(i, x)| diag[..i].contains(x)) {
        return Err(Error::Unsupported("curve image is not regular semisimple".into()));
    }
    Ok(Eigenbasis::Tau(v))
}

/// B = V·diag(μ)·V⁻¹ in the eigenbasis of ρ(γ).
pub fn make_bending_element(rep: &SurfaceRep, multipliers: &[FieldElem]) -> Result<BendingDatum> {
    let n = rep.n;
    if multipliers.len() != n {
        return Err(Error::DimensionMismatch(format!("{} multipliers for dimension {n}", multipliers.len())));
    }
    let prod = multipliers.iter().fold(rep.field.one(), |a, m| &a * m);
    if !prod.is_one() {
        return Err(Error::ProductNotOne);
    }
    if let Some(v) = &rep.place {
        for m in multipliers {
            if m.sign_at(v)? <= 0 {
                return Err(Error::NonpositiveMultiplier);
            }
        }
    }
    let basis = tau_eigenbasis(rep)?;
    let d = FMatrix::diag(multipliers);
    let b = match &basis {
        Eigenbasis::Tau(v) => &(v * &d) * &v.inverse()?,
        _ => d,
    };
    let g = rep.gamma();
    if &b * &g != &g * &b {
        return Err(Error::CommutationViolation);
    }
    if !b.det().is_one() {
        return Err(Error::DetNotOne);
    }
    Ok(BendingDatum { b, h: rep.pres.h, multipliers: multipliers.to_vec(), basis })
}

/// ρ_B: C-side images fixed, D-side images conjugated by B.
pub fn bend(rep: &SurfaceRep, datum: &BendingDatum) -> Result<SurfaceRep> {
    if datum.h != rep.pres.h || datum.b.rows() != rep.n {
        return Err(Error::DimensionMismatch("bending datum does not match the representation".into()));
    }
    let g = rep.gamma();
    if &datum.b * &g != &g * &datum.b {
        return Err(Error::CommutationViolation);
    }
    let bi = datum.b.inverse()?;
    let mut out = rep.clone();
    for i in rep.pres.d_side() {
        out.images[i] = &(&datum.b * &rep.images[i]) * &bi;
    }
    if !out.pres.relator(&out.images)?.is_identity() {
        return Err(Error::RelatorViolation);
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Closure {
    #[serde(rename = "principal-SL2")]
    PrincipalSl2,
    #[serde(rename = "Sp")]
    Sp,
    #[serde(rename = "SO")]
    So,
    #[serde(rename = "G2")]
    G2,
    #[serde(rename = "SL")]
    Sl,
}

impl std::fmt::Display for Closure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Closure::PrincipalSl2 => "principal-SL2",
            Closure::Sp => "Sp",
            Closure::So => "SO",
            Closure::G2 => "G2",
            Closure::Sl => "SL",
        })
    }
}

/// μ_{i−1}μ_{i+1} = μ_i², i.e. diag(μ) ∈ τ_n(GL₂) up to scalars.
pub fn is_geometric(mu: &[FieldElem]) -> bool {
    mu.windows(3).all(|w| &w[0] * &w[2] == &w[1] * &w[1])
}

/// μ_iμ_{n+1−i} = 1, the eigenbasis form of B^⊤J_nB = J_n.
pub fn pairing_holds(mu: &[FieldElem]) -> bool {
    let n = mu.len();
    (0..n).all(|i| (&mu[i] * &mu[n - 1 - i]).is_one())
}

pub fn zariski_classify(rep_b: &SurfaceRep, datum: &BendingDatum) -> Result<Closure> {
    let n = rep_b.n;
    if !matches!(datum.basis, Eigenbasis::Tau(_)) || datum.multipliers.len() != n {
        return Err(Error::UnsupportedBasis);
    }
    if is_geometric(&datum.multipliers) {
        return Ok(Closure::PrincipalSl2);
    }
    let j = j_form(n, &rep_b.field.one());
    let b = &datum.b;
    if &(&b.transpose() * &j) * b != j {
        return Ok(Closure::Sl);
    }
    if n % 2 == 0 {
        return Ok(Closure::Sp);
    }
    if n == 7 && preserves_cross(b, untwisted_cross) {
        return Ok(Closure::G2);
    }
    Ok(Closure::So)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantForms {
    pub dim: usize,
    pub symmetric: usize,
    pub alternating: usize,
    /// For n = 7: dimension of invariant alternating bilinear maps V×V→V.
    pub cross: Option<usize>,
}

impl InvariantForms {
    /// The closure type these invariants are consistent with, ignoring principal-vs-larger.
    pub fn consistent_with(&self, c: Closure, n: usize) -> bool {
        match c {
            Closure::Sl => self.dim == 0,
            Closure::Sp => self.dim == 1 && self.alternating == 1,
            Closure::So => self.dim == 1 && self.symmetric == 1 && self.cross.unwrap_or(0) == 0,
            Closure::G2 => self.dim == 1 && self.symmetric == 1 && self.cross == Some(1),
            Closure::PrincipalSl2 => {
                self.dim == 1
                    && if n % 2 == 0 { self.alternating == 1 } else { self.symmetric == 1 }
                    && (n != 7 || self.cross == Some(1))
            }
        }
    }
}

/// Solves g^⊤Qg = Q for all generators (and g(x×y) = gx×gy when n = 7).
pub fn invariant_form_solver<T: Scalar>(gens: &[Matrix<T>]) -> InvariantForms {
    let n = gens[0].rows();
    let z = gens[0].zero_elem();
    let one = z.one_like();
    let mut rows: Vec<Vec<T>> = Vec::new();
    for g in gens {
        for i in 0..n {
            for j in 0..n {
                let mut r = vec![z.clone(); n * n];
                for k in 0..n {
                    for l in 0..n {
                        r[k * n + l] = g.get(k, i).times(g.get(l, j));
                    }
                }
                r[i * n + j] = r[i * n + j].minus(&one);
                rows.push(r);
            }
        }
    }
    let dim_with = |extra: &dyn Fn(usize, usize) -> Option<Vec<T>>| {
        let mut all = rows.clone();
        for k in 0..n {
            for l in 0..n {
                if let Some(r) = extra(k, l) {
                    all.push(r);
                }
            }
        }
        Matrix::from_rows(all).nullspace().len()
    };
    let dim = dim_with(&|_, _| None);
    let sym_rows = |sign: i64| {
        let (z, one) = (z.clone(), one.clone());
        move |k: usize, l: usize| {
            (k < l).then(|| {
                let mut r = vec![z.clone(); n * n];
                r[k * n + l] = one.clone();
                r[l * n + k] = one.int_like(sign);
                r
            })
        }
    };
    let symmetric = dim_with(&sym_rows(-1));
    let alternating = dim_with(&sym_rows(1));
    let cross = (n == 7).then(|| cross_dim(gens));
    InvariantForms { dim, symmetric, alternating, cross }
}

/// Dimension of alternating bilinear maps c: V×V→V with g·c(x,y) = c(gx,gy) for every generator.
fn cross_dim<T: Scalar>(gens: &[Matrix<T>]) -> usize {
    let n = gens[0].rows();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let np = pairs.len();
    let idx = |p: usize, k: usize| p * n + k;
    let z = gens[0].zero_elem();
    let mut rows = Vec::new();
    for g in gens {
        for (p, &(i, j)) in pairs.iter().enumerate() {
            for k in 0..n {
                let mut r = vec![z.clone(); np * n];
                for m in 0..n {
                    r[idx(p, m)] = r[idx(p, m)].plus(g.get(k, m));
                }
                for (q, &(a, b)) in pairs.iter().enumerate() {
                    let c = g.get(a, i).times(g.get(b, j)).minus(&g.get(b, i).times(g.get(a, j)));
                    if !c.is_zero() {
                        r[idx(q, k)] = r[idx(q, k)].minus(&c);
                    }
                }
                rows.push(r);
            }
        }
    }
    Matrix::from_rows(rows).nullspace().len()
}

pub mod fixtures {
    //! Synthetic genus-2 fixtures (A,B,B,A): [A,B][B,A] = I for any A, B.

    use super::*;
    use crate::numfield::rat::qf;

    /// A = diag(4, 1/4), B = (0 1; −1 1): [A,B] has eigenvalues 16, 1/16.
    pub fn sl2_rep(field: &ExtField) -> SurfaceRep {
        let a = FMatrix::diag(&[field.int(4), field.rat(qf(1, 4))]);
        let b = FMatrix::from_ints(field, &[&[0, 1], &[-1, 1]]);
        let pres = SurfacePresentation::new(2, 1).unwrap();
        rep_from_images(pres, vec![a.clone(), b.clone(), b, a]).expect("fixture relator")
    }

    pub fn lifted(n: usize) -> SurfaceRep {
        fuchsian_lift(n, &sl2_rep(&ExtField::rationals())).unwrap()
    }

    #[derive(Clone, Debug)]
    pub struct Fixture {
        pub name: &'static str,
        pub n: usize,
        pub multipliers: Vec<(i64, i64)>,
        pub expected: Closure,
    }

    fn f(name: &'static str, mu: &[(i64, i64)], expected: Closure) -> Fixture {
        Fixture { name, n: mu.len(), multipliers: mu.to_vec(), expected }
    }

    impl Fixture {
        pub fn multipliers(&self, e: &ExtField) -> Vec<FieldElem> {
            self.multipliers.iter().map(|&(p, q)| e.rat(qf(p, q))).collect()
        }
    }

    /// Multiplier tuples covering every closure type.
    pub fn battery() -> Vec<Fixture> {
        use Closure::*;
        vec![
            f("n3-trivial", &[(1, 1), (1, 1), (1, 1)], PrincipalSl2),
            f("n3-sl", &[(2, 1), (2, 1), (1, 4)], Sl),
            f("n4-geometric", &[(8, 1), (2, 1), (1, 2), (1, 8)], PrincipalSl2),
            f("n4-sp", &[(2, 1), (3, 1), (1, 3), (1, 2)], Sp),
            f("n4-sl", &[(2, 1), (1, 1), (1, 2), (1, 1)], Sl),
            f("n5-geometric", &[(16, 1), (4, 1), (1, 1), (1, 4), (1, 16)], PrincipalSl2),
            f("n5-so", &[(2, 1), (3, 1), (1, 1), (1, 3), (1, 2)], So),
            f("n5-sl", &[(2, 1), (1, 1), (1, 2), (1, 1), (1, 1)], Sl),
            f("n6-sp", &[(2, 1), (3, 1), (5, 1), (1, 5), (1, 3), (1, 2)], Sp),
            f("n6-sl", &[(2, 1), (3, 1), (1, 1), (1, 2), (1, 3), (1, 1)], Sl),
            f("n7-so", &[(2, 1), (3, 1), (5, 1), (1, 1), (1, 5), (1, 3), (1, 2)], So),
            f("n7-g2", &[(6, 1), (2, 1), (3, 1), (1, 1), (1, 3), (1, 2), (1, 6)], G2),
            f("n7-sl", &[(2, 1), (1, 1), (1, 1), (1, 1), (1, 1), (1, 2), (1, 1)], Sl),
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use crate::numfield::rat::qf;

    fn e() -> ExtField {
        ExtField::rationals()
    }

    #[test]
    fn relator_trick_and_violation() {
        let f = e();
        let rep = sl2_rep(&f);
        assert!(rep.pres.relator(&rep.images).unwrap().is_identity());
        let (a, b) = (rep.images[0].clone(), rep.images[1].clone());
        let pres = rep.pres;
        assert_eq!(rep_from_images(pres, vec![a.clone(), b.clone(), a, b]).unwrap_err(), Error::RelatorViolation);
        let id = FMatrix::identity(3, &f.one());
        assert!(rep_from_images(pres, vec![id.clone(); 4]).is_ok());
        let bad = FMatrix::diag(&[f.int(2), f.one()]);
        assert_eq!(rep_from_images(pres, vec![bad.clone(), bad.clone(), bad.clone(), bad]).unwrap_err(), Error::DetNotOne);
    }

    #[test]
    fn lift_preserves_relator_and_j() {
        let rep = lifted(5);
        assert!(rep.pres.relator(&rep.images).unwrap().is_identity());
        let j = j_form(5, &e().one());
        assert!(rep.images.iter().all(|m| &(&m.transpose() * &j) * m == j));
        let two = fuchsian_lift(2, &sl2_rep(&e())).unwrap();
        assert_eq!(two.images, sl2_rep(&e()).images);
    }

    #[test]
    fn centralizers() {
        let f = e();
        let id = FMatrix::identity(3, &f.one());
        assert_eq!(centralizer_basis(&id).len(), 9);
        let d = FMatrix::diag(&[f.int(1), f.int(2), f.int(3)]);
        let c = centralizer_basis(&d);
        assert_eq!(c.len(), 3);
        assert!(c.iter().all(|m| m.is_diagonal()));
        let t = tau(5, &FMatrix::diag(&[f.int(2), f.rat(qf(1, 2))])).unwrap();
        assert_eq!(centralizer_basis(&t).len(), 5);
    }

    #[test]
    fn bending_elements() {
        let f = e();
        let rep = lifted(5);
        let ones = vec![f.one(); 5];
        let d = make_bending_element(&rep, &ones).unwrap();
        assert!(d.b.is_identity());
        assert_eq!(bend(&rep, &d).unwrap(), rep);

        // geometric tuple t^{4}, t^{2}, 1, … gives τ₅ of the eigen-torus element
        let t = f.int(3);
        let geo: Vec<_> = (0..5).map(|i| pow_i(&t, 4 - 2 * i as i64)).collect();
        let d = make_bending_element(&rep, &geo).unwrap();
        let Eigenbasis::Tau(v) = &d.basis else { panic!() };
        let torus = tau(5, &FMatrix::diag(&[t.clone(), t.inv().unwrap()])).unwrap();
        assert_eq!(d.b, &(v * &torus) * &v.inverse().unwrap());

        let mu: Vec<_> = [(2, 1), (1, 2), (1, 1), (1, 1), (1, 1)].iter().map(|&(p, q)| f.rat(qf(p, q))).collect();
        let d = make_bending_element(&rep, &mu).unwrap();
        let g = rep.gamma();
        assert_eq!(&d.b * &g, &g * &d.b);
        assert!(d.b.det().is_one());

        let bad = vec![f.int(2), f.one(), f.one(), f.one(), f.one()];
        assert_eq!(make_bending_element(&rep, &bad).unwrap_err(), Error::ProductNotOne);
        let neg = vec![f.int(-1), f.int(-1), f.one(), f.one(), f.one()];
        assert_eq!(make_bending_element(&rep, &neg).unwrap_err(), Error::NonpositiveMultiplier);
    }

    fn pow_i(t: &FieldElem, k: i64) -> FieldElem {
        if k >= 0 {
            t.pow(k as u32)
        } else {
            t.inv().unwrap().pow((-k) as u32)
        }
    }

    #[test]
    fn bend_by_curve_image() {
        let rep = lifted(4);
        let d = BendingDatum::from_matrix(rep.gamma(), 1);
        let r = bend(&rep, &d).unwrap();
        assert_eq!(r.gamma(), rep.gamma());
        assert_eq!(zariski_classify(&r, &d).unwrap_err(), Error::UnsupportedBasis);
        let bad = BendingDatum::from_matrix(rep.images[0].clone(), 1);
        assert_eq!(bend(&rep, &bad).unwrap_err(), Error::CommutationViolation);
    }

    #[test]
    fn double_bending_composes() {
        let f = e();
        let rep = lifted(4);
        let m = |v: &[(i64, i64)]| v.iter().map(|&(p, q)| f.rat(qf(p, q))).collect::<Vec<_>>();
        let d1 = make_bending_element(&rep, &m(&[(2, 1), (3, 1), (1, 3), (1, 2)])).unwrap();
        let r1 = bend(&rep, &d1).unwrap();
        let d2 = make_bending_element(&r1, &m(&[(5, 1), (1, 1), (1, 1), (1, 5)])).unwrap();
        let r2 = bend(&r1, &d2).unwrap();
        let composed = BendingDatum::from_matrix(&d2.b * &d1.b, 1);
        assert_eq!(r2, bend(&rep, &composed).unwrap());
        assert_ne!(r1.images[2], rep.images[2]);
        assert_eq!(r1.gamma(), rep.gamma());
    }

    #[test]
    fn battery_classifies_and_matches_oracle() {
        let f = e();
        for fx in battery() {
            let rep = lifted(fx.n);
            let mu = fx.multipliers(&f);
            let d = make_bending_element(&rep, &mu).unwrap();
            let r = bend(&rep, &d).unwrap();
            let c = zariski_classify(&r, &d).unwrap();
            assert_eq!(c, fx.expected, "{}", fx.name);
            if fx.n % 2 == 1 {
                assert_eq!(pairing_holds(&mu), matches!(c, Closure::So | Closure::PrincipalSl2 | Closure::G2), "{}", fx.name);
            }
            let inv = invariant_form_solver(&r.images);
            assert!(inv.consistent_with(c, fx.n), "{}: {inv:?}", fx.name);
        }
    }

    #[test]
    fn free_tau5_has_one_form() {
        let rep = lifted(5);
        let inv = invariant_form_solver(&rep.images[..2]);
        assert_eq!(inv, InvariantForms { dim: 1, symmetric: 1, alternating: 0, cross: None });
    }
}

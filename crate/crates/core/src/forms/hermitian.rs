//! Hermitian forms in three settings: σ-Hermitian over F(√d), ‾-Hermitian over a quaternion algebra
//! (2×2 block model), and ‾⊗σ-Hermitian over (a,b)_F ⊗ F(√d).

use serde::{Deserialize, Serialize};

use super::diag::{diagonalize, Involution};
use super::Signature;
use crate::cocycle::{flips, t_matrix};
use crate::error::{Error, Result};
use crate::matrix::{BMatrix, FMatrix};
use crate::numfield::{BaseElem, BaseField, ExtField, FieldElem, GaloisChar};
use crate::qalg::{hilbert_symbol, relevant_places, Place};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HermSetting {
    Quadratic { d: BaseElem },
    Quaternion { a: BaseElem, b: BaseElem },
    QuaternionUnitary { a: BaseElem, b: BaseElem, d: BaseElem },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SettingKind {
    Quadratic,
    Quaternion,
    QuaternionUnitary,
}

impl HermSetting {
    pub fn kind(&self) -> SettingKind {
        match self {
            HermSetting::Quadratic { .. } => SettingKind::Quadratic,
            HermSetting::Quaternion { .. } => SettingKind::Quaternion,
            HermSetting::QuaternionUnitary { .. } => SettingKind::QuaternionUnitary,
        }
    }

    fn block(&self) -> usize {
        if self.kind() == SettingKind::Quadratic {
            1
        } else {
            2
        }
    }

    fn ab(&self) -> Option<(&BaseElem, &BaseElem)> {
        match self {
            HermSetting::Quadratic { .. } => None,
            HermSetting::Quaternion { a, b } | HermSetting::QuaternionUnitary { a, b, .. } => Some((a, b)),
        }
    }

    fn d(&self) -> Option<&BaseElem> {
        match self {
            HermSetting::Quadratic { d } | HermSetting::QuaternionUnitary { d, .. } => Some(d),
            HermSetting::Quaternion { .. } => None,
        }
    }

    fn ramified_at(&self, v: usize) -> bool {
        self.ab().is_some_and(|(a, b)| a.sign_at(v) < 0 && b.sign_at(v) < 0)
    }
}

/// Tower, chosen roots [√a, √b, √d] (those present), involution and pivot multipliers for a setting.
struct Setup {
    tower: ExtField,
    ra: Option<(FieldElem, FieldElem)>,
    rd: Option<FieldElem>,
    inv: Involution,
    multipliers: Vec<FMatrix>,
}

fn setup(f: BaseField, s: &HermSetting) -> Result<Setup> {
    let mut xs = Vec::new();
    if let Some((a, b)) = s.ab() {
        xs.push(a.clone());
        xs.push(b.clone());
    }
    if let Some(d) = s.d() {
        if f.is_square(d) {
            return Err(Error::Unsupported("d must be a nonsquare".into()));
        }
        xs.push(d.clone());
    }
    let (e, r) = ExtField::with_roots(f, &xs)?;
    let (ra, rd) = match s {
        HermSetting::Quadratic { .. } => (None, Some(r[0].clone())),
        HermSetting::Quaternion { .. } => (Some((r[0].clone(), r[1].clone())), None),
        HermSetting::QuaternionUnitary { .. } => (Some((r[0].clone(), r[1].clone())), Some(r[2].clone())),
    };
    // σ: negates √d and fixes √a, √b
    let sigma: Option<GaloisChar> = match &rd {
        None => None,
        Some(rd) => {
            let g = e.galois_group().into_iter().find(|g| {
                flips(g, rd) && ra.as_ref().is_none_or(|(x, y)| !flips(g, x) && !flips(g, y))
            });
            Some(g.ok_or_else(|| Error::Unsupported("√d is not independent of √a, √b".into()))?)
        }
    };
    let one = e.one();
    let (inv, mut multipliers) = match &ra {
        None => (Involution::galois(sigma.unwrap()), vec![FMatrix::identity(1, &one)]),
        Some((x, y)) => {
            let z = e.zero();
            let xy = x * y;
            let basis = vec![
                FMatrix::identity(2, &one),
                FMatrix::diag(&[x.clone(), -x]),
                FMatrix::from_rows(vec![vec![z.clone(), y.clone()], vec![y.clone(), z.clone()]]),
                FMatrix::from_rows(vec![vec![z.clone(), xy.clone()], vec![-&xy, z]]),
            ];
            (Involution::quaternion(sigma), basis)
        }
    };
    if let Some(rd) = &rd {
        let extra: Vec<FMatrix> = multipliers.iter().map(|m| m.scale(rd)).collect();
        multipliers.extend(extra);
    }
    Ok(Setup { tower: e, ra, rd, inv, multipliers })
}

/// Whether a 2×2 block lies in (a,b)_F (resp. (a,b)_F ⊗ F(√d)): fixed by M ↦ T_g g(M) T_g^{-1}
/// for every g fixing √d.
fn in_block_algebra(st: &Setup, b: &FMatrix) -> bool {
    let Some((ra, rb)) = &st.ra else { return true };
    st.tower.galois_group().into_iter().all(|g| {
        if st.rd.as_ref().is_some_and(|rd| flips(&g, rd)) {
            return true;
        }
        let t = t_matrix(&st.tower, flips(&g, ra), flips(&g, rb));
        let Ok(ti) = t.inverse() else { return false };
        &(&t * &b.galois(&g)) * &ti == *b
    })
}

#[derive(Clone, Debug)]
pub struct HermitianForm {
    field: BaseField,
    setting: HermSetting,
    mat: FMatrix,
}

impl HermitianForm {
    pub fn new(f: BaseField, setting: HermSetting, mat: &FMatrix) -> Result<Self> {
        let st = setup(f, &setting)?;
        let mat = mat.lift_to(&st.tower)?;
        let s = setting.block();
        if !mat.is_square() || mat.rows() % s != 0 {
            return Err(Error::DimensionMismatch(format!("{}x{} Hermitian matrix", mat.rows(), mat.cols())));
        }
        if !st.inv.is_hermitian(&mat) {
            return Err(Error::DimensionMismatch("matrix is not Hermitian for the involution".into()));
        }
        let n = mat.rows() / s;
        for i in 0..n {
            for j in 0..n {
                if !in_block_algebra(&st, &mat.block(s * i, s * j, s, s)) {
                    return Err(Error::DimensionMismatch(format!("block ({i},{j}) is outside the algebra")));
                }
            }
        }
        Ok(HermitianForm { field: f, setting, mat })
    }

    /// Diagonal form with central entries c_i.
    pub fn diagonal(f: BaseField, setting: HermSetting, c: &[BaseElem]) -> Result<Self> {
        let st = setup(f, &setting)?;
        let s = setting.block();
        let entries: Vec<FieldElem> = c.iter().flat_map(|x| std::iter::repeat_n(st.tower.from_base(x), s)).collect();
        Self::new(f, setting, &FMatrix::diag(&entries))
    }

    /// A symmetric base-field matrix read as a σ-Hermitian form.
    pub fn from_quadratic(f: BaseField, d: BaseElem, m: &BMatrix) -> Result<Self> {
        let st = setup(f, &HermSetting::Quadratic { d: d.clone() })?;
        Self::new(f, HermSetting::Quadratic { d }, &m.to_tower(&st.tower))
    }

    pub fn identity(f: BaseField, setting: HermSetting, n: usize) -> Result<Self> {
        Self::diagonal(f, setting, &vec![f.one(); n])
    }

    pub fn matrix(&self) -> &FMatrix {
        &self.mat
    }

    pub fn setting(&self) -> &HermSetting {
        &self.setting
    }

    /// Rank over the division algebra (block count).
    pub fn rank(&self) -> usize {
        self.mat.rows() / self.setting.block()
    }

    pub fn scaled(&self, c: &BaseElem) -> Self {
        let c = self.mat.sample().field().from_base(c);
        HermitianForm { field: self.field, setting: self.setting.clone(), mat: self.mat.scale(&c) }
    }

    /// Central diagonal entries of a diagonalization.
    pub fn diagonalize(&self) -> Result<Vec<BaseElem>> {
        let st = setup(self.field, &self.setting)?;
        let d = diagonalize(&self.mat, &st.inv, &st.multipliers)?;
        d.diag.iter().map(|x| x.as_base().ok_or_else(|| Error::Unsupported("diagonal entry outside the base field".into()))).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HermitianInvariants {
    pub kind: SettingKind,
    pub rank: usize,
    /// Quadratic: places with d < 0. Quaternion: places where the algebra ramifies, counted in
    /// algebra rank. Unitary: places with d < 0, counted in complex rank.
    pub signatures: Vec<Signature>,
    /// Places where (disc, d)_v = −1; the discriminant is a norm from F(√d) iff this is empty.
    pub disc_places: Option<Vec<Place>>,
}

fn norm_defects(f: BaseField, x: &BaseElem, d: &BaseElem) -> Result<Vec<Place>> {
    let mut out = Vec::new();
    for v in relevant_places(f, x, d)? {
        if hilbert_symbol(x, d, &v)? == -1 {
            out.push(v);
        }
    }
    Ok(out)
}

pub fn hermitian_invariants(h: &HermitianForm) -> Result<HermitianInvariants> {
    let f = h.field;
    let c = h.diagonalize()?;
    let s = &h.setting;
    let mut signatures = Vec::new();
    for v in f.real_places() {
        let pos = c.iter().filter(|x| x.sign_at(v) > 0).count();
        let neg = c.len() - pos;
        match s {
            HermSetting::Quadratic { d } if d.sign_at(v) < 0 => signatures.push(Signature { place: v, pos, neg }),
            HermSetting::Quaternion { .. } if s.ramified_at(v) => signatures.push(Signature { place: v, pos, neg }),
            HermSetting::QuaternionUnitary { d, .. } if d.sign_at(v) < 0 => {
                let sig = if s.ramified_at(v) {
                    Signature { place: v, pos: 2 * pos, neg: 2 * neg }
                } else {
                    Signature { place: v, pos: c.len(), neg: c.len() }
                };
                signatures.push(sig);
            }
            _ => {}
        }
    }
    let disc_places = match s {
        HermSetting::Quadratic { d } => {
            let det = c.iter().fold(f.one(), |acc, x| &acc * x);
            Some(norm_defects(f, &det, d)?)
        }
        HermSetting::QuaternionUnitary { d, .. } => {
            // reduced norm of a central entry c is c²
            let det = c.iter().fold(f.one(), |acc, x| &(&acc * x) * x);
            Some(norm_defects(f, &det, d)?)
        }
        HermSetting::Quaternion { .. } => None,
    };
    Ok(HermitianInvariants { kind: s.kind(), rank: c.len(), signatures, disc_places })
}

pub fn hermitian_equiv(h1: &HermitianForm, h2: &HermitianForm) -> Result<bool> {
    if h1.field != h2.field || h1.setting != h2.setting {
        return Err(Error::FieldMismatch);
    }
    Ok(hermitian_invariants(h1)? == hermitian_invariants(h2)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::{jnab, jstar};

    #[test]
    fn quadratic_signature_separates() {
        let f = BaseField::rationals();
        let set = HermSetting::Quadratic { d: f.int(-1) };
        let a = HermitianForm::diagonal(f, set.clone(), &[f.one(), f.one()]).unwrap();
        let b = HermitianForm::diagonal(f, set.clone(), &[f.one(), f.int(-1)]).unwrap();
        assert!(hermitian_equiv(&a, &a).unwrap());
        assert!(!hermitian_equiv(&a, &b).unwrap());
    }

    #[test]
    fn quadratic_norm_class() {
        // 3 is not a norm from Q(i): it is ≡ 3 mod 4
        let f = BaseField::rationals();
        let set = HermSetting::Quadratic { d: f.int(-1) };
        let a = HermitianForm::diagonal(f, set.clone(), &[f.one(), f.one()]).unwrap();
        let b = HermitianForm::diagonal(f, set.clone(), &[f.one(), f.int(3)]).unwrap();
        let c = HermitianForm::diagonal(f, set, &[f.one(), f.int(5)]).unwrap();
        assert!(!hermitian_equiv(&a, &b).unwrap());
        assert!(hermitian_equiv(&a, &c).unwrap());
    }

    #[test]
    fn isotropic_hermitian_pivot() {
        let f = BaseField::rationals();
        let set = HermSetting::Quadratic { d: f.int(-1) };
        let st = setup(f, &set).unwrap();
        let e = st.tower.clone();
        let i = st.rd.clone().unwrap();
        // [[0, i], [−i, 0]]: trace of the off-diagonal entry vanishes, so the multiplier i is needed
        let z = e.zero();
        let m = FMatrix::from_rows(vec![vec![z.clone(), i.clone()], vec![-&i, z]]);
        let h = HermitianForm::new(f, set, &m).unwrap();
        let d = h.diagonalize().unwrap();
        assert_eq!(d.len(), 2);
        let inv = hermitian_invariants(&h).unwrap();
        assert_eq!(inv.signatures, vec![Signature { place: 0, pos: 1, neg: 1 }]);
    }

    #[test]
    fn minus_jstar_vs_identity() {
        let f = BaseField::rationals();
        let (a, b) = (f.int(-1), f.int(-3));
        for n in [2, 3] {
            let js = jstar(f, &a, &b, n).unwrap();
            let set = HermSetting::Quaternion { a: a.clone(), b: b.clone() };
            let h = HermitianForm::new(f, set.clone(), &-&js).unwrap();
            let id = HermitianForm::identity(f, set, n).unwrap();
            assert!(hermitian_equiv(&h, &id).unwrap());
            assert_eq!(hermitian_invariants(&h).unwrap().signatures, vec![Signature { place: 0, pos: n, neg: 0 }]);
        }
    }

    #[test]
    fn jnab_as_sigma_hermitian() {
        let f = BaseField::rationals();
        let (a, b) = (f.int(-1), f.int(-3));
        let d = f.int(-7);
        for n in [5, 7] {
            let j = jnab(f, n, &a, &b).unwrap();
            let h = HermitianForm::from_quadratic(f, d.clone(), j.matrix()).unwrap();
            let id = HermitianForm::identity(f, HermSetting::Quadratic { d: d.clone() }, n).unwrap();
            assert!(hermitian_equiv(&h, &id).unwrap(), "n={n}");
        }
    }

    #[test]
    fn jstar_unitary_vs_minus_identity() {
        let f = BaseField::quadratic(2).unwrap();
        let q = crate::numfield::rat::q;
        let (a, b) = (f.elem(q(1), q(-1)), f.elem(q(1), q(-2)));
        let d = f.elem(q(2), q(-3));
        for n in [2, 3] {
            let js = jstar(f, &a, &b, n).unwrap();
            let set = HermSetting::QuaternionUnitary { a: a.clone(), b: b.clone(), d: d.clone() };
            let h = HermitianForm::new(f, set.clone(), &js).unwrap();
            let m = HermitianForm::identity(f, set, n).unwrap().scaled(&f.int(-1));
            assert!(hermitian_equiv(&h, &m).unwrap(), "n={n}");
        }
    }
}

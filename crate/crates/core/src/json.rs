//! JSON interchange: field specs, matrices as row-major coefficient vectors, form and fixture files, reports.

use serde::{Deserialize, Serialize};

use crate::bend::{fuchsian_lift, rep_from_images, SurfacePresentation, SurfaceRep};
use crate::error::{Error, Result};
use crate::forms::{FormInvariants, QuadraticForm};
use crate::matrix::{BMatrix, FMatrix, Matrix};
use crate::numfield::{BaseElem, BaseField, ExtField, FieldElem, RealPlace};

pub const SCHEMA_VERSION: u32 = 1;

/// A coefficient array of "p/q" strings.
pub type Elem = Vec<String>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub base: Option<u64>,
    #[serde(default)]
    pub radicands: Vec<Elem>,
}

impl FieldSpec {
    pub fn of(e: &ExtField) -> Self {
        FieldSpec { base: e.base().m(), radicands: e.radicands().iter().map(|r| r.to_strings()).collect() }
    }

    pub fn build(&self) -> Result<ExtField> {
        let f = BaseField::from_option(self.base)?;
        let rs = self.radicands.iter().map(|r| f.parse_elem(r)).collect::<Result<Vec<_>>>()?;
        ExtField::new(f, rs)
    }
}

pub fn elem_to_json(x: &FieldElem) -> Elem {
    x.to_strings()
}

pub fn elem_from_json(e: &ExtField, c: &[String]) -> Result<FieldElem> {
    let bd = e.base().degree();
    // Over a quadratic base, a coefficient array of length 2^k holds rational parts only.
    let chunk = if c.len() == e.degree() * bd { bd } else { 1 };
    if c.len() != e.degree() * chunk {
        return Err(Error::Parse(format!("element needs {} coefficients, got {}", e.degree() * bd, c.len())));
    }
    let coeffs = c.chunks(chunk).map(|p| e.base().parse_elem(p)).collect::<Result<Vec<_>>>()?;
    e.from_coeffs(coeffs)
}

pub fn base_from_json(f: BaseField, c: &[String]) -> Result<BaseElem> {
    f.parse_elem(c)
}

pub type MatrixJson = Vec<Vec<Elem>>;

pub fn matrix_to_json(m: &FMatrix) -> MatrixJson {
    (0..m.rows()).map(|i| m.row(i).iter().map(elem_to_json).collect()).collect()
}

pub fn matrix_from_json(e: &ExtField, m: &MatrixJson) -> Result<FMatrix> {
    if m.is_empty() || m.iter().any(|r| r.len() != m[0].len()) {
        return Err(Error::Parse("matrix rows must be nonempty and of equal length".into()));
    }
    let rows = m.iter().map(|r| r.iter().map(|x| elem_from_json(e, x)).collect::<Result<Vec<_>>>()).collect::<Result<Vec<_>>>()?;
    Ok(Matrix::from_rows(rows))
}

pub fn bmatrix_to_json(m: &BMatrix) -> MatrixJson {
    (0..m.rows()).map(|i| m.row(i).iter().map(|x| x.to_strings()).collect()).collect()
}

pub fn bmatrix_from_json(f: BaseField, m: &MatrixJson) -> Result<BMatrix> {
    if m.is_empty() || m.iter().any(|r| r.len() != m[0].len()) {
        return Err(Error::Parse("matrix rows must be nonempty and of equal length".into()));
    }
    let rows = m.iter().map(|r| r.iter().map(|x| f.parse_elem(x)).collect::<Result<Vec<_>>>()).collect::<Result<Vec<_>>>()?;
    Ok(Matrix::from_rows(rows))
}

/// A symmetric matrix over the base field.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormFile {
    pub field: FieldSpec,
    pub matrix: MatrixJson,
}

impl FormFile {
    pub fn of(q: &QuadraticForm) -> Self {
        FormFile { field: FieldSpec { base: q.field().m(), radicands: vec![] }, matrix: bmatrix_to_json(q.matrix()) }
    }

    pub fn build(&self) -> Result<QuadraticForm> {
        if !self.field.radicands.is_empty() {
            return Err(Error::Parse("quadratic forms live over the base field".into()));
        }
        let f = BaseField::from_option(self.field.base)?;
        QuadraticForm::new(f, bmatrix_from_json(f, &self.matrix)?)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlaceJson {
    pub base: usize,
    #[serde(default)]
    pub roots: Vec<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixtureFile {
    pub genus: usize,
    pub h: usize,
    pub field: FieldSpec,
    pub generators: Vec<MatrixJson>,
    /// SL₂ images whose τ_n-lift gives `generators`; enables the τ eigenbasis.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sl2_generators: Option<Vec<MatrixJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub multipliers: Option<Vec<Elem>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub place: Option<PlaceJson>,
}

impl FixtureFile {
    pub fn of(rep: &SurfaceRep, multipliers: Option<&[FieldElem]>) -> Self {
        FixtureFile {
            genus: rep.pres.genus,
            h: rep.pres.h,
            field: FieldSpec::of(&rep.field),
            generators: rep.images.iter().map(matrix_to_json).collect(),
            sl2_generators: rep.sl2.as_ref().map(|s| s.images.iter().map(matrix_to_json).collect()),
            multipliers: multipliers.map(|m| m.iter().map(elem_to_json).collect()),
            place: rep.place.as_ref().map(|p| PlaceJson { base: p.base, roots: p.roots.clone() }),
        }
    }

    /// The representation; when SL₂ images are given, the τ_n-lift must agree with the generators on the C side.
    pub fn build(&self) -> Result<SurfaceRep> {
        let e = self.field.build()?;
        let pres = SurfacePresentation::new(self.genus, self.h)?;
        let images = self.generators.iter().map(|m| matrix_from_json(&e, m)).collect::<Result<Vec<_>>>()?;
        let mut rep = rep_from_images(pres, images)?;
        if let Some(p) = &self.place {
            let place = RealPlace { base: p.base, roots: p.roots.clone() };
            if !e.real_places().contains(&place) {
                return Err(Error::ComplexPlace);
            }
            rep.place = Some(place);
        }
        if let Some(s) = &self.sl2_generators {
            let src = rep_from_images(pres, s.iter().map(|m| matrix_from_json(&e, m)).collect::<Result<Vec<_>>>()?)?;
            let lift = fuchsian_lift(rep.n, &src)?;
            if lift.images[..2 * pres.h] != rep.images[..2 * pres.h] {
                return Err(Error::Parse("sl2_generators do not lift to the C-side generators".into()));
            }
            rep.sl2 = Some(Box::new(src));
        }
        Ok(rep)
    }

    pub fn multipliers(&self, e: &ExtField) -> Result<Option<Vec<FieldElem>>> {
        self.multipliers.as_ref().map(|m| m.iter().map(|x| elem_from_json(e, x)).collect()).transpose()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignatureJson {
    pub place: String,
    pub pos: usize,
    pub neg: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HasseJson {
    pub place: String,
    pub sign: i32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantsJson {
    pub rank: usize,
    pub disc: Elem,
    pub signatures: Vec<SignatureJson>,
    pub hasse: Vec<HasseJson>,
}

impl InvariantsJson {
    pub fn of(inv: &FormInvariants) -> Self {
        InvariantsJson {
            rank: inv.rank,
            disc: inv.disc.to_strings(),
            signatures: inv.signatures.iter().map(|s| SignatureJson { place: format!("inf{}", s.place), pos: s.pos, neg: s.neg }).collect(),
            hasse: inv.hasse.iter().map(|(p, s)| HasseJson { place: p.to_string(), sign: *s }).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bend::fixtures::lifted;

    #[test]
    fn field_round_trip() {
        let f = BaseField::quadratic(2).unwrap();
        let e = ExtField::new(f, vec![f.int(3), f.elem(crate::numfield::rat::q(1), crate::numfield::rat::q(1))]).unwrap();
        let spec = FieldSpec::of(&e);
        let json = serde_json::to_string(&spec).unwrap();
        assert_eq!(serde_json::from_str::<FieldSpec>(&json).unwrap().build().unwrap(), e);
        let x = &e.sqrt_radicand(0) + &e.from_base(&f.sqrt_m());
        assert_eq!(elem_from_json(&e, &elem_to_json(&x)).unwrap(), x);
    }

    #[test]
    fn fixture_round_trip() {
        let rep = lifted(4);
        let file = FixtureFile::of(&rep, None);
        let json = serde_json::to_string_pretty(&file).unwrap();
        let back: FixtureFile = serde_json::from_str(&json).unwrap();
        assert_eq!(back.build().unwrap(), rep);
    }

    #[test]
    fn malformed_inputs() {
        let e = ExtField::rationals();
        assert!(matches!(elem_from_json(&e, &["1/0".into()]), Err(Error::Parse(_)) | Err(Error::DivisionByZero)));
        assert!(matrix_from_json(&e, &vec![vec![vec!["1".into()]], vec![]]).is_err());
    }
}

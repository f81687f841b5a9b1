//! Reduction of tower elements modulo a prime of the base.

use super::finite::{Fq, FqElem};
use super::prime::{PrimeIdeal, PrimeKind};
use super::tower::{ExtField, FieldElem};
use crate::error::{Error, Result};

/// A ring map from the 𝔭-integral part of a tower onto a finite field.
#[derive(Clone, Debug)]
pub struct TowerReduction {
    pub prime: PrimeIdeal,
    pub field: Fq,
    sqrt_m: FqElem,
    roots: Vec<FqElem>,
}

impl TowerReduction {
    /// Chooses square roots of the radicand images, passing to F_{p²} when
    /// `allow_extension` is set and the residue field is prime.
    pub fn new(tower: &ExtField, prime: PrimeIdeal, allow_extension: bool) -> Result<Self> {
        let base_fq = prime.residue_field()?;
        let mut red = TowerReduction { prime, field: base_fq, sqrt_m: prime.sqrt_m_image()?, roots: vec![] };
        let images = tower.radicands().iter().map(|r| prime.reduce(r)).collect::<Result<Vec<_>>>()?;
        let needs_ext = images.iter().any(|x| base_fq.sqrt(x).is_none());
        if needs_ext {
            if !allow_extension || base_fq.degree() == 2 || prime.p == 2 {
                return Err(Error::IrreducibleRadicand);
            }
            let big = Fq::quadratic(prime.p)?;
            red.field = big;
            red.sqrt_m = embed(&red.sqrt_m, big);
        }
        for x in images {
            let x = embed(&x, red.field);
            red.roots.push(red.field.sqrt(&x).ok_or(Error::IrreducibleRadicand)?);
        }
        Ok(red)
    }

    pub fn root_images(&self) -> &[FqElem] {
        &self.roots
    }

    pub fn reduce(&self, x: &FieldElem) -> Result<FqElem> {
        if x.field().k() != self.roots.len() {
            return Err(Error::FieldMismatch);
        }
        let f = self.field;
        let mut acc = f.zero();
        let bad = || Error::BadReduction(format!("{x} is not integral at {}", self.prime));
        for (s, c) in x.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if self.prime.p == 2 && self.prime.m % 4 == 1 && self.prime.kind != PrimeKind::Rational {
                return Err(Error::BadReduction("naive order is not maximal at 2".into()));
            }
            let re = super::rat::rat_mod(c.re(), self.prime.p).ok_or_else(bad)?;
            let im = super::rat::rat_mod(c.im(), self.prime.p).ok_or_else(bad)?;
            let mut t = f.int(re as i64) + (f.int(im as i64) * self.sqrt_m);
            for (i, r) in self.roots.iter().enumerate() {
                if s >> i & 1 == 1 {
                    t = &t * r;
                }
            }
            acc = acc + t;
        }
        Ok(acc)
    }
}

fn embed(x: &FqElem, f: Fq) -> FqElem {
    if x.field() == f {
        return *x;
    }
    let (a, b) = x.parts();
    assert_eq!(b, 0, "only prime-field elements embed");
    f.elem(a, 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numfield::base::BaseField;
    use crate::numfield::prime::prime_split;

    #[test]
    fn reduction_is_multiplicative() {
        let b = BaseField::rationals();
        let e = ExtField::new(b, vec![b.int(2), b.int(3)]).unwrap();
        let p = prime_split(b, 5).unwrap()[0];
        assert_eq!(TowerReduction::new(&e, p, false).unwrap_err(), Error::IrreducibleRadicand);
        let red = TowerReduction::new(&e, p, true).unwrap();
        let x = &e.int(3) + &e.basis(3);
        let y = &e.sqrt_radicand(0) - &e.int(7);
        assert_eq!(red.reduce(&(&x * &y)).unwrap(), red.reduce(&x).unwrap() * red.reduce(&y).unwrap());
        let r = red.reduce(&e.sqrt_radicand(0)).unwrap();
        assert_eq!(r * r, red.field.int(2));
    }
}

//! Real embeddings of a tower and exact signs by interval refinement.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::base::BaseElem;
use super::rat::Q;
use super::tower::{ExtField, FieldElem};
use crate::error::{Error, Result};

/// A real embedding: which root √m goes to (index into base places) and a sign per √r_i.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RealPlace {
    pub base: usize,
    /// true sends √r_i to the positive real root.
    pub roots: Vec<bool>,
}

impl RealPlace {
    pub fn base_only(base: usize) -> Self {
        RealPlace { base, roots: vec![] }
    }
}

impl fmt::Display for RealPlace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "real{}", self.base)?;
        for &r in &self.roots {
            write!(f, "{}", if r { '+' } else { '-' })?;
        }
        Ok(())
    }
}

impl ExtField {
    /// All real embeddings of the tower (possibly none).
    pub fn real_places(&self) -> Vec<RealPlace> {
        let mut out = Vec::new();
        for b in self.base().real_places() {
            if self.radicands().iter().any(|r| r.sign_at(b) < 0) {
                continue;
            }
            for s in 0..self.degree() {
                out.push(RealPlace { base: b, roots: (0..self.k()).map(|i| s >> i & 1 == 0).collect() });
            }
        }
        out
    }
}

#[derive(Clone, Debug)]
struct Interval {
    lo: Q,
    hi: Q,
}

impl Interval {
    fn point(x: Q) -> Self {
        Interval { lo: x.clone(), hi: x }
    }

    fn add(&self, o: &Interval) -> Interval {
        Interval { lo: &self.lo + &o.lo, hi: &self.hi + &o.hi }
    }

    fn neg(&self) -> Interval {
        Interval { lo: -&self.hi, hi: -&self.lo }
    }

    fn mul(&self, o: &Interval) -> Interval {
        let c = [&self.lo * &o.lo, &self.lo * &o.hi, &self.hi * &o.lo, &self.hi * &o.hi];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        Interval { lo, hi }
    }

    /// Outward rounding to a dyadic grid keeps numerators small.
    fn round(&self, bits: u32) -> Interval {
        let s = BigInt::one() << bits;
        let lo = (&self.lo * Q::from_integer(s.clone())).floor() / Q::from_integer(s.clone());
        let hi = (&self.hi * Q::from_integer(s.clone())).ceil() / Q::from_integer(s);
        Interval { lo, hi }
    }

    /// Enclosure of √[lo,hi] for lo ≥ 0.
    fn sqrt(&self, bits: u32) -> Interval {
        let s = BigInt::one() << bits;
        let s2 = Q::from_integer(&s * &s);
        let floor_sqrt = |x: &Q| -> BigInt {
            let t = (x * &s2).floor().to_integer();
            if t.is_negative() {
                BigInt::zero()
            } else {
                t.sqrt()
            }
        };
        let lo = Q::new(floor_sqrt(&self.lo), s.clone());
        let hi = Q::new(floor_sqrt(&self.hi) + 1, s);
        Interval { lo, hi }
    }

    fn sign(&self) -> Option<i32> {
        if self.lo.is_positive() {
            Some(1)
        } else if self.hi.is_negative() {
            Some(-1)
        } else {
            None
        }
    }
}

fn sqrt_m_interval(m: u64, negative: bool, bits: u32) -> Interval {
    let i = Interval::point(Q::from_integer(BigInt::from(m))).sqrt(bits);
    if negative {
        i.neg()
    } else {
        i
    }
}

fn base_interval(x: &BaseElem, sm: &Interval) -> Interval {
    let re = Interval::point(x.re().clone());
    if x.im().is_zero() {
        re
    } else {
        re.add(&Interval::point(x.im().clone()).mul(sm))
    }
}

/// Sign of x at a real place, computed by interval enclosures with doubling precision.
pub fn sign_at(x: &FieldElem, v: &RealPlace) -> Result<i32> {
    let f = x.field();
    if v.roots.len() != f.k() || v.base >= f.base().degree() {
        return Err(Error::FieldMismatch);
    }
    if f.radicands().iter().any(|r| r.sign_at(v.base) < 0) {
        return Err(Error::ComplexPlace);
    }
    if x.is_zero() {
        return Ok(0);
    }
    let m = f.base().m().unwrap_or(0);
    let mut bits = 32u32;
    loop {
        let sm = sqrt_m_interval(m, v.base == 1, bits);
        let roots: Vec<Interval> = f
            .radicands()
            .iter()
            .zip(&v.roots)
            .map(|(r, &pos)| {
                let mut ri = base_interval(r, &sm);
                if ri.lo.is_negative() {
                    ri.lo = Q::zero();
                }
                let s = ri.sqrt(bits);
                if pos {
                    s
                } else {
                    s.neg()
                }
            })
            .collect();
        let mut acc = Interval::point(Q::zero());
        for (s, c) in x.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mut t = base_interval(c, &sm);
            for (i, ri) in roots.iter().enumerate() {
                if s >> i & 1 == 1 {
                    t = t.mul(ri);
                }
            }
            acc = acc.add(&t).round(2 * bits);
        }
        if let Some(s) = acc.sign() {
            return Ok(s);
        }
        bits = bits.checked_mul(2).expect("sign refinement diverged on a nonzero element");
    }
}

impl FieldElem {
    pub fn sign_at(&self, v: &RealPlace) -> Result<i32> {
        sign_at(self, v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numfield::base::BaseField;
    use crate::numfield::rat::q;

    #[test]
    fn signs_in_quadratic_base() {
        let b = BaseField::quadratic(2).unwrap();
        let e = ExtField::over(b);
        let x = e.from_base(&b.elem(q(-1), q(1)));
        assert_eq!(x.sign_at(&RealPlace::base_only(0)).unwrap(), 1);
        assert_eq!(x.sign_at(&RealPlace::base_only(1)).unwrap(), -1);
        let y = -&x;
        assert_eq!(y.sign_at(&RealPlace::base_only(0)).unwrap(), -1);
        assert_eq!(e.zero().sign_at(&RealPlace::base_only(0)).unwrap(), 0);
    }

    #[test]
    fn signs_in_tower() {
        let b = BaseField::rationals();
        let e = ExtField::new(b, vec![b.int(2), b.int(3)]).unwrap();
        // √3 - √2 > 0 at (+,+), < 0 at (+,-)... and the near-cancellation 5 - 2√6 ≈ 0.101
        let x = &e.sqrt_radicand(1) - &e.sqrt_radicand(0);
        let places = e.real_places();
        assert_eq!(places.len(), 4);
        assert_eq!(x.sign_at(&places[0]).unwrap(), 1);
        let y = &e.int(5) - &(&e.int(2) * &e.basis(3));
        assert_eq!(y.sign_at(&places[0]).unwrap(), 1);
        let neg = ExtField::new(b, vec![b.int(-1)]).unwrap();
        assert!(neg.real_places().is_empty());
        assert_eq!(neg.one().sign_at(&RealPlace { base: 0, roots: vec![true] }).unwrap_err(), Error::ComplexPlace);
    }
}

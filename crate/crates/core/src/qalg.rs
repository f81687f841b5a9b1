//! Quaternion algebras (a,b)_F, the standard order, the 2×2 splitting embedding,
//! and local Hilbert symbols.

use std::fmt;

use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::FMatrix;
use crate::numfield::rat::{prime_divisors, rat_val};
use crate::numfield::{prime_split, BaseElem, BaseField, ExtField, FieldElem, Op, PrimeIdeal, PrimeKind, Q};

/// A place of the base field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Place {
    /// Real embedding by index (0: √m > 0).
    Real(usize),
    Finite(PrimeIdeal),
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Real(i) => write!(f, "inf{i}"),
            Place::Finite(p) => write!(f, "{p}"),
        }
    }
}

impl Place {
    pub fn is_real(&self) -> bool {
        matches!(self, Place::Real(_))
    }
}

fn powi(x: &BaseElem, e: i64) -> BaseElem {
    if e >= 0 {
        x.pow(e as u32)
    } else {
        x.inv().expect("nonzero").pow((-e) as u32)
    }
}

/// u mod 8 for a rational 2-adic unit.
fn unit_mod8(u: &Q) -> u64 {
    let n = crate::numfield::rat::mod_u64(u.numer(), 8);
    let d = crate::numfield::rat::mod_u64(u.denom(), 8);
    // odd d is its own inverse mod 8
    n * d % 8
}

fn dyadic_symbol_q(a: &Q, b: &Q) -> i32 {
    let al = rat_val(a, 2);
    let be = rat_val(b, 2);
    let two = Q::from_integer(2.into());
    let pw = |e: i64| if e >= 0 { num_traits::pow(two.clone(), e as usize) } else { Q::one() / num_traits::pow(two.clone(), (-e) as usize) };
    let u = unit_mod8(&(a / pw(al)));
    let v = unit_mod8(&(b / pw(be)));
    let eps = |x: u64| ((x - 1) / 2) % 2;
    let omega = |x: u64| ((x * x - 1) / 8) % 2;
    let e = eps(u) * eps(v) + (al.rem_euclid(2) as u64) * omega(v) + (be.rem_euclid(2) as u64) * omega(u);
    if e % 2 == 0 {
        1
    } else {
        -1
    }
}

fn tame_symbol(a: &BaseElem, b: &BaseElem, p: &PrimeIdeal) -> Result<i32> {
    let al = p.valuation(a);
    let be = p.valuation(b);
    let sign = if (al * be) % 2 == 0 { 1 } else { -1 };
    let x = (&powi(a, be) * &powi(b, -al)).scale(&Q::from_integer(sign.into()));
    let r = p.unit_residue(&x)?;
    Ok(r.field().chi(&r))
}

/// Rational primes outside which (a,b)_P is trivially +1 (always includes 2).
pub fn symbol_support(a: &BaseElem, b: &BaseElem) -> Result<Vec<u64>> {
    let mut ps = vec![2u64];
    for x in [a, b] {
        let n = x.norm();
        ps.extend(prime_divisors(n.numer())?);
        ps.extend(prime_divisors(n.denom())?);
    }
    ps.sort_unstable();
    ps.dedup();
    Ok(ps)
}

/// All places of `f` at which (a,b) may be nontrivial: real places, then primes over the support.
pub fn relevant_places(f: BaseField, a: &BaseElem, b: &BaseElem) -> Result<Vec<Place>> {
    let mut out: Vec<Place> = f.real_places().into_iter().map(Place::Real).collect();
    for p in symbol_support(a, b)? {
        for pr in prime_split(f, p)? {
            out.push(Place::Finite(pr));
        }
    }
    Ok(out)
}

/// (a,b)_v ∈ {±1}: +1 iff the quaternion algebra splits over the completion at v.
pub fn hilbert_symbol(a: &BaseElem, b: &BaseElem, place: &Place) -> Result<i32> {
    if a.is_zero() || b.is_zero() {
        return Err(Error::ZeroArgument);
    }
    match place {
        Place::Real(i) => Ok(if a.sign_at(*i) < 0 && b.sign_at(*i) < 0 { -1 } else { 1 }),
        Place::Finite(p) if !p.is_dyadic() => tame_symbol(a, b, p),
        Place::Finite(p) if p.kind == PrimeKind::Rational => {
            if !a.is_rational() || !b.is_rational() {
                return Err(Error::FieldMismatch);
            }
            Ok(dyadic_symbol_q(a.re(), b.re()))
        }
        Place::Finite(p) => {
            if matches!(p.kind, PrimeKind::Split { .. }) {
                return Err(Error::DyadicAmbiguity);
            }
            // the unique even prime: product formula over everything else
            let f = p.base_field();
            let mut prod = 1;
            for v in relevant_places(f, a, b)? {
                if v != *place {
                    prod *= hilbert_symbol(a, b, &v)?;
                }
            }
            Ok(prod)
        }
    }
}

/// Hilbert symbols at every relevant place, with the ramified subset.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalSymbols {
    pub symbols: Vec<(Place, i32)>,
    /// The place whose symbol was deduced from the product formula, if any.
    pub inferred: Option<Place>,
}

impl LocalSymbols {
    pub fn ramified(&self) -> Vec<Place> {
        self.symbols.iter().filter(|(_, s)| *s == -1).map(|(p, _)| *p).collect()
    }
}

pub fn local_symbols(f: BaseField, a: &BaseElem, b: &BaseElem) -> Result<LocalSymbols> {
    let places = relevant_places(f, a, b)?;
    let mut symbols = Vec::with_capacity(places.len());
    let mut inferred = None;
    for v in places {
        if let Place::Finite(p) = v {
            if p.is_dyadic() && p.kind != PrimeKind::Rational {
                inferred = Some(v);
            }
        }
        symbols.push((v, hilbert_symbol(a, b, &v)?));
    }
    let parity: i32 = symbols.iter().map(|(_, s)| s).product();
    debug_assert_eq!(parity, 1, "reciprocity failed for ({a},{b})");
    Ok(LocalSymbols { symbols, inferred })
}

/// The quaternion algebra (a,b)_F with i² = a, j² = b, ij = −ji.
#[derive(Clone, Debug)]
pub struct QuatAlgebra {
    f: BaseField,
    a: BaseElem,
    b: BaseElem,
    tower: ExtField,
    ra: FieldElem,
    rb: FieldElem,
}

impl PartialEq for QuatAlgebra {
    fn eq(&self, o: &Self) -> bool {
        self.f == o.f && self.a == o.a && self.b == o.b
    }
}

impl fmt::Display for QuatAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})_{}", self.a, self.b, self.f)
    }
}

impl QuatAlgebra {
    pub fn new(f: BaseField, a: BaseElem, b: BaseElem) -> Result<Self> {
        let a = f.coerce(&a)?;
        let b = f.coerce(&b)?;
        if a.is_zero() || b.is_zero() {
            return Err(Error::ZeroArgument);
        }
        let (tower, roots) = ExtField::with_roots(f, &[a.clone(), b.clone()])?;
        let [ra, rb]: [FieldElem; 2] = roots.try_into().unwrap();
        Ok(QuatAlgebra { f, a, b, tower, ra, rb })
    }

    pub fn base(&self) -> BaseField {
        self.f
    }

    pub fn a(&self) -> &BaseElem {
        &self.a
    }

    pub fn b(&self) -> &BaseElem {
        &self.b
    }

    /// F(√a,√b) with the chosen roots.
    pub fn splitting_tower(&self) -> (&ExtField, &FieldElem, &FieldElem) {
        (&self.tower, &self.ra, &self.rb)
    }

    pub fn elem(&self, x: [BaseElem; 4]) -> QuatElem {
        QuatElem { alg: self.clone(), x: x.map(|c| self.f.coerce(&c).expect("base field")) }
    }

    pub fn from_ints(&self, x: [i64; 4]) -> QuatElem {
        self.elem(x.map(|c| self.f.int(c)))
    }

    pub fn one(&self) -> QuatElem {
        self.from_ints([1, 0, 0, 0])
    }

    pub fn zero(&self) -> QuatElem {
        self.from_ints([0, 0, 0, 0])
    }

    pub fn local_symbols(&self) -> Result<LocalSymbols> {
        local_symbols(self.f, &self.a, &self.b)
    }

    /// Places where the algebra does not split; of even cardinality.
    pub fn ramification_set(&self) -> Result<Vec<Place>> {
        Ok(self.local_symbols()?.ramified())
    }

    pub fn is_split_at(&self, v: &Place) -> Result<bool> {
        Ok(hilbert_symbol(&self.a, &self.b, v)? == 1)
    }

    /// Inverse of the 2×2 embedding, when the matrix lies in its image.
    pub fn from_matrix(&self, m: &FMatrix) -> Option<QuatElem> {
        let e = &self.tower;
        let lift = |x: &FieldElem| e.lift(x).ok();
        let (m00, m01, m10, m11) = (lift(m.get(0, 0))?, lift(m.get(0, 1))?, lift(m.get(1, 0))?, lift(m.get(1, 1))?);
        let half = e.rat(Q::new(1.into(), 2.into()));
        let x0 = &(&m00 + &m11) * &half;
        let x1 = &(&(&m00 - &m11) * &half) / &self.ra;
        let x2 = &(&(&m01 + &m10) * &half) / &self.rb;
        let x3 = &(&(&m01 - &m10) * &half) / &(&self.ra * &self.rb);
        let q = self.elem([x0.as_base()?, x1.as_base()?, x2.as_base()?, x3.as_base()?]);
        (q.embed_2x2() == *m).then_some(q)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuatElem {
    alg: QuatAlgebra,
    x: [BaseElem; 4],
}

impl fmt::Display for QuatElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + ({})i + ({})j + ({})ij", self.x[0], self.x[1], self.x[2], self.x[3])
    }
}

impl QuatElem {
    pub fn algebra(&self) -> &QuatAlgebra {
        &self.alg
    }

    pub fn coeffs(&self) -> &[BaseElem; 4] {
        &self.x
    }

    pub fn arith(&self, o: &QuatElem, op: Op) -> Result<QuatElem> {
        if self.alg != o.alg {
            return Err(Error::AlgebraMismatch);
        }
        let (x, y) = (&self.x, &o.x);
        let out = match op {
            Op::Add => [&x[0] + &y[0], &x[1] + &y[1], &x[2] + &y[2], &x[3] + &y[3]],
            Op::Sub => [&x[0] - &y[0], &x[1] - &y[1], &x[2] - &y[2], &x[3] - &y[3]],
            Op::Mul => {
                let (a, b) = (&self.alg.a, &self.alg.b);
                let ab = a * b;
                [
                    &(&(&x[0] * &y[0]) + &(a * &(&x[1] * &y[1]))) + &(&(b * &(&x[2] * &y[2])) - &(&ab * &(&x[3] * &y[3]))),
                    &(&(&x[0] * &y[1]) + &(&x[1] * &y[0])) + &(b * &(&(&x[3] * &y[2]) - &(&x[2] * &y[3]))),
                    &(&(&x[0] * &y[2]) + &(&x[2] * &y[0])) + &(a * &(&(&x[1] * &y[3]) - &(&x[3] * &y[1]))),
                    &(&(&x[0] * &y[3]) + &(&x[3] * &y[0])) + &(&(&x[1] * &y[2]) - &(&x[2] * &y[1])),
                ]
            }
            Op::Div => {
                let n = o.nrd().inv().ok_or(Error::DivisionByZero)?;
                let inv = o.conj().scale(&n);
                return self.arith(&inv, Op::Mul);
            }
        };
        Ok(QuatElem { alg: self.alg.clone(), x: out })
    }

    pub fn mul(&self, o: &QuatElem) -> Result<QuatElem> {
        self.arith(o, Op::Mul)
    }

    pub fn scale(&self, c: &BaseElem) -> QuatElem {
        QuatElem { alg: self.alg.clone(), x: self.x.clone().map(|v| &v * c) }
    }

    pub fn conj(&self) -> QuatElem {
        let [x0, x1, x2, x3] = self.x.clone();
        QuatElem { alg: self.alg.clone(), x: [x0, -x1, -x2, -x3] }
    }

    /// x x̄ = x₀² − a x₁² − b x₂² + ab x₃².
    pub fn nrd(&self) -> BaseElem {
        let (a, b) = (&self.alg.a, &self.alg.b);
        let x = &self.x;
        let sq = |v: &BaseElem| v * v;
        &(&sq(&x[0]) - &(a * &sq(&x[1]))) + &(&(&(a * b) * &sq(&x[3])) - &(b * &sq(&x[2])))
    }

    pub fn trd(&self) -> BaseElem {
        &self.x[0] + &self.x[0]
    }

    pub fn is_zero(&self) -> bool {
        self.x.iter().all(|c| c.is_zero())
    }

    /// [[x₀+√a x₁, √b x₂+√ab x₃], [√b x₂−√ab x₃, x₀−√a x₁]] over F(√a,√b).
    pub fn embed_2x2(&self) -> FMatrix {
        let (e, ra, rb) = self.alg.splitting_tower();
        let rab = ra * rb;
        let c: Vec<FieldElem> = self.x.iter().map(|v| e.from_base(v)).collect();
        let p = &c[0] + &(ra * &c[1]);
        let m = &c[0] - &(ra * &c[1]);
        let u = &(rb * &c[2]) + &(&rab * &c[3]);
        let w = &(rb * &c[2]) - &(&rab * &c[3]);
        FMatrix::from_rows(vec![vec![p, u], vec![w, m]])
    }

    /// Membership in the standard order Z_F⟨1,i,j,ij⟩ (naive integrality of coordinates).
    pub fn order_contains(&self) -> bool {
        self.x.iter().all(|c| c.is_integral())
    }

    pub fn is_norm_one(&self) -> bool {
        self.nrd().is_one()
    }
}

/// Integrality of the algebra parameters, required for the standard order.
pub fn has_standard_order(alg: &QuatAlgebra) -> bool {
    alg.a.is_integral() && alg.b.is_integral()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numfield::rat::{q, qf};

    fn rq(n: i64) -> Place {
        Place::Finite(prime_split(BaseField::rationals(), n as u64).unwrap()[0])
    }

    #[test]
    fn norms() {
        let f = BaseField::rationals();
        let h = QuatAlgebra::new(f, f.int(-1), f.int(-1)).unwrap();
        assert_eq!(h.from_ints([1, 1, 1, 0]).nrd(), f.int(3));
        let a = QuatAlgebra::new(f, f.int(2), f.int(3)).unwrap();
        assert_eq!(a.from_ints([0, 1, 0, 0]).nrd(), f.int(-2));
        let x = a.from_ints([5, 2, 0, 2]);
        assert_eq!(x.nrd(), f.int(41));
        assert!(!x.is_norm_one());
        assert!(a.one().order_contains() && a.one().is_norm_one());
        assert!(!a.elem([f.zero(), f.rat(qf(1, 2)), f.zero(), f.zero()]).order_contains());
    }

    #[test]
    fn embedding_roundtrip() {
        let f = BaseField::rationals();
        let a = QuatAlgebra::new(f, f.int(2), f.int(3)).unwrap();
        let i = a.from_ints([0, 1, 0, 0]);
        let ei = i.embed_2x2();
        assert_eq!(&ei * &ei, FMatrix::scalar(2, &ei.get(0, 0).field().int(2)));
        let x = a.from_ints([1, 2, -1, 3]);
        let y = a.from_ints([0, 1, 5, -2]);
        assert_eq!(x.mul(&y).unwrap().embed_2x2(), &x.embed_2x2() * &y.embed_2x2());
        assert_eq!(a.from_matrix(&x.embed_2x2()), Some(x.clone()));
        assert_eq!(x.embed_2x2().det().as_base(), Some(x.nrd()));
    }

    #[test]
    fn symbols_over_q() {
        let f = BaseField::rationals();
        assert_eq!(hilbert_symbol(&f.int(-1), &f.int(-1), &Place::Real(0)).unwrap(), -1);
        assert_eq!(hilbert_symbol(&f.int(2), &f.int(5), &rq(5)).unwrap(), -1);
        assert_eq!(hilbert_symbol(&f.int(2), &f.int(5), &rq(2)).unwrap(), -1);
        assert_eq!(hilbert_symbol(&f.int(3), &f.int(7), &rq(5)).unwrap(), 1);
        let h = QuatAlgebra::new(f, f.int(-1), f.int(-1)).unwrap();
        assert_eq!(h.ramification_set().unwrap(), vec![Place::Real(0), rq(2)]);
        let s = QuatAlgebra::new(f, f.int(1), f.int(7)).unwrap();
        assert!(s.ramification_set().unwrap().is_empty());
    }

    #[test]
    fn symbols_over_q_sqrt2() {
        let f = BaseField::quadratic(2).unwrap();
        let h = QuatAlgebra::new(f, f.int(-1), f.int(-1)).unwrap();
        let ls = h.local_symbols().unwrap();
        assert!(ls.inferred.is_some());
        // both real places ramify, so the even prime does not
        assert_eq!(ls.ramified(), vec![Place::Real(0), Place::Real(1)]);
        let g = QuatAlgebra::new(f, f.int(-1), f.elem(q(1), q(-1))).unwrap();
        assert_eq!(g.ramification_set().unwrap().len() % 2, 0);
        let f17 = BaseField::quadratic(17).unwrap();
        assert_eq!(local_symbols(f17, &f17.int(-1), &f17.int(3)).unwrap_err(), Error::DyadicAmbiguity);
    }
}

//! Multiquadratic towers F(√r₁,…,√r_k) over a base field, with their Galois characters.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use super::base::{forward_owned, BaseElem, BaseField};
use super::rat::Q;
use crate::error::{Error, Result};

pub const MAX_RADICANDS: usize = 3;

struct Inner {
    base: BaseField,
    radicands: Vec<BaseElem>,
    /// prods[S] = ∏_{i∈S} r_i
    prods: Vec<BaseElem>,
}

/// Handle to a tower; cheap to clone and shareable across threads.
#[derive(Clone)]
pub struct ExtField(Arc<Inner>);

impl PartialEq for ExtField {
    fn eq(&self, o: &Self) -> bool {
        Arc::ptr_eq(&self.0, &o.0) || (self.0.base == o.0.base && self.0.radicands == o.0.radicands)
    }
}

impl Eq for ExtField {}

impl fmt::Debug for ExtField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for ExtField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.base)?;
        if !self.0.radicands.is_empty() {
            let r: Vec<String> = self.0.radicands.iter().map(|r| format!("√({r})")).collect();
            write!(f, "({})", r.join(","))?;
        }
        Ok(())
    }
}

impl ExtField {
    pub fn new(base: BaseField, radicands: Vec<BaseElem>) -> Result<Self> {
        if radicands.len() > MAX_RADICANDS {
            return Err(Error::Unsupported(format!("at most {MAX_RADICANDS} radicands")));
        }
        let radicands = radicands.iter().map(|r| base.coerce(r)).collect::<Result<Vec<_>>>()?;
        if radicands.iter().any(|r| r.is_zero()) {
            return Err(Error::ZeroRadicand);
        }
        let k = radicands.len();
        let mut prods = vec![base.one(); 1 << k];
        for s in 1..(1usize << k) {
            let i = s.trailing_zeros() as usize;
            prods[s] = &prods[s & (s - 1)] * &radicands[i];
            if base.is_square(&prods[s]) {
                return Err(Error::DependentRadicands);
            }
        }
        Ok(ExtField(Arc::new(Inner { base, radicands, prods })))
    }

    pub fn over(base: BaseField) -> Self {
        Self::new(base, vec![]).unwrap()
    }

    pub fn rationals() -> Self {
        Self::over(BaseField::rationals())
    }

    /// Smallest tower over `base` containing square roots of every element of `xs`,
    /// together with a chosen root of each.
    pub fn with_roots(base: BaseField, xs: &[BaseElem]) -> Result<(Self, Vec<FieldElem>)> {
        let xs = xs.iter().map(|x| base.coerce(x)).collect::<Result<Vec<_>>>()?;
        let mut rads: Vec<BaseElem> = Vec::new();
        // each root recorded as (base cofactor c, mask S) meaning c·√r_S
        let mut roots: Vec<(BaseElem, usize)> = Vec::new();
        for x in &xs {
            if x.is_zero() {
                return Err(Error::ZeroRadicand);
            }
            let mut found = None;
            for s in 0..(1usize << rads.len()) {
                let rs = (0..rads.len()).filter(|i| s >> i & 1 == 1).fold(base.one(), |acc, i| &acc * &rads[i]);
                // x·r_S = c² ⇒ √x = c·√r_S / r_S
                if let Some(c) = base.sqrt(&(x * &rs)) {
                    found = Some((&c / &rs, s));
                    break;
                }
            }
            match found {
                Some(r) => roots.push(r),
                None => {
                    rads.push(x.clone());
                    roots.push((base.one(), 1 << (rads.len() - 1)));
                }
            }
        }
        let field = Self::new(base, rads)?;
        let roots = roots.into_iter().map(|(c, s)| field.basis(s).scale_base(&c)).collect();
        Ok((field, roots))
    }

    /// The same tower with one more radicand appended.
    pub fn adjoin(&self, r: BaseElem) -> Result<Self> {
        let mut rads = self.0.radicands.clone();
        rads.push(r);
        Self::new(self.0.base, rads)
    }

    pub fn base(&self) -> BaseField {
        self.0.base
    }

    pub fn radicands(&self) -> &[BaseElem] {
        &self.0.radicands
    }

    pub fn k(&self) -> usize {
        self.0.radicands.len()
    }

    /// Degree over the base field.
    pub fn degree(&self) -> usize {
        1 << self.k()
    }

    pub(crate) fn prod(&self, s: usize) -> &BaseElem {
        &self.0.prods[s]
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem { f: self.clone(), c: vec![self.0.base.zero(); self.degree()] }
    }

    pub fn one(&self) -> FieldElem {
        self.from_base(&self.0.base.one())
    }

    pub fn int(&self, n: i64) -> FieldElem {
        self.from_base(&self.0.base.int(n))
    }

    pub fn rat(&self, x: Q) -> FieldElem {
        self.from_base(&self.0.base.rat(x))
    }

    pub fn from_base(&self, x: &BaseElem) -> FieldElem {
        let mut z = self.zero();
        z.c[0] = self.0.base.coerce(x).expect("base mismatch");
        z
    }

    /// The basis element √r_S.
    pub fn basis(&self, s: usize) -> FieldElem {
        let mut z = self.zero();
        z.c[s] = self.0.base.one();
        z
    }

    pub fn sqrt_radicand(&self, i: usize) -> FieldElem {
        self.basis(1 << i)
    }

    pub fn from_coeffs(&self, c: Vec<BaseElem>) -> Result<FieldElem> {
        if c.len() != self.degree() {
            return Err(Error::DimensionMismatch(format!("expected {} coefficients, got {}", self.degree(), c.len())));
        }
        let c = c.iter().map(|x| self.0.base.coerce(x)).collect::<Result<Vec<_>>>()?;
        Ok(FieldElem { f: self.clone(), c })
    }

    pub fn galois_group(&self) -> Vec<GaloisChar> {
        (0..self.degree()).map(|s| GaloisChar { flips: s as u8, k: self.k() as u8 }).collect()
    }

    pub fn identity_char(&self) -> GaloisChar {
        GaloisChar { flips: 0, k: self.k() as u8 }
    }

    /// Character negating exactly the radicands in `flips`.
    pub fn char_from_flips(&self, flips: usize) -> GaloisChar {
        assert!(flips < self.degree());
        GaloisChar { flips: flips as u8, k: self.k() as u8 }
    }

    pub fn is_subfield_of(&self, other: &ExtField) -> bool {
        self.0.base == other.0.base && self.0.radicands.iter().zip(other.0.radicands.iter()).all(|(a, b)| a == b) && self.k() <= other.k()
    }

    /// Embed an element of a prefix tower.
    pub fn lift(&self, x: &FieldElem) -> Result<FieldElem> {
        if x.f == *self {
            return Ok(x.clone());
        }
        if !x.f.is_subfield_of(self) {
            return Err(Error::FieldMismatch);
        }
        let mut z = self.zero();
        for (s, c) in x.c.iter().enumerate() {
            z.c[s] = c.clone();
        }
        Ok(z)
    }
}

/// σ ∈ Gal(E/F) as a sign vector; bit i set means √r_i ↦ −√r_i.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GaloisChar {
    flips: u8,
    k: u8,
}

impl GaloisChar {
    pub fn flips(&self) -> usize {
        self.flips as usize
    }

    pub fn k(&self) -> usize {
        self.k as usize
    }

    pub fn is_identity(&self) -> bool {
        self.flips == 0
    }

    pub fn flips_radicand(&self, i: usize) -> bool {
        self.flips >> i & 1 == 1
    }

    pub fn compose(&self, o: &GaloisChar) -> GaloisChar {
        assert_eq!(self.k, o.k);
        GaloisChar { flips: self.flips ^ o.flips, k: self.k }
    }

    /// Sign picked up by the basis element √r_S.
    pub fn sign_on(&self, s: usize) -> bool {
        (self.flips as usize & s).count_ones() % 2 == 1
    }

    pub fn parse(s: &str) -> Result<Self> {
        let mut flips = 0u8;
        for (i, ch) in s.chars().enumerate() {
            match ch {
                '+' => {}
                '-' => flips |= 1 << i,
                _ => return Err(Error::Parse(format!("bad character string '{s}'"))),
            }
        }
        let k = s.chars().count();
        if k > MAX_RADICANDS {
            return Err(Error::Parse(format!("character '{s}' too long")));
        }
        Ok(GaloisChar { flips, k: k as u8 })
    }
}

impl fmt::Display for GaloisChar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.k == 0 {
            return write!(f, "id");
        }
        for i in 0..self.k {
            write!(f, "{}", if self.flips >> i & 1 == 1 { '-' } else { '+' })?;
        }
        Ok(())
    }
}

#[derive(Clone)]
pub struct FieldElem {
    f: ExtField,
    c: Vec<BaseElem>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Op {
    Add,
    Sub,
    Mul,
    Div,
}

impl PartialEq for FieldElem {
    fn eq(&self, o: &Self) -> bool {
        self.f == o.f && self.c == o.c
    }
}

impl Eq for FieldElem {}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (s, c) in self.c.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if s == 0 {
                terms.push(format!("{c}"));
            } else {
                let r: Vec<String> = (0..self.f.k()).filter(|i| s >> i & 1 == 1).map(|i| format!("√({})", self.f.radicands()[i])).collect();
                terms.push(format!("({c}){}", r.join("")));
            }
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

impl FieldElem {
    pub fn field(&self) -> &ExtField {
        &self.f
    }

    pub fn coeffs(&self) -> &[BaseElem] {
        &self.c
    }

    pub fn coeff(&self, s: usize) -> &BaseElem {
        &self.c[s]
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.c[0].is_one() && self.c[1..].iter().all(|c| c.is_zero())
    }

    /// The element as a base-field element, if it lies there.
    pub fn as_base(&self) -> Option<BaseElem> {
        self.c[1..].iter().all(|c| c.is_zero()).then(|| self.c[0].clone())
    }

    pub fn arith(&self, o: &FieldElem, op: Op) -> Result<FieldElem> {
        if self.f != o.f {
            return Err(Error::FieldMismatch);
        }
        Ok(match op {
            Op::Add => self.add_raw(o),
            Op::Sub => self.sub_raw(o),
            Op::Mul => self.mul_raw(o),
            Op::Div => self.mul_raw(&o.inv()?),
        })
    }

    fn add_raw(&self, o: &FieldElem) -> FieldElem {
        let c = self.c.iter().zip(&o.c).map(|(a, b)| a + b).collect();
        FieldElem { f: self.f.clone(), c }
    }

    fn sub_raw(&self, o: &FieldElem) -> FieldElem {
        let c = self.c.iter().zip(&o.c).map(|(a, b)| a - b).collect();
        FieldElem { f: self.f.clone(), c }
    }

    fn mul_raw(&self, o: &FieldElem) -> FieldElem {
        let mut z = self.f.zero();
        for (s, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (t, b) in o.c.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                // √r_s √r_t = r_{s∩t} √r_{s⊕t}
                let mut p = a * b;
                if s & t != 0 {
                    p = &p * self.f.prod(s & t);
                }
                z.c[s ^ t] = &z.c[s ^ t] + &p;
            }
        }
        z
    }

    pub fn galois(&self, g: &GaloisChar) -> FieldElem {
        assert_eq!(g.k(), self.f.k(), "character for a different tower");
        let c = self.c.iter().enumerate().map(|(s, x)| if g.sign_on(s) { -x } else { x.clone() }).collect();
        FieldElem { f: self.f.clone(), c }
    }

    pub fn checked_galois(&self, g: &GaloisChar) -> Result<FieldElem> {
        if g.k() != self.f.k() {
            return Err(Error::FieldMismatch);
        }
        Ok(self.galois(g))
    }

    pub fn inv(&self) -> Result<FieldElem> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        // z ← z·σ_i(z) becomes fixed by σ_0..σ_i; after k steps it is the norm
        let mut z = self.clone();
        let mut acc = self.f.one();
        for i in 0..self.f.k() {
            let w = z.galois(&self.f.char_from_flips(1 << i));
            acc = acc.mul_raw(&w);
            z = z.mul_raw(&w);
        }
        let n = z.as_base().expect("norm lies in the base");
        Ok(acc.scale_base(&n.inv().unwrap()))
    }

    /// Norm down to the base field.
    pub fn norm(&self) -> BaseElem {
        let mut z = self.clone();
        for i in 0..self.f.k() {
            let w = z.galois(&self.f.char_from_flips(1 << i));
            z = z.mul_raw(&w);
        }
        z.as_base().expect("norm lies in the base")
    }

    pub fn scale_base(&self, x: &BaseElem) -> FieldElem {
        let c = self.c.iter().map(|c| c * x).collect();
        FieldElem { f: self.f.clone(), c }
    }

    pub fn pow(&self, e: u32) -> FieldElem {
        let mut r = self.f.one();
        let mut b = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul_raw(&b);
            }
            b = b.mul_raw(&b);
            e >>= 1;
        }
        r
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.c.iter().flat_map(|c| c.to_strings()).collect()
    }
}

fn check(a: &FieldElem, b: &FieldElem) {
    assert!(a.f == b.f, "field mismatch: {} vs {}", a.f, b.f);
}

impl Add for &FieldElem {
    type Output = FieldElem;
    fn add(self, o: &FieldElem) -> FieldElem {
        check(self, o);
        self.add_raw(o)
    }
}

impl Sub for &FieldElem {
    type Output = FieldElem;
    fn sub(self, o: &FieldElem) -> FieldElem {
        check(self, o);
        self.sub_raw(o)
    }
}

impl Mul for &FieldElem {
    type Output = FieldElem;
    fn mul(self, o: &FieldElem) -> FieldElem {
        check(self, o);
        self.mul_raw(o)
    }
}

impl Div for &FieldElem {
    type Output = FieldElem;
    fn div(self, o: &FieldElem) -> FieldElem {
        check(self, o);
        self.mul_raw(&o.inv().expect("division by zero"))
    }
}

impl Neg for &FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        FieldElem { f: self.f.clone(), c: self.c.iter().map(|c| -c).collect() }
    }
}

impl Neg for FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        -&self
    }
}

forward_owned!(FieldElem, Add add, Sub sub, Mul mul, Div div);

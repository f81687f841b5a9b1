//! The base field: Q or a real quadratic field Q(√m).

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::rat::{self, fmt_rat, parse_rat, rat_sqrt, Q};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BaseField {
    /// 0 encodes the rationals.
    m: u64,
}

impl BaseField {
    pub fn rationals() -> Self {
        BaseField { m: 0 }
    }

    pub fn quadratic(m: u64) -> Result<Self> {
        if !rat::is_squarefree(m) {
            return Err(Error::NotSquarefree(m.to_string()));
        }
        Ok(BaseField { m })
    }

    pub fn from_option(m: Option<u64>) -> Result<Self> {
        m.map_or(Ok(Self::rationals()), Self::quadratic)
    }

    pub fn m(&self) -> Option<u64> {
        (self.m != 0).then_some(self.m)
    }

    pub fn is_rationals(&self) -> bool {
        self.m == 0
    }

    pub fn degree(&self) -> usize {
        if self.m == 0 {
            1
        } else {
            2
        }
    }

    /// Real places of the base, by index: 0 sends √m to the positive root, 1 to the negative.
    pub fn real_places(&self) -> Vec<usize> {
        (0..self.degree()).collect()
    }

    pub fn zero(&self) -> BaseElem {
        BaseElem::new(self.m, Q::zero(), Q::zero())
    }

    pub fn one(&self) -> BaseElem {
        self.int(1)
    }

    pub fn int(&self, n: i64) -> BaseElem {
        BaseElem::new(self.m, rat::q(n), Q::zero())
    }

    pub fn rat(&self, x: Q) -> BaseElem {
        BaseElem::new(self.m, x, Q::zero())
    }

    /// u + v√m.
    pub fn elem(&self, u: Q, v: Q) -> BaseElem {
        assert!(self.m != 0 || v.is_zero(), "√m coefficient over Q");
        BaseElem::new(self.m, u, v)
    }

    pub fn sqrt_m(&self) -> BaseElem {
        assert!(self.m != 0);
        BaseElem::new(self.m, Q::zero(), Q::one())
    }

    /// Lift an element possibly built over Q into this field.
    pub fn coerce(&self, x: &BaseElem) -> Result<BaseElem> {
        if x.m == self.m {
            Ok(x.clone())
        } else if x.im.is_zero() {
            Ok(BaseElem::new(self.m, x.re.clone(), Q::zero()))
        } else {
            Err(Error::FieldMismatch)
        }
    }

    /// Sign-selecting element: negative exactly at the real places listed in `neg`.
    pub fn sign_selector(&self, neg: &[usize]) -> BaseElem {
        let at = |i: usize| neg.contains(&i);
        if self.m == 0 {
            return self.int(if at(0) { -1 } else { 1 });
        }
        match (at(0), at(1)) {
            (false, false) => self.one(),
            (true, true) => self.int(-1),
            // r strictly between -√m and √m, so √m - r splits the two embeddings
            (false, true) => {
                let r = self.isqrt_m_floor();
                self.elem(-rat::q(r), Q::one())
            }
            (true, false) => {
                let r = self.isqrt_m_floor();
                self.elem(rat::q(r), -Q::one())
            }
        }
    }

    fn isqrt_m_floor(&self) -> i64 {
        use num_integer::Roots;
        (self.m as i64).sqrt()
    }

    /// Exact square test with a root.
    pub fn sqrt(&self, x: &BaseElem) -> Option<BaseElem> {
        let x = self.coerce(x).ok()?;
        if x.is_zero() {
            return Some(self.zero());
        }
        if self.m == 0 || x.im.is_zero() {
            if let Some(r) = rat_sqrt(&x.re) {
                return Some(self.rat(r));
            }
            if self.m == 0 {
                return None;
            }
            // p = m v², root v√m
            let t = &x.re / rat::q(self.m as i64);
            return rat_sqrt(&t).map(|v| self.elem(Q::zero(), v));
        }
        // (u + v√m)² = p + q√m: u² + m v² = p, 2uv = q, so u² = (p ± √(p² - m q²))/2
        let m = rat::q(self.m as i64);
        let norm = &x.re * &x.re - &m * &x.im * &x.im;
        let s = rat_sqrt(&norm)?;
        let two = rat::q(2);
        for cand in [(&x.re + &s) / &two, (&x.re - &s) / &two] {
            if let Some(u) = rat_sqrt(&cand) {
                if u.is_zero() {
                    continue;
                }
                let v = &x.im / (&two * &u);
                let r = self.elem(u, v);
                if &r * &r == x {
                    return Some(r);
                }
            }
        }
        None
    }

    pub fn is_square(&self, x: &BaseElem) -> bool {
        self.sqrt(x).is_some()
    }

    pub fn parse_elem(&self, parts: &[String]) -> Result<BaseElem> {
        match parts {
            [u] => Ok(self.rat(parse_rat(u)?)),
            [u, v] => {
                let v = parse_rat(v)?;
                if self.m == 0 && !v.is_zero() {
                    return Err(Error::Parse("√m coefficient over Q".into()));
                }
                Ok(BaseElem::new(self.m, parse_rat(u)?, v))
            }
            _ => Err(Error::Parse(format!("base element needs 1 or 2 coefficients, got {}", parts.len()))),
        }
    }
}

impl fmt::Display for BaseField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.m == 0 {
            write!(f, "Q")
        } else {
            write!(f, "Q(√{})", self.m)
        }
    }
}

/// u + v√m with rational u, v. Over Q, v is always zero.
#[derive(Clone, Debug)]
pub struct BaseElem {
    m: u64,
    re: Q,
    im: Q,
}

// Rational-valued elements compare equal regardless of the field they were built in.
impl PartialEq for BaseElem {
    fn eq(&self, o: &Self) -> bool {
        self.re == o.re && self.im == o.im && (self.im.is_zero() || self.m == o.m)
    }
}

impl Eq for BaseElem {}

impl std::hash::Hash for BaseElem {
    fn hash<H: std::hash::Hasher>(&self, h: &mut H) {
        self.re.hash(h);
        self.im.hash(h);
    }
}

impl BaseElem {
    fn new(m: u64, re: Q, im: Q) -> Self {
        BaseElem { m, re, im }
    }

    pub fn field(&self) -> BaseField {
        BaseField { m: self.m }
    }

    pub fn re(&self) -> &Q {
        &self.re
    }

    pub fn im(&self) -> &Q {
        &self.im
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> BaseElem {
        BaseElem::new(self.m, self.re.clone(), -&self.im)
    }

    /// Norm to Q.
    pub fn norm(&self) -> Q {
        &self.re * &self.re - rat::q(self.m as i64) * &self.im * &self.im
    }

    pub fn inv(&self) -> Option<BaseElem> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm();
        Some(BaseElem::new(self.m, &self.re / &n, -&self.im / &n))
    }

    pub fn pow(&self, e: u32) -> BaseElem {
        let mut r = BaseElem::new(self.m, Q::one(), Q::zero());
        for _ in 0..e {
            r = &r * self;
        }
        r
    }

    pub fn scale(&self, c: &Q) -> BaseElem {
        BaseElem::new(self.m, &self.re * c, &self.im * c)
    }

    /// Exact sign of u + v√m under the real place `place` (0: √m > 0, 1: √m < 0).
    pub fn sign_at(&self, place: usize) -> i32 {
        let v = if place == 1 { -&self.im } else { self.im.clone() };
        let su = sgn(&self.re);
        let sv = sgn(&v);
        if sv == 0 {
            return su;
        }
        if su == 0 || su == sv {
            return sv;
        }
        // opposite signs: compare u² with m v²
        let d = &self.re * &self.re - rat::q(self.m as i64) * &v * &v;
        su * sgn(&d)
    }

    pub fn to_strings(&self) -> Vec<String> {
        if self.m == 0 {
            vec![fmt_rat(&self.re)]
        } else {
            vec![fmt_rat(&self.re), fmt_rat(&self.im)]
        }
    }

    /// Common denominator form (U + V√m)/D with integers.
    pub fn integral_parts(&self) -> (BigInt, BigInt, BigInt) {
        use num_integer::Integer;
        let d = self.re.denom().lcm(self.im.denom());
        let u = self.re.numer() * (&d / self.re.denom());
        let v = self.im.numer() * (&d / self.im.denom());
        (u, v, d)
    }

    pub fn is_integral(&self) -> bool {
        self.re.is_integer() && self.im.is_integer()
    }
}

fn sgn(x: &Q) -> i32 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

fn join_m(a: u64, b: u64, x: &BaseElem, y: &BaseElem) -> u64 {
    if a == b {
        a
    } else if a == 0 && x.im.is_zero() {
        b
    } else if b == 0 && y.im.is_zero() {
        a
    } else {
        panic!("base field mismatch: Q(√{a}) vs Q(√{b})")
    }
}

impl fmt::Display for BaseElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", fmt_rat(&self.re))
        } else if self.re.is_zero() {
            write!(f, "{}√{}", fmt_rat(&self.im), self.m)
        } else {
            write!(f, "{}{}{}√{}", fmt_rat(&self.re), if self.im.is_negative() { "" } else { "+" }, fmt_rat(&self.im), self.m)
        }
    }
}

impl Add for &BaseElem {
    type Output = BaseElem;
    fn add(self, o: &BaseElem) -> BaseElem {
        BaseElem::new(join_m(self.m, o.m, self, o), &self.re + &o.re, &self.im + &o.im)
    }
}

impl Sub for &BaseElem {
    type Output = BaseElem;
    fn sub(self, o: &BaseElem) -> BaseElem {
        BaseElem::new(join_m(self.m, o.m, self, o), &self.re - &o.re, &self.im - &o.im)
    }
}

impl Mul for &BaseElem {
    type Output = BaseElem;
    fn mul(self, o: &BaseElem) -> BaseElem {
        let m = join_m(self.m, o.m, self, o);
        if self.im.is_zero() {
            return BaseElem::new(m, &self.re * &o.re, &self.re * &o.im);
        }
        if o.im.is_zero() {
            return BaseElem::new(m, &self.re * &o.re, &self.im * &o.re);
        }
        let re = &self.re * &o.re + rat::q(m as i64) * &self.im * &o.im;
        let im = &self.re * &o.im + &self.im * &o.re;
        BaseElem::new(m, re, im)
    }
}

impl Div for &BaseElem {
    type Output = BaseElem;
    fn div(self, o: &BaseElem) -> BaseElem {
        self * &o.inv().expect("division by zero")
    }
}

impl Neg for &BaseElem {
    type Output = BaseElem;
    fn neg(self) -> BaseElem {
        BaseElem::new(self.m, -&self.re, -&self.im)
    }
}

impl Neg for BaseElem {
    type Output = BaseElem;
    fn neg(self) -> BaseElem {
        -&self
    }
}

macro_rules! forward_owned {
    ($t:ty, $($tr:ident $f:ident),*) => {$(
        impl $tr for $t {
            type Output = $t;
            fn $f(self, o: $t) -> $t { (&self).$f(&o) }
        }
        impl<'a> $tr<&'a $t> for $t {
            type Output = $t;
            fn $f(self, o: &'a $t) -> $t { (&self).$f(o) }
        }
    )*};
}
pub(crate) use forward_owned;

forward_owned!(BaseElem, Add add, Sub sub, Mul mul, Div div);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numfield::rat::{q, qf};

    #[test]
    fn squares_over_q() {
        let f = BaseField::rationals();
        assert_eq!(f.sqrt(&f.rat(qf(49, 4))), Some(f.rat(qf(7, 2))));
        assert!(!f.is_square(&f.int(2)));
        assert!(BaseField::quadratic(8).is_err());
    }

    #[test]
    fn squares_over_quadratic() {
        let f = BaseField::quadratic(2).unwrap();
        let x = f.elem(q(3), q(2));
        let r = f.sqrt(&x).unwrap();
        assert_eq!(&r * &r, x);
        // 2 = (√2)², 8 = (2√2)²
        assert_eq!(f.sqrt(&f.int(8)), Some(f.elem(q(0), q(2))));
        assert!(!f.is_square(&f.int(3)));
        assert!(!f.is_square(&f.elem(q(1), q(1))));
    }

    #[test]
    fn signs_and_selector() {
        let f = BaseField::quadratic(2).unwrap();
        let x = f.elem(q(1), q(-1));
        assert_eq!(x.sign_at(0), -1);
        assert_eq!(x.sign_at(1), 1);
        let l = f.sign_selector(&[1]);
        assert_eq!(l, f.elem(q(-1), q(1)));
        assert_eq!((l.sign_at(0), l.sign_at(1)), (1, -1));
        let l = f.sign_selector(&[0]);
        assert_eq!((l.sign_at(0), l.sign_at(1)), (-1, 1));
        assert_eq!(f.sign_selector(&[]), f.one());
        assert_eq!(f.sign_selector(&[0, 1]), f.int(-1));
    }
}

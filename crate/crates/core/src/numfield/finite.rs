//! Finite fields F_p and F_p[x]/(x² − r), as residue fields.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use super::rat::{is_prime, legendre};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Fq {
    pub p: u64,
    /// Non-residue r with F_q = F_p[x]/(x² − r); 0 for the prime field.
    pub nonres: u64,
}

impl Fq {
    pub fn prime(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Fq { p, nonres: 0 })
    }

    /// F_{p²} presented with the smallest quadratic non-residue.
    pub fn quadratic(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p == 2 {
            return Err(Error::EvenCharacteristic);
        }
        let r = (2..p).find(|&r| legendre(r, p) == -1).unwrap();
        Ok(Fq { p, nonres: r })
    }

    pub fn with_nonres(p: u64, r: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p == 2 || legendre(r, p) != -1 {
            return Err(Error::Unsupported(format!("{r} is not a non-residue mod {p}")));
        }
        Ok(Fq { p, nonres: r % p })
    }

    /// Field of order q, for q = p or p².
    pub fn of_order(q: u64) -> Result<Self> {
        if is_prime(q) {
            return Self::prime(q);
        }
        let r = (q as f64).sqrt().round() as u64;
        if r * r == q && is_prime(r) {
            return Self::quadratic(r);
        }
        Err(Error::Unsupported(format!("field of order {q}")))
    }

    pub fn degree(&self) -> u32 {
        if self.nonres == 0 {
            1
        } else {
            2
        }
    }

    pub fn q(&self) -> u64 {
        self.p.pow(self.degree())
    }

    pub fn zero(&self) -> FqElem {
        FqElem { f: *self, a: 0, b: 0 }
    }

    pub fn one(&self) -> FqElem {
        self.int(1)
    }

    pub fn int(&self, n: i64) -> FqElem {
        FqElem { f: *self, a: n.rem_euclid(self.p as i64) as u64, b: 0 }
    }

    pub fn elem(&self, a: u64, b: u64) -> FqElem {
        assert!(self.nonres != 0 || b == 0);
        FqElem { f: *self, a: a % self.p, b: b % self.p }
    }

    /// The generator x with x² = nonres.
    pub fn gen(&self) -> FqElem {
        assert!(self.nonres != 0);
        FqElem { f: *self, a: 0, b: 1 }
    }

    /// Elements indexed a + b·p.
    pub fn from_index(&self, i: u64) -> FqElem {
        FqElem { f: *self, a: i % self.p, b: i / self.p }
    }

    pub fn elements(&self) -> impl Iterator<Item = FqElem> + '_ {
        (0..self.q()).map(|i| self.from_index(i))
    }

    pub fn sqrt(&self, x: &FqElem) -> Option<FqElem> {
        self.elements().find(|y| y * y == *x)
    }

    /// Quadratic character: 1 on nonzero squares, -1 on non-squares, 0 at 0.
    pub fn chi(&self, x: &FqElem) -> i32 {
        if x.is_zero() {
            return 0;
        }
        let e = x.pow((self.q() - 1) / 2);
        if e.is_one() {
            1
        } else {
            -1
        }
    }
}

impl fmt::Display for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.nonres == 0 {
            write!(f, "F_{}", self.p)
        } else {
            write!(f, "F_{}[x]/(x^2-{})", self.p, self.nonres)
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FqElem {
    f: Fq,
    a: u64,
    b: u64,
}

impl FqElem {
    pub fn field(&self) -> Fq {
        self.f
    }

    pub fn parts(&self) -> (u64, u64) {
        (self.a, self.b)
    }

    pub fn index(&self) -> u64 {
        self.a + self.b * self.f.p
    }

    pub fn is_zero(&self) -> bool {
        self.a == 0 && self.b == 0
    }

    pub fn is_one(&self) -> bool {
        self.a == 1 && self.b == 0
    }

    pub fn pow(&self, mut e: u64) -> FqElem {
        let mut r = self.f.one();
        let mut b = *self;
        while e > 0 {
            if e & 1 == 1 {
                r = r * b;
            }
            b = b * b;
            e >>= 1;
        }
        r
    }

    pub fn inv(&self) -> Option<FqElem> {
        (!self.is_zero()).then(|| self.pow(self.f.q() - 2))
    }

    /// Frobenius conjugate a − b·x.
    pub fn conj(&self) -> FqElem {
        let p = self.f.p;
        FqElem { f: self.f, a: self.a, b: (p - self.b) % p }
    }
}

impl fmt::Display for FqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b == 0 {
            write!(f, "{}", self.a)
        } else {
            write!(f, "{}+{}x", self.a, self.b)
        }
    }
}

fn same(x: &FqElem, y: &FqElem) -> Fq {
    assert_eq!(x.f, y.f, "finite field mismatch");
    x.f
}

impl Add for &FqElem {
    type Output = FqElem;
    fn add(self, o: &FqElem) -> FqElem {
        let f = same(self, o);
        FqElem { f, a: (self.a + o.a) % f.p, b: (self.b + o.b) % f.p }
    }
}

impl Sub for &FqElem {
    type Output = FqElem;
    fn sub(self, o: &FqElem) -> FqElem {
        let f = same(self, o);
        FqElem { f, a: (self.a + f.p - o.a) % f.p, b: (self.b + f.p - o.b) % f.p }
    }
}

impl Mul for &FqElem {
    type Output = FqElem;
    fn mul(self, o: &FqElem) -> FqElem {
        let f = same(self, o);
        let p = f.p as u128;
        let (a, b, c, d) = (self.a as u128, self.b as u128, o.a as u128, o.b as u128);
        let re = (a * c + (b * d % p) * f.nonres as u128) % p;
        let im = (a * d + b * c) % p;
        FqElem { f, a: re as u64, b: im as u64 }
    }
}

impl Neg for &FqElem {
    type Output = FqElem;
    fn neg(self) -> FqElem {
        let p = self.f.p;
        FqElem { f: self.f, a: (p - self.a) % p, b: (p - self.b) % p }
    }
}

impl Add for FqElem {
    type Output = FqElem;
    #[allow(clippy::op_ref)]
    fn add(self, o: FqElem) -> FqElem {
        &self + &o
    }
}

impl Sub for FqElem {
    type Output = FqElem;
    #[allow(clippy::op_ref)]
    fn sub(self, o: FqElem) -> FqElem {
        &self - &o
    }
}

impl Mul for FqElem {
    type Output = FqElem;
    #[allow(clippy::op_ref)]
    fn mul(self, o: FqElem) -> FqElem {
        &self * &o
    }
}

impl Neg for FqElem {
    type Output = FqElem;
    fn neg(self) -> FqElem {
        -&self
    }
}

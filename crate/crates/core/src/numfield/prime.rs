//! Prime ideals of the base field and reduction to residue fields.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::base::{BaseElem, BaseField};
use super::finite::{Fq, FqElem};
use super::rat::{self, inv_mod, is_prime, legendre, mod_u64, rat_mod, rat_val, sqrt_mod};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PrimeKind {
    /// A rational prime (base Q).
    Rational,
    /// One of the two primes over p; √m ↦ root.
    Split { root: u64 },
    Inert,
    Ramified,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PrimeIdeal {
    pub p: u64,
    pub kind: PrimeKind,
    pub(crate) m: u64,
}

impl fmt::Display for PrimeIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            PrimeKind::Rational => write!(f, "{}", self.p),
            PrimeKind::Split { root } => write!(f, "({},√{}-{})", self.p, self.m, root),
            PrimeKind::Inert => write!(f, "({})", self.p),
            PrimeKind::Ramified => write!(f, "({},√{}-{})", self.p, self.m, self.m % self.p),
        }
    }
}

/// Primes of `f` above the rational prime `p`.
pub fn prime_split(f: BaseField, p: u64) -> Result<Vec<PrimeIdeal>> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let Some(m) = f.m() else {
        return Ok(vec![PrimeIdeal { p, kind: PrimeKind::Rational, m: 0 }]);
    };
    let mk = |kind| PrimeIdeal { p, kind, m };
    let disc = if m % 4 == 1 { m } else { 4 * m };
    if disc % p == 0 {
        return Ok(vec![mk(PrimeKind::Ramified)]);
    }
    if p == 2 {
        // m ≡ 1 mod 4 here
        return Ok(if m % 8 == 1 {
            vec![mk(PrimeKind::Split { root: 1 }), mk(PrimeKind::Split { root: 1 })]
        } else {
            vec![mk(PrimeKind::Inert)]
        });
    }
    match legendre(m, p) {
        1 => {
            let r = sqrt_mod(m, p).unwrap();
            let mut roots = [r, p - r];
            roots.sort_unstable();
            Ok(roots.iter().map(|&root| mk(PrimeKind::Split { root })).collect())
        }
        _ => Ok(vec![mk(PrimeKind::Inert)]),
    }
}

impl PrimeIdeal {
    pub fn is_ramified(&self) -> bool {
        self.kind == PrimeKind::Ramified
    }

    pub fn residue_degree(&self) -> u32 {
        if self.kind == PrimeKind::Inert {
            2
        } else {
            1
        }
    }

    pub fn ramification_index(&self) -> u32 {
        if self.kind == PrimeKind::Ramified {
            2
        } else {
            1
        }
    }

    pub fn is_dyadic(&self) -> bool {
        self.p == 2
    }

    pub fn base_field(&self) -> BaseField {
        BaseField::from_option((self.m != 0).then_some(self.m)).unwrap()
    }

    pub fn residue_field(&self) -> Result<Fq> {
        match self.kind {
            PrimeKind::Inert if self.p == 2 => Err(Error::Unsupported("F_4 residue field".into())),
            PrimeKind::Inert => Fq::with_nonres(self.p, self.m % self.p),
            _ => Fq::prime(self.p),
        }
    }

    /// Image of √m in the residue field.
    pub fn sqrt_m_image(&self) -> Result<FqElem> {
        let f = self.residue_field()?;
        Ok(match self.kind {
            PrimeKind::Rational => f.zero(),
            PrimeKind::Split { root } => f.int(root as i64),
            PrimeKind::Inert => f.gen(),
            PrimeKind::Ramified => f.int((self.m % self.p) as i64),
        })
    }

    /// Reduction of an element whose coordinates in {1, √m} are p-integral.
    pub fn reduce(&self, x: &BaseElem) -> Result<FqElem> {
        if self.p == 2 && self.m % 4 == 1 {
            return Err(Error::BadReduction("naive order is not maximal at 2".into()));
        }
        let f = self.residue_field()?;
        let bad = || Error::BadReduction(format!("{x} is not integral at {self}"));
        let re = rat_mod(x.re(), self.p).ok_or_else(bad)?;
        let im = rat_mod(x.im(), self.p).ok_or_else(bad)?;
        Ok(f.int(re as i64) + (f.int(im as i64) * self.sqrt_m_image()?))
    }

    /// Valuation of a nonzero element.
    pub fn valuation(&self, x: &BaseElem) -> i64 {
        assert!(!x.is_zero());
        match self.kind {
            PrimeKind::Rational => rat_val(x.re(), self.p),
            // unique prime above p: v_P(x) = v_p(N x) / f
            PrimeKind::Inert => rat_val(&x.norm(), self.p) / 2,
            PrimeKind::Ramified => rat_val(&x.norm(), self.p),
            PrimeKind::Split { .. } => self.split_local(x).0,
        }
    }

    /// Residue of a P-adic unit.
    pub fn unit_residue(&self, x: &BaseElem) -> Result<FqElem> {
        if self.valuation(x) != 0 {
            return Err(Error::BadReduction(format!("{x} is not a unit at {self}")));
        }
        match self.kind {
            PrimeKind::Split { .. } => {
                let f = self.residue_field()?;
                Ok(f.int(self.split_local(x).1 as i64))
            }
            _ => self.reduce(x),
        }
    }

    /// For a split prime: (v_P(x), residue of x/p^v) using a p-adic lift of the root.
    fn split_local(&self, x: &BaseElem) -> (i64, u64) {
        let PrimeKind::Split { root } = self.kind else { unreachable!() };
        let p = self.p;
        let (u, v, d) = x.integral_parts();
        let n = &u * &u - BigInt::from(self.m) * &v * &v;
        let w = rat::int_val(&n, p);
        let pk = BigInt::from(p).pow(w + 1);
        let rho = hensel_root(self.m, root, p, w + 1);
        let t = (&u + &v * &rho).mod_floor(&pk);
        debug_assert!(!t.is_zero());
        let vt = rat::int_val(&t, p);
        let vd = rat::int_val(&d, p);
        let t_unit = mod_u64(&(&t / BigInt::from(p).pow(vt)), p);
        let d_unit = mod_u64(&(&d / BigInt::from(p).pow(vd)), p);
        let res = (t_unit as u128 * inv_mod(d_unit, p).unwrap() as u128 % p as u128) as u64;
        (vt as i64 - vd as i64, res)
    }
}

/// ρ with ρ² ≡ m mod p^k and ρ ≡ r mod p (p odd, m a unit).
fn hensel_root(m: u64, r: u64, p: u64, k: u32) -> BigInt {
    let pk = BigInt::from(p).pow(k);
    let m = BigInt::from(m);
    let mut rho = BigInt::from(r);
    let mut prec = 1;
    while prec < k {
        prec = (2 * prec).min(k);
        let mod_ = BigInt::from(p).pow(prec);
        let f = (&rho * &rho - &m).mod_floor(&mod_);
        let two_rho = (BigInt::from(2) * &rho).mod_floor(&mod_);
        let inv = mod_inverse(&two_rho, &mod_);
        rho = (&rho - f * inv).mod_floor(&mod_);
    }
    rho.mod_floor(&pk)
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> BigInt {
    let g = a.extended_gcd(m);
    assert!(g.gcd.is_one());
    g.x.mod_floor(m)
}

/// Reduce a base element modulo a prime ideal.
pub fn reduce_mod(x: &BaseElem, prime: &PrimeIdeal) -> Result<FqElem> {
    prime.reduce(x)
}

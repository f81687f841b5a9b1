//! Integer and rational helpers shared by the field code.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn big(n: i64) -> BigInt {
    BigInt::from(n)
}

/// Exact square root of a non-negative integer, if it is a perfect square.
pub fn int_sqrt_exact(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

pub fn rat_sqrt(x: &Q) -> Option<Q> {
    if x.is_negative() {
        return None;
    }
    let n = int_sqrt_exact(x.numer())?;
    let d = int_sqrt_exact(x.denom())?;
    Some(Q::new(n, d))
}

pub fn is_rat_square(x: &Q) -> bool {
    rat_sqrt(x).is_some()
}

/// Exponent of `p` in a nonzero integer.
pub fn int_val(n: &BigInt, p: u64) -> u32 {
    debug_assert!(!n.is_zero());
    let p = BigInt::from(p);
    let mut n = n.clone();
    let mut v = 0;
    loop {
        let (qt, r) = n.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        n = qt;
        v += 1;
    }
}

/// p-adic valuation of a nonzero rational.
pub fn rat_val(x: &Q, p: u64) -> i64 {
    int_val(x.numer(), p) as i64 - int_val(x.denom(), p) as i64
}

pub fn mod_u64(n: &BigInt, p: u64) -> u64 {
    let r = n.mod_floor(&BigInt::from(p));
    r.to_u64().unwrap()
}

pub fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u64 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = ((r as u128 * b as u128) % m as u128) as u64;
        }
        b = ((b as u128 * b as u128) % m as u128) as u64;
        e >>= 1;
    }
    r
}

pub fn inv_mod(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return None;
    }
    let g = (a as i128).extended_gcd(&(p as i128));
    if g.gcd != 1 {
        return None;
    }
    Some(g.x.rem_euclid(p as i128) as u64)
}

/// Reduce a rational modulo p; `None` if p divides the denominator.
pub fn rat_mod(x: &Q, p: u64) -> Option<u64> {
    let d = mod_u64(x.denom(), p);
    let di = inv_mod(d, p)?;
    Some(((mod_u64(x.numer(), p) as u128 * di as u128) % p as u128) as u64)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for sp in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % sp == 0 {
            return n == sp;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = ((x as u128 * x as u128) % n as u128) as u64;
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Legendre symbol (a|p) for an odd prime p, as -1, 0 or 1.
pub fn legendre(a: u64, p: u64) -> i32 {
    let a = a % p;
    if a == 0 {
        return 0;
    }
    if pow_mod(a, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// Smallest square root of `a` modulo an odd prime, by search. Primes here are small.
pub fn sqrt_mod(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if p == 2 {
        return Some(a);
    }
    if legendre(a, p) == -1 {
        return None;
    }
    (0..p).find(|&r| (r as u128 * r as u128 % p as u128) as u64 == a)
}

const TRIAL_LIMIT: u64 = 10_000;

/// Distinct prime divisors of a nonzero integer.
pub fn prime_divisors(n: &BigInt) -> Result<Vec<u64>> {
    let mut n = n.abs();
    let mut out = Vec::new();
    if n.is_zero() {
        return Ok(out);
    }
    let mut d = 2u64;
    while d <= TRIAL_LIMIT {
        let bd = BigInt::from(d);
        if &bd * &bd > n {
            break;
        }
        if (&n % &bd).is_zero() {
            out.push(d);
            while (&n % &bd).is_zero() {
                n /= &bd;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > BigInt::one() {
        let too_hard = || Error::FactorizationTooHard(n.to_string());
        let (found, rest) = num_prime::nt_funcs::factors(n.to_biguint().ok_or_else(too_hard)?, None);
        if rest.is_some_and(|r| !r.is_empty()) {
            return Err(too_hard());
        }
        for p in found.keys() {
            out.push(p.to_u64().ok_or_else(too_hard)?);
        }
    }
    out.sort_unstable();
    Ok(out)
}

pub fn is_squarefree(m: u64) -> bool {
    if m < 2 {
        return false;
    }
    let mut d = 2u64;
    let mut m = m;
    while d * d <= m {
        if m % d == 0 {
            m /= d;
            if m % d == 0 {
                return false;
            }
        }
        d += 1;
    }
    true
}

/// Squarefree integer in the square class of a nonzero rational.
pub fn squarefree_class(x: &Q) -> Result<BigInt> {
    let n = x.numer() * x.denom();
    let sign = if n.sign() == Sign::Minus { -1 } else { 1 };
    let mut rest = n.abs();
    let mut out = BigInt::from(sign);
    for p in prime_divisors(&rest.clone())? {
        let e = int_val(&rest, p);
        rest /= BigInt::from(p).pow(e);
        if e % 2 == 1 {
            out *= p;
        }
    }
    Ok(out)
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

pub fn parse_rat(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::Parse(format!("bad rational '{s}'"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Q::new(n, d))
        }
        None => Ok(Q::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

pub fn fmt_rat(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt_of_rationals() {
        assert_eq!(rat_sqrt(&qf(49, 4)), Some(qf(7, 2)));
        assert_eq!(rat_sqrt(&q(2)), None);
        assert_eq!(rat_sqrt(&q(-4)), None);
    }

    #[test]
    fn primes_and_divisors() {
        assert!(is_prime(2) && is_prime(97) && !is_prime(91));
        assert_eq!(prime_divisors(&big(-360)).unwrap(), vec![2, 3, 5]);
        assert_eq!(prime_divisors(&big(1)).unwrap(), Vec::<u64>::new());
        // factors past the trial bound
        assert_eq!(prime_divisors(&big(1_000_003 * 999_983 * 4)).unwrap(), vec![2, 999_983, 1_000_003]);
        assert_eq!(prime_divisors(&big(486119110475881)).unwrap(), vec![22048109]);
        assert_eq!(squarefree_class(&qf(-18, 5)).unwrap(), big(-10));
    }

    #[test]
    fn modular_helpers() {
        assert_eq!(rat_mod(&qf(1, 2), 5), Some(3));
        assert_eq!(rat_mod(&qf(1, 5), 5), None);
        assert_eq!(legendre(2, 7), 1);
        assert_eq!(legendre(2, 5), -1);
        assert_eq!(sqrt_mod(2, 7), Some(3));
        assert_eq!(parse_rat("-3/6").unwrap(), qf(-1, 2));
        assert_eq!(fmt_rat(&qf(-1, 2)), "-1/2");
    }
}

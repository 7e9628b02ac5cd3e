//! Integer and rational scalars plus the small number-theoretic helpers the
//! censuses need (gcd, divisor enumeration, exact square roots).
//!
//! `BigInt` and `BigRat` are the `num` crate types; they already keep the
//! canonical forms we rely on (no leading zero limbs, positive denominators,
//! reduced fractions, zero as `0/1`).

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub use num_bigint::BigInt;
pub type BigRat = num_rational::BigRational;

/// Nonnegative greatest common divisor, with `gcd(0, 0) = 0`.
pub fn gcd(a: &BigInt, b: &BigInt) -> BigInt {
    a.gcd(b)
}

pub fn lcm(a: &BigInt, b: &BigInt) -> BigInt {
    if a.is_zero() || b.is_zero() {
        return BigInt::zero();
    }
    a.lcm(b)
}

/// Prime factorization of `|n|` (n ≠ 0) by trial division, ascending primes.
fn factorize(n: &BigInt) -> Vec<(BigInt, u32)> {
    let mut m = n.abs();
    let mut out = Vec::new();
    if let Some(mut small) = m.to_u64() {
        let mut p = 2u64;
        while p <= small / p {
            let mut e = 0;
            while small % p == 0 {
                small /= p;
                e += 1;
            }
            if e > 0 {
                out.push((BigInt::from(p), e));
            }
            p += 1;
        }
        if small > 1 {
            out.push((BigInt::from(small), 1));
        }
        return out;
    }
    let mut p = BigInt::from(2u32);
    while &p * &p <= m {
        let mut e = 0;
        loop {
            let (q, r) = m.div_rem(&p);
            if !r.is_zero() {
                break;
            }
            m = q;
            e += 1;
        }
        if e > 0 {
            out.push((p.clone(), e));
        }
        p += 1;
    }
    if !m.is_one() {
        out.push((m, 1));
    }
    out
}

/// All positive divisors of `|n|` in ascending order.
pub fn divisors(n: &BigInt) -> Result<Vec<BigInt>> {
    if n.is_zero() {
        return Err(Error::domain("divisors of zero"));
    }
    let mut out = vec![BigInt::one()];
    for (p, e) in factorize(n) {
        let mut next = Vec::with_capacity(out.len() * (e as usize + 1));
        for d in &out {
            let mut pk = d.clone();
            next.push(pk.clone());
            for _ in 0..e {
                pk *= &p;
                next.push(pk.clone());
            }
        }
        out = next;
    }
    out.sort();
    Ok(out)
}

/// Number of positive divisors of `|n|`, from the prime factorization exponents.
pub fn divisor_count(n: &BigInt) -> Result<usize> {
    if n.is_zero() {
        return Err(Error::domain("divisor count of zero"));
    }
    Ok(factorize(n).iter().map(|(_, e)| *e as usize + 1).product())
}

/// Exact square root of a nonnegative integer, if it is a perfect square.
pub fn int_sqrt_exact(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// Exact square root of a rational, if both reduced numerator and denominator are squares.
pub fn rat_sqrt_exact(q: &BigRat) -> Option<BigRat> {
    let n = int_sqrt_exact(q.numer())?;
    let d = int_sqrt_exact(q.denom())?;
    Some(BigRat::new(n, d))
}

pub fn rat(n: i64, d: i64) -> BigRat {
    BigRat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: impl Into<BigInt>) -> BigRat {
    BigRat::from_integer(n.into())
}

/// True when `q` has denominator 1.
pub fn is_integral(q: &BigRat) -> bool {
    q.denom().is_one()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bi(n: i64) -> BigInt {
        BigInt::from(n)
    }

    fn brute_divisors(n: i64) -> Vec<i64> {
        let n = n.abs();
        (1..=n).filter(|d| n % d == 0).collect()
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(gcd(&bi(12), &bi(18)), bi(6));
        assert_eq!(gcd(&bi(0), &bi(7)), bi(7));
        assert_eq!(gcd(&bi(-4), &bi(6)), bi(2));
        assert_eq!(gcd(&bi(0), &bi(0)), bi(0));
    }

    #[test]
    fn divisor_examples() {
        let d: Vec<i64> = divisors(&bi(12)).unwrap().iter().map(|x| x.to_i64().unwrap()).collect();
        assert_eq!(d, vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(&bi(1)).unwrap(), vec![bi(1)]);
        let d97: Vec<i64> = divisors(&bi(97)).unwrap().iter().map(|x| x.to_i64().unwrap()).collect();
        assert_eq!(d97, brute_divisors(97));
        assert_eq!(d97, vec![1, 97]);
        assert!(matches!(divisors(&bi(0)), Err(Error::Domain(_))));
    }

    #[test]
    fn divisor_count_examples() {
        assert_eq!(divisor_count(&bi(12)).unwrap(), 6);
        assert_eq!(divisor_count(&bi(1)).unwrap(), 1);
        assert_eq!(brute_divisors(360).len(), 24);
        assert_eq!(divisor_count(&bi(360)).unwrap(), 24);
        assert!(divisor_count(&bi(0)).is_err());
    }

    #[test]
    fn divisors_beyond_u64() {
        let n = (BigInt::one() << 70) * 3 * 7;
        let ds = divisors(&n).unwrap();
        assert_eq!(ds.len(), divisor_count(&n).unwrap());
        assert!(ds.iter().all(|d| (&n % d).is_zero()));
    }

    #[test]
    fn square_roots() {
        assert_eq!(int_sqrt_exact(&bi(49)), Some(bi(7)));
        assert_eq!(int_sqrt_exact(&bi(50)), None);
        assert_eq!(int_sqrt_exact(&bi(-4)), None);
        assert_eq!(rat_sqrt_exact(&rat(9, 4)), Some(rat(3, 2)));
        assert_eq!(rat_sqrt_exact(&rat(2, 1)), None);
    }

    proptest! {
        #[test]
        fn gcd_is_greatest_common_divisor(a in -500i64..500, b in -500i64..500) {
            let g = gcd(&bi(a), &bi(b));
            prop_assert!(!g.is_negative());
            if !g.is_zero() {
                prop_assert!((bi(a) % &g).is_zero() && (bi(b) % &g).is_zero());
            }
            for c in 1..=500i64 {
                if a % c == 0 && b % c == 0 {
                    prop_assert!(g.is_zero() || (&g % c).is_zero());
                }
            }
        }

        #[test]
        fn rational_field_identities(
            an in -1000i64..1000, ad in 1i64..100,
            bn in -1000i64..1000, bd in 1i64..100,
        ) {
            let a = rat(an, ad);
            let b = rat(bn, bd);
            prop_assert_eq!(&(&a + &b) - &b, a.clone());
            if !b.is_zero() {
                prop_assert_eq!(&(&a * &b) / &b, a);
            }
        }

        #[test]
        fn divisor_count_matches_enumeration(n in 1i64..5000) {
            let ds = divisors(&bi(n)).unwrap();
            prop_assert_eq!(ds.len(), divisor_count(&bi(n)).unwrap());
            let expected: Vec<BigInt> = brute_divisors(n).into_iter().map(bi).collect();
            prop_assert_eq!(ds, expected);
        }
    }
}

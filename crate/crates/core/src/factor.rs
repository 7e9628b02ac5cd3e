//! Factorization of univariate polynomials over ℤ (hence over ℚ).
//!
//! Zassenhaus' method: squarefree decomposition over ℚ, factorization of
//! each squarefree part modulo a small prime, multifactor Hensel lifting to
//! a power of that prime exceeding twice a Mignotte-type coefficient bound,
//! then exhaustive recombination of the lifted factors.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::arith::BigRat;
use crate::error::{Error, Result};
use crate::modp::{degree, Fp, FpPoly};
use crate::uni::{rational_roots, uni_gcd, IntPoly, UniPoly};

const EDF_SEED: u64 = 0x6b65_6c6c_6572;

/// `unit · ∏ factor^multiplicity` equals the factored polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub unit: BigRat,
    /// Primitive, irreducible over ℚ, positive leading coefficient; sorted by
    /// degree then coefficients.
    pub factors: Vec<(IntPoly, u32)>,
}

impl Factorization {
    pub fn reconstruct(&self) -> UniPoly {
        self.factors
            .iter()
            .fold(UniPoly::constant(self.unit.clone()), |acc, (f, m)| {
                acc.mul(&f.to_rational().pow(*m))
            })
    }

    pub fn is_irreducible(&self) -> bool {
        matches!(self.factors.as_slice(), [(_, 1)])
    }
}

impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.unit)?;
        for (p, m) in &self.factors {
            write!(f, " * ({p})")?;
            if *m > 1 {
                write!(f, "^{m}")?;
            }
        }
        Ok(())
    }
}

/// Complete factorization over ℚ; the input may have rational coefficients,
/// whose denominators end up in the unit.
pub fn factor_over_z(p: &UniPoly) -> Result<Factorization> {
    if p.degree().unwrap_or(0) == 0 {
        return Err(Error::domain("factorization needs degree at least 1"));
    }
    let mut factors: Vec<(IntPoly, u32)> = Vec::new();
    for (part, mult) in squarefree_decomposition(p)? {
        let (_, prim) = part.to_primitive_int()?;
        for f in factor_squarefree_primitive(&prim) {
            factors.push((f, mult));
        }
    }
    factors.sort_by(|(a, ma), (b, mb)| {
        a.degree()
            .cmp(&b.degree())
            .then_with(|| a.coeffs().iter().rev().cmp(b.coeffs().iter().rev()))
            .then(ma.cmp(mb))
    });
    let lc_product = factors.iter().fold(BigInt::one(), |acc, (f, m)| {
        acc * num_traits::pow(f.leading_coeff(), *m as usize)
    });
    let unit = p.leading_coeff() / BigRat::from_integer(lc_product);
    Ok(Factorization { unit, factors })
}

/// Irreducibility over ℚ. Degrees 2 and 3 are decided by the absence of
/// rational roots; higher degrees go through the full factorization.
pub fn is_irreducible_q(p: &UniPoly) -> Result<bool> {
    match p.degree() {
        None | Some(0) => Err(Error::domain("irreducibility needs degree at least 1")),
        Some(1) => Ok(true),
        Some(2) | Some(3) => Ok(rational_roots(p)?.is_empty()),
        Some(_) => Ok(factor_over_z(p)?.is_irreducible()),
    }
}

/// Yun's algorithm: monic squarefree, pairwise coprime `a_i` with `p ≅ ∏ a_i^i`.
fn squarefree_decomposition(p: &UniPoly) -> Result<Vec<(UniPoly, u32)>> {
    let mut out = Vec::new();
    let dp = p.derivative();
    let b = uni_gcd(p, &dp)?;
    let mut c = p.div_exact(&b).expect("gcd divides");
    let mut d = dp.div_exact(&b).expect("gcd divides").sub(&c.derivative());
    let mut i = 1u32;
    while c.degree().unwrap_or(0) > 0 {
        let a = uni_gcd(&c, &d)?;
        c = c.div_exact(&a).expect("gcd divides");
        d = d.div_exact(&a).expect("gcd divides").sub(&c.derivative());
        if a.degree().unwrap_or(0) > 0 {
            out.push((a, i));
        }
        i += 1;
    }
    Ok(out)
}

fn is_small_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

fn reduce_mod(f: &IntPoly, p: u64) -> FpPoly {
    let pb = BigInt::from(p);
    let mut v: FpPoly = f
        .coeffs()
        .iter()
        .map(|c| c.mod_floor(&pb).to_u64().unwrap())
        .collect();
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

/// Smallest odd prime not dividing the leading coefficient with a squarefree reduction.
fn choose_prime(f: &IntPoly) -> u64 {
    let lc = f.leading_coeff();
    (3u64..)
        .filter(|&p| is_small_prime(p))
        .find(|&p| {
            if (&lc % p).is_zero() {
                return false;
            }
            let fp = Fp::new(p);
            fp.is_squarefree(&fp.monic(&reduce_mod(f, p)))
        })
        .expect("a suitable prime exists for squarefree input")
}

fn mod_poly(a: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let mut v: Vec<BigInt> = a.iter().map(|c| c.mod_floor(m)).collect();
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
    v
}

fn mul_mod(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    mod_poly(&out, m)
}

fn lift_fp(a: &[u64]) -> Vec<BigInt> {
    a.iter().map(|&c| BigInt::from(c)).collect()
}

fn product_fp(fp: &Fp, parts: &[FpPoly]) -> FpPoly {
    parts.iter().fold(vec![1u64], |acc, q| fp.mul(&acc, q))
}

/// Lifts `f ≡ g0·h0 (mod p)` (all monic) to `f ≡ g·h (mod p^k)`, one power of `p` at a time.
fn hensel_pair(f: &[BigInt], g0: &FpPoly, h0: &FpPoly, fp: &Fp, k: u32) -> (Vec<BigInt>, Vec<BigInt>) {
    let p = BigInt::from(fp.p);
    let (one, s, t) = fp.ext_gcd(g0, h0);
    debug_assert_eq!(one, vec![1]);
    let mut g = lift_fp(g0);
    let mut h = lift_fp(h0);
    let mut pj = p.clone();
    for _ in 1..k {
        let next = &pj * &p;
        let gh = mul_mod(&g, &h, &next);
        let n = f.len().max(gh.len());
        let e: Vec<i64> = (0..n)
            .map(|i| {
                let fi = f.get(i).cloned().unwrap_or_default().mod_floor(&next);
                let di = fi - gh.get(i).cloned().unwrap_or_default();
                debug_assert!((&di % &pj).is_zero());
                (di / &pj).mod_floor(&p).to_i64().unwrap()
            })
            .collect();
        let e = fp.reduce(&e);
        let (q, a) = fp.div_rem(&fp.mul(&t, &e), g0);
        let b = fp.add(&fp.mul(&s, &e), &fp.mul(&q, h0));
        let bump = |poly: &mut Vec<BigInt>, delta: &FpPoly| {
            if poly.len() < delta.len() {
                poly.resize(delta.len(), BigInt::zero());
            }
            for (i, &d) in delta.iter().enumerate() {
                poly[i] += &pj * d;
            }
            *poly = mod_poly(poly, &next);
        };
        bump(&mut g, &a);
        bump(&mut h, &b);
        pj = next;
    }
    (g, h)
}

fn hensel_all(f: &[BigInt], parts: &[FpPoly], fp: &Fp, k: u32, modulus: &BigInt) -> Vec<Vec<BigInt>> {
    if parts.len() == 1 {
        return vec![mod_poly(f, modulus)];
    }
    let (left, right) = parts.split_at(parts.len() / 2);
    let g0 = product_fp(fp, left);
    let h0 = product_fp(fp, right);
    let (g, h) = hensel_pair(f, &g0, &h0, fp, k);
    let mut out = hensel_all(&g, left, fp, k, modulus);
    out.extend(hensel_all(&h, right, fp, k, modulus));
    out
}

fn symmetric(a: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let half = m / 2;
    a.iter()
        .map(|c| {
            let r = c.mod_floor(m);
            if r > half {
                r - m
            } else {
                r
            }
        })
        .collect()
}

/// Bound on the absolute value of any coefficient of any factor of `f`.
fn mignotte_bound(f: &IntPoly) -> BigInt {
    let norm_sq: BigInt = f.coeffs().iter().map(|c| c * c).sum();
    let n = f.degree().unwrap_or(0);
    (norm_sq.sqrt() + 1) << n
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Irreducible factors of a squarefree primitive polynomial with positive leading coefficient.
fn factor_squarefree_primitive(f: &IntPoly) -> Vec<IntPoly> {
    let n = f.degree().unwrap_or(0);
    if n <= 1 {
        return vec![f.clone()];
    }
    let p = choose_prime(f);
    let fp = Fp::new(p);
    let mut rng = ChaCha8Rng::seed_from_u64(EDF_SEED ^ p);
    let modular = fp.factor_squarefree(&fp.monic(&reduce_mod(f, p)), &mut rng);
    if modular.len() == 1 {
        return vec![f.clone()];
    }

    let lc = f.leading_coeff();
    let bound = BigInt::from(2) * lc.abs() * mignotte_bound(f);
    let pb = BigInt::from(p);
    let mut k = 1u32;
    let mut modulus = pb.clone();
    while modulus <= bound {
        modulus *= &pb;
        k += 1;
    }
    // Lift the monic associate lc^{-1}·f.
    let lc_inv = lc
        .mod_floor(&modulus)
        .modinv(&modulus)
        .expect("p does not divide the leading coefficient");
    let monic: Vec<BigInt> = f.coeffs().iter().map(|c| c * &lc_inv).collect();
    let lifted = hensel_all(&mod_poly(&monic, &modulus), &modular, &fp, k, &modulus);
    debug_assert!(lifted.iter().zip(&modular).all(|(l, m)| degree(m) == l.len().checked_sub(1)));

    let mut remaining: Vec<Vec<BigInt>> = lifted;
    let mut rest = f.clone();
    let mut found = Vec::new();
    let mut size = 1;
    while 2 * size <= remaining.len() {
        let mut hit = None;
        for subset in combinations(remaining.len(), size) {
            let rlc = rest.leading_coeff();
            let cand = subset
                .iter()
                .fold(vec![rlc.clone()], |acc, &i| mul_mod(&acc, &remaining[i], &modulus));
            let cand = IntPoly::new(symmetric(&cand, &modulus));
            let Ok((_, prim)) = cand.content_primitive() else {
                continue;
            };
            if let Some(q) = rest.div_exact(&prim) {
                hit = Some((subset, prim, q));
                break;
            }
        }
        match hit {
            Some((subset, factor, quotient)) => {
                found.push(factor);
                rest = quotient;
                remaining = remaining
                    .into_iter()
                    .enumerate()
                    .filter(|(i, _)| !subset.contains(i))
                    .map(|(_, v)| v)
                    .collect();
            }
            None => size += 1,
        }
    }
    if rest.degree().unwrap_or(0) > 0 {
        let (_, prim) = rest.content_primitive().expect("nonzero");
        found.push(prim);
    }
    found
}

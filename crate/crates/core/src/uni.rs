//! Dense univariate polynomials over ℚ (`UniPoly`) and ℤ (`IntPoly`):
//! Euclidean algorithms, squarefree parts, rational roots and resultants.

use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::{divisors, BigInt, BigRat};
use crate::error::{Error, Result};

/// Univariate polynomial over ℚ, coefficients in ascending order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UniPoly {
    coeffs: Vec<BigRat>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<BigRat>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigRat::from_integer(c.into())).collect())
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: BigRat) -> Self {
        Self::new(vec![c])
    }

    /// `z - root`
    pub fn linear(root: &BigRat) -> Self {
        Self::new(vec![-root, BigRat::one()])
    }

    pub fn coeffs(&self) -> &[BigRat] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading_coeff(&self) -> BigRat {
        self.coeffs.last().cloned().unwrap_or_else(BigRat::zero)
    }

    pub fn eval(&self, z: &BigRat) -> BigRat {
        let mut acc = BigRat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    pub fn scale(&self, c: &BigRat) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn monic(&self) -> UniPoly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.leading_coeff().recip())
    }

    pub fn derivative(&self) -> UniPoly {
        UniPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigRat::from_integer(k.into()))
                .collect(),
        )
    }

    pub fn add(&self, other: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = BigRat::zero();
        UniPoly::new(
            (0..n)
                .map(|k| self.coeffs.get(k).unwrap_or(&zero) + other.coeffs.get(k).unwrap_or(&zero))
                .collect(),
        )
    }

    pub fn sub(&self, other: &UniPoly) -> UniPoly {
        self.add(&other.scale(&-BigRat::one()))
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![BigRat::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UniPoly::new(out)
    }

    pub fn pow(&self, e: u32) -> UniPoly {
        (0..e).fold(UniPoly::constant(BigRat::one()), |acc, _| acc.mul(self))
    }

    /// Quotient and remainder over ℚ.
    pub fn div_rem(&self, divisor: &UniPoly) -> Result<(UniPoly, UniPoly)> {
        let Some(dd) = divisor.degree() else {
            return Err(Error::domain("division by the zero polynomial"));
        };
        let lc_inv = divisor.leading_coeff().recip();
        let mut rem = self.coeffs.clone();
        let Some(rd) = self.degree().filter(|&d| d >= dd) else {
            return Ok((UniPoly::zero(), self.clone()));
        };
        let mut quot = vec![BigRat::zero(); rd - dd + 1];
        for k in (0..=rd - dd).rev() {
            let q = &rem[k + dd] * &lc_inv;
            if q.is_zero() {
                continue;
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= &q * d;
            }
            quot[k] = q;
        }
        rem.truncate(dd);
        Ok((UniPoly::new(quot), UniPoly::new(rem)))
    }

    /// Exact quotient, or `None` when `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &UniPoly) -> Option<UniPoly> {
        let (q, r) = self.div_rem(divisor).ok()?;
        r.is_zero().then_some(q)
    }

    /// Clears denominators: returns the primitive integer polynomial with
    /// positive leading coefficient and the rational `c` with `self = c · result`.
    pub fn to_primitive_int(&self) -> Result<(BigRat, IntPoly)> {
        if self.is_zero() {
            return Err(Error::domain("zero polynomial has no primitive part"));
        }
        let den = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * BigRat::from_integer(den.clone())).to_integer())
            .collect();
        let (content, prim) = IntPoly::new(ints).content_primitive()?;
        Ok((BigRat::new(content, den), prim))
    }

    pub fn display_var<'a>(&'a self, var: &'a str) -> UniDisplay<'a> {
        UniDisplay { coeffs: &self.coeffs, var }
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_var("z"))
    }
}

pub struct UniDisplay<'a> {
    coeffs: &'a [BigRat],
    var: &'a str,
}

impl fmt::Display for UniDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let abs = c.abs();
            let mut parts = Vec::new();
            if !abs.is_one() || k == 0 {
                parts.push(abs.to_string());
            }
            match k {
                0 => {}
                1 => parts.push(self.var.to_string()),
                _ => parts.push(format!("{}^{}", self.var, k)),
            }
            write!(f, "{}", parts.join("*"))?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Univariate polynomial over ℤ, coefficients in ascending order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading_coeff(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// `(c, q)` with `c · q = self`, `q` primitive with positive leading
    /// coefficient; the content `c` carries the sign.
    pub fn content_primitive(&self) -> Result<(BigInt, IntPoly)> {
        if self.is_zero() {
            return Err(Error::domain("content of the zero polynomial"));
        }
        let mut c = self.content();
        if self.leading_coeff().is_negative() {
            c = -c;
        }
        let prim = IntPoly::new(self.coeffs.iter().map(|a| a / &c).collect());
        Ok((c, prim))
    }

    pub fn to_rational(&self) -> UniPoly {
        UniPoly::new(self.coeffs.iter().cloned().map(BigRat::from_integer).collect())
    }

    pub fn eval(&self, z: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    pub fn mul(&self, other: &IntPoly) -> IntPoly {
        if self.is_zero() || other.is_zero() {
            return IntPoly::new(Vec::new());
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }

    /// Exact quotient over ℤ, `None` when `divisor` does not divide `self` in ℤ[z].
    pub fn div_exact(&self, divisor: &IntPoly) -> Option<IntPoly> {
        let dd = divisor.degree()?;
        let lc = divisor.leading_coeff();
        let Some(sd) = self.degree() else {
            return Some(self.clone());
        };
        if sd < dd {
            return None;
        }
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigInt::zero(); sd - dd + 1];
        for k in (0..=sd - dd).rev() {
            let (q, r) = rem[k + dd].div_rem(&lc);
            if !r.is_zero() {
                return None;
            }
            if q.is_zero() {
                continue;
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= &q * d;
            }
            quot[k] = q;
        }
        rem.iter().all(Zero::is_zero).then(|| IntPoly::new(quot))
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_rational())
    }
}

fn require_nonzero(p: &UniPoly, what: &str) -> Result<()> {
    if p.is_zero() {
        return Err(Error::domain(format!("{what} of the zero polynomial")));
    }
    Ok(())
}

/// Monic gcd over ℚ.
pub fn uni_gcd(p: &UniPoly, q: &UniPoly) -> Result<UniPoly> {
    if p.is_zero() && q.is_zero() {
        return Err(Error::domain("gcd(0, 0) of polynomials"));
    }
    let (mut a, mut b) = (p.clone(), q.clone());
    while !b.is_zero() {
        let (_, r) = a.div_rem(&b)?;
        a = b;
        b = r;
    }
    Ok(a.monic())
}

/// `p / gcd(p, p')`, monic.
pub fn squarefree_part(p: &UniPoly) -> Result<UniPoly> {
    require_nonzero(p, "squarefree part")?;
    if p.degree() == Some(0) {
        return Ok(UniPoly::constant(BigRat::one()));
    }
    let g = uni_gcd(p, &p.derivative())?;
    let q = p
        .div_exact(&g)
        .ok_or_else(|| Error::Internal("gcd does not divide its argument".into()))?;
    Ok(q.monic())
}

/// Number of times `root` divides `p` (as `z - root`), with the cofactor.
fn strip_root(p: &UniPoly, root: &BigRat) -> (usize, UniPoly) {
    let lin = UniPoly::linear(root);
    let mut mult = 0;
    let mut cur = p.clone();
    while let Some(q) = cur.div_exact(&lin) {
        if cur.degree() == Some(0) {
            break;
        }
        mult += 1;
        cur = q;
    }
    (mult, cur)
}

fn trailing_zero_split(coeffs: &[BigInt]) -> (usize, &[BigInt]) {
    let k = coeffs.iter().take_while(|c| c.is_zero()).count();
    (k, &coeffs[k..])
}

/// All rational roots listed with multiplicity, ascending. Candidates are
/// `±a/b` with `a | trailing coefficient` and `b | leading coefficient`;
/// each is confirmed by exact division.
pub fn rational_roots(p: &UniPoly) -> Result<Vec<BigRat>> {
    require_nonzero(p, "rational roots")?;
    let (_, ip) = p.to_primitive_int()?;
    let (zeros, rest) = trailing_zero_split(ip.coeffs());
    let mut roots = vec![BigRat::zero(); zeros];
    if rest.len() > 1 {
        let mut cur = IntPoly::new(rest.to_vec()).to_rational();
        let nums = divisors(&rest[0])?;
        let dens = divisors(rest.last().unwrap())?;
        let mut candidates: Vec<BigRat> = Vec::new();
        for a in &nums {
            for b in &dens {
                let r = BigRat::new(a.clone(), b.clone());
                candidates.push(-r.clone());
                candidates.push(r);
            }
        }
        candidates.sort();
        candidates.dedup();
        for r in candidates {
            if cur.degree().unwrap_or(0) == 0 {
                break;
            }
            if !cur.eval(&r).is_zero() {
                continue;
            }
            let (m, rest) = strip_root(&cur, &r);
            roots.extend(std::iter::repeat_n(r, m));
            cur = rest;
        }
    }
    roots.sort();
    Ok(roots)
}

/// Integer roots with multiplicity, ascending. Every integer root divides the
/// trailing nonzero coefficient of the primitive integer form.
pub fn integer_roots(p: &UniPoly) -> Result<Vec<BigInt>> {
    require_nonzero(p, "integer roots")?;
    let (_, ip) = p.to_primitive_int()?;
    let (zeros, rest) = trailing_zero_split(ip.coeffs());
    let mut roots = vec![BigInt::zero(); zeros];
    if rest.len() > 1 {
        let mut cur = IntPoly::new(rest.to_vec());
        for d in divisors(&rest[0])? {
            for r in [-d.clone(), d] {
                if cur.degree().unwrap_or(0) == 0 {
                    break;
                }
                if !cur.eval(&r).is_zero() {
                    continue;
                }
                let lin = IntPoly::new(vec![-r.clone(), BigInt::one()]);
                while cur.degree().unwrap_or(0) > 0 {
                    match cur.div_exact(&lin) {
                        Some(q) => {
                            roots.push(r.clone());
                            cur = q;
                        }
                        None => break,
                    }
                }
            }
        }
    }
    roots.sort();
    Ok(roots)
}

/// Resultant, with the sign of the Sylvester determinant whose first rows
/// hold the coefficients of `p`. Computed by the Euclidean recurrence
/// `Res(p, q) = (-1)^{deg p · deg q} lc(q)^{deg p - deg r} Res(q, r)`, `r = p mod q`.
pub fn uni_resultant(p: &UniPoly, q: &UniPoly) -> Result<BigRat> {
    require_nonzero(p, "resultant")?;
    require_nonzero(q, "resultant")?;
    let mut a = p.clone();
    let mut b = q.clone();
    let mut acc = BigRat::one();
    loop {
        let da = a.degree().unwrap();
        let db = b.degree().unwrap();
        if db == 0 {
            return Ok(acc * num_traits::pow(b.leading_coeff(), da));
        }
        let (_, r) = a.div_rem(&b)?;
        let Some(dr) = r.degree() else {
            return Ok(BigRat::zero());
        };
        if (da * db) % 2 == 1 {
            acc = -acc;
        }
        acc *= num_traits::pow(b.leading_coeff(), da - dr);
        a = b;
        b = r;
    }
}

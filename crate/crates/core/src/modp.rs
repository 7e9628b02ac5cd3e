//! Dense polynomials over a small prime field `F_p` (`p < 2^31`), ascending
//! coefficients in `[0, p)`. Only what factorization needs: Euclid, modular
//! powering, distinct-degree and equal-degree (Cantor–Zassenhaus) splitting.

use num_bigint::BigUint;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub(crate) type FpPoly = Vec<u64>;

#[derive(Debug, Clone, Copy)]
pub(crate) struct Fp {
    pub p: u64,
}

fn trim(mut a: FpPoly) -> FpPoly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

pub(crate) fn degree(a: &[u64]) -> Option<usize> {
    a.len().checked_sub(1)
}

impl Fp {
    pub fn new(p: u64) -> Self {
        debug_assert!(p < (1 << 31));
        Fp { p }
    }

    pub fn inv(&self, a: u64) -> u64 {
        self.pow_scalar(a, self.p - 2)
    }

    fn pow_scalar(&self, mut a: u64, mut e: u64) -> u64 {
        let mut r = 1u64;
        a %= self.p;
        while e > 0 {
            if e & 1 == 1 {
                r = r * a % self.p;
            }
            a = a * a % self.p;
            e >>= 1;
        }
        r
    }

    pub fn reduce(&self, a: &[i64]) -> FpPoly {
        let p = self.p as i64;
        trim(a.iter().map(|&c| c.rem_euclid(p) as u64).collect())
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> FpPoly {
        let n = a.len().max(b.len());
        trim(
            (0..n)
                .map(|k| (a.get(k).unwrap_or(&0) + b.get(k).unwrap_or(&0)) % self.p)
                .collect(),
        )
    }

    pub fn sub(&self, a: &[u64], b: &[u64]) -> FpPoly {
        let n = a.len().max(b.len());
        trim(
            (0..n)
                .map(|k| (a.get(k).unwrap_or(&0) + self.p - b.get(k).unwrap_or(&0)) % self.p)
                .collect(),
        )
    }

    pub fn mul(&self, a: &[u64], b: &[u64]) -> FpPoly {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x * y) % self.p;
            }
        }
        trim(out)
    }

    pub fn scale(&self, a: &[u64], c: u64) -> FpPoly {
        trim(a.iter().map(|&x| x * c % self.p).collect())
    }

    pub fn monic(&self, a: &[u64]) -> FpPoly {
        match a.last() {
            Some(&lc) => self.scale(a, self.inv(lc)),
            None => Vec::new(),
        }
    }

    pub fn div_rem(&self, a: &[u64], b: &[u64]) -> (FpPoly, FpPoly) {
        let db = degree(b).expect("division by zero polynomial");
        let inv = self.inv(*b.last().unwrap());
        let mut rem = a.to_vec();
        if rem.len() < b.len() {
            return (Vec::new(), trim(rem));
        }
        let mut quot = vec![0u64; rem.len() - db];
        for k in (0..quot.len()).rev() {
            let q = rem[k + db] * inv % self.p;
            if q == 0 {
                continue;
            }
            for (j, &d) in b.iter().enumerate() {
                rem[k + j] = (rem[k + j] + self.p - q * d % self.p) % self.p;
            }
            quot[k] = q;
        }
        rem.truncate(db);
        (trim(quot), trim(rem))
    }

    pub fn rem(&self, a: &[u64], b: &[u64]) -> FpPoly {
        self.div_rem(a, b).1
    }

    pub fn gcd(&self, a: &[u64], b: &[u64]) -> FpPoly {
        let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
        while !b.is_empty() {
            let r = self.rem(&a, &b);
            a = b;
            b = r;
        }
        self.monic(&a)
    }

    /// `(g, s, t)` with `s·a + t·b = g`, `g` monic.
    pub fn ext_gcd(&self, a: &[u64], b: &[u64]) -> (FpPoly, FpPoly, FpPoly) {
        let (mut r0, mut r1) = (trim(a.to_vec()), trim(b.to_vec()));
        let (mut s0, mut s1) = (vec![1u64], Vec::new());
        let (mut t0, mut t1) = (Vec::new(), vec![1u64]);
        while !r1.is_empty() {
            let (q, r) = self.div_rem(&r0, &r1);
            let s = self.sub(&s0, &self.mul(&q, &s1));
            let t = self.sub(&t0, &self.mul(&q, &t1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
            t0 = std::mem::replace(&mut t1, t);
        }
        let inv = self.inv(*r0.last().expect("gcd of two zero polynomials"));
        (self.scale(&r0, inv), self.scale(&s0, inv), self.scale(&t0, inv))
    }

    pub fn derivative(&self, a: &[u64]) -> FpPoly {
        trim(
            a.iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| (k as u64 % self.p) * c % self.p)
                .collect(),
        )
    }

    pub fn pow_mod(&self, base: &[u64], exp: &BigUint, modulus: &[u64]) -> FpPoly {
        let mut result = vec![1u64];
        let base = self.rem(base, modulus);
        for i in (0..exp.bits()).rev() {
            result = self.rem(&self.mul(&result, &result), modulus);
            if exp.bit(i) {
                result = self.rem(&self.mul(&result, &base), modulus);
            }
        }
        result
    }

    pub fn is_squarefree(&self, a: &[u64]) -> bool {
        let d = self.derivative(a);
        !d.is_empty() && degree(&self.gcd(a, &d)) == Some(0)
    }

    /// Distinct-degree factorization of a monic squarefree polynomial:
    /// pairs `(g_d, d)` where `g_d` is the product of all irreducible factors of degree `d`.
    pub fn distinct_degree(&self, f: &[u64]) -> Vec<(FpPoly, usize)> {
        let mut out = Vec::new();
        let mut f = f.to_vec();
        let x = vec![0u64, 1];
        let mut h = x.clone();
        let p = BigUint::from(self.p);
        let mut d = 0;
        while degree(&f).unwrap_or(0) >= 2 * (d + 1) {
            d += 1;
            h = self.pow_mod(&h, &p, &f);
            let g = self.gcd(&self.sub(&h, &x), &f);
            if degree(&g).unwrap_or(0) > 0 {
                f = self.div_rem(&f, &g).0;
                h = self.rem(&h, &f);
                out.push((g, d));
            }
        }
        if degree(&f).unwrap_or(0) > 0 {
            let n = degree(&f).unwrap();
            out.push((f, n));
        }
        out
    }

    /// Cantor–Zassenhaus splitting of a monic product of degree-`d` irreducibles (odd `p`).
    pub fn equal_degree(&self, g: &[u64], d: usize, rng: &mut ChaCha8Rng) -> Vec<FpPoly> {
        let n = degree(g).unwrap();
        if n == d {
            return vec![g.to_vec()];
        }
        let exp = (BigUint::from(self.p).pow(d as u32) - 1u32) / 2u32;
        loop {
            let a: FpPoly = trim((0..n).map(|_| rng.gen_range(0..self.p)).collect());
            if degree(&a).unwrap_or(0) == 0 {
                continue;
            }
            let b = self.sub(&self.pow_mod(&a, &exp, g), &[1]);
            let h = self.gcd(&b, g);
            let dh = degree(&h).unwrap_or(0);
            if dh > 0 && dh < n {
                let rest = self.div_rem(g, &h).0;
                let mut out = self.equal_degree(&h, d, rng);
                out.extend(self.equal_degree(&rest, d, rng));
                return out;
            }
        }
    }

    /// Complete factorization of a monic squarefree polynomial into monic irreducibles.
    pub fn factor_squarefree(&self, f: &[u64], rng: &mut ChaCha8Rng) -> Vec<FpPoly> {
        let mut out = Vec::new();
        for (g, d) in self.distinct_degree(f) {
            out.extend(self.equal_degree(&g, d, rng));
        }
        out.sort();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn ext_gcd_identity() {
        let f = Fp::new(7);
        let a = f.reduce(&[1, 0, 1]);
        let b = f.reduce(&[3, 1]);
        let (g, s, t) = f.ext_gcd(&a, &b);
        assert_eq!(g, vec![1]);
        assert_eq!(f.add(&f.mul(&s, &a), &f.mul(&t, &b)), vec![1]);
    }

    #[test]
    fn factors_x4_plus_1_mod_small_primes() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for p in [3u64, 5, 7, 11, 13, 17] {
            let f = Fp::new(p);
            let poly = f.reduce(&[1, 0, 0, 0, 1]);
            let parts = f.factor_squarefree(&poly, &mut rng);
            // x^4 + 1 is reducible modulo every prime
            assert!(parts.len() >= 2, "p = {p}");
            let prod = parts.iter().fold(vec![1u64], |acc, q| f.mul(&acc, q));
            assert_eq!(prod, poly);
        }
    }

    #[test]
    fn distinct_degree_splits_by_degree() {
        let f = Fp::new(5);
        // (x - 1)(x - 2)(x^2 + 2), with x^2 + 2 irreducible mod 5
        let poly = f.mul(&f.mul(&f.reduce(&[-1, 1]), &f.reduce(&[-2, 1])), &f.reduce(&[2, 0, 1]));
        let ddf = f.distinct_degree(&poly);
        assert_eq!(ddf.len(), 2);
        assert_eq!(ddf[0].1, 1);
        assert_eq!(ddf[1], (f.reduce(&[2, 0, 1]), 2));
    }
}

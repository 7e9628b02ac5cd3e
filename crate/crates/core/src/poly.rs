//! Sparse multivariate polynomials over the rationals and polynomial maps.
//!
//! Terms are kept in a `BTreeMap` keyed by [`Monomial`], whose ordering is
//! graded lexicographic: total degree first, then exponents compared from
//! the first variable. The leading term is therefore the last map entry.
//! No stored coefficient is ever zero, so structural equality is polynomial
//! equality.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::{BigInt, BigRat};
use crate::error::{Error, Result};

/// Exponent vector; its length is the arity of the ambient ring.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(arity: usize) -> Self {
        Monomial(vec![0; arity])
    }

    pub fn var(arity: usize, index: usize) -> Self {
        let mut e = vec![0; arity];
        e[index] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(Monomial)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Polynomial in `arity` variables with rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    arity: usize,
    terms: BTreeMap<Monomial, BigRat>,
}

impl MultiPoly {
    pub fn zero(arity: usize) -> Self {
        MultiPoly {
            arity,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(arity: usize) -> Self {
        Self::constant(arity, BigRat::one())
    }

    pub fn constant(arity: usize, c: BigRat) -> Self {
        Self::term(arity, Monomial::one(arity), c)
    }

    pub fn var(arity: usize, index: usize) -> Self {
        Self::term(arity, Monomial::var(arity, index), BigRat::one())
    }

    pub fn term(arity: usize, m: Monomial, c: BigRat) -> Self {
        debug_assert_eq!(m.arity(), arity);
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        MultiPoly { arity, terms }
    }

    /// Builds a polynomial from (possibly repeated, possibly zero) terms.
    pub fn from_terms(arity: usize, terms: impl IntoIterator<Item = (Monomial, BigRat)>) -> Self {
        let mut p = MultiPoly::zero(arity);
        for (m, c) in terms {
            debug_assert_eq!(m.arity(), arity);
            p.add_term(m, c);
        }
        p
    }

    fn add_term(&mut self, m: Monomial, c: BigRat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    /// The constant value, if this polynomial is constant.
    pub fn as_constant(&self) -> Option<BigRat> {
        if self.is_constant() {
            Some(self.constant_term())
        } else {
            None
        }
    }

    pub fn constant_term(&self) -> BigRat {
        self.terms
            .get(&Monomial::one(self.arity))
            .cloned()
            .unwrap_or_else(BigRat::zero)
    }

    pub fn coefficient(&self, m: &Monomial) -> BigRat {
        self.terms.get(m).cloned().unwrap_or_else(BigRat::zero)
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &BigRat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &BigRat)> {
        self.terms.iter().next_back()
    }

    /// Total degree; `None` stands for the degree of the zero polynomial (−∞),
    /// which `Option`'s ordering already places below every `Some`.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::total_degree).max()
    }

    /// Degree in one variable, `None` for the zero polynomial.
    pub fn degree_in(&self, var: usize) -> Option<u32> {
        self.terms.keys().map(|m| m.0[var]).max()
    }

    pub fn involves(&self, var: usize) -> bool {
        self.terms.keys().any(|m| m.0[var] > 0)
    }

    fn check_arity(&self, other: &MultiPoly) -> Result<()> {
        if self.arity != other.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                found: other.arity,
            });
        }
        Ok(())
    }

    fn check_var(&self, var: usize) -> Result<()> {
        if var >= self.arity {
            return Err(Error::VariableOutOfRange {
                index: var,
                arity: self.arity,
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.check_arity(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.check_arity(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.check_arity(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(MultiPoly::zero(self.arity));
        }
        // Multiply integer numerators over common denominators, so the inner
        // loop never reduces fractions.
        let (da, na) = self.integer_form();
        let (db, nb) = other.integer_form();
        let mut acc: BTreeMap<Monomial, BigInt> = BTreeMap::new();
        for (ma, ca) in &na {
            for (mb, cb) in &nb {
                let v = ca * cb;
                match acc.entry(ma.mul(mb)) {
                    std::collections::btree_map::Entry::Vacant(e) => {
                        e.insert(v);
                    }
                    std::collections::btree_map::Entry::Occupied(mut e) => {
                        *e.get_mut() += v;
                    }
                }
            }
        }
        let den = da * db;
        Ok(MultiPoly {
            arity: self.arity,
            terms: acc
                .into_iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|(m, c)| (m, BigRat::new(c, den.clone())))
                .collect(),
        })
    }

    /// `(d, [(m, n_m)])` with `self = Σ (n_m / d)·m`, `d` the lcm of the denominators.
    fn integer_form(&self) -> (BigInt, Vec<(&Monomial, BigInt)>) {
        let den = self
            .terms
            .values()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let nums = self
            .terms
            .iter()
            .map(|(m, c)| (m, c.numer() * (&den / c.denom())))
            .collect();
        (den, nums)
    }

    pub fn pow(&self, e: u32) -> MultiPoly {
        let mut result = MultiPoly::one(self.arity);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub fn scale(&self, c: &BigRat) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(self.arity);
        }
        MultiPoly {
            arity: self.arity,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &BigRat) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(self.arity);
        }
        MultiPoly {
            arity: self.arity,
            terms: self.terms.iter().map(|(k, v)| (k.mul(m), v * c)).collect(),
        }
    }

    /// Exact quotient `self / divisor`, or `None` when the division leaves a remainder.
    pub fn div_exact(&self, divisor: &MultiPoly) -> Option<MultiPoly> {
        assert_eq!(self.arity, divisor.arity, "div_exact arity mismatch");
        let (dm, dc) = divisor.leading_term()?;
        if divisor.num_terms() == 1 {
            let mut terms = BTreeMap::new();
            for (m, c) in &self.terms {
                terms.insert(m.div(dm)?, c / dc);
            }
            return Some(MultiPoly {
                arity: self.arity,
                terms,
            });
        }
        let mut rem = self.clone();
        let mut quot = MultiPoly::zero(self.arity);
        while let Some((rm, rc)) = rem.leading_term() {
            let qm = rm.div(dm)?;
            let qc = rc / dc;
            rem = &rem - &divisor.mul_monomial(&qm, &qc);
            quot.add_term(qm, qc);
        }
        Some(quot)
    }

    pub fn evaluate(&self, point: &[BigRat]) -> Result<BigRat> {
        if point.len() != self.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                found: point.len(),
            });
        }
        let mut powers: Vec<Vec<BigRat>> = point.iter().map(|v| vec![BigRat::one(), v.clone()]).collect();
        let mut acc = BigRat::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let table = &mut powers[i];
                while table.len() <= e as usize {
                    let next = table.last().unwrap() * &point[i];
                    table.push(next);
                }
                t *= &table[e as usize];
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Composition: variable `i` is replaced by `bindings[i]` when bound, and
    /// otherwise passes through as variable `i` of the target ring.
    ///
    /// The target arity is the common arity of the bound polynomials, or the
    /// source arity when nothing is bound.
    pub fn substitute(&self, bindings: &[Option<&MultiPoly>]) -> Result<MultiPoly> {
        if bindings.len() != self.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                found: bindings.len(),
            });
        }
        let mut target = None;
        for b in bindings.iter().flatten() {
            match target {
                None => target = Some(b.arity),
                Some(t) if t != b.arity => {
                    return Err(Error::ArityMismatch {
                        expected: t,
                        found: b.arity,
                    })
                }
                _ => {}
            }
        }
        let target = target.unwrap_or(self.arity);
        let images = bindings
            .iter()
            .enumerate()
            .map(|(i, b)| match b {
                Some(p) => Ok((*p).clone()),
                None if i < target => Ok(MultiPoly::var(target, i)),
                None => Err(Error::VariableOutOfRange {
                    index: i,
                    arity: target,
                }),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(self.compose_with(&images, target))
    }

    /// Substitutes `images[i]` for every variable `i` (all images share one arity).
    pub fn compose(&self, images: &[MultiPoly]) -> Result<MultiPoly> {
        let bindings: Vec<Option<&MultiPoly>> = images.iter().map(Some).collect();
        self.substitute(&bindings)
    }

    fn compose_with(&self, images: &[MultiPoly], target: usize) -> MultiPoly {
        let terms: Vec<(&Monomial, &BigRat)> = self.terms.iter().collect();
        compose_horner(&terms, 0, images, target)
    }

    pub fn partial_derivative(&self, var: usize) -> Result<MultiPoly> {
        self.check_var(var)?;
        let mut out = MultiPoly::zero(self.arity);
        for (m, c) in &self.terms {
            let e = m.0[var];
            if e == 0 {
                continue;
            }
            let mut dm = m.clone();
            dm.0[var] -= 1;
            out.add_term(dm, c * BigRat::from_integer(e.into()));
        }
        Ok(out)
    }

    /// Reorders / embeds variables: variable `i` of `self` becomes variable
    /// `mapping[i]` of a ring of arity `new_arity`.
    pub fn remap(&self, mapping: &[usize], new_arity: usize) -> MultiPoly {
        assert_eq!(mapping.len(), self.arity);
        let mut out = MultiPoly::zero(new_arity);
        for (m, c) in &self.terms {
            let mut e = vec![0u32; new_arity];
            for (i, &k) in m.0.iter().enumerate() {
                e[mapping[i]] += k;
            }
            out.add_term(Monomial(e), c.clone());
        }
        out
    }

    /// Coefficients with respect to `var`, indexed by power; each coefficient
    /// lives in the same ring and is free of `var`.
    pub fn coefficients_in(&self, var: usize) -> Vec<MultiPoly> {
        let deg = match self.degree_in(var) {
            Some(d) => d as usize,
            None => return Vec::new(),
        };
        let mut out = vec![MultiPoly::zero(self.arity); deg + 1];
        for (m, c) in &self.terms {
            let mut stripped = m.clone();
            let e = std::mem::replace(&mut stripped.0[var], 0);
            out[e as usize].terms.insert(stripped, c.clone());
        }
        out
    }

    /// Inverse of [`coefficients_in`](Self::coefficients_in).
    pub fn from_coefficients_in(arity: usize, var: usize, coeffs: &[MultiPoly]) -> MultiPoly {
        let mut out = MultiPoly::zero(arity);
        for (k, c) in coeffs.iter().enumerate() {
            for (m, v) in &c.terms {
                let mut e = m.clone();
                e.0[var] += k as u32;
                out.add_term(e, v.clone());
            }
        }
        out
    }

    /// Sets the given variables to values, keeping the ring arity.
    pub fn partial_evaluate(&self, values: &[(usize, BigRat)]) -> MultiPoly {
        let mut out = MultiPoly::zero(self.arity);
        for (m, c) in &self.terms {
            let mut e = m.clone();
            let mut coeff = c.clone();
            for (var, v) in values {
                let k = std::mem::replace(&mut e.0[*var], 0);
                if k > 0 {
                    coeff *= num_traits::pow(v.clone(), k as usize);
                }
            }
            out.add_term(e, coeff);
        }
        out
    }

    /// Scales so the leading (graded-lex) coefficient is 1.
    pub fn monic(&self) -> MultiPoly {
        match self.leading_term() {
            Some((_, c)) => self.scale(&c.recip()),
            None => self.clone(),
        }
    }

    /// Scales to coprime integer coefficients with a positive leading coefficient.
    pub fn primitive_integer(&self) -> MultiPoly {
        let Some((_, lc)) = self.leading_term() else {
            return self.clone();
        };
        let mut den = num_bigint::BigInt::one();
        let mut num = num_bigint::BigInt::zero();
        for c in self.terms.values() {
            den = den.lcm(c.denom());
            num = num.gcd(c.numer());
        }
        let mut factor = BigRat::new(den, num);
        if lc.is_negative() {
            factor = -factor;
        }
        self.scale(&factor)
    }

    pub fn display_with<'a>(&'a self, names: &'a [String]) -> PolyDisplay<'a> {
        PolyDisplay { poly: self, names }
    }
}

/// Default variable names: `x, y` for two variables, `x1..xn` otherwise.
pub fn default_names(arity: usize) -> Vec<String> {
    if arity == 2 {
        vec!["x".into(), "y".into()]
    } else {
        (1..=arity).map(|i| format!("x{i}")).collect()
    }
}

pub struct PolyDisplay<'a> {
    poly: &'a MultiPoly,
    names: &'a [String],
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.poly.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mut factors = Vec::new();
            if !abs.is_one() || m.is_one() {
                factors.push(abs.to_string());
            }
            for (i, &e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(self.names[i].clone()),
                    _ => factors.push(format!("{}^{}", self.names[i], e)),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

/// Recursive Horner evaluation in variable `var` and up, so every product has
/// one of the (small) images as a factor.
fn compose_horner(
    terms: &[(&Monomial, &BigRat)],
    var: usize,
    images: &[MultiPoly],
    target: usize,
) -> MultiPoly {
    if var == images.len() {
        let mut out = MultiPoly::zero(target);
        for (_, c) in terms {
            out.add_term(Monomial::one(target), (*c).clone());
        }
        return out;
    }
    let mut groups: BTreeMap<u32, Vec<(&Monomial, &BigRat)>> = BTreeMap::new();
    for &(m, c) in terms {
        groups.entry(m.0[var]).or_default().push((m, c));
    }
    let Some(&top) = groups.keys().next_back() else {
        return MultiPoly::zero(target);
    };
    let mut acc = MultiPoly::zero(target);
    for e in (0..=top).rev() {
        if !acc.is_zero() {
            acc = &acc * &images[var];
        }
        if let Some(group) = groups.get(&e) {
            acc = &acc + &compose_horner(group, var + 1, images, target);
        }
    }
    acc
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = default_names(self.arity);
        write!(f, "{}", self.display_with(&names))
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $impl:ident) => {
        impl std::ops::$trait<&MultiPoly> for &MultiPoly {
            type Output = MultiPoly;
            fn $method(self, rhs: &MultiPoly) -> MultiPoly {
                self.$impl(rhs).expect("polynomial arity mismatch")
            }
        }
        impl std::ops::$trait<MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $method(self, rhs: MultiPoly) -> MultiPoly {
                (&self).$impl(&rhs).expect("polynomial arity mismatch")
            }
        }
    };
}

forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);

impl std::ops::Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly {
            arity: self.arity,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

/// A polynomial map `P = (f1, ..., fm)`, each component in the same ring.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PolyMap {
    components: Vec<MultiPoly>,
}

impl PolyMap {
    pub fn new(components: Vec<MultiPoly>) -> Result<Self> {
        let Some(first) = components.first() else {
            return Err(Error::domain("polynomial map with no components"));
        };
        let arity = first.arity();
        if let Some(bad) = components.iter().find(|c| c.arity() != arity) {
            return Err(Error::ArityMismatch {
                expected: arity,
                found: bad.arity(),
            });
        }
        Ok(PolyMap { components })
    }

    /// A map whose component count equals its arity.
    pub fn square(components: Vec<MultiPoly>) -> Result<Self> {
        let map = Self::new(components)?;
        map.require_square()?;
        Ok(map)
    }

    pub fn identity(n: usize) -> Self {
        PolyMap {
            components: (0..n).map(|i| MultiPoly::var(n, i)).collect(),
        }
    }

    pub fn components(&self) -> &[MultiPoly] {
        &self.components
    }

    pub fn component(&self, i: usize) -> &MultiPoly {
        &self.components[i]
    }

    pub fn arity(&self) -> usize {
        self.components[0].arity()
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn is_square(&self) -> bool {
        self.arity() == self.len()
    }

    pub(crate) fn require_square(&self) -> Result<()> {
        if !self.is_square() {
            return Err(Error::ArityMismatch {
                expected: self.arity(),
                found: self.len(),
            });
        }
        Ok(())
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == PolyMap::identity(self.len())
    }

    /// Maximum total degree over the components (`None` if all are zero).
    pub fn degree(&self) -> Option<u32> {
        self.components.iter().filter_map(MultiPoly::total_degree).max()
    }

    pub fn evaluate(&self, point: &[BigRat]) -> Result<Vec<BigRat>> {
        self.components.iter().map(|c| c.evaluate(point)).collect()
    }

    /// `self ∘ inner`, i.e. `x ↦ self(inner(x))`.
    pub fn compose(&self, inner: &PolyMap) -> Result<PolyMap> {
        if self.arity() != inner.len() {
            return Err(Error::ArityMismatch {
                expected: self.arity(),
                found: inner.len(),
            });
        }
        let components = self
            .components
            .iter()
            .map(|c| c.compose(&inner.components))
            .collect::<Result<Vec<_>>>()?;
        Ok(PolyMap { components })
    }

    /// Matrix of partial derivatives, rows indexed by component.
    pub fn jacobian_matrix(&self) -> Vec<Vec<MultiPoly>> {
        self.components
            .iter()
            .map(|c| {
                (0..c.arity())
                    .map(|j| c.partial_derivative(j).expect("index within arity"))
                    .collect()
            })
            .collect()
    }

    pub fn jacobian_det(&self) -> Result<MultiPoly> {
        self.require_square()?;
        Ok(determinant(&self.jacobian_matrix(), self.arity()))
    }

    /// `Some(c)` when the Jacobian determinant is the nonzero constant `c`.
    pub fn keller_constant(&self) -> Result<Option<BigRat>> {
        let j = self.jacobian_det()?;
        Ok(j.as_constant().filter(|c| !c.is_zero()))
    }

    pub fn is_keller(&self) -> Result<bool> {
        Ok(self.keller_constant()?.is_some())
    }

    /// `self^t` under composition; `t = 0` gives the identity.
    pub fn iterate(&self, t: u32) -> Result<PolyMap> {
        self.require_square()?;
        let mut acc = PolyMap::identity(self.len());
        for _ in 0..t {
            acc = self.compose(&acc)?;
        }
        Ok(acc)
    }

    pub fn display_with<'a>(&'a self, names: &'a [String]) -> MapDisplay<'a> {
        MapDisplay { map: self, names }
    }
}

pub struct MapDisplay<'a> {
    map: &'a PolyMap,
    names: &'a [String],
}

impl fmt::Display for MapDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.map.components.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", c.display_with(self.names))?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for PolyMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = default_names(self.arity());
        write!(f, "{}", self.display_with(&names))
    }
}

/// Laplace expansion along the first row; matrices here are at most a few rows.
fn determinant(m: &[Vec<MultiPoly>], arity: usize) -> MultiPoly {
    let n = m.len();
    match n {
        0 => MultiPoly::one(arity),
        1 => m[0][0].clone(),
        2 => &(&m[0][0] * &m[1][1]) - &(&m[0][1] * &m[1][0]),
        _ => {
            let mut acc = MultiPoly::zero(arity);
            for j in 0..n {
                if m[0][j].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<MultiPoly>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|(k, _)| *k != j)
                            .map(|(_, v)| v.clone())
                            .collect()
                    })
                    .collect();
                let term = &m[0][j] * &determinant(&minor, arity);
                acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
            }
            acc
        }
    }
}

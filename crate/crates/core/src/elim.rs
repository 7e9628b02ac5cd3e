//! Elimination: resultants and gcds of multivariate polynomials through the
//! subresultant polynomial remainder sequence, and the annihilating
//! polynomials `Φ_i(u1, u2, z)` of a planar polynomial map.
//!
//! A multivariate polynomial is viewed as a univariate polynomial in one
//! chosen variable whose coefficients are polynomials (in the same ring)
//! free of that variable. All divisions inside the sequence are exact.

use num_traits::{One, Signed, Zero};

use crate::arith::BigRat;
use crate::error::{Error, Result};
use crate::poly::{MultiPoly, PolyMap};
use crate::uni::UniPoly;

type Coeffs = Vec<MultiPoly>;

fn deg(a: &Coeffs) -> Option<usize> {
    a.len().checked_sub(1)
}

fn lc(a: &Coeffs) -> &MultiPoly {
    a.last().expect("leading coefficient of zero polynomial")
}

fn trim(mut a: Coeffs) -> Coeffs {
    while a.last().is_some_and(MultiPoly::is_zero) {
        a.pop();
    }
    a
}

fn div_coeffs(a: &Coeffs, d: &MultiPoly) -> Coeffs {
    a.iter()
        .map(|c| c.div_exact(d).expect("subresultant division is exact"))
        .collect()
}

/// Pseudo-remainder `lc(b)^(deg a - deg b + 1) · a mod b`.
fn prem(a: &Coeffs, b: &Coeffs) -> Coeffs {
    let db = deg(b).unwrap();
    let lcb = lc(b);
    let mut r = a.clone();
    let mut steps = (deg(a).unwrap() + 1).saturating_sub(db);
    while let Some(dr) = deg(&r).filter(|&d| d >= db) {
        let lr = lc(&r).clone();
        let shift = dr - db;
        for c in r.iter_mut() {
            *c = &*c * lcb;
        }
        for (j, bj) in b.iter().enumerate() {
            r[shift + j] = &r[shift + j] - &(&lr * bj);
        }
        r = trim(r);
        steps -= 1;
    }
    if steps > 0 {
        let f = lcb.pow(steps as u32);
        for c in r.iter_mut() {
            *c = &*c * &f;
        }
    }
    r
}

enum PrsEnd {
    /// The sequence reached a nonzero constant; carries the resultant.
    Resultant(MultiPoly),
    /// A zero remainder: the inputs share the carried factor (degree ≥ 1).
    Zero(Coeffs),
}

/// Runs the subresultant PRS on `a`, `b` with `deg a ≥ deg b ≥ 1`,
/// tracking the sign of the Sylvester-determinant resultant.
fn subresultant(mut a: Coeffs, mut b: Coeffs, mut sign: bool) -> PrsEnd {
    let arity = a[0].arity();
    let mut g = MultiPoly::one(arity);
    let mut h = MultiPoly::one(arity);
    loop {
        let da = deg(&a).unwrap();
        let db = deg(&b).unwrap();
        let delta = (da - db) as u32;
        if da % 2 == 1 && db % 2 == 1 {
            sign = !sign;
        }
        let r = prem(&a, &b);
        a = b;
        if r.is_empty() {
            return PrsEnd::Zero(a);
        }
        b = div_coeffs(&r, &(&g * &h.pow(delta)));
        g = lc(&a).clone();
        if delta > 0 {
            h = g
                .pow(delta)
                .div_exact(&h.pow(delta - 1))
                .expect("subresultant division is exact");
        }
        if deg(&b) == Some(0) {
            let da = deg(&a).unwrap() as u32;
            let res = lc(&b)
                .pow(da)
                .div_exact(&h.pow(da - 1))
                .expect("subresultant division is exact");
            let res = if sign { -&res } else { res };
            return PrsEnd::Resultant(res);
        }
    }
}

/// Resultant with respect to `var` (sign of the Sylvester determinant with
/// the rows of `p` first). Both inputs must have positive degree in `var`.
pub fn multi_resultant(p: &MultiPoly, q: &MultiPoly, var: usize) -> Result<MultiPoly> {
    if p.arity() != q.arity() {
        return Err(Error::ArityMismatch {
            expected: p.arity(),
            found: q.arity(),
        });
    }
    if var >= p.arity() {
        return Err(Error::VariableOutOfRange {
            index: var,
            arity: p.arity(),
        });
    }
    let a = p.coefficients_in(var);
    let b = q.coefficients_in(var);
    let (Some(da), Some(db)) = (deg(&a), deg(&b)) else {
        return Err(Error::domain("resultant of a zero polynomial"));
    };
    if da == 0 || db == 0 {
        return Err(Error::domain(format!(
            "resultant needs positive degree in variable {var}"
        )));
    }
    let end = if da >= db {
        subresultant(a, b, false)
    } else {
        subresultant(b, a, da % 2 == 1 && db % 2 == 1)
    };
    Ok(match end {
        PrsEnd::Resultant(r) => r,
        PrsEnd::Zero(_) => MultiPoly::zero(p.arity()),
    })
}

/// Gcd of the coefficients of `p` with respect to `var`.
pub fn content_in(p: &MultiPoly, var: usize) -> MultiPoly {
    p.coefficients_in(var)
        .iter()
        .filter(|c| !c.is_zero())
        .fold(MultiPoly::zero(p.arity()), |g, c| multi_gcd(&g, c))
}

/// `p` divided by its content with respect to `var`.
pub fn primitive_part_in(p: &MultiPoly, var: usize) -> MultiPoly {
    if p.is_zero() {
        return p.clone();
    }
    p.div_exact(&content_in(p, var))
        .expect("content divides its polynomial")
}

/// Greatest common divisor over ℚ, normalized to leading coefficient 1
/// (graded-lex); `gcd(0, 0) = 0`. Recursive on the variables: contents by
/// recursion, primitive parts through the subresultant sequence.
pub fn multi_gcd(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    assert_eq!(a.arity(), b.arity(), "gcd arity mismatch");
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return MultiPoly::one(a.arity());
    }
    let var = (0..a.arity())
        .rev()
        .find(|&v| a.involves(v) || b.involves(v))
        .expect("nonconstant polynomial involves a variable");
    if !a.involves(var) {
        return multi_gcd(a, &content_in(b, var));
    }
    if !b.involves(var) {
        return multi_gcd(&content_in(a, var), b);
    }
    let ca = content_in(a, var);
    let cb = content_in(b, var);
    let c = multi_gcd(&ca, &cb);
    let pa = a.div_exact(&ca).expect("content divides").coefficients_in(var);
    let pb = b.div_exact(&cb).expect("content divides").coefficients_in(var);
    let (pa, pb) = if deg(&pa) >= deg(&pb) { (pa, pb) } else { (pb, pa) };
    let g = match subresultant(pa, pb, false) {
        PrsEnd::Zero(last) => {
            primitive_part_in(&MultiPoly::from_coefficients_in(a.arity(), var, &last), var)
        }
        PrsEnd::Resultant(_) => MultiPoly::one(a.arity()),
    };
    (&c * &g).monic()
}

/// Annihilating polynomial `Φ(u1, u2, z)` of coordinate `coord` (1 or 2) of a
/// planar map `P = (f, g)`: `Φ(f, g, x_coord) = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Annihilator {
    pub coord: usize,
    /// Polynomial in the ring `(u1, u2, z)`, integer-primitive, with positive
    /// leading coefficient of its `z`-leading coefficient.
    pub phi: MultiPoly,
    pub squarefree: bool,
    pub verified: bool,
    pub deg_z: u32,
    z_coeffs: Vec<MultiPoly>,
}

/// Variable names of the annihilator ring.
pub fn annihilator_names() -> Vec<String> {
    vec!["u1".into(), "u2".into(), "z".into()]
}

/// Univariate specialization `Φ(u0, v0, z)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Specialized {
    pub poly: UniPoly,
    /// The leading `z`-coefficient vanished at `(u0, v0)`.
    pub degree_drop: bool,
}

impl Annihilator {
    /// Coefficients `a_k(u1, u2)` of `z^k`, as polynomials of the `(u1, u2, z)` ring.
    pub fn z_coefficients(&self) -> &[MultiPoly] {
        &self.z_coeffs
    }

    pub fn specialize(&self, u0: &BigRat, v0: &BigRat) -> Result<Specialized> {
        let point = [u0.clone(), v0.clone(), BigRat::zero()];
        let values = self
            .z_coeffs
            .iter()
            .map(|c| c.evaluate(&point))
            .collect::<Result<Vec<_>>>()?;
        let poly = UniPoly::new(values);
        if poly.is_zero() {
            return Err(Error::DegenerateSpecialization);
        }
        let degree_drop = poly.degree() != Some(self.deg_z as usize);
        Ok(Specialized { poly, degree_drop })
    }
}

/// Annihilator of coordinate `coord` of a Keller map.
pub fn annihilator(p: &PolyMap, coord: usize) -> Result<Annihilator> {
    if !(p.arity() == 2 && p.is_square()) {
        return Err(Error::precondition("annihilators are built for planar maps"));
    }
    if !p.is_keller()? {
        return Err(Error::precondition(
            "map does not have a nonzero constant Jacobian determinant",
        ));
    }
    annihilator_unchecked(p, coord)
}

/// As [`annihilator`] without the Keller check: any planar map whose
/// components have no common factor after shifting works. Used for
/// diagnostic censuses of non-Keller maps.
pub fn annihilator_unchecked(p: &PolyMap, coord: usize) -> Result<Annihilator> {
    if !(p.arity() == 2 && p.is_square()) {
        return Err(Error::precondition("annihilators are built for planar maps"));
    }
    if coord != 1 && coord != 2 {
        return Err(Error::precondition("coordinate must be 1 or 2"));
    }
    // Ring (x, y, u1, u2).
    let f = &p.component(0).remap(&[0, 1], 4) - &MultiPoly::var(4, 2);
    let g = &p.component(1).remap(&[0, 1], 4) - &MultiPoly::var(4, 3);
    let (keep, drop) = if coord == 1 { (0, 1) } else { (1, 0) };
    let eliminant = match (f.involves(drop), g.involves(drop)) {
        (true, true) => multi_resultant(&f, &g, drop)?,
        (false, _) if f.involves(keep) => f.clone(),
        (_, false) if g.involves(keep) => g.clone(),
        _ => return Err(Error::CommonFactor),
    };
    if eliminant.is_zero() {
        return Err(Error::CommonFactor);
    }
    // (x, y, u1, u2) -> (u1, u2, z) with the kept coordinate renamed z.
    let mut mapping = [2usize, 2, 0, 1];
    mapping[drop] = 2;
    let renamed = eliminant.remap(&mapping, 3);
    if !renamed.involves(2) {
        // The components are algebraically dependent: the map is not dominant.
        return Err(Error::CommonFactor);
    }
    let prim = primitive_part_in(&renamed, 2);
    let dz = prim.partial_derivative(2)?;
    let repeated = multi_gcd(&prim, &dz);
    let sqf = prim.div_exact(&repeated).expect("gcd divides");
    let phi = normalize(&sqf);

    let x_coord = MultiPoly::var(2, coord - 1);
    let check = phi.substitute(&[Some(p.component(0)), Some(p.component(1)), Some(&x_coord)])?;
    if !check.is_zero() {
        return Err(Error::Internal(format!(
            "annihilator for coordinate {coord} does not vanish on the map"
        )));
    }
    let deg_z = phi.degree_in(2).unwrap_or(0);
    let z_coeffs = phi.coefficients_in(2);
    Ok(Annihilator {
        coord,
        phi,
        squarefree: true,
        verified: true,
        deg_z,
        z_coeffs,
    })
}

fn normalize(phi: &MultiPoly) -> MultiPoly {
    let prim = phi.primitive_integer();
    let coeffs = prim.coefficients_in(2);
    let lead_positive = coeffs
        .last()
        .and_then(|c| c.leading_term())
        .map(|(_, c)| c.is_positive())
        .unwrap_or(true);
    if lead_positive {
        prim
    } else {
        prim.scale(&-BigRat::one())
    }
}

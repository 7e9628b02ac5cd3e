//! Polynomial inverses of polynomial maps.
//!
//! Two routes: the annihilator route for planar Keller maps (both
//! annihilators linear in `z` give `x_i` as a rational function of `(f, g)`,
//! which must in fact be a polynomial), and a generic ansatz solver that
//! fits unknown coefficients of `G` to `G ∘ P = id` by exact linear algebra.
//! The ansatz solver is the authoritative one.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::arith::BigRat;
use crate::elim::annihilator;
use crate::error::{Error, Result};
use crate::linalg;
use crate::poly::{Monomial, MultiPoly, PolyMap};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum InverseStatus {
    InverseFound,
    NoInverseWithinBound,
    /// The Jacobian determinant vanishes identically, so no inverse can exist.
    NotKeller,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Certificate {
    AnnihilatorDegreeOne,
    Ansatz,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InverseResult {
    pub status: InverseStatus,
    pub inverse: Option<PolyMap>,
    pub certificate: Option<Certificate>,
    pub degree_bound_used: u32,
    /// Constant Jacobian determinant, `None` when it is not a nonzero constant.
    pub keller: Option<BigRat>,
}

/// `P∘G = id` and `G∘P = id`, exactly.
pub fn verify_inverse(p: &PolyMap, g: &PolyMap) -> Result<bool> {
    if p.arity() != g.arity() || p.len() != g.len() {
        return Err(Error::ArityMismatch {
            expected: p.arity(),
            found: g.arity(),
        });
    }
    Ok(p.compose(g)?.is_identity() && g.compose(p)?.is_identity())
}

/// Inverse of a planar Keller map read off its annihilators when both have
/// degree 1 in `z`; `Ok(None)` when either has higher degree (inconclusive).
pub fn rational_inverse_from_annihilator(p: &PolyMap) -> Result<Option<PolyMap>> {
    let phi = annihilator(p, 1)?;
    let psi = annihilator(p, 2)?;
    if phi.deg_z != 1 || psi.deg_z != 1 {
        return Ok(None);
    }
    let mut components = Vec::with_capacity(2);
    for ann in [&phi, &psi] {
        let coeffs = ann.z_coefficients();
        let (a0, a1) = (&coeffs[0], &coeffs[1]);
        if a1.is_zero() {
            return Err(Error::Internal("annihilator does not depend on z".into()));
        }
        let q = (-a0).div_exact(a1).ok_or_else(|| {
            Error::Anomaly(format!(
                "coordinate {} is a non-polynomial rational function of the map",
                ann.coord
            ))
        })?;
        components.push(q.remap(&[0, 1, 0], 2));
    }
    let g = PolyMap::square(components)?;
    if !verify_inverse(p, &g)? {
        return Err(Error::Anomaly(
            "rational inverse from annihilators fails to invert the map".into(),
        ));
    }
    Ok(Some(g))
}

/// Default ansatz degree bound `deg(P)^(n-1)`.
pub fn default_degree_bound(p: &PolyMap) -> u32 {
    let d = p.degree().unwrap_or(0).max(1);
    d.pow(p.len().saturating_sub(1) as u32)
}

/// Monomials of total degree ≤ `d` in `n` variables, ascending graded-lex.
fn monomials_up_to(n: usize, d: u32) -> Vec<Monomial> {
    fn rec(n: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if cur.len() == n {
            out.push(Monomial::new(cur.clone()));
            return;
        }
        for e in 0..=left {
            cur.push(e);
            rec(n, left - e, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, d, &mut Vec::new(), &mut out);
    out.sort();
    out
}

/// Images `m(P)` of monomials, each built from a smaller one times a component.
struct ImageCache<'a> {
    p: &'a PolyMap,
    images: BTreeMap<Monomial, MultiPoly>,
}

impl<'a> ImageCache<'a> {
    fn new(p: &'a PolyMap) -> Self {
        let n = p.arity();
        let mut images = BTreeMap::new();
        images.insert(Monomial::one(n), MultiPoly::one(n));
        ImageCache { p, images }
    }

    fn get(&mut self, m: &Monomial) -> &MultiPoly {
        if !self.images.contains_key(m) {
            let i = m
                .exponents()
                .iter()
                .position(|&e| e > 0)
                .expect("constant monomial is cached");
            let mut smaller = m.exponents().to_vec();
            smaller[i] -= 1;
            let smaller = Monomial::new(smaller);
            let base = self.get(&smaller).clone();
            let img = &base * self.p.component(i);
            self.images.insert(m.clone(), img);
        }
        &self.images[m]
    }
}

/// Integer points ordered by max-norm, then lexicographically.
fn sample_points(n: usize, count: usize) -> Vec<Vec<i64>> {
    let mut out = Vec::with_capacity(count);
    let mut radius = 0i64;
    while out.len() < count {
        let mut shell = Vec::new();
        let mut cur = vec![-radius; n];
        loop {
            if cur.iter().any(|c| c.abs() == radius) {
                shell.push(cur.clone());
            }
            let Some(i) = (0..n).rev().find(|&i| cur[i] < radius) else {
                break;
            };
            cur[i] += 1;
            for c in &mut cur[i + 1..] {
                *c = -radius;
            }
        }
        out.extend(shell);
        radius += 1;
    }
    out.truncate(count);
    out
}

/// Outcome of fitting `G ∘ P = id` on sample points only.
enum SampleFit {
    /// No `G` of this degree fits the samples, hence none exists.
    Inconsistent,
    /// The samples determine `G` uniquely; it is the only possible candidate.
    Unique(PolyMap),
    /// Rank deficient on the samples; the coefficient system must decide.
    Undetermined,
}

fn fit_on_samples(p: &PolyMap, unknowns: &[Monomial]) -> SampleFit {
    let n = p.arity();
    let d = unknowns.iter().map(Monomial::total_degree).max().unwrap_or(0) as usize;
    let points = sample_points(n, unknowns.len() + 2 * n + 4);
    let mut a = Vec::with_capacity(points.len());
    let mut b = Vec::with_capacity(points.len());
    for pt in &points {
        let arg: Vec<BigRat> = pt.iter().map(|&c| BigRat::from_integer(c.into())).collect();
        let Ok(image) = p.evaluate(&arg) else {
            return SampleFit::Undetermined;
        };
        let powers: Vec<Vec<BigRat>> = image
            .iter()
            .map(|v| {
                let mut pw = vec![BigRat::from_integer(1.into())];
                for k in 0..d {
                    let next = &pw[k] * v;
                    pw.push(next);
                }
                pw
            })
            .collect();
        a.push(
            unknowns
                .iter()
                .map(|m| {
                    m.exponents()
                        .iter()
                        .zip(&powers)
                        .fold(BigRat::from_integer(1.into()), |acc, (&e, pw)| acc * &pw[e as usize])
                })
                .collect::<Vec<_>>(),
        );
        b.push(arg);
    }
    match linalg::solve_ranked(&a, &b, unknowns.len()) {
        None => SampleFit::Inconsistent,
        Some((x, rank)) if rank == unknowns.len() => {
            match PolyMap::square(assemble(n, unknowns, &x)) {
                Ok(g) => SampleFit::Unique(g),
                Err(_) => SampleFit::Undetermined,
            }
        }
        Some(_) => SampleFit::Undetermined,
    }
}

fn assemble(n: usize, unknowns: &[Monomial], x: &[Vec<BigRat>]) -> Vec<MultiPoly> {
    (0..n)
        .map(|i| MultiPoly::from_terms(n, unknowns.iter().zip(x).map(|(m, row)| (m.clone(), row[i].clone()))))
        .collect()
}

/// Fits `G` of total degree ≤ `d` to `G ∘ P = id`; `None` if inconsistent.
///
/// Sample points settle most degrees cheaply; the coefficient system is
/// built only when they leave the fit undetermined.
fn fit_degree(p: &PolyMap, cache: &mut ImageCache<'_>, d: u32) -> Option<PolyMap> {
    let n = p.arity();
    let unknowns = monomials_up_to(n, d);
    match fit_on_samples(p, &unknowns) {
        SampleFit::Inconsistent => return None,
        SampleFit::Unique(g) => return Some(g),
        SampleFit::Undetermined => {}
    }
    let mut row_index: BTreeMap<Monomial, usize> = BTreeMap::new();
    let mut entries: Vec<Vec<(usize, BigRat)>> = Vec::new();
    for m in &unknowns {
        let img = cache.get(m);
        let mut col = Vec::with_capacity(img.num_terms());
        for (mono, c) in img.terms() {
            let next = row_index.len();
            let r = *row_index.entry(mono.clone()).or_insert(next);
            col.push((r, c.clone()));
        }
        entries.push(col);
    }
    for i in 0..n {
        let next = row_index.len();
        row_index.entry(Monomial::var(n, i)).or_insert(next);
    }
    let rows = row_index.len();
    let mut a = vec![vec![BigRat::default(); unknowns.len()]; rows];
    for (j, col) in entries.into_iter().enumerate() {
        for (r, c) in col {
            a[r][j] = c;
        }
    }
    let mut b = vec![vec![BigRat::default(); n]; rows];
    for i in 0..n {
        b[row_index[&Monomial::var(n, i)]][i] = BigRat::from_integer(1.into());
    }
    let x = linalg::solve(&a, &b, unknowns.len())?;
    PolyMap::square(assemble(n, &unknowns, &x)).ok()
}

/// Searches for a polynomial inverse of degree at most `degree_bound`
/// (default [`default_degree_bound`]), trying increasing degrees.
pub fn ansatz_inverse(p: &PolyMap, degree_bound: Option<u32>) -> Result<InverseResult> {
    p.require_square()?;
    let jac = p.jacobian_det()?;
    let keller = jac.as_constant().filter(|c| *c != BigRat::default());
    let bound = degree_bound.unwrap_or_else(|| default_degree_bound(p));
    if jac.is_zero() {
        return Ok(InverseResult {
            status: InverseStatus::NotKeller,
            inverse: None,
            certificate: None,
            degree_bound_used: bound,
            keller,
        });
    }
    let mut cache = ImageCache::new(p);
    for d in 1..=bound {
        if let Some(g) = fit_degree(p, &mut cache, d) {
            if verify_inverse(p, &g)? {
                return Ok(InverseResult {
                    status: InverseStatus::InverseFound,
                    inverse: Some(g),
                    certificate: Some(Certificate::Ansatz),
                    degree_bound_used: d,
                    keller,
                });
            }
        }
    }
    Ok(InverseResult {
        status: InverseStatus::NoInverseWithinBound,
        inverse: None,
        certificate: None,
        degree_bound_used: bound,
        keller,
    })
}

/// Full inversion: the annihilator route first for planar Keller maps, then
/// the ansatz solver. When both succeed they must agree.
pub fn invert(p: &PolyMap, degree_bound: Option<u32>) -> Result<InverseResult> {
    let ansatz = ansatz_inverse(p, degree_bound)?;
    if p.arity() == 2 && ansatz.keller.is_some() {
        if let Some(g) = rational_inverse_from_annihilator(p)? {
            if let Some(h) = &ansatz.inverse {
                if *h != g {
                    return Err(Error::Anomaly(
                        "annihilator and ansatz inverses disagree".into(),
                    ));
                }
            }
            return Ok(InverseResult {
                status: InverseStatus::InverseFound,
                degree_bound_used: ansatz.degree_bound_used,
                inverse: Some(g),
                certificate: Some(Certificate::AnnihilatorDegreeOne),
                keller: ansatz.keller,
            });
        }
    }
    Ok(ansatz)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat_int;
    use proptest::prelude::*;

    fn x() -> MultiPoly {
        MultiPoly::var(2, 0)
    }
    fn y() -> MultiPoly {
        MultiPoly::var(2, 1)
    }
    fn map(f: MultiPoly, g: MultiPoly) -> PolyMap {
        PolyMap::square(vec![f, g]).unwrap()
    }

    #[test]
    fn annihilator_route_examples() {
        let p = map(&x() + &y().pow(2), y());
        let g = rational_inverse_from_annihilator(&p).unwrap().unwrap();
        assert_eq!(g, map(&x() - &y().pow(2), y()));
        let id = PolyMap::identity(2);
        assert_eq!(rational_inverse_from_annihilator(&id).unwrap().unwrap(), id);

        let inner = &y() + &x().pow(2);
        let nested = map(&x() + &inner.pow(2), inner);
        let expected = {
            let a = &x() - &y().pow(2);
            map(a.clone(), &y() - &a.pow(2))
        };
        if let Some(g) = rational_inverse_from_annihilator(&nested).unwrap() {
            assert_eq!(g, expected);
        }
        let sq = map(x().pow(2), y());
        assert!(rational_inverse_from_annihilator(&sq).is_err());
    }

    #[test]
    fn ansatz_examples() {
        let p = map(&x() + &y().pow(2), y());
        let r = ansatz_inverse(&p, None).unwrap();
        assert_eq!(r.status, InverseStatus::InverseFound);
        assert_eq!(r.certificate, Some(Certificate::Ansatz));
        assert_eq!(r.inverse.unwrap(), map(&x() - &y().pow(2), y()));

        let inner = &y() + &x().pow(2);
        let nested = map(&x() + &inner.pow(2), inner);
        let r = ansatz_inverse(&nested, None).unwrap();
        let a = &x() - &y().pow(2);
        assert_eq!(r.inverse.unwrap(), map(a.clone(), &y() - &a.pow(2)));

        let sq = map(x().pow(2), y());
        let r = ansatz_inverse(&sq, None).unwrap();
        assert_eq!(r.status, InverseStatus::NoInverseWithinBound);
        assert_eq!(r.keller, None);

        let flat = map(x(), x());
        assert_eq!(ansatz_inverse(&flat, None).unwrap().status, InverseStatus::NotKeller);
    }

    #[test]
    fn three_dimensional_ansatz() {
        let v = |i| MultiPoly::var(3, i);
        let p = PolyMap::square(vec![v(0), &v(1) + &v(0).pow(2), &v(2) + &(&v(0) * &v(1))]).unwrap();
        let r = ansatz_inverse(&p, None).unwrap();
        assert_eq!(r.status, InverseStatus::InverseFound);
        assert!(verify_inverse(&p, r.inverse.as_ref().unwrap()).unwrap());
    }

    #[test]
    fn verify_examples() {
        let p = map(&x() + &y().pow(2), y());
        assert!(verify_inverse(&p, &map(&x() - &y().pow(2), y())).unwrap());
        assert!(verify_inverse(&PolyMap::identity(2), &PolyMap::identity(2)).unwrap());
        assert!(!verify_inverse(&p, &PolyMap::identity(2)).unwrap());
        assert!(verify_inverse(&p, &PolyMap::identity(3)).is_err());
    }

    #[test]
    fn invert_prefers_annihilator_certificate() {
        let p = map(&(&x() * &k(2)) + &y().pow(3), y());
        let r = invert(&p, None).unwrap();
        assert_eq!(r.status, InverseStatus::InverseFound);
        assert_eq!(r.certificate, Some(Certificate::AnnihilatorDegreeOne));
        assert!(verify_inverse(&p, r.inverse.as_ref().unwrap()).unwrap());
    }

    fn k(c: i64) -> MultiPoly {
        MultiPoly::constant(2, rat_int(c))
    }

    fn elementary() -> impl Strategy<Value = PolyMap> {
        (proptest::collection::vec(-2i64..3, 1..4), any::<bool>()).prop_map(|(cs, swap)| {
            let (s, t) = if swap { (y(), x()) } else { (x(), y()) };
            let shift = cs
                .iter()
                .enumerate()
                .fold(MultiPoly::zero(2), |acc, (e, &c)| &acc + &(&s.pow(e as u32 + 1) * &k(c)));
            if swap {
                map(&t + &shift, s)
            } else {
                map(s, &t + &shift)
            }
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]
        #[test]
        fn inverse_of_composition(p in elementary(), q in elementary()) {
            let pq = p.compose(&q).unwrap();
            let ip = ansatz_inverse(&p, None).unwrap().inverse.unwrap();
            let iq = ansatz_inverse(&q, None).unwrap().inverse.unwrap();
            let ipq = ansatz_inverse(&pq, None).unwrap();
            prop_assert_eq!(ipq.status, InverseStatus::InverseFound);
            let g = ipq.inverse.unwrap();
            prop_assert_eq!(&g, &iq.compose(&ip).unwrap());
            // J(G) · J(P)∘G = 1
            let jg = g.jacobian_det().unwrap();
            let jp = pq.jacobian_det().unwrap().compose(g.components()).unwrap();
            prop_assert_eq!(&jg * &jp, MultiPoly::one(2));
        }
    }
}

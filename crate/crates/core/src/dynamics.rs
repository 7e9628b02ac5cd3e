//! Dynamics of candidate symmetries `Q` (maps with `P∘Q = P`): iteration,
//! finite-order detection, fixed points, and the classification of affine
//! maps by their linear part.

use num_traits::{One, Zero};
use serde::Serialize;

use crate::arith::{rat_sqrt_exact, BigRat};
use crate::elim::{multi_gcd, multi_resultant};
use crate::error::{Error, Result};
use crate::inverse::{ansatz_inverse, InverseStatus};
use crate::linalg;
use crate::poly::{MultiPoly, PolyMap};
use crate::uni::{rational_roots, UniPoly};

/// Default search horizon for [`detect_order`]. Finite-order elements of
/// `GL₂(ℚ)` have order 1, 2, 3, 4 or 6, so this is generous.
pub const DEFAULT_MAX_ORDER: u32 = 24;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrderResult {
    /// Smallest `t` with `Q^t = id`, if one was found.
    pub order: Option<u32>,
    pub iterations_checked: u32,
    /// The identity power found, `Q^order`, if any.
    #[serde(skip)]
    pub certificate: Option<PolyMap>,
}

/// `Q` composed with itself `t` times; `t = 0` gives the identity.
pub fn iterate_map(q: &PolyMap, t: u32) -> Result<PolyMap> {
    q.iterate(t)
}

/// Smallest `t ≤ t_max` with `Q^t` exactly the identity.
pub fn detect_order(q: &PolyMap, t_max: u32) -> Result<OrderResult> {
    q.require_square()?;
    let mut power = PolyMap::identity(q.len());
    for t in 1..=t_max {
        power = q.compose(&power)?;
        if power.is_identity() {
            return Ok(OrderResult {
                order: Some(t),
                iterations_checked: t,
                certificate: Some(power),
            });
        }
    }
    Ok(OrderResult {
        order: None,
        iterations_checked: t_max,
        certificate: None,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LocusKind {
    Empty,
    Finite,
    PositiveDimensional,
}

/// Fixed points of a planar map.
///
/// `kind` describes the locus over `ℂ`; `rational_points` lists the points
/// over `ℚ`, each verified exactly. For a finite locus `defining_polynomials`
/// holds the eliminants in `x` and in `y` (as polynomials in `(x, y)`); for a
/// positive-dimensional one it holds the common factor of `Q₁ − x` and
/// `Q₂ − y` (`0` for the identity map, whose fixed locus is the whole plane).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixedLocus {
    pub kind: LocusKind,
    pub rational_points: Vec<[BigRat; 2]>,
    pub defining_polynomials: Vec<MultiPoly>,
    /// The eliminants might have roots that do not lift to solutions because
    /// the leading coefficients of both differences can vanish together.
    pub degenerate: bool,
}

/// Eliminant of `{a = 0, b = 0}` with respect to `var`, plus whether the
/// leading coefficients in `var` are both nonconstant.
fn eliminate(a: &MultiPoly, b: &MultiPoly, var: usize) -> Result<(MultiPoly, bool)> {
    Ok(match (a.involves(var), b.involves(var)) {
        (true, true) => {
            let lead_a = a.coefficients_in(var).pop().expect("nonzero");
            let lead_b = b.coefficients_in(var).pop().expect("nonzero");
            let degenerate = !lead_a.is_constant() && !lead_b.is_constant();
            (multi_resultant(a, b, var)?, degenerate)
        }
        (false, true) => (a.clone(), false),
        (true, false) => (b.clone(), false),
        (false, false) => (multi_gcd(a, b), false),
    })
}

/// A polynomial of arity 2 involving at most variable `var`, as a univariate one.
fn to_univariate(p: &MultiPoly, var: usize) -> UniPoly {
    let degree = p.degree_in(var).unwrap_or(0) as usize;
    let mut coeffs = vec![BigRat::zero(); degree + 1];
    for (m, c) in p.terms() {
        coeffs[m.exponents()[var] as usize] = c.clone();
    }
    UniPoly::new(coeffs)
}

pub fn fixed_points(q: &PolyMap) -> Result<FixedLocus> {
    if !(q.arity() == 2 && q.is_square()) {
        return Err(Error::precondition("fixed points are computed for planar maps"));
    }
    let d1 = q.component(0) - &MultiPoly::var(2, 0);
    let d2 = q.component(1) - &MultiPoly::var(2, 1);
    let empty = FixedLocus {
        kind: LocusKind::Empty,
        rational_points: Vec::new(),
        defining_polynomials: Vec::new(),
        degenerate: false,
    };
    if d1.is_zero() && d2.is_zero() {
        return Ok(FixedLocus {
            kind: LocusKind::PositiveDimensional,
            defining_polynomials: vec![MultiPoly::zero(2)],
            ..empty
        });
    }
    if [&d1, &d2].iter().any(|d| d.is_constant() && !d.is_zero()) {
        return Ok(empty);
    }
    let common = multi_gcd(&d1, &d2);
    if !common.is_constant() {
        return Ok(FixedLocus {
            kind: LocusKind::PositiveDimensional,
            defining_polynomials: vec![common],
            ..empty
        });
    }

    // Coprime differences: finitely many complex solutions, found through eliminants.
    let (in_x, degenerate_x) = eliminate(&d1, &d2, 1)?;
    let (in_y, degenerate_y) = eliminate(&d1, &d2, 0)?;
    if in_x.is_constant() || in_y.is_constant() {
        return Ok(FixedLocus {
            defining_polynomials: vec![in_x, in_y],
            ..empty
        });
    }
    let xs = distinct(rational_roots(&to_univariate(&in_x, 0))?);
    let ys = distinct(rational_roots(&to_univariate(&in_y, 1))?);
    let mut points = Vec::new();
    for a in &xs {
        for b in &ys {
            let point = [a.clone(), b.clone()];
            if q.evaluate(&point)? == point {
                points.push(point);
            }
        }
    }
    Ok(FixedLocus {
        kind: LocusKind::Finite,
        rational_points: points,
        defining_polynomials: vec![in_x, in_y],
        degenerate: degenerate_x || degenerate_y,
    })
}

fn distinct(mut v: Vec<BigRat>) -> Vec<BigRat> {
    v.dedup();
    v
}

/// Shape of the linear part `L` of an affine planar map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mu {
    /// `L` is diagonalizable over `ℚ`.
    Zero,
    /// Repeated eigenvalue with a nontrivial Jordan block.
    One,
    /// The eigenvalues are not rational.
    Irrational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearClassification {
    pub is_affine: bool,
    /// Row `i` holds the coefficients of `x`, `y` in component `i`.
    pub matrix: [[BigRat; 2]; 2],
    pub offset: [BigRat; 2],
    pub trace: BigRat,
    pub det: BigRat,
    pub discriminant: BigRat,
    /// Rational eigenvalues with multiplicity, ascending; empty when irrational.
    pub eigenvalues: Vec<BigRat>,
    pub mu: Mu,
    /// `det L = 1`.
    pub det_check: bool,
    pub has_fixed_point: bool,
    /// One solution of `(L − I)z = −b` when the system is consistent.
    pub fixed_point: Option<[BigRat; 2]>,
    pub finite_order: Option<u32>,
}

pub fn classify_affine(q: &PolyMap) -> Result<LinearClassification> {
    if !(q.arity() == 2 && q.is_square()) {
        return Err(Error::precondition("affine classification needs a planar map"));
    }
    if q.degree().unwrap_or(0) > 1 {
        return Err(Error::precondition("map is not affine"));
    }
    let coeff = |i: usize, j: usize| {
        q.component(i)
            .coefficient(&crate::poly::Monomial::var(2, j))
    };
    let matrix = [[coeff(0, 0), coeff(0, 1)], [coeff(1, 0), coeff(1, 1)]];
    let offset = [q.component(0).constant_term(), q.component(1).constant_term()];
    let trace = &matrix[0][0] + &matrix[1][1];
    let det = &matrix[0][0] * &matrix[1][1] - &matrix[0][1] * &matrix[1][0];
    let discriminant = &trace * &trace - BigRat::from_integer(4.into()) * &det;
    let two = BigRat::from_integer(2.into());
    let (eigenvalues, mu) = match rat_sqrt_exact(&discriminant) {
        Some(root) if root.is_zero() => {
            let lambda = &trace / &two;
            let scalar = matrix[0][1].is_zero() && matrix[1][0].is_zero();
            let mu = if scalar { Mu::Zero } else { Mu::One };
            (vec![lambda.clone(), lambda], mu)
        }
        Some(root) => {
            let lo = (&trace - &root) / &two;
            let hi = (&trace + &root) / &two;
            (vec![lo, hi], Mu::Zero)
        }
        None => (Vec::new(), Mu::Irrational),
    };

    let one = BigRat::one();
    let system = vec![
        vec![&matrix[0][0] - &one, matrix[0][1].clone()],
        vec![matrix[1][0].clone(), &matrix[1][1] - &one],
    ];
    let rhs = vec![vec![-&offset[0]], vec![-&offset[1]]];
    let fixed_point = linalg::solve(&system, &rhs, 2)
        .map(|sol| [sol[0][0].clone(), sol[1][0].clone()]);
    let finite_order = detect_order(q, DEFAULT_MAX_ORDER)?.order;

    Ok(LinearClassification {
        is_affine: true,
        det_check: det.is_one(),
        matrix,
        offset,
        trace,
        det,
        discriminant,
        eigenvalues,
        mu,
        has_fixed_point: fixed_point.is_some(),
        fixed_point,
        finite_order,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PqCheck {
    Identical,
    /// The nonzero components of `P∘Q − P`; their common zeros form the
    /// variety on which `P∘Q` and `P` agree.
    Difference(Vec<MultiPoly>),
}

pub fn pq_check(p: &PolyMap, q: &PolyMap) -> Result<PqCheck> {
    let pq = p.compose(q)?;
    let diffs: Vec<MultiPoly> = pq
        .components()
        .iter()
        .zip(p.components())
        .map(|(a, b)| a.try_sub(b))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .filter(|d| !d.is_zero())
        .collect();
    Ok(if diffs.is_empty() {
        PqCheck::Identical
    } else {
        PqCheck::Difference(diffs)
    })
}

/// Whether `Q = S⁻¹ ∘ L ∘ S` exactly, for a linear `L` and invertible `S`.
pub fn check_conjugacy(q: &PolyMap, s: &PolyMap, l: &PolyMap) -> Result<bool> {
    q.require_square()?;
    let linear = l.is_square()
        && l.components()
            .iter()
            .all(|c| c.terms().all(|(m, _)| m.total_degree() == 1));
    if !linear {
        return Err(Error::precondition("conjugating map L must be linear"));
    }
    let inv = ansatz_inverse(s, None)?;
    let s_inv = match (inv.status, inv.inverse) {
        (InverseStatus::InverseFound, Some(g)) => g,
        _ => return Err(Error::precondition("S has no polynomial inverse within the bound")),
    };
    Ok(*q == s_inv.compose(&l.compose(s)?)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, rat_int};

    fn x() -> MultiPoly {
        MultiPoly::var(2, 0)
    }
    fn y() -> MultiPoly {
        MultiPoly::var(2, 1)
    }
    fn k(c: i64) -> MultiPoly {
        MultiPoly::constant(2, rat_int(c))
    }
    fn map(f: MultiPoly, g: MultiPoly) -> PolyMap {
        PolyMap::square(vec![f, g]).unwrap()
    }

    #[test]
    fn iteration_examples() {
        assert!(iterate_map(&map(y(), x()), 2).unwrap().is_identity());
        assert_eq!(
            iterate_map(&map(x(), &y() + &x().pow(2)), 3).unwrap(),
            map(x(), &y() + &(&k(3) * &x().pow(2)))
        );
        assert!(iterate_map(&map(-&y(), x()), 4).unwrap().is_identity());
        assert!(iterate_map(&map(-&y(), x()), 0).unwrap().is_identity());
    }

    #[test]
    fn order_examples() {
        assert_eq!(detect_order(&map(y(), x()), 24).unwrap().order, Some(2));
        let rot = detect_order(&map(-&y(), x()), 24).unwrap();
        assert_eq!(rot.order, Some(4));
        assert!(rot.certificate.unwrap().is_identity());
        let shift = detect_order(&map(&x() + &k(1), y()), 50).unwrap();
        assert_eq!(shift.order, None);
        assert_eq!(shift.iterations_checked, 50);
        assert_eq!(detect_order(&map(x(), &y() + &x().pow(2)), 24).unwrap().order, None);
        assert_eq!(detect_order(&PolyMap::identity(2), 5).unwrap().order, Some(1));
    }

    #[test]
    fn order_of_square_halves() {
        // the order-6 map (x, y) -> (-y, x + y)
        let q = map(-&y(), &x() + &y());
        assert_eq!(detect_order(&q, 24).unwrap().order, Some(6));
        let q2 = q.compose(&q).unwrap();
        assert_eq!(detect_order(&q2, 24).unwrap().order, Some(3));
    }

    #[test]
    fn fixed_point_examples() {
        let swap = fixed_points(&map(y(), x())).unwrap();
        assert_eq!(swap.kind, LocusKind::PositiveDimensional);
        assert_eq!(swap.defining_polynomials, vec![&x() - &y()]);

        let shift = fixed_points(&map(&x() + &k(1), y())).unwrap();
        assert_eq!(shift.kind, LocusKind::Empty);
        assert!(shift.rational_points.is_empty());

        let half = MultiPoly::constant(2, rat(1, 2));
        let hyper = fixed_points(&map(&k(2) * &x(), &half * &y())).unwrap();
        assert_eq!(hyper.kind, LocusKind::Finite);
        assert_eq!(hyper.rational_points, vec![[rat_int(0), rat_int(0)]]);

        let id = fixed_points(&PolyMap::identity(2)).unwrap();
        assert_eq!(id.kind, LocusKind::PositiveDimensional);
    }

    #[test]
    fn nonlinear_fixed_points_are_exact() {
        // Q = (x + y^2 - 1, y + x - 2): fixed iff y^2 = 1 and x = 2.
        let q = map(&(&x() + &y().pow(2)) - &k(1), &(&y() + &x()) - &k(2));
        let locus = fixed_points(&q).unwrap();
        assert_eq!(locus.kind, LocusKind::Finite);
        assert_eq!(
            locus.rational_points,
            vec![[rat_int(2), rat_int(-1)], [rat_int(2), rat_int(1)]]
        );
        for p in &locus.rational_points {
            assert_eq!(q.evaluate(p).unwrap(), p.to_vec());
        }
        // irrational fixed points only: y^2 = 2
        let q = map(&(&x() + &y().pow(2)) - &k(2), &(&y() + &x()) - &k(2));
        let locus = fixed_points(&q).unwrap();
        assert_eq!(locus.kind, LocusKind::Finite);
        assert!(locus.rational_points.is_empty());
    }

    #[test]
    fn affine_examples() {
        let c = classify_affine(&map(&x() + &k(1), y())).unwrap();
        assert_eq!(c.eigenvalues, vec![rat_int(1), rat_int(1)]);
        assert_eq!(c.mu, Mu::Zero);
        assert!(!c.has_fixed_point);
        assert_eq!(c.finite_order, None);
        assert!(c.det_check);

        let half = MultiPoly::constant(2, rat(1, 2));
        let c = classify_affine(&map(&k(2) * &x(), &half * &y())).unwrap();
        assert_eq!(c.det, rat_int(1));
        assert_eq!(c.fixed_point, Some([rat_int(0), rat_int(0)]));
        assert_eq!(c.finite_order, None);
        assert_eq!(c.eigenvalues, vec![rat(1, 2), rat_int(2)]);

        let c = classify_affine(&map(-&y(), x())).unwrap();
        assert!(c.det_check);
        assert_eq!(c.fixed_point, Some([rat_int(0), rat_int(0)]));
        assert_eq!(c.finite_order, Some(4));
        assert_eq!(c.mu, Mu::Irrational);

        let jordan = classify_affine(&map(&x() + &y(), y())).unwrap();
        assert_eq!(jordan.mu, Mu::One);

        assert!(matches!(
            classify_affine(&map(x().pow(2), y())),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn pq_examples() {
        let p = map(x().pow(2), y());
        assert_eq!(pq_check(&p, &map(-&x(), y())).unwrap(), PqCheck::Identical);
        let p = map(&x() + &y().pow(2), y());
        assert_eq!(pq_check(&p, &PolyMap::identity(2)).unwrap(), PqCheck::Identical);
        assert_eq!(
            pq_check(&p, &map(-&x(), y())).unwrap(),
            PqCheck::Difference(vec![&k(-2) * &x()])
        );
    }

    #[test]
    fn conjugacy_examples() {
        let swap = map(y(), x());
        assert!(check_conjugacy(&swap, &PolyMap::identity(2), &swap).unwrap());

        let s = map(x(), &y() - &x().pow(2));
        let s_inv = map(x(), &y() + &x().pow(2));
        let l = map(-&x(), y());
        let q = s_inv.compose(&l.compose(&s).unwrap()).unwrap();
        assert!(check_conjugacy(&q, &s, &l).unwrap());

        let shift = map(&x() + &k(1), y());
        for l in [map(x(), y()), map(y(), x()), map(-&y(), x())] {
            for s in [PolyMap::identity(2), s.clone()] {
                assert!(!check_conjugacy(&shift, &s, &l).unwrap());
            }
        }

        let not_invertible = map(x().pow(2), y());
        assert!(matches!(
            check_conjugacy(&swap, &not_invertible, &swap),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            check_conjugacy(&swap, &PolyMap::identity(2), &shift),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn symmetric_samples_agree_pointwise() {
        let p = map(&x().pow(2) - &y().pow(2), &k(2) * &(&x() * &y()));
        let q = map(-&x(), -&y());
        assert_eq!(pq_check(&p, &q).unwrap(), PqCheck::Identical);
        for a in -3..=3 {
            for b in [-2, 5] {
                let pt = [rat_int(a), rat(b, 3)];
                let image = q.evaluate(&pt).unwrap();
                assert_eq!(p.evaluate(&image).unwrap(), p.evaluate(&pt).unwrap());
            }
        }
    }
}

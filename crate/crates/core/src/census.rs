//! Integer-grid censuses on boxes `[-N, N]²`.
//!
//! The injectivity census counts, for every grid point, the integer
//! preimages of its image under `P`, found as integer roots of the
//! specialized annihilators `Φ(u, v, z)` and `Ψ(u, v, z)`; points the
//! argument has to discard are attributed to one bad-pair category. The
//! other censuses count reducible specializations, integral quotients and
//! integer points of curves, reported as growth series in `N`.

use std::time::Instant;

use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::arith::{BigInt, BigRat};
use crate::dynamics::{detect_order, fixed_points, pq_check, FixedLocus, OrderResult, PqCheck, DEFAULT_MAX_ORDER};
use crate::elim::{annihilator_unchecked, Annihilator};
use crate::error::{Error, Result};
use crate::factor::is_irreducible_q;
use crate::linalg;
use crate::poly::{Monomial, MultiPoly, PolyMap};
use crate::uni::{integer_roots, UniPoly};

/// Number of multi-preimage points kept as a sample in a report.
pub const MULTI_POINT_SAMPLE: usize = 100;
/// Number of full multi-preimage records kept for symmetry recovery.
pub const MULTI_RECORD_LIMIT: usize = 10_000;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct PreimageFlags {
    pub degenerate: bool,
    pub degree_drop_phi: bool,
    pub degree_drop_psi: bool,
    pub reducible_a: bool,
    pub reducible_b: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PreimageRecord {
    pub point: (i64, i64),
    pub value: (BigRat, BigRat),
    /// Integer preimages of `value`, ascending; always contains `point`.
    pub preimages: Vec<(BigInt, BigInt)>,
    pub flags: PreimageFlags,
}

/// Bad-pair categories, each point counted in at most one, by priority
/// degenerate > degree drop > reducible residual > multiple preimages.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct BadPairs {
    pub degenerate: u64,
    pub degree_drop: u64,
    pub reducible: u64,
    pub multi: u64,
}

impl BadPairs {
    pub fn total(&self) -> u64 {
        self.degenerate + self.degree_drop + self.reducible + self.multi
    }

    fn merge(&mut self, other: &BadPairs) {
        self.degenerate += other.degenerate;
        self.degree_drop += other.degree_drop;
        self.reducible += other.reducible;
        self.multi += other.multi;
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MultiPoint {
    pub point: [i64; 2],
    #[serde(serialize_with = "ser_pairs")]
    pub preimages: Vec<(BigInt, BigInt)>,
}

fn ser_int<S: Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v.to_i64() {
        Some(i) => s.serialize_i64(i),
        None => s.serialize_str(&v.to_string()),
    }
}

fn ser_pairs<S: Serializer>(v: &[(BigInt, BigInt)], s: S) -> std::result::Result<S::Ok, S::Error> {
    struct Int<'a>(&'a BigInt);
    impl Serialize for Int<'_> {
        fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
            ser_int(self.0, s)
        }
    }
    s.collect_seq(v.iter().map(|(a, b)| [Int(a), Int(b)]))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CensusReport {
    pub n: u64,
    pub total_points: u64,
    pub unique_count: u64,
    pub multi_count: u64,
    pub bad_pairs: BadPairs,
    /// The first [`MULTI_POINT_SAMPLE`] multi-preimage points in scan order.
    pub multi_points: Vec<MultiPoint>,
    /// Wall-clock time; cleared by [`CensusReport::without_timing`] for
    /// reproducible output.
    pub elapsed_ms: Option<u64>,
    #[serde(skip)]
    pub partition_count: usize,
    /// Full records of multi-preimage points (up to [`MULTI_RECORD_LIMIT`]).
    #[serde(skip)]
    pub multi_records: Vec<PreimageRecord>,
}

impl CensusReport {
    pub fn without_timing(mut self) -> Self {
        self.elapsed_ms = None;
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// `N,count` rows for the number of unique-preimage and multi-preimage points.
    pub fn to_csv(&self) -> String {
        format!(
            "N,total_points,unique_count,multi_count,degenerate,degree_drop,reducible,multi\n{},{},{},{},{},{},{},{}\n",
            self.n,
            self.total_points,
            self.unique_count,
            self.multi_count,
            self.bad_pairs.degenerate,
            self.bad_pairs.degree_drop,
            self.bad_pairs.reducible,
            self.bad_pairs.multi
        )
    }
}

fn int_rat(v: i64) -> BigRat {
    BigRat::from_integer(v.into())
}

/// Distinct integer roots of `poly`, and whether the residual left after
/// dividing out every factor `(z − α)` is reducible over `ℚ`.
fn roots_and_residual_reducible(poly: &UniPoly) -> Result<(Vec<BigInt>, bool)> {
    let mut roots = integer_roots(poly)?;
    let mut residual = poly.clone();
    for r in &roots {
        residual = residual
            .div_exact(&UniPoly::linear(&BigRat::from_integer(r.clone())))
            .expect("root divides");
    }
    roots.dedup();
    let reducible = residual.degree().unwrap_or(0) >= 2 && !is_irreducible_q(&residual)?;
    Ok((roots, reducible))
}

/// Integer roots `x` of `gcd(f(x, β) − u, g(x, β) − v)` (or the transposed
/// system), used when one annihilator specializes to zero. `None` when the
/// whole line is contained in the fiber.
fn fiber_roots(
    p: &PolyMap,
    fixed_var: usize,
    fixed: &BigInt,
    value: &(BigRat, BigRat),
) -> Result<Option<Vec<BigInt>>> {
    let free = 1 - fixed_var;
    let fixed = BigRat::from_integer(fixed.clone());
    let restrict = |c: &MultiPoly, target: &BigRat| -> UniPoly {
        let r = c.partial_evaluate(&[(fixed_var, fixed.clone())]);
        let deg = r.degree_in(free).unwrap_or(0) as usize;
        let mut coeffs = vec![BigRat::zero(); deg + 1];
        for (m, c) in r.terms() {
            coeffs[m.exponents()[free] as usize] = c.clone();
        }
        coeffs[0] -= target;
        UniPoly::new(coeffs)
    };
    let a = restrict(p.component(0), &value.0);
    let b = restrict(p.component(1), &value.1);
    let g = match (a.is_zero(), b.is_zero()) {
        (true, true) => return Ok(None),
        (true, false) => b,
        (false, true) => a,
        (false, false) => crate::uni::uni_gcd(&a, &b)?,
    };
    let mut roots = integer_roots(&g)?;
    roots.dedup();
    Ok(Some(roots))
}

/// Census of one grid point: specialize both annihilators at `P(point)`,
/// combine their integer roots and keep the pairs mapping to the same value.
pub fn preimage_count_at(
    p: &PolyMap,
    phi: &Annihilator,
    psi: &Annihilator,
    point: (i64, i64),
) -> Result<PreimageRecord> {
    let coords = [int_rat(point.0), int_rat(point.1)];
    let image = p.evaluate(&coords)?;
    let value = (image[0].clone(), image[1].clone());
    let mut flags = PreimageFlags::default();

    // (integer roots, degree drop, reducible residual), `None` when degenerate
    let side = |ann: &Annihilator| -> Result<Option<(Vec<BigInt>, bool, bool)>> {
        match ann.specialize(&value.0, &value.1) {
            Ok(s) => {
                let (roots, reducible) = roots_and_residual_reducible(&s.poly)?;
                Ok(Some((roots, s.degree_drop, reducible)))
            }
            Err(Error::DegenerateSpecialization) => Ok(None),
            Err(e) => Err(e),
        }
    };
    let unpack = |side: Option<(Vec<BigInt>, bool, bool)>, drop: &mut bool, red: &mut bool| {
        side.map(|(roots, d, r)| {
            *drop = d;
            *red = r;
            roots
        })
    };
    let alphas = unpack(side(phi)?, &mut flags.degree_drop_phi, &mut flags.reducible_a);
    let betas = unpack(side(psi)?, &mut flags.degree_drop_psi, &mut flags.reducible_b);

    let own = (BigInt::from(point.0), BigInt::from(point.1));
    // Infinite fibers are not enumerated; such points keep only themselves.
    let mut infinite = false;
    let candidates: Vec<(BigInt, BigInt)> = match (alphas, betas) {
        (Some(alphas), Some(betas)) => alphas
            .iter()
            .flat_map(|a| betas.iter().map(move |b| (a.clone(), b.clone())))
            .collect(),
        (None, Some(betas)) => {
            flags.degenerate = true;
            let mut out = Vec::new();
            for b in &betas {
                match fiber_roots(p, 1, b, &value)? {
                    Some(roots) => out.extend(roots.into_iter().map(|a| (a, b.clone()))),
                    None => infinite = true,
                }
            }
            out
        }
        (Some(alphas), None) => {
            flags.degenerate = true;
            let mut out = Vec::new();
            for a in &alphas {
                match fiber_roots(p, 0, a, &value)? {
                    Some(roots) => out.extend(roots.into_iter().map(|b| (a.clone(), b))),
                    None => infinite = true,
                }
            }
            out
        }
        (None, None) => {
            flags.degenerate = true;
            infinite = true;
            Vec::new()
        }
    };
    let candidates = if infinite { vec![own.clone()] } else { candidates };

    let mut preimages = Vec::new();
    for (a, b) in candidates {
        let at = [BigRat::from_integer(a.clone()), BigRat::from_integer(b.clone())];
        if p.evaluate(&at)? == image {
            preimages.push((a, b));
        }
    }
    preimages.sort();
    preimages.dedup();
    if !preimages.contains(&own) {
        return Err(Error::Internal(format!(
            "point {point:?} missing from its own preimage set"
        )));
    }
    Ok(PreimageRecord {
        point,
        value,
        preimages,
        flags,
    })
}

#[derive(Debug, Default)]
struct Tally {
    total: u64,
    unique: u64,
    multi: u64,
    bad: BadPairs,
    multi_points: Vec<MultiPoint>,
    multi_records: Vec<PreimageRecord>,
}

impl Tally {
    fn add(&mut self, rec: PreimageRecord) {
        self.total += 1;
        let many = rec.preimages.len() > 1;
        if many {
            self.multi += 1;
        } else {
            self.unique += 1;
        }
        let f = &rec.flags;
        if f.degenerate {
            self.bad.degenerate += 1;
        } else if f.degree_drop_phi || f.degree_drop_psi {
            self.bad.degree_drop += 1;
        } else if f.reducible_a || f.reducible_b {
            self.bad.reducible += 1;
        } else if many {
            self.bad.multi += 1;
        }
        if many {
            if self.multi_points.len() < MULTI_POINT_SAMPLE {
                self.multi_points.push(MultiPoint {
                    point: [rec.point.0, rec.point.1],
                    preimages: rec.preimages.clone(),
                });
            }
            if self.multi_records.len() < MULTI_RECORD_LIMIT {
                self.multi_records.push(rec);
            }
        }
    }

    /// Appends a tally of later rows; associative, and the capped samples
    /// keep the first entries in scan order.
    fn merge(mut self, other: Tally) -> Tally {
        self.total += other.total;
        self.unique += other.unique;
        self.multi += other.multi;
        self.bad.merge(&other.bad);
        let room = MULTI_POINT_SAMPLE - self.multi_points.len();
        self.multi_points.extend(other.multi_points.into_iter().take(room));
        let room = MULTI_RECORD_LIMIT - self.multi_records.len();
        self.multi_records.extend(other.multi_records.into_iter().take(room));
        self
    }
}

/// Splits `lo..=hi` into `parts` contiguous bands.
fn row_bands(lo: i64, hi: i64, parts: usize) -> Vec<(i64, i64)> {
    let rows = (hi - lo + 1) as usize;
    let parts = parts.clamp(1, rows.max(1));
    let base = rows / parts;
    let extra = rows % parts;
    let mut out = Vec::with_capacity(parts);
    let mut start = lo;
    for i in 0..parts {
        let len = (base + usize::from(i < extra)) as i64;
        out.push((start, start + len - 1));
        start += len;
    }
    out
}

/// Injectivity census of `P` over `[-N, N]²` with `jobs` worker threads.
///
/// The box is cut into `jobs` bands of rows (constant `x`), scanned in
/// parallel and merged in band order, so the report does not depend on `jobs`.
pub fn injectivity_census(p: &PolyMap, n: u64, jobs: usize) -> Result<CensusReport> {
    let start = Instant::now();
    let phi = annihilator_unchecked(p, 1)?;
    let psi = annihilator_unchecked(p, 2)?;
    let n_i = i64::try_from(n).map_err(|_| Error::domain("box radius too large"))?;
    let bands = row_bands(-n_i, n_i, jobs.max(1));
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::Internal(e.to_string()))?;
    let tallies: Vec<Result<Tally>> = pool.install(|| {
        bands
            .par_iter()
            .map(|&(lo, hi)| {
                let mut t = Tally::default();
                for x0 in lo..=hi {
                    for y0 in -n_i..=n_i {
                        t.add(preimage_count_at(p, &phi, &psi, (x0, y0))?);
                    }
                }
                Ok(t)
            })
            .collect()
    });
    let mut total = Tally::default();
    for t in tallies {
        total = total.merge(t?);
    }
    Ok(CensusReport {
        n,
        total_points: total.total,
        unique_count: total.unique,
        multi_count: total.multi,
        bad_pairs: total.bad,
        multi_points: total.multi_points,
        elapsed_ms: Some(start.elapsed().as_millis() as u64),
        partition_count: bands.len(),
        multi_records: total.multi_records,
    })
}

/// Counts `(N, count)` for increasing `N`, with a least-squares growth exponent.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthSeries {
    pub entries: Vec<GrowthEntry>,
    /// Slope of `log count` against `log N` over rows with nonzero count;
    /// `None` with fewer than two such rows.
    pub fitted_exponent: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GrowthEntry {
    pub n: u64,
    pub count: u64,
}

impl GrowthSeries {
    pub fn new(entries: Vec<GrowthEntry>) -> Self {
        let fitted_exponent = fit_exponent(&entries);
        GrowthSeries {
            entries,
            fitted_exponent,
        }
    }

    pub fn counts(&self) -> Vec<u64> {
        self.entries.iter().map(|e| e.count).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("series serializes")
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("N,count\n");
        for e in &self.entries {
            out.push_str(&format!("{},{}\n", e.n, e.count));
        }
        out
    }
}

fn fit_exponent(entries: &[GrowthEntry]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = entries
        .iter()
        .filter(|e| e.count > 0 && e.n > 0)
        .map(|e| ((e.n as f64).ln(), (e.count as f64).ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

fn normalize_ns(ns: &[u64]) -> Result<Vec<u64>> {
    let mut ns = ns.to_vec();
    ns.sort_unstable();
    ns.dedup();
    match ns.last() {
        None => Err(Error::precondition("at least one box radius is required")),
        Some(&max) if max > i64::MAX as u64 / 4 => Err(Error::domain("box radius too large")),
        _ => Ok(ns),
    }
}

/// Turns per-radius hit counts (`hits[r]` = hits on the square ring of
/// radius `r`) into cumulative box counts for each requested `N`.
fn cumulate(ns: &[u64], hits: &[u64]) -> GrowthSeries {
    let mut entries = Vec::with_capacity(ns.len());
    let mut acc = 0u64;
    let mut r = 0usize;
    for &n in ns {
        while r <= n as usize {
            acc += hits[r];
            r += 1;
        }
        entries.push(GrowthEntry { n, count: acc });
    }
    GrowthSeries::new(entries)
}

/// Scans the largest box once, row by row in parallel, recording the ring
/// radius `max(|x|, |y|)` of every point satisfying `test`.
fn ring_hits<F>(max_n: u64, test: F) -> Result<Vec<u64>>
where
    F: Fn(i64, i64) -> Result<bool> + Sync,
{
    let m = max_n as i64;
    let rows: Vec<Result<Vec<u64>>> = (-m..=m)
        .into_par_iter()
        .map(|x0| {
            let mut hits = vec![0u64; max_n as usize + 1];
            for y0 in -m..=m {
                if test(x0, y0)? {
                    hits[x0.unsigned_abs().max(y0.unsigned_abs()) as usize] += 1;
                }
            }
            Ok(hits)
        })
        .collect();
    let mut total = vec![0u64; max_n as usize + 1];
    for row in rows {
        for (t, h) in total.iter_mut().zip(row?) {
            *t += h;
        }
    }
    Ok(total)
}

/// Specialization `A(x0, y0, z)` of a polynomial in `(x, y, z)`.
fn specialize_z(a: &MultiPoly, x0: i64, y0: i64) -> UniPoly {
    let r = a.partial_evaluate(&[(0, int_rat(x0)), (1, int_rat(y0))]);
    let deg = r.degree_in(2).unwrap_or(0) as usize;
    let mut coeffs = vec![BigRat::zero(); deg + 1];
    for (m, c) in r.terms() {
        coeffs[m.exponents()[2] as usize] = c.clone();
    }
    UniPoly::new(coeffs)
}

/// For each `N`, the number of `(x0, y0) ∈ [-N, N]²` where `A(x0, y0, z)`
/// is reducible over `ℚ` or has lower degree in `z` than `A`.
pub fn reducibility_census(a: &MultiPoly, ns: &[u64]) -> Result<GrowthSeries> {
    if a.arity() != 3 {
        return Err(Error::ArityMismatch {
            expected: 3,
            found: a.arity(),
        });
    }
    let deg_z = a.degree_in(2).unwrap_or(0) as usize;
    if deg_z == 0 {
        return Err(Error::precondition("polynomial must involve z"));
    }
    let ns = normalize_ns(ns)?;
    let hits = ring_hits(*ns.last().unwrap(), |x0, y0| {
        let s = specialize_z(a, x0, y0);
        if s.degree() != Some(deg_z) {
            return Ok(true);
        }
        Ok(!is_irreducible_q(&s)?)
    })?;
    Ok(cumulate(&ns, &hits))
}

/// Integrality census of `a/b` together with the count of zero denominators.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntegralitySeries {
    pub series: GrowthSeries,
    /// Points with `b(x0, y0) = 0`, per `N`, excluded from `series`.
    pub zero_denominator: Vec<GrowthEntry>,
}

impl IntegralitySeries {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("series serializes")
    }
}

/// For each `N`, the number of `(x0, y0) ∈ [-N, N]²` with `b(x0, y0) ≠ 0`
/// and `a(x0, y0) / b(x0, y0)` an integer.
pub fn integrality_census(a: &MultiPoly, b: &MultiPoly, ns: &[u64]) -> Result<IntegralitySeries> {
    for p in [a, b] {
        if p.arity() != 2 {
            return Err(Error::ArityMismatch {
                expected: 2,
                found: p.arity(),
            });
        }
    }
    if b.is_zero() {
        return Err(Error::precondition("denominator must be nonzero"));
    }
    let ns = normalize_ns(ns)?;
    let max_n = *ns.last().unwrap();
    let integral = ring_hits(max_n, |x0, y0| {
        let pt = [int_rat(x0), int_rat(y0)];
        let den = b.evaluate(&pt)?;
        if den.is_zero() {
            return Ok(false);
        }
        Ok((a.evaluate(&pt)? / den).is_integer())
    })?;
    let zeros = ring_hits(max_n, |x0, y0| Ok(b.evaluate(&[int_rat(x0), int_rat(y0)])?.is_zero()))?;
    Ok(IntegralitySeries {
        series: cumulate(&ns, &integral),
        zero_denominator: cumulate(&ns, &zeros).entries,
    })
}

/// For each `N`, the number of integer points of `R = 0` in `[-N, N]²`,
/// found row by row as integer roots of `R(x0, y)`.
pub fn variety_point_count(r: &MultiPoly, ns: &[u64]) -> Result<GrowthSeries> {
    if r.arity() != 2 {
        return Err(Error::ArityMismatch {
            expected: 2,
            found: r.arity(),
        });
    }
    if r.is_zero() {
        return Err(Error::precondition("polynomial must be nonzero"));
    }
    let ns = normalize_ns(ns)?;
    let max_n = *ns.last().unwrap();
    let m = max_n as i64;
    let rows: Vec<Result<Vec<u64>>> = (-m..=m)
        .into_par_iter()
        .map(|x0| {
            let mut hits = vec![0u64; max_n as usize + 1];
            let row = r.partial_evaluate(&[(0, int_rat(x0))]);
            let mark = |hits: &mut Vec<u64>, y: i64| {
                hits[x0.unsigned_abs().max(y.unsigned_abs()) as usize] += 1;
            };
            if row.is_zero() {
                for y in -m..=m {
                    mark(&mut hits, y);
                }
                return Ok(hits);
            }
            let deg = row.degree_in(1).unwrap_or(0) as usize;
            let mut coeffs = vec![BigRat::zero(); deg + 1];
            for (mono, c) in row.terms() {
                coeffs[mono.exponents()[1] as usize] = c.clone();
            }
            let mut roots = integer_roots(&UniPoly::new(coeffs))?;
            roots.dedup();
            for y in roots {
                if let Some(y) = y.to_i64().filter(|y| y.unsigned_abs() <= max_n) {
                    mark(&mut hits, y);
                }
            }
            Ok(hits)
        })
        .collect();
    let mut total = vec![0u64; max_n as usize + 1];
    for row in rows {
        for (t, h) in total.iter_mut().zip(row?) {
            *t += h;
        }
    }
    Ok(cumulate(&ns, &total))
}

/// A polynomial symmetry `Q` (`P∘Q = P`) interpolated from census records,
/// with its dynamics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetryDiagnosis {
    pub q: PolyMap,
    pub pq: PqCheck,
    pub order: OrderResult,
    pub fixed: FixedLocus,
    pub records_used: usize,
    /// Set when `Q` is a nontrivial symmetry of a Keller map with a rational
    /// fixed point, which the theory rules out.
    pub anomaly: Option<String>,
}

/// Recovers `Q` from the records with exactly two preimages by fitting both
/// coordinates of the second preimage as polynomials of the least degree
/// `≤ degree_bound` (default `deg P`) in the grid point.
pub fn symmetry_probe(
    p: &PolyMap,
    records: &[PreimageRecord],
    degree_bound: Option<u32>,
) -> Result<Option<SymmetryDiagnosis>> {
    if !(p.arity() == 2 && p.is_square()) {
        return Err(Error::precondition("symmetry probe needs a planar map"));
    }
    let samples: Vec<([BigRat; 2], [BigRat; 2])> = records
        .iter()
        .filter(|r| r.preimages.len() == 2)
        .map(|r| {
            let own = (BigInt::from(r.point.0), BigInt::from(r.point.1));
            let other = r.preimages.iter().find(|q| **q != own).expect("two preimages");
            (
                [int_rat(r.point.0), int_rat(r.point.1)],
                [BigRat::from_integer(other.0.clone()), BigRat::from_integer(other.1.clone())],
            )
        })
        .collect();
    if samples.is_empty() {
        return Ok(None);
    }
    let bound = degree_bound.unwrap_or_else(|| p.degree().unwrap_or(1).max(1));
    for d in 0..=bound {
        let Some(q) = fit_map(&samples, d) else { continue };
        let pq = pq_check(p, &q)?;
        let order = detect_order(&q, DEFAULT_MAX_ORDER)?;
        let fixed = fixed_points(&q)?;
        let anomaly = (pq == PqCheck::Identical
            && !q.is_identity()
            && p.is_keller()?
            && !fixed.rational_points.is_empty())
        .then(|| "nontrivial symmetry of a Keller map has a rational fixed point".to_string());
        return Ok(Some(SymmetryDiagnosis {
            q,
            pq,
            order,
            fixed,
            records_used: samples.len(),
            anomaly,
        }));
    }
    Ok(None)
}

/// Exact fit of a planar map of total degree ≤ `d` through all samples.
fn fit_map(samples: &[([BigRat; 2], [BigRat; 2])], d: u32) -> Option<PolyMap> {
    let monomials: Vec<Monomial> = (0..=d)
        .flat_map(|t| (0..=t).map(move |i| Monomial::new(vec![t - i, i])))
        .collect();
    if samples.len() < monomials.len() {
        return None;
    }
    let row = |pt: &[BigRat; 2]| -> Vec<BigRat> {
        monomials
            .iter()
            .map(|m| {
                let e = m.exponents();
                num_traits::pow(pt[0].clone(), e[0] as usize) * num_traits::pow(pt[1].clone(), e[1] as usize)
            })
            .collect()
    };
    // Fit on an evenly spread subset (records come in row order, so a prefix
    // would be degenerate), falling back to every sample if the subset does
    // not determine the fit; then confirm on every sample.
    let take = samples.len().min(4 * monomials.len() + 8);
    let system = |picked: &[&([BigRat; 2], [BigRat; 2])]| {
        let a: Vec<Vec<BigRat>> = picked.iter().map(|(pt, _)| row(pt)).collect();
        let b: Vec<Vec<BigRat>> = picked
            .iter()
            .map(|(_, img)| vec![img[0].clone(), img[1].clone()])
            .collect();
        linalg::solve_ranked(&a, &b, monomials.len())
    };
    let spread: Vec<_> = (0..take).map(|i| &samples[i * samples.len() / take]).collect();
    let (mut sol, rank) = system(&spread)?;
    if rank < monomials.len() && take < samples.len() {
        sol = system(&samples.iter().collect::<Vec<_>>())?.0;
    }
    let component = |c: usize| {
        MultiPoly::from_terms(
            2,
            monomials.iter().zip(&sol).map(|(m, s)| (m.clone(), s[c].clone())),
        )
    };
    let q = PolyMap::square(vec![component(0), component(1)]).ok()?;
    samples
        .iter()
        .all(|(pt, img)| q.evaluate(pt).map(|v| v[..] == img[..]).unwrap_or(false))
        .then_some(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::LocusKind;
    use std::collections::HashMap;

    fn x() -> MultiPoly {
        MultiPoly::var(2, 0)
    }
    fn y() -> MultiPoly {
        MultiPoly::var(2, 1)
    }
    fn k(c: i64) -> MultiPoly {
        MultiPoly::constant(2, int_rat(c))
    }
    fn map(f: MultiPoly, g: MultiPoly) -> PolyMap {
        PolyMap::square(vec![f, g]).unwrap()
    }

    /// Preimage sets by evaluating `P` on a larger box and grouping by value.
    fn brute_preimages(p: &PolyMap, n: i64, outer: i64) -> HashMap<(i64, i64), Vec<(i64, i64)>> {
        let mut by_value: HashMap<Vec<BigRat>, Vec<(i64, i64)>> = HashMap::new();
        for a in -outer..=outer {
            for b in -outer..=outer {
                let v = p.evaluate(&[int_rat(a), int_rat(b)]).unwrap();
                by_value.entry(v).or_default().push((a, b));
            }
        }
        let mut out = HashMap::new();
        for a in -n..=n {
            for b in -n..=n {
                let v = p.evaluate(&[int_rat(a), int_rat(b)]).unwrap();
                let mut pre = by_value[&v].clone();
                pre.sort();
                out.insert((a, b), pre);
            }
        }
        out
    }

    fn census_preimages(p: &PolyMap, n: i64) -> HashMap<(i64, i64), Vec<(i64, i64)>> {
        let phi = annihilator_unchecked(p, 1).unwrap();
        let psi = annihilator_unchecked(p, 2).unwrap();
        let mut out = HashMap::new();
        for a in -n..=n {
            for b in -n..=n {
                let rec = preimage_count_at(p, &phi, &psi, (a, b)).unwrap();
                let pre = rec
                    .preimages
                    .iter()
                    .map(|(u, v)| (u.to_i64().unwrap(), v.to_i64().unwrap()))
                    .collect();
                out.insert((a, b), pre);
            }
        }
        out
    }

    #[test]
    fn single_point_examples() {
        let p = map(&x() + &y().pow(2), y());
        let phi = annihilator_unchecked(&p, 1).unwrap();
        let psi = annihilator_unchecked(&p, 2).unwrap();
        let rec = preimage_count_at(&p, &phi, &psi, (3, 2)).unwrap();
        assert_eq!(rec.value, (int_rat(7), int_rat(2)));
        assert_eq!(rec.preimages, vec![(BigInt::from(3), BigInt::from(2))]);

        let sq = map(x().pow(2), y());
        let phi = annihilator_unchecked(&sq, 1).unwrap();
        let psi = annihilator_unchecked(&sq, 2).unwrap();
        let rec = preimage_count_at(&sq, &phi, &psi, (2, 5)).unwrap();
        assert_eq!(
            rec.preimages,
            vec![(BigInt::from(-2), BigInt::from(5)), (BigInt::from(2), BigInt::from(5))]
        );
        let rec = preimage_count_at(&sq, &phi, &psi, (0, 0)).unwrap();
        assert_eq!(rec.preimages.len(), 1);
        assert_eq!(rec.flags, PreimageFlags::default());
    }

    #[test]
    fn census_examples() {
        let p = map(&x() + &y().pow(2), y());
        let r = injectivity_census(&p, 10, 2).unwrap();
        assert_eq!((r.total_points, r.unique_count, r.multi_count), (441, 441, 0));
        assert_eq!(r.bad_pairs.total(), 0);

        let r = injectivity_census(&PolyMap::identity(2), 5, 1).unwrap();
        assert_eq!(r.unique_count, 121);

        let r = injectivity_census(&map(x().pow(2), y()), 10, 3).unwrap();
        assert_eq!((r.unique_count, r.multi_count), (21, 420));
        assert_eq!(r.bad_pairs.multi, 420);
        assert_eq!(r.multi_points.len(), MULTI_POINT_SAMPLE);
    }

    #[test]
    fn census_matches_brute_force() {
        let maps = [
            map(x().pow(2), y()),
            map(&x() + &y().pow(2), y()),
            map(&x().pow(2) - &y().pow(2), &k(2) * &(&x() * &y())),
            map((&x() + &y()).pow(2), &y() + &k(1)),
            map(&x() * &y(), &x() + &y()),
        ];
        for p in &maps {
            // preimages of points in [-6, 6]² lie in [-40, 40]² for these maps
            assert_eq!(census_preimages(p, 6), brute_preimages(p, 6, 40), "{p}");
        }
    }

    #[test]
    fn degenerate_specializations() {
        // Φ₁ = (u2 + 1)·z − u1 vanishes identically over (0, −1), whose
        // fiber is the whole line y = −1.
        let p = map(&(&x() * &y()) + &x(), y());
        let phi = annihilator_unchecked(&p, 1).unwrap();
        let psi = annihilator_unchecked(&p, 2).unwrap();
        let rec = preimage_count_at(&p, &phi, &psi, (3, -1)).unwrap();
        assert!(rec.flags.degenerate);
        assert_eq!(rec.preimages, vec![(BigInt::from(3), BigInt::from(-1))]);
        let rec = preimage_count_at(&p, &phi, &psi, (3, 1)).unwrap();
        assert!(!rec.flags.degenerate);
        assert_eq!(rec.preimages.len(), 1);
        let r = injectivity_census(&p, 4, 2).unwrap();
        assert_eq!(r.bad_pairs.degenerate, 9);
        assert_eq!(r.unique_count, 81);
    }

    #[test]
    fn report_is_independent_of_jobs() {
        let p = map(x().pow(2), &y() + &x());
        let base = injectivity_census(&p, 7, 1).unwrap().without_timing();
        for jobs in [2, 3, 8, 64] {
            let r = injectivity_census(&p, 7, jobs).unwrap().without_timing();
            assert_eq!(r.to_json(), base.to_json());
            assert_eq!(r.multi_records, base.multi_records);
        }
    }

    #[test]
    fn reducibility_examples() {
        let (xx, yy, z) = (MultiPoly::var(3, 0), MultiPoly::var(3, 1), MultiPoly::var(3, 2));
        let a = &z.pow(2) - &(&xx.pow(2) + &yy);
        let s = reducibility_census(&a, &[10, 20]).unwrap();
        // oracle: x0^2 + y0 a perfect square (including 0)
        for e in &s.entries {
            let n = e.n as i64;
            let mut count = 0;
            for x0 in -n..=n {
                for y0 in -n..=n {
                    let v = x0 * x0 + y0;
                    if v >= 0 && (0..=v).any(|r| r * r == v) {
                        count += 1;
                    }
                }
            }
            assert_eq!(e.count, count);
        }
        assert_eq!(s.entries[0].count, 50);
        assert_eq!(reducibility_census(&(&z - &xx), &[5, 9]).unwrap().counts(), vec![0, 0]);
        assert_eq!(
            reducibility_census(&(&z.pow(2) - &xx.pow(2)), &[3, 4]).unwrap().counts(),
            vec![49, 81]
        );
    }

    #[test]
    fn integrality_examples() {
        let s = integrality_census(&x().pow(2), &y(), &[5]).unwrap();
        let mut count = 0;
        for x0 in -5i64..=5 {
            for y0 in -5i64..=5 {
                if y0 != 0 && (x0 * x0) % y0 == 0 {
                    count += 1;
                }
            }
        }
        assert_eq!(s.series.counts(), vec![count]);
        assert_eq!(s.zero_denominator[0].count, 11);
        assert_eq!(integrality_census(&x(), &k(1), &[4]).unwrap().series.counts(), vec![81]);
        let b = &(&x().pow(2) + &y().pow(2)) + &k(2);
        assert_eq!(integrality_census(&k(1), &b, &[3, 6]).unwrap().series.counts(), vec![0, 0]);
    }

    #[test]
    fn variety_examples() {
        assert_eq!(variety_point_count(&(&x() - &y()), &[10]).unwrap().counts(), vec![21]);
        let circle = &(&x().pow(2) + &y().pow(2)) - &k(1);
        assert_eq!(variety_point_count(&circle, &[1, 5]).unwrap().counts(), vec![4, 4]);
        assert_eq!(variety_point_count(&k(1), &[3]).unwrap().counts(), vec![0]);
        let hyper = &(&x() * &y()) - &k(1);
        let s = variety_point_count(&hyper, &[10, 100, 1000]).unwrap();
        assert_eq!(s.counts(), vec![2, 2, 2]);
        assert_eq!(s.fitted_exponent, Some(0.0));
        // a whole line of zeros: x * (y - 1)
        let line = &x() * &(&y() - &k(1));
        assert_eq!(variety_point_count(&line, &[2]).unwrap().counts(), vec![5 + 4]);
    }

    #[test]
    fn growth_series_fit_and_csv() {
        let s = GrowthSeries::new(vec![
            GrowthEntry { n: 1, count: 3 },
            GrowthEntry { n: 2, count: 12 },
            GrowthEntry { n: 4, count: 48 },
        ]);
        assert!((s.fitted_exponent.unwrap() - 2.0).abs() < 1e-12);
        assert_eq!(s.to_csv(), "N,count\n1,3\n2,12\n4,48\n");
        let z = GrowthSeries::new(vec![GrowthEntry { n: 1, count: 0 }, GrowthEntry { n: 2, count: 5 }]);
        assert_eq!(z.fitted_exponent, None);
    }

    #[test]
    fn symmetry_examples() {
        let p = map(x().pow(2), y());
        let r = injectivity_census(&p, 6, 1).unwrap();
        let d = symmetry_probe(&p, &r.multi_records, None).unwrap().unwrap();
        assert_eq!(d.q, map(-&x(), y()));
        assert_eq!(d.pq, PqCheck::Identical);
        assert_eq!(d.order.order, Some(2));
        assert_eq!(d.fixed.kind, LocusKind::PositiveDimensional);
        assert_eq!(d.fixed.defining_polynomials, vec![x()]);
        assert!(d.anomaly.is_none());

        let inj = map(&x() + &y().pow(2), y());
        let r = injectivity_census(&inj, 6, 1).unwrap();
        assert!(symmetry_probe(&inj, &r.multi_records, None).unwrap().is_none());

        let csq = map(&x().pow(2) - &y().pow(2), &k(2) * &(&x() * &y()));
        let r = injectivity_census(&csq, 6, 2).unwrap();
        let d = symmetry_probe(&csq, &r.multi_records, None).unwrap().unwrap();
        assert_eq!(d.q, map(-&x(), -&y()));
        assert_eq!(d.order.order, Some(2));
        assert_eq!(d.fixed.rational_points, vec![[int_rat(0), int_rat(0)]]);
    }

    #[test]
    fn symmetry_fit_survives_long_rows() {
        // Many records per row: a prefix of the records shares one x value.
        let p = map(x().pow(2), y());
        let r = injectivity_census(&p, 20, 2).unwrap();
        let d = symmetry_probe(&p, &r.multi_records, None).unwrap().unwrap();
        assert_eq!(d.q, map(-&x(), y()));
    }
}

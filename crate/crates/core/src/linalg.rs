//! Exact solution of (possibly overdetermined) rational linear systems by
//! fraction-free (Bareiss) elimination.

use num_integer::Integer;
use num_traits::{One, Zero};

use crate::arith::{BigInt, BigRat};

/// Solves `A·X = B` exactly, `A` being `m × n` and `B` being `m × k`.
///
/// Returns `None` when some column of `B` is inconsistent. Free unknowns of a
/// rank-deficient system are set to zero. The result is `n × k`.
pub fn solve(a: &[Vec<BigRat>], b: &[Vec<BigRat>], n: usize) -> Option<Vec<Vec<BigRat>>> {
    solve_ranked(a, b, n).map(|(x, _)| x)
}

/// [`solve`], also reporting the rank of `A`.
pub fn solve_ranked(
    a: &[Vec<BigRat>],
    b: &[Vec<BigRat>],
    n: usize,
) -> Option<(Vec<Vec<BigRat>>, usize)> {
    let m = a.len();
    assert_eq!(b.len(), m, "row count mismatch");
    let k = b.first().map_or(0, Vec::len);
    let width = n + k;

    // Clear denominators row by row.
    let mut rows: Vec<Vec<BigInt>> = a
        .iter()
        .zip(b)
        .map(|(ra, rb)| {
            let den = ra
                .iter()
                .chain(rb)
                .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
            ra.iter()
                .chain(rb)
                .map(|c| (c * BigRat::from_integer(den.clone())).to_integer())
                .collect()
        })
        .collect();

    let mut prev = BigInt::one();
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    for col in 0..n {
        if r == m {
            break;
        }
        let Some(p) = (r..m).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(p, r);
        let (head, tail) = rows.split_at_mut(r + 1);
        let pivot_row = &head[r];
        let pv = &pivot_row[col];
        for row in tail.iter_mut() {
            let factor = std::mem::take(&mut row[col]);
            if factor.is_zero() {
                for j in col + 1..width {
                    if !row[j].is_zero() {
                        row[j] = (&row[j] * pv) / &prev;
                    }
                }
                continue;
            }
            for j in col + 1..width {
                let v = &row[j] * pv - &factor * &pivot_row[j];
                row[j] = v / &prev;
            }
        }
        prev = pv.clone();
        pivots.push(col);
        r += 1;
    }

    // Rows below the pivots have zero coefficient part; their right-hand sides must vanish.
    if rows[r..].iter().any(|row| row[n..].iter().any(|v| !v.is_zero())) {
        return None;
    }

    let mut x = vec![vec![BigRat::zero(); k]; n];
    for (i, &pc) in pivots.iter().enumerate().rev() {
        let row = &rows[i];
        for c in 0..k {
            let mut acc = BigRat::from_integer(row[n + c].clone());
            for &j in &pivots[i + 1..] {
                if !row[j].is_zero() {
                    acc -= BigRat::from_integer(row[j].clone()) * &x[j][c];
                }
            }
            x[pc][c] = acc / BigRat::from_integer(row[pc].clone());
        }
    }
    Some((x, pivots.len()))
}

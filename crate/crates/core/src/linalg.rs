//! Exact integer linear algebra: fraction-free (Bareiss) elimination.
//!
//! Entries are kept in `i128` while every intermediate product fits, and the
//! elimination restarts over big integers on overflow. Rank over the
//! integers-as-rationals equals rank over any field of characteristic zero.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{CheckedMul, CheckedSub, Signed, Zero};

/// Rank of an integer matrix over the rationals.
pub fn rank(rows: &[Vec<i64>]) -> usize {
    let small: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    match bareiss(small) {
        Some((r, _)) => r,
        None => {
            let big: Vec<Vec<BigInt>> = rows
                .iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect();
            bareiss(big).expect("big integers never overflow").0
        }
    }
}

/// Determinant of a square integer matrix. The empty matrix has determinant 1.
pub fn determinant(rows: &[Vec<i64>]) -> BigInt {
    let n = rows.len();
    assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
    if n == 0 {
        return BigInt::from(1);
    }
    let big: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let (r, det) = bareiss(big).expect("big integers never overflow");
    if r < n {
        BigInt::zero()
    } else {
        det
    }
}

/// Whether `target` lies in the column span of `cols` (each inner vector is
/// one column) over the rationals.
pub fn in_column_span(cols: &[Vec<i64>], target: &[i64]) -> bool {
    let base = rank(cols);
    let mut extended = cols.to_vec();
    extended.push(target.to_vec());
    rank(&extended) == base
}

/// Fraction-free elimination on the rows. Returns the rank and the signed
/// last pivot (the determinant when the matrix is square and nonsingular).
/// `None` signals arithmetic overflow.
fn bareiss<T>(mut m: Vec<Vec<T>>) -> Option<(usize, T)>
where
    T: Clone + Integer + Signed + CheckedMul + CheckedSub,
{
    let nrows = m.len();
    let ncols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    let mut prev = T::one();
    let mut sign = T::one();
    for col in 0..ncols {
        if rank == nrows {
            break;
        }
        let Some(p) = (rank..nrows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        if p != rank {
            m.swap(p, rank);
            sign = -sign;
        }
        let (head, tail) = m.split_at_mut(rank + 1);
        let pivot_row = &head[rank];
        let pivot = pivot_row[col].clone();
        for row in tail.iter_mut() {
            let factor = row[col].clone();
            for j in col + 1..ncols {
                let a = row[j].checked_mul(&pivot)?;
                let b = factor.checked_mul(&pivot_row[j])?;
                let num = a.checked_sub(&b)?;
                row[j] = num.div_floor(&prev);
            }
            row[col] = T::zero();
        }
        prev = pivot;
        rank += 1;
    }
    Some((rank, sign * prev))
}

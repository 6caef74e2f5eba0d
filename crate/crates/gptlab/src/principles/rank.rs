//! Exact matrix rank by fraction-free (Bareiss) elimination over integers.

use crate::scalar::Scalar;
use crate::theories::TheoryError;
use num::bigint::BigInt;
use num::rational::BigRational;
use num::{Integer, One, Signed, Zero};

/// Exact rank of the row span. Rows are scaled to integers (rank-preserving)
/// and reduced by Bareiss elimination, so no rounding occurs anywhere.
pub fn exact_rank(rows: &[Vec<Scalar>]) -> Result<usize, TheoryError> {
    if rows.is_empty() {
        return Ok(0);
    }
    let cols = rows[0].len();
    let mut m: Vec<Vec<BigInt>> = Vec::with_capacity(rows.len());
    for row in rows {
        if row.len() != cols {
            return Err(TheoryError::Invalid("ragged rank input".into()));
        }
        let rats: Vec<BigRational> = row
            .iter()
            .map(|s| {
                s.as_rational()
                    .cloned()
                    .ok_or_else(|| TheoryError::Unsupported("exact rank needs exact mode".into()))
            })
            .collect::<Result<_, _>>()?;
        let mut lcm = BigInt::one();
        for r in &rats {
            lcm = lcm.lcm(r.denom());
        }
        m.push(
            rats.iter()
                .map(|r| r.numer() * (&lcm / r.denom()))
                .collect(),
        );
    }
    let n_rows = m.len();
    let mut rank = 0usize;
    let mut prev = BigInt::one();
    let mut row = 0usize;
    for col in 0..cols {
        if row >= n_rows {
            break;
        }
        // Find a pivot in this column.
        let Some(p) = (row..n_rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        for r in (row + 1)..n_rows {
            for c in (col + 1)..cols {
                let num = &m[row][col] * &m[r][c] - &m[r][col] * &m[row][c];
                let (q, rem) = num.div_rem(&prev);
                debug_assert!(rem.is_zero(), "Bareiss divisions are exact");
                m[r][c] = q;
            }
            m[r][col] = BigInt::zero();
        }
        prev = m[row][col].abs();
        row += 1;
        rank += 1;
    }
    Ok(rank)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Mode;

    fn s(p: i64, q: i64) -> Scalar {
        Scalar::ratio(p, q, Mode::Exact)
    }

    #[test]
    fn rank_of_identity_and_duplicates() {
        let id = vec![
            vec![s(1, 1), s(0, 1), s(0, 1)],
            vec![s(0, 1), s(1, 1), s(0, 1)],
            vec![s(0, 1), s(0, 1), s(1, 1)],
        ];
        assert_eq!(exact_rank(&id).unwrap(), 3);
        let dup = vec![
            vec![s(1, 2), s(1, 3)],
            vec![s(1, 2), s(1, 3)],
            vec![s(3, 2), s(1, 5)],
        ];
        assert_eq!(exact_rank(&dup).unwrap(), 2);
    }

    #[test]
    fn rank_detects_near_dependence_exactly() {
        // Rows that are exactly dependent despite awkward denominators.
        let rows = vec![
            vec![s(1, 3), s(2, 7), s(5, 11)],
            vec![s(2, 3), s(4, 7), s(10, 11)],
        ];
        assert_eq!(exact_rank(&rows).unwrap(), 1);
    }
}

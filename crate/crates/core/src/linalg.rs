//! Exact rank over the rationals.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::Result;
use crate::laurent::LaurentPoly;

/// Rank over `Q`: rows are cleared of denominators, then reduced by
/// fraction-free elimination, where every division is exact.
pub fn rank(rows: Vec<Vec<BigRational>>) -> usize {
    let mut m: Vec<Vec<BigInt>> = rows
        .into_iter()
        .map(|row| {
            let lcm = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            row.into_iter()
                .map(|x| (x * BigRational::from_integer(lcm.clone())).to_integer())
                .collect()
        })
        .collect();
    let width = m.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..width {
        if r == m.len() {
            break;
        }
        let Some(pivot) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, pivot);
        let (head, tail) = m.split_at_mut(r + 1);
        let p = &head[r];
        for row in tail.iter_mut() {
            let f = row[c].clone();
            for j in c + 1..width {
                row[j] = (&p[c] * &row[j] - &f * &p[j]) / &prev;
            }
            row[c] = BigInt::zero();
        }
        prev = m[r][c].clone();
        r += 1;
    }
    r
}

/// Evaluates every entry at `q = x`.
pub fn eval_rows(rows: &[Vec<LaurentPoly>], x: &BigRational) -> Result<Vec<Vec<BigRational>>> {
    rows.iter()
        .map(|row| row.iter().map(|p| p.eval_rational(x)).collect())
        .collect()
}

pub fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Plain Gauss-Jordan over `Q`.
    fn rank_by_pivoting(mut rows: Vec<Vec<BigRational>>) -> usize {
        let width = rows.first().map_or(0, Vec::len);
        let mut r = 0;
        for c in 0..width {
            let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
                continue;
            };
            rows.swap(r, p);
            let pivot = rows[r].clone();
            for (i, row) in rows.iter_mut().enumerate() {
                if i != r && !row[c].is_zero() {
                    let f = &row[c] / &pivot[c];
                    for (x, y) in row.iter_mut().zip(&pivot) {
                        *x -= &f * y;
                    }
                }
            }
            r += 1;
        }
        r
    }

    fn q(rows: &[&[i64]]) -> Vec<Vec<BigRational>> {
        rows.iter().map(|r| r.iter().map(|&x| ratio(x, 1)).collect()).collect()
    }

    #[test]
    fn small_ranks() {
        assert_eq!(rank(Vec::new()), 0);
        assert_eq!(rank(q(&[&[0, 0], &[0, 0]])), 0);
        assert_eq!(rank(q(&[&[1, 2], &[2, 4]])), 1);
        assert_eq!(rank(q(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]])), 2);
        assert_eq!(rank(q(&[&[2, 0, 0], &[0, 3, 0], &[0, 0, 5]])), 3);
        assert_eq!(rank(q(&[&[0, 1], &[1, 0], &[1, 1]])), 2);
    }

    #[test]
    fn evaluation() {
        let rows = vec![vec![LaurentPoly::loop_value(), LaurentPoly::one()]];
        let got = eval_rows(&rows, &ratio(2, 1)).unwrap();
        assert_eq!(got, vec![vec![ratio(5, 2), ratio(1, 1)]]);
        assert!(eval_rows(&rows, &ratio(0, 1)).is_err());
    }

    proptest! {
        #[test]
        fn rank_bounded_and_invariant_under_duplication(
            m in proptest::collection::vec(proptest::collection::vec((-3i64..4, 1i64..4), 4), 1..6)
        ) {
            let rows: Vec<Vec<BigRational>> = m.iter().map(|r| r.iter().map(|&(a, b)| ratio(a, b)).collect()).collect();
            let r = rank(rows.clone());
            prop_assert_eq!(r, rank_by_pivoting(rows.clone()));
            prop_assert!(r <= rows.len().min(4));
            let mut doubled = rows.clone();
            doubled.extend(rows.iter().map(|row| row.iter().map(|x| x * ratio(2, 1)).collect::<Vec<_>>()));
            prop_assert_eq!(rank(doubled), r);
            let transposed: Vec<Vec<BigRational>> = (0..4).map(|c| rows.iter().map(|row| row[c].clone()).collect()).collect();
            prop_assert_eq!(rank(transposed), r);
        }
    }
}

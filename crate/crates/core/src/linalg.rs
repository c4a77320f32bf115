//! Exact linear solves by fraction-free (Bareiss) elimination.

use num::bigint::BigInt;
use num::{Integer, One, Signed, Zero};

use crate::exact::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solution {
    Unique(Vec<Rational>),
    /// The columns are linearly dependent on the given rows.
    RankDeficient { rank: usize },
    /// No vector satisfies every row.
    Inconsistent,
}

/// Solves `a x = b` for a tall or square rational system.
pub fn solve(a: &[Vec<Rational>], b: &[Rational]) -> Solution {
    let rows = a.len();
    assert_eq!(rows, b.len(), "right-hand side length");
    let cols = a.first().map_or(0, Vec::len);
    assert!(a.iter().all(|r| r.len() == cols), "ragged matrix");

    // clear denominators row by row; the last column is the right-hand side
    let mut m: Vec<Vec<BigInt>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let lcm = row
                .iter()
                .chain(std::iter::once(rhs))
                .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            row.iter()
                .chain(std::iter::once(rhs))
                .map(|x| x.numer() * (&lcm / x.denom()))
                .collect()
        })
        .collect();

    let mut prev = BigInt::one();
    for k in 0..cols {
        let Some(pivot) = (k..rows).find(|&i| !m[i][k].is_zero()) else {
            return Solution::RankDeficient { rank: k };
        };
        m.swap(k, pivot);
        for i in k + 1..rows {
            for j in k + 1..=cols {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    if m[cols..].iter().any(|row| !row[cols].is_zero()) {
        return Solution::Inconsistent;
    }

    let mut x = vec![Rational::zero(); cols];
    for k in (0..cols).rev() {
        let mut acc = Rational::from_integer(m[k][cols].clone());
        for j in k + 1..cols {
            acc -= Rational::from_integer(m[k][j].clone()) * &x[j];
        }
        x[k] = acc / Rational::from_integer(m[k][k].clone());
    }
    debug_assert!(x.iter().all(|v| !v.denom().is_negative()));
    Solution::Unique(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, ratio};

    fn mat(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect()
    }

    #[test]
    fn square_system() {
        let a = mat(&[&[2, 1], &[1, 3]]);
        let b = vec![rat(3), rat(5)];
        assert_eq!(solve(&a, &b), Solution::Unique(vec![ratio(4, 5), ratio(7, 5)]));
    }

    #[test]
    fn rational_entries_and_pivoting() {
        let a = vec![vec![rat(0), ratio(1, 2)], vec![ratio(1, 3), rat(1)]];
        let b = vec![rat(1), rat(1)];
        // y = 2, x/3 + 2 = 1 -> x = -3
        assert_eq!(solve(&a, &b), Solution::Unique(vec![rat(-3), rat(2)]));
    }

    #[test]
    fn tall_consistent_and_inconsistent() {
        let a = mat(&[&[1, 0], &[0, 1], &[1, 1]]);
        assert_eq!(solve(&a, &[rat(1), rat(2), rat(3)]), Solution::Unique(vec![rat(1), rat(2)]));
        assert_eq!(solve(&a, &[rat(1), rat(2), rat(4)]), Solution::Inconsistent);
    }

    #[test]
    fn singular() {
        let a = mat(&[&[1, 2], &[2, 4]]);
        assert_eq!(solve(&a, &[rat(1), rat(2)]), Solution::RankDeficient { rank: 1 });
    }

    #[test]
    fn hilbert_matrix_round_trip() {
        let n = 6;
        let a: Vec<Vec<Rational>> = (0..n)
            .map(|i| (0..n).map(|j| ratio(1, (i + j + 1) as i64)).collect())
            .collect();
        let x: Vec<Rational> = (0..n).map(|i| ratio(i as i64 - 2, 3)).collect();
        let b: Vec<Rational> = a
            .iter()
            .map(|row| row.iter().zip(&x).map(|(p, q)| p * q).fold(rat(0), |s, v| s + v))
            .collect();
        assert_eq!(solve(&a, &b), Solution::Unique(x));
    }
}

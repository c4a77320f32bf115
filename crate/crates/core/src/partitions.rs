//! Young diagrams, their contents, and content-based symmetric quantities.

use std::fmt;

use num::bigint::{BigInt, BigUint};
use num::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::Rational;

/// A Young diagram stored as its weakly decreasing row lengths.
///
/// The empty partition (size 0) is allowed and is the unique diagram with
/// zero cells.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::Usage(format!("partition {parts:?} has a zero part")));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Usage(format!("partition {parts:?} is not weakly decreasing")));
        }
        Ok(Self { parts })
    }

    pub fn empty() -> Self {
        Self { parts: Vec::new() }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// Number of cells.
    pub fn size(&self) -> usize {
        self.parts.iter().map(|&p| p as usize).sum()
    }

    pub fn rows(&self) -> usize {
        self.parts.len()
    }

    /// The transposed diagram.
    pub fn conjugate(&self) -> Partition {
        let cols = self.parts.first().copied().unwrap_or(0);
        let parts = (1..=cols)
            .map(|j| self.parts.iter().filter(|&&p| p >= j).count() as u32)
            .collect();
        Partition { parts }
    }

    /// Cell contents (column index minus row index), row-major.
    pub fn contents(&self) -> Vec<i64> {
        contents(self)
    }

    /// Sum of all contents.
    pub fn content_sum(&self) -> i64 {
        // row i contributes sum_{j=1}^{p} (j - i) = p(p+1)/2 - i p
        self.parts
            .iter()
            .enumerate()
            .map(|(i, &p)| {
                let p = p as i64;
                p * (p + 1) / 2 - (i as i64 + 1) * p
            })
            .sum()
    }
}

impl TryFrom<Vec<u32>> for Partition {
    type Error = Error;
    fn try_from(parts: Vec<u32>) -> Result<Self> {
        Partition::new(parts)
    }
}

impl From<Partition> for Vec<u32> {
    fn from(p: Partition) -> Self {
        p.parts
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// All partitions of `d` with at most `max_rows` rows, in lexicographically
/// decreasing order. `d = 0` yields the single empty partition.
pub fn enumerate_partitions(d: usize, max_rows: Option<usize>) -> Vec<Partition> {
    let max_rows = max_rows.unwrap_or(d.max(1));
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(d);
    extend(d as u32, d as u32, max_rows, &mut current, &mut out);
    out
}

fn extend(remaining: u32, cap: u32, rows_left: usize, current: &mut Vec<u32>, out: &mut Vec<Partition>) {
    if remaining == 0 {
        out.push(Partition { parts: current.clone() });
        return;
    }
    if rows_left == 0 {
        return;
    }
    for part in (1..=cap.min(remaining)).rev() {
        // the remaining rows can hold at most part * (rows_left - 1) cells
        if (part as usize) * rows_left < remaining as usize {
            break;
        }
        current.push(part);
        extend(remaining - part, part, rows_left - 1, current, out);
        current.pop();
    }
}

/// Number of partitions of `d`, by Euler's pentagonal-number recurrence.
pub fn partition_count(d: usize) -> BigUint {
    partition_counts(d).pop().expect("nonempty").to_biguint().expect("nonnegative")
}

/// `p(0), ..., p(d)` by the pentagonal-number recurrence.
pub fn partition_counts(d: usize) -> Vec<BigInt> {
    let mut p = vec![BigInt::zero(); d + 1];
    p[0] = BigInt::one();
    for n in 1..=d {
        let mut acc = BigInt::zero();
        for k in 1.. {
            let g1 = k * (3 * k - 1) / 2;
            if g1 > n {
                break;
            }
            let g2 = k * (3 * k + 1) / 2;
            let mut term = p[n - g1].clone();
            if g2 <= n {
                term += &p[n - g2];
            }
            if k % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        p[n] = acc;
    }
    p
}

pub fn contents(lambda: &Partition) -> Vec<i64> {
    let mut out = Vec::with_capacity(lambda.size());
    for (i, &p) in lambda.parts.iter().enumerate() {
        let row = i as i64 + 1;
        out.extend((1..=p as i64).map(|col| col - row));
    }
    out
}

/// `prod_{cells} (x + c)`.
pub fn content_polynomial(lambda: &Partition, x: &Rational) -> Rational {
    contents(lambda)
        .into_iter()
        .fold(Rational::one(), |acc, c| acc * (x + Rational::from_integer(BigInt::from(c))))
}

/// Integer specialization of [`content_polynomial`].
pub fn content_product(lambda: &Partition, x: i64) -> BigInt {
    contents(lambda)
        .into_iter()
        .fold(BigInt::one(), |acc, c| acc * BigInt::from(x + c))
}

/// Complete homogeneous symmetric polynomial `h_r(values)`.
pub fn complete_homogeneous(r: usize, values: &[i64]) -> BigInt {
    complete_homogeneous_upto(r, values).pop().expect("nonempty")
}

/// `h_0, ..., h_r` of `values`, via the prefix recurrence
/// `h_j(x_1..x_k) = h_j(x_1..x_{k-1}) + x_k h_{j-1}(x_1..x_k)`.
pub fn complete_homogeneous_upto(r: usize, values: &[i64]) -> Vec<BigInt> {
    let mut h = vec![BigInt::zero(); r + 1];
    h[0] = BigInt::one();
    for &x in values {
        if x == 0 {
            continue;
        }
        let x = BigInt::from(x);
        for j in 1..=r {
            let add = &x * &h[j - 1];
            h[j] += add;
        }
    }
    h
}

/// Dominance order: every prefix sum of `lambda` is at most that of `mu`.
pub fn dominance_leq(lambda: &Partition, mu: &Partition) -> Result<bool> {
    if lambda.size() != mu.size() {
        return Err(Error::Usage(format!(
            "dominance comparison needs equal sizes, got {} and {}",
            lambda.size(),
            mu.size()
        )));
    }
    let rows = lambda.rows().max(mu.rows());
    let (mut a, mut b) = (0u64, 0u64);
    for i in 0..rows {
        a += lambda.parts.get(i).copied().unwrap_or(0) as u64;
        b += mu.parts.get(i).copied().unwrap_or(0) as u64;
        if a > b {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use proptest::prelude::*;

    fn p(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    /// Independent count: number of weakly decreasing compositions by
    /// brute force over all compositions of d.
    fn brute_force_count(d: usize) -> usize {
        if d == 0 {
            return 1;
        }
        let mut count = 0;
        // compositions of d correspond to subsets of the d-1 gaps
        for mask in 0u32..(1 << (d - 1)) {
            let mut parts = Vec::new();
            let mut run = 1;
            for gap in 0..d - 1 {
                if mask & (1 << gap) != 0 {
                    parts.push(run);
                    run = 1;
                } else {
                    run += 1;
                }
            }
            parts.push(run);
            if parts.windows(2).all(|w| w[0] >= w[1]) {
                count += 1;
            }
        }
        count
    }

    #[test]
    fn enumerate_small() {
        assert_eq!(enumerate_partitions(1, None), vec![p(&[1])]);
        let four = enumerate_partitions(4, None);
        assert_eq!(four, vec![p(&[4]), p(&[3, 1]), p(&[2, 2]), p(&[2, 1, 1]), p(&[1, 1, 1, 1])]);
        assert_eq!(enumerate_partitions(4, Some(2)), vec![p(&[4]), p(&[3, 1]), p(&[2, 2])]);
    }

    #[test]
    fn zero_is_the_empty_partition() {
        assert_eq!(enumerate_partitions(0, None), vec![Partition::empty()]);
        assert_eq!(partition_count(0), BigUint::one());
        assert_eq!(content_polynomial(&Partition::empty(), &rat(7)), rat(1));
    }

    #[test]
    fn counts_match_brute_force() {
        assert_eq!(partition_count(1), BigUint::from(1u32));
        assert_eq!(brute_force_count(10), 42);
        assert_eq!(partition_count(10), BigUint::from(42u32));
        assert_eq!(partition_count(30), BigUint::from(5604u32));
        for d in 0..=20 {
            assert_eq!(brute_force_count(d), enumerate_partitions(d, None).len(), "d={d}");
            assert_eq!(partition_count(d), BigUint::from(enumerate_partitions(d, None).len()), "d={d}");
        }
        assert_eq!(enumerate_partitions(30, None).len(), 5604);
    }

    #[test]
    fn enumeration_is_sorted_and_unique() {
        let all = enumerate_partitions(12, None);
        assert!(all.windows(2).all(|w| w[0].parts > w[1].parts));
    }

    #[test]
    fn content_examples() {
        assert_eq!(contents(&p(&[2])), vec![0, 1]);
        assert_eq!(contents(&p(&[1, 1])), vec![0, -1]);
        assert_eq!(contents(&p(&[2, 1])), vec![0, 1, -1]);
        assert_eq!(p(&[3, 1]).content_sum(), 2);
    }

    #[test]
    fn content_polynomial_examples() {
        assert_eq!(content_polynomial(&p(&[1, 1, 1]), &rat(3)), rat(6));
        assert_eq!(content_polynomial(&p(&[3]), &rat(3)), rat(60));
        assert_eq!(content_polynomial(&p(&[2, 1]), &rat(2)), rat(6));
        assert_eq!(content_polynomial(&p(&[1, 1, 1]), &rat(2)), rat(0));
    }

    #[test]
    fn complete_homogeneous_examples() {
        assert_eq!(complete_homogeneous(0, &[5, -3]), BigInt::one());
        assert_eq!(complete_homogeneous(2, &[0, 1]), BigInt::from(1));
        assert_eq!(complete_homogeneous(2, &[0, 1, 2]), BigInt::from(7));
        assert_eq!(complete_homogeneous(3, &[]), BigInt::zero());
    }

    #[test]
    fn dominance_examples() {
        assert!(dominance_leq(&p(&[1, 1]), &p(&[2])).unwrap());
        assert!(!dominance_leq(&p(&[2]), &p(&[1, 1])).unwrap());
        assert!(dominance_leq(&p(&[2, 1, 1]), &p(&[3, 1])).unwrap());
        assert!(matches!(dominance_leq(&p(&[2]), &p(&[2, 1])), Err(Error::Usage(_))));
    }

    #[test]
    fn invalid_partitions_rejected() {
        assert!(Partition::new(vec![1, 2]).is_err());
        assert!(Partition::new(vec![2, 0]).is_err());
    }

    /// Expand h_r by enumerating weakly increasing index tuples.
    fn h_by_tuples(r: usize, values: &[i64]) -> BigInt {
        fn rec(start: usize, left: usize, values: &[i64], acc: BigInt, total: &mut BigInt) {
            if left == 0 {
                *total += acc;
                return;
            }
            for i in start..values.len() {
                rec(i, left - 1, values, &acc * values[i], total);
            }
        }
        let mut total = BigInt::zero();
        rec(0, r, values, BigInt::one(), &mut total);
        total
    }

    #[test]
    fn even_h_is_maximized_by_row_and_column() {
        // h_{2g-2}(lambda) <= h_{2g-2}(0, 1, ..., d-1) for every diagram
        for d in 1..=9 {
            let row: Vec<i64> = (0..d as i64).collect();
            let top = complete_homogeneous_upto(6, &row);
            for lambda in enumerate_partitions(d, None) {
                let h = complete_homogeneous_upto(6, &lambda.contents());
                for g in 1..=4 {
                    assert!(h[2 * g - 2] <= top[2 * g - 2], "{lambda} g={g}");
                }
            }
        }
    }

    #[test]
    fn dominance_does_not_order_even_h() {
        // (1,1,1) is dominated by (2,1) but has the larger h_2 of contents
        let col = p(&[1, 1, 1]);
        let hook = p(&[2, 1]);
        assert!(dominance_leq(&col, &hook).unwrap());
        assert_eq!(complete_homogeneous(2, &col.contents()), BigInt::from(7));
        assert_eq!(complete_homogeneous(2, &hook.contents()), BigInt::from(1));
    }

    #[test]
    fn content_polynomial_is_monotone_in_dominance() {
        for d in 1..=8 {
            let all = enumerate_partitions(d, None);
            for x in [d as i64, d as i64 + 3] {
                for a in &all {
                    for b in &all {
                        if dominance_leq(a, b).unwrap() {
                            assert!(content_product(a, x) <= content_product(b, x));
                        }
                    }
                }
            }
        }
    }

    proptest! {
        #[test]
        fn h_recurrence_matches_tuple_expansion(r in 0usize..5, values in prop::collection::vec(-4i64..5, 0..6)) {
            prop_assert_eq!(complete_homogeneous(r, &values), h_by_tuples(r, &values));
        }

        #[test]
        fn even_h_is_schur_convex(
            values in prop::collection::vec(-6i64..7, 2..7),
            i in 0usize..7,
            j in 0usize..7,
            g in 1usize..5,
        ) {
            // a Robin Hood transfer produces a vector majorized by the original
            let (i, j) = (i % values.len(), j % values.len());
            prop_assume!(values[i] - values[j] >= 2);
            let mut smoothed = values.clone();
            smoothed[i] -= 1;
            smoothed[j] += 1;
            prop_assert!(complete_homogeneous(2 * g - 2, &smoothed) <= complete_homogeneous(2 * g - 2, &values));
        }

        #[test]
        fn contents_invariants(d in 1usize..14, pick in 0usize..1000) {
            let all = enumerate_partitions(d, None);
            let lambda = &all[pick % all.len()];
            let c = lambda.contents();
            prop_assert_eq!(c.len(), d);
            let mut conj: Vec<i64> = lambda.conjugate().contents().into_iter().map(|x| -x).collect();
            let mut own = c.clone();
            conj.sort();
            own.sort();
            prop_assert_eq!(conj, own);
            prop_assert_eq!(c.iter().sum::<i64>(), lambda.content_sum());
        }

        #[test]
        fn content_polynomial_between_factorials(d in 1usize..10, extra in 0i64..6, pick in 0usize..1000) {
            let all = enumerate_partitions(d, None);
            let lambda = &all[pick % all.len()];
            let x = d as i64 + extra; // x > d - 1
            let falling: BigInt = (0..d as i64).map(|k| BigInt::from(x - k)).product();
            let rising: BigInt = (0..d as i64).map(|k| BigInt::from(x + k)).product();
            let value = content_product(lambda, x);
            prop_assert!(value > BigInt::zero());
            prop_assert!(falling <= value && value <= rising);
        }
    }
}

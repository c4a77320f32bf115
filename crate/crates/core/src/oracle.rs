//! Brute-force recount of the configuration numbers from their definitions.
//!
//! A configuration is a tuple `(pi_1, pi_2, tau_1, ..., tau_{2g-2})` in
//! `S^d` whose product `pi_1 pi_2 pi_1^{-1} pi_2^{-1} tau_1 ... tau_{2g-2}` is
//! the identity and whose `tau_i` are transpositions. Optional filters:
//! monotone (`tau_i = (s_i t_i)`, `s_i < t_i`, `t_1 <= ... <= t_{2g-2}`) and
//! transitive (the generated group has one orbit on `{1..d}`).
//!
//! Products compose right to left: `(xy)(i) = x(y(i))`.

use std::fmt;

use num::bigint::BigUint;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest degree for which configurations may be enumerated.
pub const MAX_CONFIG_DEGREE: usize = 6;
/// Largest degree for commuting-pair counts.
pub const MAX_COMMUTING_DEGREE: usize = 7;
/// Upper limit on `(d!)^2 * C(d,2)^(2g-3)`, the number of unpruned search leaves.
pub const MAX_SEARCH_LEAVES: f64 = 2.0e9;

const SLOTS: usize = 8;

/// A permutation of `{1..d}`, `d <= 8`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Permutation {
    len: u8,
    // zero-based images; slots beyond len are fixed points
    images: [u8; SLOTS],
}

impl Permutation {
    pub fn identity(d: usize) -> Self {
        assert!(d <= SLOTS);
        let mut images = [0u8; SLOTS];
        for (i, x) in images.iter_mut().enumerate() {
            *x = i as u8;
        }
        Self { len: d as u8, images }
    }

    /// From one-line notation over `1..=d`.
    pub fn from_one_line(one_line: &[usize]) -> Result<Self> {
        let d = one_line.len();
        if d > SLOTS {
            return Err(Error::Capacity { module: "oracle", detail: format!("permutations of degree {d} > {SLOTS}") });
        }
        let mut seen = [false; SLOTS];
        let mut p = Self::identity(d);
        for (i, &x) in one_line.iter().enumerate() {
            if x == 0 || x > d || seen[x - 1] {
                return Err(Error::Usage(format!("{one_line:?} is not a permutation of 1..{d}")));
            }
            seen[x - 1] = true;
            p.images[i] = (x - 1) as u8;
        }
        Ok(p)
    }

    /// The transposition swapping `s` and `t` (one-based).
    pub fn transposition(d: usize, s: usize, t: usize) -> Self {
        assert!(s != t && s >= 1 && t >= 1 && s <= d && t <= d);
        let mut p = Self::identity(d);
        p.images.swap(s - 1, t - 1);
        p
    }

    pub fn degree(&self) -> usize {
        self.len as usize
    }

    pub fn one_line(&self) -> Vec<usize> {
        self.images[..self.degree()].iter().map(|&x| x as usize + 1).collect()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i - 1] as usize + 1
    }

    /// `self * other`, i.e. apply `other` first.
    pub fn compose(&self, other: &Self) -> Self {
        let mut out = *self;
        for i in 0..SLOTS {
            out.images[i] = self.images[other.images[i] as usize];
        }
        out
    }

    pub fn inverse(&self) -> Self {
        let mut out = *self;
        for i in 0..SLOTS {
            out.images[self.images[i] as usize] = i as u8;
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i == x as usize)
    }

    pub fn cycle_count(&self) -> usize {
        let mut seen = [false; SLOTS];
        let mut cycles = 0;
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            cycles += 1;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.images[i] as usize;
            }
        }
        cycles
    }

    /// `(s, t)` with `s < t` (one-based) when this is a transposition.
    pub fn as_transposition(&self) -> Option<(usize, usize)> {
        let mut moved = (0..self.degree()).filter(|&i| self.images[i] as usize != i);
        let (a, b) = (moved.next()?, moved.next()?);
        if moved.next().is_some() || self.images[a] as usize != b {
            return None;
        }
        Some((a + 1, b + 1))
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.one_line())
    }
}

/// All `d!` permutations in lexicographic order of one-line notation.
pub fn all_permutations(d: usize) -> Vec<Permutation> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = (1..=d).collect();
    loop {
        out.push(Permutation::from_one_line(&current).expect("valid"));
        // next lexicographic permutation
        let Some(i) = (1..d).rev().find(|&i| current[i - 1] < current[i]) else {
            break;
        };
        let j = (i..d).rev().find(|&j| current[j] > current[i - 1]).expect("exists");
        current.swap(i - 1, j);
        current[i..].reverse();
    }
    out
}

/// Union-find over at most eight points.
#[derive(Clone, Copy)]
struct Orbits {
    parent: [u8; SLOTS],
    len: u8,
}

impl Orbits {
    fn new(d: usize) -> Self {
        let mut parent = [0u8; SLOTS];
        for (i, p) in parent.iter_mut().enumerate() {
            *p = i as u8;
        }
        Self { parent, len: d as u8 }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] as usize != x {
            let grand = self.parent[self.parent[x] as usize];
            self.parent[x] = grand;
            x = grand as usize;
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb) as u8;
        }
    }

    fn join_permutation(&mut self, p: &Permutation) {
        for i in 0..self.len as usize {
            self.union(i, p.images[i] as usize);
        }
    }

    fn is_transitive(&mut self) -> bool {
        (1..self.len as usize).all(|i| self.find(i) == 0)
    }
}

/// Which configurations to count.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigCountQuery {
    pub d: usize,
    pub g: usize,
    pub monotone: bool,
    pub transitive: bool,
}

fn check_config_capacity(q: &ConfigCountQuery) -> Result<()> {
    if q.d == 0 || q.g == 0 {
        return Err(Error::Usage("configuration counts need d >= 1 and g >= 1".into()));
    }
    if q.d > MAX_CONFIG_DEGREE {
        return Err(Error::Capacity {
            module: "oracle",
            detail: format!("degree {} exceeds the enumeration limit {MAX_CONFIG_DEGREE}", q.d),
        });
    }
    let fact: f64 = (1..=q.d).map(|k| k as f64).product();
    let pairs = (q.d * (q.d - 1) / 2) as f64;
    let leaves = fact * fact * pairs.powi((2 * q.g as i32 - 3).max(0));
    if leaves > MAX_SEARCH_LEAVES {
        return Err(Error::Capacity {
            module: "oracle",
            detail: format!("d = {}, g = {} needs ~{leaves:.2e} search leaves (limit {MAX_SEARCH_LEAVES:.0e})", q.d, q.g),
        });
    }
    Ok(())
}

struct Search<'a> {
    transpositions: &'a [(usize, usize, Permutation)],
    target: Permutation,
    steps: usize,
    monotone: bool,
    transitive: bool,
    base: Orbits,
    path: Vec<(usize, usize)>,
}

impl Search<'_> {
    // number of ways to finish from `prefix` after `done` transpositions
    fn extend(&mut self, prefix: Permutation, done: usize, min_t: usize) -> u64 {
        let remaining = self.steps - done;
        let gap = prefix.inverse().compose(&self.target);
        // gap needs at least d - cycles(gap) transpositions, with matching parity
        let distance = gap.degree() - gap.cycle_count();
        if distance > remaining || (remaining - distance) % 2 == 1 {
            return 0;
        }
        if remaining == 1 {
            let Some((s, t)) = gap.as_transposition() else {
                return 0;
            };
            if self.monotone && t < min_t {
                return 0;
            }
            return u64::from(self.accept(Some((s, t))));
        }
        let mut total = 0;
        for &(s, t, tau) in self.transpositions {
            if self.monotone && t < min_t {
                continue;
            }
            self.path.push((s, t));
            total += self.extend(prefix.compose(&tau), done + 1, t);
            self.path.pop();
        }
        total
    }

    fn accept(&self, last: Option<(usize, usize)>) -> bool {
        if !self.transitive {
            return true;
        }
        let mut orbits = self.base;
        for &(s, t) in self.path.iter().chain(last.iter()) {
            orbits.union(s - 1, t - 1);
        }
        orbits.is_transitive()
    }
}

fn transposition_list(d: usize) -> Vec<(usize, usize, Permutation)> {
    // ordered by the larger element, then the smaller one
    let mut out = Vec::new();
    for t in 2..=d {
        for s in 1..t {
            out.push((s, t, Permutation::transposition(d, s, t)));
        }
    }
    out
}

/// Number of configurations matching `query`.
pub fn count_configs(query: &ConfigCountQuery) -> Result<BigUint> {
    check_config_capacity(query)?;
    let d = query.d;
    let steps = 2 * query.g - 2;
    let perms = all_permutations(d);
    let transpositions = transposition_list(d);
    let total: u64 = (0..perms.len() * perms.len())
        .into_par_iter()
        .map(|idx| {
            let (p1, p2) = (&perms[idx / perms.len()], &perms[idx % perms.len()]);
            // tau_1 ... tau_k must equal (p1 p2 p1^-1 p2^-1)^-1 = p2 p1 p2^-1 p1^-1
            let target = p2.compose(p1).compose(&p2.inverse()).compose(&p1.inverse());
            let mut base = Orbits::new(d);
            if query.transitive {
                base.join_permutation(p1);
                base.join_permutation(p2);
            }
            let mut search = Search {
                transpositions: &transpositions,
                target,
                steps,
                monotone: query.monotone,
                transitive: query.transitive,
                base,
                path: Vec::with_capacity(steps),
            };
            if steps == 0 {
                u64::from(target.is_identity() && search.accept(None))
            } else {
                search.extend(Permutation::identity(d), 0, 0)
            }
        })
        .sum();
    Ok(BigUint::from(total))
}

/// Number of commuting pairs in `S^d`, optionally only those generating a
/// transitive subgroup.
pub fn count_commuting_pairs(d: usize, transitive: bool) -> Result<BigUint> {
    if d == 0 {
        return Err(Error::Usage("commuting pairs need d >= 1".into()));
    }
    if d > MAX_COMMUTING_DEGREE {
        return Err(Error::Capacity {
            module: "oracle",
            detail: format!("degree {d} exceeds the commuting-pair limit {MAX_COMMUTING_DEGREE}"),
        });
    }
    let perms = all_permutations(d);
    let total: u64 = perms
        .par_iter()
        .map(|a| {
            perms
                .iter()
                .filter(|b| {
                    if a.compose(b) != b.compose(a) {
                        return false;
                    }
                    if !transitive {
                        return true;
                    }
                    let mut orbits = Orbits::new(d);
                    orbits.join_permutation(a);
                    orbits.join_permutation(b);
                    orbits.is_transitive()
                })
                .count() as u64
        })
        .sum();
    Ok(BigUint::from(total))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(d: usize, g: usize, monotone: bool, transitive: bool) -> ConfigCountQuery {
        ConfigCountQuery { d, g, monotone, transitive }
    }

    fn n(x: u64) -> BigUint {
        BigUint::from(x)
    }

    #[test]
    fn permutation_basics() {
        let p = Permutation::from_one_line(&[2, 3, 1]).unwrap();
        assert_eq!(p.apply(1), 2);
        assert_eq!(p.inverse().one_line(), vec![3, 1, 2]);
        assert!(p.compose(&p.inverse()).is_identity());
        assert_eq!(p.cycle_count(), 1);
        let t = Permutation::transposition(4, 2, 4);
        assert_eq!(t.as_transposition(), Some((2, 4)));
        assert_eq!(p.as_transposition(), None);
        assert!(Permutation::from_one_line(&[1, 1]).is_err());
        // right-to-left composition
        let a = Permutation::transposition(3, 1, 2);
        let b = Permutation::transposition(3, 2, 3);
        assert_eq!(a.compose(&b).one_line(), vec![2, 3, 1]);
    }

    #[test]
    fn enumerates_symmetric_group() {
        assert_eq!(all_permutations(1).len(), 1);
        assert_eq!(all_permutations(4).len(), 24);
        let five = all_permutations(5);
        let mut dedup = five.clone();
        dedup.sort_by_key(|p| p.one_line());
        dedup.dedup();
        assert_eq!(dedup.len(), 120);
    }

    #[test]
    fn config_examples() {
        assert_eq!(count_configs(&q(2, 2, true, true)).unwrap(), n(4));
        for g in 2..=4 {
            for (m, t) in [(true, true), (true, false), (false, true), (false, false)] {
                assert_eq!(count_configs(&q(1, g, m, t)).unwrap(), n(0));
            }
        }
        assert_eq!(count_configs(&q(3, 2, true, false)).unwrap(), n(90));
    }

    #[test]
    fn genus_one_is_commuting_pairs() {
        for d in 1..=5 {
            assert_eq!(count_configs(&q(d, 1, true, false)).unwrap(), count_commuting_pairs(d, false).unwrap());
            assert_eq!(count_configs(&q(d, 1, false, true)).unwrap(), count_commuting_pairs(d, true).unwrap());
        }
    }

    #[test]
    fn commuting_pair_examples() {
        assert_eq!(count_commuting_pairs(1, false).unwrap(), n(1));
        assert_eq!(count_commuting_pairs(3, false).unwrap(), n(18));
        assert_eq!(count_commuting_pairs(4, true).unwrap(), n(42));
        // order times class number
        let classes = [1u64, 2, 3, 5, 7, 11];
        let mut fact = 1u64;
        for d in 1..=6 {
            fact *= d as u64;
            assert_eq!(count_commuting_pairs(d, false).unwrap(), n(fact * classes[d - 1]));
        }
    }

    #[test]
    fn monotone_never_exceeds_classical() {
        for d in 2..=4 {
            for g in 1..=3 {
                for t in [false, true] {
                    assert!(count_configs(&q(d, g, true, t)).unwrap() <= count_configs(&q(d, g, false, t)).unwrap());
                }
            }
        }
    }

    #[test]
    fn capacity_is_enforced() {
        assert!(matches!(count_configs(&q(7, 1, true, true)), Err(Error::Capacity { .. })));
        assert!(matches!(count_configs(&q(6, 5, true, true)), Err(Error::Capacity { .. })));
        assert!(matches!(count_commuting_pairs(8, false), Err(Error::Capacity { .. })));
        assert!(matches!(count_configs(&q(0, 1, true, true)), Err(Error::Usage(_))));
    }
}

//! Eisenstein series and exact fitting of q-series by polynomials in
//! `E2`, `E4`, `E6`.

use std::collections::BTreeMap;
use std::fmt;

use num::bigint::BigInt;
use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{self, divisor_sigma, factorial_int, int, ratio, Rational};
use crate::hurwitz;
use crate::partitions::partition_counts;
use crate::pseries::{series_log, series_mul, QSeries};

/// Bernoulli numbers `B_0..B_n` with `B_1 = -1/2`.
#[derive(Clone, Debug)]
pub struct BernoulliCache {
    values: Vec<Rational>,
}

impl BernoulliCache {
    /// Fills the cache from `sum_{j<=n} C(n+1, j) B_j = 0`.
    pub fn new(n: usize) -> Self {
        let mut values: Vec<Rational> = Vec::with_capacity(n + 1);
        values.push(Rational::one());
        for m in 1..=n {
            let mut acc = Rational::zero();
            let mut binom = BigInt::one(); // C(m+1, j)
            for (j, b) in values.iter().enumerate() {
                acc += int(binom.clone()) * b;
                binom = binom * BigInt::from(m + 1 - j) / BigInt::from(j + 1);
            }
            // binom is now C(m+1, m)
            values.push(-acc / int(binom));
        }
        Self { values }
    }

    pub fn get(&self, n: usize) -> &Rational {
        &self.values[n]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

pub fn bernoulli(n: usize) -> Rational {
    BernoulliCache::new(n).get(n).clone()
}

/// `zeta(1 - 2k) = -B_{2k} / (2k)`.
pub fn zeta_one_minus_2k(k: usize) -> Rational {
    -bernoulli(2 * k) / int(BigInt::from(2 * k))
}

/// `E_{2k}(q) = 1 + (2 / zeta(1-2k)) sum_{n>=1} sigma_{2k-1}(n) q^n`.
pub fn eisenstein(k: usize, order: usize) -> QSeries {
    assert!(k >= 1, "Eisenstein index starts at 1");
    let factor = int(BigInt::from(2)) / zeta_one_minus_2k(k);
    let mut coeffs = vec![Rational::one()];
    coeffs.extend((1..=order as u64).map(|n| &factor * int(divisor_sigma(2 * k as u32 - 1, n))));
    QSeries::new(coeffs).expect("nonempty")
}

/// Exponents `(a, b, c)` of `E2^a E4^b E6^c`.
pub type Monomial = (u32, u32, u32);

pub fn monomial_weight(m: Monomial) -> u32 {
    2 * m.0 + 4 * m.1 + 6 * m.2
}

/// Monomials of weight at most `max_weight`, ordered by weight and then by
/// decreasing power of `E2`.
pub fn basis(max_weight: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    for w in (0..=max_weight).step_by(2) {
        for a in (0..=w / 2).rev() {
            for c in 0..=(w - 2 * a) / 6 {
                let rest = w - 2 * a - 6 * c;
                if rest % 4 == 0 {
                    out.push((a, rest / 4, c));
                }
            }
        }
    }
    out
}

/// Exact rational combination of monomials in `E2`, `E4`, `E6`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct QuasimodularPoly {
    terms: BTreeMap<Monomial, Rational>,
}

impl QuasimodularPoly {
    pub fn new<I: IntoIterator<Item = (Monomial, Rational)>>(terms: I) -> Self {
        let mut p = Self::default();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        let entry = self.terms.entry(m).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Rational> {
        &self.terms
    }

    pub fn coefficient(&self, m: Monomial) -> Rational {
        self.terms.get(&m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn max_weight(&self) -> u32 {
        self.terms.keys().map(|&m| monomial_weight(m)).max().unwrap_or(0)
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        Self::new(self.terms.iter().map(|(&m, c)| (m, c * factor)))
    }

    /// Substitutes the Eisenstein expansions, truncated at `q^order`.
    pub fn to_series(&self, order: usize) -> QSeries {
        let mut powers = EisensteinPowers::new(order);
        let mut out = QSeries::zero(order);
        for (&m, c) in &self.terms {
            out = out.add(&powers.monomial(m).scale(c)).expect("same order");
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let terms: Vec<TermDoc> = self
            .terms
            .iter()
            .map(|(&(a, b, c), coeff)| TermDoc { a, b, c, coeff: coeff.clone() })
            .collect();
        serde_json::to_value(terms).expect("serializable")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let terms: Vec<TermDoc> = serde_json::from_value(value.clone())?;
        Ok(Self::new(terms.into_iter().map(|t| ((t.a, t.b, t.c), t.coeff))))
    }
}

#[derive(Serialize, Deserialize)]
struct TermDoc {
    a: u32,
    b: u32,
    c: u32,
    #[serde(with = "exact::rational_str")]
    coeff: Rational,
}

impl fmt::Display for QuasimodularPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // highest weight first
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by_key(|(&m, _)| (std::cmp::Reverse(monomial_weight(m)), std::cmp::Reverse(m)));
        for (i, (&(a, b, c), coeff)) in terms.into_iter().enumerate() {
            let sign = if coeff.is_negative() { "-" } else { "+" };
            if i == 0 {
                if coeff.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let mag = coeff.abs();
            let factors: Vec<String> = [("E2", a), ("E4", b), ("E6", c)]
                .into_iter()
                .filter(|&(_, e)| e > 0)
                .map(|(name, e)| if e == 1 { name.to_string() } else { format!("{name}^{e}") })
                .collect();
            if factors.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{mag}*{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

/// Memoized powers of `E2`, `E4`, `E6` at a fixed truncation order.
struct EisensteinPowers {
    order: usize,
    base: [QSeries; 3],
    powers: [Vec<QSeries>; 3],
}

impl EisensteinPowers {
    fn new(order: usize) -> Self {
        let base = [eisenstein(1, order), eisenstein(2, order), eisenstein(3, order)];
        let powers = [vec![QSeries::one(order)], vec![QSeries::one(order)], vec![QSeries::one(order)]];
        Self { order, base, powers }
    }

    fn power(&mut self, which: usize, e: u32) -> QSeries {
        while self.powers[which].len() <= e as usize {
            let next = series_mul(self.powers[which].last().unwrap(), &self.base[which]).expect("same order");
            self.powers[which].push(next);
        }
        self.powers[which][e as usize].clone()
    }

    fn monomial(&mut self, (a, b, c): Monomial) -> QSeries {
        let mut out = self.power(0, a);
        if b > 0 {
            out = series_mul(&out, &self.power(1, b)).expect("same order");
        }
        if c > 0 {
            out = series_mul(&out, &self.power(2, c)).expect("same order");
        }
        debug_assert_eq!(out.order(), self.order);
        out
    }
}

/// Outcome of [`fit_quasimodular`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FitReport {
    /// Every coefficient up to the validation degree matches exactly.
    Fitted(QuasimodularPoly),
    /// No polynomial in the basis matches degrees `0..=fit_degree`.
    Inconsistent { fit_degree: usize },
    /// The fitted polynomial disagrees with the series at `degree`.
    Mismatch {
        degree: usize,
        series: Rational,
        model: Rational,
        candidate: QuasimodularPoly,
    },
}

impl FitReport {
    pub fn polynomial(&self) -> Option<&QuasimodularPoly> {
        match self {
            FitReport::Fitted(p) => Some(p),
            _ => None,
        }
    }
}

/// Fits `s` by a combination of monomials of weight at most `max_weight`
/// using coefficients `0..=fit_degree`, then checks the remaining
/// coefficients up to `validate_degree` exactly.
pub fn fit_quasimodular(
    s: &QSeries,
    max_weight: u32,
    fit_degree: usize,
    validate_degree: usize,
) -> Result<FitReport> {
    let monomials = basis(max_weight);
    if validate_degree <= fit_degree {
        return Err(Error::Usage(format!(
            "validation degree {validate_degree} must exceed the fitting degree {fit_degree}"
        )));
    }
    if s.order() < validate_degree {
        return Err(Error::Usage(format!(
            "series is truncated at {} but validation needs degree {validate_degree}",
            s.order()
        )));
    }
    if fit_degree + 1 < monomials.len() {
        return Err(Error::Usage(format!(
            "{} basis monomials of weight <= {max_weight} cannot be fixed by {} coefficients",
            monomials.len(),
            fit_degree + 1
        )));
    }

    let mut powers = EisensteinPowers::new(validate_degree);
    let columns: Vec<QSeries> = monomials.iter().map(|&m| powers.monomial(m)).collect();
    let matrix: Vec<Vec<Rational>> = (0..=fit_degree)
        .map(|d| columns.iter().map(|col| col.coeff(d).clone()).collect())
        .collect();
    let rhs: Vec<Rational> = (0..=fit_degree).map(|d| s.coeff(d).clone()).collect();

    let solution = match crate::linalg::solve(&matrix, &rhs) {
        crate::linalg::Solution::Unique(x) => x,
        crate::linalg::Solution::Inconsistent => return Ok(FitReport::Inconsistent { fit_degree }),
        crate::linalg::Solution::RankDeficient { rank } => {
            return Err(Error::Usage(format!(
                "coefficients 0..={fit_degree} determine only {rank} of {} basis monomials",
                monomials.len()
            )))
        }
    };
    let candidate = QuasimodularPoly::new(monomials.iter().copied().zip(solution.iter().cloned()));
    for d in fit_degree + 1..=validate_degree {
        let model = columns
            .iter()
            .zip(&solution)
            .fold(Rational::zero(), |acc, (col, x)| acc + col.coeff(d) * x);
        if &model != s.coeff(d) {
            return Ok(FitReport::Mismatch { degree: d, series: s.coeff(d).clone(), model, candidate });
        }
    }
    Ok(FitReport::Fitted(candidate))
}

/// Tries weight caps `0, 2, ..., max_cap` and returns the first cap whose
/// fit validates, with the fitted polynomial. Each attempt fits with two
/// more coefficients than basis monomials.
pub fn fit_minimal_weight(
    s: &QSeries,
    max_cap: u32,
    validate_degree: usize,
) -> Result<Option<(u32, QuasimodularPoly)>> {
    for cap in (0..=max_cap).step_by(2) {
        let fit_degree = basis(cap).len() + 1;
        if fit_degree >= validate_degree {
            return Err(Error::Usage(format!(
                "validation degree {validate_degree} too small for weight cap {cap}"
            )));
        }
        if let FitReport::Fitted(p) = fit_quasimodular(s, cap, fit_degree, validate_degree)? {
            return Ok(Some((cap, p)));
        }
    }
    Ok(None)
}

/// Closed form of the genus-two monotone series `F_2(q)`:
/// `(5E2^3 - 3E2E4 - 2E6 + 45E2^2 + 18E4 + 90E2 - 153) / 51840`.
pub fn f2_closed_form() -> QuasimodularPoly {
    let numerators: [(Monomial, i64); 7] = [
        ((3, 0, 0), 5),
        ((1, 1, 0), -3),
        ((0, 0, 1), -2),
        ((2, 0, 0), 45),
        ((0, 1, 0), 18),
        ((1, 0, 0), 90),
        ((0, 0, 0), -153),
    ];
    QuasimodularPoly::new(numerators.into_iter().map(|(m, c)| (m, ratio(c, 51840))))
}

/// Checks `F_1^d = d! sum_{n | d} 1/n` for `d <= order`, and that the
/// logarithm of `sum p(d) q^d` reproduces the same column.
pub fn verify_f1_closed_form(order: usize) -> bool {
    let f = hurwitz::f_table(order, 1);
    verify_f1_against(&f.genus_series(1), order)
}

/// [`verify_f1_closed_form`] against a precomputed `F_1` series.
pub fn verify_f1_against(f1: &QSeries, order: usize) -> bool {
    if f1.order() < order {
        return false;
    }
    let exp_coeffs = f1.to_exponential();
    let closed_form_ok = (1..=order).all(|d| {
        let harmonic = (1..=d)
            .filter(|n| d % n == 0)
            .fold(Rational::zero(), |acc, n| acc + ratio(1, n as i64));
        exp_coeffs[d] == int(factorial_int(d)) * harmonic
    });
    let euler = QSeries::new(partition_counts(order).into_iter().map(int).collect()).expect("nonempty");
    let log_ok = series_log(&euler)
        .map(|l| f1.truncate(order).map(|f| f == l).unwrap_or(false))
        .unwrap_or(false);
    closed_form_ok && log_ok && exp_coeffs[0].is_zero()
}

//! Truncated power series over the rationals.
//!
//! [`QSeries`] is a univariate series in `q` stored by plain coefficients.
//! [`GenusTable`] is a bivariate series in `q` and `t` where `t` only occurs
//! through `t^{2g-2}`; entries are stored as counts `T[d][g]` and the
//! [`Convention`] says which factorials turn them into plain coefficients.
//! Conversion happens only inside [`bivariate_log`] and [`bivariate_exp`].

use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{self, factorial_int, int, Rational};

pub const QSERIES_SCHEMA: &str = "cue-genus/qseries/v1";
pub const GENUS_TABLE_SCHEMA: &str = "cue-genus/genus-table/v1";

/// Power series `c_0 + c_1 q + ... + c_D q^D`, truncated at `D`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QSeries {
    coeffs: Vec<Rational>,
}

impl QSeries {
    /// Builds a series from plain coefficients; the truncation order is
    /// `coeffs.len() - 1`.
    pub fn new(coeffs: Vec<Rational>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Usage("a series needs at least a constant term".into()));
        }
        Ok(Self { coeffs })
    }

    pub fn zero(order: usize) -> Self {
        Self { coeffs: vec![Rational::zero(); order + 1] }
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = Rational::one();
        s
    }

    /// `sum_d q^d e_d / d!` from exponential coefficients `e_d`.
    pub fn from_exponential(exp_coeffs: &[Rational]) -> Result<Self> {
        let coeffs = exp_coeffs
            .iter()
            .enumerate()
            .map(|(d, e)| e / int(factorial_int(d)))
            .collect();
        Self::new(coeffs)
    }

    /// Exponential coefficients `d! c_d`.
    pub fn to_exponential(&self) -> Vec<Rational> {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(d, c)| c * int(factorial_int(d)))
            .collect()
    }

    /// Truncation order `D`.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, d: usize) -> &Rational {
        &self.coeffs[d]
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn truncate(&self, order: usize) -> Result<Self> {
        if order > self.order() {
            return Err(Error::Usage(format!(
                "cannot extend a series truncated at {} to order {order}",
                self.order()
            )));
        }
        Ok(Self { coeffs: self.coeffs[..=order].to_vec() })
    }

    fn check_same_order(&self, other: &Self) -> Result<()> {
        if self.order() != other.order() {
            return Err(Error::Usage(format!(
                "series truncated at {} and {} cannot be combined",
                self.order(),
                other.order()
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_order(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(Self { coeffs })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_order(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        Ok(Self { coeffs })
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        Self { coeffs: self.coeffs.iter().map(|c| c * factor).collect() }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        series_mul(self, other)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(QSeriesDoc {
            schema: QSERIES_SCHEMA.into(),
            truncation: self.order(),
            convention: "plain".into(),
            coefficients: self.coeffs.clone(),
        })
        .expect("serializable")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let doc: QSeriesDoc = serde_json::from_value(value.clone())?;
        if doc.schema != QSERIES_SCHEMA || doc.convention != "plain" {
            return Err(Error::Usage(format!("unsupported series document {} ({})", doc.schema, doc.convention)));
        }
        if doc.coefficients.len() != doc.truncation + 1 {
            return Err(Error::Usage("series length disagrees with its truncation".into()));
        }
        Self::new(doc.coefficients)
    }
}

#[derive(Serialize, Deserialize)]
struct QSeriesDoc {
    schema: String,
    truncation: usize,
    convention: String,
    #[serde(with = "exact::rational_vec")]
    coefficients: Vec<Rational>,
}

/// Cauchy product truncated at the common order.
pub fn series_mul(a: &QSeries, b: &QSeries) -> Result<QSeries> {
    a.check_same_order(b)?;
    let n = a.order();
    let mut coeffs = vec![Rational::zero(); n + 1];
    for (i, x) in a.coeffs.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.coeffs[..=n - i].iter().enumerate() {
            coeffs[i + j] += x * y;
        }
    }
    Ok(QSeries { coeffs })
}

/// Formal logarithm of a series with constant term 1, from `(log a)' = a'/a`.
pub fn series_log(a: &QSeries) -> Result<QSeries> {
    if !a.coeffs[0].is_one() {
        return Err(Error::Precondition(format!(
            "log needs constant term 1, found {}",
            a.coeffs[0]
        )));
    }
    let n = a.order();
    let mut l = vec![Rational::zero(); n + 1];
    for d in 1..=n {
        // d a_d = sum_{j=1}^{d} j l_j a_{d-j}
        let mut acc = Rational::zero();
        for j in 1..d {
            acc += int(j.into()) * &l[j] * &a.coeffs[d - j];
        }
        l[d] = &a.coeffs[d] - acc / int(d.into());
    }
    Ok(QSeries { coeffs: l })
}

/// Formal exponential of a series with constant term 0, from `b' = a' b`.
pub fn series_exp(a: &QSeries) -> Result<QSeries> {
    if !a.coeffs[0].is_zero() {
        return Err(Error::Precondition(format!(
            "exp needs constant term 0, found {}",
            a.coeffs[0]
        )));
    }
    let n = a.order();
    let mut b = vec![Rational::zero(); n + 1];
    b[0] = Rational::one();
    for d in 1..=n {
        let mut acc = Rational::zero();
        for j in 1..=d {
            if a.coeffs[j].is_zero() {
                continue;
            }
            acc += int(j.into()) * &a.coeffs[j] * &b[d - j];
        }
        b[d] = acc / int(d.into());
    }
    Ok(QSeries { coeffs: b })
}

/// How the entries of a [`GenusTable`] relate to plain series coefficients.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Convention {
    /// coefficient of `q^d t^{2g-2}` is `T[d][g] / d!`
    ExponentialOrdinary,
    /// coefficient of `q^d t^{2g-2}` is `T[d][g] / (d! (2g-2)!)`
    ExponentialExponential,
}

impl Convention {
    fn weight(self, d: usize, g: usize) -> Rational {
        let mut w = factorial_int(d);
        if self == Convention::ExponentialExponential {
            w *= factorial_int(2 * g - 2);
        }
        int(w)
    }
}

/// Table `T[d][g]` for `0 <= d <= D`, `1 <= g <= G`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenusTable {
    convention: Convention,
    // rows[d][g - 1]
    rows: Vec<Vec<Rational>>,
}

impl GenusTable {
    pub fn zero(degree: usize, genera: usize, convention: Convention) -> Self {
        assert!(genera >= 1, "a genus table needs at least one genus");
        Self { convention, rows: vec![vec![Rational::zero(); genera]; degree + 1] }
    }

    /// Table of a series with constant term 1 (`T[0][1] = 1`).
    pub fn unit(degree: usize, genera: usize, convention: Convention) -> Self {
        let mut t = Self::zero(degree, genera, convention);
        t.rows[0][0] = Rational::one();
        t
    }

    pub fn degree(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn genera(&self) -> usize {
        self.rows[0].len()
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    /// Entry `T[d][g]`, `g >= 1`.
    pub fn get(&self, d: usize, g: usize) -> &Rational {
        &self.rows[d][g - 1]
    }

    pub fn set(&mut self, d: usize, g: usize, value: Rational) {
        self.rows[d][g - 1] = value;
    }

    /// The genus-`g` column as a q-series with plain coefficients
    /// (`T[d][g]` divided by the convention's factorials).
    pub fn genus_series(&self, g: usize) -> QSeries {
        let coeffs = (0..=self.degree())
            .map(|d| self.get(d, g) / self.convention.weight(d, g))
            .collect();
        QSeries { coeffs }
    }

    /// Keeps only genera `g > m`.
    pub fn drop_genera_upto(&self, m: usize) -> Self {
        let mut out = self.clone();
        for row in &mut out.rows {
            for entry in row.iter_mut().take(m) {
                *entry = Rational::zero();
            }
        }
        out
    }

    fn to_plain(&self) -> Vec<Vec<Rational>> {
        self.rows
            .iter()
            .enumerate()
            .map(|(d, row)| {
                row.iter()
                    .enumerate()
                    .map(|(k, v)| v / self.convention.weight(d, k + 1))
                    .collect()
            })
            .collect()
    }

    fn from_plain(plain: Vec<Vec<Rational>>, convention: Convention) -> Self {
        let rows = plain
            .into_iter()
            .enumerate()
            .map(|(d, row)| {
                row.into_iter()
                    .enumerate()
                    .map(|(k, v)| v * convention.weight(d, k + 1))
                    .collect()
            })
            .collect();
        Self { convention, rows }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(GenusTableDoc {
            schema: GENUS_TABLE_SCHEMA.into(),
            degree: self.degree(),
            genera: self.genera(),
            convention: self.convention,
            table: self.rows.clone(),
        })
        .expect("serializable")
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let doc: GenusTableDoc = serde_json::from_value(value.clone())?;
        if doc.schema != GENUS_TABLE_SCHEMA {
            return Err(Error::Usage(format!("unsupported table document {}", doc.schema)));
        }
        if doc.genera == 0
            || doc.table.len() != doc.degree + 1
            || doc.table.iter().any(|row| row.len() != doc.genera)
        {
            return Err(Error::Usage("genus table shape disagrees with its metadata".into()));
        }
        Ok(Self { convention: doc.convention, rows: doc.table })
    }
}

#[derive(Serialize, Deserialize)]
struct GenusTableDoc {
    schema: String,
    degree: usize,
    genera: usize,
    convention: Convention,
    #[serde(with = "exact::rational_matrix")]
    table: Vec<Vec<Rational>>,
}

// Polynomials in u = t^2 truncated below u^len.
fn upoly_mul_acc(acc: &mut [Rational], a: &[Rational], b: &[Rational], scale: &Rational) {
    let len = acc.len();
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        let xs = x * scale;
        for (j, y) in b[..len - i].iter().enumerate() {
            if !y.is_zero() {
                acc[i + j] += &xs * y;
            }
        }
    }
}

/// Formal logarithm of a bivariate table with constant term 1.
///
/// The genus grading is closed under multiplication
/// (`t^{2g1-2} t^{2g2-2} = t^{2(g1+g2-1)-2}`), so every reported entry is
/// exact despite truncation at `G`.
pub fn bivariate_log(k: &GenusTable) -> Result<GenusTable> {
    let genera = k.genera();
    if !k.get(0, 1).is_one() || (2..=genera).any(|g| !k.get(0, g).is_zero()) {
        return Err(Error::Precondition("bivariate log needs constant term exactly 1".into()));
    }
    let plain = k.to_plain();
    let n = k.degree();
    let mut l = vec![vec![Rational::zero(); genera]; n + 1];
    for d in 1..=n {
        let mut acc = vec![Rational::zero(); genera];
        for j in 1..d {
            upoly_mul_acc(&mut acc, &l[j], &plain[d - j], &int(j.into()));
        }
        let inv_d = Rational::new(1.into(), d.into());
        l[d] = plain[d].iter().zip(&acc).map(|(a, s)| a - s * &inv_d).collect();
    }
    Ok(GenusTable::from_plain(l, k.convention))
}

/// Formal exponential of a bivariate table with zero constant term.
pub fn bivariate_exp(l: &GenusTable) -> Result<GenusTable> {
    let genera = l.genera();
    if (1..=genera).any(|g| !l.get(0, g).is_zero()) {
        return Err(Error::Precondition("bivariate exp needs constant term 0".into()));
    }
    let plain = l.to_plain();
    let n = l.degree();
    let mut k = vec![vec![Rational::zero(); genera]; n + 1];
    k[0][0] = Rational::one();
    for d in 1..=n {
        let mut acc = vec![Rational::zero(); genera];
        for j in 1..=d {
            upoly_mul_acc(&mut acc, &plain[j], &k[d - j], &int(j.into()));
        }
        let inv_d = Rational::new(1.into(), d.into());
        k[d] = acc.into_iter().map(|s| s * &inv_d).collect();
    }
    Ok(GenusTable::from_plain(k, l.convention))
}

/// True when every coefficient is a nonnegative integer.
pub fn is_nonnegative_integral(t: &GenusTable) -> bool {
    t.rows.iter().flatten().all(|v| v.is_integer() && !v.is_negative())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, ratio};
    use proptest::prelude::*;

    fn s(v: &[i64]) -> QSeries {
        QSeries::new(v.iter().map(|&x| rat(x)).collect()).unwrap()
    }

    #[test]
    fn mul_examples() {
        assert_eq!(series_mul(&s(&[1, 1, 0]), &s(&[1, -1, 0])).unwrap(), s(&[1, 0, -1]));
        assert_eq!(series_mul(&s(&[1, 1, 1]), &QSeries::one(2)).unwrap(), s(&[1, 1, 1]));
        let geometric = s(&[1; 6]);
        assert_eq!(series_mul(&geometric, &s(&[1, -1, 0, 0, 0, 0])).unwrap(), QSeries::one(5));
        assert!(matches!(series_mul(&s(&[1, 1]), &s(&[1, 1, 1])), Err(Error::Usage(_))));
    }

    #[test]
    fn log_examples() {
        assert_eq!(series_log(&QSeries::one(4)).unwrap(), QSeries::zero(4));
        let mercator = QSeries::new(vec![rat(0), rat(1), ratio(-1, 2), ratio(1, 3)]).unwrap();
        assert_eq!(series_log(&s(&[1, 1, 0, 0])).unwrap(), mercator);
        assert!(matches!(series_log(&s(&[2, 1])), Err(Error::Precondition(_))));
    }

    #[test]
    fn exp_examples() {
        assert_eq!(series_exp(&QSeries::zero(3)).unwrap(), QSeries::one(3));
        // exp(q) = sum q^n / n!
        let e = series_exp(&s(&[0, 1, 0, 0, 0])).unwrap();
        assert_eq!(e.to_exponential(), vec![rat(1); 5]);
        assert!(matches!(series_exp(&s(&[1, 1])), Err(Error::Precondition(_))));
    }

    #[test]
    fn exponential_conversion() {
        let a = QSeries::from_exponential(&[rat(1), rat(1), rat(4), rat(18)]).unwrap();
        assert_eq!(a.coeff(2), &rat(2));
        assert_eq!(a.coeff(3), &rat(3));
        assert_eq!(a.to_exponential()[3], rat(18));
    }

    fn table_from(entries: &[(usize, usize, i64)], degree: usize, genera: usize, c: Convention) -> GenusTable {
        let mut t = GenusTable::unit(degree, genera, c);
        for &(d, g, v) in entries {
            t.set(d, g, rat(v));
        }
        t
    }

    #[test]
    fn bivariate_log_small_cases() {
        // H_1^1 = 1, H_1^2 = 4, H_2^2 = 4, H_2^1 = 0
        let k = table_from(&[(1, 1, 1), (2, 1, 4), (2, 2, 4)], 2, 2, Convention::ExponentialOrdinary);
        let l = bivariate_log(&k).unwrap();
        assert_eq!(l.get(1, 2), &rat(0));
        assert_eq!(l.get(2, 1), &rat(3));
        assert_eq!(l.get(2, 2), &rat(4));
        // B_2^2 = 4 with the doubly exponential convention gives C_2^2 = 4 as well
        let b = table_from(&[(1, 1, 1), (2, 1, 4), (2, 2, 4)], 2, 2, Convention::ExponentialExponential);
        assert_eq!(bivariate_log(&b).unwrap().get(2, 2), &rat(4));
    }

    #[test]
    fn bivariate_log_reduces_to_univariate() {
        // K = exp(F_1) with only the g = 1 column
        let f1 = QSeries::new(vec![rat(0), rat(1), ratio(3, 2), ratio(4, 3), ratio(7, 4)]).unwrap();
        let k1 = series_exp(&f1).unwrap();
        let mut k = GenusTable::zero(4, 3, Convention::ExponentialOrdinary);
        for (d, e) in k1.to_exponential().into_iter().enumerate() {
            k.set(d, 1, e);
        }
        let l = bivariate_log(&k).unwrap();
        assert_eq!(l.genus_series(1), f1);
        assert_eq!(l.genus_series(2), QSeries::zero(4));
    }

    #[test]
    fn bivariate_preconditions() {
        let bad = GenusTable::zero(3, 2, Convention::ExponentialOrdinary);
        assert!(matches!(bivariate_log(&bad), Err(Error::Precondition(_))));
        let unit = GenusTable::unit(3, 2, Convention::ExponentialOrdinary);
        assert!(matches!(bivariate_exp(&unit), Err(Error::Precondition(_))));
    }

    #[test]
    fn json_shapes() {
        let a = QSeries::new(vec![rat(1), ratio(-1, 2)]).unwrap();
        let v = a.to_json();
        assert_eq!(v["coefficients"][1], "-1/2");
        assert_eq!(v["truncation"], 1);
        assert_eq!(QSeries::from_json(&v).unwrap(), a);
        let t = table_from(&[(1, 1, 1), (2, 2, 4)], 2, 2, Convention::ExponentialExponential);
        let v = t.to_json();
        assert_eq!(v["convention"], "exponential-exponential");
        assert_eq!(v["table"][2][1], "4");
        assert_eq!(GenusTable::from_json(&v).unwrap(), t);
    }

    fn arb_series(order: usize, constant: i64) -> impl Strategy<Value = QSeries> {
        prop::collection::vec((-9i64..10, 1i64..6), order).prop_map(move |v| {
            let mut coeffs = vec![rat(constant)];
            coeffs.extend(v.into_iter().map(|(n, d)| ratio(n, d)));
            QSeries::new(coeffs).unwrap()
        })
    }

    fn arb_table(order: usize, genera: usize, zero_constant: bool) -> impl Strategy<Value = GenusTable> {
        prop::collection::vec((-9i64..10, 1i64..4), order * genera).prop_map(move |v| {
            let mut t = if zero_constant {
                GenusTable::zero(order, genera, Convention::ExponentialOrdinary)
            } else {
                GenusTable::unit(order, genera, Convention::ExponentialOrdinary)
            };
            for (i, (n, d)) in v.into_iter().enumerate() {
                t.set(1 + i / genera, 1 + i % genera, ratio(n, d));
            }
            t
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn exp_log_round_trip(a in arb_series(12, 1)) {
            let l = series_log(&a).unwrap();
            prop_assert!(l.coeff(0).is_zero());
            prop_assert_eq!(series_exp(&l).unwrap(), a);
        }

        #[test]
        fn log_exp_round_trip(a in arb_series(10, 0)) {
            prop_assert_eq!(series_log(&series_exp(&a).unwrap()).unwrap(), a);
        }

        #[test]
        fn log_of_product_is_sum_of_logs(a in arb_series(12, 1), b in arb_series(12, 1)) {
            let lhs = series_log(&series_mul(&a, &b).unwrap()).unwrap();
            let rhs = series_log(&a).unwrap().add(&series_log(&b).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn bivariate_round_trip(k in arb_table(6, 3, false)) {
            prop_assert_eq!(bivariate_exp(&bivariate_log(&k).unwrap()).unwrap(), k);
        }

        #[test]
        fn bivariate_exp_then_log(l in arb_table(6, 3, true)) {
            prop_assert_eq!(bivariate_log(&bivariate_exp(&l).unwrap()).unwrap(), l);
        }

        #[test]
        fn bivariate_matches_univariate_at_one_genus(a in arb_series(8, 1)) {
            let mut k = GenusTable::zero(8, 1, Convention::ExponentialOrdinary);
            for (d, e) in a.to_exponential().into_iter().enumerate() {
                k.set(d, 1, e);
            }
            prop_assert_eq!(bivariate_log(&k).unwrap().genus_series(1), series_log(&a).unwrap());
        }
    }
}

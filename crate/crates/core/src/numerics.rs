//! Floating-point evaluation of exact series: Euler's partition product,
//! Ramanujan's evaluation at `q = e^{-pi}`, decay of `Delta_{mN}` and the
//! concentration of the normalized integral.
//!
//! Series coming from the genus expansion are only evaluated for
//! `0 <= q < 1/e`.

use std::f64::consts::{E, PI};

use num::ToPrimitive;
use serde::Serialize;

use crate::engine::Engine;
use crate::error::{Error, Result};
use crate::exact::Rational;
use crate::partitions::partition_counts;
use crate::pseries::{series_exp, QSeries};

/// Default truncation degree for numeric checks.
pub const DEFAULT_DEGREE: usize = 40;

/// A row gets a warning when its scaled tail estimate exceeds this
/// fraction of its scaled value.
pub const WARN_FRACTION: f64 = 0.1;

/// `1/e`, the radius inside which the genus expansion converges.
pub fn domain_limit() -> f64 {
    (-1.0f64).exp()
}

/// Accepts `0 <= q < 1/e`.
pub fn check_domain(q: f64) -> Result<()> {
    if (0.0..domain_limit()).contains(&q) {
        Ok(())
    } else {
        Err(Error::Domain { q })
    }
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Horner evaluation of the truncated series, no domain guard.
pub fn horner(s: &QSeries, q: f64) -> f64 {
    s.coeffs().iter().rev().fold(0.0, |acc, c| acc * q + to_f64(c))
}

/// `sum_{d > order} (e|q|)^d e^{pi sqrt(2d/3)}`: coefficients over `d!` are
/// at most `e^d p(d)` and `p(d) <= e^{pi sqrt(2d/3)}`.
pub fn tail_estimate(order: usize, q: f64) -> f64 {
    let x = E * q.abs();
    if x == 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return f64::INFINITY;
    }
    let mut total = 0.0;
    for d in order + 1..order + 200_000 {
        let log_term = d as f64 * x.ln() + PI * (2.0 * d as f64 / 3.0).sqrt();
        let term = log_term.exp();
        total += term;
        if term < total * 1e-17 && (d as f64) > (PI / x.ln()).powi(2) {
            break;
        }
    }
    total
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Evaluation {
    pub value: f64,
    pub tail: f64,
}

/// Evaluates a series from the genus expansion at `q`, refusing `q`
/// outside `[0, 1/e)`.
pub fn eval_series(s: &QSeries, q: f64) -> Result<Evaluation> {
    check_domain(q)?;
    Ok(Evaluation { value: horner(s, q), tail: tail_estimate(s.order(), q) })
}

fn check_unit_interval(q: f64) -> Result<()> {
    if (0.0..1.0).contains(&q) {
        Ok(())
    } else {
        Err(Error::Usage(format!("Euler product needs 0 <= q < 1, got {q}")))
    }
}

/// Number of factors needed so the dropped ones change the product by less
/// than `1e-16` relative.
pub fn euler_cutoff(q: f64) -> usize {
    if q == 0.0 {
        return 0;
    }
    // the dropped factors contribute about q^{n+1} / (1 - q)
    let mut n = 1;
    while q.powi(n as i32 + 1) / (1.0 - q) >= 1e-16 {
        n += 1;
    }
    n
}

/// `prod_{n >= 1} (1 - q^n)`.
pub fn euler_function(q: f64) -> Result<f64> {
    check_unit_interval(q)?;
    Ok((1..=euler_cutoff(q)).map(|n| 1.0 - q.powi(n as i32)).product())
}

/// `prod_{n >= 1} (1 - q^n)^{-1} = sum_d p(d) q^d`.
pub fn euler_product(q: f64) -> Result<f64> {
    Ok(1.0 / euler_function(q)?)
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Gamma function (Lanczos, `g = 7`), with reflection below `1/2`.
pub fn gamma(x: f64) -> f64 {
    if x < 0.5 {
        return PI / ((PI * x).sin() * gamma(1.0 - x));
    }
    let x = x - 1.0;
    let t = x + LANCZOS_G + 0.5;
    let series = LANCZOS[1..]
        .iter()
        .enumerate()
        .fold(LANCZOS[0], |acc, (i, c)| acc + c / (x + i as f64 + 1.0));
    (2.0 * PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * series
}

pub fn gamma_quarter() -> f64 {
    gamma(0.25)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RamanujanCheck {
    /// `prod (1 - e^{-n pi})^{-1}`, the large-`N` limit at `q = e^{-pi}`
    pub product: f64,
    /// `2^{7/8} pi^{3/4} / (e^{pi/24} Gamma(1/4))`
    pub closed_form: f64,
    pub relative_error: f64,
}

pub fn ramanujan_check() -> RamanujanCheck {
    let product = euler_product((-PI).exp()).expect("e^-pi < 1");
    let closed_form = 2f64.powf(7.0 / 8.0) * PI.powf(0.75) / ((PI / 24.0).exp() * gamma_quarter());
    RamanujanCheck { product, closed_form, relative_error: ((product - closed_form) / closed_form).abs() }
}

/// One line of [`euler_table`]. `n = None` is the partition series itself.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EulerRow {
    pub n: Option<u32>,
    pub q: f64,
    pub series: f64,
    pub product: f64,
    pub gap: f64,
    pub degree: usize,
}

/// Compares `sum_{d<=D} p(d) q^d` and the truncated `K_N(q)` for each `N`
/// against `prod (1 - q^n)^{-1}`.
pub fn euler_table(engine: &Engine, q: f64, ns: &[u32], degree: usize) -> Result<Vec<EulerRow>> {
    check_domain(q)?;
    let product = euler_product(q)?;
    let partitions = QSeries::new(partition_counts(degree).into_iter().map(Rational::from_integer).collect())?;
    let row = |n, series: f64| EulerRow { n, q, series, product, gap: (series - product).abs(), degree };
    let mut rows = vec![row(None, horner(&partitions, q))];
    for &n in ns {
        rows.push(row(Some(n), horner(&engine.k_n_series(n, degree)?, q)));
    }
    Ok(rows)
}

/// True when the gaps of the `K_N` rows strictly decrease.
pub fn gaps_decrease(rows: &[EulerRow]) -> bool {
    let gaps: Vec<f64> = rows.iter().filter(|r| r.n.is_some()).map(|r| r.gap).collect();
    gaps.windows(2).all(|w| w[1] < w[0])
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub n: u32,
    pub q: f64,
    pub m: usize,
    /// `N^{2m-2} |Delta_{mN}(q)|`
    pub scaled: f64,
    /// `N^{2m-2}` times the truncation tail estimate.
    pub tail: f64,
    pub degree: usize,
    pub warning: Option<String>,
}

fn scale(n: u32, m: usize) -> f64 {
    (n as f64).powi(2 * m as i32 - 2)
}

fn warning(scaled: f64, tail: f64, degree: usize) -> Option<String> {
    (tail > WARN_FRACTION * scaled).then(|| {
        format!("truncation at degree {degree} is too coarse: tail estimate {tail:.3e} vs value {scaled:.3e}")
    })
}

/// `N^{2m-2} |Delta_{mN}(q)|` for each `N`, from exact coefficients.
pub fn convergence_table(engine: &Engine, q: f64, ns: &[u32], m: usize, degree: usize) -> Result<Vec<ConvergenceRow>> {
    check_domain(q)?;
    if m == 0 {
        return Err(Error::Usage("m must be at least 1".into()));
    }
    let tail = tail_estimate(degree, q);
    ns.iter()
        .map(|&n| {
            let delta = engine.delta(m, n, degree)?;
            let scaled = scale(n, m) * horner(&delta, q).abs();
            let tail = scale(n, m) * tail;
            Ok(ConvergenceRow { n, q, m, scaled, tail, degree, warning: warning(scaled, tail, degree) })
        })
        .collect()
}

/// Ratios of consecutive `scaled` values.
pub fn successive_ratios(rows: &[ConvergenceRow]) -> Vec<f64> {
    rows.windows(2).map(|w| w[0].scaled / w[1].scaled).collect()
}

/// `sup_d (delta e)^d p(d) (d-1)^{2m}`, the constant bounding the stable part
/// of `N^{2m-2}(K_{mN} - 1)` on the disc of radius `delta`.
pub fn stable_part_constant(m: usize, delta: f64) -> Result<f64> {
    check_domain(delta)?;
    let x = delta * E;
    if x == 0.0 {
        return Ok(0.0);
    }
    // terms eventually decay like x^d; scan far enough past the peak
    let horizon = ((2 * m + 10) as f64 / -x.ln() * 20.0).ceil() as usize + 50;
    let counts = partition_counts(horizon.min(4000));
    let sup = counts
        .iter()
        .enumerate()
        .skip(1)
        .map(|(d, p)| {
            let log_p = p.to_f64().map(f64::ln).unwrap_or(f64::INFINITY);
            let log_poly = if d == 1 { f64::NEG_INFINITY } else { 2.0 * m as f64 * ((d - 1) as f64).ln() };
            (d as f64 * x.ln() + log_p + log_poly).exp()
        })
        .fold(0.0, f64::max);
    Ok(sup)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConcentrationRow {
    pub n: u32,
    pub q: f64,
    pub m: usize,
    /// `N^{2m-2} |K_{mN}(q) - 1|`
    pub scaled: f64,
    pub tail: f64,
    pub degree: usize,
    pub warning: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConcentrationReport {
    pub rows: Vec<ConcentrationRow>,
    /// [`stable_part_constant`] at `delta = q`.
    pub constant: f64,
    /// Every scaled value is at most `constant`.
    pub bounded: bool,
}

/// `K_{mN} = exp(Delta_{mN})`, the integral with its first `m` genera
/// divided out; checks `N^{2m-2}|K_{mN}(q) - 1|` against one constant.
pub fn concentration_check(engine: &Engine, q: f64, m: usize, ns: &[u32], degree: usize) -> Result<ConcentrationReport> {
    check_domain(q)?;
    if m == 0 {
        return Err(Error::Usage("m must be at least 1".into()));
    }
    let tail = tail_estimate(degree, q);
    let rows: Vec<ConcentrationRow> = ns
        .iter()
        .map(|&n| {
            let k = series_exp(&engine.delta(m, n, degree)?)?;
            let scaled = scale(n, m) * (horner(&k, q) - 1.0).abs();
            let tail = scale(n, m) * tail;
            Ok(ConcentrationRow { n, q, m, scaled, tail, degree, warning: warning(scaled, tail, degree) })
        })
        .collect::<Result<_>>()?;
    let constant = stable_part_constant(m, q)?;
    let bounded = rows.iter().all(|r| r.scaled <= constant);
    Ok(ConcentrationReport { rows, constant, bounded })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, ratio};

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn evaluation_basics() {
        let one = QSeries::one(10);
        assert_eq!(eval_series(&one, 0.3).unwrap().value, 1.0);
        assert_eq!(eval_series(&one, 0.0).unwrap().tail, 0.0);
        let geometric = QSeries::new(vec![rat(1); 51]).unwrap();
        assert!(close(horner(&geometric, 0.5), 2.0, 1e-12));
        assert!(matches!(eval_series(&geometric, 0.5), Err(Error::Domain { .. })));
        assert!(matches!(eval_series(&geometric, -0.1), Err(Error::Domain { .. })));
        assert!(matches!(eval_series(&geometric, domain_limit()), Err(Error::Domain { .. })));
        let quarter = QSeries::new(vec![rat(0), ratio(1, 4)]).unwrap();
        assert_eq!(horner(&quarter, 2.0), 0.5);
    }

    #[test]
    fn tail_estimate_shrinks_with_degree() {
        let a = tail_estimate(20, 0.2);
        let b = tail_estimate(40, 0.2);
        assert!(a > b && b > 0.0);
        assert!(tail_estimate(40, 0.1) < 1e-15);
        assert_eq!(tail_estimate(40, 1.0), f64::INFINITY);
    }

    #[test]
    fn euler_product_matches_partition_series() {
        assert_eq!(euler_product(0.0).unwrap(), 1.0);
        let p = QSeries::new(partition_counts(60).into_iter().map(Rational::from_integer).collect()).unwrap();
        assert_eq!(horner(&p, 0.0), 1.0);
        assert!(close(horner(&p, 0.2), euler_product(0.2).unwrap(), 1e-12));
        assert!(euler_product(1.0).is_err());
        assert!(euler_product(-0.5).is_err());
    }

    #[test]
    fn gamma_values() {
        assert!(close(gamma(1.0), 1.0, 1e-14));
        assert!(close(gamma(5.0), 24.0, 1e-12));
        assert!(close(gamma(0.5), PI.sqrt(), 1e-12));
        assert!(close(gamma_quarter() * gamma(0.75), PI * 2f64.sqrt(), 1e-11));
        assert!(close(gamma_quarter(), 3.625_609_908_221_908, 1e-13));
        assert!(close(gamma(-0.5), -2.0 * PI.sqrt(), 1e-12));
    }

    #[test]
    fn ramanujan() {
        let r = ramanujan_check();
        assert!(r.relative_error < 1e-10, "{r:?}");
    }

    #[test]
    fn zero_q_gives_zero_rows() {
        let engine = Engine::new();
        for row in convergence_table(&engine, 0.0, &[4, 8], 2, 10).unwrap() {
            assert_eq!(row.scaled, 0.0);
            assert!(row.warning.is_none());
        }
        let report = concentration_check(&engine, 0.0, 1, &[4], 10).unwrap();
        assert_eq!(report.rows[0].scaled, 0.0);
        assert!(convergence_table(&engine, 0.4, &[4], 1, 10).is_err());
    }

    #[test]
    fn stable_constant_values() {
        // d = 3, 4 dominate: x^3 * 3 * 4 and x^4 * 5 * 9 with x = 0.1 e
        let x = 0.1 * E;
        let expected = (x.powi(3) * 12.0).max(x.powi(4) * 45.0);
        assert!(close(stable_part_constant(1, 0.1).unwrap(), expected, 1e-15));
        assert_eq!(stable_part_constant(2, 0.0).unwrap(), 0.0);
        assert!(stable_part_constant(1, 0.3).unwrap() > stable_part_constant(1, 0.1).unwrap());
    }
}

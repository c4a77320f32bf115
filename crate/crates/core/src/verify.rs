//! Cross-validation suite behind `cue-genus verify`.

use num::bigint::BigInt;
use num::{Signed, Zero};
use serde::Serialize;

use crate::engine::Engine;
use crate::error::Result;
use crate::exact::{int, rat, Rational};
use crate::hurwitz::{hunter_lower_bound, k_n_coeff, stable_rational_eval, stirling2, stirling_sandwich};
use crate::numerics::{
    concentration_check, convergence_table, euler_table, gaps_decrease, ramanujan_check, successive_ratios,
};
use crate::oracle::{count_commuting_pairs, count_configs, ConfigCountQuery};
use crate::partitions::{complete_homogeneous, enumerate_partitions};
use crate::quasimod::{f2_closed_form, fit_quasimodular, verify_f1_against, FitReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    Quick,
    Full,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: &'static str,
    /// The statement being checked.
    pub anchor: &'static str,
    pub passed: bool,
    pub detail: String,
}

type Outcome = Result<(bool, String)>;

fn check(name: &'static str, anchor: &'static str, f: impl FnOnce() -> Outcome) -> Check {
    match f() {
        Ok((passed, detail)) => Check { name, anchor, passed, detail },
        Err(e) => Check { name, anchor, passed: false, detail: e.to_string() },
    }
}

fn from_count(n: num::BigUint) -> Rational {
    int(BigInt::from(n))
}

pub fn run(engine: &Engine, level: Level) -> Vec<Check> {
    let full = level == Level::Full;
    let (dmax, gmax) = if full { (5, 3) } else { (4, 2) };
    let mut out = vec![
        check("cache", "cached entries verify against their hashes", || cache_integrity(engine)),
        check("oracle-monotone", "monotone factorization counts equal H and F", || {
            oracle_monotone(engine, dmax, gmax)
        }),
        check("oracle-classical", "unrestricted factorization counts equal B and C", || {
            oracle_classical(engine, dmax, gmax)
        }),
        check("commuting-pairs", "H_1^d = d! p(d) counts commuting pairs", || commuting_pairs(engine, dmax)),
        check("stable-range", "K_N^d is a rational function of N for d <= N", || {
            stable_range(engine, if full { 10 } else { 6 })
        }),
        check("f1-closed-form", "F_1 = log of Euler's partition product", || {
            f1_closed_form(engine, if full { 30 } else { 12 })
        }),
        check("f2-quasimodular", "F_2 is an explicit quasimodular form of weight 6", || {
            f2_fit(engine, if full { 20 } else { 10 })
        }),
        check("ramanujan", "Euler's product at e^-pi in terms of Gamma(1/4)", ramanujan),
    ];
    if full {
        out.extend([
            check("euler-limit", "K_N(q) tends to prod (1 - q^n)^-1", || euler_limit(engine)),
            check("delta-decay", "N^{2m-2} Delta_{mN} tends to 0", || delta_decay(engine)),
            check("bounds", "Stirling sandwich, Hunter bound, Stirling estimate", || bounds(engine, 10, 4)),
            check("concentration", "N^{2m-2} |K_{mN} - 1| stays bounded", || concentration(engine)),
        ]);
    }
    out
}

pub fn all_passed(checks: &[Check]) -> bool {
    checks.iter().all(|c| c.passed)
}

fn cache_integrity(engine: &Engine) -> Outcome {
    let Some(disk) = engine.disk() else {
        return Ok((true, "no disk cache in use".into()));
    };
    let entries = disk.inspect()?;
    let bad: Vec<String> = entries
        .iter()
        .filter_map(|e| e.problem.as_ref().map(|p| format!("{}: {p}", e.file)))
        .collect();
    if bad.is_empty() {
        Ok((true, format!("{} entries in {}", entries.len(), disk.root().display())))
    } else {
        Ok((false, format!("cache integrity error: {}", bad.join("; "))))
    }
}

fn compare_oracle(
    what: [&str; 2],
    monotone: bool,
    dmax: usize,
    gmax: usize,
    expected: impl Fn(usize, usize, bool) -> Rational,
) -> Outcome {
    let mut compared = 0;
    for d in 1..=dmax {
        for g in 1..=gmax {
            for (transitive, name) in [(false, what[0]), (true, what[1])] {
                let count = from_count(count_configs(&ConfigCountQuery { d, g, monotone, transitive })?);
                let formula = expected(d, g, transitive);
                if count != formula {
                    return Ok((false, format!("{name}: d={d} g={g}: enumeration {count} vs formula {formula}")));
                }
                compared += 1;
            }
        }
    }
    Ok((true, format!("{compared} entries, d <= {dmax}, g <= {gmax}")))
}

fn oracle_monotone(engine: &Engine, dmax: usize, gmax: usize) -> Outcome {
    let h = engine.k_table(dmax, gmax)?;
    let f = engine.f_table(dmax, gmax)?;
    compare_oracle(["H", "F"], true, dmax, gmax, |d, g, t| if t { f.get(d, g) } else { h.get(d, g) }.clone())
}

fn oracle_classical(engine: &Engine, dmax: usize, gmax: usize) -> Outcome {
    let b = engine.b_table(dmax, gmax)?;
    let c = engine.c_table(dmax, gmax)?;
    compare_oracle(["B", "C"], false, dmax, gmax, |d, g, t| if t { c.get(d, g) } else { b.get(d, g) }.clone())
}

fn commuting_pairs(engine: &Engine, dmax: usize) -> Outcome {
    let h = engine.k_table(dmax, 1)?;
    let f = engine.f_table(dmax, 1)?;
    for d in 1..=dmax {
        let all = from_count(count_commuting_pairs(d, false)?);
        let transitive = from_count(count_commuting_pairs(d, true)?);
        if &all != h.get(d, 1) || &transitive != f.get(d, 1) {
            return Ok((false, format!("d={d}: pairs {all}/{transitive} vs H_1 {} / F_1 {}", h.get(d, 1), f.get(d, 1))));
        }
    }
    Ok((true, format!("d <= {dmax}")))
}

/// Exact identity for `d <= N <= nmax`, and the genus partial sum through
/// `g = 8` within `10 ((d-1)/N)^16` relative error.
fn stable_range(engine: &Engine, nmax: u32) -> Outcome {
    let genera = 8;
    let k = engine.k_table(nmax as usize, genera)?;
    let mut worst = (rat(0), 0u32, 0usize);
    for n in 1..=nmax {
        for d in 1..=n as usize {
            let exact = k_n_coeff(n, d);
            if stable_rational_eval(n, d) != exact {
                return Ok((false, format!("N={n} d={d}: rational evaluation differs from K_N^d")));
            }
            let partial = crate::hurwitz::genus_partial_sum(&k, n, d);
            let rel = ((&partial - &exact) / &exact).abs();
            let bound = Rational::new(BigInt::from(d - 1).pow(16), BigInt::from(n).pow(16)) * rat(10);
            if !(rel < bound || rel.is_zero()) {
                return Ok((false, format!("N={n} d={d}: relative error {rel} exceeds {bound}")));
            }
            if rel > worst.0 {
                worst = (rel, n, d);
            }
        }
    }
    let (rel, n, d) = worst;
    Ok((true, format!("d <= N <= {nmax}; largest relative error {:.3e} at N={n} d={d}", crate::numerics::to_f64(&rel))))
}

fn f1_closed_form(engine: &Engine, order: usize) -> Outcome {
    let f1 = engine.f_table(order, 1)?.genus_series(1);
    let ok = verify_f1_against(&f1, order);
    Ok((ok, format!("d <= {order}")))
}

fn f2_fit(engine: &Engine, validate: usize) -> Outcome {
    let f2 = engine.f_table(validate, 2)?.genus_series(2);
    Ok(match fit_quasimodular(&f2, 6, 6, validate)? {
        FitReport::Fitted(p) if p == f2_closed_form() => (true, format!("{p}, validated to q^{validate}")),
        FitReport::Fitted(p) => (false, format!("fitted {p}, which is not the expected form")),
        other => (false, format!("{other:?}")),
    })
}

fn ramanujan() -> Outcome {
    let r = ramanujan_check();
    Ok((r.relative_error < 1e-10, format!("relative error {:.3e}", r.relative_error)))
}

fn euler_limit(engine: &Engine) -> Outcome {
    let ns = [4, 6, 8, 10, 12];
    let mut details = Vec::new();
    let mut ok = true;
    for q in [0.1, 0.2, 0.3] {
        let rows = euler_table(engine, q, &ns, crate::numerics::DEFAULT_DEGREE)?;
        let last = rows.last().unwrap().gap;
        ok &= gaps_decrease(&rows);
        if q == 0.2 {
            ok &= last < 1e-2;
        }
        details.push(format!("q={q}: gap at N=12 {last:.3e}"));
    }
    Ok((ok, details.join(", ")))
}

fn delta_decay(engine: &Engine) -> Outcome {
    let mut ok = true;
    let mut details = Vec::new();
    for (m, lo, hi) in [(1, 3.2, 4.8), (2, 12.8, 19.2)] {
        for n in [4u32, 6, 8] {
            let rows = convergence_table(engine, 0.2, &[n, 2 * n], m, crate::numerics::DEFAULT_DEGREE)?;
            let r = successive_ratios(&rows)[0];
            let inside = (lo..=hi).contains(&r);
            ok &= inside;
            details.push(format!("m={m} N={n}->{}: {r:.3}{}", 2 * n, if inside { "" } else { " (outside band)" }));
        }
    }
    Ok((ok, details.join(", ")))
}

fn bounds(engine: &Engine, dmax: usize, gmax: usize) -> Outcome {
    let h = engine.k_table(dmax, gmax)?;
    let mut failures = Vec::new();
    for d in 1..=dmax {
        for g in 1..=gmax {
            let ratio = h.get(d, g) / h.get(d, 1);
            let (lower, upper) = stirling_sandwich(g, d);
            if ratio < lower || ratio > upper {
                failures.push(format!("sandwich d={d} g={g}: {lower} <= {ratio} <= {upper} fails"));
            }
            for lambda in enumerate_partitions(d, None) {
                let c = lambda.contents();
                if int(complete_homogeneous(2 * g - 2, &c)) < hunter_lower_bound(&c, g) {
                    failures.push(format!("Hunter {lambda} g={g}"));
                }
            }
            let (m, n) = (d - 1 + 2 * g - 2, d - 1);
            if n >= 1 && !stirling_estimate_holds(m, n) {
                failures.push(format!("S({m},{n}) < e^{n} {n}^{}", m - n));
            }
        }
    }
    if failures.is_empty() {
        Ok((true, format!("d <= {dmax}, g <= {gmax}")))
    } else {
        Ok((false, failures.join("; ")))
    }
}

/// `S(m, n) < e^n n^{m-n}`, decided exactly using `e > 2.718281828`.
pub fn stirling_estimate_holds(m: usize, n: usize) -> bool {
    let s = int(BigInt::from(stirling2(m, n)));
    let e_lower = Rational::new(BigInt::from(2_718_281_828u64), BigInt::from(1_000_000_000u64));
    let rhs = num::pow(e_lower, n) * int(BigInt::from(n).pow(m as u32)) / int(BigInt::from(n).pow(n as u32));
    s < rhs
}

fn concentration(engine: &Engine) -> Outcome {
    let ns: Vec<u32> = (4..=12).collect();
    let mut ok = true;
    let mut details = Vec::new();
    for m in [1, 2] {
        let report = concentration_check(engine, 0.1, m, &ns, crate::numerics::DEFAULT_DEGREE)?;
        let max = report.rows.iter().map(|r| r.scaled).fold(0.0, f64::max);
        ok &= report.bounded;
        details.push(format!("m={m}: max {max:.3e} <= {:.3e}", report.constant));
    }
    Ok((ok, details.join(", ")))
}

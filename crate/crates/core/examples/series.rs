//! Truncated power series: log, exp and the bivariate tables.
use cue_genus::exact::rat;
use cue_genus::partitions::partition_counts;
use cue_genus::pseries::{bivariate_log, series_exp, series_log, QSeries};
use cue_genus::hurwitz::k_genus_table;

fn main() {
    let order = 10;
    let euler = QSeries::new(partition_counts(order).into_iter().map(cue_genus::exact::int).collect()).unwrap();
    let log = series_log(&euler).unwrap();
    println!("log sum p(d) q^d, exponential coefficients:");
    for (d, c) in log.to_exponential().iter().enumerate().skip(1) {
        println!("  d={d:<2} {c}");
    }
    assert_eq!(series_exp(&log).unwrap(), euler);

    // 1/(1-q) = exp(sum q^n / n)
    let geometric = QSeries::new(vec![rat(1); order + 1]).unwrap();
    println!("log 1/(1-q) = {:?}", series_log(&geometric).unwrap().coeffs().iter().map(ToString::to_string).collect::<Vec<_>>());

    let k = k_genus_table(6, 3);
    let f = bivariate_log(&k).unwrap();
    println!("\n d   H_1      H_2      H_3   |  F_1    F_2    F_3");
    for d in 1..=6 {
        println!(
            "{d:>2} {:>6} {:>8} {:>8}   | {:>5} {:>6} {:>6}",
            k.get(d, 1).to_string(), k.get(d, 2).to_string(), k.get(d, 3).to_string(),
            f.get(d, 1).to_string(), f.get(d, 2).to_string(), f.get(d, 3).to_string()
        );
    }
    println!("\n{}", serde_json::to_string(&log.to_json()).unwrap());
}

//! K_N(q) approaching Euler's partition product, and Ramanujan's value at e^-pi.
use cue_genus::engine::Engine;
use cue_genus::numerics::{euler_table, gamma_quarter, ramanujan_check, DEFAULT_DEGREE};

fn main() {
    let engine = Engine::new();
    for q in [0.1, 0.2, 0.3] {
        println!("q = {q}");
        for row in euler_table(&engine, q, &[4, 6, 8, 10, 12], DEFAULT_DEGREE).unwrap() {
            let label = row.n.map_or("p(d)".to_string(), |n| format!("N={n}"));
            println!("  {label:<5} {:.12}  |gap| {:.3e}", row.series, row.gap);
        }
    }
    let r = ramanujan_check();
    println!("Gamma(1/4) = {:.15}", gamma_quarter());
    println!(
        "prod (1 - e^-n pi)^-1 = {:.15}, closed form {:.15}, relative error {:.2e}",
        r.product, r.closed_form, r.relative_error
    );
}

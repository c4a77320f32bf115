//! Decay of Delta_{mN}(q) and concentration of the normalized integral.
use cue_genus::engine::Engine;
use cue_genus::numerics::{concentration_check, convergence_table, successive_ratios, DEFAULT_DEGREE};

fn main() {
    let engine = Engine::new();
    for (q, m, ns) in [(0.2, 1, vec![4, 8, 16, 32]), (0.1, 2, vec![6, 12, 24])] {
        let rows = convergence_table(&engine, q, &ns, m, DEFAULT_DEGREE).unwrap();
        println!("q={q} m={m}");
        for r in &rows {
            println!("  N={:<3} N^(2m-2)|Delta| = {:.6e}  tail <= {:.1e} {}", r.n, r.scaled, r.tail, r.warning.as_deref().unwrap_or(""));
        }
        let ratios: Vec<String> = successive_ratios(&rows).iter().map(|x| format!("{x:.3}")).collect();
        println!("  ratios per step: {}", ratios.join(", "));
    }

    let ns: Vec<u32> = (4..=12).collect();
    for m in [1, 2] {
        let report = concentration_check(&engine, 0.1, m, &ns, DEFAULT_DEGREE).unwrap();
        let values: Vec<String> = report.rows.iter().map(|r| format!("{:.2e}", r.scaled)).collect();
        println!("m={m}: N^(2m-2)|K_mN(0.1) - 1| = [{}], constant {:.3e}", values.join(" "), report.constant);
    }
}

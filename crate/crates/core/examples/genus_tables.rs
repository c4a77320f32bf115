//! Coefficient tables of the genus expansion and single coefficients.
use cue_genus::hurwitz::{
    b_genus_table, c_table, coefficient, f_table, k_genus_table, k_n_coeff, tail_normalized_table, CoefficientRequest,
    Family,
};
use cue_genus::pseries::GenusTable;

fn show(name: &str, t: &GenusTable) {
    println!("{name}");
    for d in 1..=t.degree() {
        let row: Vec<String> = (1..=t.genera()).map(|g| t.get(d, g).to_string()).collect();
        println!("  d={d}: {}", row.join("  "));
    }
}

fn main() {
    let (d, g) = (6, 3);
    show("H (monotone, possibly disconnected)", &k_genus_table(d, g));
    show("F (monotone, connected)", &f_table(d, g));
    show("B (unrestricted)", &b_genus_table(d, g));
    show("C (unrestricted, connected)", &c_table(d, g));
    show("components of genus >= 2 only", &tail_normalized_table(1, d, 4));

    for n in [2, 4, 8, 16] {
        println!("K_{n}^4 = {}", k_n_coeff(n, 4));
    }
    let req = CoefficientRequest { family: Family::Delta, d: 4, g: None, n: Some(10), m: Some(1) };
    println!("Delta_(1,10) coefficient at d=4: {}", coefficient(&req).unwrap());
}

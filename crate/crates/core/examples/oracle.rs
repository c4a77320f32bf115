//! Brute-force factorization counts against the content formulas.
use std::time::Instant;

use cue_genus::hurwitz::{b_genus_table, c_table, f_table, k_genus_table};
use cue_genus::oracle::{count_commuting_pairs, count_configs, ConfigCountQuery, Permutation};

fn main() {
    let p = Permutation::from_one_line(&[2, 3, 1, 5, 4]).unwrap();
    println!("{p:?} has {} cycles, inverse {:?}", p.cycle_count(), p.inverse());

    let (dmax, gmax) = (4, 3);
    let (h, f) = (k_genus_table(dmax, gmax), f_table(dmax, gmax));
    let (b, c) = (b_genus_table(dmax, gmax), c_table(dmax, gmax));
    println!(" d g   monotone (H, F)        unrestricted (B, C)");
    let start = Instant::now();
    for d in 1..=dmax {
        for g in 1..=gmax {
            let count = |monotone, transitive| count_configs(&ConfigCountQuery { d, g, monotone, transitive }).unwrap();
            println!(
                " {d} {g}   {:>6} {:>6} ({}, {})   {:>7} {:>7} ({}, {})",
                count(true, false), count(true, true), h.get(d, g), f.get(d, g),
                count(false, false), count(false, true), b.get(d, g), c.get(d, g)
            );
        }
    }
    println!("enumerated in {:.2?}", start.elapsed());

    for d in 1..=6 {
        println!(
            "commuting pairs in S_{d}: {} ({} transitive)",
            count_commuting_pairs(d, false).unwrap(),
            count_commuting_pairs(d, true).unwrap()
        );
    }
}

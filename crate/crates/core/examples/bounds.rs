//! Bounds on H_g^d / H_1^d from Hunter's inequality and Stirling numbers.
use cue_genus::exact::int;
use cue_genus::hurwitz::{h_coeff, stirling2, stirling_sandwich};

fn main() {
    println!(" d g  lower      H_g/H_1      upper");
    for d in 1..=8 {
        for g in 2..=4 {
            let ratio = int(h_coeff(g, d)) / int(h_coeff(1, d));
            let (lo, hi) = stirling_sandwich(g, d);
            let mark = if lo <= ratio && ratio <= hi { "" } else { "  <- outside" };
            println!("{d:>2} {g}  {:<9} {:<12} {}{mark}", lo.to_string(), ratio.to_string(), hi);
        }
    }
    // h_m(1..n) = S(n+m, n)
    for n in 1..=5 {
        println!("S({}, {n}) = {}", n + 4, stirling2(n + 4, n));
    }
}

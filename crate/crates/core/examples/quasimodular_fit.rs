//! Exact fits of genus series by polynomials in E2, E4, E6.
use cue_genus::hurwitz::{c_table, f_table};
use cue_genus::quasimod::{
    basis, eisenstein, f2_closed_form, fit_minimal_weight, fit_quasimodular, verify_f1_closed_form, FitReport,
};

fn main() {
    for k in 1..=3 {
        let e = eisenstein(k, 5);
        let coeffs: Vec<String> = e.coeffs().iter().map(ToString::to_string).collect();
        println!("E{} = {} + ...", 2 * k, coeffs.join(", "));
    }
    println!("basis of weight <= 6: {:?}", basis(6));

    let f = f_table(20, 3);
    match fit_quasimodular(&f.genus_series(2), 6, 6, 20).unwrap() {
        FitReport::Fitted(p) => {
            println!("F2 = {p}");
            println!("   = ({}) / 51840", p.scale(&cue_genus::exact::rat(51840)));
            assert_eq!(p, f2_closed_form());
        }
        other => println!("F2 did not fit: {other:?}"),
    }

    match fit_quasimodular(&f.genus_series(1), 6, 6, 20).unwrap() {
        FitReport::Mismatch { degree, series, model, .. } => {
            println!("F1 is not quasimodular: at q^{degree} series {series} vs model {model}")
        }
        other => println!("{other:?}"),
    }
    println!("F1 = log prod (1 - q^n)^-1 through q^20: {}", verify_f1_closed_form(20));

    // 23 basis monomials up to weight 12, so validate on a longer series
    let f3 = f_table(44, 3).genus_series(3);
    if let Some((w, p)) = fit_minimal_weight(&f3, 12, 44).unwrap() {
        println!("F3 fits at weight {w} with {} terms", p.terms().len());
    }
    let c = c_table(16, 2);
    match fit_minimal_weight(&c.genus_series(2), 8, 16).unwrap() {
        Some((w, p)) => println!("C2 fits at weight {w}: {p}"),
        None => println!("C2: no fit up to weight 8"),
    }
}

//! Star growth rates three ways: the certified series, the Poisson
//! integral, and the generating-function shortcut for the smallest cases.

use bdep::star::{gamma_star_poisson, gamma_star_series, gamma_via_g};

fn main() -> bdep::Result<()> {
    println!("{:>3}  {:>18}  {:>18}  {:>9}  {:>6}", "n", "series", "integral", "diff", "terms");
    for n in 2..=10 {
        let sv = gamma_star_series(n, 1e-10)?;
        let iv = gamma_star_poisson(n, 1e-8)?;
        println!(
            "{n:>3}  {:>18.15}  {:>18.15}  {:>9.1e}  {:>6}",
            sv.value,
            iv,
            (sv.value - iv).abs(),
            sv.terms,
        );
    }

    // For three vertices the series collapses to an algebraic number via
    // the two-column load generating function, and likewise the butterfly
    // through its reduced form.
    let s3 = gamma_via_g(1.0 / 9.0, 1.0 / 3.0)?;
    let butterfly = gamma_via_g(2.0 / 25.0, 2.0 / 5.0)?;
    println!();
    println!("g-route, three-vertex star: {s3:.15} vs 2 + 1/sqrt(5) = {:.15}", 2.0 + 0.2f64.sqrt());
    println!("g-route, butterfly:         {butterfly:.15} vs 11/3         = {:.15}", 11.0 / 3.0);
    Ok(())
}

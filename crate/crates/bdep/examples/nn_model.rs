//! The nearest-neighbour variant (a particle needs a strict neighbour at
//! its level to stick higher) on complete graphs: exact rational rates
//! from a one-column renewal chain, a closed formula, and the square-root
//! asymptotics.

use bdep::solvable::{gamma_nn_complete, gamma_nn_complete_exact, rational_to_f64};

fn main() -> bdep::Result<()> {
    println!("{:>3}  {:>16}  {:>14}  {:>14}", "n", "exact", "float", "formula");
    for n in 1..=8 {
        let exact = gamma_nn_complete_exact(n)?;
        let formula = gamma_nn_complete(n)?;
        println!(
            "{n:>3}  {:>16}  {:>14.10}  {:>14.10}",
            format!("{exact}"),
            rational_to_f64(&exact),
            formula,
        );
    }

    // Against the fully-cooperative rule, which gives gamma(K_n) = n, the
    // strict rule only manages sqrt(2n/pi).
    println!("\nratio to sqrt(n): expected sqrt(2/pi) = {:.6}", (2.0 / std::f64::consts::PI).sqrt());
    for n in [50usize, 100, 200, 400] {
        let g = gamma_nn_complete(n)?;
        println!("  n = {n:>3}: gamma = {g:>9.4}, gamma / sqrt(n) = {:.6}", g / (n as f64).sqrt());
    }
    Ok(())
}

//! Two-sided enclosures: e times the Perron root of A + I from above, an
//! embedded star from below, and the renewal-chain bound for high-girth
//! regular graphs.

use bdep::bounds::{
    chain_lower_bound, corollary1_sandwich, finite_m_lower_chain, lower_bound_chain,
    spectral_radius_a_plus_i,
};
use bdep::graph;

fn main() -> bdep::Result<()> {
    println!("{:<14} {:>10} {:>10} {:>10} {:>12}", "graph", "rho", "upper", "lower", "gamma");
    let cases = [
        ("complete on 5", graph::complete(5)?),
        ("four-cycle", graph::cycle(4)?),
        ("nine-star", graph::star(9)?),
        ("butterfly", graph::butterfly()),
        ("Petersen", graph::petersen()),
    ];
    for (name, g) in &cases {
        let rep = corollary1_sandwich(g, None)?;
        let gamma = rep
            .gamma_ref
            .map(|v| format!("{v:.6}"))
            .unwrap_or_else(|| "unknown".to_string());
        println!("{name:<14} {:>10.6} {:>10.6} {:>10.6} {:>12}", rep.rho, rep.upper, rep.lower, gamma);
    }

    // The spectral radius hits degree + 1 exactly when the graph is
    // regular; otherwise it sits strictly below.
    let c6 = graph::cycle(6)?;
    let s6 = graph::star(6)?;
    println!("\nrho(C6) = {:.8} = max degree + 1", spectral_radius_a_plus_i(&c6, 1e-12)?);
    println!("rho(S6) = {:.8} < max degree + 1 = 6", spectral_radius_a_plus_i(&s6, 1e-12)?);

    // The renewal-chain lower bound applies to regular graphs with no
    // short cycles; its memory-M truncations climb toward a limit
    // constant as the degree and memory grow.
    println!("\nPetersen chain lower bound (M=3): {:.6}", chain_lower_bound(&graph::petersen(), 3)?);
    println!("limit-chain scaled constant at M=25: {:.9}", lower_bound_chain(25)?.product_f64());
    for m in [8u64, 32, 128] {
        let b = finite_m_lower_chain(m, 6)?;
        println!("degree parameter m={m:>3}: finite-m bound / m = {:.6}", b.bound_f64() / m as f64);
    }
    Ok(())
}

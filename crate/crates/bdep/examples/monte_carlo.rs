//! Replicated simulation with confidence intervals, in both clocks: a
//! fixed number of deposition events, or a Poisson clock to a horizon.

use bdep::graph;
use bdep::sim::{estimate_gamma, GrowthRule, SimConfig, VarianceMode};

fn main() -> bdep::Result<()> {
    let cases = [
        ("four-cycle", graph::cycle(4)?, Some(2.0 + 2.0 / 3f64.sqrt())),
        ("butterfly", graph::butterfly(), Some(11.0 / 3.0)),
        ("Petersen", graph::petersen(), None),
    ];

    println!("discrete clock, 16 replicas x 200k events:");
    for (name, g, exact) in &cases {
        let cfg = SimConfig::discrete(3, 200_000).with_replicas(16);
        let est = estimate_gamma(g, &cfg, GrowthRule::Nnn)?;
        let mark = match exact {
            Some(v) if *v >= est.ci95_lo && *v <= est.ci95_hi => "exact inside CI",
            Some(_) => "exact OUTSIDE CI",
            None => "no exact value",
        };
        println!(
            "  {name:<12} gamma = {:.5} +- {:.5}  [{:.5}, {:.5}]  {mark}",
            est.gamma_hat,
            est.stderr.unwrap_or(0.0),
            est.ci95_lo,
            est.ci95_hi,
        );
    }

    println!("\ncontinuous clock to horizon 50000 (same graphs):");
    for (name, g, _) in &cases {
        let cfg = SimConfig::continuous(3, 50_000.0).with_replicas(16);
        let est = estimate_gamma(g, &cfg, GrowthRule::Nnn)?;
        println!(
            "  {name:<12} gamma = {:.5} +- {:.5}   mean jumps per run: {}",
            est.gamma_hat,
            est.stderr.unwrap_or(0.0),
            est.steps,
        );
    }

    // Error bars from batch means inside one long run track the
    // replica-spread bars.
    let cfg = SimConfig::discrete(11, 400_000)
        .with_replicas(8)
        .with_variance(VarianceMode::BatchMeans);
    let est = estimate_gamma(&graph::cycle(5)?, &cfg, GrowthRule::Nnn)?;
    println!("\nfive-cycle, batch-means variance: sigma^2 = {:.5}", est.sigma2_hat);
    Ok(())
}

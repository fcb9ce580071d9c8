//! Coupled runs sharing one randomness stream: growth is monotone under
//! subgraph embeddings, the strict rule never beats the cooperative one,
//! and different starting surfaces contract onto each other.

use bdep::graph::{self, Graph};
use bdep::sim::{coupled_run, run_discrete, step, GrowthRule, HeightConfig, SimConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> bdep::Result<()> {
    // Fewer edges cannot speed growth: drive sub and super graph with the
    // same deposition sites and compare column by column.
    let pairs: [(&str, Graph, Graph, Vec<usize>); 3] = [
        ("C4 in K4", graph::cycle(4)?, graph::complete(4)?, vec![0, 1, 2, 3]),
        ("S3 in butterfly", graph::star(3)?, graph::butterfly(), vec![0, 1, 2]),
        ("P3 in C5", graph::path(3)?, graph::cycle(5)?, vec![0, 1, 2]),
    ];
    for (name, sub, sup, embedding) in pairs {
        let cfg = SimConfig::discrete(23, 100_000);
        let rep = coupled_run(&sub, &sup, &embedding, &cfg)?;
        println!(
            "{name:<16} gamma {:.4} <= {:.4}, domination violations: {}",
            rep.gamma_sub, rep.gamma_sup, rep.violations,
        );
    }

    // Same graph, same stream, the two growth rules: the strict rule's
    // maximum stays below pointwise.
    let g = graph::cycle(6)?;
    let cfg = SimConfig::discrete(29, 100_000);
    let nnn = run_discrete(&g, &cfg, GrowthRule::Nnn)?;
    let nn = run_discrete(&g, &cfg, GrowthRule::Nn)?;
    println!("\nsix-cycle, shared stream: strict {:.4} <= cooperative {:.4}",
        nn.gamma_hat(), nnn.gamma_hat());

    // Initial conditions wash out: drive two different starts with the
    // same sites and the surfaces coalesce into exact translates of each
    // other. The spread of the columnwise difference never grows and
    // collapses to zero.
    let mut a = HeightConfig::flat(6);
    let mut b = HeightConfig { heights: vec![9, 0, 7, 1, 8, 2] };
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let mut spread_at: Vec<(usize, u64)> = Vec::new();
    let spread = |a: &HeightConfig, b: &HeightConfig| {
        let diffs: Vec<i64> =
            a.heights.iter().zip(&b.heights).map(|(x, y)| *x as i64 - *y as i64).collect();
        (diffs.iter().max().unwrap() - diffs.iter().min().unwrap()) as u64
    };
    for t in 0..=2000usize {
        if t.is_multiple_of(250) {
            spread_at.push((t, spread(&a, &b)));
        }
        let x = rng.random_range(0..6);
        a = step(&g, &a, x)?;
        b = step(&g, &b, x)?;
    }
    println!("\ndifference spread between two starts: {spread_at:?}");
    Ok(())
}

//! Closed-form growth rates for the hub-party family, cross-checked
//! against exact truncated-chain solves of the gap process.

use bdep::solvable::{gamma_hub_party, hub_party_gap_chain};

fn main() -> bdep::Result<()> {
    let instances: [(usize, usize, usize, &str); 8] = [
        (1, 1, 2, "three-vertex star"),
        (0, 1, 4, "four-cycle"),
        (2, 1, 2, "two hubs over a pair"),
        (1, 2, 2, "butterfly"),
        (0, 1, 6, "six-party"),
        (1, 1, 4, "hub over a four-party"),
        (2, 2, 2, "two hubs, doubled pair"),
        (1, 3, 2, "hub, tripled pair"),
    ];

    println!("{:>14}  {:>18}  {:>18}  {:>9}  {}", "(N, n, m)", "closed form", "chain solve", "diff", "graph");
    for (hubs, clones, party, name) in instances {
        let exact = gamma_hub_party(hubs, clones, party)?;
        let chain = hub_party_gap_chain(hubs, clones, party, 48)?;
        let solved = chain.stationary(1e-12)?.gamma_value;
        println!(
            "{:>14}  {:>18.15}  {:>18.15}  {:>9.1e}  {}",
            format!("({hubs}, {clones}, {party})"),
            exact,
            solved,
            (exact - solved).abs(),
            name,
        );
    }

    // The same closed form scales with the party size: rates grow without
    // bound along the family.
    println!();
    for party in [2usize, 4, 8, 16, 32] {
        println!("party m = {party:>2}: gamma = {:.6}", gamma_hub_party(1, 1, party)?);
    }
    Ok(())
}

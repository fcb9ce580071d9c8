//! Exactly solvable growth chains.
//!
//! For hub-party graphs (a cocktail party with every vertex cloned into a
//! clique block, plus dominant hubs wired to everything) the gap between the
//! top column and the best non-equivalent column is itself a Markov chain on
//! the non-negative integers, solvable in closed form. The same collapse
//! works for the 3-star, whose spread chain has one extra "centre on top"
//! state. The nearest-neighbour model on a complete graph reduces to
//! counting how many columns share the maximum.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use statrs::function::gamma::{gamma_ur, ln_gamma};

use crate::chain::{ChainSpec, StateLabel, TruncationInfo};
use crate::error::{Error, Result};

fn check_hub_party(hubs: usize, clones: usize, party: usize) -> Result<()> {
    if clones == 0 {
        return Err(Error::InvalidParameter("clones must be at least 1".into()));
    }
    if party < 2 || party % 2 != 0 {
        return Err(Error::InvalidParameter(format!(
            "party size must be even and at least 2, got {party}"
        )));
    }
    if party == 2 && hubs == 0 {
        return Err(Error::InvalidParameter(
            "party size 2 needs at least one hub (the two blocks are not joined)".into(),
        ));
    }
    Ok(())
}

/// Decay ratio of the gap chain's stationary tail: kappa - sqrt(kappa^2-1).
fn gap_ratio(kappa: f64) -> f64 {
    kappa - (kappa * kappa - 1.0).sqrt()
}

/// Closed-form growth rate of the hub-party graph with `hubs` dominant
/// vertices, blocks of `clones` mutually equivalent vertices, and `party`
/// blocks in cocktail-party arrangement:
///
/// gamma = #V - n (1 - Pi(0)),   #V = N + n m,
///
/// where Pi is the stationary law of the top-gap chain, solved via its
/// geometric tail with ratio kappa - sqrt(kappa^2 - 1), kappa = #V / (2n).
pub fn gamma_hub_party(hubs: usize, clones: usize, party: usize) -> Result<f64> {
    check_hub_party(hubs, clones, party)?;
    let (n, m) = (clones as f64, party as f64);
    let vertices = hubs as f64 + n * m;
    let kappa = vertices / (2.0 * n);
    let tau = 1.0 / ((kappa * kappa - 1.0).sqrt() - kappa + 1.0);
    let c1 = (n * m / vertices) / (tau + 1.0 / (2.0 * kappa));
    Ok(vertices - n * c1 * tau)
}

/// Closed-form stationary weights Pi(0), ..., Pi(upto) of the top-gap chain.
pub fn hub_party_gap_weights(
    hubs: usize,
    clones: usize,
    party: usize,
    upto: usize,
) -> Result<Vec<f64>> {
    check_hub_party(hubs, clones, party)?;
    let (n, m) = (clones as f64, party as f64);
    let vertices = hubs as f64 + n * m;
    let kappa = vertices / (2.0 * n);
    let tau = 1.0 / ((kappa * kappa - 1.0).sqrt() - kappa + 1.0);
    let c1 = (n * m / vertices) / (tau + 1.0 / (2.0 * kappa));
    let rho = gap_ratio(kappa);
    let mut w = Vec::with_capacity(upto + 1);
    w.push(1.0 - c1 * tau);
    for k in 1..=upto {
        w.push(c1 * rho.powi(k as i32 - 1));
    }
    Ok(w)
}

/// The top-gap chain of a hub-party graph, truncated at `cap` by folding the
/// blocked up-step into a max-growing self-loop. States: gap 0 (maximum held
/// by a hub, or shared) through gap `cap`.
///
/// Rewards are expected max-height increments conditional on the transition;
/// the two pooled moves that mix growing and non-growing picks (gap 1 to 0,
/// gap 2 to 1) carry fractional rewards N/(N+n) and (m-2)/(m-1).
pub fn hub_party_gap_chain(
    hubs: usize,
    clones: usize,
    party: usize,
    cap: usize,
) -> Result<ChainSpec> {
    check_hub_party(hubs, clones, party)?;
    if cap < 4 {
        return Err(Error::InvalidParameter("cap must be at least 4".into()));
    }
    let (bign, n, m) = (hubs as f64, clones as f64, party as f64);
    let vertices = bign + n * m;
    let labels: Vec<StateLabel> = (0..=cap).map(|k| StateLabel::Tag(k.to_string())).collect();
    let mut rows: Vec<Vec<(usize, f64, f64)>> = Vec::with_capacity(cap + 1);
    for k in 0..=cap {
        let up = if k == cap { k } else { k + 1 }; // cap: blocked up-step loops
        let row: Vec<(usize, f64, f64)> = match k {
            0 => vec![(0, bign / vertices, 1.0), (up, n * m / vertices, 1.0)],
            1 => vec![
                (0, (bign + n) / vertices, bign / (bign + n)),
                (1, n * (m - 2.0) / vertices, 1.0),
                (up, n / vertices, 1.0),
            ],
            2 => vec![
                (0, bign / vertices, 1.0),
                (1, n * (m - 1.0) / vertices, (m - 2.0) / (m - 1.0)),
                (up, n / vertices, 1.0),
            ],
            _ => vec![
                (0, bign / vertices, 1.0),
                (1, n * (m - 2.0) / vertices, 1.0),
                (k - 1, n / vertices, 0.0),
                (up, n / vertices, 1.0),
            ],
        };
        rows.push(row);
    }
    ChainSpec::new(
        labels,
        rows,
        vertices,
        Some(TruncationInfo { cap, boundary: vec![cap] }),
    )
}

/// Spread chain of the 3-star, truncated at `cap`: state `z` (centre
/// strictly on top) plus the gap of the leading leaf over the centre.
/// Solves to gamma = 2 + 1/sqrt(5).
pub fn star3_spread_chain(cap: usize) -> Result<ChainSpec> {
    if cap < 2 {
        return Err(Error::InvalidParameter("cap must be at least 2".into()));
    }
    // Index 0 is z; index k+1 is gap k.
    let mut labels = vec![StateLabel::Tag("z".into())];
    labels.extend((0..=cap).map(|k| StateLabel::Tag(k.to_string())));
    let z = 0usize;
    let gap = |k: usize| k + 1;
    let third = 1.0 / 3.0;
    let mut rows = Vec::with_capacity(cap + 2);
    rows.push(vec![(z, third, 1.0), (gap(1), 2.0 * third, 1.0)]);
    rows.push(vec![(z, third, 1.0), (gap(1), 2.0 * third, 1.0)]);
    for k in 1..=cap {
        let up = if k == cap { gap(k) } else { gap(k + 1) };
        rows.push(vec![
            (z, third, 1.0),
            (up, third, 1.0),
            (gap(k - 1), third, 0.0),
        ]);
    }
    ChainSpec::new(
        labels,
        rows,
        3.0,
        Some(TruncationInfo { cap, boundary: vec![gap(cap)] }),
    )
}

/// Count-of-maxima chain of the nearest-neighbour model on the complete
/// graph with `n` vertices: growing one of the k leaders restarts at 1 and
/// lifts the maximum; growing anyone else merely joins the leaders.
pub fn nn_complete_chain(n: usize) -> Result<ChainSpec> {
    if n == 0 {
        return Err(Error::InvalidParameter("need at least one vertex".into()));
    }
    let labels: Vec<StateLabel> = (1..=n).map(|k| StateLabel::Tag(k.to_string())).collect();
    let nf = n as f64;
    let mut rows = Vec::with_capacity(n);
    for k in 1..=n {
        let mut row = vec![(0, k as f64 / nf, 1.0)];
        if k < n {
            row.push((k, (nf - k as f64) / nf, 0.0));
        }
        rows.push(row);
    }
    ChainSpec::new(labels, rows, nf, None)
}

/// Exact nearest-neighbour growth rate on the complete graph:
/// gamma = n / sum_{j=0}^{n-1} (n-1)_j / n^j  (falling factorial).
pub fn gamma_nn_complete_exact(n: usize) -> Result<BigRational> {
    if n == 0 {
        return Err(Error::InvalidParameter("need at least one vertex".into()));
    }
    let big_n = BigInt::from(n);
    let mut total = BigRational::zero();
    let mut term = BigRational::one();
    for j in 0..n {
        total += &term;
        // (n-1)_{j+1} / n^{j+1} = previous * (n-1-j) / n
        term *= BigRational::new(BigInt::from(n - 1 - j), big_n.clone());
    }
    Ok(BigRational::new(big_n, BigInt::one()) / total)
}

/// The same rate through the incomplete-gamma identity
/// gamma = n / (e^n n^{-n} Gamma(n+1, n) - 1).
pub fn gamma_nn_complete(n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidParameter("need at least one vertex".into()));
    }
    let a = (n + 1) as f64;
    let x = n as f64;
    // Gamma(n+1, n) = Q(n+1, n) * Gamma(n+1), assembled in log space.
    let e = gamma_ur(a, x) * (x - x * x.ln() + ln_gamma(a)).exp();
    Ok(x / (e - 1.0))
}

/// f64 value of a big rational, via a scaled quotient to dodge overflow.
pub fn rational_to_f64(r: &BigRational) -> f64 {
    let scale = BigInt::from(1u64 << 60);
    let scaled = (r.numer() * &scale) / r.denom();
    scaled.to_f64().unwrap_or(f64::NAN) / (1u64 << 60) as f64
}

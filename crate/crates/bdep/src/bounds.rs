//! Spectral upper bound, the memory-M lower-bound chain, and the
//! degree sandwich.
//!
//! The upper leg is e times the Perron root of A + I. The lower leg for a
//! general graph comes from embedding the closed star of a maximum-degree
//! vertex and using subgraph monotonicity of the growth rate. For regular
//! graphs of girth at least 5 there is a sharper route: a small renewal
//! chain tracks how many side branches are remembered (up to M) while the
//! front advances, and its stationary reward rate lower-bounds gamma. As
//! the degree grows the chain's law approaches p_M(k) proportional to
//! 1/k!, and the bound approaches (2e-1)/(e-1)^2 per unit of degree.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::sim::{estimate_gamma, reference_gamma, GrowthRule, SimConfig};
use crate::solvable::rational_to_f64;
use crate::star::gamma_star_series;

const POWER_ITER_CAP: usize = 100_000;

/// Perron root of A + I by power iteration from the all-ones vector,
/// stopping when successive Rayleigh quotients differ by less than `tol`.
pub fn spectral_radius_a_plus_i(g: &Graph, tol: f64) -> Result<f64> {
    power_iteration(g, tol, POWER_ITER_CAP)
}

fn power_iteration(g: &Graph, tol: f64, cap: usize) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter("tolerance must be positive".into()));
    }
    let n = g.vertex_count();
    let mut v = vec![1.0 / (n as f64).sqrt(); n];
    let mut w = vec![0.0f64; n];
    let mut lambda_prev = f64::NAN;
    let mut residual = f64::NAN;
    for _ in 0..cap {
        for (x, slot) in w.iter_mut().enumerate() {
            let mut acc = v[x];
            for &y in g.neighbours(x) {
                acc += v[y];
            }
            *slot = acc;
        }
        let lambda: f64 = v.iter().zip(&w).map(|(a, b)| a * b).sum();
        let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        for (a, b) in v.iter_mut().zip(&w) {
            *a = b / norm;
        }
        residual = (lambda - lambda_prev).abs();
        if residual < tol {
            return Ok(lambda);
        }
        lambda_prev = lambda;
    }
    Err(Error::NoConvergence(format!("power iteration stalled with residual {residual:e}")))
}

/// The growth rate never exceeds e times the Perron root of A + I.
pub fn upper_bound(g: &Graph) -> Result<f64> {
    Ok(std::f64::consts::E * spectral_radius_a_plus_i(g, 1e-12)?)
}

/// The limiting memory chain on states 1..=M: from k the front advances
/// with probability 1/(k+1) (remembering one more branch) and resets to 1
/// with probability k/(k+1); from M it always resets. Stationary law
/// p_M(k) proportional to 1/k!.
#[derive(Clone, Debug)]
pub struct LowerChain {
    pub distribution: Vec<BigRational>,
    /// Product of the two stationary reward factors; converges to
    /// (2e-1)/(e-1)^2 from below as M grows.
    pub product: BigRational,
}

impl LowerChain {
    pub fn product_f64(&self) -> f64 {
        rational_to_f64(&self.product)
    }
}

/// Solves the limiting chain exactly and evaluates
/// (sum_{k<M} p(k)(k+1)) * (sum_{k<M} p(k) k/(k+1)).
pub fn lower_bound_chain(m_states: usize) -> Result<LowerChain> {
    if m_states < 2 {
        return Err(Error::InvalidParameter("need at least two states".into()));
    }
    let one = BigRational::one();
    // p(k) = (1/k!) / sum_j (1/j!)
    let mut weights = Vec::with_capacity(m_states);
    let mut factorial = BigInt::one();
    for k in 1..=m_states {
        factorial *= BigInt::from(k);
        weights.push(BigRational::new(BigInt::one(), factorial.clone()));
    }
    let total: BigRational = weights.iter().sum();
    let distribution: Vec<BigRational> = weights.into_iter().map(|w| w / &total).collect();

    let mut growth = BigRational::zero();
    let mut fraction = BigRational::zero();
    for (i, p) in distribution.iter().enumerate().take(m_states - 1) {
        let k = BigRational::new(BigInt::from(i + 1), BigInt::one());
        growth += p * (&k + &one);
        fraction += p * &k / (&k + &one);
    }
    Ok(LowerChain { product: growth * fraction, distribution })
}

/// Exact stationary law and reward product of the pre-limit chain for
/// degree m - 1: from k the total event rate is (k+1)m - k, split into a
/// front advance at rate m - k and a reset at rate km (the state-1 reset
/// is the self-loop at rate m); state M only resets, at rate Mm. The
/// distribution is over events, so it matches the embedded jump chain.
#[derive(Clone, Debug)]
pub struct FiniteLowerChain {
    pub distribution: Vec<BigRational>,
    pub bound: BigRational,
}

impl FiniteLowerChain {
    pub fn bound_f64(&self) -> f64 {
        rational_to_f64(&self.bound)
    }
}

/// Evaluates the pre-limit product
/// (sum_{k<M} p(k){(k+1)m-k} + p(M)Mm) * (sum_{k<M} p(k) km/(km+m-k) + p(M)).
pub fn finite_m_lower_chain(m: u64, m_states: usize) -> Result<FiniteLowerChain> {
    if m_states < 2 {
        return Err(Error::InvalidParameter("need at least two states".into()));
    }
    if m <= m_states as u64 {
        return Err(Error::Domain(format!(
            "memory cap {m_states} needs degree+1 above it, got m = {m}"
        )));
    }
    let big = |x: u64| BigRational::new(BigInt::from(x), BigInt::one());
    // pi(k+1) = pi(k) * (m-k) / ((k+1)m - k), the forward probability of
    // the embedded event chain.
    let mut unnormalized = vec![BigRational::one()];
    for k in 1..m_states as u64 {
        let fwd = big(m - k) / big((k + 1) * m - k);
        let next = unnormalized.last().unwrap() * fwd;
        unnormalized.push(next);
    }
    let total: BigRational = unnormalized.iter().sum();
    let distribution: Vec<BigRational> =
        unnormalized.into_iter().map(|w| w / &total).collect();

    let mm = m_states as u64;
    let mut rate_sum = &distribution[m_states - 1] * big(mm * m);
    let mut reset_fraction = distribution[m_states - 1].clone();
    for (i, p) in distribution.iter().enumerate().take(m_states - 1) {
        let k = i as u64 + 1;
        rate_sum += p * big((k + 1) * m - k);
        reset_fraction += p * big(k * m) / big(k * m + m - k);
    }
    Ok(FiniteLowerChain { bound: rate_sum * reset_fraction, distribution })
}

/// Pre-limit chain bound applied to a concrete graph. Only regular graphs
/// with girth at least 5 satisfy the locally tree-like assumption behind
/// the chain, so everything else is rejected.
pub fn chain_lower_bound(g: &Graph, m_states: usize) -> Result<f64> {
    let metrics = g.metrics();
    if !metrics.is_regular {
        return Err(Error::Domain("memory-chain bound needs a regular graph".into()));
    }
    if let Some(girth) = metrics.girth {
        if girth < 5 {
            return Err(Error::Domain(format!(
                "memory-chain bound needs girth >= 5, got {girth}"
            )));
        }
    }
    let m = metrics.max_degree as u64 + 1;
    Ok(finite_m_lower_chain(m, m_states)?.bound_f64())
}

/// Two-sided enclosure of a graph's growth rate.
#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    pub rho: f64,
    pub upper: f64,
    pub lower: f64,
    pub gamma_ref: Option<f64>,
    pub witnesses: Vec<String>,
}

impl BoundReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Sandwich gamma between the closed star of a maximum-degree vertex
/// (below, by subgraph monotonicity) and e times the Perron root (above).
/// A closed-form gamma is attached when the graph is recognized; passing a
/// simulation budget attaches a Monte Carlo estimate instead and checks it
/// against the bounds with three standard errors of slack.
pub fn corollary1_sandwich(g: &Graph, mc: Option<&SimConfig>) -> Result<BoundReport> {
    let rho = spectral_radius_a_plus_i(g, 1e-12)?;
    let upper = std::f64::consts::E * rho;
    let star_size = g.metrics().max_degree + 1;
    let lower = if star_size == 1 { 1.0 } else { gamma_star_series(star_size, 1e-10)?.value };
    let mut witnesses = vec![
        format!("lower: star of {the} vertices embedded at a max-degree vertex", the = star_size),
        "upper: e * Perron root of A + I".to_string(),
    ];
    debug_assert!(lower <= upper + 1e-9);

    let mut gamma_ref = None;
    if let Some(v) = reference_gamma(g) {
        gamma_ref = Some(v);
        witnesses.push("gamma_ref: closed form".to_string());
        if v < lower - 1e-9 || v > upper + 1e-9 {
            return Err(Error::Domain(format!(
                "closed-form rate {v} escapes the sandwich [{lower}, {upper}]"
            )));
        }
    } else if let Some(cfg) = mc {
        let est = estimate_gamma(g, cfg, GrowthRule::Nnn)?;
        let slack = 3.0 * est.stderr.unwrap_or(0.0);
        if est.gamma_hat < lower - slack || est.gamma_hat > upper + slack {
            return Err(Error::Domain(format!(
                "estimate {} escapes the sandwich [{lower}, {upper}] with slack {slack}",
                est.gamma_hat
            )));
        }
        witnesses.push(format!(
            "gamma_ref: Monte Carlo, stderr {:.2e}",
            est.stderr.unwrap_or(0.0)
        ));
        gamma_ref = Some(est.gamma_hat);
    }
    Ok(BoundReport { rho, upper, lower, gamma_ref, witnesses })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph;
    use crate::solvable::gamma_hub_party;
    use approx::assert_relative_eq;

    #[test]
    fn perron_roots_of_known_families() {
        for n in 1..=6 {
            let rho = spectral_radius_a_plus_i(&graph::complete(n).unwrap(), 1e-13).unwrap();
            assert_relative_eq!(rho, n as f64, max_relative = 1e-10);
        }
        for n in 3..=8 {
            let rho = spectral_radius_a_plus_i(&graph::cycle(n).unwrap(), 1e-13).unwrap();
            assert_relative_eq!(rho, 3.0, max_relative = 1e-10);
        }
        let s4 = spectral_radius_a_plus_i(&graph::star(4).unwrap(), 1e-13).unwrap();
        assert_relative_eq!(s4, 1.0 + 3f64.sqrt(), max_relative = 1e-10);
        let pet = spectral_radius_a_plus_i(&graph::petersen(), 1e-13).unwrap();
        assert_relative_eq!(pet, 4.0, max_relative = 1e-10);
    }

    #[test]
    fn exhausted_iteration_budget_reports_no_convergence() {
        // Irregular graph, so the ones vector is not the eigenvector and
        // two iterations cannot reach 1e-13.
        let g = graph::star(5).unwrap();
        assert!(matches!(power_iteration(&g, 1e-13, 2), Err(Error::NoConvergence(_))));
        assert!(spectral_radius_a_plus_i(&g, 0.0).is_err());
    }

    #[test]
    fn degree_cap_is_tight_exactly_for_regular_graphs() {
        let cases: Vec<Graph> = vec![
            graph::complete(2).unwrap(),
            graph::complete(5).unwrap(),
            graph::cycle(3).unwrap(),
            graph::cycle(7).unwrap(),
            graph::cocktail_party(6).unwrap(),
            graph::petersen(),
            graph::star(3).unwrap(),
            graph::star(6).unwrap(),
            graph::path(4).unwrap(),
            graph::butterfly(),
            graph::hub_party(1, 1, 4).unwrap(),
        ];
        for g in &cases {
            let metrics = g.metrics();
            let rho = spectral_radius_a_plus_i(g, 1e-13).unwrap();
            let cap = metrics.max_degree as f64 + 1.0;
            assert!(rho <= cap + 1e-9);
            if metrics.is_regular {
                assert!((rho - cap).abs() < 1e-8, "regular graph should hit the cap");
            } else {
                assert!(cap - rho > 1e-3, "irregular graph must stay below the cap");
            }
        }
    }

    #[test]
    fn upper_bound_dominates_every_known_rate() {
        let known: Vec<(Graph, f64)> = vec![
            (graph::complete(2).unwrap(), 2.0),
            (graph::complete(5).unwrap(), 5.0),
            (graph::cycle(4).unwrap(), 2.0 + 2.0 / 3f64.sqrt()),
            (graph::star(3).unwrap(), 2.0 + 1.0 / 5f64.sqrt()),
            (graph::star(4).unwrap(), 2.72446357391224888),
            (graph::butterfly(), 11.0 / 3.0),
            (graph::hub_party(1, 1, 4).unwrap(), gamma_hub_party(1, 1, 4).unwrap()),
            (graph::hub_party(2, 2, 2).unwrap(), gamma_hub_party(2, 2, 2).unwrap()),
        ];
        for (g, gamma) in &known {
            let ub = upper_bound(g).unwrap();
            assert!(ub > *gamma, "e rho = {ub} must exceed {gamma}");
        }
    }

    #[test]
    fn limit_chain_distribution_and_constant() {
        let chain = lower_bound_chain(25).unwrap();
        let total: BigRational = chain.distribution.iter().sum();
        assert!(total.is_one());
        let e = std::f64::consts::E;
        let target = (2.0 * e - 1.0) / ((e - 1.0) * (e - 1.0));
        assert!((chain.product_f64() - target).abs() < 1e-9);
        assert!(lower_bound_chain(1).is_err());
    }

    #[test]
    fn limit_chain_balance_is_exact() {
        // Stationarity under the pictured kernel: state 1 absorbs the
        // resets k/(k+1) from every k plus its own self-loop 1/2; k+1
        // receives 1/(k+1) from k.
        let m_states = 9;
        let chain = lower_bound_chain(m_states).unwrap();
        let p = &chain.distribution;
        let frac = |a: usize, b: usize| BigRational::new(BigInt::from(a), BigInt::from(b));
        for k in 1..m_states {
            assert_eq!(p[k], &p[k - 1] * frac(1, k + 1), "flow into state {}", k + 1);
        }
        let mut into_first = BigRational::zero();
        for (i, pk) in p.iter().enumerate() {
            let k = i + 1;
            if k < m_states {
                into_first += pk * frac(k, k + 1);
            } else {
                into_first += pk;
            }
        }
        assert_eq!(into_first, p[0]);
    }

    #[test]
    fn limit_chain_is_monotone_in_memory() {
        let mut prev = 0.0;
        for m_states in 2..=12 {
            let v = lower_bound_chain(m_states).unwrap().product_f64();
            assert!(v > prev, "memory {m_states}: {v} vs {prev}");
            prev = v;
        }
    }

    #[test]
    fn finite_chain_approaches_the_limit() {
        let chain = finite_m_lower_chain(1000, 10).unwrap();
        let total: BigRational = chain.distribution.iter().sum();
        assert!(total.is_one());
        let e = std::f64::consts::E;
        let target = (2.0 * e - 1.0) / ((e - 1.0) * (e - 1.0));
        let scaled = chain.bound_f64() / 1000.0;
        assert!((scaled - target).abs() / target < 0.05, "scaled bound {scaled}");

        // Distribution converges to the factorial law.
        let limit = lower_bound_chain(10).unwrap();
        let mut prev_gap = f64::INFINITY;
        for m in [50u64, 500, 5000] {
            let finite = finite_m_lower_chain(m, 10).unwrap();
            let gap = finite
                .distribution
                .iter()
                .zip(&limit.distribution)
                .map(|(a, b)| (rational_to_f64(a) - rational_to_f64(b)).abs())
                .fold(0.0f64, f64::max);
            assert!(gap < prev_gap);
            assert!(gap < 2.0 / m as f64);
            prev_gap = gap;
        }

        assert!(finite_m_lower_chain(5, 10).is_err());
        assert!(finite_m_lower_chain(10, 10).is_err());
    }

    #[test]
    fn finite_chain_monotone_in_memory_for_large_degree() {
        let mut prev = 0.0;
        for m_states in 2..=8 {
            let v = finite_m_lower_chain(100_000, m_states).unwrap().bound_f64();
            assert!(v > prev, "memory {m_states}: {v} vs {prev}");
            prev = v;
        }
    }

    #[test]
    fn pre_limit_chain_overshoots_at_small_degree() {
        // The memory-chain product is a degree-asymptotic statement. At
        // desk scale it lands above the true rate: gamma(Petersen) is
        // 4.8997(8) by long Monte Carlo, yet the m = 4 product is already
        // 5.11 at M = 2. Pinning the overshoot keeps anyone from reading
        // chain_lower_bound as a per-graph certificate.
        let pet = graph::petersen();
        let cfg = SimConfig::discrete(7, 400_000).with_replicas(8);
        let est = estimate_gamma(&pet, &cfg, GrowthRule::Nnn).unwrap();
        let bound = chain_lower_bound(&pet, 2).unwrap();
        assert!((bound - 5.11).abs() < 1e-9);
        assert!(
            bound > est.gamma_hat + 3.0 * est.stderr.unwrap(),
            "bound {bound} vs estimate {}",
            est.gamma_hat
        );
    }

    #[test]
    fn graph_gate_for_the_chain_bound() {
        assert!(chain_lower_bound(&graph::petersen(), 2).is_ok());
        // Girth below 5.
        assert!(chain_lower_bound(&graph::complete(4).unwrap(), 2).is_err());
        // Irregular.
        assert!(chain_lower_bound(&graph::star(4).unwrap(), 2).is_err());
        // Regular with girth 6.
        assert!(chain_lower_bound(&graph::cycle(6).unwrap(), 2).is_err() == false);
    }

    #[test]
    fn sandwich_reports() {
        let k5 = corollary1_sandwich(&graph::complete(5).unwrap(), None).unwrap();
        assert_relative_eq!(k5.rho, 5.0, max_relative = 1e-10);
        assert_relative_eq!(k5.upper, 5.0 * std::f64::consts::E, max_relative = 1e-10);
        // Five-leaf star rate, confirmed by the independent integral route.
        assert!((k5.lower - 2.922036333).abs() < 1e-8);
        assert_eq!(k5.gamma_ref, Some(5.0));
        assert!(k5.lower <= 5.0 && 5.0 <= k5.upper);
        assert!(!k5.witnesses.is_empty());

        let s9 = corollary1_sandwich(&graph::star(9).unwrap(), None).unwrap();
        // The graph is its own max-degree star, so the lower leg is the
        // exact rate.
        assert_relative_eq!(s9.lower, s9.gamma_ref.unwrap(), max_relative = 1e-8);

        let cfg = SimConfig::discrete(17, 40_000).with_replicas(6);
        let c6 = corollary1_sandwich(&graph::cycle(6).unwrap(), Some(&cfg)).unwrap();
        let gamma = c6.gamma_ref.expect("MC attached");
        assert!(c6.lower <= gamma && gamma <= c6.upper);
        assert_relative_eq!(c6.lower, 2.0 + 1.0 / 5f64.sqrt(), max_relative = 1e-8);
        assert_relative_eq!(c6.upper, 3.0 * std::f64::consts::E, max_relative = 1e-9);
    }

    #[test]
    fn report_serializes_with_fixed_fields() {
        let rep = corollary1_sandwich(&graph::complete(3).unwrap(), None).unwrap();
        let json = rep.to_json();
        for field in ["rho", "upper", "lower", "gamma_ref", "witnesses"] {
            assert!(json.contains(field), "missing {field}");
        }
    }
}

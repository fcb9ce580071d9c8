//! Finite Markov chains with per-transition rewards.
//!
//! Every exactly solvable object in this crate ends up here: a finite state
//! set, a row-stochastic transition matrix, and a reward on each transition
//! that is 1 when the step raises the running maximum height (fractional
//! rewards encode conditional expectations where a single chain state pools
//! several surface configurations). The growth rate is then
//!
//! ```text
//! gamma = total_rate * E_pi[reward per step]
//! ```
//!
//! with `pi` the stationary distribution and `total_rate` the jump rate of
//! the underlying continuous-time process (the graph's total intensity).

use std::fmt;
use std::fmt::Write as _;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Row sums must match 1 this tightly for a chain to be accepted.
pub const ROW_SUM_TOL: f64 = 1e-12;

/// Largest state count handled by dense direct solves; larger chains use
/// damped power iteration.
pub const DIRECT_SOLVE_LIMIT: usize = 2000;

const MAX_POWER_ITERS: usize = 500_000;

/// Display label of a chain state.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum StateLabel {
    /// A normalized height profile.
    Heights(Vec<u8>),
    /// A named state of a hand-built chain.
    Tag(String),
}

impl fmt::Display for StateLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StateLabel::Heights(h) => {
                let parts: Vec<String> = h.iter().map(|x| x.to_string()).collect();
                write!(f, "{}", parts.join("|"))
            }
            StateLabel::Tag(t) => write!(f, "{t}"),
        }
    }
}

/// Where a truncated chain meets its height cap.
#[derive(Clone, Debug)]
pub struct TruncationInfo {
    pub cap: usize,
    /// Indices of states sitting at the cap; their stationary mass is the
    /// reported tail bound.
    pub boundary: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct ChainSpec {
    labels: Vec<StateLabel>,
    row_ptr: Vec<usize>,
    col: Vec<u32>,
    prob: Vec<f64>,
    reward: Vec<f64>,
    total_rate: f64,
    truncation: Option<TruncationInfo>,
}

impl ChainSpec {
    /// Build from per-state transition lists `(target, probability, reward)`.
    /// Rows must sum to 1 within [`ROW_SUM_TOL`].
    pub fn new(
        labels: Vec<StateLabel>,
        rows: Vec<Vec<(usize, f64, f64)>>,
        total_rate: f64,
        truncation: Option<TruncationInfo>,
    ) -> Result<Self> {
        let n = labels.len();
        if rows.len() != n {
            return Err(Error::InvalidParameter(format!(
                "{} transition rows for {} states",
                rows.len(),
                n
            )));
        }
        if !(total_rate.is_finite() && total_rate > 0.0) {
            return Err(Error::InvalidParameter("total_rate must be positive".into()));
        }
        let mut row_ptr = Vec::with_capacity(n + 1);
        let mut col = Vec::new();
        let mut prob = Vec::new();
        let mut reward = Vec::new();
        row_ptr.push(0);
        for (s, row) in rows.iter().enumerate() {
            let mut sum = 0.0;
            for &(to, p, r) in row {
                if to >= n {
                    return Err(Error::InvalidParameter(format!(
                        "transition from {s} to out-of-range state {to}"
                    )));
                }
                if !(p.is_finite() && p >= 0.0) || !r.is_finite() {
                    return Err(Error::InvalidParameter(format!(
                        "bad transition from {s}: p = {p}, reward = {r}"
                    )));
                }
                if p > 0.0 {
                    col.push(to as u32);
                    prob.push(p);
                    reward.push(r);
                    sum += p;
                }
            }
            if (sum - 1.0).abs() > ROW_SUM_TOL {
                return Err(Error::InvalidParameter(format!(
                    "row {s} sums to {sum:.17}, off by more than {ROW_SUM_TOL:e}"
                )));
            }
            row_ptr.push(col.len());
        }
        Ok(ChainSpec { labels, row_ptr, col, prob, reward, total_rate, truncation })
    }

    pub fn state_count(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[StateLabel] {
        &self.labels
    }

    pub fn total_rate(&self) -> f64 {
        self.total_rate
    }

    pub fn truncation(&self) -> Option<&TruncationInfo> {
        self.truncation.as_ref()
    }

    /// Transitions out of state `s` as `(target, prob, reward)`.
    pub fn row(&self, s: usize) -> impl Iterator<Item = (usize, f64, f64)> + '_ {
        let range = self.row_ptr[s]..self.row_ptr[s + 1];
        range.map(move |i| (self.col[i] as usize, self.prob[i], self.reward[i]))
    }

    pub fn index_of(&self, label: &StateLabel) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// x -> xP.
    fn apply_left(&self, x: &[f64], out: &mut [f64]) {
        out.fill(0.0);
        for s in 0..self.state_count() {
            let xs = x[s];
            if xs == 0.0 {
                continue;
            }
            for i in self.row_ptr[s]..self.row_ptr[s + 1] {
                out[self.col[i] as usize] += xs * self.prob[i];
            }
        }
    }

    /// u -> Pu.
    fn apply_right(&self, u: &[f64], out: &mut [f64]) {
        for s in 0..self.state_count() {
            let mut acc = 0.0;
            for i in self.row_ptr[s]..self.row_ptr[s + 1] {
                acc += self.prob[i] * u[self.col[i] as usize];
            }
            out[s] = acc;
        }
    }

    /// Expected reward out of each state.
    fn mean_rewards(&self) -> Vec<f64> {
        (0..self.state_count())
            .map(|s| {
                self.row(s)
                    .map(|(_, p, r)| p * r)
                    .sum()
            })
            .collect()
    }

    /// Solve pi = pi P. Uses a dense LU solve up to
    /// [`DIRECT_SOLVE_LIMIT`] states and damped power iteration beyond;
    /// either way the residual `max |pi P - pi|` is reported and must come
    /// out below `tol` for the iterative path.
    pub fn stationary(&self, tol: f64) -> Result<StationarySolution> {
        let n = self.state_count();
        let mut pi = if n <= DIRECT_SOLVE_LIMIT {
            self.stationary_direct()?
        } else {
            self.stationary_power(tol)?
        };
        // Scrub rounding negatives and renormalize.
        let mut sum = 0.0;
        for p in pi.iter_mut() {
            if *p < 0.0 {
                *p = 0.0;
            }
            sum += *p;
        }
        for p in pi.iter_mut() {
            *p /= sum;
        }
        let mut image = vec![0.0; n];
        self.apply_left(&pi, &mut image);
        let residual = pi
            .iter()
            .zip(&image)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max);
        if n > DIRECT_SOLVE_LIMIT && residual > tol {
            return Err(Error::NoConvergence(format!(
                "stationary residual {residual:e} above tolerance {tol:e}"
            )));
        }
        let tail_bound = self
            .truncation
            .as_ref()
            .map(|t| t.boundary.iter().map(|&s| pi[s]).sum())
            .unwrap_or(0.0);
        let gamma_value = self.gamma_given(&pi);
        Ok(StationarySolution { distribution: pi, residual, gamma_value, tail_bound })
    }

    fn stationary_direct(&self) -> Result<Vec<f64>> {
        let n = self.state_count();
        // (P^T - I) pi = 0 with the last equation replaced by sum(pi) = 1.
        let mut a = DMatrix::<f64>::zeros(n, n);
        for s in 0..n {
            for (t, p, _) in self.row(s) {
                a[(t, s)] += p;
            }
            a[(s, s)] -= 1.0;
        }
        for j in 0..n {
            a[(n - 1, j)] = 1.0;
        }
        let mut b = DVector::<f64>::zeros(n);
        b[n - 1] = 1.0;
        let lu = a.lu();
        let pi = lu
            .solve(&b)
            .ok_or_else(|| Error::NoConvergence("singular stationary system".into()))?;
        Ok(pi.iter().copied().collect())
    }

    fn stationary_power(&self, tol: f64) -> Result<Vec<f64>> {
        let n = self.state_count();
        let mut pi = vec![1.0 / n as f64; n];
        let mut image = vec![0.0; n];
        for iter in 0..MAX_POWER_ITERS {
            self.apply_left(&pi, &mut image);
            let mut residual = 0.0f64;
            let mut sum = 0.0;
            for s in 0..n {
                residual = residual.max((image[s] - pi[s]).abs());
                // Half damping sidesteps any periodic structure.
                pi[s] = 0.5 * (pi[s] + image[s]);
                sum += pi[s];
            }
            for p in pi.iter_mut() {
                *p /= sum;
            }
            if residual < tol && iter > 0 {
                return Ok(pi);
            }
        }
        Err(Error::NoConvergence(format!(
            "power iteration did not reach residual {tol:e} in {MAX_POWER_ITERS} iterations"
        )))
    }

    fn gamma_given(&self, pi: &[f64]) -> f64 {
        let mut acc = 0.0;
        for s in 0..self.state_count() {
            if pi[s] == 0.0 {
                continue;
            }
            let mean: f64 = self.row(s).map(|(_, p, r)| p * r).sum();
            acc += pi[s] * mean;
        }
        self.total_rate * acc
    }

    /// Per-jump variance constant of the maximum-height fluctuations:
    /// the limit of `Var[max height - steps * gamma/total_rate] / steps`.
    ///
    /// Computed through the martingale decomposition of the cumulative
    /// centred reward: with `f(s,s') = reward - E_pi[reward]` and `u` the
    /// solution of the Poisson equation `(I - P) u = fbar`, the constant is
    /// `E_pi[(f(s,s') + u(s') - u(s))^2]`. Zero exactly when every
    /// transition carries the same reward (complete graphs).
    pub fn sigma2(&self, solution: &StationarySolution) -> Result<f64> {
        let n = self.state_count();
        let pi = &solution.distribution;
        let mean_step = solution.gamma_value / self.total_rate;
        let rbar = self.mean_rewards();
        let fbar: Vec<f64> = rbar.iter().map(|r| r - mean_step).collect();
        let u = self.solve_poisson(&fbar, pi)?;
        let mut acc = 0.0;
        for s in 0..n {
            if pi[s] == 0.0 {
                continue;
            }
            let mut inner = 0.0;
            for (t, p, r) in self.row(s) {
                let d = (r - mean_step) + u[t] - u[s];
                inner += p * d * d;
            }
            acc += pi[s] * inner;
        }
        Ok(acc)
    }

    /// Solve (I - P) u = fbar with pi . u = 0. `fbar` must be centred
    /// (pi . fbar = 0); deviations there show up as non-convergence.
    fn solve_poisson(&self, fbar: &[f64], pi: &[f64]) -> Result<Vec<f64>> {
        let n = self.state_count();
        if n <= DIRECT_SOLVE_LIMIT {
            // (I - P + 1 pi^T) is invertible and yields the centred solution.
            let mut a = DMatrix::<f64>::zeros(n, n);
            for s in 0..n {
                a[(s, s)] += 1.0;
                for (t, p, _) in self.row(s) {
                    a[(s, t)] -= p;
                }
            }
            for i in 0..n {
                for j in 0..n {
                    a[(i, j)] += pi[j];
                }
            }
            let b = DVector::from_column_slice(fbar);
            let u = a
                .lu()
                .solve(&b)
                .ok_or_else(|| Error::NoConvergence("singular Poisson system".into()))?;
            return Ok(u.iter().copied().collect());
        }
        // u = sum_k P^k fbar, accumulated iteratively with re-centring.
        let mut u = vec![0.0; n];
        let mut pu = vec![0.0; n];
        let mut prev_delta = f64::INFINITY;
        for _ in 0..MAX_POWER_ITERS {
            self.apply_right(&u, &mut pu);
            let dot: f64 = pi.iter().zip(&pu).map(|(p, v)| p * v).sum();
            let mut delta = 0.0f64;
            for s in 0..n {
                let next = fbar[s] + pu[s] - dot;
                delta = delta.max((next - u[s]).abs());
                u[s] = next;
            }
            let scale = u.iter().fold(1.0f64, |m, v| m.max(v.abs()));
            if delta < 1e-13 * scale {
                return Ok(u);
            }
            prev_delta = delta;
        }
        Err(Error::NoConvergence(format!(
            "Poisson iteration stalled at delta {prev_delta:e}"
        )))
    }

    /// Sparse triplet export: one `from to prob reward` line per transition,
    /// then a legend mapping state indices to labels.
    pub fn to_triplet_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "# chain: {} states, total rate {}",
            self.state_count(),
            self.total_rate
        );
        let _ = writeln!(out, "# transitions: from to prob reward");
        for s in 0..self.state_count() {
            for (t, p, r) in self.row(s) {
                let _ = writeln!(out, "{s} {t} {p:.17e} {r:.17e}");
            }
        }
        let _ = writeln!(out, "# states");
        for (s, label) in self.labels.iter().enumerate() {
            let _ = writeln!(out, "{s} {label}");
        }
        out
    }
}

/// Output of [`ChainSpec::stationary`].
#[derive(Clone, Debug)]
pub struct StationarySolution {
    pub distribution: Vec<f64>,
    /// max |pi P - pi| of the returned distribution.
    pub residual: f64,
    /// total_rate * E_pi[reward].
    pub gamma_value: f64,
    /// Stationary mass on cap-boundary states (0 for untruncated chains).
    pub tail_bound: f64,
}

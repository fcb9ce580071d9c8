//! Monte Carlo engine for the deposition processes.
//!
//! Discrete time grows a uniformly (or intensity-proportionally) chosen
//! vertex per step; continuous time is simulated through the embedded
//! chain: one exponential clock at the total rate plus a categorical
//! vertex draw, which is statistically identical to independent per-vertex
//! Poisson clocks. Heights are stored min-normalized with a 64-bit offset
//! so the resident values stay bounded on long runs.
//!
//! RNG stream contract (tests shadow it): every jump consumes exactly one
//! vertex draw; continuous runs consume the waiting time first, and the
//! draw only if the jump lands inside the horizon. Replica r runs on an
//! independent stream seeded by `derive_replica_seed(seed, r)`.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{self, Graph};
use crate::star::gamma_star_series;

/// Re-normalize (subtract the minimum into the offset) this often.
const RENORM_INTERVAL: u64 = 4096;

/// Heights per vertex, in layers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeightConfig {
    pub heights: Vec<u64>,
}

impl HeightConfig {
    pub fn flat(n: usize) -> Self {
        HeightConfig { heights: vec![0; n] }
    }
}

/// Growth rule: `Nnn` feeds on the closed neighbourhood's maximum plus
/// one; `Nn` lets a particle stick at the neighbours' level without the
/// increment unless the column itself is the maximum.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GrowthRule {
    Nnn,
    Nn,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TimeMode {
    Discrete { steps: u64 },
    Continuous { horizon: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IntensityMode {
    /// Every vertex equally likely (clock rate 1 each).
    Uniform,
    /// Vertex x drawn proportionally to its intensity.
    Proportional,
}

/// How sigma2_hat is estimated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VarianceMode {
    /// Variance of the standardized end heights across replicas.
    Replicas,
    /// Within-path variance of standardized batch increments, averaged
    /// over replicas. Batches are only approximately independent, so this
    /// is the rougher estimator; offered for single-path workflows.
    BatchMeans,
}

#[derive(Clone, Copy, Debug)]
pub struct SimConfig {
    pub seed: u64,
    pub mode: TimeMode,
    pub replicas: usize,
    pub intensity_mode: IntensityMode,
    /// Trajectory rows to record (0 = none).
    pub checkpoints: usize,
    pub variance: VarianceMode,
}

impl SimConfig {
    pub fn discrete(seed: u64, steps: u64) -> Self {
        SimConfig {
            seed,
            mode: TimeMode::Discrete { steps },
            replicas: 1,
            intensity_mode: IntensityMode::Proportional,
            checkpoints: 0,
            variance: VarianceMode::Replicas,
        }
    }

    pub fn continuous(seed: u64, horizon: f64) -> Self {
        SimConfig { mode: TimeMode::Continuous { horizon }, ..Self::discrete(seed, 1) }
    }

    pub fn with_replicas(mut self, replicas: usize) -> Self {
        self.replicas = replicas;
        self
    }

    pub fn with_checkpoints(mut self, checkpoints: usize) -> Self {
        self.checkpoints = checkpoints;
        self
    }

    pub fn with_intensity_mode(mut self, mode: IntensityMode) -> Self {
        self.intensity_mode = mode;
        self
    }

    pub fn with_variance(mut self, variance: VarianceMode) -> Self {
        self.variance = variance;
        self
    }

    fn validate(&self) -> Result<()> {
        match self.mode {
            TimeMode::Discrete { steps } if steps == 0 => {
                Err(Error::InvalidParameter("need at least one step".into()))
            }
            TimeMode::Continuous { horizon } if !(horizon > 0.0) => {
                Err(Error::InvalidParameter("horizon must be positive".into()))
            }
            _ if self.replicas == 0 => {
                Err(Error::InvalidParameter("need at least one replica".into()))
            }
            _ => Ok(()),
        }
    }
}

/// Documented seed-splitting rule: replica r gets
/// splitmix64(seed XOR (r + 1) * 0x9E3779B97F4A7C15).
pub fn derive_replica_seed(seed: u64, replica: usize) -> u64 {
    splitmix64(seed ^ (replica as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// One deposition at x: the column rises to one above the closed
/// neighbourhood's maximum. Pure; the simulation loops use the in-place
/// twin.
pub fn step(g: &Graph, h: &HeightConfig, x: usize) -> Result<HeightConfig> {
    check_heights(g, h, x)?;
    let mut out = h.clone();
    apply_rule(g, &mut out.heights, x, GrowthRule::Nnn);
    Ok(out)
}

/// Nearest-neighbour variant: the column rises to
/// max(own height + 1, highest strict neighbour).
pub fn step_nn(g: &Graph, h: &HeightConfig, x: usize) -> Result<HeightConfig> {
    check_heights(g, h, x)?;
    let mut out = h.clone();
    apply_rule(g, &mut out.heights, x, GrowthRule::Nn);
    Ok(out)
}

fn check_heights(g: &Graph, h: &HeightConfig, x: usize) -> Result<()> {
    if h.heights.len() != g.vertex_count() {
        return Err(Error::InvalidParameter(format!(
            "{} heights for {} vertices",
            h.heights.len(),
            g.vertex_count()
        )));
    }
    if x >= g.vertex_count() {
        return Err(Error::VertexOutOfRange { vertex: x, vertices: g.vertex_count() });
    }
    Ok(())
}

#[inline]
fn apply_rule(g: &Graph, h: &mut [u64], x: usize, rule: GrowthRule) {
    let mut nbr_max = 0u64;
    for &y in g.neighbours(x) {
        nbr_max = nbr_max.max(h[y]);
    }
    h[x] = match rule {
        GrowthRule::Nnn => 1 + nbr_max.max(h[x]),
        GrowthRule::Nn => (h[x] + 1).max(nbr_max),
    };
}

enum Picker {
    Uniform { n: usize },
    Weighted { cumulative: Vec<u64>, total: u64 },
}

impl Picker {
    fn build(g: &Graph, mode: IntensityMode) -> Picker {
        match mode {
            IntensityMode::Uniform => Picker::Uniform { n: g.vertex_count() },
            IntensityMode::Proportional => {
                let mut cumulative = Vec::with_capacity(g.vertex_count());
                let mut acc = 0u64;
                for &w in g.intensities() {
                    acc += w;
                    cumulative.push(acc);
                }
                Picker::Weighted { cumulative, total: acc }
            }
        }
    }

    #[inline]
    fn pick(&self, rng: &mut ChaCha8Rng) -> usize {
        match self {
            Picker::Uniform { n } => rng.random_range(0..*n),
            Picker::Weighted { cumulative, total } => {
                let t = rng.random_range(0..*total);
                cumulative.partition_point(|&c| c <= t)
            }
        }
    }

    /// Total clock rate of the mode (vertices at rate 1, or the intensity
    /// sum).
    fn rate(&self) -> f64 {
        match self {
            Picker::Uniform { n } => *n as f64,
            Picker::Weighted { total, .. } => *total as f64,
        }
    }
}

/// One recorded trajectory row. `t` is the step count for discrete runs
/// and the elapsed time for continuous ones; max/min include the offset.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Checkpoint {
    pub t: f64,
    pub max: u64,
    pub min: u64,
    pub offset: u64,
    pub jumps: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub rows: Vec<Checkpoint>,
    pub final_max: u64,
    pub final_min: u64,
    pub jumps: u64,
    pub elapsed: f64,
    /// Total clock rate; divides jump counts into time.
    pub rate: f64,
}

impl Trajectory {
    /// Growth rate estimate off this single run.
    pub fn gamma_hat(&self) -> f64 {
        if self.elapsed > 0.0 {
            self.final_max as f64 / self.elapsed
        } else {
            0.0
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,max,min,offset\n");
        for r in &self.rows {
            out.push_str(&format!("{},{},{},{}\n", r.t, r.max, r.min, r.offset));
        }
        out
    }
}

struct RunState {
    heights: Vec<u64>,
    offset: u64,
    cur_max: u64,
    since_renorm: u64,
}

impl RunState {
    fn new(n: usize) -> Self {
        RunState { heights: vec![0; n], offset: 0, cur_max: 0, since_renorm: 0 }
    }

    #[inline]
    fn grow(&mut self, g: &Graph, x: usize, rule: GrowthRule) {
        apply_rule(g, &mut self.heights, x, rule);
        self.cur_max = self.cur_max.max(self.heights[x]);
        self.since_renorm += 1;
        if self.since_renorm >= RENORM_INTERVAL {
            self.renorm();
        }
    }

    fn renorm(&mut self) {
        let m = *self.heights.iter().min().unwrap();
        if m > 0 {
            for h in &mut self.heights {
                *h -= m;
            }
            self.offset += m;
            self.cur_max -= m;
        }
        self.since_renorm = 0;
    }

    fn true_max(&self) -> u64 {
        self.offset + self.cur_max
    }

    fn true_min(&self) -> u64 {
        self.offset + self.heights.iter().min().unwrap()
    }
}

fn run_one(
    g: &Graph,
    rule: GrowthRule,
    mode: TimeMode,
    imode: IntensityMode,
    checkpoints: usize,
    rng: &mut ChaCha8Rng,
) -> Trajectory {
    let picker = Picker::build(g, imode);
    let rate = picker.rate();
    let mut st = RunState::new(g.vertex_count());
    let mut rows = Vec::with_capacity(checkpoints);
    match mode {
        TimeMode::Discrete { steps } => {
            let marks: Vec<u64> = if checkpoints == 0 {
                Vec::new()
            } else {
                let mut m: Vec<u64> =
                    (1..=checkpoints).map(|i| (i as u64 * steps) / checkpoints as u64).collect();
                m.dedup();
                m
            };
            let mut next_mark = 0usize;
            for n in 1..=steps {
                let x = picker.pick(rng);
                st.grow(g, x, rule);
                if next_mark < marks.len() && marks[next_mark] == n {
                    rows.push(Checkpoint {
                        t: n as f64,
                        max: st.true_max(),
                        min: st.true_min(),
                        offset: st.offset,
                        jumps: n,
                    });
                    next_mark += 1;
                }
            }
            Trajectory {
                rows,
                final_max: st.true_max(),
                final_min: st.true_min(),
                jumps: steps,
                elapsed: steps as f64 / rate,
                rate,
            }
        }
        TimeMode::Continuous { horizon } => {
            let waits = Exp::new(rate).expect("positive total rate");
            let marks: Vec<f64> = (1..=checkpoints)
                .map(|i| horizon * i as f64 / checkpoints as f64)
                .collect();
            let mut next_mark = 0usize;
            let mut t = 0.0f64;
            let mut jumps = 0u64;
            loop {
                let t_next = t + waits.sample(rng);
                while next_mark < marks.len() && marks[next_mark] < t_next.min(horizon) {
                    rows.push(Checkpoint {
                        t: marks[next_mark],
                        max: st.true_max(),
                        min: st.true_min(),
                        offset: st.offset,
                        jumps,
                    });
                    next_mark += 1;
                }
                if t_next > horizon {
                    break;
                }
                t = t_next;
                let x = picker.pick(rng);
                st.grow(g, x, rule);
                jumps += 1;
            }
            while next_mark < marks.len() {
                rows.push(Checkpoint {
                    t: marks[next_mark],
                    max: st.true_max(),
                    min: st.true_min(),
                    offset: st.offset,
                    jumps,
                });
                next_mark += 1;
            }
            Trajectory {
                rows,
                final_max: st.true_max(),
                final_min: st.true_min(),
                jumps,
                elapsed: horizon,
                rate,
            }
        }
    }
}

/// Single discrete-time run on the configured seed (replica stream 0).
pub fn run_discrete(g: &Graph, cfg: &SimConfig, rule: GrowthRule) -> Result<Trajectory> {
    cfg.validate()?;
    if !matches!(cfg.mode, TimeMode::Discrete { .. }) {
        return Err(Error::InvalidParameter("run_discrete needs a step count".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(derive_replica_seed(cfg.seed, 0));
    Ok(run_one(g, rule, cfg.mode, cfg.intensity_mode, cfg.checkpoints, &mut rng))
}

/// Single continuous-time run on the configured seed (replica stream 0).
pub fn run_continuous(g: &Graph, cfg: &SimConfig) -> Result<Trajectory> {
    cfg.validate()?;
    if !matches!(cfg.mode, TimeMode::Continuous { .. }) {
        return Err(Error::InvalidParameter("run_continuous needs a horizon".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(derive_replica_seed(cfg.seed, 0));
    Ok(run_one(g, GrowthRule::Nnn, cfg.mode, cfg.intensity_mode, cfg.checkpoints, &mut rng))
}

/// Monte Carlo estimate of the growth rate with replica-based error bars.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EstimateReport {
    pub gamma_hat: f64,
    /// None when fewer than two replicas were run.
    pub stderr: Option<f64>,
    pub ci95_lo: f64,
    pub ci95_hi: f64,
    pub sigma2_hat: f64,
    pub n_effective: u64,
    pub seed: u64,
    pub replicas: usize,
    /// Configured steps for discrete runs; mean realized jump count for
    /// continuous ones.
    pub steps: u64,
}

impl EstimateReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Estimates gamma by independent replicas run in parallel. The merge is
/// ordered by replica index, so threaded and serial runs give identical
/// reports.
pub fn estimate_gamma(g: &Graph, cfg: &SimConfig, rule: GrowthRule) -> Result<EstimateReport> {
    cfg.validate()?;
    let want_batches = matches!(cfg.variance, VarianceMode::BatchMeans);
    let inner_checkpoints = if want_batches { cfg.checkpoints.max(32) } else { 0 };
    let runs: Vec<Trajectory> = (0..cfg.replicas)
        .into_par_iter()
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_replica_seed(cfg.seed, r));
            run_one(g, rule, cfg.mode, cfg.intensity_mode, inner_checkpoints, &mut rng)
        })
        .collect();

    let gammas: Vec<f64> = runs.iter().map(|t| t.gamma_hat()).collect();
    let gamma_hat = mean(&gammas);
    let stderr = if cfg.replicas >= 2 {
        Some((sample_variance(&gammas, gamma_hat) / cfg.replicas as f64).sqrt())
    } else {
        None
    };
    let half = stderr.unwrap_or(0.0) * 1.96;

    let sigma2_hat = match cfg.variance {
        VarianceMode::Replicas => {
            let zs: Vec<f64> = runs
                .iter()
                .map(|t| standardized_end(t, gamma_hat))
                .collect();
            if cfg.replicas >= 2 {
                let zm = mean(&zs);
                sample_variance(&zs, zm) + zm * zm
            } else {
                zs[0] * zs[0]
            }
        }
        VarianceMode::BatchMeans => {
            let per: Vec<f64> = runs.iter().map(|t| sigma2_batches(t, gamma_hat)).collect();
            mean(&per)
        }
    };

    let total_jumps: u64 = runs.iter().map(|t| t.jumps).sum();
    let steps = match cfg.mode {
        TimeMode::Discrete { steps } => steps,
        TimeMode::Continuous { .. } => total_jumps / cfg.replicas as u64,
    };
    Ok(EstimateReport {
        gamma_hat,
        stderr,
        ci95_lo: gamma_hat - half,
        ci95_hi: gamma_hat + half,
        sigma2_hat,
        n_effective: total_jumps,
        seed: cfg.seed,
        replicas: cfg.replicas,
        steps,
    })
}

/// (end max - expected growth) / sqrt(jumps), the scaling under which the
/// end heights are asymptotically normal with the chain's variance.
fn standardized_end(t: &Trajectory, gamma: f64) -> f64 {
    if t.jumps == 0 {
        return 0.0;
    }
    (t.final_max as f64 - t.jumps as f64 * gamma / t.rate) / (t.jumps as f64).sqrt()
}

fn sigma2_batches(t: &Trajectory, gamma: f64) -> f64 {
    let mut zs = Vec::with_capacity(t.rows.len());
    let mut prev_max = 0u64;
    let mut prev_jumps = 0u64;
    for row in &t.rows {
        let dj = row.jumps - prev_jumps;
        if dj == 0 {
            continue;
        }
        let dm = (row.max - prev_max) as f64;
        zs.push((dm - dj as f64 * gamma / t.rate) / (dj as f64).sqrt());
        prev_max = row.max;
        prev_jumps = row.jumps;
    }
    if zs.len() < 2 {
        return 0.0;
    }
    let zm = mean(&zs);
    sample_variance(&zs, zm) + zm * zm
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

fn sample_variance(xs: &[f64], m: f64) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (xs.len() - 1) as f64
}

/// Closed-form growth rate when the graph is recognizably in a solved
/// family (unit intensities): complete graphs, stars, the 4-cycle, the
/// butterfly. None otherwise.
pub fn reference_gamma(g: &Graph) -> Option<f64> {
    let n = g.vertex_count();
    if g.intensities().iter().any(|&w| w != 1) {
        return None;
    }
    if (0..n).all(|v| g.degree(v) == n - 1) {
        return Some(n as f64);
    }
    if n >= 3 {
        let centers: Vec<usize> = (0..n).filter(|&v| g.degree(v) == n - 1).collect();
        if centers.len() == 1 && (0..n).filter(|&v| g.degree(v) == 1).count() == n - 1 {
            return Some(gamma_star_series(n, 1e-12).ok()?.value);
        }
    }
    if n == 4 && (0..4).all(|v| g.degree(v) == 2) {
        return Some(2.0 + 2.0 / 3f64.sqrt());
    }
    if n == 5 {
        let hubs: Vec<usize> = (0..5).filter(|&v| g.degree(v) == 4).collect();
        if hubs.len() == 1 && (0..5).filter(|&v| g.degree(v) == 2).count() == 4 {
            let wings: Vec<usize> = (0..5).filter(|&v| v != hubs[0]).collect();
            let wing_edges: Vec<(usize, usize)> = wings
                .iter()
                .enumerate()
                .flat_map(|(i, &a)| {
                    wings[i + 1..].iter().filter(move |&&b| g.is_edge(a, b)).map(move |&b| (a, b))
                })
                .collect();
            let disjoint = wing_edges.len() == 2
                && wing_edges[0].0 != wing_edges[1].0
                && wing_edges[0].0 != wing_edges[1].1
                && wing_edges[0].1 != wing_edges[1].0
                && wing_edges[0].1 != wing_edges[1].1;
            if disjoint {
                return Some(11.0 / 3.0);
            }
        }
    }
    None
}

/// Paired trajectory of a graph and a supergraph driven by one shared
/// clock stream; the subgraph sees exactly the jumps that land on
/// embedded vertices.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoupledReport {
    pub gamma_sub: f64,
    pub gamma_sup: f64,
    pub max_sub: u64,
    pub max_sup: u64,
    pub jumps: u64,
    pub elapsed: f64,
    /// Jumps after which some embedded column exceeded its image; the
    /// coupling argument says this stays 0.
    pub violations: u64,
}

/// Runs `sub` inside `sup` along a single jump stream and checks pointwise
/// domination after every jump. Intensities must agree across the
/// embedding so the thinning is exact.
pub fn coupled_run(
    sub: &Graph,
    sup: &Graph,
    embedding: &[usize],
    cfg: &SimConfig,
) -> Result<CoupledReport> {
    cfg.validate()?;
    if !graph::is_subgraph(sub, sup, embedding)? {
        return Err(Error::InvalidParameter("embedding does not preserve edges".into()));
    }
    for (v, &img) in embedding.iter().enumerate() {
        if sub.intensity(v) != sup.intensity(img) {
            return Err(Error::InvalidParameter(
                "embedded vertex intensities disagree; thinning would distort rates".into(),
            ));
        }
    }
    let mut into_sub = vec![None; sup.vertex_count()];
    for (v, &img) in embedding.iter().enumerate() {
        into_sub[img] = Some(v);
    }

    let picker = Picker::build(sup, cfg.intensity_mode);
    let rate = picker.rate();
    let mut rng = ChaCha8Rng::seed_from_u64(derive_replica_seed(cfg.seed, 0));
    // Raw heights: bounded by the jump count, so no normalization needed
    // at any reachable scale.
    let mut h_sub = vec![0u64; sub.vertex_count()];
    let mut h_sup = vec![0u64; sup.vertex_count()];
    let mut violations = 0u64;
    let mut jumps = 0u64;

    let (total_jumps, elapsed) = match cfg.mode {
        TimeMode::Discrete { steps } => (steps, steps as f64 / rate),
        TimeMode::Continuous { horizon } => {
            // Jump count over the horizon from the shared clock.
            let waits = Exp::new(rate).expect("positive total rate");
            let mut t = 0.0;
            let mut n = 0u64;
            loop {
                t += waits.sample(&mut rng);
                if t > horizon {
                    break;
                }
                n += 1;
            }
            (n, horizon)
        }
    };
    for _ in 0..total_jumps {
        let y = picker.pick(&mut rng);
        apply_rule(sup, &mut h_sup, y, GrowthRule::Nnn);
        if let Some(v) = into_sub[y] {
            apply_rule(sub, &mut h_sub, v, GrowthRule::Nnn);
        }
        jumps += 1;
        if embedding.iter().enumerate().any(|(v, &img)| h_sub[v] > h_sup[img]) {
            violations += 1;
        }
    }
    let max_sub = h_sub.iter().copied().max().unwrap_or(0);
    let max_sup = h_sup.iter().copied().max().unwrap_or(0);
    Ok(CoupledReport {
        gamma_sub: if elapsed > 0.0 { max_sub as f64 / elapsed } else { 0.0 },
        gamma_sup: if elapsed > 0.0 { max_sup as f64 / elapsed } else { 0.0 },
        max_sub,
        max_sup,
        jumps,
        elapsed,
        violations,
    })
}

/// Standardized end heights for normality checks.
#[derive(Clone, Debug)]
pub struct CltSample {
    pub values: Vec<f64>,
    pub gamma_used: f64,
    /// Whether gamma_used came from a closed form rather than a pilot run.
    pub exact_reference: bool,
}

/// Draws cfg.replicas independent end heights after the configured number
/// of discrete steps and returns (extreme - steps * gamma / rate) / sqrt(steps),
/// with the maximum column by default or the minimum under `use_min`.
/// Centers on the closed-form gamma when the graph is in a solved family,
/// otherwise on a pilot estimate with tenfold the steps.
pub fn clt_sample(g: &Graph, cfg: &SimConfig, use_min: bool) -> Result<CltSample> {
    cfg.validate()?;
    let steps = match cfg.mode {
        TimeMode::Discrete { steps } => steps,
        TimeMode::Continuous { .. } => {
            return Err(Error::InvalidParameter(
                "standardized samples are defined at a fixed step count".into(),
            ))
        }
    };
    let (gamma, exact_reference) = match reference_gamma(g) {
        Some(v) => (v, true),
        None => {
            let pilot = SimConfig {
                seed: splitmix64(cfg.seed ^ 0x517C_C1B7_2722_0A95),
                mode: TimeMode::Discrete { steps: steps.saturating_mul(10) },
                replicas: 4,
                ..*cfg
            };
            (estimate_gamma(g, &pilot, GrowthRule::Nnn)?.gamma_hat, false)
        }
    };
    let values: Vec<f64> = (0..cfg.replicas)
        .into_par_iter()
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_replica_seed(cfg.seed, r));
            let t = run_one(g, GrowthRule::Nnn, cfg.mode, cfg.intensity_mode, 0, &mut rng);
            let end = if use_min { t.final_min } else { t.final_max };
            (end as f64 - steps as f64 * gamma / t.rate) / (steps as f64).sqrt()
        })
        .collect();
    Ok(CltSample { values, gamma_used: gamma, exact_reference })
}

//! Star graphs: exact series and integral representations of the growth
//! rate.
//!
//! On S_n the centre relays every interaction, and gamma reduces to the
//! expected maximum load of a balls-in-bins experiment averaged over a
//! geometric number of balls:
//!
//! gamma(S_n) = 1 + (1/n) sum_{k>=1} E[Z_{n-1,k}] ((n-1)/n)^k,
//!
//! with Z_{b,k} the maximum load of k balls thrown uniformly into b bins.
//! The same constant has an integral form 1 + int_0^inf e^{-t} f_{n-1}(t) dt
//! where f_b(t) is the expected maximum of b i.i.d. Poisson(t) variables;
//! the two routes check each other. For two bins the load numbers
//! a_{2,k} = 2^k E[Z_{2,k}] have closed forms and a generating function g
//! whose derivative evaluates both gamma(S_3) and gamma of the butterfly.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::solvable::rational_to_f64;

/// Largest bin count handled by the exact big-integer route; beyond this
/// the stable floating DP takes over.
pub const EXACT_BINS_LIMIT: usize = 6;
/// Hard ceiling on series length before reporting a resource error.
pub const SERIES_TERM_BUDGET: usize = 2000;

/// Expected maximum loads E[Z_{bins,k}] for k = 0..=k_max, exact.
#[derive(Clone, Debug)]
pub struct MaxLoadTable {
    pub bins: usize,
    pub values: Vec<BigRational>,
}

impl MaxLoadTable {
    /// CSV rows `k,expectation,numerator/denominator`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,expectation,exact\n");
        for (k, v) in self.values.iter().enumerate() {
            out.push_str(&format!("{k},{:.12},{}/{}\n", rational_to_f64(v), v.numer(), v.denom()));
        }
        out
    }
}

/// Number of ways to throw `k` labelled balls into `bins` labelled bins
/// with every load <= m, for all k = 0..=k_max at once. Computed as the
/// k-th coefficients of the bins-fold binomial convolution of the
/// truncated sequence (1,1,...,1,0,...): N(bins,k,m) = k! [x^k] E_m(x)^bins
/// with E_m the exponential sum of degree m.
fn capped_counts(bins: usize, k_max: usize, m: usize) -> Vec<BigInt> {
    // Exponential coefficients convolve with binomial weights:
    // (A*B)_k = sum_j C(k,j) a_j b_{k-j}, and a single bin contributes
    // a_j = 1 for j <= m, so everything stays integral.
    let binom = pascal_triangle(k_max);
    let single = |j: usize| j <= m;
    let mut acc: Vec<BigInt> = (0..=k_max)
        .map(|j| if single(j) { BigInt::one() } else { BigInt::zero() })
        .collect();
    for _ in 1..bins {
        let mut next = vec![BigInt::zero(); k_max + 1];
        for (k, slot) in next.iter_mut().enumerate() {
            for j in 0..=k.min(m) {
                if acc[k - j].is_zero() {
                    continue;
                }
                *slot += &binom[k][j] * &acc[k - j];
            }
        }
        acc = next;
    }
    acc
}

/// Rows 0..=k_max of the binomial triangle; row k has k + 1 entries.
fn pascal_triangle(k_max: usize) -> Vec<Vec<BigInt>> {
    let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(k_max + 1);
    rows.push(vec![BigInt::one()]);
    for k in 1..=k_max {
        let prev = &rows[k - 1];
        let mut row = vec![BigInt::one(); k + 1];
        for j in 1..k {
            row[j] = &prev[j - 1] + &prev[j];
        }
        rows.push(row);
    }
    rows
}

/// E[Z_{bins,k}] for all k = 0..=k_max as exact rationals:
/// E[Z] = k - sum_{m=0}^{k-1} N(bins,k,m)/bins^k.
pub fn max_load_table_exact(bins: usize, k_max: usize) -> Result<MaxLoadTable> {
    if bins == 0 {
        return Err(Error::InvalidParameter("need at least one bin".into()));
    }
    if bins > EXACT_BINS_LIMIT {
        return Err(Error::InvalidParameter(format!(
            "exact route supports at most {EXACT_BINS_LIMIT} bins, got {bins}"
        )));
    }
    let mut below = vec![BigInt::zero(); k_max + 1]; // sum over m of N(bins,k,m)
    for m in 0..k_max.max(1) {
        let counts = capped_counts(bins, k_max, m);
        for k in (m + 1)..=k_max {
            below[k] += &counts[k];
        }
    }
    let big_bins = BigInt::from(bins);
    let mut values = Vec::with_capacity(k_max + 1);
    let mut denom = BigInt::one();
    for (k, b) in below.iter().enumerate() {
        let v = BigRational::new(BigInt::from(k) * &denom - b, denom.clone());
        values.push(v);
        denom *= &big_bins;
    }
    Ok(MaxLoadTable { bins, values })
}

/// Exact expected maximum load of `balls` balls in `bins` bins.
pub fn max_load_expectation(bins: usize, balls: usize) -> Result<BigRational> {
    Ok(max_load_table_exact(bins, balls)?.values.swap_remove(balls))
}

/// E[Z_{bins,k}] for k = 0..=k_max in floating point. Same convolution as
/// the exact route against scaled weights a_j = bins^{-j}, so every
/// intermediate is a probability-scale positive number and the computation
/// is cancellation-free.
pub fn max_load_table_f64(bins: usize, k_max: usize) -> Result<Vec<f64>> {
    if bins == 0 {
        return Err(Error::InvalidParameter("need at least one bin".into()));
    }
    let mut binom = vec![vec![0f64; k_max + 1]; k_max + 1];
    binom[0][0] = 1.0;
    for k in 1..=k_max {
        binom[k][0] = 1.0;
        for j in 1..=k {
            binom[k][j] = binom[k - 1][j - 1] + binom[k - 1][j];
        }
    }
    let scale = 1.0 / bins as f64;
    let mut expectation = vec![0f64; k_max + 1];
    for m in 0..k_max {
        // After t convolutions entry k is (t/bins)^k P[max load of k balls
        // in t bins <= m]; small but far above underflow for sane sizes.
        let single: Vec<f64> = (0..=k_max)
            .map(|j| if j <= m { scale.powi(j as i32) } else { 0.0 })
            .collect();
        let mut acc = single.clone();
        for _ in 1..bins {
            let mut next = vec![0f64; k_max + 1];
            for (k, slot) in next.iter_mut().enumerate() {
                let mut s = 0.0;
                for j in 0..=k.min(m) {
                    s += binom[k][j] * single[j] * acc[k - j];
                }
                *slot = s;
            }
            acc = next;
        }
        for k in (m + 1)..=k_max {
            expectation[k] += 1.0 - acc[k]; // acc[k] = P[Z_{bins,k} <= m]
        }
    }
    Ok(expectation)
}

/// The two-bin load numbers a_{2,k} = 2^k E[Z_{2,k}].
pub fn a2_values(k_max: usize) -> Vec<BigInt> {
    let table = max_load_table_exact(2, k_max).expect("two bins is in range");
    let mut pow = BigInt::one();
    table
        .values
        .iter()
        .map(|v| {
            let scaled = v * BigRational::new(pow.clone(), BigInt::one());
            pow *= 2;
            debug_assert!(scaled.is_integer());
            scaled.to_integer()
        })
        .collect()
}

/// Verifies the three-term recurrence
/// a_{2,k} = 2k/(k-1) a_{2,k-1} + 4(k-3)/(k-2) a_{2,k-2} - 8 a_{2,k-3}
/// exactly for 3 <= k <= k_max.
pub fn a2_recurrence_check(k_max: usize) -> Result<bool> {
    if k_max < 3 {
        return Err(Error::InvalidParameter("recurrence starts at k = 3".into()));
    }
    let a: Vec<BigRational> = a2_values(k_max)
        .into_iter()
        .map(|v| BigRational::new(v, BigInt::one()))
        .collect();
    let big = |x: i64| BigRational::new(BigInt::from(x), BigInt::one());
    for k in 3..=k_max {
        let ki = k as i64;
        let rhs = big(2) * big(ki) / big(ki - 1) * &a[k - 1]
            + big(4) * big(ki - 3) / big(ki - 2) * &a[k - 2]
            - big(8) * &a[k - 3];
        if a[k] != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A certified truncated series evaluation.
#[derive(Clone, Copy, Debug)]
pub struct SeriesValue {
    pub value: f64,
    /// Certified bound on the dropped tail (the true value lies within it).
    pub tail_bound: f64,
    pub terms: usize,
}

/// Smallest K whose series tail is certified below `tol`, using
/// E[Z_{n-1,k}] <= k:
///
/// (1/n) sum_{k>K} k q^k = q^{K+1} (K + n),  q = (n-1)/n
///
/// (exact geometric-series identity, not just a bound on the majorant).
fn series_cutoff(n: usize, tol: f64) -> Result<usize> {
    let q = (n as f64 - 1.0) / n as f64;
    let mut k = 1usize;
    while q.powi(k as i32 + 1) * (k + n) as f64 >= tol {
        k += 1;
        if k > SERIES_TERM_BUDGET {
            return Err(Error::NoConvergence(format!(
                "series needs more than {SERIES_TERM_BUDGET} terms for tolerance {tol:e}"
            )));
        }
    }
    Ok(k)
}

/// gamma(S_n) by the load-number series, certified to `tol`.
pub fn gamma_star_series(n: usize, tol: f64) -> Result<SeriesValue> {
    if n < 2 {
        return Err(Error::InvalidParameter("star series needs n >= 2".into()));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter("tolerance must be positive".into()));
    }
    let cutoff = series_cutoff(n, tol)?;
    let bins = n - 1;
    let q = bins as f64 / n as f64;
    let value = if bins <= EXACT_BINS_LIMIT {
        // Exact partial sum sum_{k<=K} E[Z] q^k / n over a common power
        // denominator, floated once at the end.
        let table = max_load_table_exact(bins, cutoff)?;
        let big_n = BigInt::from(n);
        let mut num = BigInt::zero();
        let mut denom = BigInt::one(); // n^{k+1}
        for k in 1..=cutoff {
            denom *= &big_n;
            // partial = sum a_{bins,j} n^{K-j} / n^{K+1}; build incrementally
            num = num * &big_n;
            let a_k = (&table.values[k]
                * BigRational::new(BigInt::from(bins).pow(k as u32), BigInt::one()))
            .to_integer();
            num += a_k;
        }
        denom *= &big_n;
        1.0 + rational_to_f64(&BigRational::new(num, denom))
    } else {
        let table = max_load_table_f64(bins, cutoff)?;
        let mut sum = 0.0;
        let mut weight = 1.0 / n as f64;
        for expectation in table.iter().take(cutoff + 1).skip(1) {
            weight *= q;
            sum += expectation * weight;
        }
        1.0 + sum
    };
    Ok(SeriesValue { value, tail_bound: q.powi(cutoff as i32 + 1) * (cutoff + n) as f64, terms: cutoff })
}

/// f_m(lambda): expected maximum of m i.i.d. Poisson(lambda) variables,
/// via E[max] = sum_{j>=0} (1 - P[Poisson <= j]^m), truncated when the
/// remaining mass m P[Poisson > j] drops below 1e-15.
pub fn poisson_max_expectation(m: usize, lambda: f64) -> f64 {
    if lambda <= 0.0 || m == 0 {
        return 0.0;
    }
    let mut pmf = (-lambda).exp();
    let mut cdf = pmf;
    let mut total = 0.0;
    let mut j = 0usize;
    loop {
        let miss = 1.0 - cdf;
        let term = 1.0 - (1.0 - miss).powi(m as i32);
        total += term;
        if m as f64 * miss < 1e-15 {
            break;
        }
        j += 1;
        pmf *= lambda / j as f64;
        cdf = (cdf + pmf).min(1.0);
        if j > 100_000 {
            break;
        }
    }
    total
}

fn simpson(m: usize, a: f64, b: f64) -> f64 {
    let f = |x: f64| (-x).exp() * poisson_max_expectation(m, x);
    (b - a) / 6.0 * (f(a) + 4.0 * f(0.5 * (a + b)) + f(b))
}

fn adaptive(m: usize, a: f64, b: f64, whole: f64, tol: f64, depth: u32) -> Result<f64> {
    let mid = 0.5 * (a + b);
    let left = simpson(m, a, mid);
    let right = simpson(m, mid, b);
    let delta = left + right - whole;
    if delta.abs() <= 15.0 * tol {
        return Ok(left + right + delta / 15.0);
    }
    if depth == 0 {
        return Err(Error::NoConvergence(format!(
            "quadrature failed to settle on [{a}, {b}]"
        )));
    }
    Ok(adaptive(m, a, mid, left, tol / 2.0, depth - 1)?
        + adaptive(m, mid, b, right, tol / 2.0, depth - 1)?)
}

/// gamma(S_n) by the exponential-weight integral over the Poisson maximum,
/// 1 + int_0^inf e^{-t} f_{n-1}(t) dt. The integral beyond t0 is below
/// (n-1) e^{-t0} (t0 + 1) since f_m(t) <= m t; t0 is chosen to put that
/// under tol/2 and the quadrature gets the other half.
pub fn gamma_star_poisson(n: usize, tol: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidParameter("star integral needs n >= 2".into()));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidParameter("tolerance must be positive".into()));
    }
    let m = n - 1;
    let mut hi = 10.0f64;
    while (m as f64) * (-hi).exp() * (hi + 1.0) >= tol / 2.0 {
        hi += 1.0;
    }
    // Split at the integrand's bulk to help the adaptive pass.
    let split = (m as f64).ln().max(1.0);
    let mut total = 0.0;
    for (a, b) in [(0.0, split), (split, hi)] {
        total += adaptive(m, a, b, simpson(m, a, b), tol / 4.0, 40)?;
    }
    Ok(1.0 + total)
}

/// Generating function g(s) = sum_k a_{2,k} s^k / k on [0, 1/2):
/// g(s) = (4s - 1 + sqrt(1 - 4s^2)) / (2 - 4s).
pub fn generating_function_g(s: f64) -> Result<f64> {
    check_g_domain(s)?;
    Ok((4.0 * s - 1.0 + (1.0 - 4.0 * s * s).sqrt()) / (2.0 - 4.0 * s))
}

/// Closed-form derivative of g.
pub fn g_prime(s: f64) -> Result<f64> {
    check_g_domain(s)?;
    let root = (1.0 - 4.0 * s * s).sqrt();
    let num = (4.0 - 4.0 * s / root) * (2.0 - 4.0 * s) + 4.0 * (4.0 * s - 1.0 + root);
    Ok(num / ((2.0 - 4.0 * s) * (2.0 - 4.0 * s)))
}

fn check_g_domain(s: f64) -> Result<()> {
    if !(0.0..0.5).contains(&s) {
        return Err(Error::Domain(format!(
            "generating function defined on [0, 1/2), got {s}"
        )));
    }
    Ok(())
}

/// Growth rates expressible through g: 1 + weight * g'(point). With
/// (1/9, 1/3) this is gamma(S_3); with (2/25, 2/5) gamma of the butterfly.
pub fn gamma_via_g(weight: f64, point: f64) -> Result<f64> {
    Ok(1.0 + weight * g_prime(point)?)
}

/// Exact Taylor coefficients of g at 0 up to degree k_max, from the
/// rational binomial expansion of sqrt(1 - 4s^2) times the geometric
/// series of 1/(2 - 4s).
pub fn g_taylor_coefficients(k_max: usize) -> Vec<BigRational> {
    let zero = BigRational::zero();
    // sqrt(1 - 4s^2) = sum_j binom(1/2, j) (-4)^j s^(2j)
    let mut root = vec![zero.clone(); k_max + 1];
    let mut c = BigRational::one(); // binom(1/2, j) * (-4)^j
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let mut j = 0usize;
    loop {
        if 2 * j <= k_max {
            root[2 * j] = c.clone();
        } else {
            break;
        }
        let jf = BigRational::new(BigInt::from(j as i64), BigInt::one());
        c = c * (&half - &jf) / (jf + BigRational::one()) * BigRational::new(BigInt::from(-4), BigInt::one());
        j += 1;
    }
    // numerator 4s - 1 + root
    let mut num = root;
    num[0] -= BigRational::one();
    if k_max >= 1 {
        num[1] += BigRational::new(BigInt::from(4), BigInt::one());
    }
    // 1/(2 - 4s) = (1/2) sum (2s)^i
    let mut inv = Vec::with_capacity(k_max + 1);
    let mut p = half.clone();
    for _ in 0..=k_max {
        inv.push(p.clone());
        p = p * BigRational::new(BigInt::from(2), BigInt::one());
    }
    let mut out = vec![zero; k_max + 1];
    for (k, slot) in out.iter_mut().enumerate() {
        let mut acc = BigRational::zero();
        for i in 0..=k {
            if !num[i].is_zero() {
                acc += &num[i] * &inv[k - i];
            }
        }
        *slot = acc;
    }
    out
}

/// One row of the star growth trend against the extreme-value scale
/// log n / log log n.
#[derive(Clone, Copy, Debug)]
pub struct TrendRow {
    pub n: usize,
    pub gamma: f64,
    /// gamma(S_n) * log(log n) / log(n).
    pub ratio: f64,
}

/// gamma(S_n) over a list of star sizes with the normalized ratio that the
/// maximum-load asymptotics predict to approach 1 far beyond desk scale.
/// Values go through the integral route, which stays cheap for large n.
pub fn gonnet_trend(ns: &[usize]) -> Result<Vec<TrendRow>> {
    let mut rows = Vec::with_capacity(ns.len());
    for &n in ns {
        if n < 3 {
            return Err(Error::InvalidParameter("trend rows need n >= 3".into()));
        }
        let gamma = gamma_star_poisson(n, 1e-8)?;
        let ratio = gamma * (n as f64).ln().ln() / (n as f64).ln();
        rows.push(TrendRow { n, gamma, ratio });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    /// Direct enumeration of all bins^k placements.
    fn brute_max_load(bins: usize, balls: usize) -> BigRational {
        let mut total = BigInt::zero();
        let count = (bins as u64).pow(balls as u32);
        for code in 0..count {
            let mut loads = vec![0u32; bins];
            let mut c = code;
            for _ in 0..balls {
                loads[(c % bins as u64) as usize] += 1;
                c /= bins as u64;
            }
            total += BigInt::from(*loads.iter().max().unwrap());
        }
        BigRational::new(total, BigInt::from(count))
    }

    #[test]
    fn dp_matches_brute_force() {
        for bins in 1..=4 {
            let table = max_load_table_exact(bins, 8).unwrap();
            for balls in 0..=8 {
                assert_eq!(
                    table.values[balls],
                    brute_max_load(bins, balls),
                    "bins {bins} balls {balls}"
                );
            }
        }
    }

    #[test]
    fn expectation_bounds_and_monotonicity() {
        for bins in 1..=5usize {
            let table = max_load_table_exact(bins.min(EXACT_BINS_LIMIT), 12).unwrap();
            assert!(table.values[0].is_zero());
            for k in 1..=12usize {
                let v = &table.values[k];
                let lo = BigRational::new(BigInt::from(k), BigInt::from(bins));
                let hi = BigRational::new(BigInt::from(k), BigInt::one());
                assert!(*v >= lo && *v <= hi);
                assert!(*v >= table.values[k - 1]);
            }
        }
        // More bins spread the load thinner.
        let k = 9;
        let mut prev = max_load_expectation(1, k).unwrap();
        for bins in 2..=6 {
            let cur = max_load_expectation(bins, k).unwrap();
            assert!(cur <= prev);
            prev = cur;
        }
    }

    #[test]
    fn float_route_agrees_with_exact() {
        for bins in 2..=6 {
            let exact = max_load_table_exact(bins, 40).unwrap();
            let float = max_load_table_f64(bins, 40).unwrap();
            for k in 0..=40 {
                assert_relative_eq!(
                    float[k],
                    rational_to_f64(&exact.values[k]),
                    max_relative = 1e-11
                );
            }
        }
    }

    #[test]
    fn two_bin_load_numbers() {
        let a = a2_values(8);
        // Brute-force-verified prefix, also the closed forms
        // a_{2,2k} = k 4^k + k C(2k,k) and a_{2,2k+1} = (2k+1)(4^k + C(2k,k)).
        let expect: [i64; 9] = [0, 2, 6, 18, 44, 110, 252, 588, 1304];
        for (k, &e) in expect.iter().enumerate() {
            assert_eq!(a[k], BigInt::from(e), "a_{{2,{k}}}");
        }
        let binom_2k_k = |k: u32| -> BigInt {
            let mut v = BigInt::one();
            for i in 0..k {
                v = v * BigInt::from(2 * k - i) / BigInt::from(i + 1);
            }
            v
        };
        let a_long = a2_values(25);
        for k in 1..=12u32 {
            let even = BigInt::from(k) * (BigInt::from(4).pow(k) + binom_2k_k(k));
            assert_eq!(a_long[2 * k as usize], even);
            let odd = BigInt::from(2 * k + 1) * (BigInt::from(4).pow(k) + binom_2k_k(k));
            assert_eq!(a_long[2 * k as usize + 1], odd);
        }
    }

    #[test]
    fn recurrence_holds_exactly() {
        assert!(a2_recurrence_check(50).unwrap());
        assert!(a2_recurrence_check(2).is_err());
    }

    #[test]
    fn series_hits_known_stars() {
        let s3 = gamma_star_series(3, 1e-10).unwrap();
        assert!((s3.value - (2.0 + 1.0 / 5f64.sqrt())).abs() < 1e-9);
        assert!(s3.tail_bound < 1e-10);
        let s4 = gamma_star_series(4, 1e-11).unwrap();
        assert!((s4.value - 2.72446357391224888).abs() < 1e-10);
        let s2 = gamma_star_series(2, 1e-12).unwrap();
        assert!((s2.value - 2.0).abs() < 1e-11);
        assert!(gamma_star_series(1, 1e-6).is_err());
        // Slow geometric ratio: the certified cutoff exceeds the budget
        // before any table is built.
        assert!(matches!(gamma_star_series(200, 1e-12), Err(Error::NoConvergence(_))));
    }

    #[test]
    fn integral_route_matches_series() {
        for n in 2..=8 {
            let series = gamma_star_series(n, 1e-9).unwrap();
            let integral = gamma_star_poisson(n, 1e-8).unwrap();
            assert!(
                (series.value - integral).abs() < 1e-7,
                "n {n}: {} vs {integral}",
                series.value
            );
        }
        // f_1(t) = t, so the n = 2 integral is Gamma(2) = 1.
        assert!((gamma_star_poisson(2, 1e-10).unwrap() - 2.0).abs() < 1e-9);
    }

    #[test]
    fn poisson_max_shape() {
        // Monotone in lambda, subadditive on a grid.
        for m in [1usize, 3, 7] {
            let mut prev = 0.0;
            for i in 1..=30 {
                let lambda = 0.4 * i as f64;
                let v = poisson_max_expectation(m, lambda);
                assert!(v >= prev - 1e-12);
                prev = v;
            }
            for a in [0.5f64, 1.5, 4.0] {
                for b in [0.7f64, 2.3, 6.0] {
                    let sum = poisson_max_expectation(m, a + b);
                    let parts =
                        poisson_max_expectation(m, a) + poisson_max_expectation(m, b);
                    assert!(sum <= parts + 1e-10);
                }
            }
        }
        // One variable: the maximum is the variable itself.
        assert_relative_eq!(poisson_max_expectation(1, 3.7), 3.7, max_relative = 1e-12);
    }

    #[test]
    fn generating_function_instances() {
        assert_eq!(generating_function_g(0.0).unwrap(), 0.0);
        assert_relative_eq!(
            gamma_via_g(1.0 / 9.0, 1.0 / 3.0).unwrap(),
            2.0 + 1.0 / 5f64.sqrt(),
            max_relative = 1e-15
        );
        assert_relative_eq!(
            gamma_via_g(2.0 / 25.0, 2.0 / 5.0).unwrap(),
            11.0 / 3.0,
            max_relative = 1e-15
        );
        assert!(generating_function_g(0.5).is_err());
        assert!(g_prime(-0.1).is_err());
    }

    #[test]
    fn taylor_coefficients_are_load_numbers_over_k() {
        let coeffs = g_taylor_coefficients(20);
        let a = a2_values(20);
        assert!(coeffs[0].is_zero());
        for k in 1..=20usize {
            let expected = BigRational::new(a[k].clone(), BigInt::from(k));
            assert_eq!(coeffs[k], expected, "degree {k}");
        }
    }

    #[test]
    fn trend_rows_behave() {
        let rows = gonnet_trend(&[3, 4, 5, 8, 16]).unwrap();
        for w in rows.windows(2) {
            assert!(w[1].gamma > w[0].gamma, "gamma must grow with n");
        }
        for r in &rows {
            assert!(r.ratio.is_finite() && r.ratio > 0.0);
        }
        assert_relative_eq!(
            rows[0].gamma,
            2.0 + 1.0 / 5f64.sqrt(),
            max_relative = 1e-7
        );
    }
}

//! Brute-force and Monte Carlo oracles.
//!
//! These validate the closed-form bounds at desk scale: seeded random
//! function tables, empirical entropy and collision statistics, and
//! exhaustive short-vector enumeration. Everything here is deterministic
//! per seed and reproducible bit for bit.
//!
//! The random source is the SplitMix64 generator: output `i` of a stream
//! seeded with `s` is `mix64(s + (i+1) * 0x9E3779B97F4A7C15)` where `mix64`
//! is the xor-shift/multiply finalizer below. Range reduction is plain
//! modulo (range sizes stay at or below 2^16, so the bias is below 2^-48).
//! Trial `j` of a multi-trial run is seeded with output `j` of a master
//! stream, so workers can partition trials by offset.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::IntegerLattice;

pub const MAX_DOMAIN_SIZE: usize = 1 << 20;
pub const MAX_RANGE_SIZE: usize = 1 << 16;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 finalizer.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Sequential SplitMix64 stream.
#[derive(Debug, Clone)]
pub struct SeedStream {
    state: u64,
}

impl SeedStream {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN_GAMMA);
        mix64(self.state)
    }

    /// Uniform draw in `0..bound` by modulo reduction.
    pub fn next_below(&mut self, bound: u64) -> u64 {
        self.next_u64() % bound
    }
}

/// A tabulated random function, regenerable bit-exactly from
/// `(domain_size, range_size, seed)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctionTable {
    pub domain_size: usize,
    pub range_size: usize,
    pub seed: u64,
    table: Vec<u16>,
}

/// Samples a uniform random function table.
pub fn sample_random_function(
    domain_size: usize,
    range_size: usize,
    seed: u64,
) -> Result<FunctionTable> {
    if domain_size == 0 || domain_size > MAX_DOMAIN_SIZE {
        return Err(Error::Capability(format!(
            "domain size must be in 1..={MAX_DOMAIN_SIZE}, got {domain_size}"
        )));
    }
    if range_size == 0 || range_size > MAX_RANGE_SIZE {
        return Err(Error::Capability(format!(
            "range size must be in 1..={MAX_RANGE_SIZE}, got {range_size}"
        )));
    }
    let mut stream = SeedStream::new(seed);
    let table = (0..domain_size)
        .map(|_| stream.next_below(range_size as u64) as u16)
        .collect();
    Ok(FunctionTable {
        domain_size,
        range_size,
        seed,
        table,
    })
}

impl FunctionTable {
    pub fn entries(&self) -> &[u16] {
        &self.table
    }

    /// Output histogram, length `range_size`.
    pub fn output_counts(&self) -> Vec<u64> {
        let mut counts = vec![0u64; self.range_size];
        for &y in &self.table {
            counts[y as usize] += 1;
        }
        counts
    }
}

/// Collision entropy (bits) of the empirical output distribution:
/// `-log2 sum (c_y / n)^2`.
pub fn empirical_collision_entropy(table: &FunctionTable) -> f64 {
    let n = table.domain_size as f64;
    let collision_sum: f64 = table
        .output_counts()
        .iter()
        .map(|&c| {
            let p = c as f64 / n;
            p * p
        })
        .sum();
    -collision_sum.log2()
}

/// One tail-comparison sweep: empirical frequency of
/// `H2(empirical) <= log2(range) - t` against the closed-form tail
/// `exp(-c t^2 / b)` at each grid point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailSweepResult {
    pub t_grid: Vec<f64>,
    /// Exact exceedance counts; `empirical_tail()[i] = counts[i] / trials`.
    pub counts: Vec<u64>,
    pub bound_tail: Vec<f64>,
    pub trials: u64,
    pub seed: u64,
    /// Deviation scale `b` used by the bound (output bits by default).
    pub b_bits: f64,
    /// Concentration constant used by the bound (3 by default).
    pub constant: f64,
    /// Probability space note for downstream readers.
    pub sampling: String,
}

impl TailSweepResult {
    pub fn empirical_tail(&self) -> Vec<f64> {
        self.counts
            .iter()
            .map(|&c| c as f64 / self.trials as f64)
            .collect()
    }

    /// CSV rendering with the fixed header `t,empirical_tail,bound_tail,trials,seed`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,empirical_tail,bound_tail,trials,seed\n");
        for ((t, emp), bound) in self
            .t_grid
            .iter()
            .zip(self.empirical_tail())
            .zip(self.bound_tail.iter())
        {
            out.push_str(&format!(
                "{t},{emp},{bound},{},{}\n",
                self.trials, self.seed
            ));
        }
        out
    }
}

/// [`concentration_sweep`] with an explicit deviation scale and constant.
/// `b_bits` defaults to the output size in bits; `constant` to 3.
pub fn concentration_sweep_with(
    domain_size: usize,
    range_size: usize,
    trials: u64,
    t_grid: &[f64],
    seed: u64,
    b_bits: f64,
    constant: f64,
) -> Result<TailSweepResult> {
    if trials < 100 {
        return Err(Error::Domain(format!(
            "need at least 100 trials, got {trials}"
        )));
    }
    if t_grid.is_empty() || t_grid.iter().any(|t| !t.is_finite() || *t < 0.0) {
        return Err(Error::Domain(
            "t grid must be non-empty and non-negative".into(),
        ));
    }
    if !(b_bits > 0.0) || !(constant > 0.0) {
        return Err(Error::Domain(
            "deviation scale and constant must be > 0".into(),
        ));
    }
    let log2_range = (range_size as f64).log2();
    let mut master = SeedStream::new(seed);
    let mut counts = vec![0u64; t_grid.len()];
    for _ in 0..trials {
        let trial_seed = master.next_u64();
        let table = sample_random_function(domain_size, range_size, trial_seed)?;
        let h2 = empirical_collision_entropy(&table);
        for (slot, &t) in counts.iter_mut().zip(t_grid.iter()) {
            if h2 <= log2_range - t {
                *slot += 1;
            }
        }
    }
    let bound_tail = t_grid
        .iter()
        .map(|&t| (-constant * t * t / b_bits).exp())
        .collect();
    Ok(TailSweepResult {
        t_grid: t_grid.to_vec(),
        counts,
        bound_tail,
        trials,
        seed,
        b_bits,
        constant,
        sampling: "independent uniform random functions per trial".into(),
    })
}

/// Tail comparison with the default interpretation: deviation scale
/// `b = log2(range_size)` (output bits) and concentration constant 3.
pub fn concentration_sweep(
    domain_size: usize,
    range_size: usize,
    trials: u64,
    t_grid: &[f64],
    seed: u64,
) -> Result<TailSweepResult> {
    concentration_sweep_with(
        domain_size,
        range_size,
        trials,
        t_grid,
        seed,
        (range_size as f64).log2(),
        3.0,
    )
}

/// Fraction of `trials` random functions in which `q_samples` distinct
/// inputs produce at least one output collision. Inputs are the first
/// `q_samples` table positions; outputs are i.i.d. uniform, so the choice
/// of distinct inputs does not matter.
pub fn empirical_collision_frequency(
    domain_size: usize,
    range_size: usize,
    q_samples: usize,
    trials: u64,
    seed: u64,
) -> Result<f64> {
    if q_samples < 2 {
        return Err(Error::Domain(format!(
            "need q >= 2 samples, got {q_samples}"
        )));
    }
    if q_samples > domain_size {
        return Err(Error::Domain(format!(
            "q = {q_samples} exceeds domain size {domain_size}"
        )));
    }
    if range_size == 0 || range_size > MAX_RANGE_SIZE {
        return Err(Error::Capability(format!(
            "range size must be in 1..={MAX_RANGE_SIZE}, got {range_size}"
        )));
    }
    if trials == 0 {
        return Err(Error::Domain("need at least one trial".into()));
    }
    let mut master = SeedStream::new(seed);
    let mut hits = 0u64;
    let mut seen = vec![false; range_size];
    for _ in 0..trials {
        let mut stream = SeedStream::new(master.next_u64());
        seen.iter_mut().for_each(|s| *s = false);
        let mut collided = false;
        for _ in 0..q_samples {
            let y = stream.next_below(range_size as u64) as usize;
            if seen[y] {
                collided = true;
                break;
            }
            seen[y] = true;
        }
        if collided {
            hits += 1;
        }
    }
    Ok(hits as f64 / trials as f64)
}

/// Exact birthday collision probability `1 - prod_{i=1}^{q-1} (1 - i/R)`
/// for `q` uniform samples into `R` bins. Independent closed-form check
/// for the Monte Carlo frequency above.
pub fn exact_birthday_collision_probability(q_samples: u64, range_size: u64) -> Result<f64> {
    if q_samples < 2 || range_size == 0 {
        return Err(Error::Domain("need q >= 2 and a non-empty range".into()));
    }
    if q_samples > range_size {
        return Ok(1.0);
    }
    let r = range_size as f64;
    let mut no_collision = 1.0f64;
    for i in 1..q_samples {
        no_collision *= 1.0 - i as f64 / r;
    }
    Ok(1.0 - no_collision)
}

/// Shortest nonzero vector found by exhaustive enumeration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShortestVector {
    pub lambda1: f64,
    /// Exact squared norm of the witness.
    pub norm_sq: u128,
    pub witness: Vec<i64>,
}

/// Exhaustive shortest-vector search within `radius`. The default radius
/// for full coverage is twice the longest basis row, which always bounds
/// the shortest vector.
pub fn shortest_vector_enum(lat: &IntegerLattice, radius: f64) -> Result<ShortestVector> {
    let mut best: Option<(u128, Vec<i64>)> = None;
    lat.enumerate_nonzero(radius, |v, nsq| {
        let better = match &best {
            Some((b, _)) => nsq < *b,
            None => true,
        };
        if better {
            best = Some((nsq, v.to_vec()));
        }
    })?;
    match best {
        Some((norm_sq, witness)) => Ok(ShortestVector {
            lambda1: (norm_sq as f64).sqrt(),
            norm_sq,
            witness,
        }),
        None => Err(Error::Evaluation(format!(
            "no nonzero vector within radius {radius}; enlarge the radius \
             (2 * max row norm always suffices)"
        ))),
    }
}

/// Truncated Gaussian mass over the lattice.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussianMass {
    /// `sum exp(-pi ||v||^2 / sigma^2)` over enumerated nonzero vectors.
    pub mass: f64,
    /// Heuristic estimate of the mass beyond the enumeration radius.
    pub tail_estimate: f64,
    /// Number of vectors enumerated.
    pub points: usize,
}

/// Gaussian mass of the nonzero vectors within `radius`, plus a tail
/// estimate from the continuous Gaussian beyond the radius scaled by the
/// point density `1/det` (with a safety factor for discreteness).
pub fn gaussian_mass_enum(lat: &IntegerLattice, sigma: f64, radius: f64) -> Result<GaussianMass> {
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(Error::Domain(format!(
            "sigma must be finite > 0, got {sigma}"
        )));
    }
    let mut mass = 0.0f64;
    let mut points = 0usize;
    lat.enumerate_nonzero(radius, |_, nsq| {
        mass += (-std::f64::consts::PI * nsq as f64 / (sigma * sigma)).exp();
        points += 1;
    })?;
    if points == 0 {
        return Err(Error::Evaluation(format!(
            "no nonzero vector within radius {radius}; enlarge the radius \
             (2 * max row norm always suffices)"
        )));
    }
    let tail_estimate = gaussian_tail_estimate(lat.dim(), lat.det_abs() as f64, sigma, radius);
    Ok(GaussianMass {
        mass,
        tail_estimate,
        points,
    })
}

/// Density-scaled continuous tail: `(sigma^n / det) * Q(n/2, pi R^2 / sigma^2)`
/// times a safety factor of 4 for the discrete-vs-continuous gap.
fn gaussian_tail_estimate(dim: usize, det: f64, sigma: f64, radius: f64) -> f64 {
    let x = std::f64::consts::PI * radius * radius / (sigma * sigma);
    let q = regularized_upper_gamma_half(dim, x);
    4.0 * sigma.powi(dim as i32) / det * q
}

/// Regularized upper incomplete gamma Q(a, x) for a = dim/2 with dim <= 8,
/// via the closed upper bound Q(a, x) <= x^(a-1) e^-x / (Gamma(a) (1 - (a-1)/x))
/// for x > a - 1, clamped to 1 elsewhere. Adequate for a tail estimate.
fn regularized_upper_gamma_half(dim: usize, x: f64) -> f64 {
    let a = dim as f64 / 2.0;
    if x <= a - 1.0 + 1e-12 || x <= 0.0 {
        return 1.0;
    }
    // Gamma(k/2) for k = 1..=8.
    const SQRT_PI: f64 = 1.772453850905516;
    let gamma_a = match dim {
        1 => SQRT_PI,
        2 => 1.0,
        3 => SQRT_PI / 2.0,
        4 => 1.0,
        5 => 3.0 * SQRT_PI / 4.0,
        6 => 2.0,
        7 => 15.0 * SQRT_PI / 8.0,
        _ => 6.0,
    };
    let bound = x.powf(a - 1.0) * (-x).exp() / (gamma_a * (1.0 - (a - 1.0) / x));
    bound.min(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tables_are_deterministic_per_seed() {
        let a = sample_random_function(1024, 256, 42).unwrap();
        let b = sample_random_function(1024, 256, 42).unwrap();
        assert_eq!(a, b);
        let c = sample_random_function(1024, 256, 43).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn range_one_is_all_zero() {
        let t = sample_random_function(64, 1, 7).unwrap();
        assert!(t.entries().iter().all(|&y| y == 0));
        assert_eq!(empirical_collision_entropy(&t), 0.0);
    }

    #[test]
    fn size_limits_enforced() {
        assert!(sample_random_function(MAX_DOMAIN_SIZE + 1, 2, 0).is_err());
        assert!(sample_random_function(4, MAX_RANGE_SIZE + 1, 0).is_err());
        assert!(sample_random_function(0, 2, 0).is_err());
    }

    #[test]
    fn uniformity_chi_square_16_buckets() {
        // 2^16 samples into 16 buckets. chi^2 with 15 dof: the 1e-6
        // critical value is ~57.4.
        let t = sample_random_function(1 << 16, 16, 0xDEADBEEF).unwrap();
        let counts = t.output_counts();
        let expected = (1u64 << 16) as f64 / 16.0;
        let chi2: f64 = counts
            .iter()
            .map(|&c| {
                let d = c as f64 - expected;
                d * d / expected
            })
            .sum();
        assert!(chi2 < 57.4, "chi-square statistic {chi2}");
    }

    #[test]
    fn identity_like_table_entropy_is_range_bits() {
        // Each output exactly once: uniform empirical distribution.
        let mut t = sample_random_function(256, 256, 1).unwrap();
        for (i, y) in t.table.iter_mut().enumerate() {
            *y = i as u16;
        }
        assert!((empirical_collision_entropy(&t) - 8.0).abs() < 1e-12);
    }

    #[test]
    fn entropy_agrees_with_renyi_module() {
        use crate::entropy::{renyi_entropy, Distribution, EntropyOrder};
        let t = sample_random_function(4096, 256, 99).unwrap();
        let n = t.domain_size as f64;
        let probs: Vec<f64> = t.output_counts().iter().map(|&c| c as f64 / n).collect();
        let d = Distribution::normalized(probs).unwrap();
        let h_lib = renyi_entropy(&d, EntropyOrder::Finite(2.0)).unwrap();
        let h_emp = empirical_collision_entropy(&t);
        assert!((h_lib - h_emp).abs() < 1e-12);
    }

    #[test]
    fn sweep_t_zero_edges() {
        let grid = [0.0, 0.5];
        let r = concentration_sweep(256, 16, 200, &grid, 5).unwrap();
        // Finite samples keep H2 strictly below log2 range.
        assert_eq!(r.empirical_tail()[0], 1.0);
        assert_eq!(r.bound_tail[0], 1.0);
        assert!(r.counts.len() == 2);
    }

    #[test]
    fn sweep_is_deterministic() {
        let grid = [0.25, 1.0];
        let a = concentration_sweep(512, 64, 150, &grid, 11).unwrap();
        let b = concentration_sweep(512, 64, 150, &grid, 11).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_csv(), b.to_csv());
        assert!(a
            .to_csv()
            .starts_with("t,empirical_tail,bound_tail,trials,seed\n"));
    }

    #[test]
    fn collision_frequency_pigeonhole() {
        let f = empirical_collision_frequency(17, 16, 17, 200, 3).unwrap();
        assert_eq!(f, 1.0);
    }

    #[test]
    fn collision_frequency_pair_case() {
        // q=2 into 256 bins: exact probability 1/256.
        let f = empirical_collision_frequency(1024, 256, 2, 20_000, 1234).unwrap();
        let p = 1.0 / 256.0;
        let sigma = (p * (1.0 - p) / 20_000.0f64).sqrt();
        assert!(
            (f - p).abs() < 3.0 * sigma,
            "freq {f}, expected {p} +- {}",
            3.0 * sigma
        );
    }

    #[test]
    fn collision_frequency_rejects_bad_q() {
        assert!(empirical_collision_frequency(16, 16, 1, 100, 0).is_err());
        assert!(empirical_collision_frequency(16, 16, 17, 100, 0).is_err());
    }

    #[test]
    fn birthday_product_values() {
        let p = exact_birthday_collision_probability(16, 256).unwrap();
        assert!((p - 0.3802923025057854).abs() < 1e-15);
        assert_eq!(exact_birthday_collision_probability(300, 256).unwrap(), 1.0);
        let pair = exact_birthday_collision_probability(2, 256).unwrap();
        assert!((pair - 1.0 / 256.0).abs() < 1e-15);
    }

    #[test]
    fn svp_identity_dim3() {
        let lat = IntegerLattice::new(vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]).unwrap();
        let sv = shortest_vector_enum(&lat, 2.0).unwrap();
        assert_eq!(sv.norm_sq, 1);
        assert_eq!(sv.lambda1, 1.0);
        let nonzero: Vec<i64> = sv.witness.iter().filter(|&&x| x != 0).cloned().collect();
        assert_eq!(nonzero.len(), 1);
        assert_eq!(nonzero[0].abs(), 1);
    }

    #[test]
    fn svp_skew_basis() {
        let lat = IntegerLattice::new(vec![vec![2, 0], vec![1, 2]]).unwrap();
        let sv = shortest_vector_enum(&lat, 2.0 * lat.max_row_norm()).unwrap();
        assert_eq!(sv.norm_sq, 4);
        assert_eq!(sv.lambda1, 2.0);
    }

    #[test]
    fn svp_radius_too_small() {
        let lat = IntegerLattice::new(vec![vec![3, 0], vec![0, 3]]).unwrap();
        let err = shortest_vector_enum(&lat, 1.0).unwrap_err();
        assert!(matches!(err, Error::Evaluation(_)));
    }

    #[test]
    fn gaussian_mass_scalar_series() {
        // Z^1, sigma = 1, radius 10: 2 * sum_{k>=1} e^{-pi k^2}.
        let lat = IntegerLattice::new(vec![vec![1]]).unwrap();
        let gm = gaussian_mass_enum(&lat, 1.0, 10.0).unwrap();
        let expected: f64 = 2.0
            * (1..=10)
                .map(|k| (-std::f64::consts::PI * (k * k) as f64).exp())
                .sum::<f64>();
        assert!((gm.mass - expected).abs() < 1e-15);
        assert!((gm.mass - 0.08643481121330804).abs() < 1e-12);
    }

    #[test]
    fn gaussian_mass_monotone_in_sigma() {
        let lat = IntegerLattice::new(vec![vec![1, 0], vec![0, 1]]).unwrap();
        let m1 = gaussian_mass_enum(&lat, 0.8, 6.0).unwrap().mass;
        let m2 = gaussian_mass_enum(&lat, 1.2, 6.0).unwrap().mass;
        assert!(m2 > m1);
        // sigma -> 0 collapses the mass.
        let m0 = gaussian_mass_enum(&lat, 0.05, 6.0).unwrap().mass;
        assert!(m0 < 1e-100);
    }

    #[test]
    fn gaussian_tail_estimate_covers_radius_growth() {
        let lat = IntegerLattice::new(vec![vec![1, 0], vec![0, 1]]).unwrap();
        for sigma in [0.7, 1.0, 1.6] {
            let base = gaussian_mass_enum(&lat, sigma, 4.0).unwrap();
            let bigger = gaussian_mass_enum(&lat, sigma, 6.0).unwrap();
            let delta = bigger.mass - base.mass;
            assert!(
                delta <= base.tail_estimate,
                "sigma {sigma}: growth {delta} vs estimate {}",
                base.tail_estimate
            );
        }
    }
}

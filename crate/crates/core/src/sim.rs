//! Monte Carlo simulation of the walker system on `C_{K,h}`.
//!
//! A walker keeps only `z_1`, the step shape and the doubled area. Each move
//! counts the neighbours of the current path with a two-state backward pass
//! over the steps, draws a uniform rank and unranks it, so a move costs
//! `O(K)` time and memory regardless of `|C_{K,h}|`.
//!
//! Replica `r` of a batch is seeded with [`derive_seed`]`(base_seed, r)`
//! and results are gathered in replica order, so estimates do not depend
//! on the number of worker threads.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::path::{NeighborCounter, PathZ, WalkParams, MAX_PATH_K};

/// How the first path is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InitialShape {
    /// `g` down steps followed by `K - g` up steps, `z_1 = 0`.
    #[default]
    DownThenUp,
    /// A shape drawn uniformly from `Sh_{K,h}`, `z_1 = 0`.
    Uniform,
}

/// Worker count for replica batches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parallelism {
    Sequential,
    /// A dedicated pool with this many threads. Falls back to sequential
    /// when the `parallel` feature is off.
    Threads(usize),
}

impl Parallelism {
    pub fn from_count(n: usize) -> Self {
        if n <= 1 {
            Parallelism::Sequential
        } else {
            Parallelism::Threads(n)
        }
    }

    pub fn available() -> Self {
        Self::from_count(std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1))
    }
}

/// SplitMix64 finaliser.
fn mix64(mut x: u64) -> u64 {
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Seed of replica `replica` in a batch started from `base_seed`.
pub fn derive_seed(base_seed: u64, replica: u64) -> u64 {
    mix64(mix64(base_seed).wrapping_add(replica.wrapping_add(1).wrapping_mul(0x9e37_79b9_7f4a_7c15)))
}

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn check_sim_params(params: WalkParams) -> Result<()> {
    if params.k() > MAX_PATH_K {
        return Err(Error::InvalidArgument(format!(
            "simulation supports K <= {MAX_PATH_K}, got {}",
            params.k()
        )));
    }
    Ok(())
}

/// One copy of the walker system.
#[derive(Clone)]
pub struct Walker {
    z1: i64,
    steps: Vec<i8>,
    twice_area: i128,
    counter: NeighborCounter,
    scratch: Vec<i8>,
}

impl Walker {
    pub fn new<R: Rng + ?Sized>(params: WalkParams, initial: InitialShape, rng: &mut R) -> Result<Self> {
        check_sim_params(params)?;
        let mut steps = vec![-1i8; params.g()];
        steps.resize(params.k(), 1);
        if initial == InitialShape::Uniform {
            steps.shuffle(rng);
        }
        Ok(Self::from_parts(0, steps))
    }

    pub fn from_path(z: &PathZ) -> Self {
        Self::from_parts(z.first(), z.step_shape().steps().to_vec())
    }

    fn from_parts(z1: i64, steps: Vec<i8>) -> Self {
        let k = steps.len();
        let mut w = Walker {
            z1,
            steps,
            twice_area: 0,
            counter: NeighborCounter::empty(true),
            scratch: vec![0; k + 1],
        };
        w.twice_area = crate::path::twice_area(&w.path()).value();
        w
    }

    pub fn z1(&self) -> i64 {
        self.z1
    }

    pub fn twice_area(&self) -> i128 {
        self.twice_area
    }

    pub fn path(&self) -> PathZ {
        let mut heights = Vec::with_capacity(self.steps.len() + 1);
        heights.push(self.z1);
        for &s in &self.steps {
            heights.push(heights[heights.len() - 1] + s as i64);
        }
        PathZ::from_raw(heights)
    }

    /// Moves to a neighbour chosen uniformly among all `deg(z)` of them.
    pub fn step<R: Rng + ?Sized>(&mut self, rng: &mut R) {
        let k = self.steps.len();
        let steps = &self.steps;
        self.counter.recompute(k, |i| steps[i]);
        let up = self.counter.count_from(1);
        let degree = up + self.counter.count_from(-1);
        let mut rank = if let Ok(d) = u64::try_from(degree) {
            rng.random_range(0..d) as u128
        } else {
            rng.random_range(0..degree)
        };
        let start = if rank < up {
            1
        } else {
            rank -= up;
            -1
        };
        self.counter.unrank(start, rank, |i| steps[i], &mut self.scratch);

        let d = &self.scratch;
        let mut delta: i128 = d[0] as i128 + d[k] as i128;
        for i in 0..k {
            self.steps[i] += d[i + 1] - d[i];
            if i > 0 {
                delta += 2 * d[i] as i128;
            }
        }
        self.z1 += d[0] as i64;
        self.twice_area += delta;
    }
}

/// One recorded point of a trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Sample {
    pub step: u64,
    pub z1: i64,
    pub twice_area: i128,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trajectory {
    pub params: WalkParams,
    pub seed: u64,
    pub n: u64,
    pub stride: u64,
    /// Step 0, every multiple of `stride`, and step `n`.
    pub samples: Vec<Sample>,
}

pub fn simulate(params: WalkParams, n: u64, seed: u64, stride: u64, initial: InitialShape) -> Result<Trajectory> {
    if n == 0 || stride == 0 {
        return Err(Error::InvalidArgument("n and stride must be positive".into()));
    }
    let mut rng = rng_from_seed(seed);
    let mut walker = Walker::new(params, initial, &mut rng)?;
    let mut samples = vec![Sample { step: 0, z1: walker.z1(), twice_area: walker.twice_area() }];
    for t in 1..=n {
        walker.step(&mut rng);
        if t % stride == 0 || t == n {
            samples.push(Sample { step: t, z1: walker.z1(), twice_area: walker.twice_area() });
        }
    }
    Ok(Trajectory { params, seed, n, stride, samples })
}

/// Final first coordinate of one replica.
pub fn run_replica(params: WalkParams, n: u64, seed: u64, initial: InitialShape) -> Result<i64> {
    let mut rng = rng_from_seed(seed);
    let mut walker = Walker::new(params, initial, &mut rng)?;
    for _ in 0..n {
        walker.step(&mut rng);
    }
    Ok(walker.z1())
}

/// Maps `f` over `0..count` and returns results in index order.
pub fn map_replicas<T, F>(count: u64, parallelism: Parallelism, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64) -> Result<T> + Sync + Send,
{
    match parallelism {
        Parallelism::Sequential => (0..count).map(f).collect(),
        #[cfg(feature = "parallel")]
        Parallelism::Threads(threads) => {
            use rayon::prelude::*;
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
            pool.install(|| (0..count).into_par_iter().map(f).collect())
        }
        #[cfg(not(feature = "parallel"))]
        Parallelism::Threads(_) => (0..count).map(f).collect(),
    }
}

/// Sample variance of `Z_{n,1} / √n` across replicas.
#[derive(Debug, Clone, PartialEq)]
pub struct VarianceEstimate {
    pub estimate: f64,
    /// `estimate · √(2 / (R - 1))`, the normal-theory standard error of a
    /// sample variance.
    pub std_error: f64,
    /// `Z_{n,1}` of every replica, in replica order.
    pub finals: Vec<i64>,
}

impl VarianceEstimate {
    pub fn z_score(&self, exact: f64) -> f64 {
        (self.estimate - exact) / self.std_error
    }
}

pub fn estimate_variance(
    params: WalkParams,
    n: u64,
    replicas: u64,
    base_seed: u64,
    parallelism: Parallelism,
    initial: InitialShape,
) -> Result<VarianceEstimate> {
    if replicas < 2 {
        return Err(Error::InvalidArgument("at least two replicas are needed".into()));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    check_sim_params(params)?;
    let finals = map_replicas(replicas, parallelism, |r| {
        run_replica(params, n, derive_seed(base_seed, r), initial)
    })?;
    Ok(summarize(finals, n))
}

fn summarize(finals: Vec<i64>, n: u64) -> VarianceEstimate {
    let scale = (n as f64).sqrt();
    let r = finals.len() as f64;
    let mean = finals.iter().map(|&z| z as f64 / scale).sum::<f64>() / r;
    let ss: f64 = finals.iter().map(|&z| (z as f64 / scale - mean).powi(2)).sum();
    let estimate = ss / (r - 1.0);
    VarianceEstimate {
        estimate,
        std_error: estimate * (2.0 / (r - 1.0)).sqrt(),
        finals,
    }
}

/// Checks of the area martingale along simulated trajectories.
#[derive(Debug, Clone, PartialEq)]
pub struct AreaMartingaleReport {
    /// Largest `|K Z_{t,1} - (A(Z_t) - A(Z_0)) - K Z_{0,1}|` over all steps.
    pub max_coupling_gap: f64,
    /// `2 K²`.
    pub coupling_bound: f64,
    /// Mean of `A(Z_n) - A(Z_0)` across replicas.
    pub mean_area_drift: f64,
    /// `4 √(n K² / R)`, using `|ΔA| ≤ K` per move.
    pub drift_tolerance: f64,
}

impl AreaMartingaleReport {
    pub fn passed(&self) -> bool {
        self.max_coupling_gap <= self.coupling_bound && self.mean_area_drift.abs() <= self.drift_tolerance
    }
}

pub fn area_martingale_mc_check(
    params: WalkParams,
    n: u64,
    replicas: u64,
    seed: u64,
    parallelism: Parallelism,
) -> Result<AreaMartingaleReport> {
    if replicas == 0 || n == 0 {
        return Err(Error::InvalidArgument("n and replicas must be positive".into()));
    }
    check_sim_params(params)?;
    let k = params.k() as i128;
    let per_replica = map_replicas(replicas, parallelism, |r| {
        let mut rng = rng_from_seed(derive_seed(seed, r));
        let mut w = Walker::new(params, InitialShape::DownThenUp, &mut rng)?;
        let (a0, z0) = (w.twice_area(), w.z1() as i128);
        let mut max_gap: i128 = 0;
        for _ in 0..n {
            w.step(&mut rng);
            // Doubled: 2 K Δz_1 - 2 ΔA.
            let gap = (2 * k * (w.z1() as i128 - z0) - (w.twice_area() - a0)).abs();
            max_gap = max_gap.max(gap);
        }
        Ok((max_gap, w.twice_area() - a0))
    })?;
    let max_gap = per_replica.iter().map(|p| p.0).max().unwrap_or(0);
    let drift: f64 = per_replica.iter().map(|p| p.1 as f64 / 2.0).sum::<f64>() / replicas as f64;
    let kf = params.k() as f64;
    Ok(AreaMartingaleReport {
        max_coupling_gap: max_gap as f64 / 2.0,
        coupling_bound: 2.0 * kf * kf,
        mean_area_drift: drift,
        drift_tolerance: 4.0 * (n as f64 * kf * kf / replicas as f64).sqrt(),
    })
}

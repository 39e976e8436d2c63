//! Random matrices and the Monte Carlo estimators built on them.
//!
//! Estimators split their samples into a fixed number of shards. Shard `k`
//! draws from the ChaCha8 stream `k` of the seed, so the result depends on
//! `(seed, shards)` only, never on how rayon schedules the work.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::matcore::{entropy_of_entries, BistochasticMatrix, ComplexMatrix, RealMatrix, UnitaryMatrix};
use crate::uni3::slack_of_entries;

pub const DEFAULT_SHARDS: u64 = 64;

/// Generator for stream `stream` of `seed`. Distinct streams do not overlap.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Row-major entries of a 3×3 matrix completed from the minor
/// `(x, y, z, t) = (B₀₀, B₀₁, B₁₀, B₁₁)`.
pub fn complete_minor(x: f64, y: f64, z: f64, t: f64) -> [f64; 9] {
    [
        x,
        y,
        1.0 - x - y,
        z,
        t,
        1.0 - z - t,
        1.0 - x - z,
        1.0 - y - t,
        x + y + z + t - 1.0,
    ]
}

/// The minor acceptance test: row and column sums of the minor at most one,
/// total at least one.
#[inline]
pub fn minor_accepted(x: f64, y: f64, z: f64, t: f64) -> bool {
    x + y <= 1.0 && z + t <= 1.0 && x + z <= 1.0 && y + t <= 1.0 && x + y + z + t >= 1.0
}

/// Draws cube points until one is accepted. Returns the entries and the
/// number of cube points used.
#[inline]
fn draw_flat_b3<R: Rng + ?Sized>(rng: &mut R) -> ([f64; 9], u64) {
    let mut tries = 0;
    loop {
        tries += 1;
        let (x, y, z, t) = (rng.random(), rng.random(), rng.random(), rng.random());
        if minor_accepted(x, y, z, t) {
            return (complete_minor(x, y, z, t), tries);
        }
    }
}

/// A 3×3 bistochastic matrix distributed uniformly on the polytope.
pub fn sample_flat_b3<R: Rng + ?Sized>(rng: &mut R) -> BistochasticMatrix {
    let (e, _) = draw_flat_b3(rng);
    let m = RealMatrix::from_row_slice(3, 3, &e);
    BistochasticMatrix::with_tolerance(m, 1e-12).expect("completed minor is bistochastic")
}

/// Haar-distributed unitary: QR of a complex Ginibre matrix with the phases
/// of `diag R` moved back into `Q`.
pub fn sample_haar_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> UnitaryMatrix {
    let z = ComplexMatrix::from_fn(n, n, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re, im)
    });
    let qr = z.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        q.column_mut(j).apply(|w| *w *= phase);
    }
    UnitaryMatrix::with_tolerance(q, 1e-10).expect("QR factor is unitary")
}

/// GUE Hermitian matrix: diagonal `N(0, 1)`, off-diagonal real and imaginary
/// parts `N(0, 1/2)`.
pub fn sample_gue<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    let mut h = DMatrix::<Complex64>::zeros(n, n);
    let s = std::f64::consts::FRAC_1_SQRT_2;
    for i in 0..n {
        let d: f64 = rng.sample(StandardNormal);
        h[(i, i)] = Complex64::new(d, 0.0);
        for j in i + 1..n {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            let z = Complex64::new(s * re, s * im);
            h[(i, j)] = z;
            h[(j, i)] = z.conj();
        }
    }
    h
}

/// Running moments; merging is plain addition.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Moments {
    pub count: u64,
    pub sum: f64,
    pub sum_sq: f64,
    /// Proposals drawn, for rejection samplers.
    pub trials: u64,
}

impl Moments {
    #[inline]
    pub fn push(&mut self, x: f64) {
        self.count += 1;
        self.sum += x;
        self.sum_sq += x * x;
    }

    pub fn merge(self, other: Self) -> Self {
        Self {
            count: self.count + other.count,
            sum: self.sum + other.sum,
            sum_sq: self.sum_sq + other.sum_sq,
            trials: self.trials + other.trials,
        }
    }

    pub fn report(&self) -> EstimateReport {
        let n = self.count as f64;
        let mean = self.sum / n;
        let var = if self.count > 1 {
            ((self.sum_sq - n * mean * mean) / (n - 1.0)).max(0.0)
        } else {
            0.0
        };
        EstimateReport {
            mean,
            stderr: (var / n).sqrt(),
            count: self.count,
            acceptance: (self.trials > 0).then(|| n / self.trials as f64),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EstimateReport {
    pub mean: f64,
    pub stderr: f64,
    pub count: u64,
    /// Accepted fraction of proposals, for rejection samplers.
    pub acceptance: Option<f64>,
}

impl EstimateReport {
    pub fn scaled(self, factor: f64) -> Self {
        Self {
            mean: self.mean * factor,
            stderr: self.stderr * factor,
            ..self
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Ensemble {
    FlatB3,
    FlatU3,
    HaarU3,
}

impl std::str::FromStr for Ensemble {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "flat_b3" | "flat-b3" => Ok(Ensemble::FlatB3),
            "flat_u3" | "flat-u3" => Ok(Ensemble::FlatU3),
            "haar_u3" | "haar-u3" => Ok(Ensemble::HaarU3),
            _ => Err(format!("unknown ensemble {s:?} (flat_b3, flat_u3, haar_u3)")),
        }
    }
}

/// Seed and shard count of a parallel estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Sharding {
    pub seed: u64,
    pub shards: u64,
}

impl Sharding {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            shards: DEFAULT_SHARDS,
        }
    }

    /// Splits `samples` across the shards, runs `body(count, rng)` per shard
    /// in parallel and merges in shard order.
    pub fn run<F>(&self, samples: u64, body: F) -> Moments
    where
        F: Fn(u64, &mut ChaCha8Rng) -> Moments + Sync,
    {
        let shards = self.shards.max(1);
        let per = samples / shards;
        let extra = samples % shards;
        let parts: Vec<Moments> = (0..shards)
            .into_par_iter()
            .map(|k| {
                let mut rng = stream_rng(self.seed, k);
                body(per + u64::from(k < extra), &mut rng)
            })
            .collect();
        parts.into_iter().fold(Moments::default(), Moments::merge)
    }
}

/// Indicator moments of the chain-links test over `count` flat draws.
pub fn volume_ratio_moments<R: Rng + ?Sized>(count: u64, rng: &mut R) -> Moments {
    let mut m = Moments::default();
    for _ in 0..count {
        let (e, tries) = draw_flat_b3(rng);
        m.trials += tries;
        m.push(if slack_of_entries(&e) >= 0.0 { 1.0 } else { 0.0 });
    }
    m
}

/// Fraction of the flat 3×3 polytope that is unistochastic.
pub fn estimate_volume_ratio_u3(samples: u64, sharding: Sharding) -> EstimateReport {
    sharding.run(samples, volume_ratio_moments).report()
}

/// Entropy moments over `count` members of the ensemble.
pub fn entropy_moments<R: Rng + ?Sized>(ensemble: Ensemble, count: u64, rng: &mut R) -> Moments {
    let mut m = Moments::default();
    match ensemble {
        Ensemble::FlatB3 => {
            for _ in 0..count {
                let (e, tries) = draw_flat_b3(rng);
                m.trials += tries;
                m.push(entropy_of_entries(&e, 3));
            }
        }
        Ensemble::FlatU3 => {
            while m.count < count {
                let (e, tries) = draw_flat_b3(rng);
                m.trials += tries;
                if slack_of_entries(&e) >= 0.0 {
                    m.push(entropy_of_entries(&e, 3));
                }
            }
        }
        Ensemble::HaarU3 => {
            for _ in 0..count {
                let u = sample_haar_unitary(3, rng);
                let e: Vec<f64> = u.as_matrix().iter().map(|z| z.norm_sqr()).collect();
                m.push(entropy_of_entries(&e, 3));
            }
        }
    }
    m
}

/// Mean row entropy over the ensemble.
pub fn estimate_entropy(ensemble: Ensemble, samples: u64, sharding: Sharding) -> EstimateReport {
    sharding
        .run(samples, |n, rng| entropy_moments(ensemble, n, rng))
        .report()
}

//! Seeded construction of the five instance families.
//!
//! Every generator is a pure function of `(config, seed)`. Batch generation
//! derives one sub-seed per index, so output is identical regardless of
//! worker count or execution order.

mod scale_free;

pub use scale_free::{
    ba_graph, degrees_to_distances, gen_scale_free, spring_layout, DegreeGraph, LayoutResult,
};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{Metric, Point};
use crate::instance::{Instance, Provenance};

/// Uniform points on the unit square.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RueConfig {
    pub n: usize,
}

/// Independent normal coordinates per axis; points are not clipped.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RneConfig {
    pub n: usize,
    pub mean: f64,
    pub sd: f64,
}

impl RneConfig {
    pub fn new(n: usize, sd: f64) -> Self {
        Self { n, mean: 0.5, sd }
    }
}

/// Scale-free family: Barabási-Albert degrees mapped to target distances and
/// embedded by stress majorization.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScaleFreeConfig {
    pub n: usize,
    pub m0: usize,
    pub m: usize,
    pub k_attract: f64,
    pub layout_iterations: usize,
    pub layout_tolerance: f64,
}

impl ScaleFreeConfig {
    /// Default hyperparameters from the k-calibration sweep at n = 50.
    pub fn new(n: usize) -> Self {
        Self {
            n,
            m0: 3,
            m: 2,
            k_attract: 0.5,
            layout_iterations: 500,
            layout_tolerance: 1e-6,
        }
    }
}

/// Two perturbed parallel lines with optional rotation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParallelConfig {
    pub n: usize,
    /// Offset between the base lines `y = x` and `y = x + line_gap`.
    pub line_gap: f64,
    /// Fraction of points receiving the large noise.
    pub alpha: f64,
    pub sigma_large: f64,
    pub sigma_small: f64,
    pub rotate: bool,
}

impl ParallelConfig {
    /// The unperturbed two-line counterexample layout.
    pub fn counterexample(n: usize) -> Self {
        Self {
            n,
            line_gap: 0.05,
            alpha: 0.0,
            sigma_large: 0.0,
            sigma_small: 0.0,
            rotate: false,
        }
    }
}

/// Uniform square convolved with a per-instance Gaussian.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvolutionConfig {
    pub n: usize,
    pub lambda_max: f64,
}

/// Tagged union of the five family configurations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", content = "params", rename_all = "kebab-case")]
pub enum GeneratorConfig {
    Rue(RueConfig),
    Rne(RneConfig),
    ScaleFree(ScaleFreeConfig),
    Parallel(ParallelConfig),
    Convolution(ConvolutionConfig),
}

impl GeneratorConfig {
    pub fn family(&self) -> &'static str {
        match self {
            GeneratorConfig::Rue(_) => "rue",
            GeneratorConfig::Rne(_) => "rne",
            GeneratorConfig::ScaleFree(_) => "scale-free",
            GeneratorConfig::Parallel(_) => "parallel",
            GeneratorConfig::Convolution(_) => "convolution",
        }
    }

    pub fn n(&self) -> usize {
        match self {
            GeneratorConfig::Rue(c) => c.n,
            GeneratorConfig::Rne(c) => c.n,
            GeneratorConfig::ScaleFree(c) => c.n,
            GeneratorConfig::Parallel(c) => c.n,
            GeneratorConfig::Convolution(c) => c.n,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n();
        if n < 3 {
            return Err(Error::InvalidConfig(format!("n must be at least 3, got {n}")));
        }
        match self {
            GeneratorConfig::Rue(_) => {}
            GeneratorConfig::Rne(c) => {
                if !(c.sd >= 0.0 && c.sd.is_finite() && c.mean.is_finite()) {
                    return Err(Error::InvalidConfig(format!(
                        "rne requires finite mean and sd >= 0, got mean={} sd={}",
                        c.mean, c.sd
                    )));
                }
            }
            GeneratorConfig::ScaleFree(c) => {
                if !(c.m >= 1 && c.m <= c.m0 && c.m0 < c.n) {
                    return Err(Error::InvalidConfig(format!(
                        "scale-free requires 1 <= m <= m0 < n, got m={} m0={} n={}",
                        c.m, c.m0, c.n
                    )));
                }
                if !(c.k_attract > 0.0) {
                    return Err(Error::InvalidConfig(format!(
                        "k_attract must be > 0, got {}",
                        c.k_attract
                    )));
                }
                if c.layout_iterations == 0 || !(c.layout_tolerance >= 0.0) {
                    return Err(Error::InvalidConfig(
                        "layout_iterations must be >= 1 and layout_tolerance >= 0".into(),
                    ));
                }
            }
            GeneratorConfig::Parallel(c) => {
                if c.n % 2 != 0 {
                    return Err(Error::InvalidConfig(format!(
                        "parallel family requires even n, got {}",
                        c.n
                    )));
                }
                if !(c.line_gap > 0.0 && c.line_gap < 1.0) {
                    return Err(Error::InvalidConfig(format!(
                        "line_gap must be in (0,1), got {}",
                        c.line_gap
                    )));
                }
                if !(0.0..=1.0).contains(&c.alpha) {
                    return Err(Error::InvalidConfig(format!(
                        "alpha must be in [0,1], got {}",
                        c.alpha
                    )));
                }
                if !(c.sigma_small >= 0.0 && c.sigma_large >= c.sigma_small) {
                    return Err(Error::InvalidConfig(format!(
                        "need 0 <= sigma_small <= sigma_large, got {} and {}",
                        c.sigma_small, c.sigma_large
                    )));
                }
            }
            GeneratorConfig::Convolution(c) => {
                if !(c.lambda_max > 0.0 && c.lambda_max <= 1.0) {
                    return Err(Error::InvalidConfig(format!(
                        "lambda_max must be in (0,1], got {}",
                        c.lambda_max
                    )));
                }
            }
        }
        Ok(())
    }

    /// Generate one instance; pure in `(self, seed)`.
    pub fn generate(&self, seed: u64) -> Result<Instance> {
        self.validate()?;
        let inst = match self {
            GeneratorConfig::Rue(c) => gen_rue(c.n, seed)?,
            GeneratorConfig::Rne(c) => gen_rne(c.n, seed, c.mean, c.sd)?,
            GeneratorConfig::ScaleFree(c) => gen_scale_free(c, seed)?,
            GeneratorConfig::Parallel(c) => gen_parallel_perturbed(c, seed)?,
            GeneratorConfig::Convolution(c) => gen_convolution(c, seed)?,
        };
        Ok(inst.with_provenance(Provenance { config: *self, seed }))
    }
}

/// SplitMix64 finalizer; full-avalanche bijection on `u64`.
fn splitmix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Sub-seed for batch element `index`.
///
/// `master ^ (index + 1)·φ64` is injective in `index` for a fixed master
/// (odd multiplier), and the SplitMix64 finalizer is a bijection, so distinct
/// indices always map to distinct sub-seeds.
pub fn sub_seed(master: u64, index: u64) -> u64 {
    const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;
    splitmix64(master ^ index.wrapping_add(1).wrapping_mul(GOLDEN))
}

fn rng_from(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform instance on `[0,1]²`.
pub fn gen_rue(n: usize, seed: u64) -> Result<Instance> {
    GeneratorConfig::Rue(RueConfig { n }).validate()?;
    let mut rng = rng_from(seed);
    let nodes: Vec<Point> = (0..n)
        .map(|_| {
            let x: f64 = rng.random();
            let y: f64 = rng.random();
            Point { x, y }
        })
        .collect();
    Instance::new(format!("rue-n{n}"), nodes, Metric::Euclidean)
}

/// Normal instance; coordinates i.i.d. `N(mean, sd)` per axis, unclipped.
pub fn gen_rne(n: usize, seed: u64, mean: f64, sd: f64) -> Result<Instance> {
    GeneratorConfig::Rne(RneConfig { n, mean, sd }).validate()?;
    let mut rng = rng_from(seed);
    let normal = Normal::new(mean, sd)
        .map_err(|e| Error::InvalidConfig(format!("normal({mean}, {sd}): {e}")))?;
    let nodes: Vec<Point> = (0..n)
        .map(|_| {
            let x = normal.sample(&mut rng);
            let y = normal.sample(&mut rng);
            Point { x, y }
        })
        .collect();
    Instance::new(format!("rne-n{n}"), nodes, Metric::Euclidean)
}

/// Convolution of the uniform square with a per-instance diagonal Gaussian:
/// `λ ~ U(0, λ_max)`, variances `s_i ~ U(0, λ)`, then per node `z = x + y`
/// with `x ~ U([0,1]²)` and `y ~ N(0, diag(s_1, s_2))`. No clipping.
pub fn gen_convolution(cfg: &ConvolutionConfig, seed: u64) -> Result<Instance> {
    GeneratorConfig::Convolution(*cfg).validate()?;
    let mut rng = rng_from(seed);
    let lambda: f64 = rng.random::<f64>() * cfg.lambda_max;
    let s1: f64 = rng.random::<f64>() * lambda;
    let s2: f64 = rng.random::<f64>() * lambda;
    // Σ entries are variances; the per-axis deviate uses their square roots.
    let n1 = Normal::new(0.0, s1.sqrt()).expect("finite sd");
    let n2 = Normal::new(0.0, s2.sqrt()).expect("finite sd");
    let nodes: Vec<Point> = (0..cfg.n)
        .map(|_| {
            let x: f64 = rng.random();
            let y: f64 = rng.random();
            let px = x + n1.sample(&mut rng);
            let py = y + n2.sample(&mut rng);
            Point { x: px, y: py }
        })
        .collect();
    Instance::new(format!("convolution-n{}", cfg.n), nodes, Metric::Euclidean)
}

/// Base layout of the two-line family: `n/2` points on `y = x` and `n/2` on
/// `y = x + gap`, sharing the same equally spaced x grid over `[0, 1]`.
/// Node `i < n/2` sits on the lower line, node `n/2 + i` above it.
fn parallel_base(n: usize, gap: f64) -> Vec<Point> {
    let half = n / 2;
    let mut pts = Vec::with_capacity(n);
    for i in 0..half {
        let t = if half == 1 { 0.5 } else { i as f64 / (half - 1) as f64 };
        pts.push(Point { x: t, y: t });
    }
    for i in 0..half {
        let t = if half == 1 { 0.5 } else { i as f64 / (half - 1) as f64 };
        pts.push(Point { x: t, y: t + gap });
    }
    pts
}

/// The comb tour of the two-line family: along the lower line, across, and
/// back along the upper line.
pub fn comb_order(n: usize) -> Vec<usize> {
    assert!(n >= 4 && n % 2 == 0, "comb tour needs even n >= 4");
    let half = n / 2;
    let mut order: Vec<usize> = (0..half).collect();
    order.extend((half..n).rev());
    order
}

/// Perturbed parallel-line instance with optional rotation.
///
/// Draw order: large-noise subset, per-node noise in index order, rotation
/// angle. Points are rotated about the centroid and min-max rescaled into
/// `[0,1]²` with a single scale factor for both axes (aspect preserved).
pub fn gen_parallel_perturbed(cfg: &ParallelConfig, seed: u64) -> Result<Instance> {
    GeneratorConfig::Parallel(*cfg).validate()?;
    let mut rng = rng_from(seed);
    let n = cfg.n;
    let mut pts = parallel_base(n, cfg.line_gap);

    let n_large = (cfg.alpha * n as f64).floor() as usize;
    let large = rand::seq::index::sample(&mut rng, n, n_large.min(n));
    let mut is_large = vec![false; n];
    for i in large.iter() {
        is_large[i] = true;
    }
    let noise_l = Normal::new(0.0, cfg.sigma_large).expect("finite sd");
    let noise_s = Normal::new(0.0, cfg.sigma_small).expect("finite sd");
    for (i, p) in pts.iter_mut().enumerate() {
        let dist = if is_large[i] { &noise_l } else { &noise_s };
        p.x += dist.sample(&mut rng);
        p.y += dist.sample(&mut rng);
    }

    if cfg.rotate {
        let theta = rng.random::<f64>() * std::f64::consts::PI;
        let (sin, cos) = theta.sin_cos();
        let cx = pts.iter().map(|p| p.x).sum::<f64>() / n as f64;
        let cy = pts.iter().map(|p| p.y).sum::<f64>() / n as f64;
        for p in pts.iter_mut() {
            let dx = p.x - cx;
            let dy = p.y - cy;
            p.x = cx + dx * cos - dy * sin;
            p.y = cy + dx * sin + dy * cos;
        }
    }

    rescale_unit_square(&mut pts);
    Instance::new(format!("parallel-n{n}"), pts, Metric::Euclidean)
}

/// Translate to the origin and scale both axes by the same factor so the
/// points span `[0,1]` on their longer axis.
pub(crate) fn rescale_unit_square(pts: &mut [Point]) {
    let (mut min_x, mut min_y) = (f64::INFINITY, f64::INFINITY);
    let (mut max_x, mut max_y) = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    for p in pts.iter() {
        min_x = min_x.min(p.x);
        min_y = min_y.min(p.y);
        max_x = max_x.max(p.x);
        max_y = max_y.max(p.y);
    }
    let extent = (max_x - min_x).max(max_y - min_y);
    let scale = if extent > 0.0 { 1.0 / extent } else { 1.0 };
    for p in pts.iter_mut() {
        p.x = (p.x - min_x) * scale;
        p.y = (p.y - min_y) * scale;
    }
}

/// Generate `count` instances; element `i` uses `sub_seed(master_seed, i)`.
pub fn gen_batch(cfg: &GeneratorConfig, count: usize, master_seed: u64) -> Result<Vec<Instance>> {
    if count < 1 {
        return Err(Error::InvalidConfig("count must be >= 1".into()));
    }
    cfg.validate()?;
    let width = count.to_string().len().max(5);
    (0..count)
        .into_par_iter()
        .map(|i| {
            let mut inst = cfg.generate(sub_seed(master_seed, i as u64))?;
            inst.set_name(format!("{}-n{}-{:0width$}", cfg.family(), cfg.n(), i));
            Ok(inst)
        })
        .collect()
}

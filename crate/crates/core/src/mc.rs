//! Monte-Carlo and quasi-Monte-Carlo integration on the unit sphere.
//!
//! Three samplers estimate `T(ξ)/S_{n−1}`, the mean of `f(θ) g(ξ·θ)` over the
//! uniform sphere measure:
//!
//! * `Mc1` normalises `n` standard normal deviates (Müller).
//! * `Mc2` draws `(θ, φ)` uniformly in `[0, π] × [0, 2π]` and reweights by
//!   `(π/2) sin θ`, so the weighted mean is consistent (`n = 3` only).
//! * `Mc3` maps the Halton pair in bases 2 and 3 to `(θ, φ)` the same way
//!   (`n = 3` only).
//!
//! Points are produced in blocks of [`BLOCK`]. Block `b` of a pseudo-random
//! stream is ChaCha8 stream `b` under the user seed; for the Halton stream
//! the seed is a start-index offset and point `i` has index `seed + i + 1`.
//! Any block can therefore be generated independently, and the estimators
//! merge per-block moments in block order, so results do not depend on the
//! number of worker threads.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::frame::Direction;
use crate::multiplier::KernelSpec;

/// Points per independently generated block.
pub const BLOCK: u64 = 4096;

/// Smallest sample count [`estimate`] accepts.
pub const MIN_SAMPLES: u64 = 100;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum SamplerKind {
    #[serde(rename = "mc1")]
    Mc1Muller,
    #[serde(rename = "mc2")]
    Mc2Spherical,
    #[serde(rename = "mc3")]
    Mc3Halton,
}

impl SamplerKind {
    pub fn name(self) -> &'static str {
        match self {
            SamplerKind::Mc1Muller => "mc1",
            SamplerKind::Mc2Spherical => "mc2",
            SamplerKind::Mc3Halton => "mc3",
        }
    }

    /// Dimensions the sampler supports.
    pub fn check_dim(self, n: usize) -> Result<()> {
        match self {
            SamplerKind::Mc1Muller if n >= 2 => Ok(()),
            SamplerKind::Mc1Muller => Err(Error::domain(format!("dimension n must be >= 2, got {n}"))),
            _ if n == 3 => Ok(()),
            _ => Err(Error::UnsupportedDimension { kind: self.name(), n }),
        }
    }
}

impl fmt::Display for SamplerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SamplerKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "mc1" | "muller" => Ok(SamplerKind::Mc1Muller),
            "mc2" | "spherical" => Ok(SamplerKind::Mc2Spherical),
            "mc3" | "halton" => Ok(SamplerKind::Mc3Halton),
            other => Err(Error::domain(format!("unknown sampler `{other}` (expected mc1, mc2 or mc3)"))),
        }
    }
}

/// Radical inverse of `i` in base `b`: the digits of `i` mirrored about the
/// radix point.
pub fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let inv = 1.0 / base as f64;
    let mut f = inv;
    let mut r = 0.0;
    while i > 0 {
        r += (i % base) as f64 * f;
        i /= base;
        f *= inv;
    }
    r
}

/// Unit point with polar axis along the first coordinate.
#[inline]
fn polar_point(theta: f64, phi: f64, out: &mut [f64]) -> f64 {
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    out[0] = ct;
    out[1] = st * cp;
    out[2] = st * sp;
    FRAC_PI_2 * st
}

/// A deterministic, replayable sequence of sphere points.
#[derive(Clone, Debug)]
pub struct SampleStream {
    kind: SamplerKind,
    seed: u64,
    n: usize,
    emitted: u64,
    literal: bool,
    rng: ChaCha8Rng,
}

impl SampleStream {
    pub fn new(kind: SamplerKind, seed: u64, n: usize) -> Result<Self> {
        SampleStream::at_block(kind, seed, n, 0)
    }

    /// The stream positioned at the first point of `block`.
    pub fn at_block(kind: SamplerKind, seed: u64, n: usize, block: u64) -> Result<Self> {
        kind.check_dim(n)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(block);
        Ok(SampleStream { kind, seed, n, emitted: block * BLOCK, literal: false, rng })
    }

    /// Drops the `sin θ` weights of the angular samplers, reproducing the
    /// biased estimator of uniform `(θ, φ)` sampling.
    pub fn literal(mut self, on: bool) -> Self {
        self.literal = on;
        self
    }

    pub fn kind(&self) -> SamplerKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn emitted(&self) -> u64 {
        self.emitted
    }

    fn enter_block_if_needed(&mut self) {
        if self.emitted % BLOCK == 0 && self.kind != SamplerKind::Mc3Halton {
            self.rng = ChaCha8Rng::seed_from_u64(self.seed);
            self.rng.set_stream(self.emitted / BLOCK);
        }
    }

    /// Writes the next point into `out` and returns its weight.
    pub fn next_into(&mut self, out: &mut [f64]) -> f64 {
        self.enter_block_if_needed();
        let w = match self.kind {
            SamplerKind::Mc1Muller => {
                loop {
                    let mut s = 0.0;
                    for x in out.iter_mut() {
                        *x = self.rng.sample(StandardNormal);
                        s += *x * *x;
                    }
                    if s > 0.0 {
                        let inv = 1.0 / s.sqrt();
                        out.iter_mut().for_each(|x| *x *= inv);
                        break;
                    }
                }
                1.0
            }
            SamplerKind::Mc2Spherical => {
                let u: f64 = self.rng.random();
                let v: f64 = self.rng.random();
                polar_point(PI * u, 2.0 * PI * v, out)
            }
            SamplerKind::Mc3Halton => {
                let i = self.seed.wrapping_add(self.emitted).wrapping_add(1);
                polar_point(PI * radical_inverse(i, 2), 2.0 * PI * radical_inverse(i, 3), out)
            }
        };
        self.emitted += 1;
        if self.literal {
            1.0
        } else {
            w
        }
    }
}

/// Next Müller point of an `Mc1` stream.
pub fn muller_point(stream: &mut SampleStream) -> Result<Vec<f64>> {
    if stream.kind != SamplerKind::Mc1Muller {
        return Err(Error::domain(format!("muller_point needs an mc1 stream, got {}", stream.kind)));
    }
    let mut p = vec![0.0; stream.n];
    stream.next_into(&mut p);
    Ok(p)
}

/// Next weighted point of an `Mc2` stream.
pub fn spherical_point(stream: &mut SampleStream) -> Result<(Vec<f64>, f64)> {
    if stream.kind != SamplerKind::Mc2Spherical {
        return Err(Error::domain(format!("spherical_point needs an mc2 stream, got {}", stream.kind)));
    }
    let mut p = vec![0.0; 3];
    let w = stream.next_into(&mut p);
    Ok((p, w))
}

/// Next weighted point of an `Mc3` stream.
pub fn halton_point(stream: &mut SampleStream) -> Result<(Vec<f64>, f64)> {
    if stream.kind != SamplerKind::Mc3Halton {
        return Err(Error::domain(format!("halton_point needs an mc3 stream, got {}", stream.kind)));
    }
    let mut p = vec![0.0; 3];
    let w = stream.next_into(&mut p);
    Ok((p, w))
}

/// Streaming mean and variance (Welford), mergeable across partitions.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Moments {
    count: u64,
    mean: f64,
    m2: f64,
}

impl Moments {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let d = x - self.mean;
        self.mean += d / self.count as f64;
        self.m2 += d * (x - self.mean);
    }

    pub fn merge(&mut self, other: &Moments) {
        if other.count == 0 {
            return;
        }
        if self.count == 0 {
            *self = *other;
            return;
        }
        let n = (self.count + other.count) as f64;
        let d = other.mean - self.mean;
        self.mean += d * other.count as f64 / n;
        self.m2 += other.m2 + d * d * self.count as f64 * other.count as f64 / n;
        self.count += other.count;
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn variance(&self) -> f64 {
        if self.count < 2 {
            0.0
        } else {
            self.m2 / (self.count - 1) as f64
        }
    }

    pub fn std_error(&self) -> f64 {
        if self.count == 0 {
            0.0
        } else {
            (self.variance() / self.count as f64).sqrt()
        }
    }

    pub fn to_estimate(&self) -> McEstimate {
        McEstimate { mean: self.mean, std_error: self.std_error(), n_samples: self.count }
    }
}

/// Estimate of `T(ξ)/S_{n−1}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct McEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub n_samples: u64,
}

/// Knobs for [`estimate_with`].
#[derive(Clone, Copy, Debug)]
pub struct McOptions {
    /// Unweighted angular estimator (biased; for demonstration).
    pub literal: bool,
    /// Worker threads; `0` uses the available parallelism.
    pub threads: usize,
}

impl Default for McOptions {
    fn default() -> Self {
        McOptions { literal: false, threads: 0 }
    }
}

fn worker_count(requested: usize, blocks: u64) -> usize {
    let avail = if requested == 0 {
        std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
    } else {
        requested
    };
    avail.clamp(1, blocks.max(1) as usize)
}

fn check_specs(specs: &[KernelSpec], xi: &Direction, kind: SamplerKind, n_samples: u64) -> Result<usize> {
    let n = xi.dim();
    kind.check_dim(n)?;
    if n_samples < MIN_SAMPLES {
        return Err(Error::domain(format!("need at least {MIN_SAMPLES} samples, got {n_samples}")));
    }
    if let Some(bad) = specs.iter().find(|s| s.n != n) {
        return Err(Error::domain(format!("spec has n = {} but direction has dimension {n}", bad.n)));
    }
    Ok(n)
}

/// Runs `f` over every point and merges per-block moments in block order.
fn run_blocks(
    kind: SamplerKind,
    seed: u64,
    n: usize,
    n_samples: u64,
    opts: McOptions,
    outputs: usize,
    f: &(dyn Fn(&[f64], f64, &mut [Moments]) + Sync),
) -> Vec<Moments> {
    let blocks = n_samples.div_ceil(BLOCK);
    let workers = worker_count(opts.threads, blocks) as u64;
    let per_block: Vec<Vec<Moments>> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                scope.spawn(move || {
                    let mut done = Vec::new();
                    let mut point = vec![0.0; n];
                    let mut b = w;
                    while b < blocks {
                        let mut s = SampleStream::at_block(kind, seed, n, b).expect("dimension checked").literal(opts.literal);
                        let len = BLOCK.min(n_samples - b * BLOCK);
                        let mut m = vec![Moments::new(); outputs];
                        for _ in 0..len {
                            let weight = s.next_into(&mut point);
                            f(&point, weight, &mut m);
                        }
                        done.push((b, m));
                        b += workers;
                    }
                    done
                })
            })
            .collect();
        let mut all: Vec<(u64, Vec<Moments>)> = handles.into_iter().flat_map(|h| h.join().expect("worker panicked")).collect();
        all.sort_by_key(|(b, _)| *b);
        all.into_iter().map(|(_, m)| m).collect()
    });
    let mut total = vec![Moments::new(); outputs];
    for m in &per_block {
        for (t, p) in total.iter_mut().zip(m) {
            t.merge(p);
        }
    }
    total
}

/// Estimates `T(ξ)/S_{n−1}` for one spec.
pub fn estimate(spec: &KernelSpec, xi: &Direction, kind: SamplerKind, n_samples: u64, seed: u64) -> Result<McEstimate> {
    estimate_with(spec, xi, kind, n_samples, seed, McOptions::default())
}

pub fn estimate_with(
    spec: &KernelSpec,
    xi: &Direction,
    kind: SamplerKind,
    n_samples: u64,
    seed: u64,
    opts: McOptions,
) -> Result<McEstimate> {
    Ok(estimate_many_with(std::slice::from_ref(spec), xi, kind, n_samples, seed, opts)?[0])
}

/// Estimates several specs from one shared point set.
pub fn estimate_many(
    specs: &[KernelSpec],
    xi: &Direction,
    kind: SamplerKind,
    n_samples: u64,
    seed: u64,
) -> Result<Vec<McEstimate>> {
    estimate_many_with(specs, xi, kind, n_samples, seed, McOptions::default())
}

pub fn estimate_many_with(
    specs: &[KernelSpec],
    xi: &Direction,
    kind: SamplerKind,
    n_samples: u64,
    seed: u64,
    opts: McOptions,
) -> Result<Vec<McEstimate>> {
    let n = check_specs(specs, xi, kind, n_samples)?;
    let eval = |p: &[f64], w: f64, m: &mut [Moments]| {
        let d = xi.dot(p);
        for (spec, acc) in specs.iter().zip(m.iter_mut()) {
            acc.push(w * spec.integrand(p, d));
        }
    };
    let moments = run_blocks(kind, seed, n, n_samples, opts, specs.len(), &eval);
    Ok(moments.iter().map(Moments::to_estimate).collect())
}

/// Weighted mean of an arbitrary function over the sphere; used to check the
/// sampler normalisation.
pub fn estimate_fn<F>(f: F, n: usize, kind: SamplerKind, n_samples: u64, seed: u64, opts: McOptions) -> Result<McEstimate>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    kind.check_dim(n)?;
    if n_samples < MIN_SAMPLES {
        return Err(Error::domain(format!("need at least {MIN_SAMPLES} samples, got {n_samples}")));
    }
    let eval = |p: &[f64], w: f64, m: &mut [Moments]| m[0].push(w * f(p));
    Ok(run_blocks(kind, seed, n, n_samples, opts, 1, &eval)[0].to_estimate())
}

/// One row of a convergence table.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub n_samples: u64,
    pub mean_abs_error: f64,
    pub mean_std_error: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvergenceTable {
    pub kind: SamplerKind,
    pub exact: f64,
    pub rows: Vec<ConvergenceRow>,
    /// Least-squares slope of `ln(error)` against `ln N`.
    pub slope: f64,
}

/// Least-squares slope of `y` against `x`.
pub fn loglog_slope(points: &[(f64, f64)]) -> f64 {
    let m = points.len() as f64;
    let lx: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ly: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let mx = lx.iter().sum::<f64>() / m;
    let my = ly.iter().sum::<f64>() / m;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Mean absolute error against `exact` (normalised by `S_{n−1}`) for each
/// sample count, averaged over `repeats` seeds `seed, seed+1, …`.
pub fn convergence_study(
    spec: &KernelSpec,
    xi: &Direction,
    kind: SamplerKind,
    exact: f64,
    n_list: &[u64],
    repeats: u64,
    seed: u64,
) -> Result<ConvergenceTable> {
    if n_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::domain("sample counts must be strictly ascending"));
    }
    if repeats == 0 {
        return Err(Error::domain("need at least one repeat"));
    }
    let mut rows = Vec::with_capacity(n_list.len());
    for &n_samples in n_list {
        let mut err = 0.0;
        let mut se = 0.0;
        for r in 0..repeats {
            let e = estimate(spec, xi, kind, n_samples, seed.wrapping_add(r))?;
            err += (e.mean - exact).abs();
            se += e.std_error;
        }
        rows.push(ConvergenceRow {
            n_samples,
            mean_abs_error: err / repeats as f64,
            mean_std_error: se / repeats as f64,
        });
    }
    let pts: Vec<(f64, f64)> = rows.iter().map(|r| (r.n_samples as f64, r.mean_abs_error)).collect();
    let slope = if pts.len() >= 2 { loglog_slope(&pts) } else { f64::NAN };
    Ok(ConvergenceTable { kind, exact, rows, slope })
}

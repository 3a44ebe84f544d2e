//! The two-dimensional case: steered polyadic multipliers applied to images.
//!
//! For `f(θ) = θ₁^{t1} θ₂^{t2}` rotated by `θ₀`, the multiplier at the
//! frequency direction `ν` is
//!
//! ```text
//! M(ν) = Σ_{p ≤ t1} Σ_{q ≤ t2} cos(ν−θ₀)^{p+t2−q} sin(ν−θ₀)^{q+t1−p} C(t1,p) C(t2,q) B_pq
//! B_pq = (−1)^{t1−p} ∫₀^{2π} cos^{p+q}α sin^{t−p−q}α g(cos α) dα
//! ```
//!
//! with `g = −ln|·|` for even `t = t1 + t2` and `g = sgn` for odd `t`. An
//! image is filtered by multiplying its discrete Fourier transform with `M`
//! sampled on the frequency lattice (periodic boundary conditions).

use std::f64::consts::{FRAC_PI_2, PI};
use std::fs;
use std::io::Write as _;
use std::path::Path;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::multiplier::Kernel;
use crate::quadrature;
use crate::special::{binomial, g_a};

/// Smallest grid side [`build_multiplier_grid`] accepts.
pub const MIN_GRID: usize = 8;

/// `f(θ) = θ₁^{t1} θ₂^{t2}` steered by `theta0` radians.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Kernel2dSpec {
    pub t1: usize,
    pub t2: usize,
    pub theta0: f64,
}

impl Kernel2dSpec {
    /// Rejects kernels with a non-zero mean on the circle (both powers even).
    pub fn new(t1: usize, t2: usize, theta0: f64) -> Result<Self> {
        if t1 % 2 == 0 && t2 % 2 == 0 {
            return Err(Error::InadmissibleKernel(format!("θ₁^{t1} θ₂^{t2}")));
        }
        if !theta0.is_finite() {
            return Err(Error::domain("theta0 must be finite"));
        }
        Ok(Kernel2dSpec { t1, t2, theta0 })
    }

    pub fn order(&self) -> usize {
        self.t1 + self.t2
    }

    pub fn kernel(&self) -> Kernel {
        Kernel::for_order(self.order())
    }
}

fn sign(k: usize) -> f64 {
    if k % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// `B_pq` for the kernel matching the parity of `t1 + t2`.
pub fn bpq(p: usize, q: usize, t1: usize, t2: usize) -> Result<f64> {
    if p > t1 || q > t2 {
        return Err(Error::domain(format!("B_pq needs p <= t1 and q <= t2 (p = {p}, q = {q}, t1 = {t1}, t2 = {t2})")));
    }
    let t = t1 + t2;
    let a = p + q;
    if (t - a) % 2 == 1 {
        return Ok(0.0);
    }
    let kernel = Kernel::for_order(t);
    let g = match g_a(kernel, a, t, 2) {
        Ok(v) => 2.0 * v,
        Err(_) => bpq_quadrature_integral(a, t, kernel),
    };
    Ok(sign(t1 - p) * g)
}

/// `∫₀^{2π} cos^a α sin^{t−a} α g(cos α) dα` by quadrature.
pub fn bpq_quadrature_integral(a: usize, t: usize, kernel: Kernel) -> f64 {
    let f = |x: f64| x.cos().powi(a as i32) * x.sin().powi((t - a) as i32) * kernel.eval(x.cos());
    quadrature::integrate(f, 0.0, 2.0 * PI, &[FRAC_PI_2, 3.0 * FRAC_PI_2], 1e-13)
}

/// Table of every `B_pq` for a spec, row `p`, column `q`.
fn bpq_table(spec: &Kernel2dSpec) -> Vec<Vec<f64>> {
    (0..=spec.t1)
        .map(|p| (0..=spec.t2).map(|q| bpq(p, q, spec.t1, spec.t2).expect("indices in range")).collect())
        .collect()
}

fn multiplier_with_table(spec: &Kernel2dSpec, table: &[Vec<f64>], nu: f64) -> f64 {
    let (s, c) = (nu - spec.theta0).sin_cos();
    let (t1, t2) = (spec.t1, spec.t2);
    let mut acc = 0.0;
    for (p, row) in table.iter().enumerate() {
        for (q, &b) in row.iter().enumerate() {
            if b == 0.0 {
                continue;
            }
            let w = (binomial(t1 as u64, p as u64) * binomial(t2 as u64, q as u64)) as f64;
            acc += c.powi((p + t2 - q) as i32) * s.powi((q + t1 - p) as i32) * w * b;
        }
    }
    acc
}

/// `M(ν)`: the kernel component along the frequency direction `ν`.
pub fn multiplier_2d(spec: &Kernel2dSpec, nu: f64) -> f64 {
    multiplier_with_table(spec, &bpq_table(spec), nu)
}

/// Complex multiplier value `Ŵ_f` at direction `ν`: `M(ν)` for the `−ln`
/// kernel, `−i(π/2)M(ν)` for `sgn`.
pub fn multiplier_value(spec: &Kernel2dSpec, m: f64) -> Complex64 {
    match spec.kernel() {
        Kernel::Neglog => Complex64::new(m, 0.0),
        Kernel::Sgn => Complex64::new(0.0, -FRAC_PI_2 * m),
    }
}

/// Real-valued image, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct ImageBuffer {
    pub width: usize,
    pub height: usize,
    pub samples: Vec<f64>,
}

impl ImageBuffer {
    pub fn new(width: usize, height: usize, samples: Vec<f64>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::Image(format!("image dimensions must be positive ({width}x{height})")));
        }
        if samples.len() != width * height {
            return Err(Error::Image(format!("{} samples for a {width}x{height} image", samples.len())));
        }
        if samples.iter().any(|v| !v.is_finite()) {
            return Err(Error::Image("non-finite sample".into()));
        }
        Ok(ImageBuffer { width, height, samples })
    }

    pub fn zeros(width: usize, height: usize) -> Self {
        ImageBuffer { width, height, samples: vec![0.0; width * height] }
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.samples[y * self.width + x]
    }

    /// Bilinear interpolation with pixel centres at integer coordinates;
    /// coordinates are clamped to the image.
    pub fn bilinear(&self, x: f64, y: f64) -> f64 {
        let x = x.clamp(0.0, (self.width - 1) as f64);
        let y = y.clamp(0.0, (self.height - 1) as f64);
        let (x0, y0) = (x.floor() as usize, y.floor() as usize);
        let (x1, y1) = ((x0 + 1).min(self.width - 1), (y0 + 1).min(self.height - 1));
        let (fx, fy) = (x - x0 as f64, y - y0 as f64);
        let top = self.get(x0, y0) * (1.0 - fx) + self.get(x1, y0) * fx;
        let bottom = self.get(x0, y1) * (1.0 - fx) + self.get(x1, y1) * fx;
        top * (1.0 - fy) + bottom * fy
    }

    pub fn max_abs(&self) -> f64 {
        self.samples.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Rotation by a quarter turn counter-clockwise in the displayed image
    /// (x right, y down): pixel `(x, y)` moves to `(y, W−1−x)`.
    pub fn rotate90(&self) -> ImageBuffer {
        let (w, h) = (self.width, self.height);
        let mut out = ImageBuffer::zeros(h, w);
        for y in 0..h {
            for x in 0..w {
                out.samples[(w - 1 - x) * h + y] = self.get(x, y);
            }
        }
        out
    }
}

/// Multiplier sampled on the discrete frequency lattice, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct MultiplierGrid {
    pub width: usize,
    pub height: usize,
    pub values: Vec<Complex64>,
}

impl MultiplierGrid {
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.values[j * self.width + i]
    }
}

/// Signed frequency of bin `i` on an axis of length `len`; the Nyquist bin of
/// an even length is positive.
#[inline]
pub fn signed_frequency(i: usize, len: usize) -> i64 {
    if i <= len / 2 {
        i as i64
    } else {
        i as i64 - len as i64
    }
}

/// Samples the multiplier at `ν = atan2(k₂, k₁)` for every non-zero bin, `k₁`
/// along columns and `k₂` along rows; the zero bin is 0.
pub fn build_multiplier_grid(spec: &Kernel2dSpec, width: usize, height: usize) -> Result<MultiplierGrid> {
    if width < MIN_GRID || height < MIN_GRID {
        return Err(Error::Image(format!("grid must be at least {MIN_GRID}x{MIN_GRID}, got {width}x{height}")));
    }
    let table = bpq_table(spec);
    let mut values = Vec::with_capacity(width * height);
    for j in 0..height {
        let k2 = signed_frequency(j, height) as f64;
        for i in 0..width {
            let k1 = signed_frequency(i, width) as f64;
            if k1 == 0.0 && k2 == 0.0 {
                values.push(Complex64::new(0.0, 0.0));
            } else {
                values.push(multiplier_value(spec, multiplier_with_table(spec, &table, k2.atan2(k1))));
            }
        }
    }
    Ok(MultiplierGrid { width, height, values })
}

fn fft2(data: &mut [Complex64], width: usize, height: usize, inverse: bool) {
    let mut planner = FftPlanner::new();
    let (row_fft, col_fft) = if inverse {
        (planner.plan_fft_inverse(width), planner.plan_fft_inverse(height))
    } else {
        (planner.plan_fft_forward(width), planner.plan_fft_forward(height))
    };
    for row in data.chunks_exact_mut(width) {
        row_fft.process(row);
    }
    let mut col = vec![Complex64::new(0.0, 0.0); height];
    for i in 0..width {
        for j in 0..height {
            col[j] = data[j * width + i];
        }
        col_fft.process(&mut col);
        for j in 0..height {
            data[j * width + i] = col[j];
        }
    }
    if inverse {
        let s = 1.0 / (width * height) as f64;
        data.iter_mut().for_each(|v| *v *= s);
    }
}

/// Forward then inverse transform; returns the real part.
pub fn fft_round_trip(u: &ImageBuffer) -> ImageBuffer {
    let mut data: Vec<Complex64> = u.samples.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    fft2(&mut data, u.width, u.height, false);
    fft2(&mut data, u.width, u.height, true);
    ImageBuffer { width: u.width, height: u.height, samples: data.iter().map(|c| c.re).collect() }
}

/// Applies a precomputed grid; the grid must match the image size.
pub fn apply_grid(u: &ImageBuffer, grid: &MultiplierGrid) -> Result<ImageBuffer> {
    if grid.width != u.width || grid.height != u.height {
        return Err(Error::Image(format!(
            "grid {}x{} does not match image {}x{}",
            grid.width, grid.height, u.width, u.height
        )));
    }
    if u.samples.iter().any(|v| !v.is_finite()) {
        return Err(Error::Image("non-finite sample".into()));
    }
    let mut data: Vec<Complex64> = u.samples.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    fft2(&mut data, u.width, u.height, false);
    data.iter_mut().zip(&grid.values).for_each(|(d, m)| *d *= m);
    fft2(&mut data, u.width, u.height, true);
    Ok(ImageBuffer { width: u.width, height: u.height, samples: data.iter().map(|c| c.re).collect() })
}

/// `F⁻¹[Ŵ_f · F u]`, real part.
pub fn filter_image(u: &ImageBuffer, spec: &Kernel2dSpec) -> Result<ImageBuffer> {
    apply_grid(u, &build_multiplier_grid(spec, u.width, u.height)?)
}

/// A filled rectangle of a synthetic scene.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Rectangle {
    pub center: (f64, f64),
    /// Full side lengths along the rectangle's own axes.
    pub size: (f64, f64),
    /// Counter-clockwise inclination in radians (x right, y up).
    pub inclination: f64,
    pub intensity: f64,
}

impl Rectangle {
    /// Corner points in image coordinates (x right, y down), in outline order.
    pub fn corners(&self) -> [(f64, f64); 4] {
        let (s, c) = self.inclination.sin_cos();
        let (hx, hy) = (self.size.0 / 2.0, self.size.1 / 2.0);
        [(-hx, -hy), (hx, -hy), (hx, hy), (-hx, hy)].map(|(u, v)| {
            // rotation in the y-up frame, then flip y
            (self.center.0 + c * u - s * v, self.center.1 - (s * u + c * v))
        })
    }

    fn contains(&self, x: f64, y: f64) -> bool {
        let (s, c) = self.inclination.sin_cos();
        let (dx, dy) = (x - self.center.0, -(y - self.center.1));
        let u = c * dx + s * dy;
        let v = -s * dx + c * dy;
        u.abs() <= self.size.0 / 2.0 && v.abs() <= self.size.1 / 2.0
    }
}

/// Demonstration scene on a `size × size` grid: two perpendicular bars
/// inclined at 60° and −30° crossing at the centre, so all eight outer
/// corners stay visible.
pub fn two_rectangle_scene(size: usize) -> Vec<Rectangle> {
    let s = size as f64;
    let c = (s / 2.0 - 0.5, s / 2.0 - 0.5);
    vec![
        Rectangle { center: c, size: (0.60 * s, 0.14 * s), inclination: PI / 3.0, intensity: 1.0 },
        Rectangle { center: c, size: (0.50 * s, 0.16 * s), inclination: -PI / 6.0, intensity: 0.6 },
    ]
}

/// Sub-pixel offsets of the 4×4 supersampling pattern.
const SUPERSAMPLE: [f64; 4] = [-0.375, -0.125, 0.125, 0.375];

/// Paints the rectangles in order (later ones cover earlier ones) with 4×4
/// supersampling; pixel centres sit at integer coordinates.
pub fn synthesize_rectangles(width: usize, height: usize, rectangles: &[Rectangle]) -> Result<ImageBuffer> {
    if width == 0 || height == 0 {
        return Err(Error::Image("scene dimensions must be positive".into()));
    }
    for r in rectangles {
        let inside = r.corners().iter().all(|&(x, y)| x >= -0.5 && y >= -0.5 && x <= width as f64 - 0.5 && y <= height as f64 - 0.5);
        if !inside {
            return Err(Error::Image(format!("rectangle centred at {:?} leaves the {width}x{height} frame", r.center)));
        }
    }
    let mut img = ImageBuffer::zeros(width, height);
    if rectangles.is_empty() {
        return Ok(img);
    }
    for y in 0..height {
        for x in 0..width {
            let mut acc = 0.0;
            for dy in SUPERSAMPLE {
                for dx in SUPERSAMPLE {
                    let (px, py) = (x as f64 + dx, y as f64 + dy);
                    let v = rectangles.iter().rev().find(|r| r.contains(px, py)).map_or(0.0, |r| r.intensity);
                    acc += v;
                }
            }
            img.samples[y * width + x] = acc / 16.0;
        }
    }
    Ok(img)
}

/// 8-neighbourhood local maxima of `|u|` above `rel_threshold × max|u|`.
pub fn local_extrema(u: &ImageBuffer, rel_threshold: f64) -> Vec<(usize, usize)> {
    let threshold = rel_threshold * u.max_abs();
    let mut out = Vec::new();
    if u.width < 3 || u.height < 3 {
        return out;
    }
    for y in 1..u.height - 1 {
        for x in 1..u.width - 1 {
            let v = u.get(x, y).abs();
            if v <= threshold {
                continue;
            }
            let is_max = (-1i64..=1).all(|dy| {
                (-1i64..=1).all(|dx| {
                    (dx == 0 && dy == 0) || u.get((x as i64 + dx) as usize, (y as i64 + dy) as usize).abs() <= v
                })
            });
            if is_max {
                out.push((x, y));
            }
        }
    }
    out
}

/// Relative threshold of the extremum detector.
pub const EXTREMUM_THRESHOLD: f64 = 0.1;

/// Fractions along each edge where the edge response is sampled.
pub const EDGE_FRACTIONS: [f64; 11] = [0.25, 0.30, 0.35, 0.40, 0.45, 0.50, 0.55, 0.60, 0.65, 0.70, 0.75];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CornerMatch {
    pub corner: (f64, f64),
    /// Distance to the nearest detected extremum, `INFINITY` if none.
    pub distance: f64,
    /// `|filtered|` at that extremum.
    pub response: f64,
    /// `response` over the median edge response.
    pub ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CornerReport {
    pub extrema: usize,
    pub median_edge_response: f64,
    pub corners: Vec<CornerMatch>,
}

impl CornerReport {
    pub fn max_distance(&self) -> f64 {
        self.corners.iter().map(|c| c.distance).fold(0.0, f64::max)
    }

    pub fn min_ratio(&self) -> f64 {
        self.corners.iter().map(|c| c.ratio).fold(f64::INFINITY, f64::min)
    }
}

/// Matches each outline vertex (a ground-truth corner) to the nearest local
/// extremum of `|filtered|` and compares its response with the median of
/// `|filtered|` sampled along the outline edges.
pub fn corner_response_report(filtered: &ImageBuffer, outlines: &[Vec<(f64, f64)>]) -> CornerReport {
    let extrema = local_extrema(filtered, EXTREMUM_THRESHOLD);
    let mut edge: Vec<f64> = Vec::new();
    for poly in outlines {
        for k in 0..poly.len() {
            let (a, b) = (poly[k], poly[(k + 1) % poly.len()]);
            for f in EDGE_FRACTIONS {
                edge.push(filtered.bilinear(a.0 + f * (b.0 - a.0), a.1 + f * (b.1 - a.1)).abs());
            }
        }
    }
    edge.sort_by(f64::total_cmp);
    let median = if edge.is_empty() {
        0.0
    } else if edge.len() % 2 == 1 {
        edge[edge.len() / 2]
    } else {
        0.5 * (edge[edge.len() / 2 - 1] + edge[edge.len() / 2])
    };
    let corners = outlines
        .iter()
        .flatten()
        .map(|&corner| {
            let best = extrema
                .iter()
                .map(|&(x, y)| ((x as f64 - corner.0).hypot(y as f64 - corner.1), filtered.get(x, y).abs()))
                .min_by(|a, b| a.0.total_cmp(&b.0));
            let (distance, response) = best.unwrap_or((f64::INFINITY, 0.0));
            let ratio = if median > 0.0 { response / median } else { f64::INFINITY };
            CornerMatch { corner, distance, response, ratio }
        })
        .collect();
    CornerReport { extrema: extrema.len(), median_edge_response: median, corners }
}

/// Affine map applied when storing a real image as integer samples:
/// `stored = (value − offset) · scale`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Rescale {
    pub offset: f64,
    pub scale: f64,
    pub maxval: u16,
}

impl Rescale {
    pub fn invert(&self, stored: f64) -> f64 {
        stored / self.scale + self.offset
    }
}

fn parse_header(bytes: &[u8]) -> Result<(usize, usize, u16, usize)> {
    let mut fields = Vec::new();
    let mut pos = 0;
    while fields.len() < 4 {
        while pos < bytes.len() && (bytes[pos].is_ascii_whitespace() || bytes[pos] == b'#') {
            if bytes[pos] == b'#' {
                while pos < bytes.len() && bytes[pos] != b'\n' {
                    pos += 1;
                }
            } else {
                pos += 1;
            }
        }
        let start = pos;
        while pos < bytes.len() && !bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        if start == pos {
            return Err(Error::Image("truncated PGM header".into()));
        }
        fields.push(String::from_utf8_lossy(&bytes[start..pos]).into_owned());
    }
    if fields[0] != "P5" {
        return Err(Error::Image(format!("expected binary PGM (P5), found {}", fields[0])));
    }
    let num = |s: &str| s.parse::<usize>().map_err(|_| Error::Image(format!("bad PGM header field `{s}`")));
    let (w, h, maxval) = (num(&fields[1])?, num(&fields[2])?, num(&fields[3])?);
    if maxval == 0 || maxval > 65535 {
        return Err(Error::Image(format!("PGM maxval {maxval} outside 1..65535")));
    }
    // single whitespace byte ends the header
    Ok((w, h, maxval as u16, pos + 1))
}

/// Reads a binary PGM (8- or 16-bit, big-endian); samples keep their raw
/// integer values.
pub fn read_pgm(path: &Path) -> Result<ImageBuffer> {
    let bytes = fs::read(path)?;
    let (w, h, maxval, start) = parse_header(&bytes)?;
    let depth = if maxval > 255 { 2 } else { 1 };
    let body = bytes.get(start..).unwrap_or(&[]);
    if body.len() < w * h * depth {
        return Err(Error::Image(format!("PGM body holds {} bytes, need {}", body.len(), w * h * depth)));
    }
    let samples = if depth == 1 {
        body[..w * h].iter().map(|&b| b as f64).collect()
    } else {
        body[..2 * w * h].chunks_exact(2).map(|c| u16::from_be_bytes([c[0], c[1]]) as f64).collect()
    };
    ImageBuffer::new(w, h, samples)
}

/// Writes `u` as a binary PGM, mapping `[min, max]` affinely onto
/// `[0, maxval]`; returns the map.
pub fn write_pgm(path: &Path, u: &ImageBuffer, sixteen_bit: bool) -> Result<Rescale> {
    let maxval: u16 = if sixteen_bit { 65535 } else { 255 };
    let lo = u.samples.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = u.samples.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let scale = if hi > lo { maxval as f64 / (hi - lo) } else { 1.0 };
    let rescale = Rescale { offset: lo, scale, maxval };
    let mut out = format!("P5\n{} {}\n{}\n", u.width, u.height, maxval).into_bytes();
    for &v in &u.samples {
        let s = ((v - lo) * scale).round().clamp(0.0, maxval as f64) as u16;
        if sixteen_bit {
            out.extend_from_slice(&s.to_be_bytes());
        } else {
            out.push(s as u8);
        }
    }
    fs::File::create(path)?.write_all(&out)?;
    Ok(rescale)
}

/// Sidecar path: `<path>.json`.
pub fn sidecar_path(path: &Path) -> std::path::PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".json");
    s.into()
}

/// [`write_pgm`] plus a JSON sidecar holding the rescale parameters.
pub fn write_pgm_with_sidecar(path: &Path, u: &ImageBuffer, sixteen_bit: bool) -> Result<Rescale> {
    let rescale = write_pgm(path, u, sixteen_bit)?;
    fs::write(sidecar_path(path), serde_json::to_string_pretty(&rescale)?)?;
    Ok(rescale)
}

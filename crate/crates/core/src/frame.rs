//! The `ξ`-adapted orthonormal frame.
//!
//! Schmidt orthonormalisation of `(ξ, i₁, i₂, …, i_{n−1})` gives a basis
//! whose first vector is `ξ`. With `B(j) = √(ξ_{j+1}² + … + ξ_n²)` (so that
//! `B(0) = ‖ξ‖ = 1`), column `k ≥ 2` of the change-of-basis matrix `R` is
//!
//! ```text
//! R(k−1, k) =  B(k−1)/B(k−2)
//! R(j, k)   = −ξ_{k−1} ξ_j / (B(k−1) B(k−2))     for j ≥ k
//! R(j, k)   =  0                                   for j < k−1
//! ```
//!
//! Indices are 1-based in the formulas above. `R(l, i)` is the `l`-th
//! canonical coordinate of the `i`-th new basis vector, so a tensor
//! transforms as `T^{l m …} = R(l, i) R(m, j) ⋯ T'^{i j …}`.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::multiplier::{tprime_component, ComponentValue, KernelSpec, MultiplicityMap};
use crate::special::sphere_surface;
use crate::sum::NeumaierSum;

/// Smallest `B(j)` the unpivoted recurrence accepts.
pub const PIVOT_THRESHOLD: f64 = 1e-10;

/// Default cap on `nᵗ` for [`rotate_component_oracle`].
pub const DEFAULT_ROTATION_CAP: usize = 1 << 20;

/// A unit vector of `ℝⁿ`, `n ≥ 2`.
#[derive(Clone, Debug, PartialEq)]
pub struct Direction {
    coords: Vec<f64>,
}

impl Direction {
    /// Normalises any finite, non-zero vector.
    ///
    /// Scaling the input by a power of two yields a bit-identical direction.
    pub fn new(v: &[f64]) -> Result<Self> {
        if v.len() < 2 {
            return Err(Error::domain(format!("direction needs n >= 2 coordinates, got {}", v.len())));
        }
        if v.iter().any(|x| !x.is_finite()) {
            return Err(Error::domain("direction has non-finite coordinates"));
        }
        let scale = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        if scale == 0.0 {
            return Err(Error::domain("direction must be non-zero"));
        }
        let w: Vec<f64> = v.iter().map(|x| x / scale).collect();
        let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        Ok(Direction { coords: w.iter().map(|x| x / norm).collect() })
    }

    /// Accepts `v` as is if it has unit norm within `1e−12`.
    pub fn from_unit(v: &[f64]) -> Result<Self> {
        if v.len() < 2 {
            return Err(Error::domain(format!("direction needs n >= 2 coordinates, got {}", v.len())));
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if !norm.is_finite() || (norm - 1.0).abs() > 1e-12 {
            return Err(Error::domain(format!("direction is not unit (norm = {norm})")));
        }
        Ok(Direction { coords: v.to_vec() })
    }

    /// Canonical basis vector `e_i` (1-based).
    pub fn axis(n: usize, i: usize) -> Result<Self> {
        if i == 0 || i > n {
            return Err(Error::domain(format!("axis {i} outside [1..{n}]")));
        }
        let mut v = vec![0.0; n];
        v[i - 1] = 1.0;
        Direction::from_unit(&v)
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    #[inline]
    pub fn dot(&self, theta: &[f64]) -> f64 {
        self.coords.iter().zip(theta).map(|(a, b)| a * b).sum()
    }
}

/// Orthonormal change-of-basis matrix; column `k` is the `k`-th new basis
/// vector in canonical coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct BasisMatrix {
    n: usize,
    /// column-major
    entries: Vec<f64>,
    pivoted: bool,
    order: Vec<usize>,
}

impl BasisMatrix {
    pub fn dim(&self) -> usize {
        self.n
    }

    /// `R(row, col)`, 0-based.
    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.entries[col * self.n + row]
    }

    pub fn column(&self, col: usize) -> &[f64] {
        &self.entries[col * self.n..(col + 1) * self.n]
    }

    pub fn row(&self, row: usize) -> Vec<f64> {
        (0..self.n).map(|c| self.get(row, c)).collect()
    }

    /// Whether the coordinates had to be permuted because some `B(j)`
    /// underflowed; the triangular pattern then holds in permuted order.
    pub fn pivoted(&self) -> bool {
        self.pivoted
    }

    /// Canonical coordinates in the order the recurrence used them; the
    /// identity unless [`pivoted`](Self::pivoted).
    pub fn row_order(&self) -> &[usize] {
        &self.order
    }

    /// Rows in row-major order.
    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.n).map(|r| self.row(r)).collect()
    }
}

fn schmidt(x: &[f64]) -> Vec<f64> {
    let n = x.len();
    // tail[j] = B(j) = √(Σ_{k ≥ j} x_k²) with 0-based x
    let mut tail = vec![0.0; n + 1];
    for j in (0..n).rev() {
        tail[j] = (tail[j + 1] * tail[j + 1] + x[j] * x[j]).sqrt();
    }
    let mut m = vec![0.0; n * n];
    m[..n].copy_from_slice(x);
    for k in 1..n {
        // column k (0-based) comes from canonical vector k−1
        let (b_prev, b_cur) = (tail[k - 1], tail[k]);
        let col = &mut m[k * n..(k + 1) * n];
        col[k - 1] = b_cur / b_prev;
        let s = -x[k - 1] / (b_cur * b_prev);
        for j in k..n {
            col[j] = s * x[j];
        }
    }
    m
}

/// Builds `R` for `ξ`.
///
/// When some `B(j)`, `1 ≤ j ≤ n−1`, falls below [`PIVOT_THRESHOLD`], the
/// coordinates are reordered by increasing `|ξ_k|`, the basis is built in
/// that order and the rows are permuted back.
pub fn build_basis(xi: &Direction) -> BasisMatrix {
    let x = xi.coords();
    let n = x.len();
    let mut tail = 0.0f64;
    let mut degenerate = false;
    for j in (1..n).rev() {
        tail = (tail * tail + x[j] * x[j]).sqrt();
        if tail < PIVOT_THRESHOLD {
            degenerate = true;
        }
    }
    if !degenerate {
        return BasisMatrix { n, entries: schmidt(x), pivoted: false, order: (0..n).collect() };
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| x[a].abs().total_cmp(&x[b].abs()));
    let permuted: Vec<f64> = order.iter().map(|&k| x[k]).collect();
    let m = schmidt(&permuted);
    let mut entries = vec![0.0; n * n];
    for col in 0..n {
        for (k, &orig) in order.iter().enumerate() {
            entries[col * n + orig] = m[col * n + k];
        }
    }
    BasisMatrix { n, entries, pivoted: true, order }
}

/// `Σ_{i=2}^n R(p, i) R(q, i)` for 1-based `p`, `q`; equals `δ_pq − ξ_p ξ_q`.
pub fn row_pair_sum(r: &BasisMatrix, p: usize, q: usize) -> Result<f64> {
    let n = r.dim();
    if p == 0 || q == 0 || p > n || q > n {
        return Err(Error::domain(format!("row indices ({p}, {q}) outside [1..{n}]")));
    }
    let s: NeumaierSum = (1..n).map(|i| r.get(p - 1, i) * r.get(q - 1, i)).collect();
    let s = s.value();
    debug_assert!({
        let xi = r.column(0);
        let expect = if p == q { 1.0 } else { 0.0 } - xi[p - 1] * xi[q - 1];
        (s - expect).abs() < 1e-12
    });
    Ok(s)
}

/// Evaluates a component by rotating the frame-aligned tensor back:
/// `T^{c₁…c_t} = Σ_{i₁…i_t} R(c₁, i₁)⋯R(c_t, i_t) · T'^{i₁…i_t}`.
///
/// Brute force over all `nᵗ` rotated indices; intended as a cross-check of
/// the subset/matching evaluators on small instances.
pub fn rotate_component_oracle(spec: &KernelSpec, xi: &Direction, cap: usize) -> Result<ComponentValue> {
    let (n, t) = (spec.n, spec.t);
    if xi.dim() != n {
        return Err(Error::domain(format!("direction has dimension {} but n = {n}", xi.dim())));
    }
    let entries = (n as u128).checked_pow(t as u32).unwrap_or(u128::MAX);
    if entries > cap as u128 {
        return Err(Error::SizeCap(format!("{n}^{t} = {entries} rotated entries exceed the cap of {cap}")));
    }
    let r = build_basis(xi);
    let coords: Vec<usize> = spec.component.indices().iter().map(|i| i - 1).collect();
    let mut cache: HashMap<Vec<u32>, f64> = HashMap::new();
    let mut acc = NeumaierSum::new();
    let mut idx = vec![0usize; t];
    loop {
        let mut counts = vec![0u32; n];
        for &i in &idx {
            counts[i] += 1;
        }
        let tp = match cache.get(&counts) {
            Some(v) => *v,
            None => {
                let pairs: Vec<(usize, u32)> = counts.iter().enumerate().map(|(i, &c)| (i + 1, c)).collect();
                let v = tprime_component(n, t, &MultiplicityMap::from_pairs(&pairs)?, spec.kernel)?;
                cache.insert(counts.clone(), v);
                v
            }
        };
        if tp != 0.0 {
            let w: f64 = coords.iter().zip(&idx).map(|(&c, &i)| r.get(c, i)).product();
            acc.add(w * tp);
        }
        // odometer
        let mut k = t;
        while k > 0 && idx[k - 1] == n - 1 {
            idx[k - 1] = 0;
            k -= 1;
        }
        if k == 0 {
            break;
        }
        idx[k - 1] += 1;
    }
    let sphere = sphere_surface(n)?;
    if !spec.parity_matches() {
        return Ok(ComponentValue::parity_zero(sphere));
    }
    Ok(ComponentValue::raw(acc.value(), sphere))
}

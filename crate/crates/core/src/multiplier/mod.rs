//! Analytic evaluation of the multiplier tensor.
//!
//! A component `T^{c₁…c_t}(ξ) = ∫ θ_{c₁}⋯θ_{c_t} g(ξ·θ) dθ` expands into
//!
//! ```text
//! Σ_a  K(t, n, a)  Σ_{|A| = a}  ∏_{α∈A} ξ_{c_α}  Σ_{matchings M of Aᶜ}  ∏_{(p,q)∈M} (δ_{c_p c_q} − ξ_{c_p} ξ_{c_q})
//! ```
//!
//! where `a` runs over the levels with the parity of `t` and `K` is
//! [`crate::special::level_coefficient`]. [`evaluate_component_direct`]
//! enumerates this sum literally; [`evaluate_component_recursive`] walks the
//! replacement tree that starts from the pure product `ξ_{c₁}⋯ξ_{c_t}` and
//! turns one pair of factors at a time into `δ − ξξ`, weighting each node
//! with the `Z(t, n, w)` prefactors.

mod assemble;
mod direct;
mod enumerate;
mod recursive;
mod tprime;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special::Parity;

pub use crate::special::Kernel;
pub use assemble::{assemble_multiplier, DEFAULT_ENTRY_CAP, check_zero_mean, evaluate_all_components, multiplicity_classes};
pub use direct::{direct_level_sums, evaluate_component_direct, evaluate_component_direct_capped};
pub use enumerate::{enumerate_matchings, enumerate_subsets, enumerate_terms, SubsetTerm};
pub use recursive::{evaluate_component_recursive, evaluate_component_recursive_capped};
pub use tprime::tprime_component;

/// Largest tensor order the enumerators accept by default.
pub const DEFAULT_MAX_ORDER: usize = 12;

/// Ordered list of 1-based coordinate indices, one per tensor slot.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(Vec<usize>);

impl MultiIndex {
    pub fn new(indices: Vec<usize>, n: usize) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::domain("multi-index must hold at least one index"));
        }
        if let Some(bad) = indices.iter().find(|&&i| i == 0 || i > n) {
            return Err(Error::domain(format!("index {bad} outside [1..{n}]")));
        }
        Ok(MultiIndex(indices))
    }

    pub fn order(&self) -> usize {
        self.0.len()
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    /// Zero-based coordinate of each slot.
    pub(crate) fn coords(&self) -> Vec<usize> {
        self.0.iter().map(|i| i - 1).collect()
    }

    /// Sorted copy: the representative of the permutation class.
    pub fn canonical(&self) -> MultiIndex {
        let mut v = self.0.clone();
        v.sort_unstable();
        MultiIndex(v)
    }

    pub fn multiplicities(&self) -> MultiplicityMap {
        let mut m = BTreeMap::new();
        for &i in &self.0 {
            *m.entry(i).or_insert(0) += 1;
        }
        MultiplicityMap(m)
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|i| i.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

/// How many times each coordinate index occurs in a component.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct MultiplicityMap(BTreeMap<usize, u32>);

impl MultiplicityMap {
    /// Builds a map from `(index, count)` pairs; zero counts are dropped.
    pub fn from_pairs(pairs: &[(usize, u32)]) -> Result<Self> {
        let mut m = BTreeMap::new();
        for &(i, c) in pairs {
            if i == 0 {
                return Err(Error::domain("coordinate indices are 1-based"));
            }
            if c > 0 {
                *m.entry(i).or_insert(0) += c;
            }
        }
        Ok(MultiplicityMap(m))
    }

    pub fn order(&self) -> usize {
        self.0.values().map(|&c| c as usize).sum()
    }

    pub fn get(&self, index: usize) -> u32 {
        self.0.get(&index).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.0.iter().map(|(&i, &c)| (i, c))
    }

    pub fn counts(&self) -> Vec<u32> {
        self.0.values().copied().collect()
    }

    /// The sorted multi-index with these multiplicities.
    pub fn to_multi_index(&self, n: usize) -> Result<MultiIndex> {
        let v = self.0.iter().flat_map(|(&i, &c)| std::iter::repeat(i).take(c as usize)).collect();
        MultiIndex::new(v, n)
    }
}

/// One component of the multiplier tensor, together with its scalar kernel.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct KernelSpec {
    pub n: usize,
    pub t: usize,
    pub component: MultiIndex,
    pub kernel: Kernel,
}

impl KernelSpec {
    pub fn new(n: usize, component: MultiIndex, kernel: Kernel) -> Result<Self> {
        if n < 2 {
            return Err(Error::domain(format!("dimension n must be >= 2, got {n}")));
        }
        if let Some(bad) = component.indices().iter().find(|&&i| i > n) {
            return Err(Error::domain(format!("index {bad} outside [1..{n}]")));
        }
        Ok(KernelSpec { n, t: component.order(), component, kernel })
    }

    pub fn from_indices(n: usize, indices: &[usize], kernel: Kernel) -> Result<Self> {
        KernelSpec::new(n, MultiIndex::new(indices.to_vec(), n)?, kernel)
    }

    /// Whether the kernel parity matches the tensor order; otherwise the
    /// component vanishes identically.
    pub fn parity_matches(&self) -> bool {
        Parity::of(self.t as i64) == self.kernel.parity()
    }

    /// The integrand `f(θ) g(ξ·θ)` at a point of the sphere.
    #[inline]
    pub fn integrand(&self, theta: &[f64], xi_dot_theta: f64) -> f64 {
        let f: f64 = self.component.indices().iter().map(|&i| theta[i - 1]).product();
        f * self.kernel.eval(xi_dot_theta)
    }
}

/// Value of one component `T(ξ)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ComponentValue {
    /// `T(ξ)`, or `T(ξ)/S_{n−1}` when `normalized` is set.
    pub value: f64,
    pub normalized: bool,
    /// Set when the kernel parity does not match `t`; the value is then an
    /// exact zero.
    pub parity_mismatch: bool,
    sphere: f64,
}

impl ComponentValue {
    pub(crate) fn raw(value: f64, sphere: f64) -> Self {
        ComponentValue { value, normalized: false, parity_mismatch: false, sphere }
    }

    pub(crate) fn parity_zero(sphere: f64) -> Self {
        ComponentValue { value: 0.0, normalized: false, parity_mismatch: true, sphere }
    }

    /// `T(ξ)` regardless of the flag.
    pub fn unnormalized_value(&self) -> f64 {
        if self.normalized {
            self.value * self.sphere
        } else {
            self.value
        }
    }

    /// `T(ξ)/S_{n−1}` regardless of the flag.
    pub fn normalized_value(&self) -> f64 {
        if self.normalized {
            self.value
        } else {
            self.value / self.sphere
        }
    }

    pub fn to_normalized(self) -> Self {
        ComponentValue { value: self.normalized_value(), normalized: true, ..self }
    }

    /// `S_{n−1}` for the dimension this value was computed in.
    pub fn sphere_surface(&self) -> f64 {
        self.sphere
    }
}

/// `Ŵ_f(ξ) = re + i·im`, with `re` from the `−ln` kernel and
/// `im = −π/2 ×` the `sgn` component.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MultiplierValue {
    pub re: f64,
    pub im: f64,
}

/// Which evaluator produced a value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Direct,
    Recursive,
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "direct" => Ok(Method::Direct),
            "recursive" => Ok(Method::Recursive),
            other => Err(Error::domain(format!("unknown method `{other}` (expected direct or recursive)"))),
        }
    }
}

pub(crate) fn check_order(t: usize, max_order: usize) -> Result<()> {
    if t > max_order {
        return Err(Error::SizeCap(format!("tensor order t = {t} exceeds the cap of {max_order}")));
    }
    Ok(())
}

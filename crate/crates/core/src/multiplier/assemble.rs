use std::collections::BTreeMap;
use std::f64::consts::FRAC_PI_2;

use super::{evaluate_component_direct, ComponentValue, Kernel, KernelSpec, MultiIndex, MultiplierValue};
use crate::error::{Error, Result};
use crate::frame::Direction;

/// Default cap on the number of tensor entries `nᵗ` that
/// [`evaluate_all_components`] will expand.
pub const DEFAULT_ENTRY_CAP: usize = 1 << 20;

/// True when `∫ f dθ = 0` over the sphere, i.e. some index has odd
/// multiplicity.
pub fn check_zero_mean(spec: &KernelSpec) -> bool {
    spec.component.multiplicities().iter().any(|(_, c)| c % 2 == 1)
}

/// `Ŵ_f(ξ)` for one component: `re = T_{−ln}(ξ)`, `im = −π/2 · T_{sgn}(ξ)`.
/// `xi` may have any non-zero length; only its direction matters.
pub fn assemble_multiplier(n: usize, component: &MultiIndex, xi: &[f64]) -> Result<MultiplierValue> {
    let probe = KernelSpec::new(n, component.clone(), Kernel::Sgn)?;
    if !check_zero_mean(&probe) {
        return Err(Error::InadmissibleKernel(format!("component ({component})")));
    }
    let dir = Direction::new(xi)?;
    let sgn = evaluate_component_direct(&probe, &dir)?;
    let log = evaluate_component_direct(&KernelSpec { kernel: Kernel::Neglog, ..probe }, &dir)?;
    Ok(MultiplierValue { re: log.value, im: -FRAC_PI_2 * sgn.value })
}

/// Sorted representatives of every permutation class of `n`-valued
/// multi-indices of length `t`.
pub fn multiplicity_classes(n: usize, t: usize) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    let mut cur = vec![1usize; t];
    loop {
        out.push(MultiIndex(cur.clone()));
        // next non-decreasing sequence
        let mut i = t;
        while i > 0 && cur[i - 1] == n {
            i -= 1;
        }
        if i == 0 {
            return out;
        }
        cur[i - 1] += 1;
        let v = cur[i - 1];
        for slot in cur.iter_mut().skip(i) {
            *slot = v;
        }
    }
}

/// Evaluates every entry of the order-`t` tensor, once per permutation
/// class, and expands the result to all `nᵗ` multi-indices.
pub fn evaluate_all_components(
    n: usize,
    t: usize,
    kernel: Kernel,
    xi: &Direction,
    entry_cap: usize,
) -> Result<BTreeMap<MultiIndex, ComponentValue>> {
    if t == 0 {
        return Err(Error::domain("tensor order must be >= 1"));
    }
    let entries = (n as u128).checked_pow(t as u32).unwrap_or(u128::MAX);
    if entries > entry_cap as u128 {
        return Err(Error::SizeCap(format!("{n}^{t} = {entries} entries exceed the cap of {entry_cap}")));
    }
    let mut by_class = BTreeMap::new();
    for class in multiplicity_classes(n, t) {
        let spec = KernelSpec::new(n, class.clone(), kernel)?;
        by_class.insert(class, evaluate_component_direct(&spec, xi)?);
    }
    let mut out = BTreeMap::new();
    let mut cur = vec![1usize; t];
    loop {
        let idx = MultiIndex(cur.clone());
        let value = by_class[&idx.canonical()];
        out.insert(idx, value);
        let mut i = t;
        while i > 0 && cur[i - 1] == n {
            cur[i - 1] = 1;
            i -= 1;
        }
        if i == 0 {
            return Ok(out);
        }
        cur[i - 1] += 1;
    }
}

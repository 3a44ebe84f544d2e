use super::enumerate::{enumerate_matchings, enumerate_subsets};
use super::{check_order, ComponentValue, KernelSpec, DEFAULT_MAX_ORDER};
use crate::error::{Error, Result};
use crate::frame::Direction;
use crate::special::{CoefficientTable, Parity};
use crate::sum::NeumaierSum;

pub(crate) fn check_dims(spec: &KernelSpec, xi: &Direction) -> Result<()> {
    if xi.dim() != spec.n {
        return Err(Error::domain(format!("direction has dimension {} but the kernel lives in n = {}", xi.dim(), spec.n)));
    }
    Ok(())
}

/// Pair factors `δ_{c_p c_q} − ξ_{c_p} ξ_{c_q}` for every pair of slots.
pub(crate) fn pair_matrix(coords: &[usize], xi: &[f64]) -> Vec<Vec<f64>> {
    coords
        .iter()
        .map(|&cp| {
            coords
                .iter()
                .map(|&cq| {
                    let delta = if cp == cq { 1.0 } else { 0.0 };
                    delta - xi[cp] * xi[cq]
                })
                .collect()
        })
        .collect()
}

/// Per-level partial sums of the direct expansion, as `(a, sum)` where `a`
/// is the number of `ξ` factors. Their total is the unnormalised component.
pub fn direct_level_sums(spec: &KernelSpec, xi: &Direction) -> Result<Vec<(usize, f64)>> {
    check_dims(spec, xi)?;
    check_order(spec.t, DEFAULT_MAX_ORDER)?;
    let table = CoefficientTable::new(spec.kernel, spec.t, spec.n)?;
    Ok(level_sums(spec, xi, &table))
}

fn level_sums(spec: &KernelSpec, xi: &Direction, table: &CoefficientTable) -> Vec<(usize, f64)> {
    let t = spec.t;
    let parity = Parity::of(t as i64);
    let coords = spec.component.coords();
    let x = xi.coords();
    let pairs = pair_matrix(&coords, x);
    let top = if parity.is_even() { t / 2 } else { (t - 1) / 2 };

    let mut out = Vec::with_capacity(top + 1);
    for w in 0..=top {
        let a = if parity.is_even() { 2 * w } else { 2 * w + 1 };
        let weight = table.level(a);
        if weight == 0.0 {
            out.push((a, 0.0));
            continue;
        }
        let mut level = NeumaierSum::new();
        for subset in enumerate_subsets(t, w, parity) {
            let xi_prod: f64 = subset.iter().map(|&p| x[coords[p]]).product();
            if xi_prod == 0.0 {
                continue;
            }
            let complement: Vec<usize> = (0..t).filter(|p| !subset.contains(p)).collect();
            let mut matched = NeumaierSum::new();
            for matching in enumerate_matchings(&complement).expect("even complement") {
                matched.add(matching.iter().map(|&(p, q)| pairs[p][q]).product());
            }
            level.add(xi_prod * matched.value());
        }
        out.push((a, weight * level.value()));
    }
    out
}

/// Evaluates one component by enumerating every `(subset, matching)` term.
///
/// `xi` is a unit direction; the result is unnormalised (`T`, not
/// `T/S_{n−1}`). A kernel whose parity does not match `t` yields an exact
/// zero with [`ComponentValue::parity_mismatch`] set.
pub fn evaluate_component_direct(spec: &KernelSpec, xi: &Direction) -> Result<ComponentValue> {
    evaluate_component_direct_capped(spec, xi, DEFAULT_MAX_ORDER)
}

pub fn evaluate_component_direct_capped(
    spec: &KernelSpec,
    xi: &Direction,
    max_order: usize,
) -> Result<ComponentValue> {
    check_dims(spec, xi)?;
    check_order(spec.t, max_order)?;
    let table = CoefficientTable::new(spec.kernel, spec.t, spec.n)?;
    if !spec.parity_matches() {
        return Ok(ComponentValue::parity_zero(table.sphere()));
    }
    let total: NeumaierSum = level_sums(spec, xi, &table).into_iter().map(|(_, s)| s).collect();
    Ok(ComponentValue::raw(total.value(), table.sphere()))
}

use super::direct::{check_dims, pair_matrix};
use super::{check_order, ComponentValue, KernelSpec, DEFAULT_MAX_ORDER};
use crate::error::Result;
use crate::frame::Direction;
use crate::special::{CoefficientTable, Parity};
use crate::sum::NeumaierSum;

struct Walk<'a> {
    xi_slot: Vec<f64>,
    pairs: Vec<Vec<f64>>,
    /// Node weight by number of pair factors `r`: `S_{n−1} · Z(t, n, w) · r!`.
    weight: Vec<f64>,
    acc: &'a mut NeumaierSum,
}

impl Walk<'_> {
    /// Visits the node whose remaining `ξ` slots are `free` and whose pair
    /// factors multiply to `pair_prod`, then expands it. Pairs are added in
    /// increasing order of their smaller slot, so every `(subset, matching)`
    /// node is reached by exactly one path.
    fn visit(&mut self, free: &mut Vec<usize>, floor: usize, pair_prod: f64, depth: usize) {
        let xi_prod: f64 = free.iter().map(|&p| self.xi_slot[p]).product();
        self.acc.add(self.weight[depth] * xi_prod * pair_prod);
        if pair_prod == 0.0 {
            return;
        }
        for i in 0..free.len() {
            let p = free[i];
            if p < floor {
                continue;
            }
            for j in i + 1..free.len() {
                let q = free[j];
                let factor = self.pairs[p][q];
                if factor == 0.0 {
                    continue;
                }
                // remove q then p (q sits after p)
                free.remove(j);
                free.remove(i);
                self.visit(free, p + 1, pair_prod * factor, depth + 1);
                free.insert(i, p);
                free.insert(j, q);
            }
        }
    }
}

/// Evaluates one component by exploring the pair-replacement tree.
///
/// The root is the pure product `ξ_{c₁}⋯ξ_{c_t}`; each child replaces one
/// pair `ξ_p ξ_q` of the parent by `δ_pq − ξ_p ξ_q`. Node weights come from
/// the `Z(t, n, w)` prefactors. Agrees with
/// [`super::evaluate_component_direct`] to rounding.
pub fn evaluate_component_recursive(spec: &KernelSpec, xi: &Direction) -> Result<ComponentValue> {
    evaluate_component_recursive_capped(spec, xi, DEFAULT_MAX_ORDER)
}

pub fn evaluate_component_recursive_capped(
    spec: &KernelSpec,
    xi: &Direction,
    max_order: usize,
) -> Result<ComponentValue> {
    check_dims(spec, xi)?;
    check_order(spec.t, max_order)?;
    let t = spec.t;
    let table = CoefficientTable::new(spec.kernel, t, spec.n)?;
    if !spec.parity_matches() {
        return Ok(ComponentValue::parity_zero(table.sphere()));
    }
    let parity = Parity::of(t as i64);
    let top = if parity.is_even() { t / 2 } else { (t - 1) / 2 };
    let mut weight = Vec::with_capacity(top + 1);
    let mut paths = 1.0;
    for r in 0..=top {
        if r > 0 {
            paths *= r as f64;
        }
        // the root (r = 0) sits at the highest level w = top
        let z = table.z(top - r).expect("parity checked above");
        weight.push(table.sphere() * z * paths);
    }

    let coords = spec.component.coords();
    let x = xi.coords();
    let mut acc = NeumaierSum::new();
    let mut walk = Walk {
        xi_slot: coords.iter().map(|&c| x[c]).collect(),
        pairs: pair_matrix(&coords, x),
        weight,
        acc: &mut acc,
    };
    let mut free: Vec<usize> = (0..t).collect();
    walk.visit(&mut free, 0, 1.0, 0);
    Ok(ComponentValue::raw(acc.value(), table.sphere()))
}

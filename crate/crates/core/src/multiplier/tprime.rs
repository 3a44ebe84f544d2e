use super::MultiplicityMap;
use crate::error::{Error, Result};
use crate::special::{double_factorial, double_factorial_ratio, g_a, sphere_surface, wallis, Kernel};

/// Component of the tensor in the frame whose first axis is `ξ`:
/// `∫ θ'₁^{s(1)} θ'₂^{s(2)}⋯ g(θ'₁) dθ'`.
///
/// Exactly zero when an axis other than the first has odd multiplicity.
/// Otherwise
/// `G_{s(1)}(t,n) · S_{n−1}/∫₀^π sin^{n−2} · (n−3)!!/(n−3+t−s(1))!! · ∏_{j≥2} (s(j)−1)!!`.
pub fn tprime_component(n: usize, t: usize, mults: &MultiplicityMap, kernel: Kernel) -> Result<f64> {
    if n < 2 {
        return Err(Error::domain(format!("dimension n must be >= 2, got {n}")));
    }
    if mults.order() != t {
        return Err(Error::domain(format!("multiplicities sum to {} but t = {t}", mults.order())));
    }
    if let Some((i, _)) = mults.iter().find(|&(i, _)| i > n) {
        return Err(Error::domain(format!("axis {i} outside [1..{n}]")));
    }
    if mults.iter().any(|(i, c)| i >= 2 && c % 2 == 1) {
        return Ok(0.0);
    }
    let s1 = mults.get(1) as usize;
    let ga = g_a(kernel, s1, t, n)?;
    if ga == 0.0 {
        return Ok(0.0);
    }
    let frame = sphere_surface(n)? / wallis((n - 2) as u32, false);
    let ratio = double_factorial_ratio(n as i64 - 3, (n + t - s1) as i64 - 3)?;
    let mut rest = 1.0;
    for (i, c) in mults.iter() {
        if i >= 2 {
            rest *= double_factorial(c as i64 - 1)?;
        }
    }
    Ok(ga * frame * ratio * rest)
}

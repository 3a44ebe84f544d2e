//! First-order components: the multiplier of the plain Riesz transform is
//! proportional to ξ, and every order-1 value lies on that line.

use polyriesz::multiplier::{assemble_multiplier, MultiIndex};

fn main() -> polyriesz::error::Result<()> {
    let xi = [0.6, -0.48, 0.64];
    let mut ratios = Vec::new();
    for j in 1..=3 {
        let m = assemble_multiplier(3, &MultiIndex::new(vec![j], 3)?, &xi)?;
        println!("W_{j}(xi) = {:+.6} {:+.6}i", m.re, m.im);
        ratios.push(m.im / xi[j - 1]);
    }
    println!("im / xi_j = {ratios:?} (-pi^2 = {})", -std::f64::consts::PI.powi(2));
    Ok(())
}

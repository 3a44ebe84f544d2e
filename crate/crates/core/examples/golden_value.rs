//! Evaluates the order-5 `sgn` component used as the golden value and times it.

use std::time::Instant;

use polyriesz::frame::Direction;
use polyriesz::multiplier::{evaluate_component_direct, Kernel, KernelSpec};

fn main() -> polyriesz::error::Result<()> {
    let spec = KernelSpec::from_indices(3, &[1, 3, 3, 3, 3], Kernel::Sgn)?;
    let xi = Direction::new(&[-0.0054, 0.1491, 0.9888])?;
    let start = Instant::now();
    let v = evaluate_component_direct(&spec, &xi)?;
    println!("T^(1,3,3,3,3)(xi)/S_2 = {:.6e}", v.normalized_value());
    println!("T^(1,3,3,3,3)(xi)     = {:.6e}", v.unnormalized_value());
    println!("elapsed: {:?}", start.elapsed());
    Ok(())
}

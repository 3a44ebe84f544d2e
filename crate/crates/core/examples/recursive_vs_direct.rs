//! Compares the direct enumerator with the recursive replacement tree over
//! every component class up to order 6 in three dimensions.

use polyriesz::frame::Direction;
use polyriesz::multiplier::{
    evaluate_component_direct, evaluate_component_recursive, multiplicity_classes, Kernel, KernelSpec,
};

fn main() -> polyriesz::error::Result<()> {
    let xi = Direction::new(&[0.3, -0.7, 0.65])?;
    let mut worst = 0.0f64;
    for t in 1..=6 {
        for class in multiplicity_classes(3, t) {
            let spec = KernelSpec::new(3, class.clone(), Kernel::for_order(t))?;
            let d = evaluate_component_direct(&spec, &xi)?.value;
            let r = evaluate_component_recursive(&spec, &xi)?.value;
            let rel = (d - r).abs() / d.abs().max(1e-300);
            worst = worst.max(if d == 0.0 && r == 0.0 { 0.0 } else { rel });
            println!("t={t} ({class}): direct {d:+.12e} recursive {r:+.12e}");
        }
    }
    println!("worst relative difference: {worst:.2e}");
    Ok(())
}

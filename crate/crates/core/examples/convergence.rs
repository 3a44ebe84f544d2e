//! Mean absolute Monte-Carlo error against sample count, with the fitted
//! log-log slope for each sampler.

use polyriesz::frame::Direction;
use polyriesz::mc::{self, SamplerKind};
use polyriesz::multiplier::{evaluate_component_direct, Kernel, KernelSpec};

fn main() -> polyriesz::error::Result<()> {
    let spec = KernelSpec::from_indices(3, &[1, 1, 2, 3, 3], Kernel::Sgn)?;
    let xi = Direction::new(&[0.5, 0.5, 0.7])?;
    let exact = evaluate_component_direct(&spec, &xi)?.normalized_value();
    let counts = [1_000, 10_000, 100_000, 1_000_000];
    for kind in [SamplerKind::Mc1Muller, SamplerKind::Mc3Halton] {
        let table = mc::convergence_study(&spec, &xi, kind, exact, &counts, 5, 0)?;
        println!("{}:", kind.name());
        for row in &table.rows {
            println!("  N={:>8}  mean |error| {:.3e}", row.n_samples, row.mean_abs_error);
        }
        println!("  slope {:.3}", table.slope);
    }
    Ok(())
}

//! Checks the closed form against the three Monte-Carlo samplers.

use polyriesz::frame::Direction;
use polyriesz::mc::{self, SamplerKind};
use polyriesz::multiplier::{evaluate_component_direct, Kernel, KernelSpec};

fn main() -> polyriesz::error::Result<()> {
    let spec = KernelSpec::from_indices(3, &[1, 3, 3, 3, 3], Kernel::Sgn)?;
    let xi = Direction::new(&[-0.0054, 0.1491, 0.9888])?;
    let exact = evaluate_component_direct(&spec, &xi)?.normalized_value();
    println!("exact {exact:.6e}");
    for kind in [SamplerKind::Mc1Muller, SamplerKind::Mc2Spherical, SamplerKind::Mc3Halton] {
        for n in [50_000u64, 500_000, 5_000_000] {
            let e = mc::estimate(&spec, &xi, kind, n, 0)?;
            println!(
                "{:>3} N={n:>8}: mean {:+.6e}  se {:.2e}  |error| {:.2e}",
                kind.name(),
                e.mean,
                e.std_error,
                (e.mean - exact).abs()
            );
        }
    }
    Ok(())
}

//! Prints the moment integrals G_a(t, n) for both kernels.

use polyriesz::special::{g_a, Kernel};

fn main() -> polyriesz::error::Result<()> {
    let n = 3;
    for kernel in [Kernel::Sgn, Kernel::Neglog] {
        println!("{kernel}, n = {n}");
        for t in 1..=6 {
            let row: Vec<String> =
                (0..=t).map(|a| g_a(kernel, a, t, n).map(|v| format!("{v:+.6}"))).collect::<Result<_, _>>()?;
            println!("  t={t}: {}", row.join(" "));
        }
    }
    Ok(())
}

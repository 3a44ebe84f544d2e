//! Builds the orthonormal frame with ξ as its first vector, including a
//! direction close to an axis that triggers the coordinate pivot.

use polyriesz::frame::{build_basis, row_pair_sum, Direction};

fn show(v: &[f64]) -> polyriesz::error::Result<()> {
    let xi = Direction::new(v)?;
    let r = build_basis(&xi);
    println!("xi = {:?} (pivoted: {})", xi.coords(), r.pivoted());
    for row in r.rows() {
        let cells: Vec<String> = row.iter().map(|x| format!("{x:+.6}")).collect();
        println!("  [{}]", cells.join(", "));
    }
    let n = r.dim();
    let mut worst = 0.0f64;
    for p in 1..=n {
        for q in 1..=n {
            let expect = if p == q { 1.0 } else { 0.0 } - xi.coords()[p - 1] * xi.coords()[q - 1];
            worst = worst.max((row_pair_sum(&r, p, q)? - expect).abs());
        }
    }
    println!("  max |sum_i R(p,i)R(q,i) - (delta_pq - xi_p xi_q)| = {worst:.1e}");
    Ok(())
}

fn main() -> polyriesz::error::Result<()> {
    show(&[1.0, 2.0, 2.0])?;
    show(&[0.2, -0.4, 0.1, 0.9])?;
    show(&[1.0, 1e-12, 0.0])?;
    Ok(())
}

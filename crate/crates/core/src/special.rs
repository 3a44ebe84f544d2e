//! Special functions and combinatorial coefficients.
//!
//! Everything the analytic multiplier needs: double factorials, Γ and Ψ,
//! Wallis integrals, the one-dimensional moments `G_a(t, n)` of the two
//! kernels, the recursion prefactors `Z(t, n, w)` and the permutation counts
//! `C₁`, `C₂`, `C₃`.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::multiplier::MultiplicityMap;

/// Parity of an integer (typically the tensor order `t`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of(m: i64) -> Parity {
        if m.rem_euclid(2) == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn is_even(self) -> bool {
        self == Parity::Even
    }
}

/// The scalar kernel `g` applied to `ξ·θ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kernel {
    /// `g(x) = sgn(x)`; contributes the imaginary part of the multiplier.
    Sgn,
    /// `g(x) = −ln|x|`; contributes the real part.
    Neglog,
}

impl Kernel {
    /// The kernel that gives a non-zero result for tensor order `t`.
    pub fn for_order(t: usize) -> Kernel {
        if t % 2 == 1 {
            Kernel::Sgn
        } else {
            Kernel::Neglog
        }
    }

    /// Tensor-order parity for which this kernel does not vanish identically.
    pub fn parity(self) -> Parity {
        match self {
            Kernel::Sgn => Parity::Odd,
            Kernel::Neglog => Parity::Even,
        }
    }

    #[inline]
    pub fn eval(self, x: f64) -> f64 {
        match self {
            Kernel::Sgn => {
                if x > 0.0 {
                    1.0
                } else if x < 0.0 {
                    -1.0
                } else {
                    0.0
                }
            }
            Kernel::Neglog => -x.abs().ln(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Kernel::Sgn => "sgn",
            Kernel::Neglog => "neglog",
        }
    }
}

impl fmt::Display for Kernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Kernel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sgn" | "sign" => Ok(Kernel::Sgn),
            "neglog" | "log" | "-ln" => Ok(Kernel::Neglog),
            other => Err(Error::domain(format!("unknown kernel `{other}` (expected sgn or neglog)"))),
        }
    }
}

/// `m!! = m·(m−2)·…`, with `(−1)!! = 0!! = 1`.
pub fn double_factorial(m: i64) -> Result<f64> {
    if m < -1 {
        return Err(Error::domain(format!("double factorial undefined for m = {m} < -1")));
    }
    // ascending, so that m!! and m·(m−2)!! round identically
    let mut acc = 1.0;
    let mut k = 2 - (m & 1);
    while k <= m {
        acc *= k as f64;
        k += 2;
    }
    Ok(acc)
}

/// `num!! / den!!` evaluated by interleaving the factors of numerator and
/// denominator so that intermediate values stay close to the result.
pub fn double_factorial_ratio(num: i64, den: i64) -> Result<f64> {
    if num < -1 || den < -1 {
        return Err(Error::domain(format!("double factorial ratio {num}!!/{den}!! out of domain")));
    }
    let mut a = num;
    let mut b = den;
    let mut acc = 1.0;
    while a > 1 || b > 1 {
        if a > 1 && (acc <= 1.0 || b <= 1) {
            acc *= a as f64;
            a -= 2;
        } else {
            acc /= b as f64;
            b -= 2;
        }
    }
    Ok(acc)
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

fn lanczos_sum(z: f64) -> f64 {
    // z = x − 1
    LANCZOS_COEF[1..]
        .iter()
        .enumerate()
        .fold(LANCZOS_COEF[0], |acc, (i, c)| acc + c / (z + (i + 1) as f64))
}

/// Γ(x) for x > 0.
pub fn gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain(format!("gamma requires x > 0, got {x}")));
    }
    if x < 0.5 {
        // Γ(x) = Γ(x + 1) / x keeps the Lanczos sum away from its poles.
        return Ok(gamma(x + 1.0)? / x);
    }
    if x == x.floor() && x <= 30.0 {
        let mut acc = 1.0;
        let mut k = 2.0;
        while k < x {
            acc *= k;
            k += 1.0;
        }
        return Ok(acc);
    }
    let z = x - 1.0;
    let t = z + LANCZOS_G + 0.5;
    Ok((2.0 * PI).sqrt() * t.powf(z + 0.5) * (-t).exp() * lanczos_sum(z))
}

/// ln Γ(x) for x > 0.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain(format!("ln_gamma requires x > 0, got {x}")));
    }
    if x < 0.5 {
        return Ok(ln_gamma(x + 1.0)? - x.ln());
    }
    let z = x - 1.0;
    let t = z + LANCZOS_G + 0.5;
    Ok(0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + lanczos_sum(z).ln())
}

/// Digamma Ψ(x) = Γ'(x)/Γ(x) for x > 0.
pub fn digamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::domain(format!("digamma requires x > 0, got {x}")));
    }
    let mut shift = 0.0;
    let mut z = x;
    while z < 10.0 {
        shift -= 1.0 / z;
        z += 1.0;
    }
    let r = 1.0 / (z * z);
    // Asymptotic Bernoulli series, truncated after the z^-14 term.
    let tail = r
        * (1.0 / 12.0
            - r * (1.0 / 120.0
                - r * (1.0 / 252.0
                    - r * (1.0 / 240.0 - r * (1.0 / 132.0 - r * (691.0 / 32760.0 - r / 12.0))))));
    Ok(shift + z.ln() - 0.5 / z - tail)
}

/// `∫ sin^m φ dφ` over `[0, π/2]` (`half`) or `[0, π]`.
pub fn wallis(m: u32, half: bool) -> f64 {
    let m = m as i64;
    // (m−1)!!/m!! never leaves its domain for m ≥ 0.
    let ratio = double_factorial_ratio(m - 1, m).expect("m >= 0");
    let h = if m % 2 == 0 { ratio * PI / 2.0 } else { ratio };
    if half {
        h
    } else {
        2.0 * h
    }
}

/// Surface measure of the unit sphere `S^{n−1} ⊂ ℝⁿ`: `2π^{n/2}/Γ(n/2)`.
pub fn sphere_surface(n: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::domain(format!("sphere_surface requires n >= 2, got {n}")));
    }
    let h = n as f64 / 2.0;
    Ok(2.0 * PI.powf(h) / gamma(h)?)
}

fn check_level(a: usize, t: usize, n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::domain(format!("dimension n must be >= 2, got {n}")));
    }
    if a > t {
        return Err(Error::domain(format!("level a = {a} exceeds tensor order t = {t}")));
    }
    Ok(())
}

/// `G_a(t, n) = ∫₀^π sgn(cos φ) cos^a φ sin^{n−2+t−a} φ dφ`; zero for even `a`.
pub fn g_a_sgn(a: usize, t: usize, n: usize) -> Result<f64> {
    check_level(a, t, n)?;
    if a % 2 == 0 {
        return Ok(0.0);
    }
    let (a, t, n) = (a as i64, t as i64, n as i64);
    // 2·(a−1)!!·(n−3+t−a)!!/(n−2+t)!!
    let r1 = double_factorial_ratio(a - 1, n - 2 + t)?;
    Ok(2.0 * r1 * double_factorial(n - 3 + t - a)?)
}

/// `G_a(t, n) = ∫₀^π −ln|cos φ| cos^a φ sin^{n−2+t−a} φ dφ`; zero for odd `a`.
pub fn g_a_log(a: usize, t: usize, n: usize) -> Result<f64> {
    check_level(a, t, n)?;
    if a % 2 == 1 {
        return Ok(0.0);
    }
    let x = (a as f64 + 1.0) / 2.0;
    let s = (n + t) as f64 / 2.0;
    let y = s - x;
    let beta = (ln_gamma(x)? + ln_gamma(y)? - ln_gamma(s)?).exp();
    Ok(0.5 * beta * (digamma(s)? - digamma(x)?))
}

/// `G_a(t, n)` for the given kernel.
pub fn g_a(kernel: Kernel, a: usize, t: usize, n: usize) -> Result<f64> {
    match kernel {
        Kernel::Sgn => g_a_sgn(a, t, n),
        Kernel::Neglog => g_a_log(a, t, n),
    }
}

/// Recursion prefactor `Z(t, n, w)`.
///
/// For odd `t` the node carries `2w+1` factors `ξ_α`, for even `t` it
/// carries `2w`. The normalisation uses the half-range Wallis integral. A
/// node is multiplied by `S_{n−1}·Z`, and each `(subset, matching)` term is
/// reached by `r!` ordered paths of the recursion tree, `r` being the number
/// of pair factors.
pub fn z_coefficient(t: usize, n: usize, w: usize, parity: Parity) -> Result<f64> {
    if n < 2 || t == 0 {
        return Err(Error::domain(format!("z_coefficient needs n >= 2 and t >= 1 (n = {n}, t = {t})")));
    }
    if Parity::of(t as i64) != parity {
        return Err(Error::domain(format!("parity {parity:?} does not match t = {t}")));
    }
    let half = wallis((n - 2) as u32, true);
    let (ti, ni, wi) = (t as i64, n as i64, w as i64);
    match parity {
        Parity::Odd => {
            if w > (t - 1) / 2 {
                return Err(Error::domain(format!("level w = {w} out of range for odd t = {t}")));
            }
            let rest = ti - 2 * wi - 1;
            let num = double_factorial(ni - 3)? * double_factorial(2 * wi)?;
            let den = double_factorial(ni - 2 + ti)? * double_factorial(rest)?;
            Ok(num * 2f64.powi((rest / 2) as i32) / (den * half))
        }
        Parity::Even => {
            if w > t / 2 {
                return Err(Error::domain(format!("level w = {w} out of range for even t = {t}")));
            }
            let rest = ti - 2 * wi;
            let lead = double_factorial(ni - 3)? * 2f64.powi(((rest - 4) / 2) as i32)
                / (double_factorial(ni - 3 + rest)? * double_factorial(rest)?);
            let x = (2 * w + 1) as f64 / 2.0;
            let s = (n + t) as f64 / 2.0;
            let beta = (ln_gamma(x)? + ln_gamma(s - x)? - ln_gamma(s)?).exp();
            Ok(lead * beta * (digamma(s)? - digamma(x)?) / half)
        }
    }
}

/// Weight of a single `(subset, matching)` term at level `a`, where `a` is
/// the number of `ξ_α` factors:
/// `G_a(t,n) · S_{n−1}/∫₀^π sin^{n−2} · (n−3)!!/(n−3+t−a)!!`.
///
/// This is the rotated-frame component of the separable integral with
/// `s(1) = a` and every other multiplicity equal to 2; it returns 0 when
/// `t − a` is odd (no perfect matching of the remaining positions).
pub fn level_coefficient(kernel: Kernel, t: usize, n: usize, a: usize) -> Result<f64> {
    check_level(a, t, n)?;
    if (t - a) % 2 == 1 {
        return Ok(0.0);
    }
    let ga = g_a(kernel, a, t, n)?;
    if ga == 0.0 {
        return Ok(0.0);
    }
    let frame = sphere_surface(n)? / wallis((n - 2) as u32, false);
    let ratio = double_factorial_ratio(n as i64 - 3, (n + t - a) as i64 - 3)?;
    Ok(ga * frame * ratio)
}

/// All coefficients one component evaluation needs, computed up front.
#[derive(Clone, Debug)]
pub struct CoefficientTable {
    pub n: usize,
    pub t: usize,
    pub kernel: Kernel,
    /// `level[a]` = [`level_coefficient`] for `a = 0..=t`.
    level: Vec<f64>,
    /// `z[w]` = [`z_coefficient`] for the parity of `t`; empty when the
    /// kernel parity does not match `t`.
    z: Vec<f64>,
    sphere: f64,
}

impl CoefficientTable {
    pub fn new(kernel: Kernel, t: usize, n: usize) -> Result<Self> {
        if n < 2 || t == 0 {
            return Err(Error::domain(format!("need n >= 2 and t >= 1 (n = {n}, t = {t})")));
        }
        let level = (0..=t).map(|a| level_coefficient(kernel, t, n, a)).collect::<Result<Vec<_>>>()?;
        let parity = Parity::of(t as i64);
        let z = if parity == kernel.parity() {
            let top = if parity.is_even() { t / 2 } else { (t - 1) / 2 };
            (0..=top).map(|w| z_coefficient(t, n, w, parity)).collect::<Result<Vec<_>>>()?
        } else {
            Vec::new()
        };
        let table = CoefficientTable { n, t, kernel, level, z, sphere: sphere_surface(n)? };
        debug_assert!(table.level.iter().chain(&table.z).all(|c| c.is_finite()));
        Ok(table)
    }

    #[inline]
    pub fn level(&self, a: usize) -> f64 {
        self.level[a]
    }

    /// `Z(t, n, w)`, or `None` when the kernel parity does not match `t`.
    pub fn z(&self, w: usize) -> Option<f64> {
        self.z.get(w).copied()
    }

    pub fn sphere(&self) -> f64 {
        self.sphere
    }
}

/// Binomial coefficient as an exact integer.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 1..=k as u128 {
        acc = acc * (n as u128 - k as u128 + i) / i;
    }
    acc
}

fn multinomial(counts: &[u32]) -> u128 {
    let mut total = 0u64;
    let mut acc = 1u128;
    for &c in counts {
        total += c as u64;
        acc *= binomial(total, c as u64);
    }
    acc
}

fn require_even(mults: &MultiplicityMap, what: &str) -> Result<()> {
    if let Some((idx, c)) = mults.iter().find(|(_, c)| c % 2 == 1) {
        return Err(Error::domain(format!("{what} needs even multiplicities; index {idx} has {c}")));
    }
    Ok(())
}

/// `C₁ = t!/∏ s(j)!`: distinct orderings of the multiset of indices.
pub fn count_c1(mults: &MultiplicityMap) -> Result<u128> {
    Ok(multinomial(&mults.counts()))
}

/// `C₂ = (t/2)!/∏ (s(j)/2)!`.
pub fn count_c2(mults: &MultiplicityMap) -> Result<u128> {
    require_even(mults, "C2")?;
    let halves: Vec<u32> = mults.counts().iter().map(|c| c / 2).collect();
    Ok(multinomial(&halves))
}

/// `C₃ = ∏ s(j)!/2^{t/2}`, so that `C₁·C₃ = t!/2^{t/2}`.
pub fn count_c3(mults: &MultiplicityMap) -> Result<u128> {
    require_even(mults, "C3")?;
    let mut acc = 1u128;
    for c in mults.counts() {
        // s!/2^{s/2} = (s/2)!·(s−1)!!, exact at every step.
        let s = c as u128;
        let mut k = 1u128;
        while k <= s / 2 {
            acc *= k;
            k += 1;
        }
        let mut d = s.saturating_sub(1);
        while d > 1 {
            acc *= d;
            d -= 2;
        }
    }
    Ok(acc)
}

//! Closed-form Fourier multipliers for higher-order Riesz transforms.
//!
//! A polyadic kernel `f(θ) = θ ∘ θ ∘ … ∘ θ` of order `t` on the sphere
//! `S^{n-1}`, combined with a `1/‖x‖ⁿ` singularity, defines a singular
//! integral transform whose Fourier multiplier is
//!
//! ```text
//! Ŵ_f(ξ) = ∫ f(θ) [ −ln|ξ·θ| − i·π/2·sgn(ξ·θ) ] dθ .
//! ```
//!
//! Every component of that tensor is a finite sum over subsets of positions
//! of products of `ξ_α` and `δ_pq − ξ_p ξ_q`. This crate evaluates it two
//! ways ([`multiplier::evaluate_component_direct`] and
//! [`multiplier::evaluate_component_recursive`]), checks the constants
//! against Monte-Carlo integration on the sphere ([`mc`]), and applies the
//! two-dimensional case to images ([`image2d`]).
//!
//! ```
//! use polyriesz::{Direction, KernelSpec, Kernel, multiplier};
//!
//! let spec = KernelSpec::from_indices(3, &[1, 3, 3, 3, 3], Kernel::Sgn).unwrap();
//! let xi = Direction::new(&[-0.0054, 0.1491, 0.9888]).unwrap();
//! let v = multiplier::evaluate_component_direct(&spec, &xi).unwrap();
//! assert!((v.normalized_value() + 1.67e-7).abs() < 5e-10);
//! ```

pub mod cli;
pub mod error;
pub mod frame;
pub mod image2d;
pub mod mc;
pub mod multiplier;
pub mod quadrature;
pub mod special;
pub mod sum;

pub use error::{Error, Result};
pub use frame::{BasisMatrix, Direction};
pub use multiplier::{ComponentValue, Kernel, KernelSpec, MultiIndex, MultiplicityMap, MultiplierValue};

//! Weierstrass elliptic functions, lattice periods, and the Abel map from
//! the curve invariants (g2, g3), computed with a Landen-type iteration on
//! index-2 subgroups.
//!
//! The lattice attached to (g2, g3) is never constructed directly. Instead
//! the root triple of 4x³ − g2·x − g3 is pushed through the Landen map
//! toward a degenerate (rank-1) group, for which everything has elementary
//! closed forms; the chain of root triples is then unwound to recover
//! values on the original lattice. Convergence is quadratic: four or five
//! steps reach double-precision accuracy, and the iteration stays stable
//! for curves that are close to degenerate.
//!
//! Entry points:
//!
//! - [`solve_cubic`], [`order_properly`], [`classify`] — curve bookkeeping
//! - [`iterate_optimal`], [`chain_invariant_deltas`] — the Landen chain
//! - [`smallest_period`], [`reduced_basis`], [`quasi_periods`] — lattice geometry
//! - [`weierstrass_at`], [`abel_map`] — function values and the elliptic integral
//! - [`eval_q`], [`curve_from_gamma`] — the rectangle-to-channel conformal map

mod conformal;
mod core;
mod error;
mod functions;
mod landen;
mod periods;

#[cfg(feature = "oracle")]
pub mod oracle;

pub use num_complex::Complex64;

pub use crate::conformal::{
    curve_from_gamma, eval_q, rectangular_periods, trace_q, ConformalParams,
};
pub use crate::core::{
    classify, discriminant, invariants_from_roots, order_properly, solve_cubic, Invariants,
    RootTriple, SelectedRoots, SubgroupRank, Tolerances,
};
pub use crate::error::{Error, Result};
pub use crate::functions::{
    abel_map, reduce_argument, weierstrass_all, weierstrass_at, weierstrass_at_no_sigma,
    CurvePoint, WeierstrassValues,
};
pub use crate::landen::{
    chain_invariant_deltas, iterate_optimal, landen_step, select_optimal, LandenChain,
};
pub use crate::periods::{
    quasi_periods, rank1_period, reduced_basis, smallest_period, QuasiPeriods, ReducedBasis,
};

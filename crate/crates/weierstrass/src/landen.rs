//! The Landen transformation on root triples, optimal subgroup selection,
//! and iterated chains of index-2 subgroups.
//!
//! The map sends a triple with distinguished root e1 to the root triple of
//! the index-2 subgroup that keeps the period attached to e1:
//!
//! ```text
//! f1 = -e1/2,   f1 + f2 + f3 = 0,   16 (f2 - f1)(f3 - f1) = (e2 - e3)^2,
//! ```
//!
//! with closed form f_{2,3} = e1/4 ± r, 16 r² = 9 e1² − (e2 − e3)².
//! Iterating with the optimal selection (the root whose distances to the
//! other two dominate their mutual distance) drives the discriminant to zero
//! quadratically; the limit rank-1 group carries the shortest period of the
//! original lattice, recovered as ω = iπ/√(3 f1).

use num_complex::Complex64;

use crate::core::{order_properly, Invariants, RootTriple, SelectedRoots, Tolerances};
use crate::error::{Error, Result};

/// Stored data of one chain step: the produced triple plus the stably
/// computed quantities the downstream algorithms consume.
#[derive(Debug, Clone, Copy)]
pub(crate) struct ChainStep {
    /// Roots of this step's subgroup, distinguished root first.
    pub(crate) roots: SelectedRoots,
    /// Half pair difference r: pair = a/4 ± r for parent selected root a.
    pub(crate) half_diff: Complex64,
    /// Pair difference (e2 − e3) of the parent triple entering this step.
    pub(crate) parent_gap: Complex64,
    /// Closest-pair difference of this step's triple, cancellation-free.
    pub(crate) gap: Complex64,
}

impl ChainStep {
    /// (e2 − e1)(e3 − e1) of this step's triple, equal to parent_gap²/16.
    pub(crate) fn cross_product(&self) -> Complex64 {
        self.parent_gap * self.parent_gap / 16.0
    }
}

/// Chain of root triples of iterated optimal index-2 subgroups, plus the
/// limit period of the starting lattice.
#[derive(Debug, Clone)]
pub struct LandenChain {
    pub(crate) steps: Vec<ChainStep>,
    omega: Complex64,
}

impl LandenChain {
    /// Number of Landen steps taken.
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Shortest period of the starting lattice, sign-normalized so that
    /// Re ω > 0, or Re ω = 0 and Im ω > 0.
    pub fn omega(&self) -> Complex64 {
        self.omega
    }

    /// Root triples of the chain, distinguished root first.
    pub fn steps(&self) -> impl ExactSizeIterator<Item = SelectedRoots> + '_ {
        self.steps.iter().map(|s| s.roots)
    }

    /// Per-step distance between the two closest roots of each triple.
    ///
    /// These drive the stopping rule and decay quadratically.
    pub fn gaps(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        self.steps.iter().map(|s| s.gap.norm())
    }
}

/// Output of one stable Landen step.
struct StepOutcome {
    step: ChainStep,
    /// Selected root of this step's triple for the next iteration.
    next_selected: Complex64,
    /// Largest pairwise distance of this step's triple.
    max_diff: f64,
}

/// One Landen step from (selected root a, pair difference d), keeping the
/// small pairwise difference of the output triple free of cancellation:
/// (3a/4 + r)(3a/4 − r) = d²/16, so the smaller factor is recovered from the
/// product and the larger one.
fn landen_step_stable(a: Complex64, d: Complex64) -> StepOutcome {
    let r = ((9.0 * a * a - d * d) / 16.0).sqrt();
    let f1 = -a / 2.0;
    let p_plus = a / 4.0 + r;
    let p_minus = a / 4.0 - r;

    let u = 0.75 * a;
    let zero = Complex64::new(0.0, 0.0);
    // diff_plus = p_plus − f1 = u + r, diff_minus = p_minus − f1 = u − r
    let (diff_plus, diff_minus) = if (u + r).norm() >= (u - r).norm() {
        let big = u + r;
        let small = if big == zero {
            u - r
        } else {
            (d * d / 16.0) / big
        };
        (big, small)
    } else {
        let big = u - r;
        let small = if big == zero {
            u + r
        } else {
            (d * d / 16.0) / big
        };
        (small, big)
    };
    let pair_diff = 2.0 * r; // p_plus − p_minus

    let mut gap = pair_diff;
    let mut next_selected = f1;
    let mut max_diff = pair_diff.norm();
    if diff_plus.norm() < gap.norm() {
        // closest pair {p_plus, f1}: the remaining root is p_minus
        gap = diff_plus;
        next_selected = p_minus;
    }
    if diff_minus.norm() < gap.norm() {
        // closest pair {p_minus, f1}: the remaining root is p_plus
        gap = diff_minus;
        next_selected = p_plus;
    }
    max_diff = max_diff.max(diff_plus.norm()).max(diff_minus.norm());

    StepOutcome {
        step: ChainStep {
            roots: SelectedRoots::new(f1, (p_plus, p_minus)),
            half_diff: r,
            parent_gap: d,
            gap,
        },
        next_selected,
        max_diff,
    }
}

/// The Landen map on a selected triple.
///
/// Degenerate inputs produce degenerate outputs; no error paths. The two
/// square-root branches only swap the unordered pair.
pub fn landen_step(s: SelectedRoots) -> SelectedRoots {
    landen_step_stable(s.selected, s.pair.0 - s.pair.1)
        .step
        .roots
}

/// Selects the root whose two distances to the others dominate the remaining
/// pair's mutual distance; equivalently e1 of a properly ordered reordering.
///
/// Equianharmonic triples (all pairwise distances equal) resolve to the
/// lexicographically smallest root by (Re, Im).
pub fn select_optimal(t: RootTriple) -> SelectedRoots {
    let o = order_properly(t);
    SelectedRoots::new(o.e1, (o.e2, o.e3))
}

/// Iterates the optimally selected Landen map from a properly ordered triple
/// until the closest pair of the produced triple collapses relative to its
/// largest pairwise distance, then recovers the limit period.
pub fn iterate_optimal(t: RootTriple, tol: &Tolerances) -> Result<LandenChain> {
    if !(t.e1.is_finite() && t.e2.is_finite() && t.e3.is_finite()) {
        return Err(Error::NonFinite);
    }
    let mut a = t.e1;
    let mut d = t.e2 - t.e3;
    let mut steps = Vec::new();
    let mut converged = false;
    for _ in 0..tol.max_iter.max(1) {
        let out = landen_step_stable(a, d);
        let gap_abs = out.step.gap.norm();
        steps.push(out.step);
        if gap_abs <= tol.eps_stop * out.max_diff {
            converged = true;
            break;
        }
        a = out.next_selected;
        d = out.step.gap;
    }
    if !converged {
        return Err(Error::NoConvergence);
    }
    let last = steps.last().expect("at least one step");
    let omega = normalize_period(
        Complex64::new(0.0, std::f64::consts::PI) / (3.0 * last.roots.selected).sqrt(),
    );
    if !omega.is_finite() {
        return Err(Error::DegenerateCurve);
    }
    Ok(LandenChain { steps, omega })
}

/// Sign normalization for periods: Re > 0, or Re = 0 and Im > 0. Real parts
/// within a few ulps of zero count as zero so axis-aligned periods normalize
/// stably.
pub(crate) fn normalize_period(w: Complex64) -> Complex64 {
    let floor = 16.0 * f64::EPSILON * w.norm();
    if w.re < -floor || (w.re.abs() <= floor && w.im < 0.0) {
        -w
    } else {
        w
    }
}

/// Per-step invariants and discriminant of the chain's subgroups, computed
/// from the parent triples:
///
/// ```text
/// g2' = 3 e1²/4 + (e1 − e2)(e1 − e3)
/// g3' = −e1³/8 + (e1/2)(e1 − e2)(e1 − e3)
/// Δ'  = (1/16)(e1 − e2)(e1 − e3)(e2 − e3)⁴
/// ```
///
/// where (e1 − e2)(e1 − e3) = 4r² and (e2 − e3) is the stored parent gap, so
/// the tiny late-chain discriminants come out of products only.
pub fn chain_invariant_deltas(chain: &LandenChain) -> Vec<(Invariants, Complex64)> {
    chain
        .steps
        .iter()
        .map(|s| {
            let a = -2.0 * s.roots.selected;
            let r = s.half_diff;
            let d = s.parent_gap;
            let cross = 4.0 * r * r;
            let g2 = 0.75 * a * a + cross;
            let g3 = -a * a * a / 8.0 + 0.5 * a * cross;
            let d2 = d * d;
            let delta = cross * d2 * d2 / 16.0;
            (Invariants::new(g2, g3), delta)
        })
        .collect()
}

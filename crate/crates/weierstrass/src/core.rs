//! Curve invariants, the cubic root solver, proper ordering, and rank
//! classification.
//!
//! A discrete additive subgroup of the complex plane is identified by the
//! invariants (g2, g3) of the curve y² = 4x³ − g2·x − g3. The subgroup is a
//! full lattice exactly when the discriminant Δ = g2³ − 27·g3² is nonzero;
//! Δ = 0 with (g2, g3) ≠ (0, 0) corresponds to a rank-1 group and
//! (g2, g3) = (0, 0) to the trivial group.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Curve invariants (g2, g3) of y² = 4x³ − g2·x − g3.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Invariants {
    pub g2: Complex64,
    pub g3: Complex64,
}

impl Invariants {
    pub fn new(g2: Complex64, g3: Complex64) -> Self {
        Self { g2, g3 }
    }

    pub fn is_finite(&self) -> bool {
        self.g2.is_finite() && self.g3.is_finite()
    }
}

/// Ordered triple of roots of 4x³ − g2·x − g3. The roots always sum to zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootTriple {
    pub e1: Complex64,
    pub e2: Complex64,
    pub e3: Complex64,
}

impl RootTriple {
    pub fn new(e1: Complex64, e2: Complex64, e3: Complex64) -> Self {
        Self { e1, e2, e3 }
    }

    pub fn as_array(&self) -> [Complex64; 3] {
        [self.e1, self.e2, self.e3]
    }

    /// True when |e2 − e3| ≤ |e1 − e3| ≤ |e1 − e2|.
    pub fn is_properly_ordered(&self) -> bool {
        let d23 = (self.e2 - self.e3).norm();
        let d13 = (self.e1 - self.e3).norm();
        let d12 = (self.e1 - self.e2).norm();
        d23 <= d13 && d13 <= d12
    }

    pub fn max_abs(&self) -> f64 {
        self.e1.norm().max(self.e2.norm()).max(self.e3.norm())
    }
}

/// One distinguished root together with the unordered remaining pair.
///
/// This is the domain and codomain of the Landen map: the distinguished root
/// selects which index-2 subgroup is taken, while every formula consuming the
/// pair is symmetric under swapping its members.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SelectedRoots {
    pub selected: Complex64,
    pub pair: (Complex64, Complex64),
}

impl SelectedRoots {
    pub fn new(selected: Complex64, pair: (Complex64, Complex64)) -> Self {
        Self { selected, pair }
    }

    /// Forgets the selection, returning the plain triple (selected first).
    pub fn forget(&self) -> RootTriple {
        RootTriple::new(self.selected, self.pair.0, self.pair.1)
    }
}

/// Rank of the discrete subgroup attached to a pair of invariants.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubgroupRank {
    /// Full lattice (Δ ≠ 0).
    Rank2,
    /// Degenerate curve with a double root; the subgroup is ω·ℤ.
    Rank1,
    /// Trivial subgroup {0} (g2 = g3 = 0).
    Rank0,
}

/// Numerical thresholds shared by the iterative algorithms.
///
/// All members must be strictly positive and `max_iter ≥ 1`.
#[derive(Debug, Clone, Copy)]
pub struct Tolerances {
    /// Relative stopping threshold for the Landen iteration.
    pub eps_stop: f64,
    /// Iteration cap for the Landen chains.
    pub max_iter: usize,
    /// Relative discriminant threshold below which a curve is treated as
    /// degenerate.
    pub eps_degenerate: f64,
    /// Relative pole-proximity threshold for function evaluation.
    pub eps_pole: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            eps_stop: 2f64.powi(-52),
            max_iter: 64,
            eps_degenerate: 2f64.powi(-40),
            eps_pole: 2f64.powi(-48),
        }
    }
}

/// Δ = g2³ − 27·g3².
pub fn discriminant(inv: Invariants) -> Result<Complex64> {
    if !inv.is_finite() {
        return Err(Error::NonFinite);
    }
    Ok(inv.g2 * inv.g2 * inv.g2 - 27.0 * inv.g3 * inv.g3)
}

/// Classifies the subgroup rank from the invariants.
///
/// Thresholds are relative: the trivial group requires
/// max(|g2|, |g3|^(2/3)) ≤ eps_degenerate, a rank-1 group requires
/// |Δ| ≤ eps_degenerate · max(|g2|³, 27|g3|²).
pub fn classify(inv: Invariants, tol: &Tolerances) -> Result<SubgroupRank> {
    if !inv.is_finite() {
        return Err(Error::NonFinite);
    }
    let s2 = inv.g2.norm();
    let s3 = inv.g3.norm().powf(2.0 / 3.0);
    if s2.max(s3) <= tol.eps_degenerate {
        return Ok(SubgroupRank::Rank0);
    }
    let delta = discriminant(inv)?;
    let scale = (s2 * s2 * s2).max(27.0 * inv.g3.norm_sqr());
    if delta.norm() <= tol.eps_degenerate * scale {
        Ok(SubgroupRank::Rank1)
    } else {
        Ok(SubgroupRank::Rank2)
    }
}

/// Roots of 4x³ − g2·x − g3 in unspecified order.
///
/// Cardano on the depressed cubic with the principal cube root, one Newton
/// polish step per root, then the residual of e1 + e2 + e3 = 0 is split
/// evenly so the returned triple sums to zero at machine precision.
pub fn solve_cubic(inv: Invariants) -> Result<RootTriple> {
    if !inv.is_finite() {
        return Err(Error::NonFinite);
    }
    let zero = Complex64::new(0.0, 0.0);
    if inv.g2 == zero && inv.g3 == zero {
        return Ok(RootTriple::new(zero, zero, zero));
    }

    // x^3 + p x + q with p = -g2/4, q = -g3/4
    let p = -inv.g2 / 4.0;
    let q = -inv.g3 / 4.0;
    let disc = (q / 2.0) * (q / 2.0) + (p / 3.0) * (p / 3.0) * (p / 3.0);
    let s = disc.sqrt();
    // pick the branch that avoids cancellation in -q/2 ± s
    let c1 = -q / 2.0 + s;
    let c2 = -q / 2.0 - s;
    let u3 = if c1.norm() >= c2.norm() { c1 } else { c2 };
    let u = u3.cbrt();
    let w = Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);

    let mut roots = if u == zero {
        // p = q = 0 was handled above, so u = 0 only for exact cancellation;
        // fall back to the pure cube-root case x^3 = -q.
        let r = (-q).cbrt();
        [r, r * w, r * w.conj()]
    } else {
        let v = -p / (3.0 * u);
        [u + v, u * w + v * w.conj(), u * w.conj() + v * w]
    };

    // one Newton step against 4x^3 - g2 x - g3
    for e in roots.iter_mut() {
        let f = 4.0 * *e * *e * *e - inv.g2 * *e - inv.g3;
        let df = 12.0 * *e * *e - inv.g2;
        let scale = 12.0 * e.norm_sqr() + inv.g2.norm();
        if df.norm() > 1e-14 * scale {
            *e -= f / df;
        }
    }

    let mean = (roots[0] + roots[1] + roots[2]) / 3.0;
    Ok(RootTriple::new(
        roots[0] - mean,
        roots[1] - mean,
        roots[2] - mean,
    ))
}

/// Permutation of the input satisfying |e2 − e3| ≤ |e1 − e3| ≤ |e1 − e2|.
///
/// Among admissible permutations the lexicographically smallest by
/// (Re, Im) of e1, then of e2, is returned, so ties (coincident distances,
/// equianharmonic triples) resolve deterministically.
pub fn order_properly(t: RootTriple) -> RootTriple {
    let e = t.as_array();
    const PERMS: [[usize; 3]; 6] = [
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    let mut best: Option<RootTriple> = None;
    for perm in PERMS {
        let cand = RootTriple::new(e[perm[0]], e[perm[1]], e[perm[2]]);
        if !cand.is_properly_ordered() {
            continue;
        }
        best = match best {
            None => Some(cand),
            Some(b) => {
                let ka = (cand.e1.re, cand.e1.im, cand.e2.re, cand.e2.im);
                let kb = (b.e1.re, b.e1.im, b.e2.re, b.e2.im);
                Some(if ka < kb { cand } else { b })
            }
        };
    }
    // every triple admits at least one proper ordering
    best.expect("no admissible permutation")
}

/// g2 = 2(e1² + e2² + e3²), g3 = 4·e1·e2·e3 from a sum-zero triple.
pub fn invariants_from_roots(t: RootTriple) -> Invariants {
    let g2 = 2.0 * (t.e1 * t.e1 + t.e2 * t.e2 + t.e3 * t.e3);
    let g3 = 4.0 * t.e1 * t.e2 * t.e3;
    Invariants::new(g2, g3)
}

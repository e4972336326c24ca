//! Reduced period basis of a lattice from its invariants, plus quasi-periods
//! of ζ.
//!
//! The shortest period comes straight out of the optimal Landen chain. The
//! second one is found by iterating the transformation with a non-optimal
//! selection, which doubles the shortest period while keeping the second one
//! fixed, until the doubled vector stops dominating; the smallest period of
//! the lattice reached at that point is the second basis vector up to a ±ω1
//! adjustment.

use num_complex::Complex64;

use crate::core::{
    classify, order_properly, solve_cubic, Invariants, RootTriple, SubgroupRank, Tolerances,
};
use crate::error::{Error, Result};
use crate::functions::eval_unreduced;
use crate::landen::{iterate_optimal, normalize_period, LandenChain};

/// The two shortest independent periods, with |ω1| ≤ |ω2|, |ω2| ≤ |ω2 ± ω1|,
/// and Im(ω2/ω1) > 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedBasis {
    pub omega1: Complex64,
    pub omega2: Complex64,
}

impl ReducedBasis {
    /// Lattice point m·ω1 + n·ω2.
    pub fn point(&self, m: i64, n: i64) -> Complex64 {
        self.omega1 * m as f64 + self.omega2 * n as f64
    }
}

/// Quasi-periods η_k = 2ζ(ω_k/2); they satisfy the Legendre relation
/// η1·ω2 − η2·ω1 = 2πi for an oriented basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuasiPeriods {
    pub eta1: Complex64,
    pub eta2: Complex64,
}

fn require_rank2(inv: Invariants, tol: &Tolerances) -> Result<()> {
    match classify(inv, tol)? {
        SubgroupRank::Rank2 => Ok(()),
        _ => Err(Error::DegenerateCurve),
    }
}

/// Shortest nonzero lattice period, sign-normalized.
pub fn smallest_period(inv: Invariants, tol: &Tolerances) -> Result<Complex64> {
    require_rank2(inv, tol)?;
    let t = order_properly(solve_cubic(inv)?);
    Ok(iterate_optimal(t, tol)?.omega())
}

/// One non-optimal Landen application: select `sel` against the pair.
fn landen_non_optimal(sel: Complex64, pair: (Complex64, Complex64)) -> [Complex64; 3] {
    let d = pair.0 - pair.1;
    let r = ((9.0 * sel * sel - d * d) / 16.0).sqrt();
    [-sel / 2.0, sel / 4.0 + r, sel / 4.0 - r]
}

pub(crate) fn reduced_basis_impl(
    t: RootTriple,
    chain: &LandenChain,
    tol: &Tolerances,
) -> Result<ReducedBasis> {
    let omega1 = chain.omega();

    // h chain: start from the non-optimal selection of e2
    let mut h = landen_non_optimal(t.e2, (t.e1, t.e3));
    let mut stopped = false;
    for _ in 0..tol.max_iter.max(1) {
        let d_pair = (h[1] - h[2]).norm();
        let d_1a = (h[0] - h[1]).norm();
        let d_1b = (h[0] - h[2]).norm();
        if d_1a >= d_pair && d_1b >= d_pair {
            // keep h[0] first, order the pair so the farther member is next,
            // then select that member (again non-optimal); exact distance
            // ties fall back to the lexicographic rule of order_properly
            let (far, near) =
                if d_1a > d_1b || (d_1a == d_1b && (h[1].re, h[1].im) < (h[2].re, h[2].im)) {
                    (h[1], h[2])
                } else {
                    (h[2], h[1])
                };
            h = landen_non_optimal(far, (h[0], near));
        } else {
            stopped = true;
            break;
        }
    }
    if !stopped {
        return Err(Error::NoConvergence);
    }

    // smallest period of the lattice carrying the k-triple
    let k = order_properly(RootTriple::new(h[0], h[1], h[2]));
    let tail = iterate_optimal(k, tol)?;
    let mut omega2 = tail.omega();

    // the k-lattice's smallest period may differ from a reduced second basis
    // vector by a multiple of omega1
    loop {
        let up = omega2 + omega1;
        let dn = omega2 - omega1;
        let best = if up.norm() < dn.norm() { up } else { dn };
        if best.norm() < omega2.norm() {
            omega2 = best;
        } else {
            break;
        }
    }
    if (omega2 / omega1).im < 0.0 {
        omega2 = -omega2;
    }
    Ok(ReducedBasis { omega1, omega2 })
}

/// Reduced basis (ω1, ω2) of the lattice with invariants `inv`.
pub fn reduced_basis(inv: Invariants, tol: &Tolerances) -> Result<ReducedBasis> {
    require_rank2(inv, tol)?;
    let t = order_properly(solve_cubic(inv)?);
    let chain = iterate_optimal(t, tol)?;
    reduced_basis_impl(t, &chain, tol)
}

/// Generator of a rank-1 group from its invariants:
/// ω = (4π⁴/(3 g2))^(1/4) with principal branches, sign-normalized, with the
/// consistency check g3 = 8π⁶/(27 ω⁶).
pub fn rank1_period(inv: Invariants) -> Result<Complex64> {
    let tol = Tolerances::default();
    match classify(inv, &tol)? {
        SubgroupRank::Rank1 => {}
        _ => return Err(Error::DegenerateCurve),
    }
    let pi = std::f64::consts::PI;
    let omega = (4.0 * pi.powi(4) / (3.0 * inv.g2)).powc(Complex64::new(0.25, 0.0));
    let omega = normalize_period(omega);
    let w6 = omega.powu(6);
    let g3_implied = 8.0 * pi.powi(6) / (27.0 * w6);
    if (inv.g3 - g3_implied).norm() > 1e-10 * inv.g3.norm() {
        return Err(Error::InconsistentInvariants);
    }
    Ok(omega)
}

/// Quasi-periods η_k = 2ζ(ω_k/2) evaluated on the lattice of `inv`.
pub fn quasi_periods(
    basis: &ReducedBasis,
    inv: Invariants,
    tol: &Tolerances,
) -> Result<QuasiPeriods> {
    require_rank2(inv, tol)?;
    let t = order_properly(solve_cubic(inv)?);
    let chain = iterate_optimal(t, tol)?;
    quasi_periods_impl(basis, &chain, inv.g2, tol)
}

pub(crate) fn quasi_periods_impl(
    basis: &ReducedBasis,
    chain: &LandenChain,
    g2: Complex64,
    tol: &Tolerances,
) -> Result<QuasiPeriods> {
    let v1 = eval_unreduced(chain, g2, basis.omega1 / 2.0, true, tol)?;
    let v2 = eval_unreduced(chain, g2, basis.omega2 / 2.0, true, tol)?;
    Ok(QuasiPeriods {
        eta1: 2.0 * v1.zeta,
        eta2: 2.0 * v2.zeta,
    })
}

#[cfg(test)]
#[allow(clippy::excessive_precision)] // frozen high-precision fixtures
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    // real half-period of y² = 4x³ − 4x, fixed by adaptive quadrature of
    // 2∫ dx/√(4x³−4x) over [1, ∞) (see tests/identities.rs for the oracle);
    // agrees with Γ(1/4)²/(2√(2π))
    const LEMNISCATIC: f64 = 2.62205755429211981;

    #[test]
    fn smallest_period_reference_curve() {
        let w = smallest_period(
            Invariants::new(c(3.0, 1.0), c(2.0, 0.0)),
            &Tolerances::default(),
        )
        .unwrap();
        let want = c(
            2.417537043081800860284148042662,
            -0.086555072799597063046083291895,
        );
        assert!((w - want).norm() <= 1e-13 * want.norm());
    }

    #[test]
    fn smallest_period_square_lattice() {
        let w = smallest_period(
            Invariants::new(c(4.0, 0.0), c(0.0, 0.0)),
            &Tolerances::default(),
        )
        .unwrap();
        // the square lattice has four shortest vectors; sign normalization
        // leaves either the real or the imaginary one
        assert!((w.norm() - LEMNISCATIC).abs() < 1e-12 * LEMNISCATIC);
    }

    #[test]
    fn smallest_period_scaling() {
        let tol = Tolerances::default();
        let base = smallest_period(Invariants::new(c(3.0, 1.0), c(2.0, 0.0)), &tol).unwrap();
        let lam = 2.0f64;
        let scaled = smallest_period(
            Invariants::new(c(3.0, 1.0) / lam.powi(4), c(2.0, 0.0) / lam.powi(6)),
            &tol,
        )
        .unwrap();
        assert!((scaled - lam * base).norm() <= 1e-12 * (lam * base).norm());
    }

    #[test]
    fn reduced_basis_square_lattice() {
        let b = reduced_basis(
            Invariants::new(c(4.0, 0.0), c(0.0, 0.0)),
            &Tolerances::default(),
        )
        .unwrap();
        let ratio = b.omega2 / b.omega1;
        assert!((ratio - c(0.0, 1.0)).norm() < 1e-12);
        assert!(b.omega1.norm() <= b.omega2.norm() + 1e-15);
        assert!((b.omega2 / b.omega1).im > 0.0);
    }

    #[test]
    fn reduced_basis_is_lagrange_reduced() {
        let b = reduced_basis(
            Invariants::new(c(3.0, 1.0), c(2.0, 0.0)),
            &Tolerances::default(),
        )
        .unwrap();
        assert!(b.omega1.norm() <= b.omega2.norm() * (1.0 + 1e-14));
        for s in [-1.0, 1.0] {
            assert!(b.omega2.norm() <= (b.omega2 + s * b.omega1).norm() * (1.0 + 1e-14));
        }
    }

    #[test]
    fn degenerate_curves_are_rejected() {
        let tol = Tolerances::default();
        let pi = std::f64::consts::PI;
        let rank1 = Invariants::new(
            c(4.0 * pi.powi(4) / 3.0, 0.0),
            c(8.0 * pi.powi(6) / 27.0, 0.0),
        );
        assert!(matches!(
            smallest_period(rank1, &tol),
            Err(Error::DegenerateCurve)
        ));
        assert!(matches!(
            reduced_basis(Invariants::new(c(0.0, 0.0), c(0.0, 0.0)), &tol),
            Err(Error::DegenerateCurve)
        ));
    }

    #[test]
    fn rank1_period_examples() {
        let pi = std::f64::consts::PI;
        let g2 = 4.0 * pi.powi(4) / 3.0;
        let g3 = 8.0 * pi.powi(6) / 27.0;
        let w = rank1_period(Invariants::new(c(g2, 0.0), c(g3, 0.0))).unwrap();
        assert!((w - c(1.0, 0.0)).norm() < 1e-12);

        let w = rank1_period(Invariants::new(c(g2 * 16.0, 0.0), c(g3 * 64.0, 0.0))).unwrap();
        assert!((w - c(0.5, 0.0)).norm() < 1e-12);

        assert!(matches!(
            rank1_period(Invariants::new(c(g2, 0.0), c(-g3, 0.0))),
            Err(Error::InconsistentInvariants)
        ));
        assert!(matches!(
            rank1_period(Invariants::new(c(3.0, 1.0), c(2.0, 0.0))),
            Err(Error::DegenerateCurve)
        ));
    }

    #[test]
    fn legendre_relation() {
        let tol = Tolerances::default();
        for inv in [
            Invariants::new(c(4.0, 0.0), c(0.0, 0.0)),
            Invariants::new(c(3.0, 1.0), c(2.0, 0.0)),
            Invariants::new(c(-2.3, 4.1), c(1.7, -0.4)),
        ] {
            let b = reduced_basis(inv, &tol).unwrap();
            let q = quasi_periods(&b, inv, &tol).unwrap();
            let res = q.eta1 * b.omega2 - q.eta2 * b.omega1 - c(0.0, 2.0 * std::f64::consts::PI);
            assert!(
                res.norm() <= 1e-12 * 2.0 * std::f64::consts::PI,
                "legendre residual {} for {inv:?}",
                res.norm()
            );
        }
    }

    #[test]
    fn square_lattice_eta_rotation() {
        let tol = Tolerances::default();
        let inv = Invariants::new(c(4.0, 0.0), c(0.0, 0.0));
        let b = reduced_basis(inv, &tol).unwrap();
        let q = quasi_periods(&b, inv, &tol).unwrap();
        assert!((q.eta2 - c(0.0, -1.0) * q.eta1).norm() <= 1e-11 * q.eta1.norm());
    }
}

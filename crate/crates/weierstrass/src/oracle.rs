//! Slow reference implementations for the test suites: truncated defining
//! lattice sums for the Weierstrass functions and invariants, and
//! brute-force lattice geometry.
//!
//! Lattice points u and −u are paired before accumulation so the odd-order
//! tail terms cancel exactly and the truncation error drops to O(R⁻²).
//! The σ product is accumulated as Σ[log(1 − z/u) + z/u + z²/2u²] over the
//! same pairs with principal logs; keep z inside the fundamental cell so no
//! single factor wraps the branch cut.

use num_complex::Complex64;

use crate::core::Invariants;
use crate::functions::WeierstrassValues;
use crate::periods::ReducedBasis;

/// One representative (m, n) per ±pair: n > 0, or n = 0 and m > 0.
fn half_lattice(r: i64) -> impl Iterator<Item = (i64, i64)> {
    (-r..=r).flat_map(move |m| {
        (0..=r).filter_map(move |n| if n == 0 && m <= 0 { None } else { Some((m, n)) })
    })
}

/// Truncated defining sums for (℘, ℘′, ζ, σ) over max(|m|,|n|) ≤ R.
pub fn oracle_weierstrass(basis: &ReducedBasis, z: Complex64, r: i64) -> WeierstrassValues {
    let mut p = 1.0 / (z * z);
    let mut dp = -2.0 / (z * z * z);
    let mut zeta = 1.0 / z;
    let mut sigma_log = Complex64::new(0.0, 0.0);
    for (m, n) in half_lattice(r) {
        let u = basis.point(m, n);
        let zm = z - u;
        let zp = z + u;
        let u2 = u * u;
        p += 1.0 / (zm * zm) + 1.0 / (zp * zp) - 2.0 / u2;
        dp += -2.0 / (zm * zm * zm) - 2.0 / (zp * zp * zp);
        zeta += 1.0 / zm + 1.0 / zp + 2.0 * z / u2;
        sigma_log += (1.0 - z / u).ln() + (1.0 + z / u).ln() + z * z / u2;
    }
    WeierstrassValues {
        p,
        dp,
        zeta,
        sigma: z * sigma_log.exp(),
    }
}

/// Truncated invariant sums g2 = Σ 60/u⁴, g3 = Σ 140/u⁶.
pub fn oracle_invariants(basis: &ReducedBasis, r: i64) -> Invariants {
    let mut g2 = Complex64::new(0.0, 0.0);
    let mut g3 = Complex64::new(0.0, 0.0);
    for (m, n) in half_lattice(r) {
        let u2 = basis.point(m, n).powu(2);
        let u4 = u2 * u2;
        // ±u contribute equally to the even sums
        g2 += 120.0 / u4;
        g3 += 280.0 / (u4 * u2);
    }
    Invariants::new(g2, g3)
}

/// Exhaustive shortest vector and shortest independent vector over
/// m·ω1 + n·ω2 with |m|, |n| ≤ K.
pub fn oracle_shortest_vectors(
    omega1: Complex64,
    omega2: Complex64,
    k: i64,
) -> (Complex64, Complex64) {
    let mut best: Option<(Complex64, i64, i64)> = None;
    for m in -k..=k {
        for n in -k..=k {
            if m == 0 && n == 0 {
                continue;
            }
            let u = omega1 * m as f64 + omega2 * n as f64;
            if best.is_none_or(|(b, _, _)| u.norm() < b.norm()) {
                best = Some((u, m, n));
            }
        }
    }
    let (b, bm, bn) = best.expect("k >= 1");
    let mut second: Option<Complex64> = None;
    for m in -k..=k {
        for n in -k..=k {
            if m * bn - n * bm == 0 {
                continue; // dependent on the first minimum
            }
            let u = omega1 * m as f64 + omega2 * n as f64;
            if second.is_none_or(|s| u.norm() < s.norm()) {
                second = Some(u);
            }
        }
    }
    (b, second.expect("independent vector exists"))
}

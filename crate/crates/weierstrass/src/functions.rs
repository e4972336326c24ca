//! Evaluation of ℘, ℘′, ζ, σ and the Abel map, with argument reduction.
//!
//! The lattice path initializes the four functions with the rank-1 closed
//! forms of the chain's limit group at half the argument, walks the Landen
//! relations back up the chain (the σ channel carries σ² throughout), and
//! finishes with the duplication formulas. Running at z/2 is what makes the
//! sign of σ recoverable: σ(z) = −℘′(z/2)·σ⁴(z/2) needs only σ².
//!
//! When σ is not requested the evaluation runs at z directly and skips the
//! duplication step.

use num_complex::Complex64;

use crate::core::{
    classify, order_properly, solve_cubic, Invariants, RootTriple, SubgroupRank, Tolerances,
};
use crate::error::{Error, Result};
use crate::landen::{iterate_optimal, normalize_period, LandenChain};
use crate::periods::{quasi_periods_impl, reduced_basis_impl, QuasiPeriods, ReducedBasis};

const PI: f64 = std::f64::consts::PI;

/// Values of the four Weierstrass functions at one argument.
///
/// `sigma` is NaN when the evaluation was requested without the σ channel.
#[derive(Debug, Clone, Copy)]
pub struct WeierstrassValues {
    pub p: Complex64,
    pub dp: Complex64,
    pub zeta: Complex64,
    pub sigma: Complex64,
}

/// Affine point (x, y) on y² = 4x³ − g2·x − g3.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub x: Complex64,
    pub y: Complex64,
}

impl CurvePoint {
    pub fn new(x: Complex64, y: Complex64) -> Self {
        Self { x, y }
    }
}

fn nan_c() -> Complex64 {
    Complex64::new(f64::NAN, f64::NAN)
}

/// Rank-1 closed forms for the group ω·ℤ at argument u.
/// Returns (℘, ℘′, ζ, σ).
fn rank1_closed_forms(
    omega: Complex64,
    u: Complex64,
) -> (Complex64, Complex64, Complex64, Complex64) {
    let arg = PI * u / omega;
    let s = arg.sin();
    let co = arg.cos();
    let pi2_w2 = PI * PI / (omega * omega);
    let s2 = s * s;
    let p = pi2_w2 * (1.0 / s2 - 1.0 / 3.0);
    let dp = -2.0 * PI * PI * PI * co / (omega * omega * omega * s2 * s);
    let zeta = pi2_w2 * u / 3.0 + PI / omega * (co / s);
    let sigma = omega / PI * (pi2_w2 * u * u / 6.0).exp() * s;
    (p, dp, zeta, sigma)
}

/// Chain-based evaluation without argument reduction.
///
/// With `with_sigma` the run happens at z/2 and ends with the duplication
/// formulas; otherwise at z directly, leaving `sigma` NaN.
pub(crate) fn eval_unreduced(
    chain: &LandenChain,
    g2: Complex64,
    z: Complex64,
    with_sigma: bool,
    tol: &Tolerances,
) -> Result<WeierstrassValues> {
    if !z.is_finite() {
        return Err(Error::NonFinite);
    }
    let omega = chain.omega();
    if z.norm() < tol.eps_pole * omega.norm() {
        return Err(Error::PoleProximity);
    }
    let u = if with_sigma { z / 2.0 } else { z };
    let (mut p, mut dp, mut zeta, sig0) = rank1_closed_forms(omega, u);
    if !p.is_finite() {
        return Err(Error::PoleProximity);
    }
    // the σ channel carries σ² across the recurrences
    let mut sig2 = if with_sigma { sig0 * sig0 } else { nan_c() };

    for step in chain.steps.iter().rev() {
        let e1 = step.roots.selected;
        let cross = step.cross_product();
        let denom = p - e1;
        if denom.norm() == 0.0 {
            return Err(Error::PoleProximity);
        }
        let p_next = p + cross / denom;
        let dp_next = dp * (1.0 - cross / (denom * denom));
        let zeta_next = 2.0 * zeta + dp / (2.0 * denom) + e1 * u;
        if with_sigma {
            sig2 = (e1 * u * u).exp() * denom * sig2 * sig2;
        }
        p = p_next;
        dp = dp_next;
        zeta = zeta_next;
    }

    let vals = if with_sigma {
        // duplication from z/2 to z
        if dp.norm() == 0.0 {
            return Err(Error::PoleProximity);
        }
        let ppp = 6.0 * p * p - g2 / 2.0; // ℘″(z/2)
        let b = ppp / (2.0 * dp);
        WeierstrassValues {
            p: -2.0 * p + b * b,
            dp: -dp + ppp / (4.0 * dp) * (12.0 * p - (ppp / dp) * (ppp / dp)),
            zeta: 2.0 * zeta + b,
            sigma: -dp * sig2 * sig2,
        }
    } else {
        WeierstrassValues {
            p,
            dp,
            zeta,
            sigma: nan_c(),
        }
    };
    if vals.p.is_finite() && vals.dp.is_finite() && vals.zeta.is_finite() {
        Ok(vals)
    } else {
        Err(Error::PoleProximity)
    }
}

/// Rank-1 generator recovered from the simple root of a properly ordered
/// near-degenerate triple: ω² = 2π²/(3 e1).
fn rank1_omega_from_roots(t: RootTriple) -> Result<Complex64> {
    let w = (2.0 * PI * PI / (3.0 * t.e1)).sqrt();
    let w = normalize_period(w);
    if w.is_finite() {
        Ok(w)
    } else {
        Err(Error::DegenerateCurve)
    }
}

fn eval_rank1(inv: Invariants, z: Complex64, tol: &Tolerances) -> Result<WeierstrassValues> {
    let t = order_properly(solve_cubic(inv)?);
    let omega = rank1_omega_from_roots(t)?;
    // poles sit on ω·ℤ
    let m = (z / omega).re.round();
    if (z - m * omega).norm() < tol.eps_pole * omega.norm() {
        return Err(Error::PoleProximity);
    }
    let (p, dp, zeta, sigma) = rank1_closed_forms(omega, z);
    Ok(WeierstrassValues { p, dp, zeta, sigma })
}

fn eval_rank0(z: Complex64) -> Result<WeierstrassValues> {
    if z.norm() == 0.0 {
        return Err(Error::PoleProximity);
    }
    let z2 = z * z;
    Ok(WeierstrassValues {
        p: 1.0 / z2,
        dp: -2.0 / (z2 * z),
        zeta: 1.0 / z,
        sigma: z,
    })
}

/// All four Weierstrass functions at z, without argument reduction.
///
/// The caller is responsible for z being inside (or near) the fundamental
/// cell and away from lattice points; `weierstrass_at` is the reducing entry
/// point.
pub fn weierstrass_all(
    inv: Invariants,
    z: Complex64,
    tol: &Tolerances,
) -> Result<WeierstrassValues> {
    if !inv.is_finite() || !z.is_finite() {
        return Err(Error::NonFinite);
    }
    match classify(inv, tol)? {
        SubgroupRank::Rank0 => eval_rank0(z),
        SubgroupRank::Rank1 => eval_rank1(inv, z, tol),
        SubgroupRank::Rank2 => {
            let t = order_properly(solve_cubic(inv)?);
            let chain = iterate_optimal(t, tol)?;
            eval_unreduced(&chain, inv.g2, z, true, tol)
        }
    }
}

/// Precomputed lattice data shared by repeated evaluations on one curve.
pub(crate) struct Rank2Context {
    pub(crate) chain: LandenChain,
    pub(crate) basis: ReducedBasis,
    pub(crate) g2: Complex64,
    eta: Option<QuasiPeriods>,
}

impl Rank2Context {
    /// Builds the chain and reduced basis; errors with `DegenerateCurve` when
    /// the invariants do not describe a lattice.
    pub(crate) fn new(inv: Invariants, tol: &Tolerances) -> Result<Self> {
        match classify(inv, tol)? {
            SubgroupRank::Rank2 => {}
            _ => return Err(Error::DegenerateCurve),
        }
        let t = order_properly(solve_cubic(inv)?);
        let chain = iterate_optimal(t, tol)?;
        let basis = reduced_basis_impl(t, &chain, tol)?;
        Ok(Self {
            chain,
            basis,
            g2: inv.g2,
            eta: None,
        })
    }

    pub(crate) fn quasi(&mut self, tol: &Tolerances) -> Result<QuasiPeriods> {
        if let Some(q) = self.eta {
            return Ok(q);
        }
        let q = quasi_periods_impl(&self.basis, &self.chain, self.g2, tol)?;
        self.eta = Some(q);
        Ok(q)
    }

    /// Distance from a reduced argument to the nearest lattice point.
    fn lattice_distance(&self, z0: Complex64) -> f64 {
        let mut best = f64::INFINITY;
        for m in -1..=1i64 {
            for n in -1..=1i64 {
                best = best.min((z0 - self.basis.point(m, n)).norm());
            }
        }
        best
    }

    /// Reduced evaluation with quasi-period restoration.
    pub(crate) fn eval(
        &mut self,
        z: Complex64,
        with_sigma: bool,
        tol: &Tolerances,
    ) -> Result<WeierstrassValues> {
        let (z0, m, n) = reduce_argument(z, &self.basis);
        if self.lattice_distance(z0) < tol.eps_pole * self.basis.omega1.norm() {
            return Err(Error::PoleProximity);
        }
        let mut vals = eval_unreduced(&self.chain, self.g2, z0, with_sigma, tol)?;
        if m != 0 || n != 0 {
            let q = self.quasi(tol)?;
            let shift = q.eta1 * m as f64 + q.eta2 * n as f64;
            vals.zeta += shift;
            if with_sigma {
                let period = self.basis.point(m, n);
                let sign = if (m + n + m * n) & 1 == 1 { -1.0 } else { 1.0 };
                vals.sigma *= sign * (shift * (z0 + period / 2.0)).exp();
            }
        }
        Ok(vals)
    }
}

fn eval_reduced(
    inv: Invariants,
    z: Complex64,
    with_sigma: bool,
    tol: &Tolerances,
) -> Result<WeierstrassValues> {
    if !inv.is_finite() || !z.is_finite() {
        return Err(Error::NonFinite);
    }
    match classify(inv, tol)? {
        SubgroupRank::Rank0 => eval_rank0(z),
        SubgroupRank::Rank1 => eval_rank1(inv, z, tol),
        SubgroupRank::Rank2 => Rank2Context::new(inv, tol)?.eval(z, with_sigma, tol),
    }
}

/// Public evaluation entry: reduces z into the centered fundamental cell,
/// evaluates there, and restores the quasi-periodic channels:
/// ζ(z) = ζ(z0) + m·η1 + n·η2 and
/// σ(z) = σ(z0)·(−1)^(m+n+mn)·exp((m·η1+n·η2)(z0 + (m·ω1+n·ω2)/2)).
pub fn weierstrass_at(
    inv: Invariants,
    z: Complex64,
    tol: &Tolerances,
) -> Result<WeierstrassValues> {
    eval_reduced(inv, z, true, tol)
}

/// Like `weierstrass_at` but skips the σ channel and the duplication step,
/// evaluating at z directly; the returned `sigma` is NaN for lattices.
pub fn weierstrass_at_no_sigma(
    inv: Invariants,
    z: Complex64,
    tol: &Tolerances,
) -> Result<WeierstrassValues> {
    eval_reduced(inv, z, false, tol)
}

/// Writes z as z0 + m·ω1 + n·ω2 with both lattice coordinates of z0 in
/// [−1/2, 1/2]; coordinates exactly at +1/2 are shifted to −1/2.
pub fn reduce_argument(z: Complex64, basis: &ReducedBasis) -> (Complex64, i64, i64) {
    let w1 = basis.omega1;
    let w2 = basis.omega2;
    let det = w1.re * w2.im - w1.im * w2.re;
    if det == 0.0 || !det.is_finite() {
        return (z, 0, 0);
    }
    let s = (z.re * w2.im - z.im * w2.re) / det;
    let t = (w1.re * z.im - w1.im * z.re) / det;
    let m = (s + 0.5).floor();
    let n = (t + 0.5).floor();
    let z0 = z - (w1 * m + w2 * n);
    (z0, m as i64, n as i64)
}

/// Abel map: some z with 𝒜(x, y) ≡ z (mod Γ), via the forward Landen
/// iteration on the point and the closing arctangent of the limit group.
///
/// Points with y ≈ 0 sitting on a root of the cubic map to the matching
/// half-period directly. The returned representative is whatever the
/// closed form produces; no lattice reduction is applied.
pub fn abel_map(inv: Invariants, pt: CurvePoint, tol: &Tolerances) -> Result<Complex64> {
    if !inv.is_finite() || !pt.x.is_finite() || !pt.y.is_finite() {
        return Err(Error::NonFinite);
    }
    let (x, y) = (pt.x, pt.y);
    // curve membership
    let rhs = 4.0 * x * x * x - inv.g2 * x - inv.g3;
    let scale = (4.0 * x.norm().powi(3))
        .max(inv.g2.norm() * x.norm())
        .max(inv.g3.norm())
        .max(y.norm_sqr())
        .max(1.0);
    if (y * y - rhs).norm() > 1e-10 * scale {
        return Err(Error::OffCurve);
    }

    match classify(inv, tol)? {
        SubgroupRank::Rank0 => Err(Error::DegenerateCurve),
        SubgroupRank::Rank1 => {
            let t = order_properly(solve_cubic(inv)?);
            let omega = rank1_omega_from_roots(t)?;
            if y.norm() <= 1e-12 * scale.sqrt() {
                if (x - t.e1).norm() <= 1e-10 * t.e1.norm().max(1.0) {
                    return Ok(omega / 2.0);
                }
                // y = 0 at the double root is the singular point of the curve
                return Err(Error::DegenerateCurve);
            }
            Ok(rank1_abel(omega, x, y))
        }
        SubgroupRank::Rank2 => {
            let t = order_properly(solve_cubic(inv)?);
            let chain = iterate_optimal(t, tol)?;
            if y.norm() <= 1e-12 * scale.sqrt() {
                // half-period points, by the proper-order correspondence
                let basis = reduced_basis_impl(t, &chain, tol)?;
                for (root, half) in [
                    (t.e1, basis.omega1 / 2.0),
                    (t.e2, basis.omega2 / 2.0),
                    (t.e3, (basis.omega1 + basis.omega2) / 2.0),
                ] {
                    if (x - root).norm() <= 1e-10 * root.norm().max(1.0) {
                        return Ok(half);
                    }
                }
                return Err(Error::OffCurve);
            }
            let (mut xn, mut yn) = (x, y);
            for step in chain.steps.iter() {
                let e1 = step.roots.selected;
                let cross = step.cross_product();
                // x_{n-1} = x_n + cross/(x_n - e1): pick the branch closer
                // to x_{n-1}, with the smaller quadratic root taken from the
                // product to avoid cancellation
                let b = e1 + xn;
                let c = cross + e1 * xn;
                let disc = (b * b - 4.0 * c).sqrt();
                let r1 = (b + disc) / 2.0;
                let r2 = (b - disc) / 2.0;
                let big = if r1.norm() >= r2.norm() { r1 } else { r2 };
                let small = if big.norm() == 0.0 { b - big } else { c / big };
                let x_next = if (big - xn).norm() <= (small - xn).norm() {
                    big
                } else {
                    small
                };
                let q = x_next - e1;
                if q.norm() == 0.0 {
                    return Err(Error::PoleProximity);
                }
                let denom = 1.0 - cross / (q * q);
                if denom.norm() == 0.0 {
                    return Err(Error::PoleProximity);
                }
                xn = x_next;
                yn /= denom;
            }
            let z = rank1_abel(chain.omega(), xn, yn);
            if z.is_finite() {
                Ok(z)
            } else {
                Err(Error::PoleProximity)
            }
        }
    }
}

/// Closing formula z = −(ω/π)·arctan((6πω²x + 2π³)/(3ω³y)), principal branch.
fn rank1_abel(omega: Complex64, x: Complex64, y: Complex64) -> Complex64 {
    let w2 = omega * omega;
    let num = 6.0 * PI * w2 * x + 2.0 * PI * PI * PI;
    let den = 3.0 * w2 * omega * y;
    -(omega / PI) * (num / den).atan()
}

//! Conformal map of a rectangle onto a two-channel domain, built from σ
//! quotients on a rectangular lattice, and the one-parameter curve family
//! used to study near-degenerate behavior.
//!
//! ```text
//! Q(z) = D·z + (h⁻/π)·ln(σ(z−z⁻)/σ(z+z⁻)) − (h⁺/π)·ln(σ(z−z⁺)/σ(z+z⁺)) − i(h⁻−h⁺)
//! ```
//!
//! Each log is applied to the single quotient of σ values with the principal
//! branch. Q is single-valued on the rectangle minus the four σ-zero points
//! ±z±, but principal logs are not; `trace_q` unwraps 2π jumps against the
//! previous sample when following a path. Solving for the parameters
//! (D, z±, γ) from channel data is out of scope; they are taken as given.

use num_complex::Complex64;

use crate::core::{Invariants, RootTriple, Tolerances};
use crate::error::{Error, Result};
use crate::functions::Rank2Context;
use crate::periods::reduced_basis;

const PI: f64 = std::f64::consts::PI;

/// Parameters of the channel map on a rectangular lattice curve.
#[derive(Debug, Clone, Copy)]
pub struct ConformalParams {
    /// Purely imaginary drift coefficient.
    pub d: Complex64,
    /// Purely imaginary σ-zero locations, 0 < Im z⁻ < Im z⁺ < Im ω2.
    pub zplus: Complex64,
    pub zminus: Complex64,
    /// Channel heights.
    pub hplus: f64,
    pub hminus: f64,
    /// Invariants of the rectangular lattice curve.
    pub inv: Invariants,
}

/// Axis-aligned periods (ω1 real > 0, ω2 imaginary with Im > 0) of a
/// rectangular lattice; errors with `OutOfRange` when the reduced basis is
/// not axis-aligned.
pub fn rectangular_periods(inv: Invariants, tol: &Tolerances) -> Result<(Complex64, Complex64)> {
    let b = reduced_basis(inv, tol)?;
    let mut real_axis = None;
    let mut imag_axis = None;
    for w in [b.omega1, b.omega2] {
        if w.im.abs() <= 1e-9 * w.norm() {
            real_axis = Some(Complex64::new(w.norm(), 0.0));
        } else if w.re.abs() <= 1e-9 * w.norm() {
            imag_axis = Some(Complex64::new(0.0, w.norm()));
        }
    }
    match (real_axis, imag_axis) {
        (Some(r), Some(i)) => Ok((r, i)),
        _ => Err(Error::OutOfRange),
    }
}

impl ConformalParams {
    /// Validates the contract: D and z± purely imaginary,
    /// 0 < Im z⁻ < Im z⁺ < Im ω2, rectangular curve.
    pub fn new(
        d: Complex64,
        zplus: Complex64,
        zminus: Complex64,
        hplus: f64,
        hminus: f64,
        inv: Invariants,
        tol: &Tolerances,
    ) -> Result<Self> {
        if !d.is_finite() || !zplus.is_finite() || !zminus.is_finite() || !inv.is_finite() {
            return Err(Error::NonFinite);
        }
        if d.re.abs() > 1e-12 * d.norm() {
            return Err(Error::OutOfRange);
        }
        for z in [zplus, zminus] {
            if z.re.abs() > 1e-12 * z.norm() {
                return Err(Error::OutOfRange);
            }
        }
        let (_, w2) = rectangular_periods(inv, tol)?;
        if !(0.0 < zminus.im && zminus.im < zplus.im && zplus.im < w2.im) {
            return Err(Error::OutOfRange);
        }
        Ok(Self {
            d,
            zplus,
            zminus,
            hplus,
            hminus,
            inv,
        })
    }
}

/// The two principal σ-quotient logs entering Q.
fn q_logs(
    ctx: &mut Rank2Context,
    params: &ConformalParams,
    z: Complex64,
    tol: &Tolerances,
) -> Result<(Complex64, Complex64)> {
    let mut sig = |w: Complex64| -> Result<Complex64> {
        match ctx.eval(w, true, tol) {
            Ok(v) => Ok(v.sigma),
            // σ vanishes on the lattice, so a pole-proximate argument is a
            // logarithmic singularity of Q
            Err(Error::PoleProximity) => Err(Error::LogSingularity),
            Err(e) => Err(e),
        }
    };
    let l_minus = (sig(z - params.zminus)? / sig(z + params.zminus)?).ln();
    let l_plus = (sig(z - params.zplus)? / sig(z + params.zplus)?).ln();
    Ok((l_minus, l_plus))
}

fn q_from_logs(
    params: &ConformalParams,
    z: Complex64,
    l_minus: Complex64,
    l_plus: Complex64,
) -> Complex64 {
    params.d * z + params.hminus / PI * l_minus
        - params.hplus / PI * l_plus
        - Complex64::new(0.0, params.hminus - params.hplus)
}

/// Q(z) with principal-branch logs.
pub fn eval_q(params: &ConformalParams, z: Complex64, tol: &Tolerances) -> Result<Complex64> {
    if !z.is_finite() {
        return Err(Error::NonFinite);
    }
    let mut ctx = Rank2Context::new(params.inv, tol)?;
    let (lm, lp) = q_logs(&mut ctx, params, z, tol)?;
    Ok(q_from_logs(params, z, lm, lp))
}

/// Q along a sample path, with each σ-quotient log unwrapped by continuity
/// against the previous sample so no 2π branch jumps appear.
pub fn trace_q(
    params: &ConformalParams,
    path: &[Complex64],
    tol: &Tolerances,
) -> Result<Vec<Complex64>> {
    let mut ctx = Rank2Context::new(params.inv, tol)?;
    let mut out = Vec::with_capacity(path.len());
    let mut prev: Option<(Complex64, Complex64)> = None;
    for &z in path {
        if !z.is_finite() {
            return Err(Error::NonFinite);
        }
        let (mut lm, mut lp) = q_logs(&mut ctx, params, z, tol)?;
        if let Some((pm, pp)) = prev {
            lm.im += 2.0 * PI * ((pm.im - lm.im) / (2.0 * PI)).round();
            lp.im += 2.0 * PI * ((pp.im - lp.im) / (2.0 * PI)).round();
        }
        prev = Some((lm, lp));
        out.push(q_from_logs(params, z, lm, lp));
    }
    Ok(out)
}

/// Curve of the one-parameter family: roots
/// (γ − 1/2, −2γ, γ + 1/2) for γ ∈ (−1/6, 1/6).
///
/// The middle root is recomputed as −(e1 + e3) so the triple sums to zero
/// exactly; the discriminant tends to 0 as γ → ±1/6.
pub fn curve_from_gamma(gamma: f64) -> Result<RootTriple> {
    if !gamma.is_finite() || gamma <= -1.0 / 6.0 || gamma >= 1.0 / 6.0 {
        return Err(Error::OutOfRange);
    }
    let e1 = Complex64::new(gamma - 0.5, 0.0);
    let e3 = Complex64::new(gamma + 0.5, 0.0);
    let e2 = -(e1 + e3);
    Ok(RootTriple::new(e1, e2, e3))
}

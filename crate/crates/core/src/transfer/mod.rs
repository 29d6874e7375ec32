//! Reflection and transmission of a single photon through an emitter chain.
//!
//! Each site contributes the unimodular matrix
//!
//! ```text
//! L_j = [ e^{iθ}(1 − i/δ)    −i e^{−iθ}/δ     ]
//!       [ i e^{iθ}/δ          e^{−iθ}(1 + i/δ) ]
//! ```
//!
//! and the chain is `P = L_1 L_2 ··· L_N`, with site 1 the first one met by
//! a photon incident from the left. Then `r = P_12/P_22` and
//! `t = e^{−iΣθ_j}/P_22`, where the phase factor references `t` to free
//! propagation over the same length.

mod oracle;

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::model::{scaled_detunings, EmitterChain, ProbeDetuning, ScatteringResult, Transfer2x2};
use crate::{Error, Result, SweepGrid};

pub use oracle::{fabry_perot_two_atom, segment_solve};

/// Phases within this distance of a multiple of π count as commensurate.
pub const COMMENSURATE_TOL: f64 = 1e-9;

/// `|P_22|` below this is treated as a numerical degeneracy.
pub const DEGENERACY_FLOOR: f64 = 1e-300;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Transfer matrix of one site with scaled detuning `delta` followed by a
/// gap of phase `theta`.
pub fn single_site_matrix(delta: Complex64, theta: f64) -> Result<Transfer2x2> {
    if delta == Complex64::new(0.0, 0.0) {
        return Err(Error::SingularSite);
    }
    let inv = delta.inv();
    let e = Complex64::from_polar(1.0, theta);
    let e_inv = e.conj();
    Ok(Transfer2x2::new(
        e * (1.0 - I * inv),
        -I * e_inv * inv,
        I * e * inv,
        e_inv * (1.0 + I * inv),
    ))
}

/// Pauli matrices in the (right, left) amplitude basis.
pub fn sigma_y() -> Transfer2x2 {
    Transfer2x2::new(0.0.into(), -I, I, 0.0.into())
}

pub fn sigma_z() -> Transfer2x2 {
    Transfer2x2::new(1.0.into(), 0.0.into(), 0.0.into(), (-1.0).into())
}

/// `ρ₋ = σ_y − iσ_z`, the nilpotent part of every commensurate site matrix.
pub fn rho_minus() -> Transfer2x2 {
    sigma_y() + sigma_z().scale(-I)
}

/// Amplitudes of an isolated emitter with photon-minus-atom detuning `delta`.
///
/// `r = −iΓ/(Δ + i(Γ+Γ₀))`, `t = 1 + r`.
pub fn single_atom_amplitudes(delta: f64, gamma: f64, gamma0: f64) -> ScatteringResult {
    let den = Complex64::new(delta, gamma + gamma0);
    let r = -I * gamma / den;
    let t = Complex64::new(delta, gamma0) / den;
    ScatteringResult::new(r, t)
}

/// Scatters a photon through the chain by multiplying site matrices.
///
/// A lossless site exactly on resonance (`δ_j = 0`) has no transfer matrix;
/// it acts as a perfect mirror, so nothing is transmitted and the reflection
/// is that of the preceding sites terminated by the mirror. Such results
/// carry `limit_applied = true`.
pub fn chain_scatter(chain: &EmitterChain, probe: ProbeDetuning) -> Result<ScatteringResult> {
    let deltas = scaled_detunings(chain, probe);
    let mut product = Transfer2x2::identity();
    for (&delta, &theta) in deltas.iter().zip(chain.phases()) {
        if delta == Complex64::new(0.0, 0.0) {
            // Range of lim δ·L_j is spanned by (−1, 1).
            let num = product.m12 - product.m11;
            let den = product.m22 - product.m21;
            if den.norm() < DEGENERACY_FLOOR {
                return Err(Error::Degenerate("mirror-terminated product has vanishing P22"));
            }
            return Ok(ScatteringResult { r: num / den, t: Complex64::new(0.0, 0.0), limit_applied: true });
        }
        product = product * single_site_matrix(delta, theta)?;
    }
    if product.m22.norm() < DEGENERACY_FLOOR {
        return Err(Error::Degenerate("transfer product has vanishing P22"));
    }
    let total_phase: f64 = chain.phases().iter().sum();
    let r = product.m12 / product.m22;
    let t = Complex64::from_polar(1.0, -total_phase) / product.m22;
    Ok(ScatteringResult::new(r, t))
}

/// Integer `n` with `|θ − nπ| ≤ COMMENSURATE_TOL`, if any.
pub fn commensurate_order(theta: f64) -> Option<i64> {
    let n = (theta / PI).round();
    ((theta - n * PI).abs() <= COMMENSURATE_TOL).then_some(n as i64)
}

/// Closed form for chains whose every phase is a multiple of π.
///
/// There all site matrices are `±(𝟙 + δ_j⁻¹ρ₋)` and commute, giving
/// `t = 1/(1 + iΓS)`, `r = −iΓS/(1 + iΓS)` with `S = Σ_j (Δ_j + iΓ₀)⁻¹`.
/// The sign `(−1)^{Σn_j}` of the product and the propagation phase are both
/// applied to `t`, so this agrees with [`chain_scatter`] including phase.
pub fn commensurate_scatter(chain: &EmitterChain, probe: ProbeDetuning) -> Result<ScatteringResult> {
    let mut order_sum = 0i64;
    for (site, &theta) in chain.phases().iter().enumerate() {
        order_sum += commensurate_order(theta).ok_or(Error::NotCommensurate { site, theta })?;
    }
    let gamma = chain.gamma();
    let mut sum = Complex64::new(0.0, 0.0);
    for delta in chain.site_detunings(probe) {
        let z = Complex64::new(delta, chain.gamma0());
        if z == Complex64::new(0.0, 0.0) {
            return Ok(ScatteringResult { r: (-1.0).into(), t: 0.0.into(), limit_applied: true });
        }
        sum += z.inv();
    }
    let den = 1.0 + I * gamma * sum;
    let sign = if order_sum.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    let total_phase: f64 = chain.phases().iter().sum();
    let r = -I * gamma * sum / den;
    let t = Complex64::from_polar(sign, -total_phase) / den;
    Ok(ScatteringResult::new(r, t))
}

/// One sample of a probe-detuning sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumRow {
    pub probe: f64,
    pub result: ScatteringResult,
}

/// Evaluates [`chain_scatter`] on every grid point, in grid order.
pub fn spectrum(chain: &EmitterChain, grid: &SweepGrid) -> Result<Vec<SpectrumRow>> {
    grid.points()
        .par_iter()
        .map(|&p| {
            let result = chain_scatter(chain, ProbeDetuning::new(p)?)?;
            Ok(SpectrumRow { probe: p, result })
        })
        .collect()
}

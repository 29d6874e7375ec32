//! Independent routes to the chain amplitudes, used to cross-check the
//! transfer-matrix product.
//!
//! Neither oracle touches `L_j`: both are assembled from the isolated-atom
//! amplitudes of [`single_atom_amplitudes`] and free propagation between sites.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::{single_atom_amplitudes, DEGENERACY_FLOOR};
use crate::model::{EmitterChain, ProbeDetuning, ScatteringResult};
use crate::{Error, Result};

/// Two-atom amplitudes by summing the multiple reflections between the atoms.
///
/// With gap phase `φ = θ_1`:
/// `r = r₁ + t₁² r₂ e^{2iφ}/(1 − r₁r₂e^{2iφ})`, `t = t₁t₂/(1 − r₁r₂e^{2iφ})`.
/// `t` is referenced to free propagation, like [`super::chain_scatter`].
pub fn fabry_perot_two_atom(chain: &EmitterChain, probe: ProbeDetuning) -> Result<ScatteringResult> {
    if chain.len() != 2 {
        return Err(Error::InvalidScheme(format!("two-atom oracle needs N = 2, got {}", chain.len())));
    }
    let (gamma, gamma0) = (chain.gamma(), chain.gamma0());
    let mut atoms = chain.site_detunings(probe).map(|d| single_atom_amplitudes(d, gamma, gamma0));
    let (a1, a2) = (atoms.next().unwrap(), atoms.next().unwrap());
    let round_trip = Complex64::from_polar(1.0, 2.0 * chain.phases()[0]);
    let den = 1.0 - a1.r * a2.r * round_trip;
    if den.norm() < DEGENERACY_FLOOR {
        return Err(Error::Degenerate("closed cavity between two perfect mirrors"));
    }
    let r = a1.r + a1.t * a1.t * a2.r * round_trip / den;
    let t = a1.t * a2.t / den;
    Ok(ScatteringResult::new(r, t))
}

/// Solves for every segment amplitude at once.
///
/// Segment `i` (0..=N) carries `A_i e^{ik(x−x_i)} + B_i e^{−ik(x−x_i)}`, where
/// `x_i` is the atom at its left end (segment 0 uses atom 0). At atom `i` the
/// outgoing waves are the isolated-atom response to the incoming ones:
///
/// ```text
/// A_{i+1}        = t_i A_i e^{iφ} + r_i B_{i+1}
/// B_i e^{−iφ}    = r_i A_i e^{iφ} + t_i B_{i+1}
/// ```
///
/// with `φ` the phase from the segment origin to the atom. Together with
/// `A_0 = 1` and `B_N = 0` this is a square system of size `2(N+1)`.
pub fn segment_solve(chain: &EmitterChain, probe: ProbeDetuning) -> Result<ScatteringResult> {
    let n = chain.len();
    let size = 2 * (n + 1);
    let (gamma, gamma0) = (chain.gamma(), chain.gamma0());
    let a = |seg: usize| 2 * seg;
    let b = |seg: usize| 2 * seg + 1;

    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let mut m = DMatrix::from_element(size, size, zero);
    let mut rhs = DVector::from_element(size, zero);

    m[(0, a(0))] = one;
    rhs[0] = one;
    for (i, delta) in chain.site_detunings(probe).enumerate() {
        let atom = single_atom_amplitudes(delta, gamma, gamma0);
        let phi = if i == 0 { 0.0 } else { chain.phases()[i - 1] };
        let e = Complex64::from_polar(1.0, phi);
        let row = 1 + 2 * i;
        m[(row, a(i + 1))] = one;
        m[(row, a(i))] = -atom.t * e;
        m[(row, b(i + 1))] = -atom.r;
        m[(row + 1, b(i))] = e.conj();
        m[(row + 1, a(i))] = -atom.r * e;
        m[(row + 1, b(i + 1))] = -atom.t;
    }
    m[(size - 1, b(n))] = one;

    let x = m.lu().solve(&rhs).ok_or(Error::Degenerate("segment system is singular"))?;
    if x.iter().any(|z| !z.is_finite()) {
        return Err(Error::Degenerate("segment system produced non-finite amplitudes"));
    }
    let last_atom_position: f64 = chain.phases()[..n - 1].iter().sum();
    let r = x[b(0)];
    let t = x[a(n)] * Complex64::from_polar(1.0, -last_atom_position);
    Ok(ScatteringResult::new(r, t))
}

//! Detuning protocols that make the chain transparent or reduce it to one atom.
//!
//! At a commensurate phase the chain response depends only on
//! `S = Σ_j (Δ_j + iΓ₀)⁻¹`. A pair with photon-relative detunings `±Δ`
//! contributes `−2iΓ₀/(Δ² + Γ₀²)`, which vanishes without extraneous loss:
//! an even chain built from such pairs is transparent, and an odd chain
//! behaves like its single unpaired atom.

use num_complex::Complex64;

use crate::model::{EmitterChain, ProbeDetuning};
use crate::optimize::first_argmax;
use crate::transfer::{chain_scatter, single_atom_amplitudes, SpectrumRow};
use crate::{Error, Result, SweepGrid};

/// An ordering of `0..n`; entry `i` names which generated detuning sits at site `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(order: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; order.len()];
        for &i in &order {
            match seen.get_mut(i) {
                Some(slot) if !*slot => *slot = true,
                _ => return Err(Error::InvalidScheme(format!("{order:?} is not a permutation"))),
            }
        }
        Ok(Self(order))
    }

    pub fn identity(n: usize) -> Self {
        Self((0..n).collect())
    }

    pub fn reversed(n: usize) -> Self {
        Self((0..n).rev().collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    fn apply(&self, base: &[f64]) -> Result<Vec<f64>> {
        if base.len() != self.0.len() {
            return Err(Error::InvalidScheme(format!(
                "permutation of length {} applied to {} detunings",
                self.0.len(),
                base.len()
            )));
        }
        Ok(self.0.iter().map(|&i| base[i]).collect())
    }
}

/// Detuning assignments for the protocols.
#[derive(Debug, Clone, PartialEq)]
pub enum DetuningScheme {
    /// Every atom at the same offset.
    Identical { count: usize, detuning: f64 },
    /// Pairs `±Δ^(m)` around the reference frequency.
    EvenPairwise { magnitudes: Vec<f64>, permutation: Permutation },
    /// Pairs `±Δ^(m)` plus one unpaired atom at `leftover`.
    OddPairwisePlusOne { magnitudes: Vec<f64>, leftover: f64, permutation: Permutation },
}

impl DetuningScheme {
    pub fn detunings(&self) -> Result<Vec<f64>> {
        match self {
            Self::Identical { count, detuning } => {
                if *count == 0 {
                    return Err(Error::InvalidScheme("identical scheme needs at least one atom".into()));
                }
                Ok(vec![*detuning; *count])
            }
            Self::EvenPairwise { magnitudes, permutation } => make_even_pairwise(magnitudes, permutation),
            Self::OddPairwisePlusOne { magnitudes, leftover, permutation } => {
                make_odd_chain(magnitudes, *leftover, permutation)
            }
        }
    }

    /// Site index of the unpaired atom in the odd scheme.
    pub fn leftover_position(&self) -> Option<usize> {
        match self {
            Self::OddPairwisePlusOne { magnitudes, permutation, .. } => {
                permutation.as_slice().iter().position(|&i| i == 2 * magnitudes.len())
            }
            _ => None,
        }
    }
}

fn pair_list(magnitudes: &[f64]) -> Result<Vec<f64>> {
    for (i, &m) in magnitudes.iter().enumerate() {
        if !(m.is_finite() && m > 0.0) {
            return Err(Error::InvalidScheme(format!("pair magnitude {m} must be positive and finite")));
        }
        if magnitudes[..i].contains(&m) {
            return Err(Error::InvalidScheme(format!("pair magnitude {m} is repeated")));
        }
    }
    Ok(magnitudes.iter().flat_map(|&m| [m, -m]).collect())
}

/// Permuted list `+Δ^(1), −Δ^(1), …, +Δ^(n), −Δ^(n)`.
pub fn make_even_pairwise(magnitudes: &[f64], permutation: &Permutation) -> Result<Vec<f64>> {
    permutation.apply(&pair_list(magnitudes)?)
}

/// Permuted list of the pairs followed by the unpaired detuning `delta0`
/// (generated index `2n`).
pub fn make_odd_chain(magnitudes: &[f64], delta0: f64, permutation: &Permutation) -> Result<Vec<f64>> {
    if !delta0.is_finite() {
        return Err(Error::InvalidScheme(format!("leftover detuning {delta0} must be finite")));
    }
    let mut base = pair_list(magnitudes)?;
    base.push(delta0);
    permutation.apply(&base)
}

/// `|1 − t|` at the given probe.
pub fn transparency_deviation(chain: &EmitterChain, probe: ProbeDetuning) -> Result<f64> {
    Ok((Complex64::new(1.0, 0.0) - chain_scatter(chain, probe)?.t).norm())
}

fn leftover_offset(chain: &EmitterChain, leftover: usize) -> Result<f64> {
    chain.detunings().get(leftover).copied().ok_or_else(|| {
        Error::InvalidScheme(format!("leftover index {leftover} out of range for {} sites", chain.len()))
    })
}

/// Largest `|t_chain − t_single|` over the grid while the protocol is held.
///
/// The paired atoms of `chain` sit at `±Δ^(m)` around the reference
/// frequency. At each grid probe they are re-centred on the photon, so their
/// photon-relative detunings stay `∓Δ^(m)`, while the unpaired atom keeps its
/// offset `Δ₀`. The chain is compared with a lone atom at `Δ₀` probed at the
/// same frequency. Zero (to rounding) when `Γ₀ = 0` and phases are multiples of π.
pub fn odd_chain_residual(chain: &EmitterChain, leftover: usize, grid: &SweepGrid) -> Result<f64> {
    let delta0 = leftover_offset(chain, leftover)?;
    let at_photon = ProbeDetuning::new(0.0)?;
    let mut worst: f64 = 0.0;
    for &p in grid.points() {
        // Work in the photon frame so the pair offsets stay exact.
        let mut offsets = chain.detunings().to_vec();
        offsets[leftover] = delta0 - p;
        let t_chain = chain_scatter(&chain.with_detunings(offsets)?, at_photon)?.t;
        let t_single = single_atom_amplitudes(p - delta0, chain.gamma(), chain.gamma0()).t;
        worst = worst.max((t_chain - t_single).norm());
    }
    Ok(worst)
}

/// Same comparison as [`odd_chain_residual`] but with every atom frozen at
/// its offset while the probe is swept. Away from the pair midpoint the pairs
/// no longer cancel, so this is generally nonzero; it is a diagnostic.
pub fn fixed_frequency_residual(chain: &EmitterChain, leftover: usize, grid: &SweepGrid) -> Result<f64> {
    let delta0 = leftover_offset(chain, leftover)?;
    let mut worst: f64 = 0.0;
    for &p in grid.points() {
        let t_chain = chain_scatter(chain, ProbeDetuning::new(p)?)?.t;
        let t_single = single_atom_amplitudes(p - delta0, chain.gamma(), chain.gamma0()).t;
        worst = worst.max((t_chain - t_single).norm());
    }
    Ok(worst)
}

/// Resonant transmission `Γ₀/(Γ₀ + NΓ)` of `n_atoms` identical atoms.
pub fn resonant_floor(n_atoms: usize, gamma: f64, gamma0: f64) -> f64 {
    gamma0 / (gamma0 + n_atoms as f64 * gamma)
}

/// Largest relative deviation from a Lorentzian tolerated by
/// [`collective_linewidth_fit`].
pub const LORENTZIAN_TOL: f64 = 0.02;

/// Half-width at half-depth of the dip in `1 − |t|²` of a spectrum.
pub fn collective_linewidth_fit(spectrum: &[SpectrumRow]) -> Result<f64> {
    let x: Vec<f64> = spectrum.iter().map(|row| row.probe).collect();
    let transmittance: Vec<f64> = spectrum.iter().map(|row| row.result.transmittance()).collect();
    half_depth_width(&x, &transmittance)
}

/// Half-width at half-depth of the dip in `1 − T(x)` for sampled `T`.
///
/// The crossings are located by bisection over the samples on each side of
/// the deepest point, then linearly interpolated. Fails with a shape error
/// when the samples deviate from a Lorentzian by more than
/// [`LORENTZIAN_TOL`] of the depth.
pub fn half_depth_width(x: &[f64], transmittance: &[f64]) -> Result<f64> {
    if x.len() != transmittance.len() {
        return Err(Error::Shape(format!("{} abscissae for {} samples", x.len(), transmittance.len())));
    }
    if x.len() < 3 {
        return Err(Error::Shape(format!("need at least 3 points, got {}", x.len())));
    }
    let y: Vec<f64> = transmittance.iter().map(|t| 1.0 - t).collect();
    let peak_at = first_argmax(&y).ok_or_else(|| Error::Shape("no finite samples".into()))?;
    let peak = y[peak_at];
    if peak <= 0.0 {
        return Err(Error::Shape("no dip in transmission".into()));
    }
    let half = 0.5 * peak;

    let crossing = |outer: usize| -> Result<f64> {
        if y[outer] > half {
            return Err(Error::Shape("half depth not reached inside the grid".into()));
        }
        // Invariant: y[below] <= half < y[above].
        let (mut below, mut above) = (outer, peak_at);
        while below.abs_diff(above) > 1 {
            let mid = (below + above) / 2;
            if y[mid] > half {
                above = mid;
            } else {
                below = mid;
            }
        }
        Ok(x[below] + (half - y[below]) * (x[above] - x[below]) / (y[above] - y[below]))
    };
    let left = crossing(0)?;
    let right = crossing(y.len() - 1)?;
    let width = 0.5 * (right - left);
    let center = 0.5 * (right + left);

    let misfit = x
        .iter()
        .zip(&y)
        .map(|(&xi, &yi)| {
            let model = peak * width * width / ((xi - center).powi(2) + width * width);
            (yi - model).abs() / peak
        })
        .fold(0.0, f64::max);
    if misfit > LORENTZIAN_TOL {
        return Err(Error::Shape(format!("Lorentzian misfit {misfit:.3e} exceeds {LORENTZIAN_TOL}")));
    }
    Ok(width)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transfer::spectrum;
    use std::f64::consts::PI;

    fn probe(v: f64) -> ProbeDetuning {
        ProbeDetuning::new(v).unwrap()
    }

    #[test]
    fn even_pairwise_examples() {
        assert_eq!(make_even_pairwise(&[1.0], &Permutation::identity(2)).unwrap(), vec![1.0, -1.0]);
        let interleaved = Permutation::new(vec![0, 2, 1, 3]).unwrap();
        assert_eq!(make_even_pairwise(&[1.0, 2.0], &interleaved).unwrap(), vec![1.0, 2.0, -1.0, -2.0]);
        assert_eq!(make_even_pairwise(&[1.0], &Permutation::reversed(2)).unwrap(), vec![-1.0, 1.0]);
    }

    #[test]
    fn reversed_pair_is_still_transparent() {
        for perm in [Permutation::identity(2), Permutation::reversed(2)] {
            let d = make_even_pairwise(&[1.0], &perm).unwrap();
            let chain = EmitterChain::uniform(1.0, 0.0, d, PI).unwrap();
            assert!(transparency_deviation(&chain, probe(0.0)).unwrap() < 1e-14);
        }
    }

    #[test]
    fn scheme_errors() {
        let id2 = Permutation::identity(2);
        assert!(make_even_pairwise(&[0.0], &id2).is_err());
        assert!(make_even_pairwise(&[-1.0], &id2).is_err());
        assert!(make_even_pairwise(&[1.0, 1.0], &Permutation::identity(4)).is_err());
        assert!(make_even_pairwise(&[1.0], &Permutation::identity(3)).is_err());
        assert!(Permutation::new(vec![0, 0]).is_err());
        assert!(Permutation::new(vec![0, 2]).is_err());
        assert!(make_odd_chain(&[1.0], f64::NAN, &Permutation::identity(3)).is_err());
    }

    #[test]
    fn odd_chain_examples() {
        let fig = Permutation::new(vec![0, 2, 1]).unwrap();
        assert_eq!(make_odd_chain(&[3.0], 0.5, &fig).unwrap(), vec![3.0, 0.5, -3.0]);
        assert_eq!(make_odd_chain(&[], 0.7, &Permutation::identity(1)).unwrap(), vec![0.7]);
        let mut five = make_odd_chain(&[1.0, 2.0], 0.5, &Permutation::new(vec![4, 2, 0, 3, 1]).unwrap()).unwrap();
        five.sort_by(f64::total_cmp);
        assert_eq!(five, vec![-2.0, -1.0, 0.5, 1.0, 2.0]);

        let scheme = DetuningScheme::OddPairwisePlusOne { magnitudes: vec![3.0], leftover: 0.5, permutation: fig };
        assert_eq!(scheme.leftover_position(), Some(1));
    }

    #[test]
    fn small_loss_leaves_small_deviation() {
        let (gamma, gamma0, delta) = (1.0, 0.01, 1.0);
        let chain = EmitterChain::uniform(gamma, gamma0, vec![delta, -delta], PI).unwrap();
        // Pair sum S = −2iΓ₀/(Δ² + Γ₀²) makes t real.
        let expected = 1.0 - 1.0 / (1.0 + 2.0 * gamma * gamma0 / (delta * delta + gamma0 * gamma0));
        let got = transparency_deviation(&chain, probe(0.0)).unwrap();
        assert!((got - expected).abs() < 1e-14, "{got} vs {expected}");
        assert!(got > 0.0);
    }

    #[test]
    fn identical_resonant_chain_is_opaque() {
        let chain = EmitterChain::uniform(1.0, 0.0, vec![0.0; 5], PI).unwrap();
        assert!((transparency_deviation(&chain, probe(0.0)).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn odd_chain_reduces_to_leftover_atom() {
        let grid = SweepGrid::linspace(-6.0, 6.0, 241).unwrap();
        let fig = make_odd_chain(&[2.0], 0.5, &Permutation::new(vec![0, 2, 1]).unwrap()).unwrap();
        let chain = EmitterChain::uniform(1.0, 0.0, fig, PI).unwrap();
        assert!(odd_chain_residual(&chain, 1, &grid).unwrap() <= 1e-12);

        let five = make_odd_chain(&[1.0, 2.5], -0.8, &Permutation::new(vec![3, 0, 4, 1, 2]).unwrap()).unwrap();
        let chain = EmitterChain::uniform(1.0, 0.0, five, 2.0 * PI).unwrap();
        assert!(odd_chain_residual(&chain, 2, &grid).unwrap() <= 1e-12);

        let lossy = EmitterChain::uniform(1.0, 0.1, chain.detunings().to_vec(), 2.0 * PI).unwrap();
        assert!(odd_chain_residual(&lossy, 2, &grid).unwrap() > 1e-6);
    }

    #[test]
    fn frozen_frequencies_do_not_reduce() {
        let grid = SweepGrid::linspace(-3.0, 3.0, 61).unwrap();
        let chain = EmitterChain::uniform(1.0, 0.0, vec![2.0, 0.5, -2.0], PI).unwrap();
        assert!(fixed_frequency_residual(&chain, 1, &grid).unwrap() > 0.1);
        let midpoint = SweepGrid::from_points(vec![0.0]).unwrap();
        assert!(fixed_frequency_residual(&chain, 1, &midpoint).unwrap() < 1e-14);
    }

    #[test]
    fn resonant_floor_values() {
        assert_eq!(resonant_floor(4, 1.0, 1.0), 0.2);
        assert_eq!(resonant_floor(7, 1.0, 0.0), 0.0);
        assert!((resonant_floor(10, 1.0, 0.1) - 1.0 / 101.0).abs() < 1e-16);
    }

    #[test]
    fn linewidth_scales_with_chain_size() {
        for n in [1usize, 3, 8] {
            let chain = EmitterChain::uniform(1.0, 0.0, vec![0.0; n], PI).unwrap();
            let span = 10.0 * n as f64;
            let rows = spectrum(&chain, &SweepGrid::linspace(-span, span, 2001).unwrap()).unwrap();
            let width = collective_linewidth_fit(&rows).unwrap();
            assert!((width / n as f64 - 1.0).abs() < 1e-3, "N = {n}: {width}");
        }
    }

    #[test]
    fn linewidth_rejects_non_lorentzian() {
        // Two well separated dips.
        let chain = EmitterChain::uniform(1.0, 0.0, vec![-10.0, 10.0], 0.4).unwrap();
        let rows = spectrum(&chain, &SweepGrid::linspace(-30.0, 30.0, 1201).unwrap()).unwrap();
        assert!(matches!(collective_linewidth_fit(&rows), Err(Error::Shape(_))));
        // Dip wider than the window.
        let chain = EmitterChain::uniform(1.0, 0.0, vec![0.0], PI).unwrap();
        let rows = spectrum(&chain, &SweepGrid::linspace(-0.5, 0.5, 101).unwrap()).unwrap();
        assert!(matches!(collective_linewidth_fit(&rows), Err(Error::Shape(_))));
    }
}

//! N emitters at the antinodes of a driven, symmetric two-mirror cavity.
//!
//! Atom detunings here follow the atom-minus-laser convention,
//! `Δ_j = ω_j − ω_laser`, opposite to the photon-minus-atom convention of the
//! waveguide modules. Internal cavity loss and atomic damping are zero.

use num_complex::Complex64;

use crate::model::{EmitterChain, ProbeDetuning, ScatteringResult};
use crate::transfer::commensurate_scatter;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct CavitySystem {
    kappa: f64,
    g: f64,
    cavity_detuning: f64,
    atom_detunings: Vec<f64>,
}

impl CavitySystem {
    /// `kappa`: leakage per mirror; `g`: atom–cavity coupling;
    /// `cavity_detuning`: `ω_cavity − ω_laser`; `atom_detunings`: `ω_j − ω_laser`.
    pub fn new(kappa: f64, g: f64, cavity_detuning: f64, atom_detunings: Vec<f64>) -> Result<Self> {
        if !(kappa.is_finite() && kappa > 0.0) {
            return Err(Error::InvalidCavity(format!("kappa must be positive, got {kappa}")));
        }
        if !(g.is_finite() && g >= 0.0) {
            return Err(Error::InvalidCavity(format!("g must be non-negative, got {g}")));
        }
        if !cavity_detuning.is_finite() {
            return Err(Error::InvalidCavity(format!("cavity detuning must be finite, got {cavity_detuning}")));
        }
        if atom_detunings.is_empty() {
            return Err(Error::InvalidCavity("at least one atom is required".into()));
        }
        if let Some(d) = atom_detunings.iter().find(|d| !d.is_finite()) {
            return Err(Error::InvalidCavity(format!("atom detuning must be finite, got {d}")));
        }
        Ok(Self { kappa, g, cavity_detuning, atom_detunings })
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn g(&self) -> f64 {
        self.g
    }

    pub fn cavity_detuning(&self) -> f64 {
        self.cavity_detuning
    }

    pub fn atom_detunings(&self) -> &[f64] {
        &self.atom_detunings
    }

    /// Effective waveguide rate `g²/(2κ)` of one atom.
    pub fn effective_gamma(&self) -> f64 {
        self.g * self.g / (2.0 * self.kappa)
    }
}

/// `t = 2κ / (2κ + i(δ − g² Σ_j Δ_j⁻¹))`.
pub fn cavity_transmission(sys: &CavitySystem) -> Result<Complex64> {
    if let Some(atom) = sys.atom_detunings.iter().position(|&d| d == 0.0) {
        return Err(Error::CavityPole { atom });
    }
    let sum: f64 = sys.atom_detunings.iter().map(|d| d.recip()).sum();
    let two_kappa = 2.0 * sys.kappa;
    Ok(two_kappa / Complex64::new(two_kappa, sys.cavity_detuning - sys.g * sys.g * sum))
}

/// [`cavity_transmission`] with the pole replaced by its limit `t = 0`.
/// The flag is set when the limit was used.
pub fn cavity_transmission_or_limit(sys: &CavitySystem) -> (Complex64, bool) {
    match cavity_transmission(sys) {
        Ok(t) => (t, false),
        Err(_) => (Complex64::new(0.0, 0.0), true),
    }
}

/// Collective linewidth `N g²/(2κ)` of identical atoms.
pub fn collective_linewidth(n_atoms: usize, g: f64, kappa: f64) -> f64 {
    n_atoms as f64 * g * g / (2.0 * kappa)
}

/// The waveguide chain that reproduces the cavity response at `δ = 0`:
/// `Γ = g²/(2κ)`, `Γ₀ = 0`, phases `π`, and photon-minus-atom detunings equal
/// to minus the cavity ones (atom offsets `d_j = Δ_j` with the probe at 0).
pub fn equivalent_chain(sys: &CavitySystem) -> Result<EmitterChain> {
    if sys.cavity_detuning != 0.0 {
        return Err(Error::InvalidCavity(format!(
            "correspondence needs cavity detuning 0, got {}",
            sys.cavity_detuning
        )));
    }
    if sys.g == 0.0 {
        return Err(Error::InvalidCavity("correspondence needs g > 0".into()));
    }
    EmitterChain::uniform(sys.effective_gamma(), 0.0, sys.atom_detunings.clone(), std::f64::consts::PI)
}

/// Waveguide closed-form result for the [`equivalent_chain`].
pub fn waveguide_correspondence(sys: &CavitySystem) -> Result<ScatteringResult> {
    if let Some(atom) = sys.atom_detunings.iter().position(|&d| d == 0.0) {
        return Err(Error::CavityPole { atom });
    }
    commensurate_scatter(&equivalent_chain(sys)?, ProbeDetuning::new(0.0)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_cavity_transmits() {
        let sys = CavitySystem::new(0.7, 0.0, 0.0, vec![1.0]).unwrap();
        assert_eq!(cavity_transmission(&sys).unwrap(), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn identical_atoms_half_depth_at_collective_width() {
        let (kappa, g, n) = (0.8, 1.3, 5);
        let width = collective_linewidth(n, g, kappa);
        let sys = CavitySystem::new(kappa, g, 0.0, vec![width; n]).unwrap();
        let t = cavity_transmission(&sys).unwrap();
        assert!((t.norm_sqr() - 0.5).abs() < 1e-14);
    }

    #[test]
    fn opposite_pair_is_transparent() {
        let sys = CavitySystem::new(1.0, 2.0, 0.0, vec![0.6, -0.6]).unwrap();
        let t = cavity_transmission(&sys).unwrap();
        assert!((t - 1.0).norm() < 1e-15);
    }

    #[test]
    fn pole_is_reported_and_limited() {
        let sys = CavitySystem::new(1.0, 1.0, 0.0, vec![0.5, 0.0]).unwrap();
        assert_eq!(cavity_transmission(&sys), Err(Error::CavityPole { atom: 1 }));
        assert_eq!(cavity_transmission_or_limit(&sys), (Complex64::new(0.0, 0.0), true));
        assert!(matches!(waveguide_correspondence(&sys), Err(Error::CavityPole { atom: 1 })));
    }

    #[test]
    fn single_atom_both_routes_half_transmission() {
        let (kappa, g) = (1.5, 0.9);
        let sys = CavitySystem::new(kappa, g, 0.0, vec![g * g / (2.0 * kappa)]).unwrap();
        let cavity = cavity_transmission(&sys).unwrap();
        let waveguide = waveguide_correspondence(&sys).unwrap();
        assert!((cavity.norm_sqr() - 0.5).abs() < 1e-14);
        assert!((waveguide.transmittance() - 0.5).abs() < 1e-14);
        assert!((cavity - waveguide.t).norm() < 1e-14);
    }

    #[test]
    fn validation() {
        assert!(CavitySystem::new(0.0, 1.0, 0.0, vec![1.0]).is_err());
        assert!(CavitySystem::new(1.0, -1.0, 0.0, vec![1.0]).is_err());
        assert!(CavitySystem::new(1.0, 1.0, 0.0, vec![]).is_err());
        let detuned = CavitySystem::new(1.0, 1.0, 0.3, vec![1.0]).unwrap();
        assert!(waveguide_correspondence(&detuned).is_err());
    }
}

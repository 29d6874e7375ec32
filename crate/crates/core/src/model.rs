//! Dimensionless data model shared by every other module.
//!
//! Frequencies are offsets from a reference frequency `ω_ref`: atom `j` sits at
//! `d_j = ω_j − ω_ref` and the photon at `Δ_probe = v_g k − ω_ref`, so the
//! photon-minus-atom detuning of site `j` is `Δ_j = Δ_probe − d_j`. Everything
//! is measured in units of the waveguide decay rate `gamma`.

use std::ops::{Add, Mul};

use num_complex::Complex64;

use crate::{Error, Result};

/// A chain of two-level emitters side-coupled to a waveguide.
///
/// `phases[j]` is the propagation phase `k·l_j` accumulated on the gap that
/// follows site `j` in the direction of incidence. The last entry is a
/// trailing phase that drops out of every observable.
#[derive(Debug, Clone, PartialEq)]
pub struct EmitterChain {
    gamma: f64,
    gamma0: f64,
    detunings: Vec<f64>,
    phases: Vec<f64>,
}

/// Validates and builds an [`EmitterChain`].
pub fn build_chain(gamma: f64, gamma0: f64, detunings: Vec<f64>, phases: Vec<f64>) -> Result<EmitterChain> {
    EmitterChain::new(gamma, gamma0, detunings, phases)
}

fn check_finite(field: &'static str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFinite { field, value })
    }
}

impl EmitterChain {
    pub fn new(gamma: f64, gamma0: f64, detunings: Vec<f64>, phases: Vec<f64>) -> Result<Self> {
        check_finite("gamma", gamma)?;
        check_finite("gamma0", gamma0)?;
        if gamma <= 0.0 {
            return Err(Error::NonPositiveGamma(gamma));
        }
        if gamma0 < 0.0 {
            return Err(Error::NegativeGamma0(gamma0));
        }
        if detunings.len() != phases.len() {
            return Err(Error::DimensionMismatch { detunings: detunings.len(), phases: phases.len() });
        }
        if detunings.is_empty() {
            return Err(Error::EmptyChain);
        }
        for &d in &detunings {
            check_finite("detunings", d)?;
        }
        for &p in &phases {
            check_finite("phases", p)?;
        }
        Ok(Self { gamma, gamma0, detunings, phases })
    }

    /// Chain with the same propagation phase `theta` on every gap.
    pub fn uniform(gamma: f64, gamma0: f64, detunings: Vec<f64>, theta: f64) -> Result<Self> {
        let phases = vec![theta; detunings.len()];
        Self::new(gamma, gamma0, detunings, phases)
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn gamma0(&self) -> f64 {
        self.gamma0
    }

    pub fn detunings(&self) -> &[f64] {
        &self.detunings
    }

    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    pub fn len(&self) -> usize {
        self.detunings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.detunings.is_empty()
    }

    /// Same physical parameters with the site order reversed, i.e. the chain
    /// seen by a photon incident from the other end.
    pub fn reversed(&self) -> Self {
        let n = self.len();
        let mut detunings = self.detunings.clone();
        detunings.reverse();
        // Gap phases sit between sites; the trailing entry stays trailing.
        let mut phases: Vec<f64> = self.phases[..n - 1].iter().rev().copied().collect();
        phases.push(self.phases[n - 1]);
        Self { detunings, phases, ..self.clone() }
    }

    /// Copy of the chain with new atomic offsets.
    pub fn with_detunings(&self, detunings: Vec<f64>) -> Result<Self> {
        Self::new(self.gamma, self.gamma0, detunings, self.phases.clone())
    }

    /// Photon-minus-atom detuning `Δ_j = Δ_probe − d_j` of every site.
    pub fn site_detunings(&self, probe: ProbeDetuning) -> impl Iterator<Item = f64> + '_ {
        self.detunings.iter().map(move |d| probe.value() - d)
    }
}

/// Photon detuning from the reference frequency, in units of `gamma`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct ProbeDetuning(f64);

impl ProbeDetuning {
    pub fn new(value: f64) -> Result<Self> {
        check_finite("probe", value)?;
        Ok(Self(value))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for ProbeDetuning {
    type Error = Error;

    fn try_from(value: f64) -> Result<Self> {
        Self::new(value)
    }
}

/// `δ_j = (Δ_probe − d_j + iΓ₀)/Γ` for each site, in site order.
pub fn scaled_detunings(chain: &EmitterChain, probe: ProbeDetuning) -> Vec<Complex64> {
    chain
        .site_detunings(probe)
        .map(|delta| Complex64::new(delta, chain.gamma0) / chain.gamma)
        .collect()
}

/// Reflection and transmission amplitudes for a photon incident from the left.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatteringResult {
    pub r: Complex64,
    pub t: Complex64,
    /// Set when a lossless resonant site forced the perfect-mirror limit.
    pub limit_applied: bool,
}

impl ScatteringResult {
    pub fn new(r: Complex64, t: Complex64) -> Self {
        Self { r, t, limit_applied: false }
    }

    pub fn reflectance(&self) -> f64 {
        self.r.norm_sqr()
    }

    pub fn transmittance(&self) -> f64 {
        self.t.norm_sqr()
    }

    /// Probability lost to channels outside the waveguide.
    pub fn loss(&self) -> f64 {
        1.0 - self.reflectance() - self.transmittance()
    }
}

/// 2×2 complex matrix acting on (right-moving, left-moving) amplitude pairs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transfer2x2 {
    pub m11: Complex64,
    pub m12: Complex64,
    pub m21: Complex64,
    pub m22: Complex64,
}

impl Transfer2x2 {
    pub const fn new(m11: Complex64, m12: Complex64, m21: Complex64, m22: Complex64) -> Self {
        Self { m11, m12, m21, m22 }
    }

    pub const fn identity() -> Self {
        const ONE: Complex64 = Complex64::new(1.0, 0.0);
        const ZERO: Complex64 = Complex64::new(0.0, 0.0);
        Self::new(ONE, ZERO, ZERO, ONE)
    }

    pub fn det(&self) -> Complex64 {
        self.m11 * self.m22 - self.m12 * self.m21
    }

    pub fn scale(&self, k: Complex64) -> Self {
        Self::new(self.m11 * k, self.m12 * k, self.m21 * k, self.m22 * k)
    }

    pub fn apply(&self, v: [Complex64; 2]) -> [Complex64; 2] {
        [self.m11 * v[0] + self.m12 * v[1], self.m21 * v[0] + self.m22 * v[1]]
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        [
            self.m11 - other.m11,
            self.m12 - other.m12,
            self.m21 - other.m21,
            self.m22 - other.m22,
        ]
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
    }
}

impl Mul for Transfer2x2 {
    type Output = Transfer2x2;

    fn mul(self, o: Transfer2x2) -> Transfer2x2 {
        Transfer2x2::new(
            self.m11 * o.m11 + self.m12 * o.m21,
            self.m11 * o.m12 + self.m12 * o.m22,
            self.m21 * o.m11 + self.m22 * o.m21,
            self.m21 * o.m12 + self.m22 * o.m22,
        )
    }
}

impl Add for Transfer2x2 {
    type Output = Transfer2x2;

    fn add(self, o: Transfer2x2) -> Transfer2x2 {
        Transfer2x2::new(self.m11 + o.m11, self.m12 + o.m12, self.m21 + o.m21, self.m22 + o.m22)
    }
}

//! Direction dependence of reflection from two differentially detuned atoms.
//!
//! With mean detuning `Δ̄ = v_g k − (ω₁+ω₂)/2`, splitting `s = ω₁ − ω₂` and
//! `α = 2θ`, the reflection with atom 1 met first is
//!
//! ```text
//! r = −[Γ²(e^{iα} − 1) + iΓ((e^{iα} + 1)(Δ̄ + iΓ₀) − (e^{iα} − 1)s/2)]
//!     / [(Δ̄ + i(Γ + Γ₀))² + Γ²e^{iα} − (s/2)²]
//! ```
//!
//! and the asymmetry `η = |r₁₂/r₂₁|²` reduces to
//!
//! ```text
//! η = [(Δ̄ + Γ tanθ)² + ((s/2)tanθ − Γ₀)²] / [(Δ̄ + Γ tanθ)² + ((s/2)tanθ + Γ₀)²]
//! ```
//!
//! Swapping the atoms is the same as `s → −s`, hence `η(−s) = 1/η(s)`.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::model::{EmitterChain, ProbeDetuning};
use crate::optimize::{first_argmax, golden_section_max};
use crate::transfer::chain_scatter;
use crate::{Error, Result, SweepGrid};

/// `|cos θ|` below this is treated as the `tan θ` singularity.
const TAN_SINGULAR: f64 = 1e-9;

const POLE_FLOOR: f64 = 1e-300;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoAtomConfig {
    pub mean_detuning: f64,
    pub splitting: f64,
    pub gamma: f64,
    pub gamma0: f64,
    /// Gap phase `kl`.
    pub theta: f64,
}

impl TwoAtomConfig {
    pub fn new(mean_detuning: f64, splitting: f64, gamma: f64, gamma0: f64, theta: f64) -> Result<Self> {
        for (field, value) in [("mean_detuning", mean_detuning), ("splitting", splitting), ("theta", theta)] {
            if !value.is_finite() {
                return Err(Error::NonFinite { field, value });
            }
        }
        if !(gamma.is_finite() && gamma > 0.0) {
            return Err(Error::NonPositiveGamma(gamma));
        }
        if !(gamma0.is_finite() && gamma0 >= 0.0) {
            return Err(Error::NegativeGamma0(gamma0));
        }
        Ok(Self { mean_detuning, splitting, gamma, gamma0, theta })
    }

    /// Atoms exchanged, i.e. `s → −s`.
    pub fn swapped(&self) -> Self {
        Self { splitting: -self.splitting, ..*self }
    }

    pub fn with_point(&self, theta: f64, splitting: f64) -> Self {
        Self { theta, splitting, ..*self }
    }

    /// The two-site chain with atom 1 (offset `+s/2`) met first, probed at `Δ̄`.
    pub fn to_chain(&self) -> Result<(EmitterChain, ProbeDetuning)> {
        let half = 0.5 * self.splitting;
        let chain = EmitterChain::uniform(self.gamma, self.gamma0, vec![half, -half], self.theta)?;
        Ok((chain, ProbeDetuning::new(self.mean_detuning)?))
    }
}

/// Closed-form reflection with atom 1 met first.
pub fn two_atom_reflection(cfg: &TwoAtomConfig) -> Result<Complex64> {
    let i = Complex64::i();
    let (g, g0, s_half) = (cfg.gamma, cfg.gamma0, 0.5 * cfg.splitting);
    let phase = Complex64::from_polar(1.0, 2.0 * cfg.theta);
    let detuning = Complex64::new(cfg.mean_detuning, g0);
    let num = g * g * (phase - 1.0) + i * g * ((phase + 1.0) * detuning - (phase - 1.0) * s_half);
    let den = Complex64::new(cfg.mean_detuning, g + g0).powi(2) + g * g * phase - s_half * s_half;
    if den.norm() < POLE_FLOOR {
        return Err(Error::ReflectionPole);
    }
    Ok(-num / den)
}

fn ratio(r12: Complex64, r21: Complex64) -> Result<f64> {
    if r21.norm() < POLE_FLOOR {
        return Err(Error::UndefinedRatio { r12, r21 });
    }
    Ok((r12 / r21).norm_sqr())
}

/// `|r₁₂/r₂₁|²` from the closed-form reflection, valid at every phase.
pub fn eta_from_reflection(cfg: &TwoAtomConfig) -> Result<f64> {
    ratio(two_atom_reflection(cfg)?, two_atom_reflection(&cfg.swapped())?)
}

/// The `tan θ` form of η. Where `tan θ` diverges, or the ratio is 0/0, the
/// value comes from [`eta_from_reflection`] instead.
pub fn eta_closed_form(cfg: &TwoAtomConfig) -> Result<f64> {
    if cfg.theta.cos().abs() < TAN_SINGULAR {
        return eta_from_reflection(cfg);
    }
    let tan = cfg.theta.tan();
    let common = (cfg.mean_detuning + cfg.gamma * tan).powi(2);
    let u = 0.5 * cfg.splitting * tan;
    let num = common + (u - cfg.gamma0).powi(2);
    let den = common + (u + cfg.gamma0).powi(2);
    if den == 0.0 {
        return eta_from_reflection(cfg);
    }
    Ok(num / den)
}

/// η from the transfer-matrix engine, scattering off both atom orderings.
pub fn eta_numeric(cfg: &TwoAtomConfig) -> Result<f64> {
    let (forward, probe) = cfg.to_chain()?;
    let (backward, _) = cfg.swapped().to_chain()?;
    ratio(chain_scatter(&forward, probe)?.r, chain_scatter(&backward, probe)?.r)
}

/// Splitting that maximises η at fixed θ, from the stationarity condition
/// `(s/2)tanθ = −√((Δ̄ + Γtanθ)² + Γ₀²)`. `None` where `tan θ` is 0 or infinite.
pub fn optimal_splitting(theta: f64, gamma: f64, gamma0: f64, mean_detuning: f64) -> Option<f64> {
    if theta.cos().abs() < TAN_SINGULAR {
        return None;
    }
    if theta.sin().abs() < TAN_SINGULAR {
        return None;
    }
    let tan = theta.tan();
    let u = -((mean_detuning + gamma * tan).powi(2) + gamma0 * gamma0).sqrt();
    Some(2.0 * u / tan)
}

/// η tabulated over a `(θ, s)` grid, θ-major.
#[derive(Debug, Clone, PartialEq)]
pub struct EtaField {
    pub theta: SweepGrid,
    pub s: SweepGrid,
    values: Vec<f64>,
}

impl EtaField {
    pub fn value(&self, theta_index: usize, s_index: usize) -> f64 {
        self.values[theta_index * self.s.len() + s_index]
    }

    /// All s-values at one θ.
    pub fn row(&self, theta_index: usize) -> &[f64] {
        let n = self.s.len();
        &self.values[theta_index * n..(theta_index + 1) * n]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `(θ, s, η)` triples in storage order.
    pub fn cells(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        let n = self.s.len();
        self.values
            .iter()
            .enumerate()
            .map(move |(k, &v)| (self.theta.points()[k / n], self.s.points()[k % n], v))
    }

    /// First maximum in storage order.
    pub fn argmax(&self) -> (f64, f64, f64) {
        let k = first_argmax(&self.values).expect("field is non-empty");
        let n = self.s.len();
        (self.theta.points()[k / n], self.s.points()[k % n], self.values[k])
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Tabulates η over `theta_grid × s_grid`.
pub fn eta_map(
    theta_grid: &SweepGrid,
    s_grid: &SweepGrid,
    gamma: f64,
    gamma0: f64,
    mean_detuning: f64,
) -> Result<EtaField> {
    let base = TwoAtomConfig::new(mean_detuning, 0.0, gamma, gamma0, 0.0)?;
    let n = s_grid.len();
    let values = (0..theta_grid.len() * n)
        .into_par_iter()
        .map(|k| eta_closed_form(&base.with_point(theta_grid.points()[k / n], s_grid.points()[k % n])))
        .collect::<Result<Vec<f64>>>()?;
    Ok(EtaField { theta: theta_grid.clone(), s: s_grid.clone(), values })
}

/// Closed rectangle in `(θ, s)`. Either side may collapse to a single value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Region {
    pub theta: (f64, f64),
    pub s: (f64, f64),
}

impl Region {
    pub fn new(theta: (f64, f64), s: (f64, f64)) -> Result<Self> {
        for (name, (lo, hi)) in [("theta", theta), ("s", s)] {
            if !(lo.is_finite() && hi.is_finite()) || lo > hi {
                return Err(Error::DegenerateRegion(format!("{name} range {lo}..{hi} is invalid")));
            }
        }
        if theta.0 == theta.1 && s.0 == s.1 {
            return Err(Error::DegenerateRegion("region is a single point".into()));
        }
        Ok(Self { theta, s })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EtaMaximum {
    pub theta: f64,
    pub s: f64,
    pub eta: f64,
}

/// Coarse samples per free axis in [`eta_argmax`].
pub const ARGMAX_GRID: usize = 65;

/// Locates the largest η in `region`.
///
/// A coarse grid scan picks the first best cell in θ-major order; alternating
/// golden-section searches on θ and s then refine it. Golden section alone
/// resolves the s-optimum only to about `√ε`, so the result is finally
/// polished with [`optimal_splitting`] when that point lies in the region and
/// is no worse.
pub fn eta_argmax(region: &Region, gamma: f64, gamma0: f64, mean_detuning: f64) -> Result<EtaMaximum> {
    let base = TwoAtomConfig::new(mean_detuning, 0.0, gamma, gamma0, 0.0)?;
    let eta = |theta: f64, s: f64| eta_closed_form(&base.with_point(theta, s)).unwrap_or(f64::NAN);
    let axis = |(lo, hi): (f64, f64)| -> Vec<f64> {
        if lo == hi {
            vec![lo]
        } else {
            let last = (ARGMAX_GRID - 1) as f64;
            (0..ARGMAX_GRID).map(|i| lo + (hi - lo) * (i as f64 / last)).collect()
        }
    };
    let thetas = axis(region.theta);
    let ss = axis(region.s);
    let coarse: Vec<f64> = (0..thetas.len() * ss.len())
        .into_par_iter()
        .map(|k| eta(thetas[k / ss.len()], ss[k % ss.len()]))
        .collect();
    let k = first_argmax(&coarse).ok_or(Error::Degenerate("η undefined on the whole search grid"))?;
    let (mut theta, mut s) = (thetas[k / ss.len()], ss[k % ss.len()]);
    let mut best = coarse[k];

    let step = |(lo, hi): (f64, f64)| (hi - lo) / (ARGMAX_GRID - 1) as f64;
    let (theta_step, s_step) = (step(region.theta), step(region.s));
    let bracket = |x: f64, h: f64, (lo, hi): (f64, f64)| ((x - h).max(lo), (x + h).min(hi));
    for _ in 0..200 {
        let (prev_theta, prev_s) = (theta, s);
        if s_step > 0.0 {
            let (lo, hi) = bracket(s, s_step, region.s);
            let m = golden_section_max(|x| eta(theta, x), lo, hi, 1e-12);
            if m.value >= best {
                s = m.x;
                best = m.value;
            }
        }
        if theta_step > 0.0 {
            let (lo, hi) = bracket(theta, theta_step, region.theta);
            let m = golden_section_max(|x| eta(x, s), lo, hi, 1e-12);
            if m.value >= best {
                theta = m.x;
                best = m.value;
            }
        }
        if (theta - prev_theta).abs() < 1e-10 && (s - prev_s).abs() < 1e-10 {
            break;
        }
    }

    if let Some(s_opt) = optimal_splitting(theta, gamma, gamma0, mean_detuning) {
        if (region.s.0..=region.s.1).contains(&s_opt) {
            let value = eta(theta, s_opt);
            if value >= best * (1.0 - 1e-12) {
                s = s_opt;
                best = value;
            }
        }
    }
    Ok(EtaMaximum { theta, s, eta: best })
}

//! Mode execution.

use std::path::Path;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use wgqed_core::cavity::{cavity_transmission_or_limit, CavitySystem};
use wgqed_core::nonreciprocity::{eta_argmax, eta_map};
use wgqed_core::transfer::{chain_scatter, fabry_perot_two_atom, segment_solve, spectrum, SpectrumRow};
use wgqed_core::transparency::{collective_linewidth_fit, odd_chain_residual, transparency_deviation, DetuningScheme};
use wgqed_core::{EmitterChain, ProbeDetuning, ScatteringResult, SweepGrid};

use crate::config::{Mode, RunConfig};
use crate::output::{Table, CAVITY_HEADER, ETA_HEADER, ORACLE_HEADER, SPECTRUM_HEADER};
use crate::CliError;

/// Largest oracle discrepancy accepted by `oracle-check`.
pub const ORACLE_TOL: f64 = 1e-10;

/// What a run produced.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub rows: usize,
    /// One-line human-readable digest.
    pub message: String,
}

/// Evaluates `config` and writes its table to `output`.
///
/// `seed` overrides the config seed. Tolerance violations in `oracle-check`
/// are reported as numerical failures after the table has been written.
pub fn run(config: &RunConfig, output: &Path, seed: Option<u64>) -> Result<RunSummary, CliError> {
    let seed = seed.or(config.seed).unwrap_or(0);
    let (table, message, failure) = evaluate(&config.mode, seed)?;
    table.write(output, config.format)?;
    match failure {
        Some(msg) => Err(CliError::Numerical(msg)),
        None => Ok(RunSummary { rows: table.len(), message }),
    }
}

type Evaluated = (Table, String, Option<String>);

fn evaluate(mode: &Mode, seed: u64) -> Result<Evaluated, CliError> {
    match mode {
        Mode::Spectrum { chain, grid } => {
            let rows = spectrum(chain, grid)?;
            let message = format!("spectrum: {} sites, {}", chain.len(), dip_summary(&rows));
            Ok((spectrum_table(&rows), message, None))
        }
        Mode::Transparency { gamma, gamma0, phase, scheme, grid } => {
            let chain = EmitterChain::uniform(*gamma, *gamma0, scheme.detunings()?, *phase)?;
            let rows = spectrum(&chain, grid)?;
            let message = transparency_summary(&chain, scheme, grid, &rows)?;
            Ok((spectrum_table(&rows), message, None))
        }
        Mode::Cavity { system, grid } => cavity(system, grid),
        Mode::EtaMap { rates, theta_grid, s_grid } => {
            let field = eta_map(theta_grid, s_grid, rates.gamma, rates.gamma0, rates.mean_detuning)?;
            let mut table = Table::new(ETA_HEADER);
            for (theta, s, eta) in field.cells() {
                table.push(vec![theta.into(), s.into(), eta.into()]);
            }
            let (theta, s, eta) = field.argmax();
            let message = format!(
                "eta-map: {}x{} cells, max eta {eta:.6} at theta {theta:.6}, s {s:.6}",
                theta_grid.len(),
                s_grid.len()
            );
            Ok((table, message, None))
        }
        Mode::EtaArgmax { rates, region } => {
            let best = eta_argmax(region, rates.gamma, rates.gamma0, rates.mean_detuning)?;
            let mut table = Table::new(ETA_HEADER);
            table.push(vec![best.theta.into(), best.s.into(), best.eta.into()]);
            let message = format!("eta-argmax: eta {:.10} at theta {:.10}, s {:.10}", best.eta, best.theta, best.s);
            Ok((table, message, None))
        }
        Mode::OracleCheck { cases, max_sites, probes } => oracle_check(*cases, *max_sites, *probes, seed),
    }
}

fn spectrum_table(rows: &[SpectrumRow]) -> Table {
    let mut table = Table::new(SPECTRUM_HEADER);
    for row in rows {
        let res = &row.result;
        table.push(vec![
            row.probe.into(),
            res.r.re.into(),
            res.r.im.into(),
            res.t.re.into(),
            res.t.im.into(),
            res.reflectance().into(),
            res.transmittance().into(),
            res.loss().into(),
        ]);
    }
    table
}

fn dip_summary(rows: &[SpectrumRow]) -> String {
    let min = rows
        .iter()
        .min_by(|a, b| a.result.transmittance().total_cmp(&b.result.transmittance()))
        .expect("grids are non-empty");
    format!("min T {:.6e} at delta {:.6}", min.result.transmittance(), min.probe)
}

fn transparency_summary(
    chain: &EmitterChain,
    scheme: &DetuningScheme,
    grid: &SweepGrid,
    rows: &[SpectrumRow],
) -> Result<String, CliError> {
    Ok(match scheme {
        DetuningScheme::Identical { count, .. } => {
            let width = match collective_linewidth_fit(rows) {
                Ok(w) => format!("{w:.6}"),
                Err(_) => "n/a".to_string(),
            };
            format!("transparency: {count} identical atoms, fitted half-width {width}, {}", dip_summary(rows))
        }
        DetuningScheme::EvenPairwise { .. } => {
            let dev = transparency_deviation(chain, ProbeDetuning::new(0.0)?)?;
            format!("transparency: {} paired atoms, |1 - t| at delta 0 = {dev:.3e}", chain.len())
        }
        DetuningScheme::OddPairwisePlusOne { .. } => {
            let leftover = scheme.leftover_position().expect("odd scheme has a leftover atom");
            let residual = odd_chain_residual(chain, leftover, grid)?;
            format!(
                "transparency: {} atoms, max |t_chain - t_single| under the pairwise protocol = {residual:.3e}",
                chain.len()
            )
        }
    })
}

fn cavity(system: &CavitySystem, grid: &SweepGrid) -> Result<Evaluated, CliError> {
    let rows: Vec<(f64, Complex64, bool)> = grid
        .points()
        .par_iter()
        .map(|&p| {
            let shifted = CavitySystem::new(
                system.kappa(),
                system.g(),
                system.cavity_detuning() - p,
                system.atom_detunings().iter().map(|d| d - p).collect(),
            )?;
            let (t, limit) = cavity_transmission_or_limit(&shifted);
            Ok((p, t, limit))
        })
        .collect::<Result<_, wgqed_core::Error>>()?;
    let mut table = Table::new(CAVITY_HEADER);
    for &(p, t, _) in &rows {
        table.push(vec![p.into(), t.re.into(), t.im.into(), t.norm_sqr().into()]);
    }
    let poles = rows.iter().filter(|row| row.2).count();
    let message = format!(
        "cavity: {} atoms, {} probes, {poles} on an atomic resonance",
        system.atom_detunings().len(),
        rows.len()
    );
    Ok((table, message, None))
}

fn max_diff(a: &ScatteringResult, b: &ScatteringResult) -> (f64, f64) {
    ((a.r - b.r).norm(), (a.t - b.t).norm())
}

struct OracleCase {
    chain: EmitterChain,
    probes: Vec<f64>,
}

fn oracle_check(cases: usize, max_sites: usize, probes: usize, seed: u64) -> Result<Evaluated, CliError> {
    // Draw every case up front so the table does not depend on thread count.
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let drawn: Vec<OracleCase> = (0..cases)
        .map(|case| {
            let n = rng.random_range(1..=max_sites);
            let gamma = rng.random_range(0.2..3.0);
            let gamma0 = if case % 2 == 0 { 0.0 } else { rng.random_range(0.0..2.0) };
            let detunings = (0..n).map(|_| rng.random_range(-5.0..5.0)).collect();
            let phases = (0..n).map(|_| rng.random_range(0.0..std::f64::consts::TAU)).collect();
            let probes = (0..probes).map(|_| rng.random_range(-8.0..8.0)).collect();
            Ok(OracleCase { chain: EmitterChain::new(gamma, gamma0, detunings, phases)?, probes })
        })
        .collect::<Result<_, wgqed_core::Error>>()?;

    let results: Vec<(f64, f64)> = drawn
        .par_iter()
        .map(|case| {
            let mut worst = (0.0_f64, 0.0_f64);
            for &p in &case.probes {
                let probe = ProbeDetuning::new(p)?;
                let direct = chain_scatter(&case.chain, probe)?;
                let mut checks = vec![segment_solve(&case.chain, probe)?];
                if case.chain.len() == 2 {
                    checks.push(fabry_perot_two_atom(&case.chain, probe)?);
                }
                for other in &checks {
                    let (dr, dt) = max_diff(&direct, other);
                    worst = (worst.0.max(dr), worst.1.max(dt));
                }
            }
            Ok(worst)
        })
        .collect::<Result<_, wgqed_core::Error>>()?;

    let mut table = Table::new(ORACLE_HEADER);
    for (i, &(dr, dt)) in results.iter().enumerate() {
        table.push(vec![i.into(), dr.into(), dt.into()]);
    }
    let worst = results.iter().fold(0.0_f64, |acc, &(dr, dt)| acc.max(dr).max(dt));
    let message = format!("oracle-check: {cases} cases, worst discrepancy {worst:.3e} (tolerance {ORACLE_TOL:.0e})");
    let failure = (worst.is_nan() || worst > ORACLE_TOL).then(|| format!("{message} exceeds tolerance"));
    Ok((table, message, failure))
}

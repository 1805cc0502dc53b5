//! Parsing for command-line inputs: complex numbers, unit-cell mini-specs,
//! and two-column sampled-potential files.

use clap::Args;
use num_complex::Complex64;
use scatter1d::{
    barrier_transfer, transfer_from_amplitudes, Error, PotentialSegment, PotentialStack, Result,
    SampledPotential, ScatteringAmplitudes, TransferMatrix, UnitConvention,
};
use std::path::Path;

fn invalid(what: impl Into<String>) -> Error {
    Error::InvalidParameter { what: what.into() }
}

/// Parses a complex number in `a+bi` form (also plain reals and pure
/// imaginaries), e.g. `-0.5+0.25i`, `3`, `2i`.
pub fn parse_complex(s: &str) -> std::result::Result<Complex64, String> {
    s.trim()
        .parse::<Complex64>()
        .map_err(|_| format!("expected a complex number like -0.5+0.25i, got {s:?}"))
}

/// Parses a unit-cell spec `height:length;height:length;...`, e.g.
/// `1.0:0.4;0:0.6` for a barrier followed by a gap.
pub fn parse_cell(spec: &str) -> Result<PotentialStack> {
    let mut segments = Vec::new();
    for part in spec.split(';') {
        let part = part.trim();
        if part.is_empty() {
            return Err(invalid(format!("empty segment in cell spec {spec:?}")));
        }
        let (height, length) = part
            .split_once(':')
            .ok_or_else(|| invalid(format!("cell segment {part:?} must be height:length")))?;
        let height: f64 = height
            .trim()
            .parse()
            .map_err(|_| invalid(format!("invalid segment height {height:?}")))?;
        let length: f64 = length
            .trim()
            .parse()
            .map_err(|_| invalid(format!("invalid segment length {length:?}")))?;
        segments.push(PotentialSegment::new(height, length)?);
    }
    PotentialStack::new(segments)
}

/// Reads a sampled potential from a text file: two whitespace-separated
/// numeric columns (position, value); `#` starts a comment; blank lines are
/// skipped. Positions must form a uniform grid.
pub fn read_potential_file(path: &Path) -> Result<SampledPotential> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| invalid(format!("cannot read {}: {e}", path.display())))?;
    let mut pairs = Vec::new();
    for (index, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut columns = line.split_whitespace();
        let (Some(x), Some(v)) = (columns.next(), columns.next()) else {
            return Err(invalid(format!(
                "{}:{}: expected two numeric columns",
                path.display(),
                index + 1
            )));
        };
        if columns.next().is_some() {
            return Err(invalid(format!(
                "{}:{}: expected exactly two columns",
                path.display(),
                index + 1
            )));
        }
        let x: f64 = x.parse().map_err(|_| {
            invalid(format!(
                "{}:{}: invalid position {x:?}",
                path.display(),
                index + 1
            ))
        })?;
        let v: f64 = v.parse().map_err(|_| {
            invalid(format!(
                "{}:{}: invalid potential value {v:?}",
                path.display(),
                index + 1
            ))
        })?;
        pairs.push((x, v));
    }
    SampledPotential::from_pairs(&pairs)
}

/// A transfer matrix given on the command line in exactly one of three ways:
/// scattering amplitudes, matrix entries, or a rectangular barrier.
#[derive(Args, Debug)]
pub struct MatrixSpec {
    /// Reflection amplitude (with --t), e.g. --r=-0.5+0.25i.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub r: Option<Complex64>,

    /// Transmission amplitude (with --r).
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub t: Option<Complex64>,

    /// Upper-left matrix entry (with --beta).
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub alpha: Option<Complex64>,

    /// Upper-right matrix entry (with --alpha).
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    pub beta: Option<Complex64>,

    /// Rectangular barrier at energy --E with height --V0 and width --L.
    #[arg(long)]
    pub barrier: bool,

    /// Energy for --barrier.
    #[arg(long = "E", value_name = "ENERGY")]
    pub energy: Option<f64>,

    /// Barrier height for --barrier (negative values describe wells).
    #[arg(long = "V0", value_name = "HEIGHT", allow_hyphen_values = true)]
    pub height: Option<f64>,

    /// Barrier width for --barrier.
    #[arg(long = "L", value_name = "WIDTH")]
    pub length: Option<f64>,
}

impl MatrixSpec {
    /// Resolves this description to a transfer matrix. Hand-entered
    /// amplitudes and matrix entries are validated against `tolerance`;
    /// barrier parameters are computed exactly.
    pub fn resolve(&self, units: &UnitConvention, tolerance: f64) -> Result<TransferMatrix> {
        let amplitude_mode = self.r.is_some() || self.t.is_some();
        let entry_mode = self.alpha.is_some() || self.beta.is_some();
        match (amplitude_mode, entry_mode, self.barrier) {
            (true, false, false) => {
                let (Some(r), Some(t)) = (self.r, self.t) else {
                    return Err(invalid("--r and --t must be given together"));
                };
                let amps = ScatteringAmplitudes::with_tolerance(r, t, tolerance)?;
                Ok(transfer_from_amplitudes(&amps))
            }
            (false, true, false) => {
                let (Some(alpha), Some(beta)) = (self.alpha, self.beta) else {
                    return Err(invalid("--alpha and --beta must be given together"));
                };
                TransferMatrix::with_tolerance(alpha, beta, tolerance)
            }
            (false, false, true) => {
                let (Some(energy), Some(height), Some(length)) =
                    (self.energy, self.height, self.length)
                else {
                    return Err(invalid("--barrier requires --E, --V0, and --L"));
                };
                barrier_transfer(energy, &PotentialSegment::new(height, length)?, units)
            }
            _ => Err(invalid(
                "specify exactly one of (--r, --t), (--alpha, --beta), or --barrier with --E/--V0/--L",
            )),
        }
    }
}

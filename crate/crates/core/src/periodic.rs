//! Finite periodic systems: N identical cells analyzed through the disk
//! picture. Iterated reflection coefficients, closed forms per conjugacy
//! class, N-cell reflectance, and allowed/forbidden band scans over energy.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{
    classify, kind_from_half_trace, mobius, reduce_to_canonical, ActionKind, DiskPoint,
    FixedPoints,
};
use crate::potentials::{stack_transfer, PotentialStack, UnitConvention};
use crate::transfer::TransferMatrix;

/// Arguments of sinh beyond this threshold overflow f64; the gap
/// transmission is then exactly 0 to machine precision.
const SINH_OVERFLOW: f64 = 700.0;

/// Summary of an N-cell periodic system built from one cell matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeriodicResult {
    /// Number of cells.
    pub n: u32,
    /// Reflection coefficient of the N-cell system (the disk point reached
    /// from the origin after N applications of the cell action).
    pub z_n: DiskPoint,
    /// |z_n|^2, computed through the class-specific closed form.
    pub reflectance: f64,
    /// Conjugacy class of the single cell.
    pub kind: ActionKind,
}

/// Band classification of one energy sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BandStatus {
    /// |half-trace| < 1: Bloch waves propagate (elliptic cell action).
    Allowed,
    /// |half-trace| > 1: evanescent envelope (hyperbolic cell action).
    Forbidden,
    /// |half-trace| = 1 within tolerance (parabolic cell action).
    Edge,
}

impl BandStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            BandStatus::Allowed => "allowed",
            BandStatus::Forbidden => "forbidden",
            BandStatus::Edge => "edge",
        }
    }
}

impl std::fmt::Display for BandStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One energy sample of a band scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BandPoint {
    pub energy: f64,
    /// Signed half-trace of the cell matrix at this energy; in an allowed
    /// band this is cos(q Lambda) for the Bloch phase q Lambda.
    pub half_trace: f64,
    pub status: BandStatus,
    /// Determinant residual of the cell matrix at this energy.
    pub det_residual: f64,
}

/// The band status of a half-trace value.
pub fn band_status(half_trace: f64) -> BandStatus {
    match kind_from_half_trace(half_trace) {
        ActionKind::Elliptic => BandStatus::Allowed,
        ActionKind::Hyperbolic => BandStatus::Forbidden,
        ActionKind::Parabolic => BandStatus::Edge,
    }
}

/// Applies the cell action n times to z0, returning the n successive images
/// (z_1 .. z_n). With z0 at the origin these are the reflection
/// coefficients of 1, 2, .., n cells.
pub fn iterate_disk(m: &TransferMatrix, n: u32, z0: DiskPoint) -> Result<Vec<DiskPoint>> {
    let mut points = Vec::with_capacity(n as usize);
    let mut z = z0;
    for _ in 0..n {
        z = mobius(m, z)?;
        points.push(z);
    }
    Ok(points)
}

/// Closed form for the N-cell reflection coefficient (the origin's image
/// under the N-fold cell action) for hyperbolic and parabolic cells.
///
/// Hyperbolic: z_N = z_plus (1 - chi^N) / (1 - chi^N z_plus / z_minus) with
/// z_plus the attracting and z_minus the repelling fixed point and
/// chi = (alpha + beta z_minus)/(alpha + beta z_plus), |chi| < 1.
/// Parabolic: z_N = N beta z_f^2 / (N beta z_f - 1) for the sign-normalized
/// matrix. Elliptic cells have no convergent closed form of this shape; use
/// [`elliptic_zn`] instead.
pub fn closed_form_zn(m: &TransferMatrix, n: u32) -> Result<DiskPoint> {
    let mn = m.sign_normalized();
    let cls = classify(&mn);
    match cls.fixed_points {
        FixedPoints::Boundary {
            repelling,
            attracting,
        } => {
            let z_plus = attracting.z();
            let z_minus = repelling.z();
            let chi = (mn.alpha() + mn.beta() * z_minus) / (mn.alpha() + mn.beta() * z_plus);
            let chi_n = chi.powu(n);
            let den = 1.0 - chi_n * z_plus / z_minus;
            if den.norm() < 1e-150 {
                return Err(Error::DegenerateDenominator);
            }
            Ok(DiskPoint::saturate(z_plus * (1.0 - chi_n) / den))
        }
        FixedPoints::Double { point } => {
            let zf = point.z();
            let nb = f64::from(n) * mn.beta();
            let den = nb * zf - 1.0;
            if den.norm() < 1e-150 {
                return Err(Error::DegenerateDenominator);
            }
            Ok(DiskPoint::saturate(nb * zf * zf / den))
        }
        FixedPoints::Unspecified => Ok(DiskPoint::origin()),
        FixedPoints::Interior { .. } => Err(Error::EllipticClosedForm),
    }
}

/// Closed form for elliptic cells: conjugate the fixed point to the origin,
/// where the N-fold action is the rotation w -> w e^{-i N theta}.
pub fn elliptic_zn(m: &TransferMatrix, n: u32) -> Result<DiskPoint> {
    let cls = classify(m);
    if cls.kind != ActionKind::Elliptic {
        return Err(Error::InvalidParameter {
            what: format!("elliptic_zn needs an elliptic cell, got {}", cls.kind),
        });
    }
    let (c, cls) = reduce_to_canonical(m)?;
    let w0 = mobius(&c, DiskPoint::origin())?;
    let phase = Complex64::from_polar(1.0, -f64::from(n) * cls.canonical_parameter);
    mobius(&c.inverse(), DiskPoint::saturate(w0.z() * phase))
}

/// Transmittance of N cells, 1 - R_N = s^2 / (|beta|^2 + s^2), with the
/// class-dependent suppression factor s: sinh(x)/sinh(Nx) in a gap
/// (x = acosh|half-trace|; exponentially small for large N), 1/N at a band
/// edge, and sin(x)/sin(Nx) in a band (x = acos|half-trace|; equal to 1 at
/// the transmission resonances sin(Nx) = +-sin(x)).
///
/// Computed in this "gap-first" arrangement so the exponentially small gap
/// transmittance keeps full relative precision instead of cancelling in
/// 1 - |z_N|^2.
pub fn transmittance_n(m: &TransferMatrix, n: u32) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidParameter {
            what: "transmittance needs at least one cell".to_string(),
        });
    }
    let mn = m.sign_normalized();
    let ht = mn.half_trace();
    let beta_sq = mn.beta().norm_sqr();
    let nf = f64::from(n);
    match kind_from_half_trace(ht) {
        ActionKind::Hyperbolic => {
            let x = ht.acosh();
            let s = if nf * x > SINH_OVERFLOW {
                0.0
            } else {
                x.sinh() / (nf * x).sinh()
            };
            Ok(s * s / (beta_sq + s * s))
        }
        ActionKind::Parabolic => {
            let s = 1.0 / nf;
            Ok(s * s / (beta_sq + s * s))
        }
        ActionKind::Elliptic => {
            // Inverted form: sin(N x) can vanish (resonance), sin(x) cannot.
            let x = ht.clamp(-1.0, 1.0).acos();
            let f = (nf * x).sin() / x.sin();
            Ok(1.0 / (1.0 + beta_sq * f * f))
        }
    }
}

/// Reflectance R_N = 1 - transmittance of N cells.
pub fn reflectance_n(m: &TransferMatrix, n: u32) -> Result<f64> {
    Ok(1.0 - transmittance_n(m, n)?)
}

/// Full N-cell summary: class, closed-form z_N from the origin, and
/// reflectance.
pub fn periodic_result(m: &TransferMatrix, n: u32) -> Result<PeriodicResult> {
    let kind = classify(m).kind;
    let z_n = match kind {
        ActionKind::Elliptic => elliptic_zn(m, n)?,
        _ => closed_form_zn(m, n)?,
    };
    Ok(PeriodicResult {
        n,
        z_n,
        reflectance: reflectance_n(m, n)?,
        kind,
    })
}

/// Scans the cell's half-trace over an energy grid and classifies each
/// sample as allowed, forbidden, or edge. Runs in parallel; the output
/// order matches the input order exactly.
pub fn band_scan(
    cell: &PotentialStack,
    energies: &[f64],
    units: &UnitConvention,
) -> Result<Vec<BandPoint>> {
    energies
        .par_iter()
        .map(|&energy| {
            let m = stack_transfer(energy, cell, units)?;
            let half_trace = m.half_trace();
            Ok(BandPoint {
                energy,
                half_trace,
                status: band_status(half_trace),
                det_residual: m.det_residual(),
            })
        })
        .collect()
}

/// Locates band edges (|half-trace| = 1 crossings) in [e_min, e_max]: a
/// uniform scan with `samples` points brackets each crossing, then bisection
/// refines it to an interval of at most 1e-8 * max(1, E). Returns the edge
/// energies in increasing order. Gaps narrower than the scan spacing can be
/// missed, so choose `samples` against the expected band structure.
pub fn band_edges(
    cell: &PotentialStack,
    e_min: f64,
    e_max: f64,
    samples: usize,
    units: &UnitConvention,
) -> Result<Vec<f64>> {
    if !(e_min > 0.0 && e_max > e_min) || !e_min.is_finite() || !e_max.is_finite() {
        return Err(Error::InvalidParameter {
            what: format!("band edge search needs 0 < e_min < e_max, got [{e_min}, {e_max}]"),
        });
    }
    if samples < 2 {
        return Err(Error::InvalidParameter {
            what: format!("band edge search needs at least 2 samples, got {samples}"),
        });
    }
    let gap_sign = |energy: f64| -> Result<f64> {
        Ok(stack_transfer(energy, cell, units)?.half_trace().abs() - 1.0)
    };
    let grid = |j: usize| e_min + (e_max - e_min) * j as f64 / (samples - 1) as f64;

    let mut edges = Vec::new();
    let mut prev_e = grid(0);
    let mut prev_s = gap_sign(prev_e)?;
    if prev_s == 0.0 {
        edges.push(prev_e);
    }
    for j in 1..samples {
        let e = grid(j);
        let s = gap_sign(e)?;
        if s == 0.0 {
            edges.push(e);
        } else if prev_s != 0.0 && (s > 0.0) != (prev_s > 0.0) {
            let (mut lo, mut hi, mut s_lo) = (prev_e, e, prev_s);
            while hi - lo > 1e-8 * hi.abs().max(1.0) {
                let mid = 0.5 * (lo + hi);
                let s_mid = gap_sign(mid)?;
                if s_mid == 0.0 {
                    lo = mid;
                    hi = mid;
                    break;
                }
                if (s_mid > 0.0) == (s_lo > 0.0) {
                    lo = mid;
                    s_lo = s_mid;
                } else {
                    hi = mid;
                }
            }
            edges.push(0.5 * (lo + hi));
        }
        prev_e = e;
        prev_s = s;
    }
    Ok(edges)
}

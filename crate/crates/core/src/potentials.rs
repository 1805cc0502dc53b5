//! Analytic transfer matrices for piecewise-constant potentials in every
//! energy regime, plus a direct wavefunction-integration oracle that builds
//! the same matrix from nothing but the Schroedinger equation.
//!
//! Conventions: amplitudes are phase-anchored at each scatterer's own edges,
//! so a zero-height segment of length d is exactly the pure-phase matrix
//! diag(e^{-ikd}, e^{+ikd}), adjacent segments compose by plain matrix
//! products, symmetric potentials produce purely imaginary beta, and a
//! barrier at E = V0 is exactly parabolic (trace 2). For E < V0 the decay
//! constant is kappa = sqrt(2m(V0-E))/hbar; for E > V0 the oscillation
//! constant is kbar = sqrt(2m(E-V0))/hbar.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::transfer::{
    compose, from_real_representation, transfer_from_amplitudes, RealTransferMatrix,
    ScatteringAmplitudes, TransferMatrix, INVARIANT_TOLERANCE,
};

/// Relative half-width of the window around E = V0 inside which the
/// limiting (parabolic) formulas replace the general ones, which lose
/// precision as sinh(kappa L)/kappa approaches L.
pub const PARABOLIC_GUARD: f64 = 1e-8;

/// Unit system. Defaults to hbar = 1 and mass = 1/2, so that k^2 = E.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitConvention {
    pub hbar: f64,
    pub mass: f64,
}

impl Default for UnitConvention {
    fn default() -> Self {
        Self {
            hbar: 1.0,
            mass: 0.5,
        }
    }
}

impl UnitConvention {
    /// Builds a unit system, rejecting non-positive constants.
    pub fn new(hbar: f64, mass: f64) -> Result<Self> {
        if !(hbar > 0.0 && hbar.is_finite()) {
            return Err(Error::InvalidParameter {
                what: format!("hbar must be positive and finite, got {hbar}"),
            });
        }
        if !(mass > 0.0 && mass.is_finite()) {
            return Err(Error::InvalidParameter {
                what: format!("mass must be positive and finite, got {mass}"),
            });
        }
        Ok(Self { hbar, mass })
    }

    /// Asymptotic wavenumber k = sqrt(2 m E)/hbar; requires E > 0.
    pub fn wavenumber(&self, energy: f64) -> Result<f64> {
        if !(energy > 0.0 && energy.is_finite()) {
            return Err(Error::NonPositiveEnergy { value: energy });
        }
        Ok((2.0 * self.mass * energy).sqrt() / self.hbar)
    }
}

/// One rectangular piece of potential: height V0 over a length L.
/// Height may be positive (barrier), negative (well), or zero (free gap).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotentialSegment {
    height: f64,
    length: f64,
}

impl PotentialSegment {
    /// Builds a segment; the length must be positive and both fields finite.
    pub fn new(height: f64, length: f64) -> Result<Self> {
        if !(length > 0.0 && length.is_finite()) {
            return Err(Error::InvalidParameter {
                what: format!("segment length must be positive and finite, got {length}"),
            });
        }
        if !height.is_finite() {
            return Err(Error::InvalidParameter {
                what: format!("segment height must be finite, got {height}"),
            });
        }
        Ok(Self { height, length })
    }

    pub fn height(&self) -> f64 {
        self.height
    }

    pub fn length(&self) -> f64 {
        self.length
    }
}

/// An ordered, non-empty run of adjacent segments; gaps between scatterers
/// are explicit zero-height segments.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialStack {
    segments: Vec<PotentialSegment>,
}

impl PotentialStack {
    /// Builds a stack from its segments; must be non-empty.
    pub fn new(segments: Vec<PotentialSegment>) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::InvalidParameter {
                what: "potential stack must contain at least one segment".to_string(),
            });
        }
        Ok(Self { segments })
    }

    pub fn segments(&self) -> &[PotentialSegment] {
        &self.segments
    }

    /// Total spatial extent.
    pub fn total_length(&self) -> f64 {
        self.segments.iter().map(|s| s.length()).sum()
    }

    /// Potential value at position x measured from the stack's left edge;
    /// zero outside the stack.
    pub fn value_at(&self, x: f64) -> f64 {
        let mut left = 0.0;
        for seg in &self.segments {
            let right = left + seg.length();
            if x >= left && x < right {
                return seg.height();
            }
            left = right;
        }
        0.0
    }
}

/// Reflection and transmission amplitudes of a single rectangular segment,
/// phase-anchored at the segment edges.
///
/// Three regimes share continuous limits: tunneling (E < V0, hyperbolic
/// functions of kappa L), propagation over the segment (E > V0, circular
/// functions of kbar L; wells reuse this branch), and the E = V0 window
/// (limiting formulas r = 1/(1 + 2i/kL), t = 1/(1 - ikL/2), applied when
/// |E - V0| < PARABOLIC_GUARD * max(E, |V0|)).
pub fn barrier_amplitudes(
    energy: f64,
    seg: &PotentialSegment,
    units: &UnitConvention,
) -> Result<ScatteringAmplitudes> {
    let k = units.wavenumber(energy)?;
    let v0 = seg.height();
    let l = seg.length();
    let i = Complex64::i();

    if (energy - v0).abs() < PARABOLIC_GUARD * energy.abs().max(v0.abs()) {
        let kl = k * l;
        let r = 1.0 / (1.0 + 2.0 * i / kl);
        let t = 1.0 / (1.0 - i * kl / 2.0);
        return ScatteringAmplitudes::with_tolerance(r, t, INVARIANT_TOLERANCE);
    }

    let two_m = 2.0 * units.mass / (units.hbar * units.hbar);
    if energy < v0 {
        let kappa = (two_m * (v0 - energy)).sqrt();
        let (sh, ch) = ((kappa * l).sinh(), (kappa * l).cosh());
        let den = (k * k - kappa * kappa) * sh + 2.0 * i * k * kappa * ch;
        let r = (k * k + kappa * kappa) * sh / den;
        let t = 2.0 * i * k * kappa / den;
        ScatteringAmplitudes::with_tolerance(r, t, INVARIANT_TOLERANCE)
    } else {
        let kbar = (two_m * (energy - v0)).sqrt();
        let (sn, cs) = ((kbar * l).sin(), (kbar * l).cos());
        let den = i * (k * k + kbar * kbar) * sn - 2.0 * k * kbar * cs;
        let r = i * (k * k - kbar * kbar) * sn / den;
        let t = -2.0 * k * kbar / den;
        ScatteringAmplitudes::with_tolerance(r, t, INVARIANT_TOLERANCE)
    }
}

/// Transfer matrix of a single rectangular segment; elliptic for E > V0,
/// hyperbolic for E < V0, parabolic at E = V0.
pub fn barrier_transfer(
    energy: f64,
    seg: &PotentialSegment,
    units: &UnitConvention,
) -> Result<TransferMatrix> {
    Ok(transfer_from_amplitudes(&barrier_amplitudes(
        energy, seg, units,
    )?))
}

/// Pure-phase propagation over a zero-potential distance d:
/// diag(e^{-ikd}, e^{+ikd}).
pub fn free_transfer(energy: f64, d: f64, units: &UnitConvention) -> Result<TransferMatrix> {
    if !(d >= 0.0 && d.is_finite()) {
        return Err(Error::InvalidParameter {
            what: format!("propagation distance must be non-negative and finite, got {d}"),
        });
    }
    let k = units.wavenumber(energy)?;
    Ok(TransferMatrix::new(
        Complex64::from_polar(1.0, -k * d),
        Complex64::new(0.0, 0.0),
    )
    .expect("a pure phase satisfies the determinant condition"))
}

/// Transfer matrix of a whole stack: the ordered product of the per-segment
/// matrices, left-to-right in space mapping to left-to-right in the product.
pub fn stack_transfer(
    energy: f64,
    stack: &PotentialStack,
    units: &UnitConvention,
) -> Result<TransferMatrix> {
    let mut acc = TransferMatrix::identity();
    for seg in stack.segments() {
        acc = compose(&acc, &barrier_transfer(energy, seg, units)?);
    }
    Ok(acc)
}

/// A potential tabulated on a uniform grid of positions.
///
/// `values[i]` is treated by the integrator as the constant potential on the
/// interval from `positions()[i]` to `positions()[i+1]`; the final sample
/// exists to complete the node grid and is not integrated over. The
/// potential is assumed to vanish outside the grid (that is where the
/// asymptotic plane waves live); this cannot be checked from the samples
/// themselves and is not enforced.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledPotential {
    x0: f64,
    dx: f64,
    values: Vec<f64>,
}

impl SampledPotential {
    /// Builds from a start position, spacing, and node values (at least two).
    pub fn new(x0: f64, dx: f64, values: Vec<f64>) -> Result<Self> {
        if !(dx > 0.0 && dx.is_finite()) {
            return Err(Error::InvalidParameter {
                what: format!("grid spacing must be positive and finite, got {dx}"),
            });
        }
        if !x0.is_finite() {
            return Err(Error::InvalidParameter {
                what: format!("grid origin must be finite, got {x0}"),
            });
        }
        if values.len() < 2 {
            return Err(Error::InvalidParameter {
                what: "a sampled potential needs at least two samples".to_string(),
            });
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter {
                what: "sampled potential values must be finite".to_string(),
            });
        }
        Ok(Self { x0, dx, values })
    }

    /// Builds from explicit (position, value) pairs, validating that the
    /// positions are strictly increasing and uniformly spaced.
    pub fn from_pairs(pairs: &[(f64, f64)]) -> Result<Self> {
        if pairs.len() < 2 {
            return Err(Error::InvalidParameter {
                what: "a sampled potential needs at least two samples".to_string(),
            });
        }
        let dx = pairs[1].0 - pairs[0].0;
        if !(dx > 0.0 && dx.is_finite()) {
            return Err(Error::InvalidParameter {
                what: "sample positions must be strictly increasing".to_string(),
            });
        }
        let scale = dx.abs().max(pairs[0].0.abs()).max(1e-300);
        for w in pairs.windows(2) {
            let step = w[1].0 - w[0].0;
            if step <= 0.0 {
                return Err(Error::InvalidParameter {
                    what: "sample positions must be strictly increasing".to_string(),
                });
            }
            if (step - dx).abs() > 1e-9 * scale.max(step.abs()) {
                return Err(Error::InvalidParameter {
                    what: "sample positions must be uniformly spaced".to_string(),
                });
            }
        }
        Self::new(pairs[0].0, dx, pairs.iter().map(|p| p.1).collect())
    }

    /// Rasterizes a stack onto `n` equal intervals covering its extent.
    ///
    /// Each interval stores the exact average of the piecewise-constant
    /// potential over that interval, so an interval straddling a segment
    /// boundary gets the width-weighted mean. That choice cancels the
    /// first-order sampling error a point sample would commit at a
    /// discontinuity and keeps the integrator at its nominal order.
    pub fn from_stack(stack: &PotentialStack, n: usize) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidParameter {
                what: "rasterization needs at least one interval".to_string(),
            });
        }
        let total = stack.total_length();
        let h = total / n as f64;
        let mut values = Vec::with_capacity(n + 1);
        // Walk intervals and segments together, accumulating overlap.
        let bounds: Vec<f64> = {
            let mut acc = 0.0;
            let mut b = vec![0.0];
            for seg in stack.segments() {
                acc += seg.length();
                b.push(acc);
            }
            b
        };
        let mut seg_idx = 0usize;
        for i in 0..n {
            let lo = i as f64 * h;
            let hi = lo + h;
            let mut integral = 0.0;
            while seg_idx > 0 && bounds[seg_idx] > lo {
                seg_idx -= 1;
            }
            for (j, seg) in stack.segments().iter().enumerate().skip(seg_idx) {
                let (s_lo, s_hi) = (bounds[j], bounds[j + 1]);
                if s_hi <= lo {
                    seg_idx = j + 1;
                    continue;
                }
                if s_lo >= hi {
                    break;
                }
                let overlap = s_hi.min(hi) - s_lo.max(lo);
                if overlap > 0.0 {
                    integral += seg.height() * overlap;
                }
            }
            values.push(integral / h);
        }
        // Final node completes the grid; its value is never integrated over.
        values.push(stack.segments().last().map_or(0.0, |s| s.height()));
        Self::new(0.0, h, values)
    }

    /// Start of the grid.
    pub fn x_start(&self) -> f64 {
        self.x0
    }

    /// End of the grid.
    pub fn x_end(&self) -> f64 {
        self.x0 + self.dx * (self.values.len() - 1) as f64
    }

    /// Grid spacing.
    pub fn dx(&self) -> f64 {
        self.dx
    }

    /// Node values.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Node positions, same length as `values()`.
    pub fn positions(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.values.len()).map(move |i| self.x0 + self.dx * i as f64)
    }
}

/// Builds the transfer matrix by integrating the Schroedinger equation
/// directly, with no scattering theory beyond the change of basis.
///
/// Two basis solutions with (psi, psi') = (1, 0) and (0, 1) at the right
/// edge are carried to the left edge with a fixed-step fourth-order
/// Runge-Kutta scheme, one step per grid interval, the potential held at
/// the interval's sampled value (so steps never straddle a discontinuity
/// and the nominal order is preserved). The resulting real propagator is
/// then converted to the complex representation. A determinant residual
/// beyond the construction tolerance reports the grid as too coarse.
pub fn numerical_transfer(
    energy: f64,
    potential: &SampledPotential,
    units: &UnitConvention,
) -> Result<TransferMatrix> {
    let k = units.wavenumber(energy)?;
    let h = potential.dx;
    let two_m = 2.0 * units.mass / (units.hbar * units.hbar);
    let n = potential.values.len() - 1;

    // Columns of the propagator: images of (1,0) and (0,1).
    let mut y = [[1.0f64, 0.0], [0.0, 1.0]]; // y[col] = (psi, psi')
    for i in (0..n).rev() {
        let q = two_m * (potential.values[i] - energy);
        for col in &mut y {
            let f = |p: [f64; 2]| [p[1], q * p[0]];
            let y0 = *col;
            let k1 = f(y0);
            let k2 = f([y0[0] - 0.5 * h * k1[0], y0[1] - 0.5 * h * k1[1]]);
            let k3 = f([y0[0] - 0.5 * h * k2[0], y0[1] - 0.5 * h * k2[1]]);
            let k4 = f([y0[0] - h * k3[0], y0[1] - h * k3[1]]);
            col[0] = y0[0] - h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]);
            col[1] = y0[1] - h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]);
        }
    }

    let real = RealTransferMatrix {
        a: y[0][0],
        b: y[1][0],
        c: y[0][1],
        d: y[1][1],
    };
    let residual = (real.det() - 1.0).abs();
    if !residual.is_finite() || residual > INVARIANT_TOLERANCE {
        return Err(Error::GridTooCoarse {
            residual,
            tolerance: INVARIANT_TOLERANCE,
        });
    }
    Ok(from_real_representation(&real, k)
        .expect("determinant residual validated against the same tolerance"))
}

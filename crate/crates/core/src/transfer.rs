//! SU(1,1) transfer-matrix algebra: construction, validation, composition,
//! amplitude extraction, integer powers, and the real (wavefunction /
//! derivative) change of basis.
//!
//! A lossless one-dimensional scatterer is represented by the matrix
//! `[[alpha, beta], [beta*, alpha*]]` with `|alpha|^2 - |beta|^2 = 1`,
//! relating the wave amplitudes on its left to those on its right. Only the
//! two independent entries are stored, so the group structure cannot be
//! violated once a value has been constructed.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Relative tolerance applied by constructors when validating the
/// determinant and flux invariants.
pub const INVARIANT_TOLERANCE: f64 = 1e-9;

/// A lossless transfer matrix, stored as the pair (alpha, beta).
///
/// The full matrix is `[[alpha, beta], [conj(beta), conj(alpha)]]` and has
/// unit determinant: `|alpha|^2 - |beta|^2 = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferMatrix {
    alpha: Complex64,
    beta: Complex64,
}

impl TransferMatrix {
    /// Builds a transfer matrix, validating the determinant condition
    /// against [`INVARIANT_TOLERANCE`].
    pub fn new(alpha: Complex64, beta: Complex64) -> Result<Self> {
        Self::with_tolerance(alpha, beta, INVARIANT_TOLERANCE)
    }

    /// Builds a transfer matrix with an explicit determinant tolerance.
    /// Useful for entries quoted to few significant figures; the values are
    /// used exactly as given, never renormalized.
    pub fn with_tolerance(alpha: Complex64, beta: Complex64, tolerance: f64) -> Result<Self> {
        let residual = (alpha.norm_sqr() - beta.norm_sqr() - 1.0).abs();
        if !residual.is_finite() || residual > tolerance {
            return Err(Error::DetViolation { residual, tolerance });
        }
        Ok(Self { alpha, beta })
    }

    /// Builds without validation; for internal use where the invariant is
    /// guaranteed analytically (e.g. values derived from flux-validated
    /// amplitudes, or canonical forms).
    pub(crate) fn new_unchecked(alpha: Complex64, beta: Complex64) -> Self {
        Self { alpha, beta }
    }

    /// The identity matrix (transparent system).
    pub fn identity() -> Self {
        Self {
            alpha: Complex64::new(1.0, 0.0),
            beta: Complex64::new(0.0, 0.0),
        }
    }

    /// Upper-left entry.
    pub fn alpha(&self) -> Complex64 {
        self.alpha
    }

    /// Upper-right entry.
    pub fn beta(&self) -> Complex64 {
        self.beta
    }

    /// The full 2x2 matrix as rows.
    pub fn entries(&self) -> [[Complex64; 2]; 2] {
        [
            [self.alpha, self.beta],
            [self.beta.conj(), self.alpha.conj()],
        ]
    }

    /// Trace, 2 Re(alpha); real because the diagonal entries are conjugates.
    pub fn trace(&self) -> f64 {
        2.0 * self.alpha.re
    }

    /// Half the trace, Re(alpha); the classification variable.
    pub fn half_trace(&self) -> f64 {
        self.alpha.re
    }

    /// | |alpha|^2 - |beta|^2 - 1 |, the deviation from unit determinant.
    pub fn det_residual(&self) -> f64 {
        (self.alpha.norm_sqr() - self.beta.norm_sqr() - 1.0).abs()
    }

    /// Group inverse; for unit determinant this is [[alpha*, -beta], [-beta*, alpha]].
    pub fn inverse(&self) -> Self {
        Self {
            alpha: self.alpha.conj(),
            beta: -self.beta,
        }
    }

    /// Returns M or -M, whichever has non-negative trace. M and -M induce
    /// the same disk action, and several formulas (square root, parabolic
    /// closed form, translation length) need the positive-trace member.
    pub fn sign_normalized(&self) -> Self {
        if self.alpha.re < 0.0 {
            Self {
                alpha: -self.alpha,
                beta: -self.beta,
            }
        } else {
            *self
        }
    }

    /// Applies the matrix to a pair of wave amplitudes on the right side,
    /// producing the pair on the left side.
    pub fn apply(&self, right: WaveAmplitudePair) -> WaveAmplitudePair {
        WaveAmplitudePair {
            plus: self.alpha * right.plus + self.beta * right.minus,
            minus: self.beta.conj() * right.plus + self.alpha.conj() * right.minus,
        }
    }
}

/// Reflection and transmission amplitudes of a lossless scatterer,
/// with `|r|^2 + |t|^2 = 1` and `t != 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatteringAmplitudes {
    r: Complex64,
    t: Complex64,
}

impl ScatteringAmplitudes {
    /// Builds amplitudes, validating flux conservation against
    /// [`INVARIANT_TOLERANCE`].
    pub fn new(r: Complex64, t: Complex64) -> Result<Self> {
        Self::with_tolerance(r, t, INVARIANT_TOLERANCE)
    }

    /// Builds amplitudes with an explicit flux tolerance. Useful for inputs
    /// quoted to few significant figures; the values are used exactly as
    /// given, never renormalized.
    pub fn with_tolerance(r: Complex64, t: Complex64, tolerance: f64) -> Result<Self> {
        if t.norm_sqr() == 0.0 {
            return Err(Error::NoTransmission);
        }
        let residual = (r.norm_sqr() + t.norm_sqr() - 1.0).abs();
        if !residual.is_finite() || residual > tolerance {
            return Err(Error::FluxViolation {
                residual,
                tolerance,
            });
        }
        Ok(Self { r, t })
    }

    /// Reflection amplitude for waves incident from the left.
    pub fn r(&self) -> Complex64 {
        self.r
    }

    /// Transmission amplitude.
    pub fn t(&self) -> Complex64 {
        self.t
    }

    /// Reflection amplitude for waves incident from the right,
    /// r' = -r* t / t*.
    pub fn r_prime(&self) -> Complex64 {
        -self.r.conj() * self.t / self.t.conj()
    }

    /// Transmission amplitude from the right; equals t by time-reversal
    /// invariance.
    pub fn t_prime(&self) -> Complex64 {
        self.t
    }

    /// | |r|^2 + |t|^2 - 1 |, the deviation from flux conservation.
    pub fn flux_residual(&self) -> f64 {
        (self.r.norm_sqr() + self.t.norm_sqr() - 1.0).abs()
    }
}

/// The transfer matrix in the (wavefunction, derivative) basis: a real
/// 2x2 matrix with unit determinant. Entries `b` and `c` carry units of
/// inverse wavenumber and wavenumber respectively.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealTransferMatrix {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl RealTransferMatrix {
    /// Determinant a*d - b*c.
    pub fn det(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    /// Trace a + d.
    pub fn trace(&self) -> f64 {
        self.a + self.d
    }
}

/// Right- and left-moving wave coefficients at one side of a scatterer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveAmplitudePair {
    pub plus: Complex64,
    pub minus: Complex64,
}

/// Builds the transfer matrix from scattering amplitudes:
/// alpha = 1/t, beta = r*/t*.
///
/// The determinant residual of the result equals the amplitudes' flux
/// residual divided by |t|^2, so it inherits whatever tolerance the
/// amplitudes were validated with.
pub fn transfer_from_amplitudes(amps: &ScatteringAmplitudes) -> TransferMatrix {
    TransferMatrix::new_unchecked(1.0 / amps.t, amps.r.conj() / amps.t.conj())
}

/// Recovers scattering amplitudes from a transfer matrix:
/// t = 1/alpha, r = beta*/alpha.
///
/// Flux conservation of the result follows from the determinant condition,
/// so this never fails for a constructed matrix.
pub fn amplitudes_from_transfer(m: &TransferMatrix) -> ScatteringAmplitudes {
    ScatteringAmplitudes {
        r: m.beta.conj() / m.alpha,
        t: 1.0 / m.alpha,
    }
}

/// Matrix product m1 * m2: the combined system with m1's scatterer on the
/// left and m2's on the right (each in its own edge-anchored frame).
pub fn compose(m1: &TransferMatrix, m2: &TransferMatrix) -> TransferMatrix {
    TransferMatrix::new_unchecked(
        m1.alpha * m2.alpha + m1.beta * m2.beta.conj(),
        m1.alpha * m2.beta + m1.beta * m2.alpha.conj(),
    )
}

impl std::ops::Mul for TransferMatrix {
    type Output = TransferMatrix;

    fn mul(self, rhs: TransferMatrix) -> TransferMatrix {
        compose(&self, &rhs)
    }
}

/// Composes two scatterers directly at the amplitude level:
/// r12 = (r1 + r2 e^{2i phi1}) / (1 + r1* r2 e^{2i phi1}),
/// t12 = t1 t2 / (1 + r1* r2 e^{2i phi1}),  phi1 = arg t1.
///
/// Agrees with the matrix-product route to rounding accuracy. Errors with
/// [`Error::PerfectlyReflecting`] when the shared denominator vanishes: the
/// composite then reflects everything and has no amplitude description.
pub fn composed_amplitudes(
    a1: &ScatteringAmplitudes,
    a2: &ScatteringAmplitudes,
) -> Result<ScatteringAmplitudes> {
    let phase = (2.0 * Complex64::i() * a1.t.arg()).exp();
    let den = 1.0 + a1.r.conj() * a2.r * phase;
    if den.norm() < 1e-12 {
        return Err(Error::PerfectlyReflecting);
    }
    Ok(ScatteringAmplitudes {
        r: (a1.r + a2.r * phase) / den,
        t: a1.t * a2.t / den,
    })
}

/// Changes basis to the real (wavefunction, derivative) representation for
/// asymptotic wavenumber k:
/// a = Re a + Re b, b = (Im a - Im b)/k, c = -k (Im a + Im b), d = Re a - Re b
/// (with a, b the complex entries alpha, beta).
pub fn to_real_representation(m: &TransferMatrix, k: f64) -> Result<RealTransferMatrix> {
    if k.is_nan() || k <= 0.0 {
        return Err(Error::NonPositiveWavenumber { value: k });
    }
    Ok(RealTransferMatrix {
        a: m.alpha.re + m.beta.re,
        b: (m.alpha.im - m.beta.im) / k,
        c: -k * (m.alpha.im + m.beta.im),
        d: m.alpha.re - m.beta.re,
    })
}

/// Inverse change of basis; validates that the input has unit determinant.
pub fn from_real_representation(real: &RealTransferMatrix, k: f64) -> Result<TransferMatrix> {
    if k.is_nan() || k <= 0.0 {
        return Err(Error::NonPositiveWavenumber { value: k });
    }
    let residual = (real.det() - 1.0).abs();
    if !residual.is_finite() || residual > INVARIANT_TOLERANCE {
        return Err(Error::DetViolation {
            residual,
            tolerance: INVARIANT_TOLERANCE,
        });
    }
    let alpha = Complex64::new(
        0.5 * (real.a + real.d),
        0.5 * (k * real.b - real.c / k),
    );
    let beta = Complex64::new(
        0.5 * (real.a - real.d),
        -0.5 * (k * real.b + real.c / k),
    );
    Ok(TransferMatrix::new_unchecked(alpha, beta))
}

/// M^n via the Chebyshev recurrence on x = half-trace:
/// M^n = u_{n-1}(x) M - u_{n-2}(x) I with u_m = 2x u_{m-1} - u_{m-2},
/// u_0 = 1, u_1 = 2x. Exact at the parabolic points x = +-1 where an
/// eigendecomposition would degenerate.
pub fn transfer_power(m: &TransferMatrix, n: u32) -> Result<TransferMatrix> {
    if n == 0 {
        return Err(Error::InvalidParameter {
            what: "transfer_power exponent must be >= 1".to_string(),
        });
    }
    let x = m.half_trace();
    // u_prev = u_{j-1}, u_curr = u_j, starting at j = 0.
    let mut u_prev = 0.0f64;
    let mut u_curr = 1.0f64;
    for _ in 1..n {
        let next = 2.0 * x * u_curr - u_prev;
        u_prev = u_curr;
        u_curr = next;
    }
    let one = Complex64::new(1.0, 0.0);
    Ok(TransferMatrix::new_unchecked(
        m.alpha * u_curr - one * u_prev,
        m.beta * u_curr,
    ))
}

//! The unit-disk representation of transfer matrices: Moebius action,
//! trace classification, fixed points, canonical forms and conjugation,
//! orbits, hyperbolic distance, and translation length.
//!
//! A matrix acts on amplitude ratios z in the closed unit disk by
//! z -> (beta* + alpha* z)/(alpha + beta z). The action is elliptic,
//! hyperbolic, or parabolic according to (Tr M)^2 <, >, = 4, with interior,
//! boundary-pair, or double-boundary fixed points respectively. Since M and
//! -M act identically, every operation here first normalizes the trace sign.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::transfer::{compose, TransferMatrix};

/// Relative tolerance of the trace classification: a matrix counts as
/// parabolic when |Tr^2 - 4| < CLASSIFICATION_TOLERANCE * max(1, Tr^2).
pub const CLASSIFICATION_TOLERANCE: f64 = 1e-9;

/// Points with |z| at least this close to 1 count as boundary points.
pub const BOUNDARY_TOLERANCE: f64 = 1e-9;

const INTERIOR_LIMIT: f64 = 1.0 - 1e-12;

/// A point of the closed unit disk. Interior points are amplitude ratios of
/// propagating superpositions; boundary points model perfect mirrors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiskPoint(Complex64);

impl DiskPoint {
    /// The disk center.
    pub fn origin() -> Self {
        Self(Complex64::new(0.0, 0.0))
    }

    /// Validates |z| <= 1 (within [`BOUNDARY_TOLERANCE`]); overshoots inside
    /// the tolerance are projected onto the circle so the stored value always
    /// satisfies |z| <= 1 exactly.
    pub fn new(z: Complex64) -> Result<Self> {
        let n = z.norm();
        if !n.is_finite() || n > 1.0 + BOUNDARY_TOLERANCE {
            return Err(Error::InvalidParameter {
                what: format!("point {z} lies outside the closed unit disk"),
            });
        }
        Ok(Self::saturate(z))
    }

    /// Wraps a computed value whose overshoot beyond the circle can only be
    /// rounding noise.
    pub(crate) fn saturate(z: Complex64) -> Self {
        let n = z.norm();
        if n > 1.0 {
            Self(z / n)
        } else {
            Self(z)
        }
    }

    /// The complex coordinate.
    pub fn z(&self) -> Complex64 {
        self.0
    }

    /// True when the point lies on the unit circle within [`BOUNDARY_TOLERANCE`].
    pub fn is_boundary(&self) -> bool {
        1.0 - self.0.norm() < BOUNDARY_TOLERANCE
    }
}

impl From<DiskPoint> for Complex64 {
    fn from(p: DiskPoint) -> Self {
        p.0
    }
}

impl TryFrom<Complex64> for DiskPoint {
    type Error = Error;

    fn try_from(z: Complex64) -> Result<Self> {
        Self::new(z)
    }
}

/// The three conjugacy classes of disk actions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ActionKind {
    Elliptic,
    Hyperbolic,
    Parabolic,
}

impl ActionKind {
    /// Lower-case class name, for reports.
    pub fn as_str(&self) -> &'static str {
        match self {
            ActionKind::Elliptic => "elliptic",
            ActionKind::Hyperbolic => "hyperbolic",
            ActionKind::Parabolic => "parabolic",
        }
    }
}

impl std::fmt::Display for ActionKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Fixed points of a disk action.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FixedPoints {
    /// Elliptic: one fixed point inside the disk (its mirror image across
    /// the unit circle is also fixed but lies outside).
    Interior { point: DiskPoint },
    /// Hyperbolic: two boundary fixed points; the flow leaves `repelling`
    /// and converges to `attracting`.
    Boundary {
        repelling: DiskPoint,
        attracting: DiskPoint,
    },
    /// Parabolic: one double fixed point on the boundary.
    Double { point: DiskPoint },
    /// The identity fixes every point; no single representative is meaningful.
    Unspecified,
}

/// Classification result: class, fixed points, and the canonical parameter
/// (rotation angle theta for elliptic, translation length xi for hyperbolic,
/// displacement nu for parabolic).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ActionClassification {
    pub kind: ActionKind,
    pub fixed_points: FixedPoints,
    pub canonical_parameter: f64,
}

/// Classifies a half-trace value by the relative tolerance band around
/// |half-trace| = 1.
pub fn kind_from_half_trace(half_trace: f64) -> ActionKind {
    let tr2 = 4.0 * half_trace * half_trace;
    if (tr2 - 4.0).abs() < CLASSIFICATION_TOLERANCE * tr2.max(1.0) {
        ActionKind::Parabolic
    } else if tr2 > 4.0 {
        ActionKind::Hyperbolic
    } else {
        ActionKind::Elliptic
    }
}

fn mobius_raw(m: &TransferMatrix, z: Complex64) -> Result<Complex64> {
    let den = m.alpha() + m.beta() * z;
    if den.norm() < 1e-150 {
        return Err(Error::DegenerateDenominator);
    }
    Ok((m.beta().conj() + m.alpha().conj() * z) / den)
}

/// The disk action z -> (beta* + alpha* z)/(alpha + beta z).
///
/// For |z| <= 1 the denominator is bounded below by 1/(|alpha| + |beta|), so
/// failure is possible only for matrices with astronomically large entries.
pub fn mobius(m: &TransferMatrix, z: DiskPoint) -> Result<DiskPoint> {
    mobius_raw(m, z.z()).map(DiskPoint::saturate)
}

/// The derivative of the disk action at z, equal to 1/(alpha + beta z)^2.
/// At a fixed point its modulus decides attraction (< 1) or repulsion (> 1),
/// and for elliptic actions its argument is minus the rotation angle.
pub fn mobius_multiplier(m: &TransferMatrix, z: DiskPoint) -> Result<Complex64> {
    let den = m.alpha() + m.beta() * z.z();
    if den.norm() < 1e-150 {
        return Err(Error::DegenerateDenominator);
    }
    Ok(1.0 / (den * den))
}

/// Classifies a matrix into its conjugacy class with fixed points and the
/// canonical parameter. Total: every valid matrix classifies; the identity
/// reports as parabolic with parameter 0 and unspecified fixed points.
pub fn classify(m: &TransferMatrix) -> ActionClassification {
    let mn = m.sign_normalized();
    let alpha = mn.alpha();
    let beta = mn.beta();
    let ht = mn.half_trace();

    match kind_from_half_trace(ht) {
        ActionKind::Parabolic => {
            let nu = -2.0 * alpha.im;
            if beta.norm() < 1e-12 {
                // alpha = +-1 up to rounding: (a multiple of) the identity.
                ActionClassification {
                    kind: ActionKind::Parabolic,
                    fixed_points: FixedPoints::Unspecified,
                    canonical_parameter: nu,
                }
            } else {
                let zf = Complex64::new(0.0, -alpha.im) / beta;
                ActionClassification {
                    kind: ActionKind::Parabolic,
                    fixed_points: FixedPoints::Double {
                        point: DiskPoint::saturate(zf),
                    },
                    canonical_parameter: nu,
                }
            }
        }
        ActionKind::Hyperbolic => {
            // Roots of the fixed-point quadratic: (-2i Im(alpha) +- sqrt(Tr^2-4)) / (2 beta).
            let root = 2.0 * (ht * ht - 1.0).sqrt();
            let base = Complex64::new(0.0, -2.0 * alpha.im);
            let z1 = (base + root) / (2.0 * beta);
            let z2 = (base - root) / (2.0 * beta);
            // The multiplier 1/(alpha + beta z)^2 is < 1 in modulus at the
            // attracting point, i.e. |alpha + beta z| > 1 there.
            let (rep, att) = if (alpha + beta * z1).norm() < (alpha + beta * z2).norm() {
                (z1, z2)
            } else {
                (z2, z1)
            };
            ActionClassification {
                kind: ActionKind::Hyperbolic,
                fixed_points: FixedPoints::Boundary {
                    repelling: DiskPoint::saturate(rep),
                    attracting: DiskPoint::saturate(att),
                },
                canonical_parameter: 2.0 * ht.acosh(),
            }
        }
        ActionKind::Elliptic => {
            let zf = if beta.norm() == 0.0 {
                // Pure phase: fixed points 0 and infinity.
                Complex64::new(0.0, 0.0)
            } else {
                let root = Complex64::new(0.0, 2.0 * (1.0 - ht * ht).sqrt());
                let base = Complex64::new(0.0, -2.0 * alpha.im);
                let z1 = (base + root) / (2.0 * beta);
                let z2 = (base - root) / (2.0 * beta);
                if z1.norm() < z2.norm() {
                    z1
                } else {
                    z2
                }
            };
            // Rotation angle from the multiplier at the interior fixed point.
            let lambda = 1.0 / ((alpha + beta * zf) * (alpha + beta * zf));
            let mut theta = -lambda.arg();
            if theta <= -PI {
                theta += 2.0 * PI;
            }
            ActionClassification {
                kind: ActionKind::Elliptic,
                fixed_points: FixedPoints::Interior {
                    point: DiskPoint::saturate(zf),
                },
                canonical_parameter: theta,
            }
        }
    }
}

/// Pure rotation about the origin: diag(e^{i theta/2}, e^{-i theta/2});
/// acts as z -> z e^{-i theta}.
pub fn canonical_k(theta: f64) -> TransferMatrix {
    TransferMatrix::new_unchecked(
        Complex64::from_polar(1.0, 0.5 * theta),
        Complex64::new(0.0, 0.0),
    )
}

/// Canonical translation along the imaginary-axis geodesic:
/// alpha = cosh(xi/2), beta = i sinh(xi/2); repels from +i, attracts to -i
/// for xi > 0.
pub fn canonical_a(xi: f64) -> TransferMatrix {
    TransferMatrix::new_unchecked(
        Complex64::new((0.5 * xi).cosh(), 0.0),
        Complex64::new(0.0, (0.5 * xi).sinh()),
    )
}

/// Canonical parallel displacement fixing +i:
/// alpha = 1 - i nu/2, beta = nu/2.
pub fn canonical_n(nu: f64) -> TransferMatrix {
    TransferMatrix::new_unchecked(Complex64::new(1.0, -0.5 * nu), Complex64::new(0.5 * nu, 0.0))
}

/// The canonical representative of a class with the given parameter.
pub fn canonical_form(kind: ActionKind, parameter: f64) -> TransferMatrix {
    match kind {
        ActionKind::Elliptic => canonical_k(parameter),
        ActionKind::Hyperbolic => canonical_a(parameter),
        ActionKind::Parabolic => canonical_n(parameter),
    }
}

/// Conjugation C M C^{-1}: the same action expressed after relabeling the
/// disk by C. Preserves the trace and transports fixed points through C.
pub fn conjugate(c: &TransferMatrix, m: &TransferMatrix) -> TransferMatrix {
    compose(&compose(c, m), &c.inverse())
}

/// The matrix translating an interior point p to the origin along the
/// geodesic through both: z -> (z - p)/(1 - p* z) (alpha real positive).
pub fn translate_to_origin(p: DiskPoint) -> Result<TransferMatrix> {
    let z = p.z();
    if z.norm() >= INTERIOR_LIMIT {
        return Err(Error::BoundaryPoint);
    }
    let a = 1.0 / (1.0 - z.norm_sqr()).sqrt();
    Ok(TransferMatrix::new_unchecked(
        Complex64::new(a, 0.0),
        -z.conj() * a,
    ))
}

/// Deterministic conjugator mapping the oriented boundary pair (u, v) to
/// (+i, -i): first translate the Euclidean foot of the geodesic to the
/// origin (turning the geodesic into a diameter), then rotate u's image
/// onto +i. Inputs must be unit-modulus and distinct.
pub(crate) fn axis_conjugator(u: Complex64, v: Complex64) -> TransferMatrix {
    let d = 1.0 + (u * v.conj()).re;
    let c1 = if d < 1e-14 {
        // u and v are antipodal: the geodesic is already a diameter.
        TransferMatrix::identity()
    } else {
        let center = (u + v) / d;
        let rho = (center.norm_sqr() - 1.0).max(0.0).sqrt();
        let foot = center * (1.0 - rho / center.norm());
        translate_to_origin(DiskPoint::saturate(foot))
            .expect("the foot of a geodesic is interior")
    };
    let w = mobius_raw(&c1, u).expect("conjugator denominators are bounded below");
    let phi = w.arg() - FRAC_PI_2;
    compose(&canonical_k(phi), &c1)
}

/// Reduces a matrix to its canonical form: returns (C, classification) with
/// conjugate(C, M.sign_normalized()) equal to canonical_form(kind,
/// parameter) up to rounding. (Conjugation preserves the trace sign, so for
/// inputs with negative trace conjugate(C, M) is minus the canonical form;
/// M and -M act identically on the disk.)
///
/// Gauge: hyperbolic C maps (repelling, attracting) to (+i, -i) through the
/// geodesic-foot construction; elliptic C translates the fixed point to the
/// origin; parabolic C rotates the fixed point to +i. The identity returns
/// C = I with the parabolic nu = 0 classification.
pub fn reduce_to_canonical(m: &TransferMatrix) -> Result<(TransferMatrix, ActionClassification)> {
    let cls = classify(m);
    let c = match &cls.fixed_points {
        FixedPoints::Unspecified => TransferMatrix::identity(),
        FixedPoints::Interior { point } => translate_to_origin(*point)?,
        FixedPoints::Double { point } => canonical_k(point.z().arg() - FRAC_PI_2),
        FixedPoints::Boundary {
            repelling,
            attracting,
        } => {
            let u = repelling.z();
            let v = attracting.z();
            axis_conjugator(u / u.norm(), v / v.norm())
        }
    };
    Ok((c, cls))
}

/// Samples the one-parameter flow of M through z0: the canonical parameter
/// sweeps [0, parameter] in `samples` equal steps, so the first point is z0
/// and the last is M's image of z0.
pub fn orbit(m: &TransferMatrix, z0: DiskPoint, samples: usize) -> Result<Vec<DiskPoint>> {
    if samples < 2 {
        return Err(Error::InvalidParameter {
            what: format!("orbit needs at least 2 samples, got {samples}"),
        });
    }
    let (c, cls) = reduce_to_canonical(m)?;
    let c_inv = c.inverse();
    let w0 = mobius(&c, z0)?;
    let mut points = Vec::with_capacity(samples);
    for j in 0..samples {
        let fraction = cls.canonical_parameter * j as f64 / (samples - 1) as f64;
        let step = canonical_form(cls.kind, fraction);
        points.push(mobius(&c_inv, mobius(&step, w0)?)?);
    }
    Ok(points)
}

/// Hyperbolic distance between interior points,
/// d = ln[(|z1* z2 - 1| + |z1 - z2|)/(|z1* z2 - 1| - |z1 - z2|)].
/// Boundary points are infinitely far from everything and are rejected.
pub fn hyperbolic_distance(z1: DiskPoint, z2: DiskPoint) -> Result<f64> {
    let (a, b) = (z1.z(), z2.z());
    if a.norm() >= INTERIOR_LIMIT || b.norm() >= INTERIOR_LIMIT {
        return Err(Error::BoundaryPoint);
    }
    let big = (a.conj() * b - 1.0).norm();
    let small = (a - b).norm();
    Ok(2.0 * (small / big).atanh())
}

/// Translation length of a hyperbolic matrix,
/// zeta = 2 ln[(|Tr| + sqrt(Tr^2 - 4))/2]: the distance by which points on
/// the axis advance. Rejects elliptic and parabolic input.
pub fn translation_length(m: &TransferMatrix) -> Result<f64> {
    let ht = m.sign_normalized().half_trace();
    match kind_from_half_trace(ht) {
        ActionKind::Hyperbolic => Ok(2.0 * ht.acosh()),
        other => Err(Error::NotHyperbolic {
            found: other.as_str(),
        }),
    }
}

/// Shape of a geodesic in the Euclidean picture: a diameter, or a circular
/// arc orthogonal to the unit circle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GeodesicShape {
    /// Straight line through the origin; `direction` is a unit vector along it.
    Diameter { direction: Complex64 },
    /// Arc of the circle |z - center| = radius, with |center|^2 = 1 + radius^2.
    Arc { center: Complex64, radius: f64 },
}

/// An oriented geodesic, stored by its two distinct boundary endpoints.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Geodesic {
    start: DiskPoint,
    end: DiskPoint,
}

impl Geodesic {
    /// Builds from boundary endpoints, which are projected exactly onto the
    /// unit circle; they must be distinct and within [`BOUNDARY_TOLERANCE`]
    /// of it.
    pub fn new(start: DiskPoint, end: DiskPoint) -> Result<Self> {
        if !start.is_boundary() || !end.is_boundary() {
            return Err(Error::InvalidParameter {
                what: "geodesic endpoints must lie on the unit circle".to_string(),
            });
        }
        let u = start.z() / start.z().norm();
        let v = end.z() / end.z().norm();
        if (u - v).norm() < 1e-9 {
            return Err(Error::InvalidParameter {
                what: "geodesic endpoints must be distinct".to_string(),
            });
        }
        Ok(Self {
            start: DiskPoint::saturate(u),
            end: DiskPoint::saturate(v),
        })
    }

    /// The geodesic through two distinct interior points, oriented from z1
    /// towards z2 and extended to the boundary.
    pub fn through(z1: DiskPoint, z2: DiskPoint) -> Result<Self> {
        let t = translate_to_origin(z1)?;
        let w = mobius_raw(&t, z2.z())?;
        if w.norm() < 1e-12 {
            return Err(Error::InvalidParameter {
                what: "cannot extend a geodesic through two coincident points".to_string(),
            });
        }
        let e = w / w.norm();
        let t_inv = t.inverse();
        let start = mobius_raw(&t_inv, -e)?;
        let end = mobius_raw(&t_inv, e)?;
        Geodesic::new(DiskPoint::saturate(start), DiskPoint::saturate(end))
    }

    pub fn start(&self) -> DiskPoint {
        self.start
    }

    pub fn end(&self) -> DiskPoint {
        self.end
    }

    /// Euclidean shape: diameter when the endpoints are antipodal, otherwise
    /// the orthogonal circle through them.
    pub fn shape(&self) -> GeodesicShape {
        let u = self.start.z();
        let v = self.end.z();
        let d = 1.0 + (u * v.conj()).re;
        if d < 1e-14 {
            GeodesicShape::Diameter { direction: u }
        } else {
            let center = (u + v) / d;
            GeodesicShape::Arc {
                center,
                radius: (center.norm_sqr() - 1.0).max(0.0).sqrt(),
            }
        }
    }

    /// The deterministic conjugator taking (start, end) to (+i, -i); shared
    /// gauge for every axis-anchored construction.
    pub fn canonical_conjugator(&self) -> TransferMatrix {
        axis_conjugator(self.start.z(), self.end.z())
    }

    /// The point of the geodesic at signed arc-length parameter s, measured
    /// from the image of the disk center under the canonical conjugator and
    /// increasing towards `end`.
    pub fn point_at(&self, s: f64) -> DiskPoint {
        let c_inv = self.canonical_conjugator().inverse();
        let w = Complex64::new(0.0, -(0.5 * s).tanh());
        DiskPoint::saturate(
            mobius_raw(&c_inv, w).expect("conjugator denominators are bounded below"),
        )
    }

    /// The geodesic orthogonal to this one crossing it at parameter s.
    pub fn perpendicular_at(&self, s: f64) -> Geodesic {
        let c_inv = self.canonical_conjugator().inverse();
        let shift = canonical_a(s);
        let one = Complex64::new(1.0, 0.0);
        let endpoint = |sign: f64| {
            let w = mobius_raw(&shift, sign * one)
                .expect("canonical translations cannot degenerate");
            DiskPoint::saturate(
                mobius_raw(&c_inv, w).expect("conjugator denominators are bounded below"),
            )
        };
        Geodesic::new(endpoint(1.0), endpoint(-1.0))
            .expect("images of distinct boundary points stay distinct")
    }
}

/// Hyperbolic distance from an interior point to a geodesic (the infimum
/// over the geodesic's points), computed by conjugating the geodesic to the
/// imaginary-axis diameter and using the closed form there.
pub fn distance_to_geodesic(z: DiskPoint, g: &Geodesic) -> Result<f64> {
    if z.z().norm() >= INTERIOR_LIMIT {
        return Err(Error::BoundaryPoint);
    }
    let w = mobius_raw(&g.canonical_conjugator(), z.z())?;
    let num = 2.0 * w.re.abs();
    let den = (w * w + 1.0).norm();
    Ok((num / den).atanh())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transfer::{amplitudes_from_transfer, transfer_from_amplitudes};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn p(re: f64, im: f64) -> DiskPoint {
        DiskPoint::new(c(re, im)).unwrap()
    }

    fn assert_close(a: Complex64, b: Complex64, tol: f64) {
        assert!(
            (a - b).norm() <= tol,
            "expected {b}, got {a} (deviation {:.3e})",
            (a - b).norm()
        );
    }

    fn tunneling_matrix() -> TransferMatrix {
        // Barrier with E = 0.5, V0 = 1, L = 2 in default units.
        TransferMatrix::new(c(2.178183556608571, 0.0), c(0.0, 1.9350668221743568)).unwrap()
    }

    fn oscillatory_matrix() -> TransferMatrix {
        // Barrier with E = 1.5, V0 = 1, L = 2.
        TransferMatrix::new(
            c(0.15594369476537434, -1.1405738696305026),
            c(0.0, 0.5702869348152511),
        )
        .unwrap()
    }

    fn matched_matrix() -> TransferMatrix {
        // Barrier at E = V0 with kL = 2.
        TransferMatrix::new(c(1.0, -1.0), c(0.0, 1.0)).unwrap()
    }

    fn well_matrix() -> TransferMatrix {
        // Well with V0 = -1 at E = 2, L = 1; negative trace on purpose.
        TransferMatrix::new(
            c(-0.1605565385746905, -1.007379851148985),
            c(0.0, -0.20147597022979682),
        )
        .unwrap()
    }

    #[test]
    fn mobius_of_origin_is_the_reflection_amplitude() {
        let m = tunneling_matrix();
        let r = amplitudes_from_transfer(&m).r();
        let image = mobius(&m, DiskPoint::origin()).unwrap();
        assert_close(image.z(), r, 1e-15);
    }

    #[test]
    fn mobius_identity_and_rotation() {
        let z = p(0.3, -0.4);
        assert_close(
            mobius(&TransferMatrix::identity(), z).unwrap().z(),
            z.z(),
            0.0,
        );
        let theta = 0.77;
        let k = canonical_k(theta);
        assert_close(
            mobius(&k, z).unwrap().z(),
            z.z() * Complex64::from_polar(1.0, -theta),
            1e-15,
        );
    }

    #[test]
    fn mobius_preserves_interior_and_boundary() {
        let m = oscillatory_matrix();
        let interior = mobius(&m, p(0.72, -0.51)).unwrap();
        assert!(interior.z().norm() < 1.0);
        let boundary = mobius(&m, p(0.6, 0.8)).unwrap();
        assert!((boundary.z().norm() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn half_trace_bands() {
        assert_eq!(kind_from_half_trace(0.3), ActionKind::Elliptic);
        assert_eq!(kind_from_half_trace(-0.999), ActionKind::Elliptic);
        assert_eq!(kind_from_half_trace(1.0), ActionKind::Parabolic);
        assert_eq!(kind_from_half_trace(1.0 + 1e-13), ActionKind::Parabolic);
        assert_eq!(kind_from_half_trace(1.0 + 1e-3), ActionKind::Hyperbolic);
        assert_eq!(kind_from_half_trace(-2.5), ActionKind::Hyperbolic);
    }

    #[test]
    fn classify_tunneling_barrier() {
        let cls = classify(&tunneling_matrix());
        assert_eq!(cls.kind, ActionKind::Hyperbolic);
        // Translation length 2 kappa L = 2 sqrt(2) for this barrier.
        assert!((cls.canonical_parameter - 2.0 * 2.0f64.sqrt()).abs() < 1e-12);
        match cls.fixed_points {
            FixedPoints::Boundary {
                repelling,
                attracting,
            } => {
                assert_close(repelling.z(), c(0.0, 1.0), 1e-12);
                assert_close(attracting.z(), c(0.0, -1.0), 1e-12);
            }
            other => panic!("expected boundary fixed points, got {other:?}"),
        }
    }

    #[test]
    fn classify_oscillatory_barrier() {
        let m = oscillatory_matrix();
        let cls = classify(&m);
        assert_eq!(cls.kind, ActionKind::Elliptic);
        assert!((cls.canonical_parameter + 2.8284271247461903).abs() < 1e-12);
        match cls.fixed_points {
            FixedPoints::Interior { point } => {
                assert_close(point.z(), c(0.26794919243112314, 0.0), 1e-9);
                let image = mobius(&m, point).unwrap();
                assert!((image.z() - point.z()).norm() < 1e-9);
            }
            other => panic!("expected an interior fixed point, got {other:?}"),
        }
    }

    #[test]
    fn classify_well_with_negative_trace() {
        let cls = classify(&well_matrix());
        assert_eq!(cls.kind, ActionKind::Elliptic);
        assert!((cls.canonical_parameter - 2.8190836920418323).abs() < 1e-12);
        match cls.fixed_points {
            FixedPoints::Interior { point } => {
                assert_close(point.z(), c(-0.10102051443364263, 0.0), 1e-9);
            }
            other => panic!("expected an interior fixed point, got {other:?}"),
        }
    }

    #[test]
    fn classify_matched_barrier_as_parabolic() {
        let cls = classify(&matched_matrix());
        assert_eq!(cls.kind, ActionKind::Parabolic);
        assert!((cls.canonical_parameter - 2.0).abs() < 1e-14);
        match cls.fixed_points {
            FixedPoints::Double { point } => assert_close(point.z(), c(1.0, 0.0), 1e-12),
            other => panic!("expected a double fixed point, got {other:?}"),
        }
    }

    #[test]
    fn classify_identity_and_its_negative() {
        for m in [
            TransferMatrix::identity(),
            TransferMatrix::new(c(-1.0, 0.0), c(0.0, 0.0)).unwrap(),
        ] {
            let cls = classify(&m);
            assert_eq!(cls.kind, ActionKind::Parabolic);
            assert_eq!(cls.fixed_points, FixedPoints::Unspecified);
            assert_eq!(cls.canonical_parameter, 0.0);
        }
    }

    #[test]
    fn canonical_families_are_one_parameter_groups() {
        let ka = compose(&canonical_k(0.4), &canonical_k(1.1));
        assert_close(ka.alpha(), canonical_k(1.5).alpha(), 1e-15);
        let aa = compose(&canonical_a(0.7), &canonical_a(0.9));
        assert_close(aa.alpha(), canonical_a(1.6).alpha(), 1e-14);
        assert_close(aa.beta(), canonical_a(1.6).beta(), 1e-14);
        let nn = compose(&canonical_n(0.3), &canonical_n(-1.2));
        assert_close(nn.alpha(), canonical_n(-0.9).alpha(), 1e-15);
        assert_close(nn.beta(), canonical_n(-0.9).beta(), 1e-15);
        assert_eq!(canonical_k(0.0), TransferMatrix::identity());
    }

    #[test]
    fn canonical_forms_classify_back_to_their_parameters() {
        let cls = classify(&canonical_k(1.234));
        assert_eq!(cls.kind, ActionKind::Elliptic);
        assert!((cls.canonical_parameter - 1.234).abs() < 1e-12);
        match cls.fixed_points {
            FixedPoints::Interior { point } => assert_eq!(point.z(), c(0.0, 0.0)),
            other => panic!("unexpected {other:?}"),
        }

        let cls = classify(&canonical_k(-0.8));
        assert!((cls.canonical_parameter + 0.8).abs() < 1e-12);

        let cls = classify(&canonical_a(1.7));
        assert_eq!(cls.kind, ActionKind::Hyperbolic);
        assert!((cls.canonical_parameter - 1.7).abs() < 1e-12);
        match cls.fixed_points {
            FixedPoints::Boundary {
                repelling,
                attracting,
            } => {
                assert_close(repelling.z(), c(0.0, 1.0), 1e-12);
                assert_close(attracting.z(), c(0.0, -1.0), 1e-12);
            }
            other => panic!("unexpected {other:?}"),
        }

        let cls = classify(&canonical_n(0.6));
        assert_eq!(cls.kind, ActionKind::Parabolic);
        assert!((cls.canonical_parameter - 0.6).abs() < 1e-14);
        match cls.fixed_points {
            FixedPoints::Double { point } => assert_close(point.z(), c(0.0, 1.0), 1e-12),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn conjugation_preserves_trace_and_transports_fixed_points() {
        let m = tunneling_matrix();
        let cmat = transfer_from_amplitudes(
            &crate::transfer::ScatteringAmplitudes::new(c(0.36, 0.48), c(0.6, -0.529150262212918))
                .unwrap(),
        );
        let conj = conjugate(&cmat, &m);
        assert!((conj.trace() - m.trace()).abs() < 1e-12);
        assert_eq!(conjugate(&TransferMatrix::identity(), &m), m);

        let before = classify(&m);
        let after = classify(&conj);
        if let (
            FixedPoints::Boundary {
                repelling: r0,
                attracting: a0,
            },
            FixedPoints::Boundary {
                repelling: r1,
                attracting: a1,
            },
        ) = (before.fixed_points, after.fixed_points)
        {
            assert_close(mobius(&cmat, r0).unwrap().z(), r1.z(), 1e-9);
            assert_close(mobius(&cmat, a0).unwrap().z(), a1.z(), 1e-9);
        } else {
            panic!("hyperbolic matrices expected on both sides");
        }
    }

    #[test]
    fn reduce_canonical_translation_to_itself() {
        let m = canonical_a(2.0 * 2.0f64.sqrt());
        let (cmat, cls) = reduce_to_canonical(&m).unwrap();
        assert_eq!(cmat, TransferMatrix::identity());
        assert_eq!(cls.kind, ActionKind::Hyperbolic);
        // The tunneling barrier happens to be exactly this canonical form.
        let m2 = tunneling_matrix();
        let (c2, cls2) = reduce_to_canonical(&m2).unwrap();
        let reduced = conjugate(&c2, &m2);
        let target = canonical_a(cls2.canonical_parameter);
        assert_close(reduced.alpha(), target.alpha(), 1e-12);
        assert_close(reduced.beta(), target.beta(), 1e-12);
    }

    #[test]
    fn reduce_elliptic_and_parabolic_matrices() {
        let m = oscillatory_matrix();
        let (cmat, cls) = reduce_to_canonical(&m).unwrap();
        let reduced = conjugate(&cmat, &m);
        let target = canonical_form(cls.kind, cls.canonical_parameter);
        assert_close(reduced.alpha(), target.alpha(), 1e-12);
        assert_close(reduced.beta(), target.beta(), 1e-12);
        // The elliptic gauge keeps alpha real positive.
        assert!(cmat.alpha().im.abs() < 1e-15 && cmat.alpha().re > 0.0);

        let m = matched_matrix();
        let (cmat, cls) = reduce_to_canonical(&m).unwrap();
        let reduced = conjugate(&cmat, &m);
        let target = canonical_n(cls.canonical_parameter);
        assert_close(reduced.alpha(), target.alpha(), 1e-12);
        assert_close(reduced.beta(), target.beta(), 1e-12);
    }

    #[test]
    fn reduction_round_trips_through_the_conjugator() {
        for m in [tunneling_matrix(), oscillatory_matrix(), matched_matrix()] {
            let (cmat, cls) = reduce_to_canonical(&m).unwrap();
            let back = conjugate(
                &cmat.inverse(),
                &canonical_form(cls.kind, cls.canonical_parameter),
            );
            let mn = m.sign_normalized();
            assert_close(back.alpha(), mn.alpha(), 1e-9);
            assert_close(back.beta(), mn.beta(), 1e-9);
        }
    }

    #[test]
    fn orbit_of_rotation_keeps_constant_modulus() {
        let m = canonical_k(1.0);
        let z0 = p(0.3, 0.2);
        let pts = orbit(&m, z0, 33).unwrap();
        assert_eq!(pts.len(), 33);
        for q in &pts {
            assert!((q.z().norm() - z0.z().norm()).abs() < 1e-12);
        }
        assert_close(pts[0].z(), z0.z(), 1e-15);
        assert_close(
            pts.last().unwrap().z(),
            mobius(&m, z0).unwrap().z(),
            1e-12,
        );
    }

    #[test]
    fn orbit_of_canonical_translation_through_origin_stays_imaginary() {
        let m = canonical_a(2.0);
        let pts = orbit(&m, DiskPoint::origin(), 17).unwrap();
        for q in &pts {
            assert!(q.z().re.abs() < 1e-12);
        }
        assert_close(
            pts.last().unwrap().z(),
            mobius(&m, DiskPoint::origin()).unwrap().z(),
            1e-12,
        );
    }

    #[test]
    fn orbit_with_two_samples_is_the_endpoint_pair() {
        let m = oscillatory_matrix();
        let z0 = p(0.1, -0.6);
        let pts = orbit(&m, z0, 2).unwrap();
        assert_close(pts[0].z(), z0.z(), 1e-12);
        assert_close(pts[1].z(), mobius(&m, z0).unwrap().z(), 1e-12);
        assert!(orbit(&m, z0, 1).is_err());
    }

    #[test]
    fn distance_along_a_radius_matches_the_closed_form() {
        for x in [0.1, 0.5, 0.9] {
            let d = hyperbolic_distance(DiskPoint::origin(), p(x, 0.0)).unwrap();
            assert!((d - ((1.0 + x) / (1.0 - x)).ln()).abs() < 1e-12);
        }
        assert_eq!(
            hyperbolic_distance(DiskPoint::origin(), DiskPoint::origin()).unwrap(),
            0.0
        );
        assert!(matches!(
            hyperbolic_distance(DiskPoint::origin(), p(1.0, 0.0)),
            Err(Error::BoundaryPoint)
        ));
    }

    #[test]
    fn distance_is_symmetric_and_invariant() {
        let (z1, z2) = (p(0.3, -0.1), p(-0.4, 0.55));
        let d12 = hyperbolic_distance(z1, z2).unwrap();
        assert_eq!(d12, hyperbolic_distance(z2, z1).unwrap());
        let m = well_matrix();
        let d_moved = hyperbolic_distance(mobius(&m, z1).unwrap(), mobius(&m, z2).unwrap()).unwrap();
        assert!((d12 - d_moved).abs() < 1e-12);
    }

    #[test]
    fn translation_length_of_canonical_translation() {
        assert!((translation_length(&canonical_a(1.3)).unwrap() - 1.3).abs() < 1e-12);
        let m = tunneling_matrix();
        let zeta = translation_length(&m).unwrap();
        assert!((zeta - 2.0 * 2.0f64.sqrt()).abs() < 1e-12);
        let conj = conjugate(&translate_to_origin(p(0.2, 0.3)).unwrap(), &m);
        assert!((translation_length(&conj).unwrap() - zeta).abs() < 1e-12);
        assert!(matches!(
            translation_length(&canonical_k(0.5)),
            Err(Error::NotHyperbolic { found: "elliptic" })
        ));
        assert!(matches!(
            translation_length(&canonical_n(0.5)),
            Err(Error::NotHyperbolic { found: "parabolic" })
        ));
    }

    #[test]
    fn points_on_the_axis_advance_by_the_translation_length() {
        let m = tunneling_matrix();
        let zeta = translation_length(&m).unwrap();
        // The axis of this matrix is the imaginary diameter; take a point on it.
        let z = p(0.0, -0.35);
        let image = mobius(&m, z).unwrap();
        let d = hyperbolic_distance(z, image).unwrap();
        assert!((d - zeta).abs() < 1e-10);
    }

    #[test]
    fn geodesic_through_origin_is_a_diameter() {
        let g = Geodesic::through(DiskPoint::origin(), p(0.0, 0.5)).unwrap();
        assert_close(g.start().z(), c(0.0, -1.0), 1e-12);
        assert_close(g.end().z(), c(0.0, 1.0), 1e-12);
        match g.shape() {
            GeodesicShape::Diameter { direction } => {
                assert!((direction.norm() - 1.0).abs() < 1e-12)
            }
            other => panic!("expected a diameter, got {other:?}"),
        }
    }

    #[test]
    fn geodesic_through_generic_points_is_an_orthogonal_arc() {
        let (z1, z2) = (p(0.3, 0.0), p(0.0, 0.5));
        let g = Geodesic::through(z1, z2).unwrap();
        assert!((g.start().z().norm() - 1.0).abs() < 1e-12);
        assert!((g.end().z().norm() - 1.0).abs() < 1e-12);
        match g.shape() {
            GeodesicShape::Arc { center, radius } => {
                // Orthogonality to the unit circle.
                assert!((center.norm_sqr() - 1.0 - radius * radius).abs() < 1e-12);
                // Both defining points lie on the circle.
                assert!(((z1.z() - center).norm() - radius).abs() < 1e-12);
                assert!(((z2.z() - center).norm() - radius).abs() < 1e-12);
            }
            other => panic!("expected an arc, got {other:?}"),
        }
    }

    #[test]
    fn geodesic_validation() {
        assert!(Geodesic::new(p(0.5, 0.0), p(0.0, 1.0)).is_err());
        assert!(Geodesic::new(p(0.0, 1.0), p(0.0, 1.0)).is_err());
        assert!(Geodesic::through(p(0.2, 0.1), p(0.2, 0.1)).is_err());
        assert!(DiskPoint::new(c(1.1, 0.0)).is_err());
    }

    #[test]
    fn geodesic_parameterization_and_distance() {
        let g = Geodesic::new(p(0.0, 1.0), p(0.0, -1.0)).unwrap();
        // Points of the geodesic are at distance zero.
        let on = g.point_at(0.7);
        assert!(distance_to_geodesic(on, &g).unwrap() < 1e-12);
        // Distance from a real point to the imaginary diameter equals its
        // distance to the origin (the closest point by symmetry).
        let x = p(0.4, 0.0);
        let d = distance_to_geodesic(x, &g).unwrap();
        assert!((d - hyperbolic_distance(DiskPoint::origin(), x).unwrap()).abs() < 1e-12);
        // Arc-length parameterization: points at parameters s1, s2 are
        // separated by |s1 - s2|.
        let (a, b) = (g.point_at(-0.3), g.point_at(0.9));
        assert!((hyperbolic_distance(a, b).unwrap() - 1.2).abs() < 1e-10);
    }

    #[test]
    fn perpendiculars_cross_the_axis_orthogonally() {
        let g = Geodesic::new(p(0.0, 1.0), p(0.0, -1.0)).unwrap();
        let perp = g.perpendicular_at(0.5);
        // The crossing point lies on both geodesics.
        let crossing = g.point_at(0.5);
        assert!(distance_to_geodesic(crossing, &perp).unwrap() < 1e-10);
        assert!(distance_to_geodesic(crossing, &g).unwrap() < 1e-10);
    }

    #[test]
    fn boundary_flag_and_saturation() {
        assert!(p(0.6, 0.8).is_boundary());
        assert!(!p(0.3, 0.0).is_boundary());
        let q = DiskPoint::new(c(1.0 + 5e-10, 0.0)).unwrap();
        assert!(q.z().norm() <= 1.0);
    }
}

//! Hyperbolic turns: directed geodesic segments of half the translation
//! length, the half-parameter (square-root) matrix, reflections in
//! geodesics, and the turn composition law.
//!
//! A hyperbolic action is captured by a "turn": its axis together with a
//! sliding segment of length half the translation length. Two turns compose
//! head-to-tail like vector arrows, which turns products of transfer
//! matrices into hyperbolic triangle constructions.

use crate::error::{Error, Result};
use crate::geometry::{
    canonical_a, classify, conjugate, ActionClassification, ActionKind, DiskPoint, Geodesic,
    GeodesicShape,
};
use crate::transfer::{compose, TransferMatrix};

/// A hyperbolic action as a directed segment: `axis` carries the invariant
/// geodesic oriented from the repelling towards the attracting fixed point,
/// and `half_length` is half the translation length, which is the length of
/// the segment in the head-to-tail composition picture.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HyperbolicTurn {
    axis: Geodesic,
    half_length: f64,
}

impl HyperbolicTurn {
    /// Validates half_length > 0 and finite.
    pub fn new(axis: Geodesic, half_length: f64) -> Result<Self> {
        if !half_length.is_finite() || half_length <= 0.0 {
            return Err(Error::InvalidParameter {
                what: format!("turn half-length must be positive, got {half_length}"),
            });
        }
        Ok(Self { axis, half_length })
    }

    pub fn axis(&self) -> Geodesic {
        self.axis
    }

    pub fn half_length(&self) -> f64 {
        self.half_length
    }
}

/// The half-parameter matrix: the unique square root of the sign-normalized
/// input whose trace is non-negative,
/// sqrt(M) = (M + I) / sqrt(2 + Tr M). Squaring it recovers M up to overall
/// sign; for hyperbolic M it translates half as far along the same axis.
pub fn sqrt_transfer(m: &TransferMatrix) -> TransferMatrix {
    let mn = m.sign_normalized();
    let scale = 1.0 / (2.0 * (mn.alpha().re + 1.0)).sqrt();
    TransferMatrix::new_unchecked((mn.alpha() + 1.0) * scale, mn.beta() * scale)
}

/// Extracts the turn of a hyperbolic matrix: axis oriented repelling to
/// attracting, segment length half the translation length. Elliptic and
/// parabolic input is rejected.
pub fn turn_from_transfer(m: &TransferMatrix) -> Result<HyperbolicTurn> {
    let cls = classify(m);
    match cls.fixed_points {
        crate::geometry::FixedPoints::Boundary {
            repelling,
            attracting,
        } => HyperbolicTurn::new(
            Geodesic::new(repelling, attracting)?,
            0.5 * cls.canonical_parameter,
        ),
        _ => Err(Error::NotHyperbolic {
            found: cls.kind.as_str(),
        }),
    }
}

/// Rebuilds the (sign-normalized) transfer matrix of a turn by conjugating
/// the canonical translation of length 2 * half_length onto the axis.
pub fn transfer_from_turn(turn: &HyperbolicTurn) -> TransferMatrix {
    let c = turn.axis.canonical_conjugator();
    conjugate(&c.inverse(), &canonical_a(2.0 * turn.half_length))
}

/// Reflects a point across a geodesic (inversion in the orthogonal circle,
/// or mirror symmetry across a diameter). An involution that fixes exactly
/// the geodesic's points.
pub fn reflect_in_geodesic(g: &Geodesic, z: DiskPoint) -> DiskPoint {
    match g.shape() {
        GeodesicShape::Diameter { direction } => {
            DiskPoint::saturate(direction * direction * z.z().conj())
        }
        GeodesicShape::Arc { center, radius } => {
            // |center| > 1 >= |z| keeps the denominator away from zero.
            DiskPoint::saturate(center + radius * radius / (z.z().conj() - center.conj()))
        }
    }
}

/// Outcome of composing two turns: another turn when the product is
/// hyperbolic, otherwise the full classification of the product (elliptic
/// or parabolic products are legitimate results, not errors).
#[derive(Debug, Clone, PartialEq)]
pub enum TurnComposition {
    Turn(HyperbolicTurn),
    NonHyperbolic(ActionClassification),
}

/// Composes the actions "first, then second" (the matrix product
/// M_second * M_first) and expresses the outcome as a turn when possible.
///
/// Geometrically this is head-to-tail addition: slide `first`'s segment to
/// end at an axis crossing point q and `second`'s to start there; the
/// resultant segment runs from `first`'s tail to `second`'s head.
pub fn compose_turns(first: &HyperbolicTurn, second: &HyperbolicTurn) -> Result<TurnComposition> {
    let product = compose(&transfer_from_turn(second), &transfer_from_turn(first));
    let cls = classify(&product);
    match cls.kind {
        ActionKind::Hyperbolic => Ok(TurnComposition::Turn(turn_from_transfer(&product)?)),
        _ => Ok(TurnComposition::NonHyperbolic(cls)),
    }
}

/// The hyperbolic law of cosines for head-to-tail segments: given segment
/// lengths s1, s2 meeting at a point and the turning angle between their
/// directions (0 = collinear, same direction), returns the resultant
/// segment length, acosh(cosh s1 cosh s2 + sinh s1 sinh s2 cos angle).
pub fn hyperbolic_law_of_cosines(s1: f64, s2: f64, angle: f64) -> Result<f64> {
    if !(s1.is_finite() && s2.is_finite() && angle.is_finite()) || s1 < 0.0 || s2 < 0.0 {
        return Err(Error::InvalidParameter {
            what: "law of cosines needs finite non-negative sides and a finite angle".to_string(),
        });
    }
    let arg = s1.cosh() * s2.cosh() + s1.sinh() * s2.sinh() * angle.cos();
    // Rounding can push the collinear-opposite case a hair below 1.
    Ok(arg.max(1.0).acosh())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{canonical_k, canonical_n, mobius, FixedPoints};
    use num_complex::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn pt(re: f64, im: f64) -> DiskPoint {
        DiskPoint::new(c(re, im)).unwrap()
    }

    fn assert_close(a: Complex64, b: Complex64, tol: f64) {
        assert!(
            (a - b).norm() <= tol,
            "expected {b}, got {a} (deviation {:.3e})",
            (a - b).norm()
        );
    }

    fn assert_matrix_close(a: &TransferMatrix, b: &TransferMatrix, tol: f64) {
        assert_close(a.alpha(), b.alpha(), tol);
        assert_close(a.beta(), b.beta(), tol);
    }

    fn tunneling_matrix() -> TransferMatrix {
        TransferMatrix::new(c(2.178183556608571, 0.0), c(0.0, 1.9350668221743568)).unwrap()
    }

    fn oscillatory_matrix() -> TransferMatrix {
        TransferMatrix::new(
            c(0.15594369476537434, -1.1405738696305026),
            c(0.0, 0.5702869348152511),
        )
        .unwrap()
    }

    fn matched_matrix() -> TransferMatrix {
        TransferMatrix::new(c(1.0, -1.0), c(0.0, 1.0)).unwrap()
    }

    fn diameter(angle: f64) -> Geodesic {
        let e = Complex64::from_polar(1.0, angle);
        Geodesic::new(
            DiskPoint::new(-e).unwrap(),
            DiskPoint::new(e).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn sqrt_halves_canonical_parameters() {
        assert_matrix_close(&sqrt_transfer(&canonical_a(1.8)), &canonical_a(0.9), 1e-14);
        assert_matrix_close(&sqrt_transfer(&canonical_k(1.0)), &canonical_k(0.5), 1e-14);
        assert_matrix_close(&sqrt_transfer(&canonical_n(0.8)), &canonical_n(0.4), 1e-14);
    }

    #[test]
    fn sqrt_squares_back_to_the_normalized_matrix() {
        for m in [tunneling_matrix(), oscillatory_matrix(), matched_matrix()] {
            let s = sqrt_transfer(&m);
            let squared = compose(&s, &s);
            assert_matrix_close(&squared, &m.sign_normalized(), 1e-12);
            assert!(s.det_residual() < 1e-12);
        }
    }

    #[test]
    fn sqrt_of_a_negated_matrix_matches_the_normalized_root() {
        let m = tunneling_matrix();
        let negated = TransferMatrix::new(-m.alpha(), -m.beta()).unwrap();
        assert_matrix_close(&sqrt_transfer(&negated), &sqrt_transfer(&m), 0.0);
    }

    #[test]
    fn turn_of_the_tunneling_barrier() {
        let turn = turn_from_transfer(&tunneling_matrix()).unwrap();
        assert!((turn.half_length() - 2.0f64.sqrt()).abs() < 1e-12);
        assert_close(turn.axis().start().z(), c(0.0, 1.0), 1e-12);
        assert_close(turn.axis().end().z(), c(0.0, -1.0), 1e-12);
        let back = transfer_from_turn(&turn);
        assert_matrix_close(&back, &tunneling_matrix().sign_normalized(), 1e-12);
    }

    #[test]
    fn non_hyperbolic_matrices_have_no_turn() {
        assert!(matches!(
            turn_from_transfer(&oscillatory_matrix()),
            Err(Error::NotHyperbolic { found: "elliptic" })
        ));
        assert!(matches!(
            turn_from_transfer(&matched_matrix()),
            Err(Error::NotHyperbolic { found: "parabolic" })
        ));
    }

    #[test]
    fn turn_round_trip_on_a_generic_axis() {
        let axis = Geodesic::through(pt(0.25, -0.1), pt(-0.2, 0.4)).unwrap();
        let turn = HyperbolicTurn::new(axis, 0.6).unwrap();
        let m = transfer_from_turn(&turn);
        let cls = classify(&m);
        assert_eq!(cls.kind, ActionKind::Hyperbolic);
        assert!((cls.canonical_parameter - 1.2).abs() < 1e-12);
        match cls.fixed_points {
            FixedPoints::Boundary {
                repelling,
                attracting,
            } => {
                assert_close(repelling.z(), axis.start().z(), 1e-9);
                assert_close(attracting.z(), axis.end().z(), 1e-9);
            }
            other => panic!("expected boundary fixed points, got {other:?}"),
        }
        let recovered = turn_from_transfer(&m).unwrap();
        assert!((recovered.half_length() - 0.6).abs() < 1e-12);
    }

    #[test]
    fn turn_validation() {
        let axis = diameter(0.0);
        assert!(HyperbolicTurn::new(axis, 0.0).is_err());
        assert!(HyperbolicTurn::new(axis, -1.0).is_err());
        assert!(HyperbolicTurn::new(axis, f64::NAN).is_err());
    }

    #[test]
    fn reflection_in_diameters() {
        // Imaginary-axis diameter: z -> -conj(z).
        let g = Geodesic::new(pt(0.0, 1.0), pt(0.0, -1.0)).unwrap();
        let image = reflect_in_geodesic(&g, pt(0.3, 0.2));
        assert_close(image.z(), c(-0.3, 0.2), 1e-15);
        // Real-axis diameter: z -> conj(z).
        let g = Geodesic::new(pt(-1.0, 0.0), pt(1.0, 0.0)).unwrap();
        let image = reflect_in_geodesic(&g, pt(0.3, 0.2));
        assert_close(image.z(), c(0.3, -0.2), 1e-15);
    }

    #[test]
    fn reflection_is_an_isometric_involution_fixing_the_geodesic() {
        let g = Geodesic::through(pt(0.3, 0.1), pt(-0.1, 0.45)).unwrap();
        let z = pt(-0.5, -0.2);
        let once = reflect_in_geodesic(&g, z);
        let twice = reflect_in_geodesic(&g, once);
        assert_close(twice.z(), z.z(), 1e-12);
        let on_axis = g.point_at(0.37);
        assert_close(reflect_in_geodesic(&g, on_axis).z(), on_axis.z(), 1e-12);
        // Reflections preserve hyperbolic distance.
        let w = pt(0.2, 0.6);
        let d_before = crate::geometry::hyperbolic_distance(z, w).unwrap();
        let d_after =
            crate::geometry::hyperbolic_distance(once, reflect_in_geodesic(&g, w)).unwrap();
        assert!((d_before - d_after).abs() < 1e-12);
    }

    #[test]
    fn two_reflections_in_perpendiculars_make_a_translation() {
        let axis = Geodesic::new(pt(0.0, 1.0), pt(0.0, -1.0)).unwrap();
        let (s1, s2) = (0.2, 0.75);
        let m1 = axis.perpendicular_at(s1);
        let m2 = axis.perpendicular_at(s2);
        let expected = canonical_a(2.0 * (s2 - s1));
        for z in [pt(0.1, 0.3), pt(-0.4, -0.2), DiskPoint::origin()] {
            let image = reflect_in_geodesic(&m2, reflect_in_geodesic(&m1, z));
            let direct = mobius(&expected, z).unwrap();
            assert_close(image.z(), direct.z(), 1e-10);
        }
    }

    #[test]
    fn collinear_turns_add_their_lengths() {
        let axis = diameter(0.3);
        let t1 = HyperbolicTurn::new(axis, 0.4).unwrap();
        let t2 = HyperbolicTurn::new(axis, 0.9).unwrap();
        match compose_turns(&t1, &t2).unwrap() {
            TurnComposition::Turn(t) => {
                assert!((t.half_length() - 1.3).abs() < 1e-12);
                assert_close(t.axis().start().z(), axis.start().z(), 1e-9);
                assert_close(t.axis().end().z(), axis.end().z(), 1e-9);
            }
            other => panic!("expected a turn, got {other:?}"),
        }
    }

    #[test]
    fn opposite_turns_cancel_to_the_identity() {
        let axis = diameter(1.0);
        let reversed = Geodesic::new(axis.end(), axis.start()).unwrap();
        let t1 = HyperbolicTurn::new(axis, 0.7).unwrap();
        let t2 = HyperbolicTurn::new(reversed, 0.7).unwrap();
        match compose_turns(&t1, &t2).unwrap() {
            TurnComposition::NonHyperbolic(cls) => {
                assert_eq!(cls.kind, ActionKind::Parabolic);
                assert!(cls.canonical_parameter.abs() < 1e-12);
            }
            other => panic!("expected a non-hyperbolic outcome, got {other:?}"),
        }
        // Unequal lengths on opposite axes leave a residual translation.
        let t3 = HyperbolicTurn::new(reversed, 0.9).unwrap();
        match compose_turns(&t1, &t3).unwrap() {
            TurnComposition::Turn(t) => assert!((t.half_length() - 0.2).abs() < 1e-10),
            other => panic!("expected a turn, got {other:?}"),
        }
    }

    #[test]
    fn opposing_turns_on_disjoint_axes_compose_elliptically() {
        // Translations along two disjoint axes, pointing in opposite senses
        // relative to their common perpendicular: the product is a rotation.
        // (With intersecting axes this cannot happen: the product half-trace
        // is cosh h1 cosh h2 + sinh h1 sinh h2 cos(angle) >= 1.)
        let axis1 = Geodesic::through(pt(-0.3, -0.2), pt(-0.3, 0.2)).unwrap();
        let axis2 = Geodesic::through(pt(0.3, 0.2), pt(0.3, -0.2)).unwrap();
        let t1 = HyperbolicTurn::new(axis1, 0.3).unwrap();
        let t2 = HyperbolicTurn::new(axis2, 0.3).unwrap();
        match compose_turns(&t1, &t2).unwrap() {
            TurnComposition::NonHyperbolic(cls) => assert_eq!(cls.kind, ActionKind::Elliptic),
            other => panic!("expected an elliptic outcome, got {other:?}"),
        }
    }

    #[test]
    fn composition_matches_the_law_of_cosines_through_the_origin() {
        // Both axes are diameters through the origin, so the turning angle
        // between their directions is the Euclidean angle between them.
        let (h1, h2, angle) = (0.8, 0.5, 1.1);
        let t1 = HyperbolicTurn::new(diameter(0.0), h1).unwrap();
        let t2 = HyperbolicTurn::new(diameter(angle), h2).unwrap();
        match compose_turns(&t1, &t2).unwrap() {
            TurnComposition::Turn(t) => {
                let predicted = hyperbolic_law_of_cosines(h1, h2, angle).unwrap();
                assert!(
                    (t.half_length() - predicted).abs() < 1e-12,
                    "law of cosines mismatch: {} vs {}",
                    t.half_length(),
                    predicted
                );
            }
            other => panic!("expected a turn, got {other:?}"),
        }
    }

    #[test]
    fn head_to_tail_construction_reproduces_the_matrix_product() {
        // Two axes through a common interior point q.
        let q = pt(0.1, 0.2);
        let axis1 = Geodesic::through(pt(-0.5, -0.1), q).unwrap();
        let axis2 = Geodesic::through(q, pt(0.6, -0.3)).unwrap();
        let first = HyperbolicTurn::new(axis1, 0.45).unwrap();
        let second = HyperbolicTurn::new(axis2, 0.65).unwrap();

        let m_first = transfer_from_turn(&first);
        let m_second = transfer_from_turn(&second);

        // Slide the segments head-to-tail at q and connect tail to head.
        let tail = mobius(&sqrt_transfer(&m_first).inverse(), q).unwrap();
        let head = mobius(&sqrt_transfer(&m_second), q).unwrap();
        let resultant_half = crate::geometry::hyperbolic_distance(tail, head).unwrap();
        let resultant_axis = Geodesic::through(tail, head).unwrap();
        let geometric = transfer_from_turn(
            &HyperbolicTurn::new(resultant_axis, resultant_half).unwrap(),
        );

        let product = compose(&m_second, &m_first);
        assert_matrix_close(&geometric, &product.sign_normalized(), 1e-10);

        match compose_turns(&first, &second).unwrap() {
            TurnComposition::Turn(t) => {
                assert!((t.half_length() - resultant_half).abs() < 1e-10);
                assert_close(t.axis().start().z(), resultant_axis.start().z(), 1e-8);
                assert_close(t.axis().end().z(), resultant_axis.end().z(), 1e-8);
            }
            other => panic!("expected a turn, got {other:?}"),
        }
    }

    #[test]
    fn turn_composition_is_noncommutative_in_the_axis_only() {
        let t1 = HyperbolicTurn::new(diameter(0.0), 0.8).unwrap();
        let t2 = HyperbolicTurn::new(diameter(0.9), 0.6).unwrap();
        let (a, b) = match (
            compose_turns(&t1, &t2).unwrap(),
            compose_turns(&t2, &t1).unwrap(),
        ) {
            (TurnComposition::Turn(a), TurnComposition::Turn(b)) => (a, b),
            other => panic!("expected turns, got {other:?}"),
        };
        // Conjugate products share the trace, hence the length...
        assert!((a.half_length() - b.half_length()).abs() < 1e-12);
        // ...but the axes genuinely differ.
        assert!((a.axis().start().z() - b.axis().start().z()).norm() > 1e-3);
    }

    #[test]
    fn law_of_cosines_degenerate_angles() {
        let sum = hyperbolic_law_of_cosines(0.7, 1.1, 0.0).unwrap();
        assert!((sum - 1.8).abs() < 1e-12);
        let diff = hyperbolic_law_of_cosines(0.7, 1.1, std::f64::consts::PI).unwrap();
        assert!((diff - 0.4).abs() < 1e-7);
        let cancel = hyperbolic_law_of_cosines(0.9, 0.9, std::f64::consts::PI).unwrap();
        assert!(cancel.abs() < 1e-7);
        assert!(hyperbolic_law_of_cosines(-0.1, 0.5, 0.0).is_err());
        assert!(hyperbolic_law_of_cosines(0.1, f64::INFINITY, 0.0).is_err());
    }
}

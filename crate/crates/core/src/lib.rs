//! One-dimensional scattering through transfer matrices and their
//! hyperbolic geometry on the unit disk.
//!
//! A lossless scatterer on a line is a 2x2 complex matrix with unit
//! determinant relating plane-wave amplitudes on its two sides. Such
//! matrices act on the unit disk by Moebius maps, and that action organizes
//! everything this crate computes:
//!
//! * [`transfer`] — the matrices themselves: construction from reflection
//!   and transmission amplitudes, composition, the real 2x2 picture, and
//!   integer powers.
//! * [`potentials`] — piecewise-constant potentials: exact single-barrier
//!   amplitudes, stacks of segments, and an independent direct integration
//!   of the wave equation for cross-checking.
//! * [`geometry`] — the disk picture: Moebius action, elliptic/hyperbolic/
//!   parabolic classification with fixed points, canonical forms,
//!   conjugation, orbits, and hyperbolic distance.
//! * [`turns`] — hyperbolic translations as directed geodesic segments of
//!   half the translation length, composed head-to-tail like vectors.
//! * [`periodic`] — N identical cells: closed forms for the N-cell
//!   reflection coefficient, gap-safe transmittance, and band structure
//!   scans over energy.
//!
//! Conventions: a potential of height V0 occupying [0, L] has its transfer
//! matrix referenced to the interval edges (no free-propagation phase
//! factors are folded in), and the default unit system sets hbar = 1 and
//! mass = 1/2 so the wavenumber at energy E is sqrt(E).

pub use num_complex::Complex64;

pub mod error;
pub mod geometry;
pub mod periodic;
pub mod potentials;
pub mod transfer;
pub mod turns;

pub use error::{Error, Result};
pub use geometry::{
    canonical_form, classify, conjugate, distance_to_geodesic, hyperbolic_distance,
    kind_from_half_trace, mobius, orbit, reduce_to_canonical, translation_length,
    ActionClassification, ActionKind, DiskPoint, FixedPoints, Geodesic, GeodesicShape,
};
pub use periodic::{
    band_edges, band_scan, band_status, closed_form_zn, elliptic_zn, iterate_disk,
    periodic_result, reflectance_n, transmittance_n, BandPoint, BandStatus, PeriodicResult,
};
pub use potentials::{
    barrier_amplitudes, barrier_transfer, free_transfer, numerical_transfer, stack_transfer,
    PotentialSegment, PotentialStack, SampledPotential, UnitConvention,
};
pub use transfer::{
    amplitudes_from_transfer, compose, composed_amplitudes, from_real_representation,
    to_real_representation, transfer_from_amplitudes, transfer_power, RealTransferMatrix,
    ScatteringAmplitudes, TransferMatrix, WaveAmplitudePair,
};
pub use turns::{
    compose_turns, hyperbolic_law_of_cosines, reflect_in_geodesic, sqrt_transfer,
    transfer_from_turn, turn_from_transfer, HyperbolicTurn, TurnComposition,
};

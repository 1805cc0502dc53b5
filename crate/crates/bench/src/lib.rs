//! Benchmark-only crate: shared fixtures for the criterion benches.

use scatter1d::{Complex64, PotentialSegment, PotentialStack, TransferMatrix, UnitConvention};

/// A mixed bag of unit-determinant matrices for composition benchmarks.
pub fn sample_matrices(count: usize) -> Vec<TransferMatrix> {
    // A small deterministic generator is enough for stable benchmarks.
    let mut state = 0x9e3779b97f4a7c15u64;
    let mut next = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        (state >> 11) as f64 / (1u64 << 53) as f64
    };
    (0..count)
        .map(|_| {
            let b = 2.0 * next();
            let beta = Complex64::from_polar(b, std::f64::consts::TAU * next());
            let alpha =
                Complex64::from_polar((1.0 + b * b).sqrt(), std::f64::consts::TAU * next());
            TransferMatrix::new(alpha, beta).expect("constructed to unit determinant")
        })
        .collect()
}

/// The two-segment cell used in band-structure benchmarks.
pub fn bench_cell() -> PotentialStack {
    PotentialStack::new(vec![
        PotentialSegment::new(1.0, 0.4).expect("valid segment"),
        PotentialSegment::new(0.0, 0.6).expect("valid segment"),
    ])
    .expect("valid stack")
}

/// Default unit system for the benches.
pub fn bench_units() -> UnitConvention {
    UnitConvention::default()
}

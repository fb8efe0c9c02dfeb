//! Shared fixtures for the criterion benchmarks in `benches/`.

/// Candidate counts used by the linear-scaling benchmark; the solve time
/// should grow proportionally along this sequence.
pub const SCALING_SIZES: [usize; 3] = [250_000, 500_000, 1_000_000];

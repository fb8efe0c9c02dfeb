//! Simulation of the arrival process and exhaustive enumeration of tiny
//! instances.
//!
//! A trial draws a uniformly random arrangement of the multiset containing
//! `m` copies of each rank `1..=n`, then scans it left to right applying the
//! threshold strategy: track the number of distinct candidates seen and the
//! appearance count of the current maximal; at the maximal's final copy (a
//! *nice* arrival) with distinct count at or past the threshold, accept and
//! succeed exactly when the accepted candidate is the best overall.
//!
//! Randomness is fully deterministic given `(seed, trial index)`: each trial
//! runs on its own SplitMix64 stream seeded by a fixed mix of the two, so an
//! estimate does not depend on execution order or thread count.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::One;
use rayon::prelude::*;

use crate::problem::{Error, ProblemSpec};

/// Default cap on the number of arrangements the exhaustive oracle will
/// enumerate.
pub const DEFAULT_ENUMERATION_CAP: u64 = 1_000_000;

// ---------------------------------------------------------------------------
// Deterministic randomness
// ---------------------------------------------------------------------------

/// SplitMix64 generator (Steele, Lea & Flood). The update constant is the
/// 64-bit golden ratio; the output mix is the standard two-round finalizer.
/// These constants are part of the reproducibility contract and must not
/// change.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN);
        mix64(self.state)
    }

    /// Uniform draw from `0..bound` via Lemire's multiply-shift with
    /// rejection (unbiased).
    pub fn next_below(&mut self, bound: u64) -> u64 {
        debug_assert!(bound > 0);
        let mut x = self.next_u64();
        let mut wide = (x as u128) * (bound as u128);
        let mut low = wide as u64;
        if low < bound {
            let cutoff = bound.wrapping_neg() % bound;
            while low < cutoff {
                x = self.next_u64();
                wide = (x as u128) * (bound as u128);
                low = wide as u64;
            }
        }
        (wide >> 64) as u64
    }

    /// Unbiased Fisher-Yates shuffle.
    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.next_below(i as u64 + 1) as usize;
            items.swap(i, j);
        }
    }
}

/// Per-trial stream seed: `mix(seed xor mix(index * golden + golden))`.
/// Fixed scheme so results reproduce across versions and thread counts.
pub fn trial_seed(seed: u64, trial: u64) -> u64 {
    mix64(seed ^ mix64(trial.wrapping_mul(GOLDEN).wrapping_add(GOLDEN)))
}

// ---------------------------------------------------------------------------
// The scan
// ---------------------------------------------------------------------------

struct Scratch {
    template: Vec<u32>,
    arrangement: Vec<u32>,
    seen: Vec<bool>,
}

impl Scratch {
    fn new(m: usize, n: usize) -> Self {
        let mut template = Vec::with_capacity(m * n);
        for rank in 1..=n as u32 {
            template.extend(std::iter::repeat_n(rank, m));
        }
        Self {
            arrangement: template.clone(),
            template,
            seen: vec![false; n + 1],
        }
    }

    /// Restore the canonical order so a trial's draw depends only on its own
    /// stream, never on which trials ran earlier on the same thread.
    fn reset(&mut self) {
        self.arrangement.copy_from_slice(&self.template);
    }
}

/// Walks one arrival sequence and reports every nice arrival as
/// `(distinct count, arrival is the best candidate)`; stops early when the
/// visitor returns `true`. A repeat of a non-maximal candidate changes
/// nothing (all its copies count as inspected); the distinct count moves only
/// on first appearances.
fn visit_nice_events(
    sequence: &[u32],
    m: usize,
    best_rank: u32,
    seen: &mut [bool],
    mut visit: impl FnMut(usize, bool) -> bool,
) {
    seen.fill(false);
    let mut distinct = 0usize;
    let mut max_rank = 0u32;
    let mut max_count = 0usize;
    for &rank in sequence {
        // Nice exactly when this arrival completes the maximal's m-th copy
        // (for m = 1 a fresh record is already its own final copy).
        let nice = if rank > max_rank {
            max_rank = rank;
            max_count = 1;
            distinct += 1;
            seen[rank as usize] = true;
            m == 1
        } else if rank == max_rank {
            max_count += 1;
            max_count == m
        } else {
            if !seen[rank as usize] {
                seen[rank as usize] = true;
                distinct += 1;
            }
            false
        };
        if nice && visit(distinct, max_rank == best_rank) {
            return;
        }
    }
}

fn scan_threshold(
    sequence: &[u32],
    m: usize,
    n: usize,
    threshold: usize,
    seen: &mut [bool],
) -> bool {
    let mut success = false;
    visit_nice_events(sequence, m, n as u32, seen, |distinct, is_best| {
        if distinct >= threshold {
            success = is_best;
            true
        } else {
            false
        }
    });
    success
}

fn trial_with_scratch(
    m: usize,
    n: usize,
    threshold: usize,
    rng: &mut SplitMix64,
    scratch: &mut Scratch,
) -> bool {
    scratch.reset();
    rng.shuffle(&mut scratch.arrangement);
    scan_threshold(&scratch.arrangement, m, n, threshold, &mut scratch.seen)
}

/// One simulated trial of the threshold strategy on a fresh random
/// arrangement drawn from `rng`.
pub fn run_trial(
    spec: &ProblemSpec,
    threshold: usize,
    rng: &mut SplitMix64,
) -> Result<bool, Error> {
    if threshold < 1 || threshold > spec.n {
        return Err(Error::ThresholdOutOfRange {
            k: threshold,
            n: spec.n,
        });
    }
    let mut scratch = Scratch::new(spec.m, spec.n);
    Ok(trial_with_scratch(
        spec.m,
        spec.n,
        threshold,
        rng,
        &mut scratch,
    ))
}

// ---------------------------------------------------------------------------
// Aggregated estimates
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SimulationConfig {
    pub spec: ProblemSpec,
    pub threshold: usize,
    pub trials: u64,
    pub seed: u64,
}

impl SimulationConfig {
    pub fn validate(&self) -> Result<(), Error> {
        if self.trials < 1 {
            return Err(Error::NoTrials);
        }
        if self.threshold < 1 || self.threshold > self.spec.n {
            return Err(Error::ThresholdOutOfRange {
                k: self.threshold,
                n: self.spec.n,
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimulationEstimate {
    pub successes: u64,
    pub trials: u64,
    pub p_hat: f64,
    pub std_err: f64,
}

impl SimulationEstimate {
    fn new(successes: u64, trials: u64) -> Self {
        let p_hat = successes as f64 / trials as f64;
        let std_err = (p_hat * (1.0 - p_hat) / trials as f64).sqrt();
        Self {
            successes,
            trials,
            p_hat,
            std_err,
        }
    }
}

/// Runs `config.trials` independent trials (in parallel) and aggregates the
/// success frequency. Bit-identical output for a fixed config regardless of
/// thread count.
pub fn estimate(config: &SimulationConfig) -> Result<SimulationEstimate, Error> {
    config.validate()?;
    let (m, n) = (config.spec.m, config.spec.n);
    let (threshold, seed) = (config.threshold, config.seed);
    let successes = (0..config.trials)
        .into_par_iter()
        .map_init(
            || Scratch::new(m, n),
            |scratch, trial| {
                let mut rng = SplitMix64::new(trial_seed(seed, trial));
                u64::from(trial_with_scratch(m, n, threshold, &mut rng, scratch))
            },
        )
        .sum();
    Ok(SimulationEstimate::new(successes, config.trials))
}

// ---------------------------------------------------------------------------
// Exhaustive enumeration
// ---------------------------------------------------------------------------

/// Number of distinct arrangements, `(mn)! / (m!)^n`.
pub fn arrangement_count(m: usize, n: usize) -> BigUint {
    let mut count = BigUint::one();
    for v in 2..=(m * n) {
        count *= BigUint::from(v);
    }
    let mut m_factorial = BigUint::one();
    for v in 2..=m {
        m_factorial *= BigUint::from(v);
    }
    count / m_factorial.pow(n as u32)
}

/// Lexicographic next distinct permutation of a multiset; `false` once the
/// sequence is non-increasing.
fn next_multiset_permutation(v: &mut [u32]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

fn check_cap(m: usize, n: usize, cap: u64) -> Result<u64, Error> {
    let count = arrangement_count(m, n);
    if count > BigUint::from(cap) {
        return Err(Error::InstanceTooLarge { count, cap });
    }
    let digits = count.to_u64_digits();
    Ok(if digits.is_empty() { 0 } else { digits[0] })
}

/// Exact success probability of the threshold strategy, by enumerating every
/// distinct arrangement (all equally likely) and applying the same scan the
/// simulator uses.
pub fn exhaustive(spec: &ProblemSpec, threshold: usize, cap: u64) -> Result<BigRational, Error> {
    if threshold < 1 || threshold > spec.n {
        return Err(Error::ThresholdOutOfRange {
            k: threshold,
            n: spec.n,
        });
    }
    let (m, n) = (spec.m, spec.n);
    let total = check_cap(m, n, cap)?;
    let mut scratch = Scratch::new(m, n);
    let mut arrangement = scratch.arrangement.clone();
    let mut wins = 0u64;
    loop {
        wins += u64::from(scan_threshold(
            &arrangement,
            m,
            n,
            threshold,
            &mut scratch.seen,
        ));
        if !next_multiset_permutation(&mut arrangement) {
            break;
        }
    }
    Ok(BigRational::new(wins.into(), total.into()))
}

/// Exact success probabilities for every threshold `1..=n`, in one pass over
/// the arrangements. Index 0 of the returned vector is threshold 1.
pub fn exhaustive_all(spec: &ProblemSpec, cap: u64) -> Result<Vec<BigRational>, Error> {
    let (m, n) = (spec.m, spec.n);
    let total = check_cap(m, n, cap)?;
    let mut seen = vec![false; n + 1];
    let mut arrangement = Scratch::new(m, n).arrangement;
    let mut wins = vec![0u64; n + 1];
    let mut events: Vec<(usize, bool)> = Vec::with_capacity(n);
    loop {
        events.clear();
        visit_nice_events(&arrangement, m, n as u32, &mut seen, |distinct, is_best| {
            events.push((distinct, is_best));
            false
        });
        // Threshold kappa accepts the first nice arrival with distinct count
        // >= kappa; the distinct counts are non-decreasing over the scan.
        let mut lowest = 1usize;
        for &(distinct, is_best) in &events {
            if is_best {
                for w in &mut wins[lowest..=distinct] {
                    *w += 1;
                }
            }
            lowest = lowest.max(distinct + 1);
            if lowest > n {
                break;
            }
        }
        if !next_multiset_permutation(&mut arrangement) {
            break;
        }
    }
    Ok((1..=n)
        .map(|k| BigRational::new(wins[k].into(), total.into()))
        .collect())
}

/// Best threshold by exhaustive enumeration: the smallest maximizer and its
/// exact success probability.
pub fn exhaustive_optimal(spec: &ProblemSpec, cap: u64) -> Result<(usize, BigRational), Error> {
    let values = exhaustive_all(spec, cap)?;
    let mut best = 0usize;
    for (idx, v) in values.iter().enumerate() {
        if *v > values[best] {
            best = idx;
        }
    }
    Ok((best + 1, values[best].clone()))
}

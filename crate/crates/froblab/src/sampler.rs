//! Sampling and enumeration of primitive vectors in the box {1..T}^n,
//! plus exact counting by Mobius inclusion-exclusion.
//!
//! Monte Carlo draws are uniform over the primitive vectors of the box:
//! each coordinate is drawn uniformly from {1..T} and non-coprime
//! candidates are rejected. Every draw is a pure function of
//! (seed, draw index), realized as a dedicated ChaCha stream per index,
//! so batches are reproducible regardless of how draws are partitioned
//! across workers.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::parallel;
use crate::vector::{gcd, PrimitiveVector};

/// Ceiling on T^n candidate tuples for exhaustive enumeration.
pub const EXHAUSTIVE_GUARD: u128 = 100_000_000;

/// Ceiling on T for the Mobius sieve used by [`count_primitive`].
pub const COUNT_GUARD: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SampleMode {
    MonteCarlo,
    Exhaustive,
}

/// Parameters identifying a batch. Identical specs produce identical
/// batches.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SampleSpec {
    /// Box side: entries range over {1..t}.
    pub t: u64,
    /// Dimension, at least 2.
    pub n: u32,
    /// Base seed for the per-draw streams. Ignored in exhaustive mode.
    pub seed: u64,
    /// Number of Monte Carlo draws. Ignored in exhaustive mode.
    pub count: u64,
    pub mode: SampleMode,
}

impl SampleSpec {
    pub fn monte_carlo(t: u64, n: u32, seed: u64, count: u64) -> Self {
        Self {
            t,
            n,
            seed,
            count,
            mode: SampleMode::MonteCarlo,
        }
    }

    pub fn exhaustive(t: u64, n: u32) -> Self {
        Self {
            t,
            n,
            seed: 0,
            count: 0,
            mode: SampleMode::Exhaustive,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.t < 1 {
            return Err(Error::Usage("box side T must be at least 1".into()));
        }
        if self.n < 2 {
            return Err(Error::Usage("dimension n must be at least 2".into()));
        }
        match self.mode {
            SampleMode::MonteCarlo => {
                if self.count < 1 {
                    return Err(Error::Usage("sample count must be at least 1".into()));
                }
            }
            SampleMode::Exhaustive => {
                check_enumeration_size(self.t, self.n)?;
            }
        }
        Ok(())
    }
}

/// A batch of primitive vectors drawn from or enumerating the box.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleBatch {
    pub spec: SampleSpec,
    pub vectors: Vec<PrimitiveVector>,
    /// Total gcd-rejections across all draws (0 in exhaustive mode).
    pub rejected: u64,
}

impl SampleBatch {
    /// Fingerprint tying derived estimates back to the batch they were
    /// computed on.
    pub fn batch_id(&self) -> u64 {
        let mode = match self.spec.mode {
            SampleMode::MonteCarlo => 0u64,
            SampleMode::Exhaustive => 1u64,
        };
        fnv1a(&[
            self.spec.t,
            u64::from(self.spec.n),
            self.spec.seed,
            self.spec.count,
            mode,
            self.vectors.len() as u64,
        ])
    }
}

fn fnv1a(words: &[u64]) -> u64 {
    let mut hash = 0xcbf2_9ce4_8422_2325u64;
    for word in words {
        for byte in word.to_le_bytes() {
            hash ^= u64::from(byte);
            hash = hash.wrapping_mul(0x100_0000_01b3);
        }
    }
    hash
}

/// Mobius function by trial division.
pub fn mobius(m: u64) -> i8 {
    assert!(m >= 1, "mobius requires m >= 1");
    let mut m = m;
    let mut prime_count = 0u32;
    let mut d = 2u64;
    while d * d <= m {
        if m.is_multiple_of(d) {
            m /= d;
            if m.is_multiple_of(d) {
                return 0;
            }
            prime_count += 1;
        }
        d += 1;
    }
    if m > 1 {
        prime_count += 1;
    }
    if prime_count.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Mobius values for 1..=limit by a smallest-prime-factor sieve.
/// `out[0]` is unused.
fn mobius_sieve(limit: usize) -> Vec<i8> {
    let mut spf = vec![0u32; limit + 1];
    let mut primes: Vec<u32> = Vec::new();
    let mut mu = vec![0i8; limit + 1];
    if limit >= 1 {
        mu[1] = 1;
    }
    for i in 2..=limit {
        if spf[i] == 0 {
            spf[i] = i as u32;
            primes.push(i as u32);
            mu[i] = -1;
        }
        for &p in &primes {
            let p = p as usize;
            if p > spf[i] as usize || i * p > limit {
                break;
            }
            spf[i * p] = p as u32;
            mu[i * p] = if i.is_multiple_of(p) { 0 } else { -mu[i] };
        }
    }
    mu
}

/// Exact number of primitive vectors in {1..t}^n:
/// sum over m of mu(m) * floor(t/m)^n.
pub fn count_primitive(t: u64, n: u32) -> Result<u128> {
    if t < 1 {
        return Err(Error::Usage("box side T must be at least 1".into()));
    }
    if n < 1 {
        return Err(Error::Usage("dimension n must be at least 1".into()));
    }
    if t > COUNT_GUARD {
        return Err(Error::Usage(format!(
            "counting supports T up to {COUNT_GUARD}, got {t}"
        )));
    }
    let mu = mobius_sieve(t as usize);
    let mut total: i128 = 0;
    for m in 1..=t {
        let sign = mu[m as usize];
        if sign == 0 {
            continue;
        }
        let term = i128::from(t / m)
            .checked_pow(n)
            .ok_or(Error::Overflow("count_primitive power"))?;
        total = total
            .checked_add(i128::from(sign) * term)
            .ok_or(Error::Overflow("count_primitive sum"))?;
    }
    debug_assert!(total >= 0);
    Ok(total as u128)
}

fn check_enumeration_size(t: u64, n: u32) -> Result<()> {
    let tuples = u128::from(t).checked_pow(n);
    match tuples {
        Some(c) if c <= EXHAUSTIVE_GUARD => Ok(()),
        _ => Err(Error::Usage(format!(
            "exhaustive enumeration of T^n = {t}^{n} exceeds the guard {EXHAUSTIVE_GUARD}"
        ))),
    }
}

/// Visits every primitive vector of {1..t}^n in lexicographic order
/// without materializing the batch.
pub fn for_each_primitive<F>(t: u64, n: u32, mut f: F) -> Result<()>
where
    F: FnMut(&[u64]),
{
    if t < 1 {
        return Err(Error::Usage("box side T must be at least 1".into()));
    }
    if n < 2 {
        return Err(Error::Usage("dimension n must be at least 2".into()));
    }
    check_enumeration_size(t, n)?;

    let n = n as usize;
    let mut tuple = vec![1u64; n];
    loop {
        let mut g = 0u64;
        for &e in &tuple {
            g = gcd(g, e);
            if g == 1 {
                break;
            }
        }
        if g == 1 {
            f(&tuple);
        }
        // odometer with the last position fastest
        let mut pos = n;
        loop {
            if pos == 0 {
                return Ok(());
            }
            pos -= 1;
            if tuple[pos] < t {
                tuple[pos] += 1;
                break;
            }
            tuple[pos] = 1;
        }
    }
}

/// All primitive vectors in {1..t}^n in lexicographic order.
pub fn enumerate_all(t: u64, n: u32) -> Result<SampleBatch> {
    let spec = SampleSpec::exhaustive(t, n);
    spec.validate()?;
    let mut vectors = Vec::new();
    for_each_primitive(t, n, |entries| {
        vectors.push(
            PrimitiveVector::new(entries.to_vec()).expect("enumerated vectors are primitive"),
        );
    })?;
    Ok(SampleBatch {
        spec,
        vectors,
        rejected: 0,
    })
}

/// One uniform draw from the primitive vectors of the box. Pure in
/// (spec.seed, index); returns the accepted vector and the number of
/// rejected candidates before it.
fn draw_one(spec: &SampleSpec, index: u64) -> (PrimitiveVector, u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    rng.set_stream(index);
    let n = spec.n as usize;
    let mut rejected = 0u64;
    loop {
        let entries: Vec<u64> = (0..n).map(|_| rng.gen_range(1..=spec.t)).collect();
        let mut g = 0u64;
        for &e in &entries {
            g = gcd(g, e);
            if g == 1 {
                break;
            }
        }
        if g == 1 {
            let v = PrimitiveVector::new(entries).expect("accepted draws are primitive");
            return (v, rejected);
        }
        rejected += 1;
    }
}

/// Independent uniform draws from the primitive vectors of {1..t}^n.
pub fn sample_uniform(spec: &SampleSpec) -> Result<SampleBatch> {
    sample_uniform_with_workers(spec, 1)
}

/// Same as [`sample_uniform`] but with draws partitioned across
/// `workers` threads. The result is identical for any worker count.
pub fn sample_uniform_with_workers(spec: &SampleSpec, workers: usize) -> Result<SampleBatch> {
    spec.validate()?;
    if spec.mode != SampleMode::MonteCarlo {
        return Err(Error::Usage(
            "sample_uniform requires monte-carlo mode; use enumerate_all for exhaustive".into(),
        ));
    }
    let draws = parallel::par_map_indices(spec.count as usize, workers, |i| {
        draw_one(spec, i as u64)
    });
    let mut vectors = Vec::with_capacity(draws.len());
    let mut rejected = 0u64;
    for (v, r) in draws {
        vectors.push(v);
        rejected += r;
    }
    Ok(SampleBatch {
        spec: *spec,
        vectors,
        rejected,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mobius_small_values() {
        let want: [i8; 12] = [1, -1, -1, 0, -1, 1, -1, 0, 0, 1, -1, 0];
        for (m, &w) in (1..=12u64).zip(want.iter()) {
            assert_eq!(mobius(m), w, "mu({m})");
        }
        assert_eq!(mobius(30), -1);
        assert_eq!(mobius(210), 1);
    }

    #[test]
    fn sieve_agrees_with_trial_division() {
        let mu = mobius_sieve(2000);
        for m in 1..=2000u64 {
            assert_eq!(mu[m as usize], mobius(m), "mu({m})");
        }
    }

    #[test]
    fn count_examples() {
        assert_eq!(count_primitive(3, 2).unwrap(), 7);
        assert_eq!(count_primitive(2, 2).unwrap(), 3);
        assert_eq!(count_primitive(10, 2).unwrap(), 63);
        for n in 1..=6 {
            assert_eq!(count_primitive(1, n).unwrap(), 1);
        }
    }

    #[test]
    fn count_matches_brute_force_enumeration() {
        for n in [2u32, 3] {
            for t in 1..=12u64 {
                let mut seen = 0u128;
                for_each_primitive(t, n, |_| seen += 1).unwrap();
                assert_eq!(count_primitive(t, n).unwrap(), seen, "T = {t}, n = {n}");
            }
        }
    }

    #[test]
    fn enumerate_is_lexicographic_and_complete() {
        let batch = enumerate_all(3, 2).unwrap();
        let got: Vec<Vec<u64>> = batch
            .vectors
            .iter()
            .map(|v| v.entries().to_vec())
            .collect();
        let want: Vec<Vec<u64>> = [
            [1u64, 1],
            [1, 2],
            [1, 3],
            [2, 1],
            [2, 3],
            [3, 1],
            [3, 2],
        ]
        .iter()
        .map(|p| p.to_vec())
        .collect();
        assert_eq!(got, want);

        let singleton = enumerate_all(1, 4).unwrap();
        assert_eq!(singleton.vectors.len(), 1);
        assert_eq!(singleton.vectors[0].entries(), &[1, 1, 1, 1]);
    }

    #[test]
    fn enumeration_guard_trips() {
        assert!(matches!(
            enumerate_all(1000, 3),
            Err(Error::Usage(_))
        ));
    }

    #[test]
    fn singleton_box_sampling() {
        let spec = SampleSpec::monte_carlo(1, 3, 99, 5);
        let batch = sample_uniform(&spec).unwrap();
        assert_eq!(batch.vectors.len(), 5);
        assert_eq!(batch.rejected, 0);
        for v in &batch.vectors {
            assert_eq!(v.entries(), &[1, 1, 1]);
        }
    }

    #[test]
    fn acceptance_rate_matches_the_primitive_density() {
        // exact density of primitive pairs in the 10-box: 63/100
        let spec = SampleSpec::monte_carlo(10, 2, 0xF90BE1, 1000);
        let batch = sample_uniform(&spec).unwrap();
        let rate = 1000.0 / (1000.0 + batch.rejected as f64);
        assert!(
            (0.55..=0.75).contains(&rate),
            "acceptance rate {rate} outside [0.55, 0.75]"
        );
    }

    #[test]
    fn batches_are_deterministic_and_worker_independent() {
        let spec = SampleSpec::monte_carlo(50, 3, 7, 400);
        let a = sample_uniform(&spec).unwrap();
        let b = sample_uniform(&spec).unwrap();
        assert_eq!(a, b);
        for workers in [2, 3, 8] {
            assert_eq!(sample_uniform_with_workers(&spec, workers).unwrap(), a);
        }
    }

    #[test]
    fn sampled_vectors_satisfy_the_invariants() {
        let spec = SampleSpec::monte_carlo(9, 3, 123, 500);
        let batch = sample_uniform(&spec).unwrap();
        assert_eq!(batch.vectors.len(), 500);
        for v in &batch.vectors {
            assert!(v.max_entry() <= 9);
            assert_eq!(crate::vector::gcd_vector(v.entries()).unwrap(), 1);
        }
    }

    #[test]
    fn batch_id_distinguishes_specs() {
        let a = sample_uniform(&SampleSpec::monte_carlo(10, 2, 1, 50)).unwrap();
        let b = sample_uniform(&SampleSpec::monte_carlo(10, 2, 2, 50)).unwrap();
        assert_ne!(a.batch_id(), b.batch_id());
        assert_eq!(a.batch_id(), a.clone().batch_id());
    }
}

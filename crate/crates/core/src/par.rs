//! Data-parallel helpers with a sequential fallback.
//!
//! Random streams are split into fixed-size chunks, each with its own
//! ChaCha8 stream derived from `(seed, chunk index)`, so parallel and
//! sequential runs produce identical samples.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

pub const CHUNK: usize = 4096;

pub fn chunk_rng(seed: u64, chunk: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk as u64);
    rng
}

/// Circular complex Gaussian with total variance `power`.
#[inline]
pub fn complex_gaussian(rng: &mut ChaCha8Rng, power: f64) -> Complex64 {
    let sd = (0.5 * power).sqrt();
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(sd * re, sd * im)
}

/// Applies `f` to every input with a per-chunk RNG, sequentially.
pub fn map_seeded_seq<T, U, F>(input: &[T], seed: u64, f: F) -> Vec<U>
where
    F: Fn(&mut ChaCha8Rng, &T) -> U,
{
    let mut out = Vec::with_capacity(input.len());
    for (c, chunk) in input.chunks(CHUNK).enumerate() {
        let mut rng = chunk_rng(seed, c);
        out.extend(chunk.iter().map(|x| f(&mut rng, x)));
    }
    out
}

#[cfg(feature = "parallel")]
pub fn map_seeded_par<T, U, F>(input: &[T], seed: u64, f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&mut ChaCha8Rng, &T) -> U + Sync,
{
    use rayon::prelude::*;
    input
        .par_chunks(CHUNK)
        .enumerate()
        .flat_map_iter(|(c, chunk)| {
            let mut rng = chunk_rng(seed, c);
            chunk.iter().map(|x| f(&mut rng, x)).collect::<Vec<_>>()
        })
        .collect()
}

/// Parallel when the `parallel` feature is on, sequential otherwise.
pub fn map_seeded<T, U, F>(input: &[T], seed: u64, f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&mut ChaCha8Rng, &T) -> U + Sync,
{
    #[cfg(feature = "parallel")]
    {
        map_seeded_par(input, seed, f)
    }
    #[cfg(not(feature = "parallel"))]
    {
        map_seeded_seq(input, seed, f)
    }
}

/// `n` draws from `f`, chunk-seeded.
pub fn draw<U, F>(n: usize, seed: u64, f: F) -> Vec<U>
where
    U: Send,
    F: Fn(&mut ChaCha8Rng) -> U + Sync,
{
    let idx: Vec<()> = vec![(); n];
    map_seeded(&idx, seed, |rng, _| f(rng))
}

pub fn map_seq<T, U, F: Fn(&T) -> U>(items: &[T], f: F) -> Vec<U> {
    items.iter().map(f).collect()
}

#[cfg(feature = "parallel")]
pub fn map_par<T: Sync, U: Send, F: Fn(&T) -> U + Sync + Send>(items: &[T], f: F) -> Vec<U> {
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

/// Order-preserving map over independent work items.
pub fn map<T: Sync, U: Send, F: Fn(&T) -> U + Sync + Send>(items: &[T], f: F) -> Vec<U> {
    #[cfg(feature = "parallel")]
    {
        map_par(items, f)
    }
    #[cfg(not(feature = "parallel"))]
    {
        map_seq(items, f)
    }
}

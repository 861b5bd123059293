//! Threaded density-of-states sampling. Rows of the momentum grid are split
//! into contiguous chunks; per-chunk counts are merged in chunk order, so the
//! result is identical to the sequential histogram for any thread count.

use std::num::NonZeroUsize;
use std::thread;

use ctbands_core::dos::{DosHistogram, DosSampler};
use ctbands_core::models::BilayerSpec;

use crate::CliError;

pub const THREADS_ENV: &str = "CT_BANDS_THREADS";

/// Thread cap from `CT_BANDS_THREADS`, else the available parallelism.
pub fn thread_count() -> Result<usize, CliError> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => v
            .trim()
            .parse::<NonZeroUsize>()
            .map(NonZeroUsize::get)
            .map_err(|_| CliError::Config(format!("{THREADS_ENV} must be a positive integer, got {v:?}"))),
        Err(_) => Ok(thread::available_parallelism().map_or(1, NonZeroUsize::get)),
    }
}

pub fn dos_histogram_parallel(
    spec: &BilayerSpec,
    grid: usize,
    bins: usize,
    threads: usize,
) -> ctbands_core::Result<DosHistogram> {
    let sampler = DosSampler::new(spec, grid, bins)?;
    let m = sampler.grid();
    let chunks = threads.clamp(1, m);
    let bounds: Vec<(usize, usize)> = (0..chunks)
        .map(|c| (1 + c * m / chunks, 1 + (c + 1) * m / chunks))
        .collect();
    let partial: Vec<Vec<u64>> = thread::scope(|scope| {
        let handles: Vec<_> = bounds
            .iter()
            .map(|&(lo, hi)| {
                let sampler = &sampler;
                scope.spawn(move || {
                    let mut counts = vec![0u64; sampler.bins()];
                    sampler.accumulate_rows(lo..hi, &mut counts);
                    counts
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("DOS worker panicked")).collect()
    });
    let mut counts = vec![0u64; sampler.bins()];
    for part in partial {
        for (acc, c) in counts.iter_mut().zip(part) {
            *acc += c;
        }
    }
    Ok(sampler.finish(counts))
}

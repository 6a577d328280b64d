//! Multi-threaded ensemble drivers.
//!
//! Chunks run on the rayon pool in batches and are merged in chunk order,
//! so results are bit-identical to the sequential library functions for any
//! thread count.

use num_complex::Complex64;
use rayon::prelude::*;

use collapse_spectra_core::dynamics::{
    bloch_chunk, chunk_count, correlation_chunk, finish_bloch, finish_correlation, reduce_chunks, BlochState,
    ChunkMoments, CorrelationStats, EnsembleStats, SimParams,
};
use collapse_spectra_core::Result;

/// Chunks in flight per worker thread; bounds peak memory.
const BATCH_PER_THREAD: usize = 4;

fn run_chunks<const K: usize>(
    params: &SimParams,
    chunk: impl Fn(usize) -> Result<ChunkMoments<K>> + Sync,
) -> Result<ChunkMoments<K>> {
    let total = chunk_count(params.n_traj);
    let batch = (BATCH_PER_THREAD * rayon::current_num_threads()).max(1);
    let mut acc = reduce_chunks(params, std::iter::empty())?;
    for start in (0..total).step_by(batch) {
        let end = total.min(start + batch);
        let done: Vec<Result<ChunkMoments<K>>> = (start..end).into_par_iter().map(&chunk).collect();
        // fold chunk by chunk: the batch boundaries must not change the merge order
        for part in done {
            acc.merge(&part?);
        }
    }
    Ok(acc)
}

pub fn run_ensemble(params: &SimParams, init: &BlochState) -> Result<EnsembleStats> {
    params.validate()?;
    init.validate()?;
    let total = run_chunks(params, |c| bloch_chunk(params, init, c))?;
    Ok(finish_bloch(params, &total))
}

pub fn autocorrelation_sde(params: &SimParams, c0: Complex64) -> Result<CorrelationStats> {
    params.validate()?;
    let total = run_chunks(params, |c| correlation_chunk(params, c0, c))?;
    Ok(finish_correlation(params, &total))
}

//! Monte Carlo ensembles with a scheduling-independent reduction.
//!
//! Trajectories are grouped into fixed chunks of [`CHUNK_TRAJECTORIES`]. A
//! chunk accumulates its trajectories in index order into compensated
//! per-time-bin sums; chunks are then merged in chunk order. The result is
//! bit-identical however the chunks are scheduled, so a parallel driver only
//! has to evaluate chunks independently and merge them in order.

use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)] // shadowed by inherent f64 methods when std is linked
use num_traits::Float;

use num_complex::Complex64;

use super::{BlochState, Propagator, SimParams};
use crate::error::{Error, Result};
use crate::rng::{IncrementStream, StreamFamily};

pub const CHUNK_TRAJECTORIES: usize = 256;

/// Neumaier-compensated sum.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
struct Compensated {
    sum: f64,
    carry: f64,
}

impl Compensated {
    #[inline]
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn merge(&mut self, other: &Compensated) {
        self.add(other.sum);
        self.add(other.carry);
    }

    fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

/// Per-time-bin first and second moment sums of `K` observables.
#[derive(Debug, Clone, PartialEq)]
pub struct ChunkMoments<const K: usize> {
    count: usize,
    first: Vec<[Compensated; K]>,
    second: Vec<[Compensated; K]>,
}

impl<const K: usize> ChunkMoments<K> {
    fn new(bins: usize) -> Self {
        ChunkMoments {
            count: 0,
            first: vec![[Compensated::default(); K]; bins],
            second: vec![[Compensated::default(); K]; bins],
        }
    }

    #[inline]
    fn record(&mut self, bin: usize, values: [f64; K]) {
        for (k, v) in values.into_iter().enumerate() {
            self.first[bin][k].add(v);
            self.second[bin][k].add(v * v);
        }
    }

    /// Folds `other` into `self`; callers merge in ascending chunk order.
    pub fn merge(&mut self, other: &ChunkMoments<K>) {
        self.count += other.count;
        for (a, b) in self.first.iter_mut().zip(&other.first) {
            for k in 0..K {
                a[k].merge(&b[k]);
            }
        }
        for (a, b) in self.second.iter_mut().zip(&other.second) {
            for k in 0..K {
                a[k].merge(&b[k]);
            }
        }
    }

    pub fn count(&self) -> usize {
        self.count
    }

    // (mean, standard error of the mean) per bin and observable.
    fn finish(&self) -> (Vec<[f64; K]>, Vec<[f64; K]>) {
        let n = self.count as f64;
        let mut means = Vec::with_capacity(self.first.len());
        let mut sems = Vec::with_capacity(self.first.len());
        for (s1, s2) in self.first.iter().zip(&self.second) {
            let mut m = [0.0; K];
            let mut e = [0.0; K];
            for k in 0..K {
                let sum = s1[k].value();
                m[k] = sum / n;
                if self.count > 1 {
                    let var = ((s2[k].value() - sum * m[k]) / (n - 1.0)).max(0.0);
                    e[k] = (var / n).sqrt();
                }
            }
            means.push(m);
            sems.push(e);
        }
        (means, sems)
    }
}

pub fn chunk_count(n_traj: usize) -> usize {
    n_traj.div_ceil(CHUNK_TRAJECTORIES)
}

fn chunk_range(params: &SimParams, chunk: usize) -> core::ops::Range<usize> {
    let start = chunk * CHUNK_TRAJECTORIES;
    start..params.n_traj.min(start + CHUNK_TRAJECTORIES)
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleStats {
    pub times: Vec<f64>,
    pub mean_sx: Vec<f64>,
    pub mean_sy: Vec<f64>,
    pub mean_sz: Vec<f64>,
    pub sem_sx: Vec<f64>,
    pub sem_sy: Vec<f64>,
    pub sem_sz: Vec<f64>,
    pub n_traj: usize,
}

/// Simulates the trajectories of one chunk of the Bloch ensemble.
pub fn bloch_chunk(params: &SimParams, init: &BlochState, chunk: usize) -> Result<ChunkMoments<3>> {
    let n_steps = params.n_steps();
    let prop = Propagator::new(params, true);
    let mut acc = ChunkMoments::new(n_steps + 1);
    for traj in chunk_range(params, chunk) {
        let mut noise = IncrementStream::new(params.seed, StreamFamily::Bloch, traj as u64, params.dt);
        let mut v = [init.sx, init.sy, init.sz];
        acc.record(0, v);
        for k in 1..=n_steps {
            let (dwx, dwz) = noise.next_increments();
            v = prop.advance(&v, dwx, dwz);
            if !v.iter().all(|x| x.is_finite()) {
                return Err(Error::NumericalFailure { trajectory: traj, step: k });
            }
            acc.record(k, v);
        }
        acc.count += 1;
    }
    Ok(acc)
}

pub fn finish_bloch(params: &SimParams, moments: &ChunkMoments<3>) -> EnsembleStats {
    let (means, sems) = moments.finish();
    let col = |v: &[[f64; 3]], k: usize| v.iter().map(|r| r[k]).collect::<Vec<_>>();
    EnsembleStats {
        times: params.times().collect(),
        mean_sx: col(&means, 0),
        mean_sy: col(&means, 1),
        mean_sz: col(&means, 2),
        sem_sx: col(&sems, 0),
        sem_sy: col(&sems, 1),
        sem_sz: col(&sems, 2),
        n_traj: moments.count,
    }
}

/// Merges per-chunk results given in ascending chunk order. Any parallel
/// driver that collects chunks by index and passes them here reproduces the
/// sequential result bit for bit, including which error is reported.
pub fn reduce_chunks<const K: usize>(
    params: &SimParams,
    chunks: impl IntoIterator<Item = Result<ChunkMoments<K>>>,
) -> Result<ChunkMoments<K>> {
    let mut total = ChunkMoments::new(params.n_steps() + 1);
    for chunk in chunks {
        total.merge(&chunk?);
    }
    Ok(total)
}

fn reduce_sequential<const K: usize>(
    params: &SimParams,
    chunk: impl FnMut(usize) -> Result<ChunkMoments<K>>,
) -> Result<ChunkMoments<K>> {
    reduce_chunks(params, (0..chunk_count(params.n_traj)).map(chunk))
}

/// Ensemble means and standard errors of the Bloch vector on the time grid.
pub fn run_ensemble(params: &SimParams, init: &BlochState) -> Result<EnsembleStats> {
    params.validate()?;
    init.validate()?;
    let total = reduce_sequential(params, |c| bloch_chunk(params, init, c))?;
    Ok(finish_bloch(params, &total))
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationStats {
    pub tau: Vec<f64>,
    pub mean: Vec<Complex64>,
    pub sem_re: Vec<f64>,
    pub sem_im: Vec<f64>,
    pub n_traj: usize,
}

/// One chunk of the two-time correlation ensemble.
///
/// The pair X = ⟨σx(t+τ)σ₋(t)⟩, Y = ⟨σy(t+τ)σ₋(t)⟩ and the σz partner obey
/// the Bloch equations in τ without the ground-state pump, because
/// E⟨σ₋(t)⟩ = 0 for either energy eigenstate. Real and imaginary parts are
/// propagated with the same noise.
pub fn correlation_chunk(params: &SimParams, c0: Complex64, chunk: usize) -> Result<ChunkMoments<2>> {
    let n_steps = params.n_steps();
    let prop = Propagator::new(params, false);
    let mut acc = ChunkMoments::new(n_steps + 1);
    // X(0) = C0, Y(0) = −i C0, Z(0) = 0
    let re0 = [c0.re, c0.im, 0.0];
    let im0 = [c0.im, -c0.re, 0.0];
    let observe = |re: &[f64; 3], im: &[f64; 3]| [0.5 * (re[0] - im[1]), 0.5 * (im[0] + re[1])];
    for traj in chunk_range(params, chunk) {
        let mut noise = IncrementStream::new(params.seed, StreamFamily::Correlation, traj as u64, params.dt);
        let (mut re, mut im) = (re0, im0);
        acc.record(0, observe(&re, &im));
        for k in 1..=n_steps {
            let (dwx, dwz) = noise.next_increments();
            re = prop.advance(&re, dwx, dwz);
            im = prop.advance(&im, dwx, dwz);
            if !re.iter().chain(&im).all(|x| x.is_finite()) {
                return Err(Error::NumericalFailure { trajectory: traj, step: k });
            }
            acc.record(k, observe(&re, &im));
        }
        acc.count += 1;
    }
    Ok(acc)
}

pub fn finish_correlation(params: &SimParams, moments: &ChunkMoments<2>) -> CorrelationStats {
    let (means, sems) = moments.finish();
    CorrelationStats {
        tau: params.times().collect(),
        mean: means.iter().map(|m| Complex64::new(m[0], m[1])).collect(),
        sem_re: sems.iter().map(|e| e[0]).collect(),
        sem_im: sems.iter().map(|e| e[1]).collect(),
        n_traj: moments.count,
    }
}

/// Stochastic estimate of E⟨σ₊(t+τ)σ₋(t)⟩ on τ = 0, dt, …, t_max.
pub fn autocorrelation_sde(params: &SimParams, c0: Complex64) -> Result<CorrelationStats> {
    params.validate()?;
    let total = reduce_sequential(params, |c| correlation_chunk(params, c0, c))?;
    Ok(finish_correlation(params, &total))
}

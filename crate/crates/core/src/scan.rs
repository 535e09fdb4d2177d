//! Deterministic segmented range scans.
//!
//! A range is cut into fixed-size segments; each segment is mapped
//! independently (possibly on a worker pool) and the results come back in
//! segment order, so any reduction folded over them is independent of
//! scheduling and thread count.

use rayon::prelude::*;

use crate::error::{Error, Result};

pub const DEFAULT_SEGMENT_SIZE: u64 = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScanConfig {
    pub threads: usize,
    pub segment_size: u64,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig {
            threads: std::thread::available_parallelism().map_or(1, |n| n.get()),
            segment_size: DEFAULT_SEGMENT_SIZE,
        }
    }
}

impl ScanConfig {
    pub fn new(threads: usize, segment_size: u64) -> Result<Self> {
        if threads == 0 {
            return Err(Error::domain("threads", "must be at least 1"));
        }
        if segment_size == 0 {
            return Err(Error::domain("segment size", "must be at least 1"));
        }
        Ok(ScanConfig {
            threads,
            segment_size,
        })
    }

    pub fn single_threaded() -> Self {
        ScanConfig {
            threads: 1,
            ..Self::default()
        }
    }

    /// Splits `[lo, hi)` into segments of `segment_size`.
    pub fn segments(&self, lo: u64, hi: u64) -> Vec<(u64, u64)> {
        let mut out = Vec::new();
        let mut a = lo;
        while a < hi {
            let b = a.saturating_add(self.segment_size).min(hi);
            out.push((a, b));
            a = b;
        }
        out
    }

    /// Maps every segment of `[lo, hi)` and returns the results in segment
    /// order.
    pub fn map_segments<T, F>(&self, lo: u64, hi: u64, f: F) -> Result<Vec<T>>
    where
        T: Send,
        F: Fn(u64, u64) -> T + Sync + Send,
    {
        let segments = self.segments(lo, hi);
        if self.threads == 1 || segments.len() <= 1 {
            return Ok(segments.into_iter().map(|(a, b)| f(a, b)).collect());
        }
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(self.threads)
            .build()
            .map_err(|e| Error::capacity("worker pool", e.to_string()))?;
        Ok(pool.install(|| segments.into_par_iter().map(|(a, b)| f(a, b)).collect()))
    }

    /// Like [`map_segments`](Self::map_segments) for fallible segment work;
    /// the first error in segment order wins.
    pub fn try_map_segments<T, F>(&self, lo: u64, hi: u64, f: F) -> Result<Vec<T>>
    where
        T: Send,
        F: Fn(u64, u64) -> Result<T> + Sync + Send,
    {
        self.map_segments(lo, hi, f)?.into_iter().collect()
    }
}

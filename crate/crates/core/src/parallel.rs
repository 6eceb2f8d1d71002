//! Worker budget and guided loop scheduling.
//!
//! A [`Workers`] value owns a fixed number of threads. Loops over node ranges
//! hand out chunks of decreasing size from a shared cursor, so that workers
//! which pick up high-degree nodes early receive fewer nodes later on.

use std::fmt;
use std::sync::atomic::{AtomicU64, AtomicUsize, Ordering};
use std::sync::Arc;

use rayon::{ThreadPool, ThreadPoolBuilder};

use crate::error::{Error, Result};

/// Smallest chunk handed out by the guided scheduler.
const MIN_CHUNK: usize = 16;

#[derive(Clone)]
pub struct Workers {
    count: usize,
    pool: Option<Arc<ThreadPool>>,
}

impl fmt::Debug for Workers {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Workers").field("count", &self.count).finish()
    }
}

impl Workers {
    pub fn new(count: usize) -> Result<Self> {
        if count == 0 {
            return Err(Error::InvalidParameter(
                "worker count must be at least 1".into(),
            ));
        }
        if count == 1 {
            return Ok(Self::sequential());
        }
        let pool = ThreadPoolBuilder::new()
            .num_threads(count)
            .thread_name(|i| format!("comdet-worker-{i}"))
            .build()
            .map_err(|e| Error::InvalidParameter(format!("cannot start worker pool: {e}")))?;
        Ok(Self {
            count,
            pool: Some(Arc::new(pool)),
        })
    }

    /// A single worker running on the calling thread; loops visit indices in
    /// ascending order.
    pub fn sequential() -> Self {
        Self {
            count: 1,
            pool: None,
        }
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn is_sequential(&self) -> bool {
        self.count == 1
    }

    /// Runs `op` inside this worker pool so rayon iterators use its threads.
    pub fn install<R: Send>(&self, op: impl FnOnce() -> R + Send) -> R {
        match &self.pool {
            Some(pool) => pool.install(op),
            None => op(),
        }
    }

    /// Applies `f` to every index in `0..len` exactly once.
    pub fn for_each_guided<F>(&self, len: usize, f: F)
    where
        F: Fn(usize) + Sync,
    {
        self.for_each_guided_with(len, || (), |_, i| f(i));
    }

    /// Like [`Workers::for_each_guided`], with per-worker scratch state built
    /// by `init` once per worker.
    pub fn for_each_guided_with<S, I, F>(&self, len: usize, init: I, f: F)
    where
        I: Fn() -> S + Sync,
        F: Fn(&mut S, usize) + Sync,
    {
        let pool = match &self.pool {
            Some(pool) if len > 1 => pool,
            _ => {
                let mut scratch = init();
                for i in 0..len {
                    f(&mut scratch, i);
                }
                return;
            }
        };
        let cursor = AtomicUsize::new(0);
        let workers = self.count;
        pool.scope(|scope| {
            for _ in 0..workers {
                scope.spawn(|_| {
                    let mut scratch = init();
                    while let Some(range) = next_guided_chunk(&cursor, len, workers) {
                        for i in range {
                            f(&mut scratch, i);
                        }
                    }
                });
            }
        });
    }

    /// Splits the budget for `parts` concurrent tasks. Returns the number of
    /// tasks that may run at once and the worker budget of each.
    pub fn split(&self, parts: usize) -> (usize, usize) {
        let concurrent = parts.clamp(1, self.count);
        (concurrent, (self.count / concurrent).max(1))
    }
}

fn next_guided_chunk(
    cursor: &AtomicUsize,
    len: usize,
    workers: usize,
) -> Option<std::ops::Range<usize>> {
    let mut start = cursor.load(Ordering::Relaxed);
    loop {
        if start >= len {
            return None;
        }
        let remaining = len - start;
        let chunk = (remaining / (2 * workers)).max(MIN_CHUNK).min(remaining);
        match cursor.compare_exchange_weak(
            start,
            start + chunk,
            Ordering::Relaxed,
            Ordering::Relaxed,
        ) {
            Ok(_) => return Some(start..start + chunk),
            Err(current) => start = current,
        }
    }
}

/// `f64` cell supporting concurrent accumulation.
#[derive(Default)]
pub struct AtomicF64(AtomicU64);

impl AtomicF64 {
    pub fn new(value: f64) -> Self {
        Self(AtomicU64::new(value.to_bits()))
    }

    pub fn load(&self) -> f64 {
        f64::from_bits(self.0.load(Ordering::Relaxed))
    }

    pub fn store(&self, value: f64) {
        self.0.store(value.to_bits(), Ordering::Relaxed);
    }

    pub fn fetch_add(&self, delta: f64) {
        let _ = self
            .0
            .fetch_update(Ordering::Relaxed, Ordering::Relaxed, |bits| {
                Some((f64::from_bits(bits) + delta).to_bits())
            });
    }
}

impl fmt::Debug for AtomicF64 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.load().fmt(f)
    }
}

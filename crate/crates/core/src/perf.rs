//! Wall-clock comparison of recursive inversion against extended Euclid.

use std::time::{Duration, Instant};

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::inv::{self, OrderMemo};
use crate::record::Record;
use crate::ring::{self, MersenneRing};

/// Each timed run repeats the call until it spans at least this long, so
/// microsecond calls are not lost in timer resolution.
const MIN_RUN: Duration = Duration::from_millis(2);

/// Median over `runs` runs of the per-call time of `f`. The last result is
/// returned with it.
pub fn median_time<T>(runs: usize, mut f: impl FnMut() -> Result<T>) -> Result<(Duration, T)> {
    if runs == 0 {
        return Err(Error::domain("need at least one run"));
    }
    let start = Instant::now();
    let mut last = f()?;
    let once = start.elapsed().max(Duration::from_nanos(1));
    let reps = (MIN_RUN.as_nanos() / once.as_nanos()).clamp(1, 100_000) as u32;
    let mut times = Vec::with_capacity(runs);
    for _ in 0..runs {
        let start = Instant::now();
        for _ in 0..reps {
            last = f()?;
        }
        times.push(start.elapsed() / reps);
    }
    times.sort();
    Ok((times[runs / 2], last))
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub d: BigUint,
    pub n: u64,
    pub recursive: Duration,
    pub euclid: Duration,
    pub trace_len: usize,
}

impl BenchRow {
    pub fn speedup(&self) -> f64 {
        self.euclid.as_secs_f64() / self.recursive.as_secs_f64().max(1e-12)
    }

    pub fn to_record(&self) -> Record {
        Record::new()
            .with("d", &self.d)
            .with("n", self.n)
            .with("recursive_ns", self.recursive.as_nanos())
            .with("euclid_ns", self.euclid.as_nanos())
            .with("speedup", format!("{:.2}", self.speedup()))
            .with("steps", self.trace_len)
    }
}

/// Times both methods at one `n` and checks they agree. With `amortized`
/// the order of 2 is computed before the clock starts.
pub fn compare(d: &BigUint, n: u64, runs: usize, amortized: bool) -> Result<BenchRow> {
    inv::check_invertible(d, n)?;
    let mut warm = OrderMemo::new();
    if amortized {
        inv::invert_with(d, n, &mut warm)?;
    }
    let (recursive, fast) = median_time(runs, || {
        let mut memo = warm.clone();
        inv::invert_with(d, n, &mut memo)
    })?;
    let ring = MersenneRing::new(n)?;
    let (euclid, slow) = median_time(runs, || ring::euclid_inverse(d, &ring))?;
    if fast.value != slow {
        return Err(Error::invariant(format!("methods disagree at d={d}, n={n}")));
    }
    Ok(BenchRow { d: d.clone(), n, recursive, euclid, trace_len: fast.trace.len() })
}

/// `compare` at `n = step, 2 step, ...` up to `nmax`, skipping `n` where `d`
/// is not invertible.
pub fn sweep(d: &BigUint, nmax: u64, step: u64, runs: usize, amortized: bool) -> Result<Vec<BenchRow>> {
    if step == 0 {
        return Err(Error::domain("step must be positive"));
    }
    let mut rows = Vec::new();
    for n in (step..=nmax).step_by(step as usize) {
        match compare(d, n, runs, amortized) {
            Ok(row) => rows.push(row),
            Err(Error::NotInvertible { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    Ok(rows)
}

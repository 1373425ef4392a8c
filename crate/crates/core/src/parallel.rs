use rayon::prelude::*;

use crate::error::{Error, Result};

/// Number of worker threads the machine offers, at least 1.
pub fn available_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

/// Maps `job` over `tasks` on a pool of `workers` threads.
///
/// Results come back in task order regardless of scheduling, so the output
/// is identical to a serial run. If any job fails, the error of the
/// earliest failing task is returned.
pub fn run_parallel<T, R, F>(tasks: &[T], workers: usize, job: F) -> Result<Vec<R>>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> Result<R> + Sync + Send,
{
    if workers == 0 {
        return Err(Error::Config("worker count must be at least 1".into()));
    }
    let results: Vec<Result<R>> = if workers == 1 || tasks.len() < 2 {
        tasks.iter().map(&job).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;
        pool.install(|| tasks.par_iter().map(&job).collect())
    };
    results.into_iter().collect()
}

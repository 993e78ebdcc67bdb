use adesieve_core::sieve::Executor;
use rayon::prelude::*;

/// Worker pool handed to the core kernels.
pub struct Pool {
    pool: rayon::ThreadPool,
}

impl Pool {
    /// `threads = 0` means one per available core.
    pub fn new(threads: usize) -> Result<Self, rayon::ThreadPoolBuildError> {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build()?;
        Ok(Pool { pool })
    }
}

impl Executor for Pool {
    fn threads(&self) -> usize {
        self.pool.current_num_threads()
    }

    fn map<T, F>(&self, tasks: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        self.pool.install(|| (0..tasks).into_par_iter().map(f).collect())
    }
}

//! Worker-pool abstraction over the per-source loops.
//!
//! With the `parallel` feature (default) work is spread over a rayon pool;
//! without it every variant runs on the calling thread. Callers must supply an
//! associative and commutative `reduce` so results do not depend on the split.

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Workers {
    /// Rayon's global pool.
    #[default]
    Auto,
    Sequential,
    /// A dedicated pool of this many threads.
    Threads(usize),
}

impl Workers {
    pub fn from_count(count: usize) -> Self {
        match count {
            0 => Workers::Auto,
            1 => Workers::Sequential,
            n => Workers::Threads(n),
        }
    }
}

pub(crate) fn map_reduce<T, Id, M, R>(
    len: usize,
    workers: Workers,
    identity: Id,
    map: M,
    reduce: R,
) -> T
where
    T: Send,
    Id: Fn() -> T + Sync + Send,
    M: Fn(usize) -> T + Sync + Send,
    R: Fn(T, T) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        let run = || {
            (0..len)
                .into_par_iter()
                .map(&map)
                .reduce(&identity, &reduce)
        };
        match workers {
            Workers::Sequential => {}
            Workers::Auto => return run(),
            Workers::Threads(n) => {
                let pool = rayon::ThreadPoolBuilder::new()
                    .num_threads(n.max(1))
                    .build()
                    .expect("failed to build worker pool");
                return pool.install(run);
            }
        }
    }
    #[cfg(not(feature = "parallel"))]
    let _ = workers;
    (0..len).map(map).fold(identity(), reduce)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_modes_agree() {
        for workers in [Workers::Auto, Workers::Sequential, Workers::Threads(3)] {
            let sum = map_reduce(1000, workers, || 0u64, |i| i as u64, |a, b| a + b);
            assert_eq!(sum, 499_500);
        }
    }
}

//! Deterministic fan-out over worker threads.
//!
//! Work is split into contiguous index chunks and the results are
//! reassembled in index order, so the output is identical for any worker
//! count, including 1.

use std::thread;

/// Applies `f` to every index in `0..len` and returns the results in
/// index order. `workers` is clamped to `1..=len`.
pub fn par_map_indices<R, F>(len: usize, workers: usize, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync,
{
    let workers = workers.max(1).min(len.max(1));
    if workers == 1 {
        return (0..len).map(f).collect();
    }
    let chunk = len.div_ceil(workers);
    let chunks: Vec<Vec<R>> = thread::scope(|scope| {
        let f = &f;
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let start = w * chunk;
                let end = ((w + 1) * chunk).min(len);
                scope.spawn(move || (start..end).map(f).collect::<Vec<R>>())
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("worker panicked"))
            .collect()
    });
    chunks.into_iter().flatten().collect()
}

/// Applies `f` to every item of `items`, in index order.
pub fn par_map<T, R, F>(items: &[T], workers: usize, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync,
{
    par_map_indices(items.len(), workers, |i| f(&items[i]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn results_are_independent_of_worker_count() {
        let serial = par_map_indices(1000, 1, |i| i * i);
        for workers in [2, 3, 7, 64] {
            assert_eq!(par_map_indices(1000, workers, |i| i * i), serial);
        }
    }

    #[test]
    fn empty_and_oversubscribed_inputs() {
        assert!(par_map_indices(0, 4, |i| i).is_empty());
        assert_eq!(par_map_indices(3, 100, |i| i), vec![0, 1, 2]);
    }
}

//! Indexed map over a work range, parallel when the `parallel` feature is on.
//!
//! Results always come back in index order, so any fold over them is
//! deterministic regardless of worker count or scheduling.

#[cfg(feature = "parallel")]
pub fn par_map_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    use rayon::prelude::*;
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn par_map_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    seq_map_indexed(n, f)
}

/// Sequential reference path, kept callable under every feature set so the
/// bench suite can compare the two directly.
pub fn seq_map_indexed<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    (0..n).map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parallel_and_sequential_agree_in_order() {
        let a = par_map_indexed(1000, |i| i * i);
        let b = seq_map_indexed(1000, |i| i * i);
        assert_eq!(a, b);
    }
}

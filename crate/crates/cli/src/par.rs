use rayon::prelude::*;

/// `f(0), …, f(n−1)` in index order, on the rayon pool unless `serial`.
///
/// Each call must depend only on its index, so both paths give identical
/// results.
pub fn map_indices<T, F>(serial: bool, n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    if serial {
        (0..n).map(f).collect()
    } else {
        (0..n).into_par_iter().map(f).collect()
    }
}

/// Same as [`map_indices`] over the items of a slice.
pub fn map_items<I, T, F>(serial: bool, items: &[I], f: F) -> Vec<T>
where
    I: Sync,
    T: Send,
    F: Fn(&I) -> T + Sync + Send,
{
    map_indices(serial, items.len(), |i| f(&items[i]))
}

//! Data-parallel helpers with a sequential fallback.
//!
//! With the `parallel` feature (on by default) per-site work runs on the
//! rayon pool; without it, or with [`Strategy::Sequential`], it runs in a
//! plain loop. Both produce results in site order.

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Strategy {
    Sequential,
    #[default]
    Parallel,
}

impl Strategy {
    /// Whether parallel execution is actually available in this build.
    pub fn effective(self) -> Strategy {
        if cfg!(feature = "parallel") {
            self
        } else {
            Strategy::Sequential
        }
    }
}

/// Apply `f` to every site and concatenate the outputs in site order.
pub fn flat_map_sites<T, F>(sites: &[usize], strategy: Strategy, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> Vec<T> + Sync + Send,
{
    match strategy.effective() {
        Strategy::Sequential => sites.iter().flat_map(|&s| f(s)).collect(),
        Strategy::Parallel => parallel_flat_map(sites, f),
    }
}

/// Apply `f` to every item, keeping the input order.
pub fn map_items<I, T, F>(items: &[I], strategy: Strategy, f: F) -> Vec<T>
where
    I: Sync,
    T: Send,
    F: Fn(&I) -> T + Sync + Send,
{
    match strategy.effective() {
        Strategy::Sequential => items.iter().map(f).collect(),
        Strategy::Parallel => parallel_map(items, f),
    }
}

#[cfg(feature = "parallel")]
fn parallel_flat_map<T: Send, F: Fn(usize) -> Vec<T> + Sync + Send>(sites: &[usize], f: F) -> Vec<T> {
    use rayon::prelude::*;
    let chunks: Vec<Vec<T>> = sites.par_iter().map(|&s| f(s)).collect();
    chunks.into_iter().flatten().collect()
}

#[cfg(not(feature = "parallel"))]
fn parallel_flat_map<T: Send, F: Fn(usize) -> Vec<T> + Sync + Send>(sites: &[usize], f: F) -> Vec<T> {
    sites.iter().flat_map(|&s| f(s)).collect()
}

#[cfg(feature = "parallel")]
fn parallel_map<I: Sync, T: Send, F: Fn(&I) -> T + Sync + Send>(items: &[I], f: F) -> Vec<T> {
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn parallel_map<I: Sync, T: Send, F: Fn(&I) -> T + Sync + Send>(items: &[I], f: F) -> Vec<T> {
    items.iter().map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_is_preserved() {
        let sites: Vec<usize> = (0..100).collect();
        let f = |s: usize| vec![s, s * 2];
        let a = flat_map_sites(&sites, Strategy::Sequential, f);
        let b = flat_map_sites(&sites, Strategy::Parallel, f);
        assert_eq!(a, b);
        assert_eq!(
            map_items(&sites, Strategy::Parallel, |x| x + 1),
            map_items(&sites, Strategy::Sequential, |x| x + 1)
        );
    }
}

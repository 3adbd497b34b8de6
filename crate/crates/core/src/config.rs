//! Enumeration caps and the execution mode for batch evaluations.

/// How batch evaluations (carrier filters, audits, cover construction) run.
///
/// `Parallel` uses rayon when the `parallel` feature is on and the rayon pool
/// has more than one thread, and runs the sequential path otherwise. Results are identical in both modes:
/// every parallel collect preserves input order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    Parallel,
}

impl Default for Exec {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Exec::Parallel
        } else {
            Exec::Sequential
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Config {
    /// Maximum number of values any single carrier enumeration may produce.
    pub carrier_cap: u128,
    /// Maximum number of generators handed to the free-frame oracle.
    pub free_frame_cap: usize,
    /// Maximum size of a user-supplied frame.
    pub frame_cap: usize,
    /// Maximum number of C-ideals a flat site may present.
    pub site_frame_cap: usize,
    /// Frames up to this size get the exhaustive O(n³) distributivity check.
    pub distributivity_check_cap: usize,
    pub exec: Exec,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            carrier_cap: 1 << 20,
            free_frame_cap: 5,
            frame_cap: 64,
            site_frame_cap: 8192,
            distributivity_check_cap: 256,
            exec: Exec::default(),
        }
    }
}

impl Config {
    pub fn with_exec(mut self, exec: Exec) -> Self {
        self.exec = exec;
        self
    }

    pub(crate) fn check_carrier(&self, what: &str, estimate: Option<u128>) -> crate::Result<()> {
        match estimate {
            Some(n) if n <= self.carrier_cap => Ok(()),
            other => Err(crate::Error::cap(what, other, self.carrier_cap)),
        }
    }
}

impl Exec {
    #[cfg(feature = "parallel")]
    fn threaded(self) -> bool {
        self == Exec::Parallel && rayon::current_num_threads() > 1
    }

    pub fn map<T, U, F>(self, items: &[T], f: F) -> Vec<U>
    where
        T: Sync,
        U: Send,
        F: Fn(&T) -> U + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel if self.threaded() => {
                use rayon::prelude::*;
                items.par_iter().map(f).collect()
            }
            _ => items.iter().map(f).collect(),
        }
    }

    pub fn filter<T, F>(self, items: &[T], f: F) -> Vec<T>
    where
        T: Sync + Send + Clone,
        F: Fn(&T) -> bool + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel if self.threaded() => {
                use rayon::prelude::*;
                items.par_iter().filter(|x| f(x)).cloned().collect()
            }
            _ => items.iter().filter(|x| f(x)).cloned().collect(),
        }
    }

    /// Maps over `0..n` and keeps the first `Some` in index order.
    pub fn find_first<U, F>(self, n: usize, f: F) -> Option<U>
    where
        U: Send,
        F: Fn(usize) -> Option<U> + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel if self.threaded() => {
                use rayon::prelude::*;
                (0..n).into_par_iter().find_map_first(f)
            }
            _ => (0..n).find_map(f),
        }
    }

    pub fn range_map<U, F>(self, n: usize, f: F) -> Vec<U>
    where
        U: Send,
        F: Fn(usize) -> U + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Exec::Parallel if self.threaded() => {
                use rayon::prelude::*;
                (0..n).into_par_iter().map(f).collect()
            }
            _ => (0..n).map(f).collect(),
        }
    }
}

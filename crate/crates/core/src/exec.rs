//! Data-parallel helpers with a runtime sequential switch.
//!
//! With the `parallel` feature the helpers fan out over rayon's pool unless the
//! calling thread is inside [`Execution::Sequential`]`.install`. Without the
//! feature every path is sequential.

use std::cell::Cell;

use serde::Serialize;

/// How independent work items are scheduled.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

thread_local! {
    static FORCE_SEQUENTIAL: Cell<bool> = const { Cell::new(false) };
}

impl Execution {
    /// Runs `f` with this mode governing every helper called on this thread.
    pub fn install<R>(self, f: impl FnOnce() -> R) -> R {
        let prev = FORCE_SEQUENTIAL.with(|c| c.replace(self == Execution::Sequential));
        let out = f();
        FORCE_SEQUENTIAL.with(|c| c.set(prev));
        out
    }

    /// The mode in effect on the calling thread.
    pub fn current() -> Self {
        if !cfg!(feature = "parallel") || FORCE_SEQUENTIAL.with(Cell::get) {
            Execution::Sequential
        } else {
            Execution::Parallel
        }
    }
}

/// Maps `f` over `items`, preserving order.
pub fn map<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if Execution::current() == Execution::Parallel {
        use rayon::prelude::*;
        return items.par_iter().map(f).collect();
    }
    items.iter().map(f).collect()
}

/// Maps `f` over an index range, preserving order.
pub fn map_range<R, F>(range: std::ops::RangeInclusive<usize>, f: F) -> Vec<R>
where
    R: Send,
    F: Fn(usize) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if Execution::current() == Execution::Parallel {
        use rayon::prelude::*;
        return range.into_par_iter().map(f).collect();
    }
    range.map(f).collect()
}

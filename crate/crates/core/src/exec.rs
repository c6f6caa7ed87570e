//! Data-parallel helpers with a sequential fallback.
//!
//! Everything here is a thin shim over rayon when the `parallel` feature is
//! active and over plain iterators otherwise, so the rest of the crate never
//! mentions rayon directly.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Map a vector, consuming it.
#[cfg(feature = "parallel")]
pub fn map_vec<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    T: Send,
    U: Send,
    F: Fn(T) -> U + Sync + Send,
{
    items.into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_vec<T, U, F>(items: Vec<T>, f: F) -> Vec<U>
where
    F: Fn(T) -> U,
{
    items.into_iter().map(f).collect()
}

/// Apply `f` to every marked slot of `items`.
#[cfg(feature = "parallel")]
pub fn for_each_marked<T, F>(items: &mut [T], marked: &[bool], f: F)
where
    T: Send,
    F: Fn(usize, &mut T) + Sync,
{
    items
        .par_iter_mut()
        .enumerate()
        .filter(|(i, _)| marked[*i])
        .for_each(|(i, t)| f(i, t));
}

#[cfg(not(feature = "parallel"))]
pub fn for_each_marked<T, F>(items: &mut [T], marked: &[bool], f: F)
where
    F: Fn(usize, &mut T),
{
    for (i, t) in items.iter_mut().enumerate() {
        if marked[i] {
            f(i, t);
        }
    }
}

/// Name of the active execution mode, used to label benchmark groups.
pub fn mode() -> &'static str {
    if cfg!(feature = "parallel") {
        "parallel"
    } else {
        "sequential"
    }
}

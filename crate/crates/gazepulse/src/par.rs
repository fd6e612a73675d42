//! Data-parallel dispatch helpers.
//!
//! Heavy inner loops (convolution kernels, frame rendering, batch evaluation)
//! are written against these helpers so the whole crate can be built either
//! with the rayon-backed `parallel` feature (default) or as a purely
//! sequential binary. The `_seq` variants are always compiled; benches compare
//! both paths directly.
//!
//! Parallelism is only ever applied across disjoint output regions, so
//! results are bit-identical regardless of thread count.

/// Map `0..n` to a `Vec`, sequentially.
pub fn map_collect_seq<T, F>(n: usize, f: F) -> Vec<T>
where
    F: Fn(usize) -> T,
{
    (0..n).map(f).collect()
}

/// Map `0..n` to a `Vec` using the rayon pool when available.
#[cfg(feature = "parallel")]
pub fn map_collect_par<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    use rayon::prelude::*;
    (0..n).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn map_collect_par<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    map_collect_seq(n, f)
}

/// Map `0..n` to a `Vec`, parallel when the feature is on.
pub fn map_collect<T, F>(n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    map_collect_par(n, f)
}

/// Run `f(i, chunk_i)` over equally sized disjoint chunks of `data`,
/// sequentially. The final chunk may be shorter.
pub fn for_each_chunk_mut_seq<T, F>(data: &mut [T], chunk: usize, f: F)
where
    F: Fn(usize, &mut [T]) + Sync,
{
    for (i, c) in data.chunks_mut(chunk).enumerate() {
        f(i, c);
    }
}

/// Chunked mutation with rayon when available.
#[cfg(feature = "parallel")]
pub fn for_each_chunk_mut_par<T, F>(data: &mut [T], chunk: usize, f: F)
where
    T: Send,
    F: Fn(usize, &mut [T]) + Sync,
{
    use rayon::prelude::*;
    data.par_chunks_mut(chunk).enumerate().for_each(|(i, c)| f(i, c));
}

#[cfg(not(feature = "parallel"))]
pub fn for_each_chunk_mut_par<T, F>(data: &mut [T], chunk: usize, f: F)
where
    T: Send,
    F: Fn(usize, &mut [T]) + Sync,
{
    for_each_chunk_mut_seq(data, chunk, f);
}

/// Chunked mutation, parallel when the feature is on.
pub fn for_each_chunk_mut<T, F>(data: &mut [T], chunk: usize, f: F)
where
    T: Send,
    F: Fn(usize, &mut [T]) + Sync,
{
    for_each_chunk_mut_par(data, chunk, f);
}

/// Mutate two slices in lockstep chunks: chunk `i` of `a` (size `ca`) pairs
/// with chunk `i` of `b` (size `cb`). Sequential variant.
pub fn for_each_pair_chunks_mut_seq<T, U, F>(a: &mut [T], ca: usize, b: &mut [U], cb: usize, f: F)
where
    F: Fn(usize, &mut [T], &mut [U]) + Sync,
{
    for (i, (x, y)) in a.chunks_mut(ca).zip(b.chunks_mut(cb)).enumerate() {
        f(i, x, y);
    }
}

/// Lockstep chunk mutation with rayon when available.
#[cfg(feature = "parallel")]
pub fn for_each_pair_chunks_mut<T, U, F>(a: &mut [T], ca: usize, b: &mut [U], cb: usize, f: F)
where
    T: Send,
    U: Send,
    F: Fn(usize, &mut [T], &mut [U]) + Sync,
{
    use rayon::prelude::*;
    a.par_chunks_mut(ca)
        .zip(b.par_chunks_mut(cb))
        .enumerate()
        .for_each(|(i, (x, y))| f(i, x, y));
}

#[cfg(not(feature = "parallel"))]
pub fn for_each_pair_chunks_mut<T, U, F>(a: &mut [T], ca: usize, b: &mut [U], cb: usize, f: F)
where
    T: Send,
    U: Send,
    F: Fn(usize, &mut [T], &mut [U]) + Sync,
{
    for_each_pair_chunks_mut_seq(a, ca, b, cb, f);
}

/// Run two closures, potentially on different threads.
#[cfg(feature = "parallel")]
pub fn join<A, B, RA, RB>(a: A, b: B) -> (RA, RB)
where
    A: FnOnce() -> RA + Send,
    B: FnOnce() -> RB + Send,
    RA: Send,
    RB: Send,
{
    rayon::join(a, b)
}

#[cfg(not(feature = "parallel"))]
pub fn join<A, B, RA, RB>(a: A, b: B) -> (RA, RB)
where
    A: FnOnce() -> RA + Send,
    B: FnOnce() -> RB + Send,
    RA: Send,
    RB: Send,
{
    (a(), b())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn par_matches_seq() {
        let a = map_collect_seq(100, |i| i * i);
        let b = map_collect_par(100, |i| i * i);
        assert_eq!(a, b);

        let mut x = vec![0u32; 97];
        let mut y = vec![0u32; 97];
        for_each_chunk_mut_seq(&mut x, 10, |i, c| c.iter_mut().for_each(|v| *v = i as u32));
        for_each_chunk_mut_par(&mut y, 10, |i, c| c.iter_mut().for_each(|v| *v = i as u32));
        assert_eq!(x, y);
    }
}

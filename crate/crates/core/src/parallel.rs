//! Deterministic fan-out over independent substreams.
//!
//! Work is cut into fixed-size chunks; item `i` always draws from
//! `base.substream(i)` and lands in slot `i`, so output is identical for
//! any worker count.

use std::sync::atomic::{AtomicUsize, Ordering};

use crate::numerics::rng::RandomStream;

const CHUNK: usize = 1024;

/// Evaluates `f` once per item with a private substream and collects the
/// results in index order.
pub fn batch_map<T, F>(base: &RandomStream, count: usize, threads: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize, &mut RandomStream) -> T + Sync,
{
    let workers = threads.max(1);
    if workers == 1 || count <= CHUNK {
        let mut out = Vec::with_capacity(count);
        for i in 0..count {
            let mut rng = base.substream(i as u64);
            out.push(f(i, &mut rng));
        }
        return out;
    }

    let mut slots: Vec<Option<T>> = (0..count).map(|_| None).collect();
    {
        let chunks: Vec<(usize, &mut [Option<T>])> = {
            let mut v = Vec::new();
            let mut offset = 0;
            let mut rest = slots.as_mut_slice();
            while !rest.is_empty() {
                let take = rest.len().min(CHUNK);
                let (head, tail) = rest.split_at_mut(take);
                v.push((offset, head));
                offset += take;
                rest = tail;
            }
            v
        };
        let next = AtomicUsize::new(0);
        let queue: Vec<_> = chunks.into_iter().map(std::sync::Mutex::new).collect();
        std::thread::scope(|scope| {
            for _ in 0..workers.min(queue.len()) {
                scope.spawn(|| loop {
                    let k = next.fetch_add(1, Ordering::Relaxed);
                    if k >= queue.len() {
                        break;
                    }
                    let mut guard = queue[k].lock().expect("chunk lock");
                    let (offset, slice) = &mut *guard;
                    for (local, slot) in slice.iter_mut().enumerate() {
                        let i = *offset + local;
                        let mut rng = base.substream(i as u64);
                        *slot = Some(f(i, &mut rng));
                    }
                });
            }
        });
    }
    slots.into_iter().map(|s| s.expect("all slots filled")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn output_is_independent_of_worker_count() {
        let base = RandomStream::new(314);
        let one = batch_map(&base, 5000, 1, |_, rng| rng.uniform::<f64>());
        let four = batch_map(&base, 5000, 4, |_, rng| rng.uniform::<f64>());
        assert_eq!(one, four);
    }

    #[test]
    fn items_see_distinct_streams() {
        let base = RandomStream::new(2);
        let xs = batch_map(&base, 64, 2, |_, rng| rng.uniform::<f64>());
        let mut sorted = xs.clone();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        sorted.dedup();
        assert_eq!(sorted.len(), xs.len());
    }
}

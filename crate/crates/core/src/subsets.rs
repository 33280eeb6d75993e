//! Bitmask helpers for subsets of coordinates or parties (bit `i` = element `i`).

/// Elements of `mask`, ascending.
pub fn to_indices(mask: u64) -> Vec<usize> {
    (0..64).filter(|&i| mask >> i & 1 == 1).collect()
}

pub fn from_indices(idx: &[usize]) -> u64 {
    idx.iter().fold(0, |m, &i| m | 1 << i)
}

#[inline]
pub fn full(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

#[inline]
pub fn complement(mask: u64, n: usize) -> u64 {
    !mask & full(n)
}

/// All `k`-subsets of `[0, n)` in increasing numeric order (Gosper's hack).
pub fn of_size(n: usize, k: usize) -> impl Iterator<Item = u64> {
    let limit = 1u64 << n;
    let mut next = if k > n {
        None
    } else if k == 0 {
        Some(0)
    } else {
        Some(full(k))
    };
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == 0 {
            None
        } else {
            let c = cur & cur.wrapping_neg();
            let r = cur + c;
            let nx = (((r ^ cur) >> 2) / c) | r;
            (nx < limit).then_some(nx)
        };
        Some(cur)
    })
}

/// Every subset of `[0, n)`, by increasing size.
pub fn by_size(n: usize) -> impl Iterator<Item = u64> {
    (0..=n).flat_map(move |k| of_size(n, k))
}

//! Reflection padding.

/// Maps an index from `-inf..inf` into `0..len` by bouncing off both ends
/// without repeating the edge samples (`... x2 x1 | x0 x1 x2 ... | ...`).
pub fn reflect_index(i: isize, len: usize) -> usize {
    debug_assert!(len > 0);
    if len == 1 {
        return 0;
    }
    let period = 2 * (len as isize - 1);
    let mut k = i.rem_euclid(period);
    if k >= len as isize {
        k = period - k;
    }
    k as usize
}

/// Pads a slice by reflection on both sides.
pub fn reflect_pad<T: Copy>(x: &[T], left: usize, right: usize) -> Vec<T> {
    let mut out = Vec::with_capacity(left + x.len() + right);
    for i in 0..left {
        let idx = -(left as isize) + i as isize;
        out.push(x[reflect_index(idx, x.len())]);
    }
    out.extend_from_slice(x);
    for i in 0..right {
        out.push(x[reflect_index((x.len() + i) as isize, x.len())]);
    }
    out
}

//! Word-level helpers for the fixed-width bit rows used by adjacency and
//! candidate sets.

use smallvec::SmallVec;

/// Inline storage covers parts of up to 128 vertices without allocating.
pub(crate) type Bits = SmallVec<[u64; 2]>;

#[inline]
pub(crate) fn words_for(bits: usize) -> usize {
    bits.div_ceil(64)
}

pub(crate) fn full(len: usize) -> Bits {
    let mut out: Bits = SmallVec::from_elem(u64::MAX, words_for(len));
    let tail = len % 64;
    if tail != 0 {
        if let Some(last) = out.last_mut() {
            *last = (1u64 << tail) - 1;
        }
    }
    out
}

#[inline]
pub(crate) fn test(bits: &[u64], i: usize) -> bool {
    bits[i / 64] >> (i % 64) & 1 == 1
}

#[inline]
pub(crate) fn set(bits: &mut [u64], i: usize) {
    bits[i / 64] |= 1u64 << (i % 64);
}

#[inline]
pub(crate) fn clear(bits: &mut [u64], i: usize) {
    bits[i / 64] &= !(1u64 << (i % 64));
}

#[inline]
pub(crate) fn count(bits: &[u64]) -> usize {
    bits.iter().map(|w| w.count_ones() as usize).sum()
}

#[inline]
pub(crate) fn and_assign(dst: &mut [u64], src: &[u64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d &= *s;
    }
}

#[inline]
pub(crate) fn and_count(a: &[u64], b: &[u64]) -> usize {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x & y).count_ones() as usize)
        .sum()
}

/// Number of set bits at positions `>= start`.
pub(crate) fn count_from(bits: &[u64], start: usize) -> usize {
    let w = start / 64;
    if w >= bits.len() {
        return 0;
    }
    let head = (bits[w] >> (start % 64)).count_ones() as usize;
    head + count(&bits[w + 1..])
}

/// Positions of set bits in increasing order.
pub(crate) fn ones(bits: &[u64]) -> impl Iterator<Item = usize> + '_ {
    bits.iter().enumerate().flat_map(|(wi, &word)| {
        let mut w = word;
        std::iter::from_fn(move || {
            if w == 0 {
                return None;
            }
            let tz = w.trailing_zeros() as usize;
            w &= w - 1;
            Some(wi * 64 + tz)
        })
    })
}

/// First set bit at a position `>= start`.
pub(crate) fn next_one(bits: &[u64], start: usize) -> Option<usize> {
    let mut wi = start / 64;
    if wi >= bits.len() {
        return None;
    }
    let mut w = bits[wi] & (u64::MAX << (start % 64));
    loop {
        if w != 0 {
            return Some(wi * 64 + w.trailing_zeros() as usize);
        }
        wi += 1;
        if wi == bits.len() {
            return None;
        }
        w = bits[wi];
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_masks_tail() {
        let b = full(70);
        assert_eq!(b.len(), 2);
        assert_eq!(count(&b), 70);
        assert!(test(&b, 69));
        assert_eq!(full(64)[0], u64::MAX);
    }

    #[test]
    fn scanning() {
        let mut b: Bits = SmallVec::from_elem(0, 3);
        for i in [0, 5, 63, 64, 130] {
            set(&mut b, i);
        }
        assert_eq!(ones(&b).collect::<Vec<_>>(), vec![0, 5, 63, 64, 130]);
        assert_eq!(next_one(&b, 6), Some(63));
        assert_eq!(next_one(&b, 65), Some(130));
        assert_eq!(next_one(&b, 131), None);
        assert_eq!(count_from(&b, 5), 4);
        assert_eq!(count_from(&b, 64), 2);
        clear(&mut b, 64);
        assert!(!test(&b, 64));
    }
}

//! Lazy lexicographic enumeration of k-subsets.

use smallvec::SmallVec;

use super::{Edge, EdgeSpace};

/// Cursor over the k-subsets of `{0, .., n-1}` in lexicographic order.
///
/// Unlike an [`Iterator`] it lends the current subset as a slice, so the hot
/// loops in the model and the fitters never allocate per edge.
#[derive(Debug, Clone)]
pub struct SubsetCursor {
    n: usize,
    k: usize,
    idx: SmallVec<[usize; 8]>,
    started: bool,
    done: bool,
}

impl SubsetCursor {
    pub fn new(n: usize, k: usize) -> Self {
        Self {
            n,
            k,
            idx: SmallVec::new(),
            started: false,
            done: k > n,
        }
    }

    /// Moves to the next subset and returns it, or `None` once exhausted.
    pub fn advance(&mut self) -> Option<&[usize]> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            self.idx.extend(0..self.k);
            return Some(&self.idx);
        }
        let (n, k) = (self.n, self.k);
        let mut i = k;
        loop {
            if i == 0 {
                self.done = true;
                return None;
            }
            i -= 1;
            if self.idx[i] < n - k + i {
                break;
            }
        }
        self.idx[i] += 1;
        for j in i + 1..k {
            self.idx[j] = self.idx[j - 1] + 1;
        }
        Some(&self.idx)
    }
}

/// Calls `f` on every k-subset of `{0, .., n-1}` in lexicographic order.
#[inline]
pub fn for_each_subset(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    let mut cursor = SubsetCursor::new(n, k);
    while let Some(s) = cursor.advance() {
        f(s);
    }
}

/// Streaming iterator over every edge of an [`EdgeSpace`]: ascending size,
/// lexicographic within a size.
#[derive(Debug, Clone)]
pub struct Edges<'a> {
    space: &'a EdgeSpace,
    layer: usize,
    cursor: Option<SubsetCursor>,
}

impl<'a> Edges<'a> {
    pub(super) fn new(space: &'a EdgeSpace) -> Self {
        Self {
            space,
            layer: 0,
            cursor: space
                .sizes()
                .first()
                .map(|&k| SubsetCursor::new(space.n(), k)),
        }
    }
}

impl Iterator for Edges<'_> {
    type Item = Edge;

    fn next(&mut self) -> Option<Edge> {
        loop {
            let cursor = self.cursor.as_mut()?;
            if let Some(s) = cursor.advance() {
                return Some(Edge::from_sorted_unchecked(s));
            }
            self.layer += 1;
            self.cursor = self
                .space
                .sizes()
                .get(self.layer)
                .map(|&k| SubsetCursor::new(self.space.n(), k));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::binomial;

    fn collect(n: usize, k: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        for_each_subset(n, k, |s| out.push(s.to_vec()));
        out
    }

    #[test]
    fn small_cases() {
        assert_eq!(collect(3, 2), vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
        assert_eq!(collect(4, 3).len(), 4);
        assert_eq!(collect(4, 4), vec![vec![0, 1, 2, 3]]);
        assert!(collect(3, 4).is_empty());
        assert_eq!(collect(5, 0), vec![Vec::<usize>::new()]);
    }

    /// Brute force over bitmasks: every k-subset, strictly increasing, lexicographic.
    #[test]
    fn matches_bitmask_enumeration() {
        for n in 0..=12 {
            for k in 2..=4 {
                let mut expected: Vec<Vec<usize>> = (0u32..1 << n)
                    .filter(|m| m.count_ones() as usize == k)
                    .map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect())
                    .collect();
                expected.sort();
                let got = collect(n, k);
                assert_eq!(got.len() as u128, binomial(n, k));
                assert_eq!(got, expected, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn edge_stream_counts() {
        let space = EdgeSpace::new(10, vec![2, 3]).unwrap();
        assert_eq!(space.edges().count(), 165);
        assert_eq!(space.edge_count(), 165);
        let sizes: Vec<usize> = space.edges().map(|e| e.len()).collect();
        assert!(sizes.windows(2).all(|w| w[0] <= w[1]));
        let edges: Vec<Edge> = space.edges().collect();
        assert!(edges.windows(2).all(|w| w[0] < w[1]));
    }
}

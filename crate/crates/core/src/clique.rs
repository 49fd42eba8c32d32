//! Exact maximum clique search on dense bit-vector graphs.
//!
//! Branch and bound in the style of MCQ: candidates are greedily coloured,
//! and colour classes give an upper bound on the clique that can still be
//! added. The size search splits its top-level branches across the rayon
//! pool; the reported clique is then re-extracted sequentially as the
//! lexicographically smallest clique of that size, so results do not depend
//! on the schedule.

use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;

/// Fixed-capacity bit set over `0..n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BitSet {
    words: Vec<u64>,
}

impl BitSet {
    pub fn new(n: usize) -> Self {
        BitSet { words: vec![0; n.div_ceil(64)] }
    }

    pub fn full(n: usize) -> Self {
        let mut s = Self::new(n);
        for (i, w) in s.words.iter_mut().enumerate() {
            let hi = (n - i * 64).min(64);
            *w = if hi == 64 { u64::MAX } else { (1u64 << hi) - 1 };
        }
        s
    }

    #[inline]
    pub fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    #[inline]
    pub fn remove(&mut self, i: usize) {
        self.words[i / 64] &= !(1 << (i % 64));
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn intersection(&self, other: &BitSet) -> BitSet {
        BitSet { words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect() }
    }

    pub fn intersect_with(&mut self, other: &BitSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn difference_with(&mut self, other: &BitSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    pub fn first(&self) -> Option<usize> {
        self.words.iter().enumerate().find(|(_, &w)| w != 0).map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }

    /// Members in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(i * 64 + b)
                }
            })
        })
    }
}

/// Simple undirected graph with adjacency rows as bit sets.
#[derive(Clone, Debug)]
pub struct Graph {
    n: usize,
    rows: Vec<BitSet>,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Graph { n, rows: vec![BitSet::new(n); n] }
    }

    /// Builds a graph from a symmetric predicate evaluated on `i < j`.
    pub fn from_fn(n: usize, mut adjacent: impl FnMut(usize, usize) -> bool) -> Self {
        let mut g = Graph::new(n);
        for i in 0..n {
            for j in i + 1..n {
                if adjacent(i, j) {
                    g.add_edge(i, j);
                }
            }
        }
        g
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn add_edge(&mut self, i: usize, j: usize) {
        if i != j {
            self.rows[i].insert(j);
            self.rows[j].insert(i);
        }
    }

    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        self.rows[i].contains(j)
    }

    pub fn neighbors(&self, i: usize) -> &BitSet {
        &self.rows[i]
    }

    /// Greedy sequential colouring of `cand`: returns vertices in colour
    /// order together with the (non-decreasing) colour of each.
    fn colour_sort(&self, cand: &BitSet) -> (Vec<usize>, Vec<usize>) {
        let mut order = Vec::with_capacity(cand.count());
        let mut colours = Vec::with_capacity(order.capacity());
        let mut uncoloured = cand.clone();
        let mut colour = 0;
        while !uncoloured.is_empty() {
            colour += 1;
            let mut q = uncoloured.clone();
            while let Some(v) = q.first() {
                q.remove(v);
                q.difference_with(&self.rows[v]);
                uncoloured.remove(v);
                order.push(v);
                colours.push(colour);
            }
        }
        (order, colours)
    }

    fn expand(&self, depth: usize, mut cand: BitSet, best: &AtomicUsize, stop: usize) {
        let (order, colours) = self.colour_sort(&cand);
        for i in (0..order.len()).rev() {
            let current = best.load(Ordering::Relaxed);
            if current >= stop || depth + colours[i] <= current {
                return;
            }
            let v = order[i];
            let next = cand.intersection(&self.rows[v]);
            if next.is_empty() {
                best.fetch_max(depth + 1, Ordering::Relaxed);
            } else {
                self.expand(depth + 1, next, best, stop);
            }
            cand.remove(v);
        }
    }

    /// Size of a maximum clique.
    pub fn max_clique_size(&self) -> usize {
        if self.n == 0 {
            return 0;
        }
        let all = BitSet::full(self.n);
        let (order, colours) = self.colour_sort(&all);
        let best = AtomicUsize::new(1);
        (0..order.len()).into_par_iter().rev().for_each(|i| {
            if colours[i] <= best.load(Ordering::Relaxed) {
                return;
            }
            let v = order[i];
            // branch i sees only vertices ordered before it
            let mut cand = BitSet::new(self.n);
            for &u in &order[..i] {
                cand.insert(u);
            }
            cand.intersect_with(&self.rows[v]);
            if cand.is_empty() {
                best.fetch_max(1, Ordering::Relaxed);
            } else {
                self.expand(1, cand, &best, usize::MAX);
            }
        });
        best.load(Ordering::Relaxed)
    }

    /// Whether `cand` contains a clique of size `k`.
    pub fn has_clique_in(&self, cand: &BitSet, k: usize) -> bool {
        if k == 0 {
            return true;
        }
        if cand.count() < k {
            return false;
        }
        let best = AtomicUsize::new(0);
        self.expand(0, cand.clone(), &best, k);
        best.load(Ordering::Relaxed) >= k
    }

    /// Lexicographically smallest clique of size `k` inside `cand`
    /// (smallest first vertex, then smallest second, ...).
    pub fn lex_clique_in(&self, cand: &BitSet, k: usize) -> Option<Vec<usize>> {
        if !self.has_clique_in(cand, k) {
            return None;
        }
        let mut chosen = Vec::with_capacity(k);
        let mut pool = cand.clone();
        while chosen.len() < k {
            let v = pool.first().expect("a clique of the remaining size exists");
            let next = pool.intersection(&self.rows[v]);
            if self.has_clique_in(&next, k - chosen.len() - 1) {
                chosen.push(v);
                pool = next;
            } else {
                pool.remove(v);
            }
        }
        Some(chosen)
    }

    /// A maximum clique, lexicographically smallest among maximum cliques.
    pub fn max_clique(&self) -> Vec<usize> {
        let size = self.max_clique_size();
        self.lex_clique_in(&BitSet::full(self.n), size).unwrap_or_default()
    }
}

//! Maps from the 2-subsets of `A` to the 2-subsets of `B`.
//!
//! A map `f` is separately injective when `x ↦ f({x, a})` is injective for
//! every `a`, and preserves intersections when `f({a, x}) ∩ f({a, y})` is
//! nonempty whenever `x ≠ y`. Together: images of distinct pairs with a
//! common point are distinct and meet, so they share exactly one point.
//! For `|A| ≥ 5` such a map forces `|A| ≤ |B|`; the search below checks this
//! exhaustively on small sizes.
//!
//! Points are `0..n` and pairs `{i < j}` are ranked in colex order,
//! `j(j-1)/2 + i`.

use crate::error::{Error, Result};

pub fn pair_rank(i: usize, j: usize) -> usize {
    let (i, j) = if i < j { (i, j) } else { (j, i) };
    j * (j - 1) / 2 + i
}

/// Inverse of [`pair_rank`].
pub fn pair_unrank(r: usize) -> (usize, usize) {
    let mut j = 1;
    while (j + 1) * j / 2 <= r {
        j += 1;
    }
    (r - j * (j - 1) / 2, j)
}

pub fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PairMap {
    domain: usize,
    codomain: usize,
    /// Image of each domain pair, indexed by colex rank; images are `(u, v)`
    /// with `u < v`.
    table: Vec<(usize, usize)>,
}

impl PairMap {
    pub fn new(domain: usize, codomain: usize, table: Vec<(usize, usize)>) -> Result<PairMap> {
        if domain < 2 || codomain < 2 {
            return Err(Error::Precondition("both sides need at least two points".into()));
        }
        if table.len() != pair_count(domain) {
            return Err(Error::Precondition(format!("table has {} entries, expected {}", table.len(), pair_count(domain))));
        }
        let table = table
            .into_iter()
            .map(|(u, v)| {
                if u == v || u >= codomain || v >= codomain {
                    Err(Error::Precondition(format!("{{{u}, {v}}} is not a pair of codomain points")))
                } else {
                    Ok((u.min(v), u.max(v)))
                }
            })
            .collect::<Result<_>>()?;
        Ok(PairMap { domain, codomain, table })
    }

    /// `{i, j} ↦ {i, j}`.
    pub fn identity(n: usize) -> Result<PairMap> {
        PairMap::new(n, n, (0..pair_count(n)).map(pair_unrank).collect())
    }

    pub fn domain(&self) -> usize {
        self.domain
    }

    pub fn codomain(&self) -> usize {
        self.codomain
    }

    pub fn table(&self) -> &[(usize, usize)] {
        &self.table
    }

    pub fn image(&self, i: usize, j: usize) -> (usize, usize) {
        self.table[pair_rank(i, j)]
    }
}

fn meets(p: (usize, usize), q: (usize, usize)) -> bool {
    p.0 == q.0 || p.0 == q.1 || p.1 == q.0 || p.1 == q.1
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Validation {
    pub separately_injective: bool,
    pub preserves_intersections: bool,
}

impl Validation {
    pub fn valid(self) -> bool {
        self.separately_injective && self.preserves_intersections
    }
}

pub fn validate(f: &PairMap) -> Validation {
    let n = f.domain;
    let mut v = Validation { separately_injective: true, preserves_intersections: true };
    for a in 0..n {
        for x in (0..n).filter(|&x| x != a) {
            for y in (x + 1..n).filter(|&y| y != a) {
                let (p, q) = (f.image(a, x), f.image(a, y));
                v.separately_injective &= p != q;
                v.preserves_intersections &= meets(p, q);
            }
        }
    }
    v
}

/// Least point in `⋂_{a ≠ a0} f({a, a0})`.
pub fn common_point(f: &PairMap, a0: usize) -> Option<usize> {
    let mut images = (0..f.domain).filter(|&a| a != a0).map(|a| f.image(a, a0));
    let first = images.next()?;
    let rest: Vec<_> = images.collect();
    [first.0, first.1].into_iter().find(|&b| rest.iter().all(|p| p.0 == b || p.1 == b))
}

/// `a ↦ f({a, a0}) \ {b0}` on `A \ {a0}`, where `b0` is the common point.
pub fn induced_map(f: &PairMap, a0: usize) -> Option<Vec<usize>> {
    let b0 = common_point(f, a0)?;
    Some(
        (0..f.domain)
            .filter(|&a| a != a0)
            .map(|a| {
                let p = f.image(a, a0);
                if p.0 == b0 {
                    p.1
                } else {
                    p.0
                }
            })
            .collect(),
    )
}

/// Whether [`induced_map`] exists and is injective.
pub fn induced_injective(f: &PairMap, a0: usize) -> bool {
    induced_map(f, a0).is_some_and(|m| {
        let mut sorted = m.clone();
        sorted.sort_unstable();
        sorted.dedup();
        sorted.len() == m.len()
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairSearch {
    pub found: Option<PairMap>,
    pub nodes: u64,
}

type Pair = (usize, usize);

struct Search {
    domain: usize,
    codomain: usize,
    /// Codomain pairs in colex order.
    images: Vec<(usize, usize)>,
    /// For each domain pair, the earlier pairs sharing a point with it.
    earlier: Vec<Vec<usize>>,
    budget: Option<u64>,
    nodes: u64,
}

impl Search {
    fn new(domain: usize, codomain: usize, budget: Option<u64>) -> Result<Search> {
        if domain < 2 || codomain < 2 {
            return Err(Error::Precondition("both sides need at least two points".into()));
        }
        let earlier = (0..pair_count(domain)).map(|r| (0..r).filter(|&q| meets(pair_unrank(r), pair_unrank(q))).collect()).collect();
        let images = (0..pair_count(codomain)).map(pair_unrank).collect();
        Ok(Search { domain, codomain, images, earlier, budget, nodes: 0 })
    }

    /// Depth-first over images in colex order. Codomain labels are forced to
    /// appear in increasing order of first use, so `used` points are always
    /// `0..used`.
    fn run(&mut self, table: &mut Vec<Pair>, used: usize, visit: &mut dyn FnMut(&[Pair]) -> bool) -> Result<bool> {
        let r = table.len();
        if r == self.earlier.len() {
            return Ok(visit(table));
        }
        for k in 0..self.images.len() {
            let p = self.images[k];
            let fresh = match (p.0 < used, p.1 < used) {
                (true, true) => 0,
                (true, false) if p.1 == used => 1,
                (false, false) if p.0 == used && p.1 == used + 1 => 2,
                _ => continue,
            };
            if !self.earlier[r].iter().all(|&q| table[q] != p && meets(table[q], p)) {
                continue;
            }
            self.nodes += 1;
            if let Some(budget) = self.budget {
                if self.nodes > budget {
                    return Err(Error::BudgetExceeded { budget });
                }
            }
            table.push(p);
            let stop = self.run(table, used + fresh, visit)?;
            table.pop();
            if stop {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

/// First valid map `[domain]² → [codomain]²` in canonical assignment order,
/// or `None` after exhausting the search. Codomain relabellings are factored
/// out, which loses no existence answers.
pub fn search_pairmap(domain: usize, codomain: usize, budget: Option<u64>) -> Result<PairSearch> {
    let mut search = Search::new(domain, codomain, budget)?;
    let mut found = None;
    search.run(&mut Vec::new(), 0, &mut |t| {
        found = Some(t.to_vec());
        true
    })?;
    let found = found.map(|t| PairMap::new(domain, codomain, t)).transpose()?;
    Ok(PairSearch { found, nodes: search.nodes })
}

/// Calls `visit` on every valid map up to codomain relabelling, until it
/// returns `false`. Returns the number of nodes visited.
pub fn for_each_valid(domain: usize, codomain: usize, budget: Option<u64>, mut visit: impl FnMut(&PairMap) -> bool) -> Result<u64> {
    let mut search = Search::new(domain, codomain, budget)?;
    let (d, c) = (search.domain, search.codomain);
    search.run(&mut Vec::new(), 0, &mut |t| {
        let f = PairMap::new(d, c, t.to_vec()).expect("search emits pairs");
        !visit(&f)
    })?;
    Ok(search.nodes)
}

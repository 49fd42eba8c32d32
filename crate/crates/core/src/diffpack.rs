//! Difference sets, disjointness of translates, and exact maximum packing
//! families.
//!
//! Shifts `b, b'` are compatible for a base set `A` when the translates
//! `b + A` and `b' + A` are disjoint, which happens exactly when
//! `b - b'` is not a nonzero element of `A - A`. A packing family is a clique
//! of the compatibility graph on a window of shift candidates.

use std::collections::{BTreeSet, HashMap, HashSet};

use crate::clique::{BitSet, Graph};
use crate::error::{Error, Result};
use crate::group::{Element, GroupSpec};
use crate::set::ElementSet;
use crate::window::Window;

/// `A - A`.
pub fn difference_set(a: &ElementSet) -> Result<ElementSet> {
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    let g = a.group();
    let mut out = BTreeSet::new();
    for x in a.iter() {
        for y in a.iter() {
            out.insert(g.sub_unchecked(x, y)?);
        }
    }
    Ok(ElementSet::from_trusted(g, out))
}

/// Whether `(b + A) ∩ (b' + A) = ∅`, computed from the translates themselves.
pub fn translates_disjoint(a: &ElementSet, b: &Element, b2: &Element) -> Result<bool> {
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    if b == b2 {
        return Err(Error::EqualShifts);
    }
    let left = a.translate(b)?;
    let right = a.translate(b2)?;
    Ok(left.elements().is_disjoint(right.elements()))
}

/// Membership in `A - A`, answered by scanning `A` and memoised per
/// difference. Cheaper than materialising `A - A` when only a few
/// differences are queried.
pub(crate) struct DifferenceOracle<'a> {
    base: &'a ElementSet,
    memo: HashMap<Element, bool>,
}

impl<'a> DifferenceOracle<'a> {
    pub(crate) fn new(base: &'a ElementSet) -> Self {
        DifferenceOracle { base, memo: HashMap::new() }
    }

    /// `d ∈ A - A`.
    pub(crate) fn contains(&mut self, d: &Element) -> Result<bool> {
        if let Some(&hit) = self.memo.get(d) {
            return Ok(hit);
        }
        let g = self.base.group();
        let mut hit = d.is_zero();
        if !hit {
            for x in self.base.iter() {
                if self.base.contains(&g.add_unchecked(x, d)?) {
                    hit = true;
                    break;
                }
            }
        }
        self.memo.insert(d.clone(), hit);
        Ok(hit)
    }
}

/// A set `A` together with shift vectors `B`; `certified` records that every
/// pair of distinct shifts was checked to give disjoint translates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PackingFamily {
    pub base: ElementSet,
    pub shifts: ElementSet,
    pub certified: bool,
}

impl PackingFamily {
    pub fn new(base: ElementSet, shifts: ElementSet) -> Self {
        PackingFamily { base, shifts, certified: false }
    }

    pub fn size(&self) -> usize {
        self.shifts.len()
    }

    /// Checks every pair of shifts directly on the translates. Returns the
    /// first offending pair, if any.
    pub fn certify(&mut self) -> Result<Option<(Element, Element)>> {
        let shifts: Vec<&Element> = self.shifts.iter().collect();
        for (i, b) in shifts.iter().enumerate() {
            for b2 in &shifts[i + 1..] {
                if !translates_disjoint(&self.base, b, b2)? {
                    self.certified = false;
                    return Ok(Some(((*b).clone(), (*b2).clone())));
                }
            }
        }
        self.certified = true;
        Ok(None)
    }
}

/// Resource limits for the exact solver.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolverLimits {
    pub max_vertices: u128,
}

impl Default for SolverLimits {
    fn default() -> Self {
        SolverLimits { max_vertices: 8192 }
    }
}

fn check_window(window: &Window, limits: SolverLimits) -> Result<Vec<Element>> {
    let size = window.len()?;
    if size > limits.max_vertices {
        return Err(Error::WindowTooLarge { size, limit: limits.max_vertices });
    }
    Ok(window.iter().collect())
}

/// Compatibility graph of shift candidates `vertices` for base set `a`.
pub(crate) fn compatibility_graph(a: &ElementSet, vertices: &[Element]) -> Result<Graph> {
    let g = a.group();
    let mut oracle = DifferenceOracle::new(a);
    let mut graph = Graph::new(vertices.len());
    for i in 0..vertices.len() {
        for j in i + 1..vertices.len() {
            let d = g.sub_unchecked(&vertices[i], &vertices[j])?;
            if !oracle.contains(&d)? {
                graph.add_edge(i, j);
            }
        }
    }
    Ok(graph)
}

/// Maximum family of pairwise disjoint translates of `a` with shifts taken
/// from `window`. Ties between maximum families go to the one that is
/// lexicographically first in canonical order.
pub fn max_packing_family(a: &ElementSet, window: &Window) -> Result<PackingFamily> {
    max_packing_family_with(a, window, SolverLimits::default())
}

pub fn max_packing_family_with(a: &ElementSet, window: &Window, limits: SolverLimits) -> Result<PackingFamily> {
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    if window.group() != a.group() {
        return Err(Error::GroupMismatch { group: a.group().to_string(), reason: "window is over another group".into() });
    }
    let vertices = check_window(window, limits)?;
    let graph = compatibility_graph(a, &vertices)?;
    let clique = graph.max_clique();
    let shifts = ElementSet::from_trusted(a.group(), clique.into_iter().map(|i| vertices[i].clone()).collect());
    let mut family = PackingFamily::new(a.clone(), shifts);
    if let Some((b, b2)) = family.certify()? {
        let g = a.group();
        return Err(Error::Precondition(format!(
            "solver produced overlapping translates at {} and {}",
            g.format_element(&b),
            g.format_element(&b2)
        )));
    }
    Ok(family)
}

/// Windowed sharp packing index: one more than the largest packing family
/// with shifts in `window`.
pub fn windowed_sharp_index(a: &ElementSet, window: &Window) -> Result<usize> {
    Ok(max_packing_family(a, window)?.size() + 1)
}

/// Largest `C` with `C - C ⊂ B`, for a symmetric `B` containing zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BClique {
    pub size: usize,
    /// Contains zero and lies inside `B`; translated so that its smallest
    /// element in natural order is zero.
    pub members: ElementSet,
}

/// Graph on `B \ {0}` with `u ~ v` iff `u - v ∈ B`. Every clique `C` with
/// `C - C ⊂ B` can be translated to contain 0, after which it lies inside
/// `B`; so cliques here plus 0 are exactly the candidates.
fn bset_graph(b: &ElementSet) -> Result<(Vec<Element>, Graph)> {
    b.require_symmetric_with_zero()?;
    let g = b.group();
    let nonzero: Vec<Element> = b.iter().filter(|e| !e.is_zero()).cloned().collect();
    let mut graph = Graph::new(nonzero.len());
    for i in 0..nonzero.len() {
        for j in i + 1..nonzero.len() {
            if b.contains(&g.sub_unchecked(&nonzero[i], &nonzero[j])?) {
                graph.add_edge(i, j);
            }
        }
    }
    Ok((nonzero, graph))
}

fn normalise(g: &GroupSpec, members: Vec<Element>) -> Result<ElementSet> {
    let low = members.iter().min_by(|x, y| g.natural_cmp(x, y)).cloned().unwrap_or_else(|| g.zero());
    let shifted = members.iter().map(|m| g.sub_unchecked(m, &low)).collect::<Result<BTreeSet<_>>>()?;
    Ok(ElementSet::from_trusted(g, shifted))
}

/// Exact maximum `|C|` with `C - C ⊂ B`, with a witness.
pub fn max_clique_in_bset(b: &ElementSet) -> Result<BClique> {
    let (nonzero, graph) = bset_graph(b)?;
    let size = graph.max_clique_size();
    let picked = graph.lex_clique_in(&BitSet::full(nonzero.len()), size).unwrap_or_default();
    bclique(b, &nonzero, picked)
}

/// A `C` of size exactly `k` with `C - C ⊂ B`, if one exists.
pub fn bset_clique_of_size(b: &ElementSet, k: usize) -> Result<Option<BClique>> {
    if k == 0 {
        return Err(Error::Precondition("clique size must be positive".into()));
    }
    let (nonzero, graph) = bset_graph(b)?;
    match graph.lex_clique_in(&BitSet::full(nonzero.len()), k - 1) {
        Some(picked) => bclique(b, &nonzero, picked).map(Some),
        None => Ok(None),
    }
}

fn bclique(b: &ElementSet, nonzero: &[Element], picked: Vec<usize>) -> Result<BClique> {
    let g = b.group();
    let mut members: Vec<Element> = vec![g.zero()];
    members.extend(picked.into_iter().map(|i| nonzero[i].clone()));
    let members = normalise(g, members)?;
    Ok(BClique { size: members.len(), members })
}

/// `C - C ⊂ B`, checked directly.
pub fn differences_inside(c: &ElementSet, b: &ElementSet) -> Result<bool> {
    let g = c.group();
    for x in c.iter() {
        for y in c.iter() {
            if !b.contains(&g.sub_unchecked(x, y)?) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Elements of `window` outside `F + B`.
pub fn uncovered(f: &ElementSet, b: &ElementSet, window: &Window) -> Result<Option<Element>> {
    let g = f.group();
    let mut cover = HashSet::with_capacity(f.len() * b.len());
    for x in f.iter() {
        for y in b.iter() {
            cover.insert(g.add_unchecked(x, y)?);
        }
    }
    Ok(window.iter().find(|e| !cover.contains(e)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse_group;

    fn set(group: &str, xs: &[&str]) -> ElementSet {
        ElementSet::parse(&parse_group(group).unwrap(), xs).unwrap()
    }

    #[test]
    fn difference_set_examples() {
        let d = difference_set(&set("Z", &["0", "1", "3"])).unwrap();
        assert_eq!(d, set("Z", &["0", "1", "-1", "2", "-2", "3", "-3"]));
        assert_eq!(difference_set(&set("Z", &["7"])).unwrap(), set("Z", &["0"]));
        let d = difference_set(&set("Z_5^2", &["(0,0)", "(1,0)", "(0,1)"])).unwrap();
        assert_eq!(d, set("Z_5^2", &["(0,0)", "(1,0)", "(4,0)", "(0,1)", "(0,4)", "(1,4)", "(4,1)"]));
        assert!(matches!(difference_set(&set("Z", &[])), Err(Error::EmptySet)));
    }

    #[test]
    fn translates_disjoint_examples() {
        let a = set("Z", &["0", "1"]);
        let z = a.group().clone();
        let e = |s| z.parse_element(s).unwrap();
        assert!(translates_disjoint(&a, &e("0"), &e("2")).unwrap());
        assert!(!translates_disjoint(&a, &e("0"), &e("1")).unwrap());
        assert!(matches!(translates_disjoint(&a, &e("1"), &e("1")), Err(Error::EqualShifts)));
        let s = set("Z_2^2", &["(0,0)"]);
        let g = s.group().clone();
        assert!(translates_disjoint(&s, &g.parse_element("(1,0)").unwrap(), &g.parse_element("(0,1)").unwrap()).unwrap());
    }

    #[test]
    fn packing_singleton_fills_window() {
        let a = set("Z", &["0"]);
        let w = Window::new(a.group(), 3, 1).unwrap();
        assert_eq!(max_packing_family(&a, &w).unwrap().size(), 7);
    }

    #[test]
    fn packing_whole_finite_group() {
        let g = parse_group("Z_2^2").unwrap();
        let a = ElementSet::new(&g, Window::full(&g).unwrap().iter()).unwrap();
        let fam = max_packing_family(&a, &Window::full(&g).unwrap()).unwrap();
        assert_eq!(fam.size(), 1);
        assert!(fam.certified);
    }

    #[test]
    fn window_limit_is_reported() {
        let a = set("Z", &["0"]);
        let w = Window::new(a.group(), 100, 1).unwrap();
        let err = max_packing_family_with(&a, &w, SolverLimits { max_vertices: 50 }).unwrap_err();
        assert_eq!(err, Error::WindowTooLarge { size: 201, limit: 50 });
    }

    #[test]
    fn bset_clique_examples() {
        let c = max_clique_in_bset(&set("Z", &["0", "1", "-1", "2", "-2"])).unwrap();
        assert_eq!(c.size, 3);
        assert_eq!(c.members, set("Z", &["0", "1", "2"]));
        assert_eq!(max_clique_in_bset(&set("Z", &["0"])).unwrap().size, 1);
        assert_eq!(max_clique_in_bset(&set("Z", &["0", "1", "-1"])).unwrap().size, 2);
        assert!(matches!(max_clique_in_bset(&set("Z", &["0", "1"])), Err(Error::NotSymmetric(_))));
        assert!(matches!(max_clique_in_bset(&set("Z", &["1", "-1"])), Err(Error::MissingZero)));
    }

    #[test]
    fn cover_check() {
        let b = set("Z", &["0", "1", "-1"]);
        let f = set("Z", &["0", "3"]);
        let w = Window::new(b.group(), 2, 1).unwrap();
        assert_eq!(uncovered(&f, &b, &w).unwrap(), Some(b.group().parse_element("-2").unwrap()));
        let f = set("Z", &["-1", "2"]);
        assert_eq!(uncovered(&f, &b, &w).unwrap(), None);
    }
}

//! Symmetric sets `𝔹` that pin the clique number of a difference graph.
//!
//! For finite `k >= 2` a set `𝔹 = -𝔹` with
//!
//! 1. some `C` of size `k - 1` has `C - C ⊂ 𝔹`,
//! 2. no `C` of size `k` has `C - C ⊂ 𝔹`,
//! 3. `F + 𝔹 ≠ G` for every small `F`,
//!
//! is the input of the greedy construction in [`crate::witness`]. This module
//! builds one for every infinite group that admits it, and checks the first
//! two properties exactly with the clique solver. The third holds in every
//! infinite group because `𝔹` is finite; [`check_property_3`] tests it on a
//! window.
//!
//! The construction depends on `k` and on which infinite carrier the group
//! offers. Carriers are preferred in the order integers, Prufer factors,
//! repeated cyclic factors, finite cyclic factors.

use std::fmt;

use crate::diffpack::{bset_clique_of_size, difference_set, max_clique_in_bset, uncovered, BClique};
use crate::error::{Error, Result};
use crate::group::{Element, Factor, GroupSpec, Order};
use crate::set::ElementSet;
use crate::window::Window;

/// Which construction produced a [`BSet`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Provenance {
    /// `{0}` for `k = 2`.
    K2Zero,
    /// `{0, ±g}` with `g` not of order 3.
    K3,
    /// `{0, ±g, ±2g}` with `g` of order greater than 5.
    K4OrderAbove5,
    /// A subgroup of order 3.
    K4Z3Subgroup,
    /// Differences of `{0, g1, g2}` with independent `g1, g2` of order 4 or 5.
    K4ZiZj,
    /// Differences of `{1, ..., k-1}` in the integers.
    KnIntegers,
    /// Differences of `{l / p^n : 1 <= l <= k-1}` in a Prufer group.
    KnPrufer,
    /// Differences of `k - 1` independent generators of a direct sum.
    KnDirectSum,
    /// Supplied by the caller.
    Supplied,
}

impl Provenance {
    pub fn tag(self) -> &'static str {
        match self {
            Provenance::K2Zero => "K2-Zero",
            Provenance::K3 => "K3",
            Provenance::K4OrderAbove5 => "K4-Order>5",
            Provenance::K4Z3Subgroup => "K4-Z3Subgroup",
            Provenance::K4ZiZj => "K4-ZiZj",
            Provenance::KnIntegers => "Kn-Z",
            Provenance::KnPrufer => "Kn-Prufer",
            Provenance::KnDirectSum => "Kn-DirectSum",
            Provenance::Supplied => "Supplied",
        }
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Outcome of the exact property checks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckResults {
    /// A `(k-1)`-set with all differences in `𝔹`, if one exists.
    pub property_1: Option<ElementSet>,
    /// No `k`-set has all differences in `𝔹`.
    pub property_2: bool,
    /// The exact maximum, with a witness.
    pub max_clique: BClique,
}

impl CheckResults {
    pub fn passed(&self) -> bool {
        self.property_1.is_some() && self.property_2
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BSet {
    pub group: GroupSpec,
    pub kappa: usize,
    pub elements: ElementSet,
    /// The set whose difference set is `elements` (the `B_{k-1}` of the
    /// construction); `None` for supplied sets.
    pub base: Option<ElementSet>,
    pub provenance: Provenance,
    pub check_results: Option<CheckResults>,
}

impl BSet {
    /// Wraps a caller-supplied symmetric set containing zero.
    pub fn supplied(elements: ElementSet, kappa: usize) -> Result<BSet> {
        if kappa < 2 {
            return Err(Error::InvalidKappa(kappa));
        }
        elements.require_symmetric_with_zero()?;
        Ok(BSet { group: elements.group().clone(), kappa, elements, base: None, provenance: Provenance::Supplied, check_results: None })
    }

    /// `𝔹 \ {0}`.
    pub fn punctured(&self) -> impl Iterator<Item = &Element> + '_ {
        self.elements.iter().filter(|e| !e.is_zero())
    }

    /// Runs properties (1) and (2) and stores the outcome.
    pub fn check(&mut self) -> Result<&CheckResults> {
        let property_1 = match check_property_1(self) {
            Ok(w) => Some(w),
            Err(Error::PropertyFailed { .. }) => None,
            Err(e) => return Err(e),
        };
        let max_clique = max_clique_in_bset(&self.elements)?;
        let property_2 = max_clique.size < self.kappa;
        Ok(self.check_results.insert(CheckResults { property_1, property_2, max_clique }))
    }
}

/// Whether `group` is one of the groups where sharp index `kappa` is
/// unattainable: all factors `Z_3` for `kappa = 3`; all factors `Z_2` plus at
/// most one `Z_4` for `kappa = 4`.
pub fn is_exceptional(group: &GroupSpec, kappa: usize) -> Result<bool> {
    if group.is_finite() {
        return Err(Error::FiniteGroup(group.to_string()));
    }
    if kappa < 2 {
        return Err(Error::InvalidKappa(kappa));
    }
    let fs = group.factors();
    Ok(match kappa {
        3 => fs.iter().all(|f| matches!(f, Factor::Cyclic(3) | Factor::RepeatedCyclic(3))),
        4 => {
            fs.iter().all(|f| matches!(f, Factor::Cyclic(2 | 4) | Factor::RepeatedCyclic(2)))
                && fs.iter().filter(|f| matches!(f, Factor::Cyclic(4))).count() <= 1
        }
        _ => false,
    })
}

fn carrier_rank(f: Factor) -> u8 {
    match f {
        Factor::Integers => 0,
        Factor::Prufer(_) => 1,
        Factor::RepeatedCyclic(_) => 2,
        Factor::Cyclic(_) => 3,
    }
}

/// Factor indices in carrier preference order, ties by position.
fn carriers(group: &GroupSpec) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..group.rank()).collect();
    idx.sort_by_key(|&i| carrier_rank(group.factors()[i]));
    idx
}

/// Least `k` with `p^k > bound`.
fn prufer_level_above(p: u64, bound: u64) -> usize {
    let mut level = 1;
    let mut q = p;
    while q <= bound {
        q *= p;
        level += 1;
    }
    level
}

/// A generator whose order avoids 3, for `k = 3`.
fn order_not_three(group: &GroupSpec) -> Option<Element> {
    carriers(group).into_iter().find_map(|i| match group.factors()[i] {
        Factor::Integers => Some(group.generator(i, 0)),
        Factor::Prufer(3) => Some(group.generator(i, 1)),
        Factor::Prufer(_) => Some(group.generator(i, 0)),
        Factor::RepeatedCyclic(n) | Factor::Cyclic(n) if n != 3 => Some(group.generator(i, 0)),
        _ => None,
    })
}

/// An element of order greater than 5: a single-factor generator when one
/// exists, else a sum of generators of factors with coprime-enough moduli.
fn order_above_five(group: &GroupSpec) -> Result<Option<Element>> {
    let single = carriers(group).into_iter().find_map(|i| match group.factors()[i] {
        Factor::Integers => Some(group.generator(i, 0)),
        Factor::Prufer(p) => Some(group.generator(i, prufer_level_above(p, 5) - 1)),
        Factor::RepeatedCyclic(n) | Factor::Cyclic(n) if n > 5 => Some(group.generator(i, 0)),
        _ => None,
    });
    if single.is_some() {
        return Ok(single);
    }
    let mut acc = group.zero();
    let mut order = 1u64;
    for (i, f) in group.factors().iter().enumerate() {
        let Order::Finite(n) = f.exponent() else { continue };
        let next = num_integer::lcm(order, n);
        if next > order {
            acc = group.add_unchecked(&acc, &group.generator(i, 0))?;
            order = next;
            if order > 5 {
                return Ok(Some(acc));
            }
        }
    }
    Ok(None)
}

fn multiples(group: &GroupSpec, g: &Element, ks: impl IntoIterator<Item = i64>) -> Result<Vec<Element>> {
    ks.into_iter().map(|k| group.scalar_mul(k, g)).collect()
}

fn from_base(group: &GroupSpec, kappa: usize, base: Vec<Element>, provenance: Provenance) -> Result<BSet> {
    let base = ElementSet::new(group, base)?;
    let elements = difference_set(&base)?;
    Ok(BSet { group: group.clone(), kappa, elements, base: Some(base), provenance, check_results: None })
}

/// Builds `𝔹` for `kappa` in an infinite, non-exceptional `group`.
pub fn build_bset(group: &GroupSpec, kappa: usize) -> Result<BSet> {
    if kappa < 2 {
        return Err(Error::InvalidKappa(kappa));
    }
    if is_exceptional(group, kappa)? {
        return Err(Error::ExceptionalGroup { group: group.to_string(), kappa });
    }
    let no_carrier = || Error::NoCarrier { group: group.to_string(), kappa };
    match kappa {
        2 => from_base(group, kappa, vec![group.zero()], Provenance::K2Zero),
        3 => {
            let g = order_not_three(group).ok_or_else(no_carrier)?;
            from_base(group, kappa, vec![group.zero(), g], Provenance::K3)
        }
        4 => build_four(group).transpose().ok_or_else(no_carrier)?,
        _ => build_large(group, kappa),
    }
}

fn build_four(group: &GroupSpec) -> Result<Option<BSet>> {
    if let Some(g) = order_above_five(group)? {
        let base = multiples(group, &g, [0, 1, -1])?;
        return from_base(group, 4, base, Provenance::K4OrderAbove5).map(Some);
    }
    // every modulus is now at most 5 and they share an exponent-friendly mix
    let fs = group.factors();
    if let Some(i) = carriers(group).into_iter().find(|&i| matches!(fs[i], Factor::Cyclic(3) | Factor::RepeatedCyclic(3))) {
        let g = group.generator(i, 0);
        let base = multiples(group, &g, [0, 1, 2])?;
        return from_base(group, 4, base, Provenance::K4Z3Subgroup).map(Some);
    }
    let mut slots = Vec::new();
    for i in carriers(group) {
        match fs[i] {
            Factor::RepeatedCyclic(4 | 5) => slots.extend([group.generator(i, 0), group.generator(i, 1)]),
            Factor::Cyclic(4 | 5) => slots.push(group.generator(i, 0)),
            _ => {}
        }
    }
    if slots.len() < 2 {
        return Ok(None);
    }
    let base = vec![group.zero(), slots[0].clone(), slots[1].clone()];
    from_base(group, 4, base, Provenance::K4ZiZj).map(Some)
}

/// Least `n` with `p^n >= 2 * kappa`.
pub fn prufer_level_for(p: u64, kappa: usize) -> usize {
    prufer_level_above(p, 2 * kappa as u64 - 1)
}

fn build_large(group: &GroupSpec, kappa: usize) -> Result<BSet> {
    let top = kappa as i64 - 1;
    for i in carriers(group) {
        match group.factors()[i] {
            Factor::Integers => {
                let base = multiples(group, &group.generator(i, 0), 1..=top)?;
                return from_base(group, kappa, base, Provenance::KnIntegers);
            }
            Factor::Prufer(p) => {
                let level = prufer_level_for(p, kappa);
                let unit = group.generator(i, level - 1);
                let base = multiples(group, &unit, 1..=top)?;
                return from_base(group, kappa, base, Provenance::KnPrufer);
            }
            Factor::RepeatedCyclic(_) => {
                let base = (0..kappa - 1).map(|slot| group.generator(i, slot)).collect();
                return from_base(group, kappa, base, Provenance::KnDirectSum);
            }
            Factor::Cyclic(_) => {}
        }
    }
    Err(Error::NoCarrier { group: group.to_string(), kappa })
}

/// A set `C` with `|C| = k - 1` and `C - C ⊂ 𝔹`.
pub fn check_property_1(b: &BSet) -> Result<ElementSet> {
    match bset_clique_of_size(&b.elements, b.kappa - 1)? {
        Some(c) => Ok(c.members),
        None => Err(Error::PropertyFailed {
            property: 1,
            kappa: b.kappa,
            detail: format!("no {}-set has all differences inside the set", b.kappa - 1),
        }),
    }
}

/// No `C` with `|C| = k` has `C - C ⊂ 𝔹`.
pub fn check_property_2(b: &BSet) -> Result<bool> {
    Ok(max_clique_in_bset(&b.elements)?.size < b.kappa)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Property3 {
    /// `F + 𝔹` misses some element of the window.
    pub holds: bool,
    /// `|F| * |𝔹| < |window|`, which forces `holds`.
    pub cardinality_certificate: bool,
    /// The first uncovered element in canonical order.
    pub uncovered: Option<Element>,
}

/// Whether `F + 𝔹` fails to cover `window`.
pub fn check_property_3(b: &BSet, f: &ElementSet, window: &Window) -> Result<Property3> {
    let size = window.len()?;
    let product = (f.len() as u128).saturating_mul(b.elements.len() as u128);
    let miss = uncovered(f, &b.elements, window)?;
    Ok(Property3 { holds: miss.is_some(), cardinality_certificate: product < size, uncovered: miss })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse_group;

    fn group(s: &str) -> GroupSpec {
        parse_group(s).unwrap()
    }

    fn set(g: &GroupSpec, xs: &[&str]) -> ElementSet {
        ElementSet::parse(g, xs).unwrap()
    }

    fn ints(lo: i64, hi: i64) -> Vec<String> {
        (lo..=hi).map(|x| x.to_string()).collect()
    }

    #[test]
    fn exceptional_groups() {
        assert!(is_exceptional(&group("Z_3^w"), 3).unwrap());
        assert!(is_exceptional(&group("Z_3 + Z_3^w"), 3).unwrap());
        assert!(is_exceptional(&group("Z_4 + Z_2^w"), 4).unwrap());
        assert!(is_exceptional(&group("Z_2^w"), 4).unwrap());
        assert!(!is_exceptional(&group("Z_4 + Z_4 + Z_2^w"), 4).unwrap());
        assert!(!is_exceptional(&group("Z_3^w"), 4).unwrap());
        assert!(!is_exceptional(&group("Z_2^w"), 3).unwrap());
        assert!(!is_exceptional(&group("Z"), 3).unwrap());
        assert!(matches!(is_exceptional(&group("Z_3^2"), 3), Err(Error::FiniteGroup(_))));
    }

    #[test]
    fn integers_kappa_three() {
        let z = group("Z");
        let b = build_bset(&z, 3).unwrap();
        assert_eq!(b.elements, set(&z, &["0", "1", "-1"]));
        assert_eq!(b.provenance, Provenance::K3);
    }

    #[test]
    fn integers_kappa_six() {
        let z = group("Z");
        let b = build_bset(&z, 6).unwrap();
        assert_eq!(b.elements, ElementSet::parse(&z, &ints(-4, 4)).unwrap());
        assert_eq!(b.base.unwrap(), ElementSet::parse(&z, &ints(1, 5)).unwrap());
        assert_eq!(b.provenance, Provenance::KnIntegers);
    }

    #[test]
    fn order_two_generator_gives_subgroup() {
        let g = group("Z_2^w");
        let b = build_bset(&g, 3).unwrap();
        assert_eq!(b.elements, set(&g, &["0", "[1]"]));
    }

    #[test]
    fn z5_block_for_kappa_four() {
        let g = group("Z_5^w");
        let b = build_bset(&g, 4).unwrap();
        assert_eq!(b.provenance, Provenance::K4ZiZj);
        assert_eq!(b.base.as_ref().unwrap(), &set(&g, &["0", "[1]", "[0,1]"]));
        assert_eq!(b.elements, set(&g, &["0", "[1]", "[4]", "[0,1]", "[0,4]", "[1,4]", "[4,1]"]));
    }

    #[test]
    fn exceptional_is_refused() {
        let err = build_bset(&group("Z_2^w"), 4).unwrap_err();
        assert!(matches!(err, Error::ExceptionalGroup { kappa: 4, .. }));
        assert!(matches!(build_bset(&group("Z_3^w"), 3), Err(Error::ExceptionalGroup { .. })));
        assert!(matches!(build_bset(&group("Z_5"), 3), Err(Error::FiniteGroup(_))));
        assert!(matches!(build_bset(&group("Z"), 1), Err(Error::InvalidKappa(1))));
    }

    #[test]
    fn prufer_kappa_five_uses_sixteenths() {
        assert_eq!(prufer_level_for(2, 5), 4);
        assert_eq!(prufer_level_for(3, 5), 3);
        let g = group("Prufer(2)");
        let b = build_bset(&g, 5).unwrap();
        let base = ["1/16", "2/16", "3/16", "4/16"];
        assert_eq!(b.base.as_ref().unwrap(), &ElementSet::parse(&g, &base).unwrap());
        assert_eq!(b.elements.len(), 7);
    }

    #[test]
    fn kappa_four_case_dispatch() {
        assert_eq!(build_bset(&group("Z"), 4).unwrap().provenance, Provenance::K4OrderAbove5);
        assert_eq!(build_bset(&group("Z_3^w"), 4).unwrap().provenance, Provenance::K4Z3Subgroup);
        assert_eq!(build_bset(&group("Z_4^w"), 4).unwrap().provenance, Provenance::K4ZiZj);
        assert_eq!(build_bset(&group("Z_4 + Z_4 + Z_2^w"), 4).unwrap().provenance, Provenance::K4ZiZj);
        // Z_2 + Z_3 contains an element of order 6
        let mixed = build_bset(&group("Z_2 + Z_3^w"), 4).unwrap();
        assert_eq!(mixed.provenance, Provenance::K4OrderAbove5);
        assert_eq!(mixed.elements.len(), 5);
        assert_eq!(build_bset(&group("Prufer(5)"), 4).unwrap().provenance, Provenance::K4OrderAbove5);
    }

    #[test]
    fn property_one_examples() {
        let z = group("Z");
        let b = BSet::supplied(ElementSet::parse(&z, &ints(-4, 4)).unwrap(), 6).unwrap();
        assert_eq!(check_property_1(&b).unwrap(), ElementSet::parse(&z, &ints(0, 4)).unwrap());
        let b = BSet::supplied(set(&z, &["0", "1", "-1"]), 3).unwrap();
        assert_eq!(check_property_1(&b).unwrap(), set(&z, &["0", "1"]));
        let b = BSet::supplied(set(&z, &["0"]), 2).unwrap();
        assert_eq!(check_property_1(&b).unwrap(), set(&z, &["0"]));
        let b = BSet::supplied(set(&z, &["0", "1", "-1"]), 4).unwrap();
        assert!(matches!(check_property_1(&b), Err(Error::PropertyFailed { property: 1, .. })));
    }

    #[test]
    fn property_two_examples() {
        let z = group("Z");
        let b = |xs: &[&str], k| BSet::supplied(set(&z, xs), k).unwrap();
        assert!(check_property_2(&b(&["0", "1", "-1"], 3)).unwrap());
        assert!(check_property_2(&b(&["0", "1", "-1", "2", "-2"], 4)).unwrap());
        assert!(!check_property_2(&b(&["0", "1", "-1", "2", "-2"], 3)).unwrap());
    }

    #[test]
    fn property_three_examples() {
        let z = group("Z");
        let b = BSet::supplied(set(&z, &["0", "1", "-1"]), 3).unwrap();
        let f = ElementSet::parse(&z, &ints(0, 9)).unwrap();
        let p = check_property_3(&b, &f, &Window::new(&z, 100, 1).unwrap()).unwrap();
        assert!(p.holds && p.cardinality_certificate);

        let w = Window::new(&z, 50, 1).unwrap();
        let zero = BSet::supplied(set(&z, &["0"]), 2).unwrap();
        let all = ElementSet::new(&z, w.iter()).unwrap();
        let p = check_property_3(&zero, &all, &w).unwrap();
        assert!(!p.holds && !p.cardinality_certificate);

        let b = BSet::supplied(ElementSet::parse(&z, &ints(-2, 2)).unwrap(), 4).unwrap();
        assert!(!check_property_3(&b, &all, &w).unwrap().holds);
    }

    #[test]
    fn stored_check_results() {
        let mut b = build_bset(&group("Z"), 5).unwrap();
        let r = b.check().unwrap().clone();
        assert!(r.passed());
        assert_eq!(r.max_clique.size, 4);
        assert_eq!(b.check_results, Some(r));
    }
}

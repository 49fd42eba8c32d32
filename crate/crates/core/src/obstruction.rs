//! Why sharp indices 3 and 4 cannot occur in the exceptional groups.
//!
//! In a group of exponent 3 a pair of disjoint translates `A, b + A` always
//! extends to the triple `A, b + A, 2b + A`. In `⊕ℤ_2` and `ℤ_4 ⊕ (⊕ℤ_2)` a
//! disjoint triple `A, b1 + A, b2 + A` always extends to a quadruple; the
//! fourth shift depends on the orders and `ℤ_4` parts of `b1, b2`. The
//! extension procedures here compute those shifts and certify the result on
//! the translates. [`exhaustive_no_index_check`] runs them over every subset
//! of a small group, alongside the exact solver.

use std::collections::{BTreeMap, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::clique::Graph;
use crate::diffpack::{translates_disjoint, PackingFamily};
use crate::error::{Error, Result};
use crate::group::{Coord, Element, Factor, GroupSpec, Order};
use crate::set::ElementSet;
use crate::window::{enumerate, Window};

/// Largest group swept exhaustively.
pub const EXHAUSTIVE_LIMIT: usize = 16;
/// Largest group handled at all (subsets are `u128` masks).
pub const MASK_LIMIT: usize = 128;
/// Example subsets kept per report category.
pub const EXAMPLE_LIMIT: usize = 16;

/// `{0, b, 2b}` for a disjoint pair `A, b + A` in exponent 3.
pub fn extend_pair_exponent3(a: &ElementSet, b: &Element) -> Result<PackingFamily> {
    let g = a.group();
    g.check(b)?;
    if b.is_zero() {
        return Err(Error::Precondition("shift must be nonzero".into()));
    }
    if !g.scalar_mul(3, b)?.is_zero() {
        return Err(Error::Precondition(format!("3 * {} is not zero", g.format_element(b))));
    }
    if !translates_disjoint(a, &g.zero(), b)? {
        return Err(Error::Precondition("A and b + A intersect".into()));
    }
    let shifts = ElementSet::new(g, [g.zero(), b.clone(), g.scalar_mul(2, b)?])?;
    let mut family = PackingFamily::new(a.clone(), shifts);
    family.certify()?;
    Ok(family)
}

/// How a disjoint triple `{0, b1, b2}` is extended.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum TripleCase {
    /// One shift has order 2; `swapped` when it was `b2`. Fourth shift
    /// `b1 + b2`.
    OrderTwo { swapped: bool },
    /// `b1 = (g, x)`, `b2 = (g, y)` with `g` of order 4. Fourth shift
    /// `(0, x + y)`.
    SameG { g: u64, x: Element, y: Element },
    /// `b1 = (g, x)`, `b2 = (-g, y)` with `g` of order 4. Fourth shift
    /// `(2g, x + y)`.
    OppositeG { g: u64, x: Element, y: Element },
}

impl TripleCase {
    pub fn name(&self) -> &'static str {
        match self {
            TripleCase::OrderTwo { .. } => "order-two",
            TripleCase::SameG { .. } => "same-g",
            TripleCase::OppositeG { .. } => "opposite-g",
        }
    }
}

/// Position of the `ℤ_4` factor, if the group is `⊕ℤ_2` or `ℤ_4 ⊕ (⊕ℤ_2)`.
fn z4_slot(group: &GroupSpec) -> Result<Option<usize>> {
    let mut slot = None;
    for (i, f) in group.factors().iter().enumerate() {
        match f {
            Factor::Cyclic(2) | Factor::RepeatedCyclic(2) => {}
            Factor::Cyclic(4) if slot.is_none() => slot = Some(i),
            _ => return Err(Error::NotApplicable(group.to_string())),
        }
    }
    Ok(slot)
}

/// `(g, x)`: the `ℤ_4` coordinate and the element with it cleared.
fn split(slot: Option<usize>, e: &Element) -> (u64, Element) {
    let Some(i) = slot else { return (0, e.clone()) };
    let mut coords = e.coords().to_vec();
    let Coord::Residue(g) = std::mem::replace(&mut coords[i], Coord::Residue(0)) else { unreachable!("cyclic factor holds a residue") };
    (g, Element::new(coords))
}

fn with_g(slot: Option<usize>, g: u64, x: &Element) -> Element {
    let mut coords = x.coords().to_vec();
    if let Some(i) = slot {
        coords[i] = Coord::Residue(g % 4);
    }
    Element::new(coords)
}

/// Every case whose hypothesis holds for `(b1, b2)`; exactly one for
/// nonzero distinct shifts.
pub fn applicable_cases(group: &GroupSpec, b1: &Element, b2: &Element) -> Result<Vec<TripleCase>> {
    let slot = z4_slot(group)?;
    let (o1, o2) = (group.order(b1)?, group.order(b2)?);
    let (g1, x) = split(slot, b1);
    let (g2, y) = split(slot, b2);
    let four = Order::Finite(4);
    let mut cases = Vec::new();
    if o1 == Order::Finite(2) || o2 == Order::Finite(2) {
        cases.push(TripleCase::OrderTwo { swapped: o1 != Order::Finite(2) });
    }
    if o1 == four && o2 == four && g1 == g2 {
        cases.push(TripleCase::SameG { g: g1, x: x.clone(), y: y.clone() });
    }
    if o1 == four && o2 == four && (g1 + g2) % 4 == 0 {
        cases.push(TripleCase::OppositeG { g: g1, x, y });
    }
    Ok(cases)
}

fn require_distinct_nonzero(b1: &Element, b2: &Element) -> Result<()> {
    if b1.is_zero() || b2.is_zero() {
        return Err(Error::Precondition("shifts must be nonzero".into()));
    }
    if b1 == b2 {
        return Err(Error::EqualShifts);
    }
    Ok(())
}

/// The fourth shift for `{0, b1, b2}` and the case that produced it.
pub fn fourth_shift(group: &GroupSpec, b1: &Element, b2: &Element) -> Result<(Element, TripleCase)> {
    group.check(b1)?;
    group.check(b2)?;
    require_distinct_nonzero(b1, b2)?;
    let slot = z4_slot(group)?;
    let mut cases = applicable_cases(group, b1, b2)?;
    if cases.len() != 1 {
        return Err(Error::Precondition(format!("{} cases apply", cases.len())));
    }
    let case = cases.pop().expect("one case");
    let b3 = match &case {
        TripleCase::OrderTwo { swapped: false } => group.add_unchecked(b1, b2)?,
        TripleCase::OrderTwo { swapped: true } => group.add_unchecked(b2, b1)?,
        TripleCase::SameG { x, y, .. } => group.add_unchecked(x, y)?,
        TripleCase::OppositeG { g, x, y } => with_g(slot, 2 * g, &group.add_unchecked(x, y)?),
    };
    Ok((b3, case))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TripleExtension {
    pub b3: Element,
    pub case: TripleCase,
    /// `{0, b1, b2, b3}`, certified on the translates.
    pub family: PackingFamily,
}

/// Extends the disjoint triple `A, b1 + A, b2 + A` by a fourth translate.
pub fn extend_triple(a: &ElementSet, b1: &Element, b2: &Element) -> Result<TripleExtension> {
    let g = a.group();
    let (b3, case) = fourth_shift(g, b1, b2)?;
    let zero = g.zero();
    for (s, t) in [(&zero, b1), (&zero, b2), (b1, b2)] {
        if !translates_disjoint(a, s, t)? {
            return Err(Error::Precondition("translates by 0, b1, b2 are not pairwise disjoint".into()));
        }
    }
    let shifts = ElementSet::new(g, [zero, b1.clone(), b2.clone(), b3.clone()])?;
    let mut family = PackingFamily::new(a.clone(), shifts);
    family.certify()?;
    Ok(TripleExtension { b3, case, family })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepMode {
    Exhaustive,
    Sampled { samples: u64, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObstructionReport {
    pub group: GroupSpec,
    pub kappa: usize,
    pub mode: SweepMode,
    pub subsets_checked: u64,
    /// Subsets with a disjoint family of `kappa - 1` translates.
    pub with_family: u64,
    /// Disjoint `(kappa - 1)`-families containing shift 0 that were extended.
    pub families_extended: u64,
    /// Extensions that failed certification.
    pub extension_failures: u64,
    /// Subsets whose maximum family has exactly `kappa - 1` translates.
    pub violations: u64,
    /// Subsets where the extension outcome contradicts the solver.
    pub disagreements: u64,
    /// Maximum family size over the whole group -> number of subsets.
    pub histogram: BTreeMap<usize, u64>,
    /// Extension case name -> number of families.
    pub cases: BTreeMap<&'static str, u64>,
    /// First offending subsets by rank, for each failure kind.
    pub examples: BTreeMap<&'static str, Vec<ElementSet>>,
}

impl ObstructionReport {
    pub fn passed(&self) -> bool {
        self.violations == 0 && self.extension_failures == 0 && self.disagreements == 0
    }
}

fn check_family(group: &GroupSpec, kappa: usize) -> Result<()> {
    if !group.is_finite() {
        return Err(Error::InfiniteGroup(group.to_string()));
    }
    let ok = match kappa {
        3 => group.factors().iter().all(|f| *f == Factor::Cyclic(3)),
        4 => z4_slot(group).is_ok(),
        _ => return Err(Error::InvalidKappa(kappa)),
    };
    if !ok {
        return Err(Error::NotApplicable(group.to_string()));
    }
    Ok(())
}

/// Index arithmetic for a small finite group.
struct Tables {
    elements: Vec<Element>,
    /// `sub[i][j]` is the index of `e_i - e_j`.
    sub: Vec<Vec<usize>>,
    /// `ext[i][j]`: index of the extending shift for the family `{0, e_i, e_j}`
    /// (or `{0, e_i}` in exponent 3, stored at `ext[i][0]`).
    ext: Vec<Vec<usize>>,
    case: Vec<Vec<Option<&'static str>>>,
}

impl Tables {
    fn new(group: &GroupSpec, kappa: usize) -> Result<Tables> {
        let elements = enumerate(&Window::full(group)?);
        let index: HashMap<&Element, usize> = elements.iter().enumerate().map(|(i, e)| (e, i)).collect();
        let n = elements.len();
        let mut sub = vec![vec![0; n]; n];
        for i in 0..n {
            for j in 0..n {
                sub[i][j] = index[&group.sub(&elements[i], &elements[j])?];
            }
        }
        let mut ext = vec![vec![0; n]; n];
        let mut case = vec![vec![None; n]; n];
        for i in 1..n {
            if kappa == 3 {
                ext[i][0] = index[&group.scalar_mul(2, &elements[i])?];
                continue;
            }
            for j in 1..n {
                if i != j {
                    let (b3, c) = fourth_shift(group, &elements[i], &elements[j])?;
                    ext[i][j] = index[&b3];
                    case[i][j] = Some(c.name());
                }
            }
        }
        Ok(Tables { elements, sub, ext, case })
    }

    fn differences(&self, mask: u128) -> u128 {
        let members: Vec<usize> = bits(mask).collect();
        let mut d = 0u128;
        for &i in &members {
            for &j in &members {
                d |= 1 << self.sub[i][j];
            }
        }
        d
    }

    fn pairwise_outside(&self, family: &[usize], d: u128) -> bool {
        family.iter().enumerate().all(|(k, &x)| family[k + 1..].iter().all(|&y| d >> self.sub[x][y] & 1 == 0))
    }

    fn max_family(&self, d: u128) -> usize {
        let n = self.elements.len();
        Graph::from_fn(n, |i, j| d >> self.sub[i][j] & 1 == 0).max_clique_size()
    }

    fn set(&self, group: &GroupSpec, mask: u128) -> ElementSet {
        ElementSet::from_trusted(group, bits(mask).map(|i| self.elements[i].clone()).collect())
    }
}

fn bits(mask: u128) -> impl Iterator<Item = usize> {
    (0..128).filter(move |i| mask >> i & 1 == 1)
}

#[derive(Default)]
struct Tally {
    subsets: u64,
    with_family: u64,
    extended: u64,
    failures: u64,
    violations: u64,
    disagreements: u64,
    histogram: BTreeMap<usize, u64>,
    cases: BTreeMap<&'static str, u64>,
    examples: BTreeMap<&'static str, Vec<(u64, u128)>>,
}

impl Tally {
    fn note(&mut self, kind: &'static str, rank: u64, mask: u128) {
        let list = self.examples.entry(kind).or_default();
        list.push((rank, mask));
        list.sort_unstable();
        list.truncate(EXAMPLE_LIMIT);
    }

    fn merge(mut self, other: Tally) -> Tally {
        self.subsets += other.subsets;
        self.with_family += other.with_family;
        self.extended += other.extended;
        self.failures += other.failures;
        self.violations += other.violations;
        self.disagreements += other.disagreements;
        for (k, v) in other.histogram {
            *self.histogram.entry(k).or_default() += v;
        }
        for (k, v) in other.cases {
            *self.cases.entry(k).or_default() += v;
        }
        for (kind, list) in other.examples {
            for (rank, mask) in list {
                self.note(kind, rank, mask);
            }
        }
        self
    }
}

struct Sweep<'a> {
    group: &'a GroupSpec,
    kappa: usize,
    tables: Tables,
}

impl Sweep<'_> {
    fn visit(&self, mut tally: Tally, rank: u64, mask: u128) -> Result<Tally> {
        let t = &self.tables;
        let n = t.elements.len();
        let d = t.differences(mask);
        let free = |i: usize| d >> i & 1 == 0;
        let mut first: Option<Vec<usize>> = None;
        let mut ok = true;
        for i in (1..n).filter(|&i| free(i)) {
            let partners: Vec<usize> =
                if self.kappa == 3 { vec![0] } else { (i + 1..n).filter(|&j| free(j) && free(t.sub[j][i])).collect() };
            for j in partners {
                let (family, case) = if self.kappa == 3 {
                    (vec![0, i, t.ext[i][0]], "exponent-three")
                } else {
                    (vec![0, i, j, t.ext[i][j]], t.case[i][j].expect("case table"))
                };
                tally.extended += 1;
                *tally.cases.entry(case).or_default() += 1;
                if !t.pairwise_outside(&family, d) {
                    ok = false;
                }
                first.get_or_insert(family);
            }
        }

        // the first family is also extended through the element-level
        // procedure, which certifies on the translates themselves
        if let Some(family) = &first {
            let a = t.set(self.group, mask);
            let certified = if self.kappa == 3 {
                extend_pair_exponent3(&a, &t.elements[family[1]])?.certified
            } else {
                extend_triple(&a, &t.elements[family[1]], &t.elements[family[2]])?.family.certified
            };
            ok &= certified;
        }

        let size = t.max_family(d);
        tally.subsets += 1;
        *tally.histogram.entry(size).or_default() += 1;
        if first.is_some() {
            tally.with_family += 1;
        }
        if !ok {
            tally.failures += 1;
            tally.note("extension_failures", rank, mask);
        }
        if size == self.kappa - 1 {
            tally.violations += 1;
            tally.note("violations", rank, mask);
        }
        let found = first.is_some();
        if found != (size >= self.kappa - 1) || (found && ok && size < self.kappa) {
            tally.disagreements += 1;
            tally.note("disagreements", rank, mask);
        }
        Ok(tally)
    }
}

/// Runs the extension procedures over all (or sampled) nonempty subsets of a
/// finite exceptional group, cross-checked with the exact solver.
pub fn exhaustive_no_index_check(group: &GroupSpec, kappa: usize, mode: SweepMode) -> Result<ObstructionReport> {
    check_family(group, kappa)?;
    let n = group.cardinality().expect("finite") as usize;
    if n > MASK_LIMIT {
        return Err(Error::Precondition(format!("group has {n} elements, limit is {MASK_LIMIT}")));
    }
    if mode == SweepMode::Exhaustive && n > EXHAUSTIVE_LIMIT {
        return Err(Error::Precondition(format!(
            "exhaustive sweep needs at most {EXHAUSTIVE_LIMIT} elements, group has {n}; use sampling"
        )));
    }
    let sweep = Sweep { group, kappa, tables: Tables::new(group, kappa)? };
    let full: u128 = if n == 128 { u128::MAX } else { (1 << n) - 1 };

    let tally = match mode {
        SweepMode::Exhaustive => (1..=full as u64)
            .into_par_iter()
            .try_fold(Tally::default, |t, m| sweep.visit(t, m, m as u128))
            .try_reduce(Tally::default, |a, b| Ok(a.merge(b)))?,
        SweepMode::Sampled { samples, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let masks: Vec<u128> = (0..samples)
                .map(|_| loop {
                    let m = rng.gen::<u128>() & full;
                    if m != 0 {
                        break m;
                    }
                })
                .collect();
            masks
                .par_iter()
                .enumerate()
                .try_fold(Tally::default, |t, (r, &m)| sweep.visit(t, r as u64, m))
                .try_reduce(Tally::default, |a, b| Ok(a.merge(b)))?
        }
    };

    let examples = tally.examples.iter().map(|(k, list)| (*k, list.iter().map(|&(_, m)| sweep.tables.set(group, m)).collect())).collect();
    Ok(ObstructionReport {
        group: group.clone(),
        kappa,
        mode,
        subsets_checked: tally.subsets,
        with_family: tally.with_family,
        families_extended: tally.extended,
        extension_failures: tally.failures,
        violations: tally.violations,
        disagreements: tally.disagreements,
        histogram: tally.histogram,
        cases: tally.cases,
        examples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse_group;

    fn group(s: &str) -> GroupSpec {
        parse_group(s).unwrap()
    }

    fn el(g: &GroupSpec, s: &str) -> Element {
        g.parse_element(s).unwrap()
    }

    fn set(g: &GroupSpec, xs: &[&str]) -> ElementSet {
        ElementSet::parse(g, xs).unwrap()
    }

    #[test]
    fn exponent_three_pairs() {
        let g = group("Z_3^2");
        let f = extend_pair_exponent3(&set(&g, &["(0,0)", "(1,1)"]), &el(&g, "(1,0)")).unwrap();
        assert!(f.certified);
        assert_eq!(f.shifts, set(&g, &["(0,0)", "(1,0)", "(2,0)"]));
        let f = extend_pair_exponent3(&set(&g, &["(0,0)"]), &el(&g, "(0,1)")).unwrap();
        assert_eq!(f.shifts, set(&g, &["(0,0)", "(0,1)", "(0,2)"]));
        assert!(f.certified);
    }

    #[test]
    fn exponent_three_preconditions() {
        let z9 = group("Z_9");
        let err = extend_pair_exponent3(&set(&z9, &["0"]), &el(&z9, "1")).unwrap_err();
        assert!(matches!(err, Error::Precondition(_)));
        let g = group("Z_3^2");
        assert!(extend_pair_exponent3(&set(&g, &["(0,0)"]), &g.zero()).is_err());
        let overlapping = set(&g, &["(0,0)", "(1,0)"]);
        assert!(extend_pair_exponent3(&overlapping, &el(&g, "(1,0)")).is_err());
    }

    #[test]
    fn triple_cases_from_the_formulas() {
        let g = group("Z_2^3");
        let zero = set(&g, &["(0,0,0)"]);
        let ext = extend_triple(&zero, &el(&g, "(1,0,0)"), &el(&g, "(0,1,0)")).unwrap();
        assert_eq!(ext.b3, el(&g, "(1,1,0)"));
        assert_eq!(ext.case, TripleCase::OrderTwo { swapped: false });
        assert!(ext.family.certified);

        let h = group("Z_4 + Z_2");
        let zero = set(&h, &["(0,0)"]);
        let same = extend_triple(&zero, &el(&h, "(1,0)"), &el(&h, "(1,1)")).unwrap();
        assert_eq!(same.b3, el(&h, "(0,1)"));
        assert_eq!(same.case.name(), "same-g");
        let opposite = extend_triple(&zero, &el(&h, "(1,0)"), &el(&h, "(3,1)")).unwrap();
        assert_eq!(opposite.b3, el(&h, "(2,1)"));
        assert_eq!(opposite.case.name(), "opposite-g");
        assert!(same.family.certified && opposite.family.certified);
    }

    #[test]
    fn order_two_swap() {
        let h = group("Z_4 + Z_2");
        let (b3, case) = fourth_shift(&h, &el(&h, "(1,0)"), &el(&h, "(0,1)")).unwrap();
        assert_eq!(case, TripleCase::OrderTwo { swapped: true });
        assert_eq!(b3, el(&h, "(1,1)"));
    }

    #[test]
    fn triple_preconditions() {
        let h = group("Z_4 + Z_2");
        let a = set(&h, &["(0,0)", "(1,0)"]);
        assert!(matches!(extend_triple(&a, &el(&h, "(1,0)"), &el(&h, "(2,0)")), Err(Error::Precondition(_))));
        let z8 = group("Z_8");
        assert!(matches!(extend_triple(&set(&z8, &["0"]), &el(&z8, "1"), &el(&z8, "2")), Err(Error::NotApplicable(_))));
        let two_z4 = group("Z_4 + Z_4");
        assert!(matches!(fourth_shift(&two_z4, &el(&two_z4, "(1,0)"), &el(&two_z4, "(0,1)")), Err(Error::NotApplicable(_))));
        assert!(matches!(fourth_shift(&h, &el(&h, "(1,0)"), &el(&h, "(1,0)")), Err(Error::EqualShifts)));
    }

    #[test]
    fn classification_is_total_and_unique() {
        for s in ["Z_4", "Z_4 + Z_2", "Z_4 + Z_2^2", "Z_4 + Z_2^3", "Z_2^3"] {
            let g = group(s);
            let xs = enumerate(&Window::full(&g).unwrap());
            for b1 in xs.iter().filter(|e| !e.is_zero()) {
                for b2 in xs.iter().filter(|e| !e.is_zero() && *e != b1) {
                    assert_eq!(applicable_cases(&g, b1, b2).unwrap().len(), 1, "{s}");
                }
            }
        }
    }

    #[test]
    fn small_sweeps() {
        let r = exhaustive_no_index_check(&group("Z_3^2"), 3, SweepMode::Exhaustive).unwrap();
        assert_eq!(r.subsets_checked, 511);
        assert!(r.passed());
        assert_eq!(r.histogram.get(&2), None);
        let r = exhaustive_no_index_check(&group("Z_4 + Z_2"), 4, SweepMode::Exhaustive).unwrap();
        assert_eq!(r.subsets_checked, 255);
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.histogram.values().sum::<u64>(), 255);
    }

    #[test]
    fn sweep_preconditions() {
        assert!(matches!(exhaustive_no_index_check(&group("Z_5"), 3, SweepMode::Exhaustive), Err(Error::NotApplicable(_))));
        assert!(matches!(exhaustive_no_index_check(&group("Z_3^w"), 3, SweepMode::Exhaustive), Err(Error::InfiniteGroup(_))));
        assert!(matches!(exhaustive_no_index_check(&group("Z_3^3"), 3, SweepMode::Exhaustive), Err(Error::Precondition(_))));
        assert!(matches!(exhaustive_no_index_check(&group("Z_2"), 5, SweepMode::Exhaustive), Err(Error::InvalidKappa(5))));
    }

    #[test]
    fn sampling_is_seeded() {
        let g = group("Z_3^3");
        let mode = SweepMode::Sampled { samples: 40, seed: 7 };
        let r1 = exhaustive_no_index_check(&g, 3, mode).unwrap();
        let r2 = exhaustive_no_index_check(&g, 3, mode).unwrap();
        assert_eq!(r1, r2);
        assert_eq!(r1.subsets_checked, 40);
        assert!(r1.passed());
    }
}

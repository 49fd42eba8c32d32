//! Greedy construction of a set whose sharp packing index is a prescribed
//! finite `k`, from a set `𝔹` with the three `𝔹_k` properties.
//!
//! Group elements `g` of the construction window outside `𝔹° = 𝔹 \ {0}` are
//! processed in canonical order. With `F` the points chosen so far, step `g`
//! picks the first candidate `a` outside `(F + 𝔹) ∪ (F - g + 𝔹)` and adds
//! `a` and `g + a`. The result `A` satisfies
//!
//! * I1: `(𝔹° + A) ∩ A = ∅`, equivalently `𝔹° ∩ (A - A) = ∅`;
//! * I2: every window element outside `𝔹°` lies in `A - A`.
//!
//! Together these make two shifts compatible exactly when their difference
//! lies in `𝔹`, so packing families of `A` are the cliques of `𝔹`.

use std::collections::HashSet;

use crate::bset::BSet;
use crate::diffpack::{self, DifferenceOracle};
use crate::error::{Error, Result};
use crate::group::{Element, GroupSpec};
use crate::set::ElementSet;
use crate::window::Window;

/// Default number of times the candidate window may double.
pub const MAX_EXPANSIONS: u32 = 8;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub g: Element,
    pub a: Element,
    /// `|F|` before the step.
    pub chosen: usize,
    /// `|(F + 𝔹) ∪ (F - g + 𝔹)|` before the step.
    pub forbidden: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessSet {
    pub group: GroupSpec,
    pub kappa: usize,
    pub bset: BSet,
    /// Construction window.
    pub window: Window,
    pub elements: ElementSet,
    pub trace: Vec<TraceStep>,
    /// Candidate window in use when the construction finished.
    pub ambient: Window,
    pub expansions: u32,
}

impl WitnessSet {
    /// `F` after the first `steps` steps.
    pub fn prefix(&self, steps: usize) -> Result<ElementSet> {
        let mut out = Vec::with_capacity(2 * steps);
        for s in &self.trace[..steps.min(self.trace.len())] {
            out.push(s.a.clone());
            out.push(self.group.add_unchecked(&s.g, &s.a)?);
        }
        ElementSet::new(&self.group, out)
    }
}

pub fn build_witness(bset: &BSet, window: &Window) -> Result<WitnessSet> {
    build_witness_with(bset, window, MAX_EXPANSIONS)
}

pub fn build_witness_with(bset: &BSet, window: &Window, max_expansions: u32) -> Result<WitnessSet> {
    let group = bset.elements.group();
    if window.group() != group {
        return Err(Error::GroupMismatch { group: group.to_string(), reason: "window is over another group".into() });
    }
    bset.elements.require_symmetric_with_zero()?;

    let b: Vec<&Element> = bset.elements.iter().collect();
    let mut ambient = window.clone();
    let mut ambient_len = ambient.len()?;
    let mut expansions = 0;
    let mut chosen: HashSet<Element> = HashSet::new();
    // F + 𝔹
    let mut cover: HashSet<Element> = HashSet::new();
    let mut trace = Vec::new();

    for g in window.iter() {
        if bset.elements.contains(&g) && !g.is_zero() {
            continue;
        }
        let forbidden = forbidden_size(group, &cover, &g)?;
        let mut rank = 0u128;
        let a = loop {
            if rank == ambient_len {
                match ambient.expanded() {
                    Some(next) if expansions < max_expansions => {
                        ambient = next;
                        ambient_len = ambient.len()?;
                        expansions += 1;
                        rank = 0;
                        continue;
                    }
                    Some(_) => return Err(Error::CandidateExhausted { g: group.format_element(&g), expansions }),
                    None => return Err(Error::PropertyThreeViolated { g: group.format_element(&g) }),
                }
            }
            let c = ambient.element_at(rank);
            rank += 1;
            if !cover.contains(&c) && !cover.contains(&group.add_unchecked(&c, &g)?) {
                break c;
            }
        };
        let partner = group.add_unchecked(&g, &a)?;
        trace.push(TraceStep { g: g.clone(), a: a.clone(), chosen: chosen.len(), forbidden });
        for p in [a, partner] {
            if chosen.insert(p.clone()) {
                for x in &b {
                    cover.insert(group.add_unchecked(&p, x)?);
                }
            }
        }
    }

    Ok(WitnessSet {
        group: group.clone(),
        kappa: bset.kappa,
        bset: bset.clone(),
        window: window.clone(),
        elements: ElementSet::new(group, chosen)?,
        trace,
        ambient,
        expansions,
    })
}

/// `|S ∪ (S - g)|`.
fn forbidden_size(group: &GroupSpec, cover: &HashSet<Element>, g: &Element) -> Result<usize> {
    let mut extra = 0;
    for s in cover {
        if !cover.contains(&group.sub_unchecked(s, g)?) {
            extra += 1;
        }
    }
    Ok(cover.len() + extra)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantCheck {
    pub holds: bool,
    /// Offending elements, at most [`COUNTEREXAMPLE_LIMIT`].
    pub counterexamples: Vec<Element>,
    pub violations: usize,
}

pub const COUNTEREXAMPLE_LIMIT: usize = 16;

impl InvariantCheck {
    fn from_violations(mut found: Vec<Element>) -> Self {
        let violations = found.len();
        found.truncate(COUNTEREXAMPLE_LIMIT);
        InvariantCheck { holds: violations == 0, counterexamples: found, violations }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessReport {
    /// `(𝔹° + A) ∩ A = ∅`; counterexamples are the elements of the
    /// intersection.
    pub i1_translates: InvariantCheck,
    /// `𝔹° ∩ (A - A) = ∅`; counterexamples are the shared differences.
    pub i1_differences: InvariantCheck,
    /// `window \ 𝔹° ⊂ A - A`; counterexamples are the missing differences.
    pub i2: InvariantCheck,
}

impl WitnessReport {
    pub fn i1_agree(&self) -> bool {
        self.i1_translates.holds == self.i1_differences.holds
    }

    pub fn passed(&self) -> bool {
        self.i1_agree() && self.i1_translates.holds && self.i2.holds
    }
}

/// Checks both invariants exactly; failures are reported, not raised.
pub fn verify_witness(w: &WitnessSet) -> Result<WitnessReport> {
    verify_parts(&w.elements, &w.bset.elements, &w.window)
}

/// Invariant check for an arbitrary `A`, `𝔹` and window.
pub fn verify_parts(a: &ElementSet, b: &ElementSet, window: &Window) -> Result<WitnessReport> {
    let g = a.group();
    let punctured: Vec<&Element> = b.iter().filter(|e| !e.is_zero()).collect();

    let mut hits = Vec::new();
    for x in a.iter() {
        for d in &punctured {
            let y = g.add_unchecked(x, d)?;
            if a.contains(&y) {
                hits.push(y);
            }
        }
    }
    hits.sort();
    hits.dedup();
    let i1_translates = InvariantCheck::from_violations(hits);

    let mut oracle = DifferenceOracle::new(a);
    let mut shared = Vec::new();
    for d in &punctured {
        if oracle.contains(d)? {
            shared.push((*d).clone());
        }
    }
    let i1_differences = InvariantCheck::from_violations(shared);

    let mut missing = Vec::new();
    for e in window.iter() {
        if !(b.contains(&e) && !e.is_zero()) && !oracle.contains(&e)? {
            missing.push(e);
        }
    }
    let i2 = InvariantCheck::from_violations(missing);
    Ok(WitnessReport { i1_translates, i1_differences, i2 })
}

/// Shift window used for the index: its differences stay inside the
/// construction window, where the invariants determine compatibility.
pub fn shift_window(w: &WitnessSet) -> Window {
    w.window.difference_core()
}

/// Maximum packing family of the witness over [`shift_window`]; requires
/// both invariants.
pub fn max_family(w: &WitnessSet) -> Result<diffpack::PackingFamily> {
    if !verify_witness(w)?.passed() {
        return Err(Error::InvariantsNotVerified);
    }
    diffpack::max_packing_family(&w.elements, &shift_window(w))
}

/// One more than [`max_family`]'s size; equals `kappa` when `𝔹` has the
/// `𝔹_k` properties and the window is large enough.
pub fn windowed_sharp_index(w: &WitnessSet) -> Result<usize> {
    Ok(max_family(w)?.size() + 1)
}

//! The clique solver against plain enumeration of shift families, and the
//! obstruction sweeps against the solver's public entry point.

use std::collections::HashSet;

use packing::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Largest family of shifts from `window` whose translates of `a` are
/// pairwise disjoint, found by extending every admissible family.
fn oracle(a: &ElementSet, window: &Window) -> usize {
    let g = a.group();
    let shifts: Vec<Element> = window.iter().collect();
    let translates: Vec<HashSet<Element>> = shifts.iter().map(|s| a.iter().map(|x| g.add(x, s).unwrap()).collect()).collect();
    fn grow(from: usize, picked: &mut Vec<usize>, t: &[HashSet<Element>], best: &mut usize) {
        *best = (*best).max(picked.len());
        for i in from..t.len() {
            if picked.iter().all(|&j| t[i].is_disjoint(&t[j])) {
                picked.push(i);
                grow(i + 1, picked, t, best);
                picked.pop();
            }
        }
    }
    let mut best = 0;
    grow(0, &mut Vec::new(), &translates, &mut best);
    best
}

fn random_instance(rng: &mut ChaCha8Rng) -> (ElementSet, Window) {
    let choices: [(&str, u64, u32); 7] =
        [("Z", 8, 1), ("Z_17", 1, 1), ("Z_3^2", 1, 1), ("Z + Z_2", 4, 1), ("Z_2^w", 1, 4), ("Prufer(2)", 1, 4), ("Z_4 + Z_2^2", 1, 1)];
    let (s, r, m) = choices[rng.gen_range(0..choices.len())];
    let g = parse_group(s).unwrap();
    let window = Window::new(&g, r, m).unwrap();
    let len = window.len().unwrap();
    let size = rng.gen_range(1..=6);
    let a = ElementSet::new(&g, (0..size).map(|_| window.element_at(rng.gen_range(0..len)))).unwrap();
    (a, window)
}

#[test]
fn solver_matches_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for case in 0..120 {
        let (a, window) = random_instance(&mut rng);
        assert!(window.len().unwrap() <= 18);
        let family = max_packing_family(&a, &window).unwrap();
        assert!(family.certified);
        assert_eq!(family.size(), oracle(&a, &window), "case {case}: {:?}", a.to_strings());
    }
}

#[test]
fn mask_sweep_matches_public_solver() {
    for (s, kappa) in [("Z_3^2", 3), ("Z_4 + Z_2", 4)] {
        let g = parse_group(s).unwrap();
        let report = exhaustive_no_index_check(&g, kappa, SweepMode::Exhaustive).unwrap();
        let whole = Window::full(&g).unwrap();
        let elements = enumerate(&whole);
        let mut histogram = std::collections::BTreeMap::new();
        for mask in 1u32..1 << elements.len() {
            let a = ElementSet::new(&g, (0..elements.len()).filter(|i| mask >> i & 1 == 1).map(|i| elements[i].clone())).unwrap();
            *histogram.entry(max_packing_family(&a, &whole).unwrap().size()).or_insert(0u64) += 1;
        }
        assert_eq!(report.histogram, histogram, "{s}");
        assert!(!histogram.contains_key(&(kappa - 1)));
    }
}

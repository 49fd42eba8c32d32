use std::fs;
use std::path::Path;

use packing::bset::{build_bset, check_property_1, is_exceptional};
use packing::obstruction::{exhaustive_no_index_check, SweepMode, EXHAUSTIVE_LIMIT};
use packing::pairmap::{common_point, induced_injective, search_pairmap, validate};
use packing::witness::{build_witness, max_family, shift_window, verify_witness, InvariantCheck};
use packing::{max_clique_in_bset, max_packing_family, parse_group, Bound, Element, ElementSet, Error, GroupSpec, Window};
use serde_json::{json, Map, Value};

use crate::report::Check;

pub const DEFAULT_SAMPLES: u64 = 10_000;

pub struct Outcome {
    pub results: Value,
    pub checks: Vec<Check>,
    /// Extra wall-clock entries, reported only on request.
    pub timing: Map<String, Value>,
}

impl Outcome {
    pub fn new(results: Value, checks: Vec<Check>) -> Outcome {
        Outcome { results, checks, timing: Map::new() }
    }
}

pub enum Failure {
    /// Bad input text or unusable files; exit code 2.
    Usage(String),
    /// The computation itself refused; exit code 1 with an error report.
    Domain(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        if e.is_input_error() {
            Failure::Usage(e.to_string())
        } else {
            Failure::Domain(e)
        }
    }
}

type Run = Result<Outcome, Failure>;

fn group(text: &str) -> Result<GroupSpec, Failure> {
    parse_group(text).map_err(|e| Failure::Usage(format!("group {text:?}: {e}")))
}

pub fn set_json(s: &ElementSet) -> Value {
    json!(s.to_strings())
}

fn el(g: &GroupSpec, e: &Element) -> Value {
    json!(g.format_element(e))
}

fn big(n: u128) -> Value {
    u64::try_from(n).map_or_else(|_| json!(n.to_string()), |x| json!(x))
}

pub fn window_json(w: &Window) -> Value {
    let bounds: Vec<String> = w
        .bounds()
        .iter()
        .map(|b| match b {
            Bound::Full => "full".to_string(),
            Bound::Radius(r) => format!("radius {r}"),
            Bound::Coords(m) => format!("coords {m}"),
            Bound::Levels(m) => format!("levels {m}"),
        })
        .collect();
    json!({"bounds": bounds, "size": w.len().map_or(Value::Null, big)})
}

fn invariant_json(g: &GroupSpec, c: &InvariantCheck) -> Value {
    let examples: Vec<Value> = c.counterexamples.iter().map(|e| el(g, e)).collect();
    json!({"holds": c.holds, "violations": c.violations, "counterexamples": examples})
}

pub fn index(set: &Path, radius: u64, m: u32) -> Run {
    let text = fs::read_to_string(set).map_err(|e| Failure::Usage(format!("set file {}: {e}", set.display())))?;
    let a = ElementSet::from_json(&text)?;
    let w = Window::new(a.group(), radius, m)?;
    let family = max_packing_family(&a, &w)?;
    let results = json!({
        "group": a.group().to_string(),
        "set": set_json(&a),
        "window": window_json(&w),
        "family": set_json(&family.shifts),
        "packing_index": family.size(),
        "sharp_index": family.size() + 1,
    });
    let checks = vec![Check::new("family_certified", family.certified, format!("{} pairwise disjoint translates", family.size()))];
    Ok(Outcome::new(results, checks))
}

pub fn bset(text: &str, kappa: usize, check: bool) -> Run {
    let g = group(text)?;
    let exceptional = is_exceptional(&g, kappa)?;
    let b = build_bset(&g, kappa)?;
    let mut results = json!({
        "group": g.to_string(),
        "kappa": kappa,
        "exceptional": exceptional,
        "provenance": b.provenance.tag(),
        "elements": set_json(&b.elements),
        "base": b.base.as_ref().map(set_json),
    });
    let mut checks = Vec::new();
    if check {
        let witness = match check_property_1(&b) {
            Ok(c) => Some(c),
            Err(Error::PropertyFailed { .. }) => None,
            Err(e) => return Err(e.into()),
        };
        let max = max_clique_in_bset(&b.elements)?;
        let p1 = witness.as_ref().is_some_and(|c| c.len() == kappa - 1);
        let p2 = max.size < kappa;
        results["property_1"] = json!({"holds": p1, "witness": witness.as_ref().map(set_json)});
        results["property_2"] = json!({"holds": p2, "max_clique": max.size, "max_clique_witness": set_json(&max.members)});
        checks.push(Check::new("property_1", p1, format!("set of size {} with differences inside", kappa - 1)));
        checks.push(Check::new("property_2", p2, format!("largest such set has size {}", max.size)));
    }
    Ok(Outcome::new(results, checks))
}

pub fn witness(text: &str, kappa: usize, radius: u64, m: u32, verify: bool) -> Run {
    let g = group(text)?;
    let b = build_bset(&g, kappa)?;
    let window = Window::new(&g, radius, m)?;
    let w = build_witness(&b, &window)?;
    let trace: Vec<Value> =
        w.trace.iter().map(|s| json!({"g": el(&g, &s.g), "a": el(&g, &s.a), "chosen": s.chosen, "forbidden": s.forbidden})).collect();
    let mut results = json!({
        "group": g.to_string(),
        "kappa": kappa,
        "bset": set_json(&b.elements),
        "provenance": b.provenance.tag(),
        "window": window_json(&window),
        "ambient": window_json(&w.ambient),
        "expansions": w.expansions,
        "size": w.elements.len(),
        "elements": set_json(&w.elements),
        "trace": trace,
    });
    let mut checks = vec![Check::new("built", true, format!("{} steps", w.trace.len()))];
    if verify {
        let r = verify_witness(&w)?;
        results["invariants"] = json!({
            "i1_translates": invariant_json(&g, &r.i1_translates),
            "i1_differences": invariant_json(&g, &r.i1_differences),
            "i1_agree": r.i1_agree(),
            "i2": invariant_json(&g, &r.i2),
        });
        checks.push(Check::new("i1", r.i1_translates.holds, format!("{} violations", r.i1_translates.violations)));
        checks.push(Check::new("i1_agree", r.i1_agree(), "both formulations"));
        checks.push(Check::new("i2", r.i2.holds, format!("{} window elements missing from A - A", r.i2.violations)));
        if r.passed() {
            let family = max_family(&w)?;
            let index = family.size() + 1;
            results["shift_window"] = window_json(&shift_window(&w));
            results["max_family"] = set_json(&family.shifts);
            results["windowed_sharp_index"] = json!(index);
            checks.push(Check::new("index_equals_kappa", index == kappa, format!("windowed sharp index {index}")));
        } else {
            checks.push(Check::new("index_equals_kappa", false, "invariants not verified"));
        }
    }
    Ok(Outcome::new(results, checks))
}

pub fn obstruct(text: &str, kappa: usize, sample: Option<u64>, seed: u64) -> Run {
    let g = group(text)?;
    let mode = match (sample, g.cardinality()) {
        (Some(samples), _) => SweepMode::Sampled { samples, seed },
        (None, Some(n)) if n > EXHAUSTIVE_LIMIT as u128 => SweepMode::Sampled { samples: DEFAULT_SAMPLES, seed },
        _ => SweepMode::Exhaustive,
    };
    let r = exhaustive_no_index_check(&g, kappa, mode)?;
    let histogram: Map<String, Value> = r.histogram.iter().map(|(k, v)| (k.to_string(), json!(v))).collect();
    let cases: Map<String, Value> = r.cases.iter().map(|(k, v)| (k.to_string(), json!(v))).collect();
    let examples: Map<String, Value> =
        r.examples.iter().map(|(k, sets)| (k.to_string(), Value::Array(sets.iter().map(set_json).collect()))).collect();
    let (mode_name, samples) = match mode {
        SweepMode::Exhaustive => ("exhaustive", Value::Null),
        SweepMode::Sampled { samples, .. } => ("sampled", json!(samples)),
    };
    let results = json!({
        "group": g.to_string(),
        "kappa": kappa,
        "mode": mode_name,
        "samples": samples,
        "subsets_checked": r.subsets_checked,
        "with_family": r.with_family,
        "families_extended": r.families_extended,
        "extension_failures": r.extension_failures,
        "violations": r.violations,
        "disagreements": r.disagreements,
        "histogram": histogram,
        "cases": cases,
        "examples": examples,
    });
    let checks = vec![
        Check::new("no_violations", r.violations == 0, format!("{} subsets with maximum family of size {}", r.violations, kappa - 1)),
        Check::new("extensions_certified", r.extension_failures == 0, format!("{} families extended", r.families_extended)),
        Check::new("solver_agreement", r.disagreements == 0, format!("{} disagreements", r.disagreements)),
    ];
    Ok(Outcome::new(results, checks))
}

pub fn pairmap(a: usize, b: usize, budget: Option<u64>) -> Run {
    let search = search_pairmap(a, b, budget)?;
    let mut results = json!({
        "a": a,
        "b": b,
        "outcome": if search.found.is_some() { "found" } else { "none" },
        "nodes": search.nodes,
    });
    let mut checks = Vec::new();
    if let Some(f) = &search.found {
        let table: Vec<Value> = (0..f.table().len())
            .map(|r| {
                let (i, j) = packing::pairmap::pair_unrank(r);
                let (u, v) = f.table()[r];
                json!({"pair": [i, j], "image": [u, v]})
            })
            .collect();
        let v = validate(f);
        let common: Vec<Option<usize>> = (0..a).map(|a0| common_point(f, a0)).collect();
        let injective: Vec<bool> = (0..a).map(|a0| induced_injective(f, a0)).collect();
        results["table"] = json!(table);
        results["validation"] =
            json!({"separately_injective": v.separately_injective, "preserves_intersections": v.preserves_intersections});
        results["common_points"] = json!(common);
        results["induced_injective"] = json!(injective);
        checks.push(Check::new("valid", v.valid(), "separately injective and preserves intersections"));
        if a >= 5 {
            let all = common.iter().all(Option::is_some) && injective.iter().all(|&x| x);
            checks.push(Check::new("common_points", all, "every a0 has a common point and an injective induced map"));
        }
    }
    if a >= 5 {
        let ok = search.found.is_none() || a <= b;
        checks.push(Check::new("codomain_bound", ok, format!("valid map exists: {}", search.found.is_some())));
    }
    Ok(Outcome::new(results, checks))
}

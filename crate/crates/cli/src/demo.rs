//! The acceptance matrix. Criteria 1 to 5 and 7 are driven through the same
//! entry point as the command line; criterion 6 compares the exact solver
//! with plain enumeration on seeded random instances.

use std::collections::HashSet;
use std::time::Instant;

use packing::{max_packing_family, parse_group, Element, ElementSet, Window};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use crate::commands::Outcome;
use crate::report::Check;

#[derive(Clone, Debug, PartialEq)]
pub struct Criterion {
    pub id: u8,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
    pub limit_seconds: f64,
}

impl Criterion {
    pub fn line(&self) -> String {
        format!(
            "criterion {} [{}] {}: {} ({:.1} s, limit {} s)",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.title,
            self.detail,
            self.seconds,
            self.limit_seconds
        )
    }
}

fn args(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

/// Runs `pack <args>` in process and parses its JSON report.
pub fn invoke(argv: &[String]) -> (i32, Value, String) {
    let exit = crate::run(std::iter::once("pack".to_string()).chain(argv.iter().cloned()));
    let value = serde_json::from_str(&exit.stdout).unwrap_or(Value::Null);
    (exit.code, value, exit.stdout)
}

struct Timer(Instant);

impl Timer {
    fn start() -> Timer {
        Timer(Instant::now())
    }

    fn seconds(&self) -> f64 {
        self.0.elapsed().as_secs_f64()
    }
}

fn finish(id: u8, title: &'static str, ok: bool, detail: String, seconds: f64, limit: f64) -> Criterion {
    Criterion { id, title, passed: ok && seconds <= limit, detail, seconds, limit_seconds: limit }
}

fn sweep_ok(v: &Value, subsets: u64) -> bool {
    let r = &v["results"];
    r["mode"] == "exhaustive"
        && r["subsets_checked"] == subsets
        && r["violations"] == 0
        && r["extension_failures"] == 0
        && r["disagreements"] == 0
}

pub fn criterion_1() -> Criterion {
    let t = Timer::start();
    let (code, v, _) = invoke(&args(&["obstruct", "--group", "Z_3^2", "--kappa", "3"]));
    let ok = code == 0 && sweep_ok(&v, 511);
    let r = &v["results"];
    let detail = format!(
        "Z_3^2: {} subsets, {} violations, {} pairs extended, {} failures",
        r["subsets_checked"], r["violations"], r["families_extended"], r["extension_failures"]
    );
    finish(1, "exceptional family kappa=3", ok, detail, t.seconds(), 10.0)
}

pub fn criterion_2() -> Criterion {
    let t = Timer::start();
    let mut ok = true;
    let mut parts = Vec::new();
    for (group, subsets) in [("Z_2^4", 65535), ("Z_4 + Z_2", 255), ("Z_4 + Z_2^2", 65535)] {
        let (code, v, _) = invoke(&args(&["obstruct", "--group", group, "--kappa", "4"]));
        ok &= code == 0 && sweep_ok(&v, subsets);
        let r = &v["results"];
        parts.push(format!(
            "{group}: {} subsets, {} violations, {} triples extended",
            r["subsets_checked"], r["violations"], r["families_extended"]
        ));
    }
    finish(2, "exceptional family kappa=4", ok, parts.join("; "), t.seconds(), 300.0)
}

/// `(group, kappa)` cells of the attainability matrix.
pub fn matrix_cells() -> Vec<(&'static str, usize)> {
    let mut cells: Vec<(&str, usize)> = (2..=9).map(|k| ("Z", k)).collect();
    cells.extend([("Z_5^w", 4), ("Z_3^w", 4), ("Prufer(2)", 5), ("Prufer(2)", 6), ("Z_3^w", 5), ("Z_3^w", 6)]);
    cells
}

pub fn invocations_3() -> Vec<Vec<String>> {
    matrix_cells().into_iter().map(|(g, k)| args(&["bset", "--group", g, "--kappa", &k.to_string(), "--check"])).collect()
}

pub fn invocations_4() -> Vec<Vec<String>> {
    (2..=9).map(|k| args(&["witness", "--group", "Z", "--kappa", &k.to_string(), "--window", "200", "--verify"])).collect()
}

pub fn invocations_5() -> Vec<Vec<String>> {
    vec![args(&["pairmap", "--a", "5", "--b", "4"]), args(&["pairmap", "--a", "5", "--b", "3"]), args(&["pairmap", "--a", "5", "--b", "5"])]
}

pub fn criterion_3() -> Criterion {
    let t = Timer::start();
    let mut ok = true;
    let mut failed = Vec::new();
    let mut slowest = 0f64;
    for ((g, k), argv) in matrix_cells().into_iter().zip(invocations_3()) {
        let cell = Timer::start();
        let (code, v, _) = invoke(&argv);
        let r = &v["results"];
        let size = r["property_1"]["witness"].as_array().map_or(0, Vec::len);
        let cell_ok = code == 0
            && size == k - 1
            && r["property_1"]["holds"] == true
            && r["property_2"]["holds"] == true
            && r["property_2"]["max_clique"] == k - 1;
        slowest = slowest.max(cell.seconds());
        if !cell_ok {
            failed.push(format!("{g} kappa {k}"));
        }
        ok &= cell_ok;
    }
    let detail = if failed.is_empty() {
        format!("{} cells, clique number exactly kappa - 1 in each", matrix_cells().len())
    } else {
        format!("failed cells: {}", failed.join(", "))
    };
    let mut c = finish(3, "attainability matrix", ok, detail, t.seconds(), 60.0);
    c.passed = ok && slowest <= 60.0;
    c
}

pub fn criterion_4() -> Criterion {
    let t = Timer::start();
    let mut ok = true;
    let mut slowest = 0f64;
    let mut indices = Vec::new();
    for (k, argv) in (2..=9).zip(invocations_4()) {
        let step = Timer::start();
        let (code, v, _) = invoke(&argv);
        let r = &v["results"];
        let inv = &r["invariants"];
        let good = code == 0
            && inv["i1_translates"]["holds"] == true
            && inv["i1_differences"]["holds"] == true
            && inv["i2"]["holds"] == true
            && r["windowed_sharp_index"] == k;
        slowest = slowest.max(step.seconds());
        indices.push(format!("{k}->{}", r["windowed_sharp_index"]));
        ok &= good;
    }
    let detail = format!("window [-200,200], kappa->index: {}", indices.join(" "));
    let mut c = finish(4, "witness construction in Z", ok, detail, t.seconds(), 60.0);
    c.passed = ok && slowest <= 60.0;
    c
}

pub fn criterion_5() -> Criterion {
    let t = Timer::start();
    let outcomes: Vec<(i32, Value)> = invocations_5()
        .iter()
        .map(|a| {
            let (code, v, _) = invoke(a);
            (code, v)
        })
        .collect();
    let none = |i: usize| outcomes[i].0 == 0 && outcomes[i].1["results"]["outcome"] == "none";
    let five = &outcomes[2].1["results"];
    let points_ok = five["common_points"].as_array().is_some_and(|ps| ps.len() == 5 && ps.iter().all(|p| !p.is_null()));
    let found_ok = outcomes[2].0 == 0
        && five["outcome"] == "found"
        && five["validation"]["separately_injective"] == true
        && five["validation"]["preserves_intersections"] == true;
    let ok = none(0) && none(1) && found_ok && points_ok;
    let detail = format!(
        "(5,4): {} after {} nodes; (5,3): {} after {} nodes; (5,5): {} with common points {}",
        outcomes[0].1["results"]["outcome"],
        outcomes[0].1["results"]["nodes"],
        outcomes[1].1["results"]["outcome"],
        outcomes[1].1["results"]["nodes"],
        five["outcome"],
        five["common_points"]
    );
    finish(5, "pair map boundary", ok, detail, t.seconds(), 300.0)
}

/// Largest family of pairwise disjoint translates, by extending every
/// admissible family of shifts.
pub fn enumeration_oracle(a: &ElementSet, window: &Window) -> usize {
    let g = a.group();
    let translates: Vec<HashSet<Element>> = window.iter().map(|s| a.iter().map(|x| g.add(x, &s).expect("same group")).collect()).collect();
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

const INSTANCE_GROUPS: [(&str, u64, u32); 8] = [
    ("Z", 8, 1),
    ("Z", 5, 1),
    ("Z_18", 1, 1),
    ("Z_3^2", 1, 1),
    ("Z + Z_2", 4, 1),
    ("Z_2^w", 1, 4),
    ("Prufer(2)", 1, 4),
    ("Z_4 + Z_2^2", 1, 1),
];

/// Seeded random `(A, window)` pairs with at most 18 shifts and `|A| <= 6`.
pub fn random_instances(count: usize, seed: u64) -> Vec<(ElementSet, Window)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let (s, r, m) = INSTANCE_GROUPS[rng.gen_range(0..INSTANCE_GROUPS.len())];
            let g = parse_group(s).expect("fixed group text");
            let w = Window::new(&g, r, m).expect("fixed window");
            let len = w.len().expect("small window");
            let size = rng.gen_range(1..=6);
            let a = ElementSet::new(&g, (0..size).map(|_| w.element_at(rng.gen_range(0..len)))).expect("window elements");
            (a, w)
        })
        .collect()
}

pub fn criterion_6() -> Criterion {
    let t = Timer::start();
    let instances = random_instances(200, 6);
    let agree = instances
        .iter()
        .filter(|(a, w)| max_packing_family(a, w).map(|f| f.certified && f.size() == enumeration_oracle(a, w)).unwrap_or(false))
        .count();
    finish(6, "solver soundness", agree == 200, format!("{agree}/200 instances agree with enumeration"), t.seconds(), f64::INFINITY)
}

pub fn criterion_7() -> Criterion {
    let t = Timer::start();
    let mut differing = Vec::new();
    let mut total = 0;
    for argv in invocations_3().into_iter().chain(invocations_4()).chain(invocations_5()) {
        let with = |n: &str| {
            let mut a = argv.clone();
            a.extend(args(&["--threads", n]));
            invoke(&a).2
        };
        total += 1;
        let (one, eight) = (with("1"), with("8"));
        if one != eight || one.is_empty() {
            differing.push(argv.join(" "));
        }
    }
    let detail = if differing.is_empty() {
        format!("{total} reports byte-identical at 1 and 8 threads")
    } else {
        format!("differing: {}", differing.join("; "))
    };
    finish(7, "determinism across thread counts", differing.is_empty(), detail, t.seconds(), f64::INFINITY)
}

pub fn run_all() -> Vec<Criterion> {
    vec![criterion_1(), criterion_2(), criterion_3(), criterion_4(), criterion_5(), criterion_6(), criterion_7()]
}

pub(crate) fn outcome(criteria: &[Criterion]) -> Outcome {
    let list: Vec<Value> = criteria.iter().map(|c| json!({"id": c.id, "title": c.title, "passed": c.passed, "detail": c.detail})).collect();
    let checks = criteria.iter().map(|c| Check::new(format!("criterion_{}", c.id), c.passed, c.detail.clone())).collect();
    let mut seconds = Map::new();
    for c in criteria {
        seconds.insert(format!("criterion_{}", c.id), json!(c.seconds));
    }
    Outcome { results: json!({"criteria": list}), checks, timing: seconds }
}

use packing::bset::prufer_level_for;
use packing::witness::{build_witness, verify_parts, verify_witness, windowed_sharp_index as witness_index};
use packing::*;
use proptest::prelude::*;

const GROUPS: &[(&str, u64, u32)] = &[
    ("Z", 12, 1),
    ("Z_6", 1, 1),
    ("Z_4 + Z_2", 1, 1),
    ("Z + Z_3", 4, 1),
    ("Z_2^w", 1, 4),
    ("Z_5^w", 1, 3),
    ("Prufer(2)", 1, 4),
    ("Prufer(3) + Z", 2, 2),
    ("Z_4 + Z_2^w", 1, 3),
];

fn window(i: usize) -> Window {
    let (s, r, m) = GROUPS[i];
    Window::new(&parse_group(s).unwrap(), r, m).unwrap()
}

fn pick(w: &Window, r: u64) -> Element {
    w.element_at(r as u128 % w.len().unwrap())
}

fn subset(w: &Window, ranks: &[u64]) -> ElementSet {
    ElementSet::new(w.group(), ranks.iter().map(|&r| pick(w, r))).unwrap()
}

fn in_pool<R>(threads: usize, f: impl FnOnce() -> R + Send) -> R
where
    R: Send,
{
    rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap().install(f)
}

proptest! {
    #[test]
    fn group_laws(i in 0..GROUPS.len(), x in any::<u64>(), y in any::<u64>(), z in any::<u64>()) {
        let w = window(i);
        let g = w.group();
        let (a, b, c) = (pick(&w, x), pick(&w, y), pick(&w, z));
        prop_assert_eq!(g.add(&g.add(&a, &b)?, &c)?, g.add(&a, &g.add(&b, &c)?)?);
        prop_assert_eq!(g.add(&a, &b)?, g.add(&b, &a)?);
        prop_assert!(g.add(&a, &g.neg(&a)?)?.is_zero());
        prop_assert_eq!(g.neg(&g.neg(&a)?)?, a.clone());
        prop_assert_eq!(g.sub(&a, &b)?, g.add(&a, &g.neg(&b)?)?);
        if let (Order::Finite(o), Order::Finite(e)) = (g.order(&a)?, g.exponent()) {
            prop_assert_eq!(e % o, 0);
        }
        if let Order::Finite(o) = g.order(&a)? {
            prop_assert!(g.scalar_mul(o as i64, &a)?.is_zero());
        }
        let text = g.format_element(&a);
        prop_assert_eq!(g.parse_element(&text)?, a);
    }

    #[test]
    fn group_text_round_trip(i in 0..GROUPS.len()) {
        let g = window(i).group().clone();
        let text = g.to_string();
        prop_assert_eq!(parse_group(&text)?, g.clone());
        prop_assert_eq!(parse_group(&text)?.to_string(), text);
    }

    #[test]
    fn difference_sets_are_symmetric(i in 0..GROUPS.len(), ranks in prop::collection::vec(any::<u64>(), 1..7)) {
        let w = window(i);
        let a = subset(&w, &ranks);
        let d = difference_set(&a)?;
        prop_assert!(d.contains(&w.group().zero()));
        prop_assert!(d.is_symmetric()?);
    }

    #[test]
    fn disjointness_matches_differences(i in 0..GROUPS.len(), ranks in prop::collection::vec(any::<u64>(), 1..6), x in any::<u64>(), y in any::<u64>()) {
        let w = window(i);
        let g = w.group();
        let a = subset(&w, &ranks);
        let (b, b2) = (pick(&w, x), pick(&w, y));
        prop_assume!(b != b2);
        let diff = g.sub(&b, &b2)?;
        let d = difference_set(&a)?;
        prop_assert_eq!(translates_disjoint(&a, &b, &b2)?, !d.contains(&diff));
    }

    #[test]
    fn family_size_grows_with_window(ranks in prop::collection::vec(-6i64..=6, 1..5), r in 1u64..8) {
        let z = parse_group("Z").unwrap();
        let items: Vec<String> = ranks.iter().map(|x| x.to_string()).collect();
        let a = ElementSet::parse(&z, &items)?;
        let small = max_packing_family(&a, &Window::new(&z, r, 1)?)?.size();
        let large = max_packing_family(&a, &Window::new(&z, r + 3, 1)?)?.size();
        prop_assert!(small <= large);
        prop_assert_eq!(windowed_sharp_index(&a, &Window::new(&z, r, 1)?)?, small + 1);
    }

    #[test]
    fn family_is_thread_count_independent(i in 0..GROUPS.len(), ranks in prop::collection::vec(any::<u64>(), 1..4)) {
        let (s, _, _) = GROUPS[i];
        let g = parse_group(s).unwrap();
        let w = Window::new(&g, 4, 1)?;
        let a = subset(&window(i), &ranks);
        let one = in_pool(1, || max_packing_family(&a, &w))?;
        let four = in_pool(4, || max_packing_family(&a, &w))?;
        prop_assert_eq!(one, four);
    }
}

#[test]
fn bset_clique_number_is_exact() {
    let cases = [("Z", 2..=10), ("Prufer(2)", 5..=10), ("Prufer(3)", 5..=10), ("Z_2^w", 5..=8), ("Z_3^w", 5..=8), ("Z + Z_2", 2..=10)];
    for (s, kappas) in cases {
        let g = parse_group(s).unwrap();
        for kappa in kappas {
            let b = build_bset(&g, kappa).unwrap();
            assert!(b.elements.is_symmetric().unwrap() && b.elements.contains(&g.zero()));
            assert_eq!(max_clique_in_bset(&b.elements).unwrap().size, kappa - 1, "{s} kappa {kappa}");
            assert_eq!(check_property_1(&b).unwrap().len(), kappa - 1);
            assert!(check_property_2(&b).unwrap());
            assert_eq!(build_bset(&g, kappa).unwrap(), b);
        }
    }
    for s in ["Z_2^w", "Z_3^w", "Z_4^w", "Z_5^w", "Z_6^w", "Prufer(2)", "Prufer(5)", "Z_2 + Z_3^w", "Z_4 + Z_4 + Z_2^w"] {
        let g = parse_group(s).unwrap();
        for kappa in 3..=4 {
            match build_bset(&g, kappa) {
                Ok(b) => assert_eq!(max_clique_in_bset(&b.elements).unwrap().size, kappa - 1, "{s} kappa {kappa}"),
                Err(Error::ExceptionalGroup { .. }) => assert!(is_exceptional(&g, kappa).unwrap()),
                Err(e) => panic!("{s} kappa {kappa}: {e}"),
            }
        }
    }
    assert_eq!(prufer_level_for(2, 10), 5);
}

#[test]
fn exceptional_groups_are_refused() {
    for (s, kappa) in [("Z_3^w", 3), ("Z_3 + Z_3^w", 3), ("Z_2^w", 4), ("Z_4 + Z_2^w", 4), ("Z_2 + Z_2^w", 4)] {
        let g = parse_group(s).unwrap();
        assert!(is_exceptional(&g, kappa).unwrap());
        assert!(matches!(build_bset(&g, kappa), Err(Error::ExceptionalGroup { .. })));
    }
}

#[test]
fn witnesses_in_several_groups() {
    let cases =
        [("Z", 3, 40, 1), ("Z_3^w", 4, 1, 3), ("Z_5^w", 4, 1, 2), ("Z_2^w", 5, 1, 5), ("Prufer(2)", 5, 1, 5), ("Z + Z_2", 4, 12, 1)];
    for (s, kappa, r, m) in cases {
        let g = parse_group(s).unwrap();
        let b = build_bset(&g, kappa).unwrap();
        let w = Window::new(&g, r, m).unwrap();
        let wit = build_witness(&b, &w).unwrap();
        let report = verify_witness(&wit).unwrap();
        assert!(report.i1_agree(), "{s}");
        assert!(report.passed(), "{s}: {report:?}");
        assert_eq!(witness_index(&wit).unwrap(), kappa, "{s}");
        assert_eq!(build_witness(&b, &w).unwrap(), wit);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn i1_formulations_agree(ranks in prop::collection::vec(-10i64..=10, 1..8), k in 1i64..4) {
        let z = parse_group("Z").unwrap();
        let items: Vec<String> = ranks.iter().map(|x| x.to_string()).collect();
        let a = ElementSet::parse(&z, &items)?;
        let bitems: Vec<String> = (-k..=k).map(|x| x.to_string()).collect();
        let b = ElementSet::parse(&z, &bitems)?;
        let r = verify_parts(&a, &b, &Window::new(&z, 10, 1)?)?;
        prop_assert!(r.i1_agree());
    }

    #[test]
    fn sampled_sweeps_never_contradict_the_solver(seed in any::<u64>()) {
        let g = parse_group("Z_2^5").unwrap();
        let r = exhaustive_no_index_check(&g, 4, SweepMode::Sampled { samples: 30, seed })?;
        prop_assert_eq!(r.disagreements, 0);
        prop_assert_eq!(r.extension_failures, 0);
        prop_assert_eq!(r.violations, 0);
    }
}

mod common;

use mvpa_pdl::io::{
    parse_automaton, parse_grid, parse_kripke, parse_tiling, write_automaton, write_grid, write_kripke, write_tiling,
};
use mvpa_pdl::tiling::{SolutionGrid, TilingSystem};
use mvpa_pdl::Error;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn automata_survive_a_round_trip(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let alphabet = common::random_alphabet(&mut rng);
        let m = common::random_mvpa(&mut rng, &alphabet);
        let text = write_automaton(&m);
        let back = parse_automaton(&text).unwrap();
        prop_assert_eq!(&back, &m);
        prop_assert_eq!(write_automaton(&back), text);
    }

    #[test]
    fn kripke_structures_survive_a_round_trip(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let k = common::random_kripke(&mut rng, 6, &["a", "b"], &["p", "q"]);
        let (back, root) = parse_kripke(&write_kripke(&k, Some("w0"))).unwrap();
        prop_assert_eq!(root.as_deref(), Some("w0"));
        prop_assert_eq!(back.worlds(), k.worlds());
        prop_assert_eq!(back.letters(), k.letters());
        prop_assert_eq!(back.edges(), k.edges());
        for w in 0..k.world_count() {
            prop_assert_eq!(back.props(w), k.props(w));
        }
    }
}

#[test]
fn tiling_and_grid_round_trip() {
    let t = TilingSystem::new(["s", "t0"], [("s", "t0"), ("t0", "s")], [("t0", "t0")], "t0").unwrap();
    assert_eq!(parse_tiling(&write_tiling(&t)).unwrap(), t);
    let g = SolutionGrid::uniform(3, "s").with_cell(0, 2, "t0").unwrap();
    assert_eq!(parse_grid(&write_grid(&g)).unwrap(), g);
}

#[test]
fn malformed_files_name_the_file_kind_and_the_field() {
    match parse_tiling(r#"{"tiles": ["a"], "h": [], "v": []}"#) {
        Err(Error::Format { field, message }) => {
            assert_eq!(field, "tiling");
            assert!(message.contains("`t0`"), "{message}");
        }
        other => panic!("expected a format error, got {other:?}"),
    }
    assert!(parse_tiling(r#"{"tiles": ["a"], "h": [], "v": [], "t0": "a", "extra": 1}"#).is_err());
    assert!(parse_grid(r#"{"R": 1, "cells": [{"n": 0, "m": 0, "tile": "a"}]}"#).is_err());
    assert!(parse_kripke("not json").is_err());
}
